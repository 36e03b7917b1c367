//! Parallel parameter sweeps comparing BFS verdicts with closed-form predictions.
//!
//! The unit of work is one `(n, k)` graph; every requested ℓ for that graph
//! shares the same BFS rows. Workers pull task indices from a shared counter
//! and the collector hands records to the sink in `(k, n, ell)` order as soon
//! as the next task in sequence is complete.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;
use std::thread;
use std::time::{Duration, Instant};

use serde::ser::{Serialize, Serializer};

use crate::balance::{BalanceChecker, Verdict, Witness, WitnessJson};
use crate::error::{Error, Result};
use crate::graph::{GpParams, Graph};
use crate::oracle::{self, BoundReport, Prediction, Status};

/// Inclusive integer interval, written `lo..hi` or a single value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntRange {
    pub lo: i64,
    pub hi: i64,
}

impl IntRange {
    pub fn new(lo: i64, hi: i64) -> Self {
        Self { lo, hi }
    }

    pub fn single(v: i64) -> Self {
        Self { lo: v, hi: v }
    }

    pub fn iter(self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }
}

impl FromStr for IntRange {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidRequest(format!("bad range {s:?}, expected lo..hi"));
        let (lo, hi) = match s.split_once("..") {
            Some((lo, hi)) => (lo.trim(), hi.trim().trim_start_matches('=')),
            None => (s.trim(), s.trim()),
        };
        let lo: i64 = lo.parse().map_err(|_| bad())?;
        let hi: i64 = hi.parse().map_err(|_| bad())?;
        if lo > hi {
            return Err(Error::InvalidRequest(format!("empty range {s:?}")));
        }
        Ok(Self { lo, hi })
    }
}

impl fmt::Display for IntRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.lo, self.hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OffsetBase {
    /// `k(k+2)`
    BalancedOrder,
    /// The conjectured threshold `n_k`.
    ConjecturedNk,
}

impl OffsetBase {
    fn base(self, k: usize) -> Result<usize> {
        match self {
            OffsetBase::BalancedOrder => Ok(k * (k + 2)),
            OffsetBase::ConjecturedNk => oracle::conjectured_nk(k)
                .map_err(|e| Error::InvalidRequest(format!("offset from n_k: {e}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NRule {
    Explicit(IntRange),
    Offset { base: OffsetBase, offsets: IntRange },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EllSet {
    List(Vec<u32>),
    /// Every ℓ from 1 to the diameter of each graph.
    AllUpToDiameter,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanRequest {
    pub k_range: IntRange,
    pub n_rule: NRule,
    pub ell_set: EllSet,
    pub symmetry: bool,
    pub workers: usize,
    /// Per-record limit; an exhausted budget yields [`BfsStatus::Timeout`].
    pub time_budget: Option<Duration>,
    /// When false `elapsed` is zero so reports are byte-identical across runs.
    pub record_timing: bool,
    /// Attach closed-form bound checks for ℓ = 1 and ℓ = 2.
    pub bounds: bool,
}

impl ScanRequest {
    pub fn new(k_range: IntRange, n_rule: NRule, ell_set: EllSet) -> Self {
        Self {
            k_range,
            n_rule,
            ell_set,
            symmetry: true,
            workers: default_workers(),
            time_budget: None,
            record_timing: false,
            bounds: true,
        }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn with_symmetry(mut self, symmetry: bool) -> Self {
        self.symmetry = symmetry;
        self
    }

    /// The valid `(n, k)` pairs covered by the request, sorted by `(k, n)`.
    pub fn tasks(&self) -> Result<Vec<GpParams>> {
        if self.workers == 0 {
            return Err(Error::InvalidRequest("workers must be positive".into()));
        }
        if self.k_range.lo > self.k_range.hi {
            return Err(Error::InvalidRequest(format!("empty k range {}", self.k_range)));
        }
        if let EllSet::List(ells) = &self.ell_set {
            if ells.is_empty() || ells.contains(&0) {
                return Err(Error::InvalidRequest("ell values must be a non-empty list of positive integers".into()));
            }
        }
        let mut tasks = Vec::new();
        for k in self.k_range.iter().filter(|&k| k >= 1) {
            let k = k as usize;
            let ns = match self.n_rule {
                NRule::Explicit(range) => range,
                NRule::Offset { base, offsets } => {
                    let base = base.base(k)? as i64;
                    IntRange::new(base + offsets.lo, base + offsets.hi)
                }
            };
            if ns.lo > ns.hi {
                return Err(Error::InvalidRequest(format!("empty n range {ns}")));
            }
            tasks.extend(
                ns.iter()
                    .filter(|&n| n >= 3)
                    .filter_map(|n| GpParams::new(n as usize, k).ok()),
            );
        }
        Ok(tasks)
    }
}

pub fn default_workers() -> usize {
    thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum BfsStatus {
    Balanced,
    Unbalanced,
    Timeout,
    Error,
}

impl fmt::Display for BfsStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BfsStatus::Balanced => "Balanced",
            BfsStatus::Unbalanced => "Unbalanced",
            BfsStatus::Timeout => "Timeout",
            BfsStatus::Error => "Error",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Agreement {
    Match,
    Mismatch,
    NotPredicted,
    /// No BFS verdict (timeout or error), so nothing to compare.
    Inconclusive,
}

impl Agreement {
    pub fn compare(predicted: Status, observed: BfsStatus) -> Self {
        match (predicted, observed) {
            (_, BfsStatus::Timeout | BfsStatus::Error) => Agreement::Inconclusive,
            (Status::Unknown, _) => Agreement::NotPredicted,
            (Status::Balanced, BfsStatus::Balanced) | (Status::Unbalanced, BfsStatus::Unbalanced) => {
                Agreement::Match
            }
            _ => Agreement::Mismatch,
        }
    }
}

impl fmt::Display for Agreement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Agreement::Match => "Match",
            Agreement::Mismatch => "Mismatch",
            Agreement::NotPredicted => "NotPredicted",
            Agreement::Inconclusive => "Inconclusive",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanRecord {
    pub n: usize,
    pub k: usize,
    pub ell: u32,
    pub bfs_status: BfsStatus,
    pub witness: Option<Witness>,
    pub pairs_checked: u64,
    pub prediction: Prediction,
    pub agreement: Agreement,
    pub bound_reports: Vec<BoundReport>,
    pub elapsed: Duration,
    pub error: Option<String>,
}

impl ScanRecord {
    fn params(&self) -> GpParams {
        GpParams { n: self.n, k: self.k }
    }

    pub fn witness_names(&self) -> Option<(String, String)> {
        self.witness
            .as_ref()
            .map(|w| (crate::graph::vertex_name(Some(self.params()), w.x), crate::graph::vertex_name(Some(self.params()), w.y)))
    }

    pub fn bounds_hold(&self) -> bool {
        self.bound_reports.iter().all(|b| b.holds)
    }

    pub fn csv_header() -> &'static str {
        "k,n,ell,bfs_status,predicted,agreement,witness_x,witness_y,closer_x,closer_y,elapsed_ms"
    }

    pub fn csv_row(&self) -> String {
        let (wx, wy) = self.witness_names().unwrap_or_default();
        let (cx, cy) = self
            .witness
            .map(|w| (w.closer_x.to_string(), w.closer_y.to_string()))
            .unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.k,
            self.n,
            self.ell,
            self.bfs_status,
            self.prediction.status,
            self.agreement,
            wx,
            wy,
            cx,
            cy,
            self.elapsed.as_millis()
        )
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("records serialize")
    }
}

impl Serialize for ScanRecord {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(serde::Serialize)]
        struct PredictionRepr<'a> {
            status: Status,
            source: &'a str,
        }
        #[derive(serde::Serialize)]
        struct Repr<'a> {
            n: usize,
            k: usize,
            ell: u32,
            bfs_status: BfsStatus,
            witness: Option<WitnessJson>,
            pairs_checked: u64,
            prediction: PredictionRepr<'a>,
            agreement: Agreement,
            bound_reports: &'a [BoundReport],
            elapsed_ms: u128,
            #[serde(skip_serializing_if = "Option::is_none")]
            error: Option<&'a str>,
        }
        let label = Some(self.params());
        Repr {
            n: self.n,
            k: self.k,
            ell: self.ell,
            bfs_status: self.bfs_status,
            witness: self.witness.as_ref().map(|w| WitnessJson::new(label, w)),
            pairs_checked: self.pairs_checked,
            prediction: PredictionRepr { status: self.prediction.status, source: self.prediction.source },
            agreement: self.agreement,
            bound_reports: &self.bound_reports,
            elapsed_ms: self.elapsed.as_millis(),
            error: self.error.as_deref(),
        }
        .serialize(serializer)
    }
}

fn prediction_for(p: GpParams, ell: u32) -> Prediction {
    oracle::predict(p.n, p.k, ell).unwrap_or(Prediction {
        n: p.n,
        k: p.k,
        ell,
        status: Status::Unknown,
        source: "none",
    })
}

fn evaluate(p: GpParams, req: &ScanRequest) -> Vec<ScanRecord> {
    let failed = |ell: u32, err: &Error| ScanRecord {
        n: p.n,
        k: p.k,
        ell,
        bfs_status: if *err == Error::Timeout { BfsStatus::Timeout } else { BfsStatus::Error },
        witness: None,
        pairs_checked: 0,
        prediction: prediction_for(p, ell),
        agreement: Agreement::Inconclusive,
        bound_reports: Vec::new(),
        elapsed: Duration::ZERO,
        error: Some(err.to_string()),
    };
    let graph = match Graph::generalized_petersen(p.n, p.k) {
        Ok(g) => g,
        Err(e) => {
            let ells = match &req.ell_set {
                EllSet::List(l) => l.clone(),
                EllSet::AllUpToDiameter => vec![1],
            };
            return ells.iter().map(|&ell| failed(ell, &e)).collect();
        }
    };
    let mut checker = BalanceChecker::new(&graph);
    let ells: Vec<u32> = match &req.ell_set {
        EllSet::List(l) => l.clone(),
        EllSet::AllUpToDiameter => match checker.diameter() {
            Ok(d) => (1..=d).collect(),
            Err(e) => return vec![failed(1, &e)],
        },
    };
    let mut records = Vec::with_capacity(ells.len());
    for ell in ells {
        let start = Instant::now();
        let deadline = req.time_budget.map(|b| start + b);
        let outcome = checker.check_until(ell, req.symmetry, deadline).and_then(|verdict| {
            let bounds = if !req.bounds {
                Vec::new()
            } else if ell == 1 {
                oracle::onedb_bound_reports(&mut checker)?
            } else if ell == 2 {
                oracle::twodb_bound_reports(&mut checker)?
            } else {
                Vec::new()
            };
            Ok((verdict, bounds))
        });
        let elapsed = if req.record_timing { start.elapsed() } else { Duration::ZERO };
        let record = match outcome {
            Ok((verdict, bound_reports)) => {
                let prediction = prediction_for(p, ell);
                let bfs_status = if verdict.balanced { BfsStatus::Balanced } else { BfsStatus::Unbalanced };
                ScanRecord {
                    n: p.n,
                    k: p.k,
                    ell,
                    bfs_status,
                    witness: verdict.witness,
                    pairs_checked: verdict.pairs_checked,
                    agreement: Agreement::compare(prediction.status, bfs_status),
                    prediction,
                    bound_reports,
                    elapsed,
                    error: None,
                }
            }
            Err(e) => ScanRecord { elapsed, ..failed(ell, &e) },
        };
        records.push(record);
    }
    records
}

#[derive(Debug, Clone, Default, PartialEq, Eq, serde::Serialize)]
pub struct ScanSummary {
    pub graphs: usize,
    pub records: usize,
    pub matches: usize,
    pub mismatches: usize,
    pub not_predicted: usize,
    pub inconclusive: usize,
    pub bound_reports: usize,
    pub bound_failures: usize,
}

impl ScanSummary {
    fn add(&mut self, record: &ScanRecord) {
        self.records += 1;
        match record.agreement {
            Agreement::Match => self.matches += 1,
            Agreement::Mismatch => self.mismatches += 1,
            Agreement::NotPredicted => self.not_predicted += 1,
            Agreement::Inconclusive => self.inconclusive += 1,
        }
        self.bound_reports += record.bound_reports.len();
        self.bound_failures += record.bound_reports.iter().filter(|b| !b.holds).count();
    }
}

/// Runs the sweep, handing each record to `sink` in `(k, n, ell)` order.
pub fn run_scan_with<F>(req: &ScanRequest, mut sink: F) -> Result<ScanSummary>
where
    F: FnMut(ScanRecord),
{
    let tasks = req.tasks()?;
    let mut summary = ScanSummary { graphs: tasks.len(), ..Default::default() };
    if tasks.is_empty() {
        return Ok(summary);
    }
    let workers = req.workers.min(tasks.len());
    let next = AtomicUsize::new(0);
    let (tx, rx) = mpsc::channel::<(usize, Vec<ScanRecord>)>();
    thread::scope(|scope| {
        for _ in 0..workers {
            let tx = tx.clone();
            let (next, tasks) = (&next, &tasks);
            scope.spawn(move || loop {
                let idx = next.fetch_add(1, Ordering::Relaxed);
                let Some(&p) = tasks.get(idx) else { break };
                if tx.send((idx, evaluate(p, req))).is_err() {
                    break;
                }
            });
        }
        drop(tx);
        let mut pending: BTreeMap<usize, Vec<ScanRecord>> = BTreeMap::new();
        let mut expected = 0;
        for (idx, records) in rx {
            pending.insert(idx, records);
            while let Some(records) = pending.remove(&expected) {
                for record in records {
                    summary.add(&record);
                    sink(record);
                }
                expected += 1;
            }
        }
        debug_assert!(pending.is_empty());
    });
    log::debug!("scan finished: {summary:?}");
    Ok(summary)
}

/// Runs the sweep and collects every record, sorted by `(k, n, ell)`.
pub fn run_scan(req: &ScanRequest) -> Result<Vec<ScanRecord>> {
    let mut out = Vec::new();
    run_scan_with(req, |r| out.push(r))?;
    Ok(out)
}

pub fn write_jsonl<W: Write>(records: &[ScanRecord], mut out: W) -> io::Result<()> {
    for r in records {
        writeln!(out, "{}", r.to_json_line())?;
    }
    Ok(())
}

pub fn write_csv<W: Write>(records: &[ScanRecord], mut out: W) -> io::Result<()> {
    writeln!(out, "{}", ScanRecord::csv_header())?;
    for r in records {
        writeln!(out, "{}", r.csv_row())?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct ProbeRow {
    pub ell: u32,
    pub balanced: bool,
    #[serde(skip)]
    pub witness: Option<Witness>,
    pub agreement: Agreement,
}

/// BFS verdicts for every `1 <= ell < diam` of one graph, set against the
/// conjecture that nothing above `n_k` is ℓ-distance-balanced.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct ConjectureProbe {
    pub n: usize,
    pub k: usize,
    pub diameter: u32,
    /// `None` for `k = 1`, where no threshold is conjectured.
    pub nk: Option<usize>,
    pub beyond_threshold: bool,
    pub rows: Vec<ProbeRow>,
    /// Values of ℓ where the graph is balanced although `n > n_k`.
    pub counter_signals: Vec<u32>,
}

pub fn probe_conjecture(k: usize, n: usize) -> Result<ConjectureProbe> {
    let graph = Graph::generalized_petersen(n, k)?;
    let mut checker = BalanceChecker::new(&graph);
    let diameter = checker.diameter()?;
    let nk = oracle::conjectured_nk(k).ok();
    let beyond_threshold = nk.is_some_and(|nk| n > nk);
    let mut rows = Vec::new();
    let mut counter_signals = Vec::new();
    for ell in 1..diameter {
        let Verdict { balanced, witness, .. } = checker.check(ell, true)?;
        let agreement = match (beyond_threshold, balanced) {
            (false, _) => Agreement::NotPredicted,
            (true, false) => Agreement::Match,
            (true, true) => {
                counter_signals.push(ell);
                Agreement::Mismatch
            }
        };
        rows.push(ProbeRow { ell, balanced, witness, agreement });
    }
    if !counter_signals.is_empty() {
        log::warn!("GP({n},{k}) is balanced for ell in {counter_signals:?} despite n > n_k");
    }
    Ok(ConjectureProbe { n, k, diameter, nk, beyond_threshold, rows, counter_signals })
}
