use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::time::Duration;

use dbal_core::balance::{BalanceChecker, BalancePartition};
use dbal_core::graph::{Graph, VertexId};
use dbal_core::scan::{self, EllSet, NRule, OffsetBase, ScanRecord, ScanRequest};
use dbal_core::{oracle, Error};
use serde_json::{json, Value};

use crate::args::{CheckArgs, EllArg, ExportArgs, Format, OffsetFrom, PartitionArgs, PredictArgs, ProbeArgs, ScanArgs};
use crate::output::human_line;

pub const EXIT_OK: u8 = 0;
pub const EXIT_UNBALANCED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_MISMATCH: u8 = 3;

/// A failure that ends the command with a message on stderr.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: EXIT_USAGE, message: e.to_string() }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure { code: EXIT_USAGE, message: format!("i/o error: {e}") }
    }
}

pub type Outcome = Result<u8, Failure>;

fn open_output(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn csv_field(value: &Value) -> String {
    match value {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Writes flat JSON objects as CSV rows with the given columns.
fn write_csv_rows(out: &mut dyn Write, columns: &[&str], rows: &[Value]) -> io::Result<()> {
    writeln!(out, "{}", columns.join(","))?;
    for row in rows {
        let fields: Vec<String> = columns.iter().map(|c| csv_field(&row[*c])).collect();
        writeln!(out, "{}", fields.join(","))?;
    }
    Ok(())
}

fn to_json<T: serde::Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("report types serialize")
}

fn write_rows(out: &mut dyn Write, format: Format, columns: &[&str], rows: &[Value]) -> io::Result<()> {
    match format {
        Format::Json => {
            for row in rows {
                writeln!(out, "{row}")?;
            }
        }
        Format::Human => {
            for row in rows {
                writeln!(out, "{}", human_line(row))?;
            }
        }
        Format::Csv => write_csv_rows(out, columns, rows)?,
    }
    out.flush()
}

/// Lifts the nested witness object into `witness_*` columns for CSV.
fn with_witness_columns(mut row: Value) -> Value {
    if let Some(w) = row["witness"].as_object().cloned() {
        for (key, value) in w {
            row[format!("witness_{key}")] = value;
        }
    }
    row
}

pub fn check(args: &CheckArgs) -> Outcome {
    let graph = match &args.edges {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure { code: EXIT_USAGE, message: format!("cannot read {}: {e}", path.display()) })?;
            Graph::parse_edge_list(&text)?
        }
        None => Graph::generalized_petersen(args.n.expect("required by clap"), args.k.expect("required by clap"))?,
    };
    let use_symmetry = !args.no_symmetry && graph.label().is_some();
    if !args.no_symmetry && graph.label().is_none() {
        log::info!("graph has no GP label; checking every pair");
    }
    let mut checker = BalanceChecker::new(&graph);
    let diameter = checker.diameter()?;
    let ells = match &args.ells {
        EllArg::List(ells) => ells.clone(),
        EllArg::All => (1..=diameter).collect(),
    };
    // Validate every ℓ before computing any verdict.
    if let Some(&ell) = ells.iter().find(|&&ell| ell > diameter) {
        return Err(Error::EllOutOfRange { ell, diameter }.into());
    }
    let mut verdicts = Vec::with_capacity(ells.len());
    for ell in ells {
        log::info!("checking ell={ell}");
        verdicts.push(checker.check(ell, use_symmetry)?);
    }
    let rows: Vec<Value> = match args.format {
        Format::Csv => verdicts.iter().map(|v| with_witness_columns(to_json(v))).collect(),
        _ => verdicts.iter().map(to_json).collect(),
    };
    let columns = ["n", "k", "ell", "balanced", "witness_x", "witness_y", "witness_closer_x", "witness_closer_y", "pairs_checked"];
    write_rows(&mut *open_output(None)?, args.format, &columns, &rows)?;
    Ok(if verdicts.iter().all(|v| v.balanced) { EXIT_OK } else { EXIT_UNBALANCED })
}

fn scan_request(args: &ScanArgs) -> ScanRequest {
    let n_rule = match (args.n, args.n_offset) {
        (Some(range), _) => NRule::Explicit(range),
        (None, Some(offsets)) => NRule::Offset {
            base: match args.offset_from {
                OffsetFrom::Balanced => OffsetBase::BalancedOrder,
                OffsetFrom::Nk => OffsetBase::ConjecturedNk,
            },
            offsets,
        },
        (None, None) => unreachable!("clap requires --n or --n-offset"),
    };
    let ell_set = match &args.ells {
        EllArg::List(ells) => EllSet::List(ells.clone()),
        EllArg::All => EllSet::AllUpToDiameter,
    };
    let mut req = ScanRequest::new(args.k, n_rule, ell_set).with_symmetry(!args.no_symmetry);
    if let Some(workers) = args.workers {
        req = req.with_workers(workers as usize);
    }
    req.time_budget = args.timeout_ms.map(Duration::from_millis);
    req.record_timing = args.timing;
    req.bounds = !args.no_bounds;
    req
}

pub fn scan(args: &ScanArgs) -> Outcome {
    let req = scan_request(args);
    // Reject bad ranges before creating the output file.
    let graphs = req.tasks()?.len();
    log::info!("scanning {graphs} graphs with {} workers", req.workers);
    let mut out = open_output(args.output.as_deref())?;
    if args.format == Format::Csv {
        writeln!(out, "{}", ScanRecord::csv_header())?;
    }
    let mut write_error: Option<io::Error> = None;
    let summary = scan::run_scan_with(&req, |record| {
        if write_error.is_some() {
            return;
        }
        let line = match args.format {
            Format::Json => record.to_json_line(),
            Format::Csv => record.csv_row(),
            Format::Human => human_line(&to_json(&record)),
        };
        if let Err(e) = writeln!(out, "{line}") {
            write_error = Some(e);
        }
    })?;
    if let Some(e) = write_error {
        return Err(e.into());
    }
    let summary_json = to_json(&summary);
    if args.format == Format::Human {
        writeln!(out, "summary {}", human_line(&summary_json))?;
    }
    out.flush()?;
    log::info!("scan summary: {}", human_line(&summary_json));
    if summary.bound_failures > 0 {
        log::warn!("{} closed-form bound checks failed", summary.bound_failures);
    }
    Ok(if summary.mismatches > 0 { EXIT_MISMATCH } else { EXIT_OK })
}

fn partition_json(graph: &Graph, part: &BalancePartition) -> Value {
    let p = graph.label().expect("GP graph");
    let names = |vs: &[usize]| vs.iter().map(|&v| graph.vertex_name(v)).collect::<Vec<_>>();
    let mut value = json!({
        "n": p.n,
        "k": p.k,
        "x": graph.vertex_name(part.x),
        "y": graph.vertex_name(part.y),
        "closer_x": part.closer_x,
        "closer_y": part.closer_y,
        "tie": part.tie,
        "delta": part.delta(),
        "balanced": part.is_balanced(),
        "lemma_holds": part.lemma_holds(),
    });
    if let Some(sets) = &part.sets {
        value["sets"] = json!({
            "closer_x": names(&sets.closer_x),
            "closer_y": names(&sets.closer_y),
            "tie": names(&sets.tie),
        });
    }
    value
}

pub fn partition(args: &PartitionArgs) -> Outcome {
    let graph = Graph::generalized_petersen(args.gp.n, args.gp.k)?;
    let x = graph.vertex(VertexId::parse(&args.x, args.gp.n)?)?;
    let y = graph.vertex(VertexId::parse(&args.y, args.gp.n)?)?;
    let part = BalanceChecker::new(&graph).partition(x, y, args.sets)?;
    let mut row = partition_json(&graph, &part);
    let mut columns = vec!["n", "k", "x", "y", "closer_x", "closer_y", "tie", "delta", "balanced", "lemma_holds"];
    if args.format == Format::Csv {
        if let Some(sets) = row.get("sets").cloned() {
            for key in ["closer_x", "closer_y", "tie"] {
                let joined: Vec<String> = sets[key].as_array().unwrap().iter().map(csv_field).collect();
                row[format!("{key}_set")] = Value::String(joined.join(" "));
            }
            columns.extend(["closer_x_set", "closer_y_set", "tie_set"]);
        }
    }
    write_rows(&mut *open_output(None)?, args.format, &columns, &[row])?;
    Ok(EXIT_OK)
}

pub fn predict(args: &PredictArgs) -> Outcome {
    let prediction = oracle::predict(args.gp.n, args.gp.k, args.ell)?;
    let row = to_json(&prediction);
    write_rows(&mut *open_output(None)?, args.format, &["n", "k", "ell", "status", "source"], &[row])?;
    Ok(EXIT_OK)
}

pub fn export(args: &ExportArgs) -> Outcome {
    let graph = Graph::generalized_petersen(args.gp.n, args.gp.k)?;
    let mut out = open_output(args.path.as_deref().or(args.output.as_deref()))?;
    graph.write_edge_list(&mut out)?;
    out.flush()?;
    Ok(EXIT_OK)
}

pub fn probe(args: &ProbeArgs) -> Outcome {
    let probe = scan::probe_conjecture(args.gp.k, args.gp.n)?;
    let graph = Graph::generalized_petersen(args.gp.n, args.gp.k)?;
    let rows: Vec<Value> = probe
        .rows
        .iter()
        .map(|r| {
            let witness = r.witness.map(|w| {
                json!({
                    "x": graph.vertex_name(w.x),
                    "y": graph.vertex_name(w.y),
                    "closer_x": w.closer_x,
                    "closer_y": w.closer_y,
                })
            });
            let row = json!({
                "n": probe.n,
                "k": probe.k,
                "diameter": probe.diameter,
                "nk": probe.nk,
                "beyond_threshold": probe.beyond_threshold,
                "ell": r.ell,
                "balanced": r.balanced,
                "agreement": r.agreement,
                "witness": witness,
            });
            if args.format == Format::Csv { with_witness_columns(row) } else { row }
        })
        .collect();
    let columns = ["n", "k", "diameter", "nk", "beyond_threshold", "ell", "balanced", "agreement", "witness_x", "witness_y", "witness_closer_x", "witness_closer_y"];
    write_rows(&mut *open_output(None)?, args.format, &columns, &rows)?;
    Ok(if probe.counter_signals.is_empty() { EXIT_OK } else { EXIT_MISMATCH })
}
