//! Closed-form counts, lower bounds and threshold predictions for `GP(n,k)`,
//! each checkable against BFS ground truth.
//!
//! Thresholds with fractional coefficients are compared after clearing
//! denominators, e.g. `n > 5k²/4 + 2k` is evaluated as `4n > 5k² + 8k`.
//! Bound values are exact rationals.

use std::fmt;

use num_rational::Ratio;
use serde::ser::{Serialize, Serializer};

use crate::balance::{BalanceChecker, BalancePartition, Side};
use crate::error::{Error, Result};
use crate::graph::{GpParams, VertexId, VertexKind};

pub type Rational = Ratio<i64>;

fn r(num: i64, den: i64) -> Rational {
    Rational::new(num, den)
}

fn int(v: usize) -> Rational {
    Rational::from_integer(v as i64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Status {
    Balanced,
    Unbalanced,
    Unknown,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Balanced => "Balanced",
            Status::Unbalanced => "Unbalanced",
            Status::Unknown => "Unknown",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Prediction {
    pub n: usize,
    pub k: usize,
    pub ell: u32,
    pub status: Status,
    /// Clause tag of the result that produced `status`, `"none"` when unknown.
    pub source: &'static str,
}

/// `n > k(k+2)`.
pub fn above_onedb_threshold(n: usize, k: usize) -> bool {
    n > k * (k + 2)
}

/// `n > 5k²/4 + 2k`, i.e. `4n > 5k² + 8k`.
pub fn above_twodb_even_threshold(n: usize, k: usize) -> bool {
    4 * n > 5 * k * k + 8 * k
}

/// `n > 7k²/4 + 3k/4`, i.e. `4n > 7k² + 3k`.
pub fn above_twodb_odd_threshold(n: usize, k: usize) -> bool {
    4 * n > 7 * k * k + 3 * k
}

/// Domain of the ℓ = 2 bounds: even `k >= 6` or odd `k >= 5` above the
/// matching threshold.
pub fn in_twodb_domain(n: usize, k: usize) -> bool {
    GpParams::is_valid(n, k)
        && if k.is_multiple_of(2) {
            k >= 6 && above_twodb_even_threshold(n, k)
        } else {
            k >= 5 && above_twodb_odd_threshold(n, k)
        }
}

fn require(cond: bool, what: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Domain(what()))
    }
}

fn require_twodb(n: usize, k: usize) -> Result<()> {
    require(in_twodb_domain(n, k), || {
        format!(
            "({n},{k}) outside the 2-distance bound domain \
             (even k >= 6 with 4n > 5k^2+8k, or odd k >= 5 with 4n > 7k^2+3k)"
        )
    })
}

/// `|W_{v0 u0}| - |W_{u0 v0}| = 2n/k - 2k - 4` for `k >= 3`, `k | n`, `n >= k(k+2)`.
pub fn delta_u0v0(n: usize, k: usize) -> Result<i64> {
    require(GpParams::is_valid(n, k) && k >= 3 && n >= k * (k + 2) && n.is_multiple_of(k), || {
        format!("delta formula needs k >= 3, k | n and n >= k(k+2); got ({n},{k})")
    })?;
    Ok(2 * (n / k) as i64 - 2 * k as i64 - 4)
}

/// Lower bound on `2|W_{v0 u0}| + |u0 W v0|` when `k >= 3`, `n > k(k+2)` and
/// `k ∤ n`: `2n + 2` for even `k`, `2n + 4` for odd `k`.
pub fn onedb_sum_bound(n: usize, k: usize) -> Result<Rational> {
    require(
        GpParams::is_valid(n, k) && k >= 3 && above_onedb_threshold(n, k) && !n.is_multiple_of(k),
        || format!("sum bound needs k >= 3, n > k(k+2) and k not dividing n; got ({n},{k})"),
    )?;
    let extra = if k.is_multiple_of(2) { 2 } else { 4 };
    Ok(int(2 * n + extra))
}

/// Lower bound on `|W_{v_{-k} u0}|`.
pub fn twodb_w_lower(n: usize, k: usize) -> Result<Rational> {
    require_twodb(n, k)?;
    let (n_, k_) = (int(n), int(k));
    let base = n_ / 2 + n_ / (k_ * 2);
    Ok(if k.is_multiple_of(2) {
        base + k_ / 2 - r(1, 2)
    } else {
        base + k_ / 4 - r(3, 4)
    })
}

/// Lower bound on the vertices of `u0 W v_{-k}` ∪ `W_{v_{-k} u0}` beyond those
/// counted by [`twodb_w_lower`].
pub fn twodb_rest_lower(n: usize, k: usize) -> Result<Rational> {
    require_twodb(n, k)?;
    let (n_, k_) = (int(n), int(k));
    Ok(if k.is_multiple_of(2) {
        n_ - k_ * r(9, 4) - 1
    } else {
        n_ - k_ * r(9, 4) + r(3, 4)
    })
}

/// Lower bound on `2|W_{v_{-k} u0}| + |u0 W v_{-k}|`. Exceeds `2n` on its domain.
pub fn twodb_sum_lower(n: usize, k: usize) -> Result<Rational> {
    require_twodb(n, k)?;
    let (n_, k_) = (int(n), int(k));
    let bound = if k.is_multiple_of(2) {
        n_ * 2 + n_ / k_ - k_ * r(5, 4) - 2
    } else {
        n_ * 2 + n_ / k_ - k_ * r(7, 4) - r(3, 4)
    };
    debug_assert!(bound > n_ * 2);
    Ok(bound)
}

/// `n_k` from the conjectured threshold table.
pub fn conjectured_nk(k: usize) -> Result<usize> {
    match k {
        0 | 1 => Err(Error::Domain(format!("n_k is defined for k >= 2, got {k}"))),
        2 => Ok(11),
        k if k % 2 == 1 => Ok((k + 1) * (k + 1)),
        k => Ok(k * (k + 2)),
    }
}

/// Prediction from the known results for `ell` in `{1, 2}`.
pub fn predict(n: usize, k: usize, ell: u32) -> Result<Prediction> {
    GpParams::new(n, k)?;
    let (status, source) = match ell {
        1 => predict_one(n, k),
        2 => predict_two(n, k),
        other => return Err(Error::EllUnsupported(other)),
    };
    Ok(Prediction { n, k, ell, status, source })
}

fn predict_one(n: usize, k: usize) -> (Status, &'static str) {
    match k {
        2 if n > 10 => (Status::Unbalanced, "Thm3(ii)-strict"),
        2 if n == 10 => (Status::Balanced, "Thm3(ii)"),
        k if k >= 3 && above_onedb_threshold(n, k) => (Status::Unbalanced, "Thm3(i)-strict"),
        k if k >= 3 && n == k * (k + 2) => (Status::Balanced, "Thm3(i)"),
        _ => (Status::Unknown, "none"),
    }
}

fn predict_two(n: usize, k: usize) -> (Status, &'static str) {
    match (n, k) {
        (10, 2) | (10, 3) | (21, 4) => (Status::Balanced, "Thm4(iii)"),
        (n, 2 | 3) if n > 10 => (Status::Unbalanced, "Thm4(iii)-strict"),
        (n, 4) if n > 21 => (Status::Unbalanced, "Thm4(iii)-strict"),
        (n, k) if k % 2 == 0 && k >= 6 && above_twodb_even_threshold(n, k) => {
            (Status::Unbalanced, "Thm4(i)")
        }
        (n, k) if k % 2 == 1 && k >= 5 && above_twodb_odd_threshold(n, k) => {
            (Status::Unbalanced, "Thm4(ii)")
        }
        _ => (Status::Unknown, "none"),
    }
}

/// The pairs whose near-ring memberships are classified in closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CanonicalPair {
    /// `(u_0, v_0)`, distance 1.
    OneDb,
    /// `(u_0, v_{-k})`, distance 2.
    TwoDb,
}

impl CanonicalPair {
    /// Flat ids `(first, second)` of the pair in `GP(n,k)`.
    pub fn vertices(self, p: GpParams) -> (usize, usize) {
        match self {
            CanonicalPair::OneDb => (p.u(0), p.v(0)),
            CanonicalPair::TwoDb => (p.u(0), p.v(-(p.k as i64))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NearRingClass {
    CloserFirst,
    CloserSecond,
    Tie,
    Unclassified,
}

impl From<Side> for NearRingClass {
    fn from(side: Side) -> Self {
        match side {
            Side::CloserFirst => NearRingClass::CloserFirst,
            Side::CloserSecond => NearRingClass::CloserSecond,
            Side::Tie => NearRingClass::Tie,
        }
    }
}

/// Closed-form membership of `v` relative to the canonical pair, for the index
/// ranges where it is known; `Unclassified` elsewhere.
pub fn classify_near_ring(
    n: usize,
    k: usize,
    pair: CanonicalPair,
    v: VertexId,
) -> Result<NearRingClass> {
    match pair {
        CanonicalPair::OneDb => {
            require(GpParams::is_valid(n, k) && k >= 3 && n >= k * (k + 2), || {
                format!("(u0,v0) classification needs k >= 3 and n >= k(k+2); got ({n},{k})")
            })?;
            Ok(classify_onedb(n, k, VertexId::new(v.kind, v.index as i64, n)))
        }
        CanonicalPair::TwoDb => {
            require_twodb(n, k)?;
            Ok(classify_twodb(n, k, VertexId::new(v.kind, v.index as i64, n)))
        }
    }
}

fn classify_onedb(n: usize, k: usize, v: VertexId) -> NearRingClass {
    use NearRingClass::*;
    let j = v.index;
    match v.kind {
        VertexKind::Outer => {
            let i = j.min(n - j);
            if k.is_multiple_of(2) {
                if i <= k / 2 {
                    CloserFirst
                } else if i == (k + 2) / 2 {
                    Tie
                } else {
                    CloserSecond
                }
            } else if i <= k.div_ceil(2) {
                CloserFirst
            } else {
                CloserSecond
            }
        }
        VertexKind::Inner if n.is_multiple_of(k) => {
            if j.is_multiple_of(k) {
                CloserSecond
            } else {
                CloserFirst
            }
        }
        VertexKind::Inner => {
            let half = n / (2 * k);
            let reach = if k.is_multiple_of(2) { half } else { half + 1 };
            let hit = (0..=reach).any(|i| {
                let step = (i * k) % n;
                j == step || j == (n - step) % n
            });
            if hit {
                CloserSecond
            } else {
                Unclassified
            }
        }
    }
}

fn classify_twodb(n: usize, k: usize, v: VertexId) -> NearRingClass {
    use NearRingClass::*;
    let j = v.index;
    // u_{-i} / v_{-i} with i = n - j.
    let back = (n - j) % n;
    let even = k.is_multiple_of(2);
    let mid = k.div_ceil(2);
    match v.kind {
        VertexKind::Outer if j <= k => {
            let near = if even { k / 2 + 1 } else { k.div_ceil(2) };
            if j <= near {
                CloserFirst
            } else {
                Tie
            }
        }
        VertexKind::Outer => match back {
            i if (1..k).contains(&i) => {
                if (even && i <= k / 2) || (!even && i < mid) {
                    CloserFirst
                } else if !even && i == mid {
                    Tie
                } else {
                    CloserSecond
                }
            }
            i if (k..2 * k).contains(&i) => CloserSecond,
            _ => Unclassified,
        },
        VertexKind::Inner => match back {
            0 => Tie,
            i if (1..k).contains(&i) => {
                if (even && i <= k / 2) || (!even && i < mid) {
                    CloserFirst
                } else {
                    Tie
                }
            }
            i if i == k => CloserSecond,
            i if (k + 1..2 * k).contains(&i) => Tie,
            _ => Unclassified,
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum BoundName {
    /// `|W_{v0 u0}| - |W_{u0 v0}|`, exact.
    DeltaU0V0,
    /// `2|W_{v0 u0}| + |tie|` lower bound.
    OneDbSum,
    /// `|W_{v_{-k} u0}|` lower bound.
    TwoDbW,
    /// `|tie(u0, v_{-k})|` lower bound.
    TwoDbRest,
    /// `2|W_{v_{-k} u0}| + |tie|` lower bound.
    TwoDbSum,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Relation {
    Equal,
    AtLeast,
}

/// `a/b`, or `a` when the denominator is 1.
fn serialize_ratio<S: Serializer>(value: &Rational, s: S) -> Result<S::Ok, S::Error> {
    value.to_string().serialize(s)
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct BoundReport {
    pub n: usize,
    pub k: usize,
    pub bound_name: BoundName,
    pub relation: Relation,
    #[serde(serialize_with = "serialize_ratio")]
    pub predicted_bound: Rational,
    pub observed: i64,
    pub holds: bool,
}

impl BoundReport {
    fn new(p: GpParams, bound_name: BoundName, relation: Relation, predicted: Rational, observed: i64) -> Self {
        let obs = Rational::from_integer(observed);
        let holds = match relation {
            Relation::Equal => obs == predicted,
            Relation::AtLeast => obs >= predicted,
        };
        Self { n: p.n, k: p.k, bound_name, relation, predicted_bound: predicted, observed, holds }
    }
}

/// Observed value of each ℓ = 1 closed form applicable to `GP(n,k)`, read off
/// the partition of `(v_0, u_0)`.
pub fn onedb_bound_reports(checker: &mut BalanceChecker<'_>) -> Result<Vec<BoundReport>> {
    let p = checker.graph().label().ok_or(Error::SymmetryUnavailable)?;
    let mut out = Vec::new();
    let mut part: Option<BalancePartition> = None;
    let mut partition = |checker: &mut BalanceChecker<'_>| -> Result<BalancePartition> {
        if part.is_none() {
            part = Some(checker.partition(p.v(0), p.u(0), false)?);
        }
        Ok(part.clone().expect("set above"))
    };
    if let Ok(delta) = delta_u0v0(p.n, p.k) {
        let part = partition(checker)?;
        out.push(BoundReport::new(
            p,
            BoundName::DeltaU0V0,
            Relation::Equal,
            Rational::from_integer(delta),
            part.delta(),
        ));
    }
    if let Ok(bound) = onedb_sum_bound(p.n, p.k) {
        let part = partition(checker)?;
        out.push(BoundReport::new(p, BoundName::OneDbSum, Relation::AtLeast, bound, part.lemma_sum() as i64));
    }
    Ok(out)
}

/// Observed value of each ℓ = 2 bound applicable to `GP(n,k)`, read off the
/// partition of `(v_{-k}, u_0)`.
pub fn twodb_bound_reports(checker: &mut BalanceChecker<'_>) -> Result<Vec<BoundReport>> {
    let p = checker.graph().label().ok_or(Error::SymmetryUnavailable)?;
    if !in_twodb_domain(p.n, p.k) {
        return Ok(Vec::new());
    }
    let part = checker.partition(p.v(-(p.k as i64)), p.u(0), false)?;
    Ok(vec![
        BoundReport::new(p, BoundName::TwoDbW, Relation::AtLeast, twodb_w_lower(p.n, p.k)?, part.closer_x as i64),
        BoundReport::new(p, BoundName::TwoDbRest, Relation::AtLeast, twodb_rest_lower(p.n, p.k)?, part.tie as i64),
        BoundReport::new(p, BoundName::TwoDbSum, Relation::AtLeast, twodb_sum_lower(p.n, p.k)?, part.lemma_sum() as i64),
    ])
}
