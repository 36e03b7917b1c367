//! Distance-balance partitions `W_xy`, `W_yx`, `xWy` and the
//! ℓ-distance-balanced decision procedure.

use std::collections::HashMap;
use std::rc::Rc;
use std::time::Instant;

use serde::ser::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{vertex_name, GpParams, Graph};

/// Where a vertex falls relative to an ordered pair `(x, y)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    CloserFirst,
    CloserSecond,
    Tie,
}

impl Side {
    #[inline]
    pub fn of(dist_x: u32, dist_y: u32) -> Self {
        match dist_x.cmp(&dist_y) {
            std::cmp::Ordering::Less => Side::CloserFirst,
            std::cmp::Ordering::Greater => Side::CloserSecond,
            std::cmp::Ordering::Equal => Side::Tie,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PartitionSets {
    pub closer_x: Vec<usize>,
    pub closer_y: Vec<usize>,
    pub tie: Vec<usize>,
}

/// Sizes of `W_xy` (`closer_x`), `W_yx` (`closer_y`) and `xWy` (`tie`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalancePartition {
    pub x: usize,
    pub y: usize,
    pub closer_x: usize,
    pub closer_y: usize,
    pub tie: usize,
    pub sets: Option<PartitionSets>,
}

impl BalancePartition {
    fn from_rows(x: usize, y: usize, dx: &[u32], dy: &[u32], with_sets: bool) -> Self {
        let (closer_x, closer_y, tie) = count_sides(dx, dy);
        let sets = with_sets.then(|| {
            let mut sets = PartitionSets::default();
            for (v, (&a, &b)) in dx.iter().zip(dy).enumerate() {
                match Side::of(a, b) {
                    Side::CloserFirst => sets.closer_x.push(v),
                    Side::CloserSecond => sets.closer_y.push(v),
                    Side::Tie => sets.tie.push(v),
                }
            }
            sets
        });
        Self { x, y, closer_x, closer_y, tie, sets }
    }

    pub fn vertex_count(&self) -> usize {
        self.closer_x + self.closer_y + self.tie
    }

    pub fn is_balanced(&self) -> bool {
        self.closer_x == self.closer_y
    }

    /// `|W_xy| - |W_yx|`.
    pub fn delta(&self) -> i64 {
        self.closer_x as i64 - self.closer_y as i64
    }

    /// `2|W_xy| + |xWy|`, the left side of the imbalance criterion.
    pub fn lemma_sum(&self) -> usize {
        2 * self.closer_x + self.tie
    }

    /// `2|W_xy| + |xWy| > |V|`.
    pub fn lemma_holds(&self) -> bool {
        self.lemma_sum() > self.vertex_count()
    }

    /// The partition of the reversed pair `(y, x)`.
    pub fn swapped(&self) -> Self {
        Self {
            x: self.y,
            y: self.x,
            closer_x: self.closer_y,
            closer_y: self.closer_x,
            tie: self.tie,
            sets: self.sets.as_ref().map(|s| PartitionSets {
                closer_x: s.closer_y.clone(),
                closer_y: s.closer_x.clone(),
                tie: s.tie.clone(),
            }),
        }
    }
}

#[inline]
fn count_sides(dx: &[u32], dy: &[u32]) -> (usize, usize, usize) {
    let mut closer_x = 0usize;
    let mut closer_y = 0usize;
    for (&a, &b) in dx.iter().zip(dy) {
        closer_x += (a < b) as usize;
        closer_y += (a > b) as usize;
    }
    (closer_x, closer_y, dx.len() - closer_x - closer_y)
}

fn check_pair(g: &Graph, x: usize, y: usize) -> Result<()> {
    g.check_vertex(x)?;
    g.check_vertex(y)?;
    if x == y {
        return Err(Error::IdenticalVertices);
    }
    Ok(())
}

/// Counts only. Two BFS runs.
pub fn partition(g: &Graph, x: usize, y: usize) -> Result<BalancePartition> {
    check_pair(g, x, y)?;
    let dx = g.bfs(x)?;
    let dy = g.bfs(y)?;
    Ok(BalancePartition::from_rows(x, y, &dx.dist, &dy.dist, false))
}

/// Counts plus the three vertex sets, each sorted ascending.
pub fn partition_with_sets(g: &Graph, x: usize, y: usize) -> Result<BalancePartition> {
    check_pair(g, x, y)?;
    let dx = g.bfs(x)?;
    let dy = g.bfs(y)?;
    Ok(BalancePartition::from_rows(x, y, &dx.dist, &dy.dist, true))
}

/// True iff `2|W_xy| + |xWy| > |V|`, which forces `|W_xy| > |W_yx|`.
pub fn lemma_imbalance(g: &Graph, x: usize, y: usize) -> Result<bool> {
    Ok(partition(g, x, y)?.lemma_holds())
}

/// An unbalanced pair with `x < y` in flat-id order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Witness {
    pub x: usize,
    pub y: usize,
    pub closer_x: usize,
    pub closer_y: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub gp: Option<GpParams>,
    pub ell: u32,
    pub balanced: bool,
    /// Smallest unbalanced pair under `(kind, index)` order of `x` then `y`.
    pub witness: Option<Witness>,
    /// Pairs examined; the search stops at the first witness.
    pub pairs_checked: u64,
}

#[derive(serde::Serialize)]
pub(crate) struct WitnessJson {
    pub x: String,
    pub y: String,
    pub closer_x: usize,
    pub closer_y: usize,
}

impl WitnessJson {
    pub(crate) fn new(label: Option<GpParams>, w: &Witness) -> Self {
        Self {
            x: vertex_name(label, w.x),
            y: vertex_name(label, w.y),
            closer_x: w.closer_x,
            closer_y: w.closer_y,
        }
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(serde::Serialize)]
        struct Repr {
            n: Option<usize>,
            k: Option<usize>,
            ell: u32,
            balanced: bool,
            witness: Option<WitnessJson>,
            pairs_checked: u64,
        }
        Repr {
            n: self.gp.map(|p| p.n),
            k: self.gp.map(|p| p.k),
            ell: self.ell,
            balanced: self.balanced,
            witness: self.witness.as_ref().map(|w| WitnessJson::new(self.gp, w)),
            pairs_checked: self.pairs_checked,
        }
        .serialize(serializer)
    }
}

/// Rows cached per checker: at most this many distance entries in total.
const CACHE_ENTRIES: usize = 1 << 23;

/// Decides ℓ-distance-balancedness for one graph, reusing BFS rows across
/// pairs and across values of ℓ.
pub struct BalanceChecker<'g> {
    graph: &'g Graph,
    rows: HashMap<usize, Rc<[u32]>>,
    max_rows: usize,
    dist: Vec<u32>,
    queue: Vec<u32>,
    diameter: Option<u32>,
}

impl<'g> BalanceChecker<'g> {
    pub fn new(graph: &'g Graph) -> Self {
        let max_rows = (CACHE_ENTRIES / graph.vertex_count()).max(64);
        Self {
            graph,
            rows: HashMap::new(),
            max_rows,
            dist: Vec::new(),
            queue: Vec::new(),
            diameter: None,
        }
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn row(&mut self, source: usize) -> Rc<[u32]> {
        if let Some(row) = self.rows.get(&source) {
            return Rc::clone(row);
        }
        self.graph.bfs_into(source, &mut self.dist, &mut self.queue);
        let row: Rc<[u32]> = Rc::from(self.dist.as_slice());
        if self.rows.len() < self.max_rows {
            self.rows.insert(source, Rc::clone(&row));
        }
        row
    }

    pub fn diameter(&mut self) -> Result<u32> {
        if let Some(d) = self.diameter {
            return Ok(d);
        }
        let sources: Vec<usize> = match self.graph.label() {
            Some(p) => vec![p.u(0), p.v(0)],
            None => (0..self.graph.vertex_count()).collect(),
        };
        let mut diameter = 0;
        for s in sources {
            let row = self.row(s);
            let ecc = row.iter().copied().max().unwrap_or(0);
            if ecc == crate::graph::UNREACHABLE {
                return Err(Error::Disconnected);
            }
            diameter = diameter.max(ecc);
        }
        self.diameter = Some(diameter);
        Ok(diameter)
    }

    pub fn partition(&mut self, x: usize, y: usize, with_sets: bool) -> Result<BalancePartition> {
        check_pair(self.graph, x, y)?;
        let dx = self.row(x);
        let dy = self.row(y);
        Ok(BalancePartition::from_rows(x, y, &dx, &dy, with_sets))
    }

    pub fn check(&mut self, ell: u32, use_symmetry: bool) -> Result<Verdict> {
        self.check_until(ell, use_symmetry, None)
    }

    /// Like [`check`](Self::check), failing with [`Error::Timeout`] once
    /// `deadline` passes. The clock is polled between pairs.
    pub fn check_until(
        &mut self,
        ell: u32,
        use_symmetry: bool,
        deadline: Option<Instant>,
    ) -> Result<Verdict> {
        let gp = self.graph.label();
        if use_symmetry && gp.is_none() {
            return Err(Error::SymmetryUnavailable);
        }
        let diameter = self.diameter()?;
        if ell < 1 || ell > diameter {
            return Err(Error::EllOutOfRange { ell, diameter });
        }
        // Under rotation every pair maps to one containing u_0 or v_0. Pairs
        // (v_0, u_j) are rotations of (u_0, v_{-j}), so v_0 is paired with
        // inner vertices only, which are exactly the ids above v_0.
        let sources: Vec<usize> = match (use_symmetry, gp) {
            (true, Some(p)) => vec![p.u(0), p.v(0)],
            _ => (0..self.graph.vertex_count()).collect(),
        };
        let mut pairs_checked = 0u64;
        let mut partners = Vec::new();
        for x in sources {
            let dx = self.row(x);
            partners.clear();
            partners.extend(
                dx.iter()
                    .enumerate()
                    .skip(x + 1)
                    .filter(|&(_, &d)| d == ell)
                    .map(|(y, _)| y),
            );
            for &y in &partners {
                if let Some(deadline) = deadline {
                    if Instant::now() >= deadline {
                        return Err(Error::Timeout);
                    }
                }
                let dy = self.row(y);
                let (closer_x, closer_y, _) = count_sides(&dx, &dy);
                pairs_checked += 1;
                if closer_x != closer_y {
                    return Ok(Verdict {
                        gp,
                        ell,
                        balanced: false,
                        witness: Some(Witness { x, y, closer_x, closer_y }),
                        pairs_checked,
                    });
                }
            }
        }
        Ok(Verdict { gp, ell, balanced: true, witness: None, pairs_checked })
    }
}

/// Checks every pair at distance exactly `ell`, or with `use_symmetry` only the
/// rotation representatives of a GP graph.
pub fn is_l_distance_balanced(g: &Graph, ell: u32, use_symmetry: bool) -> Result<Verdict> {
    BalanceChecker::new(g).check(ell, use_symmetry)
}
