//! Generalized Petersen graphs and small undirected graphs in compressed
//! adjacency form, with BFS distances, diameter and edge-list I/O.
//!
//! Vertices are addressed by flat ids. For `GP(n,k)` the outer vertex `u_i`
//! has id `i` and the inner vertex `v_i` has id `n + i`, so sorting flat ids
//! sorts by `(kind, index)` with outer before inner.

use std::fmt;
use std::io::{self, Write};

use crate::error::{Error, Result};

/// Marks an unreachable vertex in a distance row.
pub const UNREACHABLE: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VertexKind {
    Outer,
    Inner,
}

/// Typed address of a vertex of `GP(n,k)`: `u_i` (outer) or `v_i` (inner).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId {
    pub kind: VertexKind,
    pub index: usize,
}

impl VertexId {
    /// Builds an id with the index reduced into `[0, n)`; negative indices wrap.
    pub fn new(kind: VertexKind, index: i64, n: usize) -> Self {
        let index = index.rem_euclid(n as i64) as usize;
        Self { kind, index }
    }

    pub fn outer(index: i64, n: usize) -> Self {
        Self::new(VertexKind::Outer, index, n)
    }

    pub fn inner(index: i64, n: usize) -> Self {
        Self::new(VertexKind::Inner, index, n)
    }

    pub fn flat(self, n: usize) -> usize {
        match self.kind {
            VertexKind::Outer => self.index,
            VertexKind::Inner => n + self.index,
        }
    }

    pub fn from_flat(flat: usize, n: usize) -> Option<Self> {
        if flat < n {
            Some(Self { kind: VertexKind::Outer, index: flat })
        } else if flat < 2 * n {
            Some(Self { kind: VertexKind::Inner, index: flat - n })
        } else {
            None
        }
    }

    /// Parses `u<int>` or `v<int>`, e.g. `u0`, `v-3`. The index is taken mod `n`.
    pub fn parse(spec: &str, n: usize) -> Result<Self> {
        let bad = || Error::VertexSpec(spec.to_string());
        let mut chars = spec.chars();
        let kind = match chars.next() {
            Some('u') => VertexKind::Outer,
            Some('v') => VertexKind::Inner,
            _ => return Err(bad()),
        };
        let rest = chars.as_str();
        let digits = rest.strip_prefix('-').unwrap_or(rest);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let index: i64 = rest.parse().map_err(|_| bad())?;
        Ok(Self::new(kind, index, n))
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            VertexKind::Outer => write!(f, "u{}", self.index),
            VertexKind::Inner => write!(f, "v{}", self.index),
        }
    }
}

/// Family parameters of a graph built as `GP(n,k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GpParams {
    pub n: usize,
    pub k: usize,
}

impl GpParams {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::Domain(format!("GP(n,k) needs n >= 3, got n = {n}")));
        }
        if k < 1 || 2 * k >= n {
            return Err(Error::Domain(format!(
                "GP(n,k) needs 1 <= k < n/2, got n = {n}, k = {k}"
            )));
        }
        Ok(Self { n, k })
    }

    pub fn is_valid(n: usize, k: usize) -> bool {
        n >= 3 && k >= 1 && 2 * k < n
    }

    pub fn u(self, i: i64) -> usize {
        VertexId::outer(i, self.n).flat(self.n)
    }

    pub fn v(self, i: i64) -> usize {
        VertexId::inner(i, self.n).flat(self.n)
    }

    /// Image of `flat` under `u_i -> u_{i+shift}`, `v_i -> v_{i+shift}`.
    pub fn rotate(self, flat: usize, shift: i64) -> usize {
        let id = VertexId::from_flat(flat, self.n).expect("vertex in range");
        VertexId::new(id.kind, id.index as i64 + shift, self.n).flat(self.n)
    }

    /// Image of `flat` under `u_i -> u_{-i}`, `v_i -> v_{-i}`.
    pub fn reflect(self, flat: usize) -> usize {
        let id = VertexId::from_flat(flat, self.n).expect("vertex in range");
        VertexId::new(id.kind, -(id.index as i64), self.n).flat(self.n)
    }
}

impl fmt::Display for GpParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GP({},{})", self.n, self.k)
    }
}

/// Immutable simple undirected graph. Neighbor lists are sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<u32>,
    targets: Vec<u32>,
    label: Option<GpParams>,
}

impl Graph {
    /// Builds a graph from an undirected edge list. Duplicate edges are merged;
    /// self-loops and out-of-range endpoints are rejected.
    pub fn from_edges<I>(vertex_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if vertex_count == 0 {
            return Err(Error::InvalidGraph("a graph needs at least one vertex".into()));
        }
        if vertex_count > u32::MAX as usize / 2 {
            return Err(Error::InvalidGraph(format!("{vertex_count} vertices is too many")));
        }
        let mut lists: Vec<Vec<u32>> = vec![Vec::new(); vertex_count];
        for (a, b) in edges {
            for v in [a, b] {
                if v >= vertex_count {
                    return Err(Error::InvalidVertex { vertex: v, vertex_count });
                }
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {a}")));
            }
            lists[a].push(b as u32);
            lists[b].push(a as u32);
        }
        let mut offsets = Vec::with_capacity(vertex_count + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        for mut list in lists {
            list.sort_unstable();
            list.dedup();
            targets.extend_from_slice(&list);
            offsets.push(targets.len() as u32);
        }
        Ok(Self { offsets, targets, label: None })
    }

    /// `GP(n,k)`: outer cycle `u_i u_{i+1}`, inner rim `v_i v_{i+k}`, spokes `u_i v_i`.
    pub fn generalized_petersen(n: usize, k: usize) -> Result<Self> {
        let params = GpParams::new(n, k)?;
        let edges = (0..n).flat_map(|i| {
            [(i, (i + 1) % n), (n + i, n + (i + k) % n), (i, n + i)]
        });
        let mut g = Self::from_edges(2 * n, edges)?;
        debug_assert_eq!(g.edge_count(), 3 * n);
        debug_assert!(g.is_connected());
        g.label = Some(params);
        Ok(g)
    }

    pub fn label(&self) -> Option<GpParams> {
        self.label
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.targets[self.offsets[v] as usize..self.offsets[v + 1] as usize]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors(v).len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.vertex_count() && self.neighbors(a).binary_search(&(b as u32)).is_ok()
    }

    /// Edges `(a, b)` with `a < b`, ascending.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.vertex_count()).flat_map(move |a| {
            self.neighbors(a)
                .iter()
                .map(|&b| b as usize)
                .filter(move |&b| b > a)
                .map(move |b| (a, b))
        })
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.vertex_count() {
            Ok(())
        } else {
            Err(Error::InvalidVertex { vertex: v, vertex_count: self.vertex_count() })
        }
    }

    /// Flat id of a typed vertex. Only meaningful for GP-labelled graphs.
    pub fn vertex(&self, id: VertexId) -> Result<usize> {
        let params = self.label.ok_or(Error::SymmetryUnavailable)?;
        if id.index >= params.n {
            return Err(Error::InvalidVertex { vertex: id.index, vertex_count: params.n });
        }
        Ok(id.flat(params.n))
    }

    /// `u3`/`v5` for GP graphs, the bare flat id otherwise.
    pub fn vertex_name(&self, v: usize) -> String {
        vertex_name(self.label, v)
    }

    /// Single-source shortest-path distances.
    pub fn bfs(&self, source: usize) -> Result<DistanceVector> {
        self.check_vertex(source)?;
        let mut dist = Vec::new();
        let mut queue = Vec::new();
        self.bfs_into(source, &mut dist, &mut queue);
        Ok(DistanceVector { source, dist })
    }

    /// BFS into caller-owned buffers. `source` must be in range.
    pub fn bfs_into(&self, source: usize, dist: &mut Vec<u32>, queue: &mut Vec<u32>) {
        dist.clear();
        dist.resize(self.vertex_count(), UNREACHABLE);
        queue.clear();
        dist[source] = 0;
        queue.push(source as u32);
        let mut head = 0;
        while head < queue.len() {
            let a = queue[head] as usize;
            head += 1;
            let next = dist[a] + 1;
            for &b in self.neighbors(a) {
                let slot = &mut dist[b as usize];
                if *slot == UNREACHABLE {
                    *slot = next;
                    queue.push(b);
                }
            }
        }
    }

    pub fn is_connected(&self) -> bool {
        self.bfs(0).map(|d| d.is_complete()).unwrap_or(false)
    }

    /// Largest eccentricity. GP graphs have two vertex orbits under rotation,
    /// so BFS from `u_0` and `v_0` suffices there.
    pub fn diameter(&self) -> Result<u32> {
        let sources: Vec<usize> = match self.label {
            Some(p) => vec![p.u(0), p.v(0)],
            None => (0..self.vertex_count()).collect(),
        };
        let mut dist = Vec::new();
        let mut queue = Vec::new();
        let mut diameter = 0;
        for s in sources {
            self.bfs_into(s, &mut dist, &mut queue);
            let ecc = dist.iter().copied().max().unwrap_or(0);
            if ecc == UNREACHABLE {
                return Err(Error::Disconnected);
            }
            diameter = diameter.max(ecc);
        }
        Ok(diameter)
    }

    /// Writes `# <header> vertices=V edges=E` followed by one `a b` line per edge.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> io::Result<()> {
        match self.label {
            Some(p) => writeln!(out, "# {p} vertices={} edges={}", self.vertex_count(), self.edge_count())?,
            None => writeln!(out, "# graph vertices={} edges={}", self.vertex_count(), self.edge_count())?,
        }
        for (a, b) in self.edges() {
            writeln!(out, "{a} {b}")?;
        }
        Ok(())
    }

    pub fn to_edge_list(&self) -> String {
        let mut buf = Vec::new();
        self.write_edge_list(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("edge list is ASCII")
    }

    /// Parses the edge-list format written by [`Graph::write_edge_list`].
    ///
    /// A `# GP(n,k)` header restores the family label after checking that the
    /// edge set really is `GP(n,k)`. Without a `vertices=` field the vertex count
    /// is one more than the largest id.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut declared_vertices = None;
        let mut declared_gp = None;
        let mut edges = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                if lineno == 0 {
                    parse_header(comment, &mut declared_vertices, &mut declared_gp)
                        .map_err(|message| Error::Parse { line: lineno + 1, message })?;
                }
                continue;
            }
            let mut fields = line.split_whitespace();
            let parse = |field: Option<&str>| -> Result<usize> {
                field.and_then(|f| f.parse().ok()).ok_or_else(|| Error::Parse {
                    line: lineno + 1,
                    message: format!("expected two vertex ids, got {line:?}"),
                })
            };
            let a = parse(fields.next())?;
            let b = parse(fields.next())?;
            if fields.next().is_some() {
                return Err(Error::Parse {
                    line: lineno + 1,
                    message: format!("trailing fields in {line:?}"),
                });
            }
            edges.push((a, b));
        }
        let vertex_count = declared_vertices
            .or_else(|| edges.iter().map(|&(a, b)| a.max(b) + 1).max())
            .ok_or_else(|| Error::Parse { line: 1, message: "empty edge list".into() })?;
        let mut graph = Self::from_edges(vertex_count, edges)?;
        if let Some((n, k)) = declared_gp {
            let reference = Self::generalized_petersen(n, k)?;
            if reference.offsets != graph.offsets || reference.targets != graph.targets {
                return Err(Error::InvalidGraph(format!(
                    "header declares GP({n},{k}) but the edges differ"
                )));
            }
            graph.label = reference.label;
        }
        Ok(graph)
    }
}

fn parse_header(
    comment: &str,
    vertices: &mut Option<usize>,
    gp: &mut Option<(usize, usize)>,
) -> std::result::Result<(), String> {
    for token in comment.split_whitespace() {
        if let Some(v) = token.strip_prefix("vertices=") {
            *vertices = Some(v.parse().map_err(|_| format!("bad vertex count {v:?}"))?);
        } else if let Some(inner) = token.strip_prefix("GP(").and_then(|t| t.strip_suffix(')')) {
            let (n, k) = inner.split_once(',').ok_or_else(|| format!("bad header {token:?}"))?;
            let n = n.trim().parse().map_err(|_| format!("bad n in {token:?}"))?;
            let k = k.trim().parse().map_err(|_| format!("bad k in {token:?}"))?;
            *gp = Some((n, k));
        }
    }
    Ok(())
}

pub(crate) fn vertex_name(label: Option<GpParams>, v: usize) -> String {
    match label.and_then(|p| VertexId::from_flat(v, p.n)) {
        Some(id) => id.to_string(),
        None => v.to_string(),
    }
}

/// Distances from one source to every vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceVector {
    pub source: usize,
    pub dist: Vec<u32>,
}

impl DistanceVector {
    pub fn get(&self, v: usize) -> u32 {
        self.dist[v]
    }

    pub fn is_complete(&self) -> bool {
        self.dist.iter().all(|&d| d != UNREACHABLE)
    }

    /// `None` when some vertex is unreachable.
    pub fn eccentricity(&self) -> Option<u32> {
        let max = self.dist.iter().copied().max().unwrap_or(0);
        (max != UNREACHABLE).then_some(max)
    }
}

pub fn gp_construct(n: usize, k: usize) -> Result<Graph> {
    Graph::generalized_petersen(n, k)
}

pub fn bfs_distances(g: &Graph, source: usize) -> Result<DistanceVector> {
    g.bfs(source)
}

pub fn diameter(g: &Graph) -> Result<u32> {
    g.diameter()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// All-pairs Floyd-Warshall, independent of the BFS path.
    fn floyd_diameter(g: &Graph) -> u32 {
        let n = g.vertex_count();
        let inf = u32::MAX / 4;
        let mut d = vec![vec![inf; n]; n];
        for (a, row) in d.iter_mut().enumerate() {
            row[a] = 0;
            for &b in g.neighbors(a) {
                row[b as usize] = 1;
            }
        }
        for m in 0..n {
            for a in 0..n {
                for b in 0..n {
                    let via = d[a][m] + d[m][b];
                    if via < d[a][b] {
                        d[a][b] = via;
                    }
                }
            }
        }
        d.iter().flatten().copied().max().unwrap()
    }

    #[test]
    fn petersen_counts() {
        let g = gp_construct(5, 2).unwrap();
        assert_eq!(g.vertex_count(), 10);
        assert_eq!(g.edge_count(), 15);
        assert!((0..10).all(|v| g.degree(v) == 3));
        let g = gp_construct(10, 2).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (20, 30));
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(gp_construct(8, 4), Err(Error::Domain(_))));
        assert!(matches!(gp_construct(2, 1), Err(Error::Domain(_))));
        assert!(matches!(gp_construct(7, 0), Err(Error::Domain(_))));
        assert!(gp_construct(7, 3).is_ok());
    }

    #[test]
    fn non_coprime_inner_rim_is_fine() {
        // gcd(12,4) = 4: the inner rim is four triangles.
        let g = gp_construct(12, 4).unwrap();
        assert_eq!(g.edge_count(), 36);
        assert!(g.is_connected());
    }

    #[test]
    fn vertex_id_normalization() {
        let n = 58;
        assert_eq!(VertexId::inner(-6, n), VertexId { kind: VertexKind::Inner, index: 52 });
        assert_eq!(VertexId::outer(n as i64 + 3, n).index, 3);
        assert_eq!(VertexId::inner(-6, n).flat(n), 58 + 52);
        for flat in 0..2 * n {
            assert_eq!(VertexId::from_flat(flat, n).unwrap().flat(n), flat);
        }
        assert_eq!(VertexId::from_flat(2 * n, n), None);
    }

    #[test]
    fn vertex_spec_parsing() {
        assert_eq!(VertexId::parse("u0", 17).unwrap(), VertexId::outer(0, 17));
        assert_eq!(VertexId::parse("v-3", 17).unwrap(), VertexId::inner(14, 17));
        assert_eq!(VertexId::parse("v20", 17).unwrap().index, 3);
        for bad in ["", "w1", "u", "u-", "u+1", "u1x", "U1", "v--1", "u 1"] {
            assert!(VertexId::parse(bad, 17).is_err(), "{bad:?} should be rejected");
        }
        assert_eq!(VertexId::inner(52, 58).to_string(), "v52");
    }

    #[test]
    fn inner_vertex_behind_source_is_at_distance_two() {
        for n in 5usize..40 {
            for k in 1..n.div_ceil(2) {
                if !GpParams::is_valid(n, k) {
                    continue;
                }
                let g = gp_construct(n, k).unwrap();
                let p = g.label().unwrap();
                let d = g.bfs(p.u(0)).unwrap();
                assert_eq!(d.get(p.v(-(k as i64))), 2, "GP({n},{k})");
                assert_eq!(d.get(p.u(0)), 0);
            }
        }
    }

    #[test]
    fn petersen_distances() {
        let g = gp_construct(5, 2).unwrap();
        assert_eq!(g.bfs(0).unwrap().eccentricity(), Some(2));
        assert_eq!(g.diameter().unwrap(), 2);
        assert_eq!(floyd_diameter(&g), 2);
    }

    #[test]
    fn diameter_matches_all_pairs_oracle() {
        let g = gp_construct(10, 2).unwrap();
        assert_eq!(floyd_diameter(&g), 5);
        assert_eq!(g.diameter().unwrap(), 5);
        for (n, k) in [(7, 2), (9, 4), (12, 5), (15, 3), (16, 6), (20, 4)] {
            let g = gp_construct(n, k).unwrap();
            let unlabeled = Graph::from_edges(g.vertex_count(), g.edges()).unwrap();
            assert_eq!(g.diameter().unwrap(), floyd_diameter(&g), "GP({n},{k})");
            assert_eq!(unlabeled.diameter().unwrap(), floyd_diameter(&g));
        }
    }

    #[test]
    fn single_edge() {
        let g = Graph::from_edges(2, [(0, 1)]).unwrap();
        assert_eq!(g.diameter().unwrap(), 1);
    }

    #[test]
    fn disconnected_graph() {
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(g.diameter(), Err(Error::Disconnected));
        assert!(!g.is_connected());
    }

    #[test]
    fn from_edges_rejects_bad_input() {
        assert!(Graph::from_edges(3, [(0, 0)]).is_err());
        assert!(Graph::from_edges(3, [(0, 3)]).is_err());
        assert!(Graph::from_edges(0, []).is_err());
        let g = Graph::from_edges(3, [(0, 1), (1, 0), (1, 2)]).unwrap();
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn edge_list_format() {
        let g = gp_construct(5, 2).unwrap();
        let text = g.to_edge_list();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("# GP(5,2) vertices=10 edges=15"));
        let rest: Vec<&str> = lines.collect();
        assert_eq!(rest.len(), 15);
        assert_eq!(rest[0], "0 1");
        let parsed: Vec<(usize, usize)> = rest
            .iter()
            .map(|l| {
                let (a, b) = l.split_once(' ').unwrap();
                (a.parse().unwrap(), b.parse().unwrap())
            })
            .collect();
        assert!(parsed.windows(2).all(|w| w[0] < w[1]));
        assert!(parsed.iter().all(|(a, b)| a < b));

        let back = Graph::parse_edge_list(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.label(), Some(GpParams { n: 5, k: 2 }));
    }

    #[test]
    fn edge_list_parse_errors() {
        assert!(matches!(Graph::parse_edge_list("0 1\n1 x\n"), Err(Error::Parse { line: 2, .. })));
        assert!(Graph::parse_edge_list("# nothing\n").is_err());
        assert!(Graph::parse_edge_list("0 1 2\n").is_err());
        // Header says GP(5,2) but one edge is missing.
        let text = gp_construct(5, 2).unwrap().to_edge_list();
        let truncated: String = text.lines().take(15).map(|l| format!("{l}\n")).collect();
        assert!(matches!(Graph::parse_edge_list(&truncated), Err(Error::InvalidGraph(_))));
        // Plain graph without header.
        let g = Graph::parse_edge_list("0 1\n1 2\n").unwrap();
        assert_eq!((g.vertex_count(), g.label()), (3, None));
    }
}
