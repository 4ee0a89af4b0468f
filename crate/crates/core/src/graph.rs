//! Simple undirected graphs on up to 62 vertices.
//!
//! Graphs are stored as one 64-bit adjacency mask per vertex, which keeps
//! every operation in this crate allocation-light and makes neighborhood
//! intersection a single `&`. The 62-vertex cap is deliberate: it is exactly
//! the single-byte-header regime of the graph6 format, and all exact linear
//! algebra downstream stays tractable well below it.
//!
//! The module also provides the graph6 codec (bit-exact, nauty-compatible),
//! standard graph families with fixed documented labelings, and exhaustive
//! isomorph-free enumeration of small connected graphs.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Largest supported vertex count (single-byte graph6 headers).
pub const MAX_VERTICES: usize = 62;

/// An undirected simple graph with vertices `0..n`, `n ≤ 62`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<u64>,
    m: usize,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph({})", self.to_graph6())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex count must be between 1 and 62, got {0}")]
    BadVertexCount(usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0} is not allowed")]
    SelfLoop(usize),
}

impl Graph {
    /// Edgeless graph on `n` vertices, `1 ≤ n ≤ 62`.
    pub fn new(n: usize) -> Result<Self, GraphError> {
        if n == 0 || n > MAX_VERTICES {
            return Err(GraphError::BadVertexCount(n));
        }
        Ok(Graph {
            n,
            adj: vec![0; n],
            m: 0,
        })
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Graph::new(n)?;
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        if u >= self.n {
            return Err(GraphError::VertexOutOfRange { vertex: u, n: self.n });
        }
        if v >= self.n {
            return Err(GraphError::VertexOutOfRange { vertex: v, n: self.n });
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if self.adj[u] & (1 << v) == 0 {
            self.adj[u] |= 1 << v;
            self.adj[v] |= 1 << u;
            self.m += 1;
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u] & (1 << v) != 0
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    /// Neighborhood of `v` as a bitmask over vertex ids.
    pub fn neighbor_mask(&self, v: usize) -> u64 {
        self.adj[v]
    }

    pub fn neighbors(&self, v: usize) -> BitVertices {
        BitVertices(self.adj[v])
    }

    pub fn vertices(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.m);
        for v in 1..self.n {
            for u in BitVertices(self.adj[v] & ((1 << v) - 1)) {
                out.push((u, v));
            }
        }
        out
    }

    /// `Some(k)` if every vertex has degree `k`.
    pub fn regular_degree(&self) -> Option<usize> {
        let k = self.degree(0);
        (1..self.n).all(|v| self.degree(v) == k).then_some(k)
    }

    /// True iff breadth-first search from vertex 0 reaches all `n` vertices.
    pub fn is_connected(&self) -> bool {
        let mut visited: u64 = 1;
        let mut frontier: u64 = 1;
        while frontier != 0 {
            let mut next = 0u64;
            for v in BitVertices(frontier) {
                next |= self.adj[v];
            }
            frontier = next & !visited;
            visited |= next;
        }
        visited.count_ones() as usize == self.n
    }

    /// BFS distances from `start`; `None` for unreachable vertices.
    pub fn distances_from(&self, start: usize) -> Vec<Option<usize>> {
        assert!(start < self.n, "vertex out of range");
        let mut dist = vec![None; self.n];
        dist[start] = Some(0);
        let mut visited: u64 = 1 << start;
        let mut frontier = visited;
        let mut d = 0usize;
        while frontier != 0 {
            let mut next = 0u64;
            for v in BitVertices(frontier) {
                next |= self.adj[v];
            }
            next &= !visited;
            d += 1;
            for v in BitVertices(next) {
                dist[v] = Some(d);
            }
            visited |= next;
            frontier = next;
        }
        dist
    }

    /// The graph with every vertex `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        debug_assert_eq!(perm.len(), self.n);
        debug_assert!({
            let mut seen = vec![false; self.n];
            perm.iter().all(|&p| {
                p < self.n && !std::mem::replace(&mut seen[p], true)
            })
        });
        let mut g = Graph::new(self.n).unwrap();
        for (u, v) in self.edges() {
            g.add_edge(perm[u], perm[v]).unwrap();
        }
        g
    }

    pub fn to_graph6(&self) -> String {
        write_graph6(self)
    }

    pub fn degree_sequence(&self) -> DegreeSequence {
        let mut degrees = self.degrees();
        degrees.sort_unstable_by(|a, b| b.cmp(a));
        DegreeSequence { degrees }
    }
}

/// Iterator over the vertex ids of a set bit mask, ascending.
#[derive(Clone, Copy)]
pub struct BitVertices(pub u64);

impl Iterator for BitVertices {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            let v = self.0.trailing_zeros() as usize;
            self.0 &= self.0 - 1;
            Some(v)
        }
    }
}

/// Vertex degrees sorted non-increasing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeSequence {
    degrees: Vec<usize>,
}

impl DegreeSequence {
    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn sum(&self) -> usize {
        self.degrees.iter().sum()
    }
}

impl fmt::Display for DegreeSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, d) in self.degrees.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, "]")
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Graph6Error {
    #[error("empty graph6 record")]
    Empty,
    #[error("malformed graph6 header byte {0} (expected 63..=125)")]
    MalformedHeader(u8),
    #[error("graph6 record encodes more than 62 vertices")]
    OversizeGraph,
    #[error("graph6 record encodes a graph with no vertices")]
    ZeroVertices,
    #[error("truncated graph6 body: expected {expected} bytes, found {found}")]
    TruncatedBody { expected: usize, found: usize },
    #[error("invalid graph6 body byte {0} (expected 63..=126)")]
    InvalidByte(u8),
    #[error("{0} unexpected trailing bytes after graph6 record")]
    TrailingData(usize),
}

/// Decodes a single graph6 record, optionally prefixed with `>>graph6<<`.
///
/// A trailing newline is tolerated; anything else after the record is an
/// error rather than being silently ignored.
pub fn parse_graph6(text: &str) -> Result<Graph, Graph6Error> {
    let text = text.strip_prefix(">>graph6<<").unwrap_or(text);
    let bytes = text.trim_end_matches(['\n', '\r']).as_bytes();
    let &header = bytes.first().ok_or(Graph6Error::Empty)?;
    if header == 126 {
        // Multi-byte headers encode n > 62.
        return Err(Graph6Error::OversizeGraph);
    }
    if !(63..=125).contains(&header) {
        return Err(Graph6Error::MalformedHeader(header));
    }
    let n = (header - 63) as usize;
    if n == 0 {
        return Err(Graph6Error::ZeroVertices);
    }

    let body = &bytes[1..];
    let nbits = n * (n - 1) / 2;
    let expected = nbits.div_ceil(6);
    if body.len() < expected {
        return Err(Graph6Error::TruncatedBody {
            expected,
            found: body.len(),
        });
    }
    if body.len() > expected {
        return Err(Graph6Error::TrailingData(body.len() - expected));
    }
    for &b in body {
        if !(63..=126).contains(&b) {
            return Err(Graph6Error::InvalidByte(b));
        }
    }

    let mut g = Graph::new(n).expect("1..=62 by construction");
    let mut bit_index = 0usize;
    for v in 1..n {
        for u in 0..v {
            let byte = body[bit_index / 6] - 63;
            let bit = (byte >> (5 - bit_index % 6)) & 1;
            if bit == 1 {
                g.add_edge(u, v).expect("u < v < n");
            }
            bit_index += 1;
        }
    }
    Ok(g)
}

/// Encodes a graph as a graph6 record for its current labeling.
///
/// Layout: one header byte `63 + n`, then the upper triangle of the
/// adjacency matrix read column by column — bit order (0,1), (0,2), (1,2),
/// (0,3), ... — packed big-endian into 6-bit groups, zero-padded, each group
/// emitted as `group + 63`.
pub fn write_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out = vec![63 + n as u8];
    let mut group = 0u8;
    let mut filled = 0u8;
    for v in 1..n {
        for u in 0..v {
            group = (group << 1) | u8::from(g.has_edge(u, v));
            filled += 1;
            if filled == 6 {
                out.push(group + 63);
                group = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((group << (6 - filled)) + 63);
    }
    String::from_utf8(out).expect("graph6 bytes are ASCII")
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FamilyError {
    #[error("bad parameters for graph family: {0}")]
    BadParams(String),
}

/// The standard graph families with fixed, documented labelings.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Complete,
    Cycle,
    Path,
    Star,
    CompleteBipartite,
    Hypercube,
    Petersen,
}

impl Family {
    pub const ALL_NAMES: &'static [&'static str] = &[
        "complete",
        "cycle",
        "path",
        "star",
        "complete_bipartite",
        "hypercube",
        "petersen",
    ];
}

impl FromStr for Family {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, FamilyError> {
        match s {
            "complete" => Ok(Family::Complete),
            "cycle" => Ok(Family::Cycle),
            "path" => Ok(Family::Path),
            "star" => Ok(Family::Star),
            "complete_bipartite" => Ok(Family::CompleteBipartite),
            "hypercube" => Ok(Family::Hypercube),
            "petersen" => Ok(Family::Petersen),
            other => Err(FamilyError::BadParams(format!(
                "unknown family {other:?} (expected one of {})",
                Family::ALL_NAMES.join(", ")
            ))),
        }
    }
}

/// Builds a family member from its parameter list.
///
/// Arities: `complete n`, `cycle n`, `path n`, `star leaves`,
/// `complete_bipartite a b`, `hypercube d`, `petersen` (no parameters).
pub fn make_family(family: Family, params: &[usize]) -> Result<Graph, FamilyError> {
    let one = |name: &str| -> Result<usize, FamilyError> {
        match params {
            [p] => Ok(*p),
            _ => Err(FamilyError::BadParams(format!(
                "{name} takes exactly one parameter, got {}",
                params.len()
            ))),
        }
    };
    match family {
        Family::Complete => families::complete(one("complete")?),
        Family::Cycle => families::cycle(one("cycle")?),
        Family::Path => families::path(one("path")?),
        Family::Star => families::star(one("star")?),
        Family::CompleteBipartite => match params {
            [a, b] => families::complete_bipartite(*a, *b),
            _ => Err(FamilyError::BadParams(format!(
                "complete_bipartite takes exactly two parameters, got {}",
                params.len()
            ))),
        },
        Family::Hypercube => families::hypercube(one("hypercube")?),
        Family::Petersen => {
            if params.is_empty() {
                families::petersen()
            } else {
                Err(FamilyError::BadParams(
                    "petersen takes no parameters".into(),
                ))
            }
        }
    }
}

/// Constructors for the standard families.
pub mod families {
    use super::{FamilyError, Graph, MAX_VERTICES};

    fn sized(n: usize, what: &str) -> Result<Graph, FamilyError> {
        Graph::new(n).map_err(|_| {
            FamilyError::BadParams(format!("{what} needs 1..=62 vertices, got {n}"))
        })
    }

    /// Complete graph `K_n`.
    pub fn complete(n: usize) -> Result<Graph, FamilyError> {
        let mut g = sized(n, "complete")?;
        for v in 1..n {
            for u in 0..v {
                g.add_edge(u, v).unwrap();
            }
        }
        Ok(g)
    }

    /// Cycle `C_n` labeled 0-1-...-(n-1)-0, `n ≥ 3`.
    pub fn cycle(n: usize) -> Result<Graph, FamilyError> {
        if n < 3 {
            return Err(FamilyError::BadParams(format!(
                "cycle needs at least 3 vertices, got {n}"
            )));
        }
        let mut g = sized(n, "cycle")?;
        for v in 0..n {
            g.add_edge(v, (v + 1) % n).unwrap();
        }
        Ok(g)
    }

    /// Path `P_n` labeled 0-1-...-(n-1).
    pub fn path(n: usize) -> Result<Graph, FamilyError> {
        let mut g = sized(n, "path")?;
        for v in 1..n {
            g.add_edge(v - 1, v).unwrap();
        }
        Ok(g)
    }

    /// Star `K_{1,leaves}`: center 0, leaves `1..=leaves`.
    pub fn star(leaves: usize) -> Result<Graph, FamilyError> {
        if leaves == 0 {
            return Err(FamilyError::BadParams(
                "star needs at least one leaf".into(),
            ));
        }
        complete_bipartite(1, leaves)
    }

    /// Complete bipartite `K_{a,b}`: one side `0..a`, the other `a..a+b`.
    pub fn complete_bipartite(a: usize, b: usize) -> Result<Graph, FamilyError> {
        if a == 0 || b == 0 {
            return Err(FamilyError::BadParams(
                "complete_bipartite needs both sides nonempty".into(),
            ));
        }
        let mut g = sized(a + b, "complete_bipartite")?;
        for u in 0..a {
            for v in a..a + b {
                g.add_edge(u, v).unwrap();
            }
        }
        Ok(g)
    }

    /// Hypercube `Q_d`: vertices are the `2^d` bit strings, edges join
    /// strings at Hamming distance 1. Requires `2^d ≤ 62`, so `d ≤ 5`.
    pub fn hypercube(d: usize) -> Result<Graph, FamilyError> {
        if d > 5 {
            return Err(FamilyError::BadParams(format!(
                "hypercube dimension must satisfy 2^d <= {MAX_VERTICES}, got d = {d}"
            )));
        }
        let n = 1usize << d;
        let mut g = sized(n, "hypercube")?;
        for v in 0..n {
            for bit in 0..d {
                let u = v ^ (1 << bit);
                if u < v {
                    g.add_edge(u, v).unwrap();
                }
            }
        }
        Ok(g)
    }

    /// Petersen graph in its Kneser K(5,2) labeling: vertices are the ten
    /// 2-subsets of {0..4} in lexicographic order, adjacent iff disjoint.
    pub fn petersen() -> Result<Graph, FamilyError> {
        let mut subsets = Vec::with_capacity(10);
        for a in 0..5 {
            for b in a + 1..5 {
                subsets.push((a, b));
            }
        }
        let mut g = sized(10, "petersen")?;
        for i in 0..10 {
            for j in i + 1..10 {
                let (a, b) = subsets[i];
                let (c, d) = subsets[j];
                if a != c && a != d && b != c && b != d {
                    g.add_edge(i, j).unwrap();
                }
            }
        }
        Ok(g)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EnumerateError {
    #[error("exhaustive enumeration supports 1..=7 vertices, got {0}")]
    Oversize(usize),
}

/// One representative per isomorphism class of connected simple graphs on
/// `n` vertices, in ascending canonical graph6 order.
///
/// Enumerates all `2^(n(n-1)/2)` edge masks and deduplicates by canonical
/// form, which is adequate up to the supported `n ≤ 7`.
pub fn enumerate_connected(n: usize) -> Result<Vec<Graph>, EnumerateError> {
    if n == 0 || n > 7 {
        return Err(EnumerateError::Oversize(n));
    }
    let mut pairs = Vec::new();
    for v in 1..n {
        for u in 0..v {
            pairs.push((u, v));
        }
    }
    let mut seen: BTreeSet<String> = BTreeSet::new();
    for mask in 0u32..1u32 << pairs.len() {
        let mut g = Graph::new(n).unwrap();
        for (i, &(u, v)) in pairs.iter().enumerate() {
            if mask & (1 << i) != 0 {
                g.add_edge(u, v).unwrap();
            }
        }
        if g.is_connected() {
            seen.insert(crate::symmetry::canonical_form(&g).into_string());
        }
    }
    Ok(seen
        .into_iter()
        .map(|record| parse_graph6(&record).expect("canonical records are valid graph6"))
        .collect())
}
