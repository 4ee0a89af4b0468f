//! Structural symmetry: canonical forms, automorphism orbits,
//! vertex-transitivity, and distance-regularity.
//!
//! The canonical form is the lexicographically least graph6 body over all
//! n! relabelings. It is found by a backtracking search that assigns new
//! labels one at a time: at each level only the vertices whose adjacency
//! column against the already-labeled prefix is lexicographically minimal
//! can extend a minimal labeling, so all other branches are discarded. Two
//! further standard prunings keep highly symmetric inputs cheap: a bound
//! against the best body found so far, and automorphisms discovered when two
//! label sequences produce the same body (these both let the search skip
//! sibling branches and backjump to the divergence level).
//!
//! Orbits come from the same search rooted at a vertex: forcing label 0 onto
//! `v` yields a minimal body that is equal for `u` and `v` exactly when some
//! automorphism maps `u` to `v`, and the witnessing labelings of equal
//! bodies compose into explicit automorphisms that a union-find merges.

use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

use crate::graph::{BitVertices, Graph};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SymmetryError {
    #[error("graph is not connected")]
    Disconnected,
}

/// Labeling-invariant representative: the graph6 record of the relabeling
/// whose body bits are lexicographically least.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    record: String,
}

impl CanonicalForm {
    pub fn as_str(&self) -> &str {
        &self.record
    }

    pub fn as_bytes(&self) -> &[u8] {
        self.record.as_bytes()
    }

    pub fn into_string(self) -> String {
        self.record
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.record)
    }
}

const SEEN_CAP: usize = 8192;
const GENERATOR_CAP: usize = 256;

struct LexMinSearch<'a> {
    g: &'a Graph,
    n: usize,
    root: Option<usize>,
    prefix: Vec<usize>,
    assigned: u64,
    bits: Vec<u8>,
    best_bits: Option<Vec<u8>>,
    best_prefix: Vec<usize>,
    seen: HashMap<Vec<u8>, Vec<usize>>,
    generators: Vec<Vec<usize>>,
}

impl<'a> LexMinSearch<'a> {
    fn run(g: &'a Graph, root: Option<usize>) -> (Vec<u8>, Vec<usize>) {
        let n = g.n();
        let mut search = LexMinSearch {
            g,
            n,
            root,
            prefix: Vec::with_capacity(n),
            assigned: 0,
            bits: Vec::with_capacity(n * (n - 1) / 2),
            best_bits: None,
            best_prefix: Vec::new(),
            seen: HashMap::new(),
            generators: Vec::new(),
        };
        search.descend();
        (
            search.best_bits.expect("search reaches at least one leaf"),
            search.best_prefix,
        )
    }

    /// Explores the subtree below the current prefix. The return value is a
    /// backjump target: ancestors at depths greater than it abandon their
    /// remaining work, the ancestor at exactly that depth moves on to its
    /// next candidate. `usize::MAX` means unwind normally.
    fn descend(&mut self) -> usize {
        let depth = self.prefix.len();
        if depth == self.n {
            return self.record_leaf();
        }

        // Only vertices whose column against the prefix is minimal can
        // extend a lexicographically minimal labeling.
        let mut min_col: Option<Vec<u8>> = None;
        let mut candidates: Vec<usize> = Vec::new();
        for x in 0..self.n {
            if self.assigned & (1 << x) != 0 {
                continue;
            }
            if depth == 0 {
                if let Some(root) = self.root {
                    if x != root {
                        continue;
                    }
                }
            }
            let col: Vec<u8> = self
                .prefix
                .iter()
                .map(|&p| u8::from(self.g.has_edge(p, x)))
                .collect();
            match &min_col {
                None => {
                    min_col = Some(col);
                    candidates.push(x);
                }
                Some(current) => match col.cmp(current) {
                    std::cmp::Ordering::Less => {
                        min_col = Some(col);
                        candidates.clear();
                        candidates.push(x);
                    }
                    std::cmp::Ordering::Equal => candidates.push(x),
                    std::cmp::Ordering::Greater => {}
                },
            }
        }
        let col = min_col.expect("at least one unassigned vertex");

        // Prune when even the minimal extension already exceeds the best
        // known body on this prefix span.
        if let Some(best) = &self.best_bits {
            let head = &best[..self.bits.len()];
            let tail = &best[self.bits.len()..self.bits.len() + col.len()];
            let ord = self
                .bits
                .as_slice()
                .cmp(head)
                .then_with(|| col.as_slice().cmp(tail));
            if ord == std::cmp::Ordering::Greater {
                return usize::MAX;
            }
        }

        let mut explored: Vec<usize> = Vec::new();
        'candidates: for x in candidates {
            // If a known automorphism fixes the prefix and carries x onto an
            // already-explored sibling, the subtree of x is a replay.
            for gamma in &self.generators {
                if explored.contains(&gamma[x])
                    && self.prefix.iter().all(|&p| gamma[p] == p)
                {
                    continue 'candidates;
                }
            }
            self.prefix.push(x);
            self.assigned |= 1 << x;
            self.bits.extend_from_slice(&col);
            let jump = self.descend();
            self.prefix.pop();
            self.assigned &= !(1 << x);
            self.bits.truncate(self.bits.len() - col.len());
            if jump < depth {
                return jump;
            }
            explored.push(x);
        }
        usize::MAX
    }

    fn record_leaf(&mut self) -> usize {
        if let Some(old_path) = self.seen.get(&self.bits) {
            // Same body reached along two label sequences: their
            // composition is an automorphism, and everything below the
            // divergence point replays the earlier subtree.
            let mut gamma = vec![0usize; self.n];
            for (&old, &new) in old_path.iter().zip(&self.prefix) {
                gamma[old] = new;
            }
            let divergence = old_path
                .iter()
                .zip(&self.prefix)
                .position(|(a, b)| a != b)
                .expect("distinct leaves have distinct paths");
            if self.generators.len() < GENERATOR_CAP {
                self.generators.push(gamma);
            }
            return divergence;
        }
        let improved = match &self.best_bits {
            None => true,
            Some(best) => self.bits < *best,
        };
        if improved {
            self.best_bits = Some(self.bits.clone());
            self.best_prefix = self.prefix.clone();
        }
        if self.seen.len() < SEEN_CAP {
            self.seen.insert(self.bits.clone(), self.prefix.clone());
        }
        usize::MAX
    }
}

/// Relabeling `perm[old] = new` that produces the canonical form.
fn canonical_labeling(g: &Graph) -> Vec<usize> {
    let (_, prefix) = LexMinSearch::run(g, None);
    let mut perm = vec![0usize; g.n()];
    for (new, &old) in prefix.iter().enumerate() {
        perm[old] = new;
    }
    perm
}

/// The canonically relabeled copy of `g`.
pub fn canonical_graph(g: &Graph) -> Graph {
    g.relabel(&canonical_labeling(g))
}

/// Canonical form of `g`: equal for isomorphic graphs, distinct otherwise.
pub fn canonical_form(g: &Graph) -> CanonicalForm {
    CanonicalForm {
        record: canonical_graph(g).to_graph6(),
    }
}

/// Orbits of the automorphism group, as an id per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitPartition {
    orbit_id: Vec<usize>,
    orbit_count: usize,
}

impl OrbitPartition {
    pub fn orbit_id(&self) -> &[usize] {
        &self.orbit_id
    }

    pub fn orbit_count(&self) -> usize {
        self.orbit_count
    }

    pub fn same_orbit(&self, u: usize, v: usize) -> bool {
        self.orbit_id[u] == self.orbit_id[v]
    }

    /// Orbits as sorted vertex lists, ordered by smallest member.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); self.orbit_count];
        for (v, &id) in self.orbit_id.iter().enumerate() {
            out[id].push(v);
        }
        out
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            // Smaller id wins, keeping orbit numbering deterministic.
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }

    fn same(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }
}

/// Coarsest equitable partition, as one bitmask per cell.
///
/// Starting from a single cell, repeatedly splits any cell whose members
/// disagree on the number of neighbors inside some cell, with fragments
/// ordered by ascending neighbor count, until stable. Every automorphism
/// orbit lies inside one cell of the result.
fn equitable_cells(g: &Graph) -> Vec<u64> {
    let n = g.n();
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut cells: Vec<u64> = vec![full];
    'restart: loop {
        for splitter_index in 0..cells.len() {
            let splitter = cells[splitter_index];
            for target_index in 0..cells.len() {
                let target = cells[target_index];
                if target.count_ones() <= 1 {
                    continue;
                }
                let mut fragments: BTreeMap<u32, u64> = BTreeMap::new();
                for v in BitVertices(target) {
                    let count = (g.neighbor_mask(v) & splitter).count_ones();
                    *fragments.entry(count).or_insert(0) |= 1 << v;
                }
                if fragments.len() > 1 {
                    cells.splice(target_index..=target_index, fragments.into_values());
                    continue 'restart;
                }
            }
        }
        return cells;
    }
}

/// Orbit partition of the full automorphism group.
///
/// Vertices in distinct equitable cells are never equivalent, so only
/// members of multi-vertex cells are examined. For those, the rooted
/// canonical body (root forced to label 0) is computed; equal bodies mean
/// the roots are equivalent, and composing the two witness labelings gives
/// an explicit automorphism whose action merges whole vertex classes at
/// once, skipping most of the remaining rooted searches.
pub fn automorphism_orbits(g: &Graph) -> OrbitPartition {
    let n = g.n();
    let cells = equitable_cells(g);
    let mut uf = UnionFind::new(n);
    let mut body_to_labeling: HashMap<Vec<u8>, Vec<usize>> = HashMap::new();

    for v in 0..n {
        let cell = cells
            .iter()
            .find(|&&c| c & (1 << v) != 0)
            .expect("cells cover all vertices");
        if cell.count_ones() == 1 {
            continue;
        }
        if (0..v).any(|u| uf.same(u, v)) {
            continue;
        }
        let (body, prefix) = LexMinSearch::run(g, Some(v));
        let mut labeling = vec![0usize; n];
        for (new, &old) in prefix.iter().enumerate() {
            labeling[old] = new;
        }
        match body_to_labeling.entry(body) {
            Entry::Occupied(entry) => {
                let earlier = entry.get();
                let mut earlier_inverse = vec![0usize; n];
                for (old, &new) in earlier.iter().enumerate() {
                    earlier_inverse[new] = old;
                }
                for x in 0..n {
                    uf.union(x, earlier_inverse[labeling[x]]);
                }
            }
            Entry::Vacant(entry) => {
                entry.insert(labeling);
            }
        }
    }

    let mut orbit_id = vec![usize::MAX; n];
    let mut orbit_count = 0;
    for v in 0..n {
        let root = uf.find(v);
        if orbit_id[root] == usize::MAX {
            orbit_id[root] = orbit_count;
            orbit_count += 1;
        }
        orbit_id[v] = orbit_id[root];
    }
    OrbitPartition {
        orbit_id,
        orbit_count,
    }
}

/// True iff the automorphism group has a single orbit.
pub fn is_vertex_transitive(g: &Graph) -> bool {
    automorphism_orbits(g).orbit_count() == 1
}

/// Distance-regularity witness: diameter `D`, counts `b_0..b_{D-1}` of
/// neighbors one level further from the root, counts `c_1..c_D` of
/// neighbors one level closer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionArray {
    pub diameter: usize,
    pub b: Vec<usize>,
    pub c: Vec<usize>,
}

impl fmt::Display for IntersectionArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |xs: &[usize]| {
            xs.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "{{{};{}}}", join(&self.b), join(&self.c))
    }
}

/// Checks distance-regularity by BFS from every vertex: for a vertex `u` at
/// distance `i` from the root, the number of `u`-neighbors at distance
/// `i - 1` must be `c_i` and at `i + 1` must be `b_i`, independent of both
/// `u` and the root. Returns the intersection array if all checks pass.
pub fn is_distance_regular(g: &Graph) -> Result<Option<IntersectionArray>, SymmetryError> {
    if !g.is_connected() {
        return Err(SymmetryError::Disconnected);
    }
    let n = g.n();
    let dist: Vec<Vec<usize>> = (0..n)
        .map(|v| {
            g.distances_from(v)
                .into_iter()
                .map(|d| d.expect("connected"))
                .collect()
        })
        .collect();
    let diameter = dist
        .iter()
        .flat_map(|row| row.iter().copied())
        .max()
        .unwrap_or(0);

    let mut b: Vec<Option<usize>> = vec![None; diameter + 1];
    let mut c: Vec<Option<usize>> = vec![None; diameter + 1];
    for v in 0..n {
        for u in 0..n {
            let i = dist[v][u];
            let mut down = 0usize;
            let mut up = 0usize;
            for w in g.neighbors(u) {
                if dist[v][w] + 1 == i {
                    down += 1;
                } else if dist[v][w] == i + 1 {
                    up += 1;
                }
            }
            if i > 0 {
                match c[i] {
                    None => c[i] = Some(down),
                    Some(expected) if expected == down => {}
                    Some(_) => return Ok(None),
                }
            }
            if i < diameter {
                match b[i] {
                    None => b[i] = Some(up),
                    Some(expected) if expected == up => {}
                    Some(_) => return Ok(None),
                }
            }
        }
    }

    Ok(Some(IntersectionArray {
        diameter,
        b: (0..diameter).map(|i| b[i].unwrap_or(0)).collect(),
        c: (1..=diameter).map(|i| c[i].unwrap_or(0)).collect(),
    }))
}
