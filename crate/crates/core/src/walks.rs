//! Closed-walk counts, return probabilities, the walk-regularity and
//! return-condition decisions, first-passage distributions, and a seeded
//! Monte Carlo simulator.
//!
//! Both decisions quantify over all walk lengths, but checking `t` up to
//! `n - 1` is complete: by Cayley-Hamilton, `A^t` (and likewise `P^t`) for
//! `t ≥ n` is a fixed linear combination of `A^0..A^{n-1}` with
//! graph-independent scalar coefficients, so if the low-order diagonals are
//! constant vectors then every higher diagonal is too. The return-condition
//! check deliberately inspects `P^t` directly instead of reusing
//! walk-regularity plus a degree test, so the equivalence of the two
//! conditions on regular graphs stays an observable fact rather than a
//! baked-in assumption.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::electrical::{self, ElectricalError};
use crate::graph::Graph;
use crate::linalg::{
    int_power_diagonals, rat, rat_power_diagonals, transition_matrix, IntMatrix, Rational,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WalkError {
    #[error("graph is not connected")]
    Disconnected,
    #[error("vertex {0} has no neighbors")]
    IsolatedVertex(usize),
    #[error("source and target are both vertex {0}; distinct vertices required")]
    SameVertex(usize),
    #[error("vertex sequence is not a walk in the graph")]
    NotAWalk,
}

/// Per-length closed-walk counts and exact return probabilities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkProfile {
    pub tmax: usize,
    /// `counts[t][v]` = number of closed walks of length `t` starting at `v`.
    pub counts: Vec<Vec<BigInt>>,
    /// `return_probs[t][v]` = probability the walk from `v` is back at `v`
    /// after exactly `t` steps.
    pub return_probs: Vec<Vec<Rational>>,
}

/// Exact distribution of the first-visit time from `source` to `target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FirstPassageDistribution {
    pub source: usize,
    pub target: usize,
    pub tmax: usize,
    /// `probs[t - 1]` = probability the first visit happens at step `t`.
    pub probs: Vec<Rational>,
    /// Probability mass not yet absorbed after `tmax` steps.
    pub tail: Rational,
}

impl FirstPassageDistribution {
    /// Probability of first visit at step `t`, `1 ≤ t ≤ tmax`.
    pub fn prob_at(&self, t: usize) -> &Rational {
        &self.probs[t - 1]
    }
}

/// Monte Carlo estimate of a return frequency.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SimEstimate {
    pub point: f64,
    pub trials: u64,
    pub stderr: f64,
    pub seed: u64,
}

/// Default profile horizon: the vertex count.
pub fn default_profile_tmax(g: &Graph) -> usize {
    g.n()
}

/// Default first-passage horizon: twice the vertex count (hitting times are
/// unbounded, so the distribution always carries an explicit tail).
pub fn default_passage_tmax(g: &Graph) -> usize {
    2 * g.n()
}

/// Closed-walk counts `(A^t)_vv` and return probabilities `(P^t)_vv` for
/// `t = 0..=tmax`.
pub fn closed_walk_count_profile(g: &Graph, tmax: usize) -> Result<WalkProfile, WalkError> {
    let p = transition_matrix(g).map_err(|e| match e {
        crate::linalg::LinalgError::IsolatedVertex(v) => WalkError::IsolatedVertex(v),
        other => unreachable!("unexpected transition matrix failure: {other}"),
    })?;
    let counts = int_power_diagonals(&IntMatrix::adjacency(g), tmax);
    let return_probs = rat_power_diagonals(&p, tmax);
    Ok(WalkProfile {
        tmax,
        counts,
        return_probs,
    })
}

/// True iff `diag(A^t)` is a constant vector for every `t` in `2..=n-1`
/// (complete for all `t` by the Cayley-Hamilton argument above). A true
/// result implies regularity, since `diag(A^2)` is the degree vector.
pub fn is_walk_regular(g: &Graph) -> bool {
    let n = g.n();
    if n < 3 {
        return true;
    }
    let diags = int_power_diagonals(&IntMatrix::adjacency(g), n - 1);
    diags[2..]
        .iter()
        .all(|diag| diag.iter().all(|x| *x == diag[0]))
}

/// True iff the return probability `(P^t)_vv` is the same for every vertex
/// `v`, for every `t` in `1..=n-1` (again complete for all `t`).
pub fn satisfies_return_condition(g: &Graph) -> Result<bool, WalkError> {
    if !g.is_connected() {
        return Err(WalkError::Disconnected);
    }
    let n = g.n();
    if n == 1 {
        return Ok(true);
    }
    let p = transition_matrix(g).expect("connected graphs have no isolated vertices");
    let diags = rat_power_diagonals(&p, n - 1);
    Ok(diags[1..]
        .iter()
        .all(|diag| diag.iter().all(|x| *x == diag[0])))
}

/// Expected first-return time to `x`, computed as `1 + (1/d(x)) Σ_z H_zx`
/// over the neighbors `z` of `x` — a route through the hitting-time solver,
/// independent of the closed-form `2m/d(x)`.
pub fn expected_return_time_exact(g: &Graph, x: usize) -> Result<Rational, WalkError> {
    if !g.is_connected() {
        return Err(WalkError::Disconnected);
    }
    assert!(x < g.n(), "vertex out of range");
    let d = g.degree(x);
    if d == 0 {
        return Err(WalkError::IsolatedVertex(x));
    }
    let h = electrical::hitting_times_to(g, x).map_err(|e| match e {
        ElectricalError::Disconnected => WalkError::Disconnected,
        other => unreachable!("unexpected hitting-time failure: {other}"),
    })?;
    let total: Rational = g.neighbors(x).map(|z| h[z].clone()).sum();
    Ok(rat(1) + total / rat(d as i64))
}

/// Distribution of the first visit to `target` from `source`, computed by
/// making `target` absorbing and reading the mass newly absorbed at each
/// step.
pub fn first_passage_distribution(
    g: &Graph,
    source: usize,
    target: usize,
    tmax: usize,
) -> Result<FirstPassageDistribution, WalkError> {
    if !g.is_connected() {
        return Err(WalkError::Disconnected);
    }
    if source == target {
        return Err(WalkError::SameVertex(source));
    }
    let n = g.n();
    assert!(source < n && target < n, "vertex out of range");

    let mut current = vec![Rational::zero(); n];
    current[source] = Rational::one();
    let mut probs = Vec::with_capacity(tmax);
    for _ in 1..=tmax {
        let mut next = vec![Rational::zero(); n];
        let mut absorbed = Rational::zero();
        for u in 0..n {
            if current[u].is_zero() {
                continue;
            }
            let share = &current[u] / rat(g.degree(u) as i64);
            for z in g.neighbors(u) {
                if z == target {
                    absorbed += &share;
                } else {
                    next[z] += &share;
                }
            }
        }
        probs.push(absorbed);
        current = next;
    }
    let tail = rat(1) - probs.iter().sum::<Rational>();
    Ok(FirstPassageDistribution {
        source,
        target,
        tmax,
        probs,
        tail,
    })
}

/// Probability that the walk from `w_0` traverses the given walk in its
/// first `L` steps: `Π 1/d(w_i)` over `i = 0..L-1`.
pub fn walk_traversal_probability(g: &Graph, walk: &[usize]) -> Result<Rational, WalkError> {
    if walk.len() < 2 {
        return Err(WalkError::NotAWalk);
    }
    for pair in walk.windows(2) {
        if pair[0] >= g.n() || pair[1] >= g.n() || !g.has_edge(pair[0], pair[1]) {
            return Err(WalkError::NotAWalk);
        }
    }
    Ok(walk[..walk.len() - 1]
        .iter()
        .map(|&w| rat(1) / rat(g.degree(w) as i64))
        .product())
}

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output scrambler.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// One deterministic PRNG stream per (seed, trial) pair.
///
/// The stream is SplitMix64: state advances by the constant `GAMMA` and
/// each output is `mix64(state)`. The initial state is the avalanche mix
/// `mix64(seed XOR mix64(trial * GAMMA + GAMMA))`, so trial streams are
/// decorrelated and depend only on `(seed, trial)`, never on scheduling.
struct TrialRng {
    state: u64,
}

impl TrialRng {
    fn new(seed: u64, trial: u64) -> Self {
        TrialRng {
            state: mix64(seed ^ mix64(trial.wrapping_mul(GAMMA).wrapping_add(GAMMA))),
        }
    }

    fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GAMMA);
        mix64(self.state)
    }

    /// Uniform draw from `0..bound` by masked rejection (unbiased).
    fn below(&mut self, bound: u64) -> u64 {
        let mask = bound.next_power_of_two() - 1;
        loop {
            let x = self.next_u64() & mask;
            if x < bound {
                return x;
            }
        }
    }
}

/// Fraction of `trials` independent `t`-step walks from `x` that end at
/// `x`, with the binomial standard error.
///
/// Reproducibility contract: each trial consumes its own [`TrialRng`]
/// stream keyed by `(seed, trial index)` and results are combined by
/// integer summation, so the estimate is bit-identical for fixed arguments
/// regardless of thread count or scheduling.
pub fn simulate_return_frequency(
    g: &Graph,
    x: usize,
    t: usize,
    trials: u64,
    seed: u64,
) -> Result<SimEstimate, WalkError> {
    assert!(trials >= 1, "at least one trial required");
    assert!(x < g.n(), "vertex out of range");
    for v in g.vertices() {
        if g.degree(v) == 0 {
            return Err(WalkError::IsolatedVertex(v));
        }
    }
    let neighbors: Vec<Vec<u32>> = g
        .vertices()
        .map(|v| g.neighbors(v).map(|w| w as u32).collect())
        .collect();

    let hits: u64 = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = TrialRng::new(seed, trial);
            let mut v = x;
            for _ in 0..t {
                let nbrs = &neighbors[v];
                v = nbrs[rng.below(nbrs.len() as u64) as usize] as usize;
            }
            u64::from(v == x)
        })
        .sum();

    let point = hits as f64 / trials as f64;
    let stderr = (point * (1.0 - point) / trials as f64).sqrt();
    Ok(SimEstimate {
        point,
        trials,
        stderr,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families;
    use crate::linalg::frac;
    use num_traits::Signed;

    fn int(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn triangle_profile() {
        let g = families::complete(3).unwrap();
        let profile = closed_walk_count_profile(&g, 4).unwrap();
        assert_eq!(profile.counts[3], vec![int(2), int(2), int(2)]);
        assert_eq!(
            profile.return_probs[3],
            vec![frac(1, 4), frac(1, 4), frac(1, 4)]
        );
        assert_eq!(profile.counts[4], vec![int(6), int(6), int(6)]);
        for v in 0..3 {
            assert_eq!(profile.counts[0][v], int(1));
            assert_eq!(profile.counts[1][v], int(0));
        }
    }

    #[test]
    fn path_profile_at_two_steps() {
        let g = families::path(3).unwrap();
        let profile = closed_walk_count_profile(&g, 2).unwrap();
        assert_eq!(profile.counts[2], vec![int(1), int(2), int(1)]);
        assert_eq!(
            profile.return_probs[2],
            vec![frac(1, 2), rat(1), frac(1, 2)]
        );
    }

    #[test]
    fn profile_rejects_isolated_vertices() {
        let g = Graph::new(1).unwrap();
        assert_eq!(
            closed_walk_count_profile(&g, 3),
            Err(WalkError::IsolatedVertex(0))
        );
    }

    use crate::graph::Graph;

    #[test]
    fn regular_profile_probabilities_scale_counts() {
        let g = families::cycle(5).unwrap();
        let profile = closed_walk_count_profile(&g, 5).unwrap();
        for t in 0..=5usize {
            for v in 0..5 {
                let scaled = Rational::new(profile.counts[t][v].clone(), int(2).pow(t as u32));
                assert_eq!(profile.return_probs[t][v], scaled);
            }
        }
    }

    #[test]
    fn walk_regularity_panel() {
        assert!(is_walk_regular(&families::cycle(4).unwrap()));
        assert!(is_walk_regular(&families::petersen().unwrap()));
        assert!(is_walk_regular(&families::complete(5).unwrap()));
        assert!(!is_walk_regular(&families::path(3).unwrap()));
        assert!(!is_walk_regular(&families::star(3).unwrap()));
    }

    #[test]
    fn return_condition_panel() {
        assert!(satisfies_return_condition(&families::complete(4).unwrap()).unwrap());
        assert!(!satisfies_return_condition(&families::path(3).unwrap()).unwrap());
        assert!(!satisfies_return_condition(&families::star(3).unwrap()).unwrap());
        assert!(satisfies_return_condition(&Graph::new(1).unwrap()).unwrap());
        assert_eq!(
            satisfies_return_condition(&Graph::new(2).unwrap()),
            Err(WalkError::Disconnected)
        );
    }

    #[test]
    fn expected_return_times_on_path() {
        let g = families::path(3).unwrap();
        assert_eq!(expected_return_time_exact(&g, 1).unwrap(), rat(2));
        assert_eq!(expected_return_time_exact(&g, 0).unwrap(), rat(4));
        let k2 = families::complete(2).unwrap();
        assert_eq!(expected_return_time_exact(&k2, 0).unwrap(), rat(2));
        assert_eq!(
            expected_return_time_exact(&Graph::new(1).unwrap(), 0),
            Err(WalkError::IsolatedVertex(0))
        );
    }

    #[test]
    fn forced_first_passage_on_edge() {
        let g = families::complete(2).unwrap();
        let d = first_passage_distribution(&g, 0, 1, 3).unwrap();
        assert_eq!(d.probs, vec![rat(1), rat(0), rat(0)]);
        assert!(d.tail.is_zero());
    }

    #[test]
    fn four_cycle_first_passage_between_neighbors() {
        // From a neighbor of the target on C_4: step 1 hits with 1/2; step
        // 2 cannot hit (parity); step 3 hits via the two walks 0-3-0-1 and
        // 0-3-2-1, each with probability 1/8.
        let g = families::cycle(4).unwrap();
        let fwd = first_passage_distribution(&g, 0, 1, 3).unwrap();
        assert_eq!(fwd.probs, vec![frac(1, 2), rat(0), frac(1, 4)]);
        assert_eq!(fwd.tail, frac(1, 4));
        let rev = first_passage_distribution(&g, 1, 0, 3).unwrap();
        assert_eq!(fwd.probs, rev.probs);
        assert_eq!(fwd.tail, rev.tail);
    }

    #[test]
    fn first_passage_mass_is_conserved() {
        let g = families::star(3).unwrap();
        let d = first_passage_distribution(&g, 1, 2, 7).unwrap();
        assert_eq!(d.probs.iter().sum::<Rational>() + &d.tail, rat(1));
        assert!(d.probs.iter().all(|p| !p.is_negative()));
    }

    #[test]
    fn first_passage_error_cases() {
        let g = families::cycle(4).unwrap();
        assert_eq!(
            first_passage_distribution(&g, 2, 2, 3),
            Err(WalkError::SameVertex(2))
        );
        assert_eq!(
            first_passage_distribution(&Graph::new(2).unwrap(), 0, 1, 3),
            Err(WalkError::Disconnected)
        );
    }

    #[test]
    fn traversal_probability_of_short_walks() {
        let p3 = families::path(3).unwrap();
        assert_eq!(
            walk_traversal_probability(&p3, &[0, 1, 2]).unwrap(),
            frac(1, 2)
        );
        assert_eq!(
            walk_traversal_probability(&p3, &[2, 1, 0]).unwrap(),
            frac(1, 2)
        );
        let k3 = families::complete(3).unwrap();
        assert_eq!(
            walk_traversal_probability(&k3, &[0, 1]).unwrap(),
            frac(1, 2)
        );
        assert_eq!(
            walk_traversal_probability(&p3, &[0, 2]),
            Err(WalkError::NotAWalk)
        );
        assert_eq!(walk_traversal_probability(&p3, &[0]), Err(WalkError::NotAWalk));
    }

    #[test]
    fn simulation_is_deterministic_and_consistent() {
        let g = families::complete(3).unwrap();
        let a = simulate_return_frequency(&g, 0, 2, 20_000, 42).unwrap();
        let b = simulate_return_frequency(&g, 0, 2, 20_000, 42).unwrap();
        assert_eq!(a, b);
        assert!((a.point - 0.5).abs() <= 4.0 * a.stderr, "point {}", a.point);
        let c = simulate_return_frequency(&g, 0, 2, 20_000, 43).unwrap();
        assert_ne!(a.point, c.point);
    }

    #[test]
    fn deterministic_walk_on_edge() {
        let g = families::complete(2).unwrap();
        let est = simulate_return_frequency(&g, 0, 2, 500, 7).unwrap();
        assert_eq!(est.point, 1.0);
        assert_eq!(est.stderr, 0.0);
    }

    #[test]
    fn simulation_rejects_isolated_vertices() {
        let g = Graph::new(2).unwrap();
        assert_eq!(
            simulate_return_frequency(&g, 0, 2, 10, 1),
            Err(WalkError::IsolatedVertex(0))
        );
    }
}
