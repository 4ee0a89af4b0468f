//! Exact electrical-network machinery: effective resistances, hitting
//! times, the hitting-time-symmetry decision, and the resistance invariants
//! it is equivalent to.
//!
//! Everything is computed over `BigRational` through grounded Laplacian
//! systems: for a connected graph, deleting one vertex's row and column from
//! `L = D - A` leaves an invertible matrix, and both effective resistances
//! and hitting times are solutions of such systems. The two quantities are
//! computed through separate systems on purpose: the commute-time identity
//! `H_xy + H_yx = 2m * r(x,y)` then works as a cross-check between two
//! independent code paths, and [`is_reversible`] verifies the equivalence of
//! its two definitions on every call rather than assuming it.

use nalgebra::{DMatrix, SymmetricEigen};
use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::graph::Graph;
use crate::linalg::{invert_exact, rat, solve_linear_exact, RatMatrix, Rational};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ElectricalError {
    #[error("graph is not connected")]
    Disconnected,
    #[error("both endpoints are vertex {0}; distinct vertices required")]
    SameVertex(usize),
    #[error("operation requires at least 2 vertices")]
    TooSmall,
    #[error("graph is not regular")]
    NotRegular,
    #[error("hitting times are not symmetric, so the weighted resistance invariant is vertex-dependent")]
    NotReversible,
    #[error("internal consistency failure: hitting-time symmetry and resistance-invariant constancy disagree")]
    CharacterizationMismatch,
}

/// Symmetric matrix of pairwise effective resistances, zero diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResistanceMatrix {
    n: usize,
    entries: Vec<Rational>,
}

impl ResistanceMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, u: usize, v: usize) -> &Rational {
        &self.entries[u * self.n + v]
    }
}

/// Matrix of expected hitting times; entry `(x, y)` is the expected number
/// of steps for a walk from `x` to first reach `y`. Zero diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HittingMatrix {
    n: usize,
    entries: Vec<Rational>,
}

impl HittingMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, x: usize, y: usize) -> &Rational {
        &self.entries[x * self.n + y]
    }
}

/// Outcome of the hitting-time-symmetry decision.
///
/// `r_d[v]` is the degree-weighted resistance sum `Σ_w deg(w)·r(v,w)`. The
/// graph is reversible exactly when this is the same for every `v`, which
/// is also exactly when all hitting times are symmetric; both routes are
/// computed and compared. `r_pi` is `r_d / 2m`, defined only in that case.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReversibilityReport {
    pub reversible: bool,
    #[serde(with = "crate::linalg::serde_rational_vec")]
    pub r_d: Vec<Rational>,
    #[serde(with = "crate::linalg::serde_rational_opt")]
    pub r_d_constant: Option<Rational>,
    #[serde(with = "crate::linalg::serde_rational_opt")]
    pub r_pi: Option<Rational>,
    #[serde(with = "crate::linalg::serde_rational")]
    pub max_asymmetry: Rational,
}

fn require_connected(g: &Graph) -> Result<(), ElectricalError> {
    if g.is_connected() {
        Ok(())
    } else {
        Err(ElectricalError::Disconnected)
    }
}

/// Laplacian with `ground`'s row and column removed. Row/column `i` of the
/// result corresponds to the `i`-th vertex in id order skipping `ground`.
fn grounded_laplacian(g: &Graph, ground: usize) -> RatMatrix {
    let keep: Vec<usize> = (0..g.n()).filter(|&v| v != ground).collect();
    let mut l = RatMatrix::zeros(keep.len(), keep.len());
    for (i, &u) in keep.iter().enumerate() {
        l.set(i, i, rat(g.degree(u) as i64));
        for (j, &v) in keep.iter().enumerate() {
            if g.has_edge(u, v) {
                l.set(i, j, rat(-1));
            }
        }
    }
    l
}

/// Resistance between `v` and `w`: ground `w`, inject one unit of current
/// at `v`, read the potential at `v`.
pub fn effective_resistance(g: &Graph, v: usize, w: usize) -> Result<Rational, ElectricalError> {
    require_connected(g)?;
    if v == w {
        return Err(ElectricalError::SameVertex(v));
    }
    assert!(v < g.n() && w < g.n(), "vertex out of range");
    let l = grounded_laplacian(g, w);
    let mut rhs = vec![Rational::zero(); g.n() - 1];
    let v_index = if v < w { v } else { v - 1 };
    rhs[v_index] = rat(1);
    let phi = solve_linear_exact(&l, &rhs)
        .expect("grounded Laplacian of a connected graph is invertible");
    Ok(phi[v_index].clone())
}

/// All pairwise resistances from a single grounded-Laplacian inversion:
/// with `M = (L minus ground row/col)^{-1}`, `r(u,v) = M_uu + M_vv - 2M_uv`
/// and `r(u, ground) = M_uu`.
pub fn resistance_matrix(g: &Graph) -> Result<ResistanceMatrix, ElectricalError> {
    require_connected(g)?;
    let n = g.n();
    let mut entries = vec![Rational::zero(); n * n];
    if n > 1 {
        let ground = n - 1;
        let m = invert_exact(&grounded_laplacian(g, ground))
            .expect("grounded Laplacian of a connected graph is invertible");
        for u in 0..n - 1 {
            let r = m.get(u, u).clone();
            entries[u * n + ground] = r.clone();
            entries[ground * n + u] = r;
            for v in u + 1..n - 1 {
                let r = m.get(u, u) + m.get(v, v) - m.get(u, v) - m.get(u, v);
                entries[u * n + v] = r.clone();
                entries[v * n + u] = r;
            }
        }
    }
    Ok(ResistanceMatrix { n, entries })
}

/// Expected steps to reach `y` from every start, via the single grounded
/// system `L_{-y} h = deg_{-y}`; the entry for `y` itself is 0.
pub fn hitting_times_to(g: &Graph, y: usize) -> Result<Vec<Rational>, ElectricalError> {
    require_connected(g)?;
    assert!(y < g.n(), "vertex out of range");
    let n = g.n();
    let mut out = vec![Rational::zero(); n];
    if n > 1 {
        let l = grounded_laplacian(g, y);
        let keep: Vec<usize> = (0..n).filter(|&v| v != y).collect();
        let rhs: Vec<Rational> = keep.iter().map(|&v| rat(g.degree(v) as i64)).collect();
        let h = solve_linear_exact(&l, &rhs)
            .expect("grounded Laplacian of a connected graph is invertible");
        for (i, &v) in keep.iter().enumerate() {
            out[v] = h[i].clone();
        }
    }
    Ok(out)
}

/// Expected steps for a walk from `x` to first reach `y`.
pub fn hitting_time(g: &Graph, x: usize, y: usize) -> Result<Rational, ElectricalError> {
    if x == y {
        return Err(ElectricalError::SameVertex(x));
    }
    assert!(x < g.n(), "vertex out of range");
    Ok(hitting_times_to(g, y)?[x].clone())
}

/// All-pairs hitting times, one grounded solve per target.
pub fn hitting_matrix(g: &Graph) -> Result<HittingMatrix, ElectricalError> {
    require_connected(g)?;
    let n = g.n();
    let mut entries = vec![Rational::zero(); n * n];
    for y in 0..n {
        let column = hitting_times_to(g, y)?;
        for x in 0..n {
            entries[x * n + y] = column[x].clone();
        }
    }
    Ok(HittingMatrix { n, entries })
}

/// Decides whether all hitting times are symmetric (`H_xy = H_yx`), and
/// independently whether the degree-weighted resistance sum `R_d(v)` is
/// constant across vertices. The two must agree; a mismatch aborts with
/// [`ElectricalError::CharacterizationMismatch`] since it can only mean an
/// implementation bug.
pub fn is_reversible(g: &Graph) -> Result<ReversibilityReport, ElectricalError> {
    require_connected(g)?;
    let n = g.n();
    if n < 2 {
        return Err(ElectricalError::TooSmall);
    }

    let hitting = hitting_matrix(g)?;
    let mut max_asymmetry = Rational::zero();
    for x in 0..n {
        for y in x + 1..n {
            let gap = (hitting.get(x, y) - hitting.get(y, x)).abs();
            if gap > max_asymmetry {
                max_asymmetry = gap;
            }
        }
    }

    let resistance = resistance_matrix(g)?;
    let r_d: Vec<Rational> = (0..n)
        .map(|v| {
            (0..n)
                .map(|w| rat(g.degree(w) as i64) * resistance.get(v, w))
                .sum()
        })
        .collect();

    let reversible = max_asymmetry.is_zero();
    let r_d_is_constant = r_d.iter().all(|x| *x == r_d[0]);
    if reversible != r_d_is_constant {
        return Err(ElectricalError::CharacterizationMismatch);
    }

    let r_d_constant = reversible.then(|| r_d[0].clone());
    let r_pi = r_d_constant
        .as_ref()
        .map(|rd| rd / rat(2 * g.m() as i64));
    Ok(ReversibilityReport {
        reversible,
        r_d,
        r_d_constant,
        r_pi,
        max_asymmetry,
    })
}

/// The invariant `R_π = R_d / 2m`: the expected resistance between a vertex
/// and a stationary-random vertex. Defined only when the graph is
/// reversible (otherwise `R_d(v)` depends on `v`).
pub fn r_pi(g: &Graph) -> Result<Rational, ElectricalError> {
    let report = is_reversible(g)?;
    if !report.reversible {
        return Err(ElectricalError::NotReversible);
    }
    Ok(report.r_pi.expect("present when reversible"))
}

/// Cross-check between the hitting-time and resistance solvers:
/// `H_xy + H_yx = 2m * r(x,y)` must hold exactly for every pair.
pub fn commute_identity_check(g: &Graph) -> Result<bool, ElectricalError> {
    require_connected(g)?;
    let n = g.n();
    let hitting = hitting_matrix(g)?;
    let resistance = resistance_matrix(g)?;
    let two_m = rat(2 * g.m() as i64);
    for x in 0..n {
        for y in x + 1..n {
            let commute = hitting.get(x, y) + hitting.get(y, x);
            if commute != &two_m * resistance.get(x, y) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Spectral gap `k - λ₂` of a connected `k`-regular graph's adjacency
/// matrix, in floating point (the one estimate in this crate that is not
/// exact; accuracy is limited only by the dense symmetric eigensolver).
pub fn spectral_gap_estimate(g: &Graph) -> Result<f64, ElectricalError> {
    require_connected(g)?;
    let Some(k) = g.regular_degree() else {
        return Err(ElectricalError::NotRegular);
    };
    let n = g.n();
    if n < 2 {
        return Err(ElectricalError::TooSmall);
    }
    let a = DMatrix::<f64>::from_fn(n, n, |i, j| f64::from(g.has_edge(i, j)));
    let mut eigenvalues: Vec<f64> = SymmetricEigen::new(a).eigenvalues.iter().copied().collect();
    eigenvalues.sort_by(|a, b| b.partial_cmp(a).expect("finite eigenvalues"));
    Ok(k as f64 - eigenvalues[1])
}
