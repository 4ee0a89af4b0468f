//! Exact dense linear algebra over arbitrary-precision rationals.
//!
//! Everything here is exact: matrices store `BigRational` or `BigInt`
//! entries, systems are solved by fraction-preserving Gaussian elimination,
//! and a singular system is reported as an error rather than silently
//! producing garbage. Matrix powers are computed by iterated multiplication
//! so that every intermediate power is available for diagonal extraction.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::graph::Graph;

/// Arbitrary-precision rational number used throughout the crate.
///
/// Displays as `p/q` in lowest terms, or just `p` when the denominator is 1,
/// and parses back from the same form.
pub type Rational = BigRational;

/// Rational from a machine integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rational `p/q` from machine integers. Panics if `q == 0`.
pub fn frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Nearest `f64` to an exact rational, for display alongside exact values.
pub fn rational_to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    /// The coefficient matrix has no unique solution for the given system.
    #[error("singular matrix: the linear system has no unique solution")]
    SingularMatrix,
    /// A transition matrix was requested for a graph with a degree-0 vertex.
    #[error("vertex {0} has no neighbors, so its transition row is undefined")]
    IsolatedVertex(usize),
}

/// Dense matrix of rationals in row-major order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            *m.get_mut(i, i) = Rational::one();
        }
        m
    }

    /// Builds a matrix from explicit rows. Panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(nrows * ncols);
        for row in rows {
            assert_eq!(row.len(), ncols, "ragged rows in RatMatrix::from_rows");
            entries.extend(row);
        }
        RatMatrix {
            rows: nrows,
            cols: ncols,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.entries[r * self.cols + c]
    }

    pub fn get_mut(&mut self, r: usize, c: usize) -> &mut Rational {
        &mut self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: Rational) {
        self.entries[r * self.cols + c] = value;
    }

    /// Matrix product. Panics on a dimension mismatch.
    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in RatMatrix::mul");
        let mut out = RatMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        *out.get_mut(i, j) += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn diagonal(&self) -> Vec<Rational> {
        assert_eq!(self.rows, self.cols);
        (0..self.rows).map(|i| self.get(i, i).clone()).collect()
    }
}

/// Dense square matrix of arbitrary-precision integers in row-major order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    n: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(n: usize) -> Self {
        IntMatrix {
            n,
            entries: vec![BigInt::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.entries[i * n + i] = BigInt::one();
        }
        m
    }

    /// 0/1 adjacency matrix of a graph.
    pub fn adjacency(g: &Graph) -> Self {
        let n = g.n();
        let mut m = Self::zeros(n);
        for u in 0..n {
            for v in g.neighbors(u) {
                m.entries[u * n + v] = BigInt::one();
            }
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.entries[r * self.n + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: BigInt) {
        self.entries[r * self.n + c] = value;
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.n, other.n, "dimension mismatch in IntMatrix::mul");
        let n = self.n;
        let mut out = IntMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * n + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.n).map(|i| self.get(i, i).clone()).collect()
    }
}

/// Diagonals of `A^0, A^1, ..., A^tmax` computed by iterated multiplication.
///
/// The return value is indexed `[t][v]`.
pub fn int_power_diagonals(a: &IntMatrix, tmax: usize) -> Vec<Vec<BigInt>> {
    let mut out = Vec::with_capacity(tmax + 1);
    let mut power = IntMatrix::identity(a.n());
    out.push(power.diagonal());
    for _ in 1..=tmax {
        power = power.mul(a);
        out.push(power.diagonal());
    }
    out
}

/// Diagonals of `M^0, M^1, ..., M^tmax` for a square rational matrix.
pub fn rat_power_diagonals(m: &RatMatrix, tmax: usize) -> Vec<Vec<Rational>> {
    assert_eq!(m.rows(), m.cols());
    let mut out = Vec::with_capacity(tmax + 1);
    let mut power = RatMatrix::identity(m.rows());
    out.push(power.diagonal());
    for _ in 1..=tmax {
        power = power.mul(m);
        out.push(power.diagonal());
    }
    out
}

/// Simple-random-walk transition matrix `P[u][v] = 1/deg(u)` for `v ~ u`.
///
/// Fails with [`LinalgError::IsolatedVertex`] if any vertex has degree 0.
pub fn transition_matrix(g: &Graph) -> Result<RatMatrix, LinalgError> {
    let n = g.n();
    let mut p = RatMatrix::zeros(n, n);
    for u in 0..n {
        let d = g.degree(u);
        if d == 0 {
            return Err(LinalgError::IsolatedVertex(u));
        }
        let step = Rational::new(BigInt::one(), BigInt::from(d));
        for v in g.neighbors(u) {
            p.set(u, v, step.clone());
        }
    }
    Ok(p)
}

/// Solves `a * x = b` exactly by Gaussian elimination with pivoting on the
/// first nonzero entry of each column.
///
/// Panics if `a` is not square or `b` has the wrong length; returns
/// [`LinalgError::SingularMatrix`] when no unique solution exists.
pub fn solve_linear_exact(a: &RatMatrix, b: &[Rational]) -> Result<Vec<Rational>, LinalgError> {
    assert_eq!(a.rows(), a.cols(), "solve_linear_exact needs a square matrix");
    assert_eq!(a.rows(), b.len(), "right-hand side length mismatch");
    let n = a.rows();
    let mut work: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut row: Vec<Rational> = (0..n).map(|j| a.get(i, j).clone()).collect();
            row.push(b[i].clone());
            row
        })
        .collect();

    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !work[r][col].is_zero())
            .ok_or(LinalgError::SingularMatrix)?;
        work.swap(col, pivot);
        for r in col + 1..n {
            if work[r][col].is_zero() {
                continue;
            }
            let factor = &work[r][col] / &work[col][col];
            for c in col..=n {
                let delta = &factor * &work[col][c];
                work[r][c] -= delta;
            }
        }
    }

    let mut x = vec![Rational::zero(); n];
    for row in (0..n).rev() {
        let mut acc = work[row][n].clone();
        for c in row + 1..n {
            acc -= &work[row][c] * &x[c];
        }
        x[row] = acc / &work[row][row];
    }
    Ok(x)
}

/// Exact matrix inverse by Gauss-Jordan elimination.
pub fn invert_exact(a: &RatMatrix) -> Result<RatMatrix, LinalgError> {
    assert_eq!(a.rows(), a.cols(), "invert_exact needs a square matrix");
    let n = a.rows();
    let mut work: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut row: Vec<Rational> = (0..n).map(|j| a.get(i, j).clone()).collect();
            row.extend((0..n).map(|j| {
                if i == j {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }));
            row
        })
        .collect();

    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !work[r][col].is_zero())
            .ok_or(LinalgError::SingularMatrix)?;
        work.swap(col, pivot);
        let inv = {
            let p = work[col][col].clone();
            Rational::one() / p
        };
        for c in col..2 * n {
            work[col][c] *= &inv;
        }
        for r in 0..n {
            if r == col || work[r][col].is_zero() {
                continue;
            }
            let factor = work[r][col].clone();
            for c in col..2 * n {
                let delta = &factor * &work[col][c];
                work[r][c] -= delta;
            }
        }
    }

    let mut out = RatMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            out.set(i, j, work[i][n + j].clone());
        }
    }
    Ok(out)
}

/// Serializes a [`Rational`] as the string `p/q` (or `p` when `q == 1`).
pub mod serde_rational {
    use super::Rational;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Rational, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&value.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(de)?;
        text.parse().map_err(D::Error::custom)
    }
}

/// Serializes an `Option<Rational>` as an optional `p/q` string.
pub mod serde_rational_opt {
    use super::Rational;
    use serde::{de::Error, Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(value: &Option<Rational>, ser: S) -> Result<S::Ok, S::Error> {
        value.as_ref().map(Rational::to_string).serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Option<Rational>, D::Error> {
        match Option::<String>::deserialize(de)? {
            Some(text) => text.parse().map(Some).map_err(D::Error::custom),
            None => Ok(None),
        }
    }
}

/// Serializes a `Vec<Rational>` as a vector of `p/q` strings.
pub mod serde_rational_vec {
    use super::Rational;
    use serde::{de::Error, Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(value: &[Rational], ser: S) -> Result<S::Ok, S::Error> {
        value
            .iter()
            .map(Rational::to_string)
            .collect::<Vec<_>>()
            .serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<Rational>, D::Error> {
        Vec::<String>::deserialize(de)?
            .into_iter()
            .map(|text| text.parse().map_err(D::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families;

    #[test]
    fn solves_identity_system() {
        let a = RatMatrix::identity(3);
        let b = vec![rat(4), rat(-1), frac(2, 3)];
        assert_eq!(solve_linear_exact(&a, &b).unwrap(), b);
    }

    #[test]
    fn solves_two_by_two_exactly() {
        // x + 2y = 5, 3x + 4y = 6 has the solution x = -4, y = 9/2.
        let a = RatMatrix::from_rows(vec![vec![rat(1), rat(2)], vec![rat(3), rat(4)]]);
        let b = vec![rat(5), rat(6)];
        assert_eq!(solve_linear_exact(&a, &b).unwrap(), vec![rat(-4), frac(9, 2)]);
    }

    #[test]
    fn solver_needs_row_swap() {
        // Zero leading pivot forces a swap.
        let a = RatMatrix::from_rows(vec![vec![rat(0), rat(1)], vec![rat(2), rat(0)]]);
        let b = vec![rat(7), rat(10)];
        assert_eq!(solve_linear_exact(&a, &b).unwrap(), vec![rat(5), rat(7)]);
    }

    #[test]
    fn singular_system_is_rejected() {
        let a = RatMatrix::from_rows(vec![vec![rat(1), rat(2)], vec![rat(2), rat(4)]]);
        let b = vec![rat(1), rat(2)];
        assert_eq!(solve_linear_exact(&a, &b), Err(LinalgError::SingularMatrix));
    }

    #[test]
    fn grounded_path_system_gives_exact_potentials() {
        // Laplacian of the path a-b-c with vertex c removed: unit current
        // injected at a gives potentials (2, 1), so the a-c resistance is 2.
        let a = RatMatrix::from_rows(vec![vec![rat(1), rat(-1)], vec![rat(-1), rat(2)]]);
        let b = vec![rat(1), rat(0)];
        assert_eq!(solve_linear_exact(&a, &b).unwrap(), vec![rat(2), rat(1)]);
    }

    #[test]
    fn inverse_of_grounded_triangle_laplacian() {
        let a = RatMatrix::from_rows(vec![vec![rat(2), rat(-1)], vec![rat(-1), rat(2)]]);
        let inv = invert_exact(&a).unwrap();
        let expected = RatMatrix::from_rows(vec![
            vec![frac(2, 3), frac(1, 3)],
            vec![frac(1, 3), frac(2, 3)],
        ]);
        assert_eq!(inv, expected);
        assert_eq!(a.mul(&inv), RatMatrix::identity(2));
    }

    #[test]
    fn singular_inverse_is_rejected() {
        // A full Laplacian is singular.
        let l = RatMatrix::from_rows(vec![
            vec![rat(1), rat(-1), rat(0)],
            vec![rat(-1), rat(2), rat(-1)],
            vec![rat(0), rat(-1), rat(1)],
        ]);
        assert_eq!(invert_exact(&l), Err(LinalgError::SingularMatrix));
    }

    #[test]
    fn triangle_closed_walk_diagonals() {
        let a = IntMatrix::adjacency(&families::complete(3).unwrap());
        let diags = int_power_diagonals(&a, 4);
        let flat: Vec<Vec<i64>> = diags
            .iter()
            .map(|d| d.iter().map(|x| i64::try_from(x).unwrap()).collect())
            .collect();
        assert_eq!(
            flat,
            vec![
                vec![1, 1, 1],
                vec![0, 0, 0],
                vec![2, 2, 2],
                vec![2, 2, 2],
                vec![6, 6, 6],
            ]
        );
    }

    #[test]
    fn path_square_diagonal_equals_degrees() {
        let a = IntMatrix::adjacency(&families::path(3).unwrap());
        let diags = int_power_diagonals(&a, 2);
        let d2: Vec<i64> = diags[2].iter().map(|x| i64::try_from(x).unwrap()).collect();
        assert_eq!(d2, vec![1, 2, 1]);
    }

    #[test]
    fn transition_matrix_rows_are_distributions() {
        let g = families::path(3).unwrap();
        let p = transition_matrix(&g).unwrap();
        assert_eq!(p.get(0, 1), &rat(1));
        assert_eq!(p.get(1, 0), &frac(1, 2));
        assert_eq!(p.get(1, 2), &frac(1, 2));
        for u in 0..3 {
            let sum: Rational = (0..3).map(|v| p.get(u, v).clone()).sum();
            assert_eq!(sum, rat(1));
        }
    }

    #[test]
    fn transition_matrix_rejects_isolated_vertex() {
        let g = Graph::new(2).unwrap();
        assert_eq!(transition_matrix(&g), Err(LinalgError::IsolatedVertex(0)));
    }

    #[test]
    fn path_return_probabilities_at_two_steps() {
        let g = families::path(3).unwrap();
        let p = transition_matrix(&g).unwrap();
        let diags = rat_power_diagonals(&p, 2);
        assert_eq!(diags[2], vec![frac(1, 2), rat(1), frac(1, 2)]);
    }

    #[test]
    fn rational_string_round_trip() {
        for r in [frac(-3, 7), rat(0), rat(5), frac(22, 4)] {
            let text = r.to_string();
            let back: Rational = text.parse().unwrap();
            assert_eq!(back, r);
        }
        assert_eq!(frac(22, 4).to_string(), "11/2");
        assert_eq!(rat(5).to_string(), "5");
    }
}
