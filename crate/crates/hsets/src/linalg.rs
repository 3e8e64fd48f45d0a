//! Dense linear algebra substrate: symmetric positive definite factorization,
//! triangular solves, and full symmetric inverses.
//!
//! Everything is dense and allocation-per-call; the instances this crate
//! handles stay below a few hundred rows.

use crate::{Error, Result};

/// Pivots at or below this value declare the matrix not positive definite.
pub const PIVOT_TOL: f64 = 1e-12;
/// Maximum absolute entrywise asymmetry accepted by [`spd_factor`].
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Row-major dense matrix of finite `f64` entries.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = DenseMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Builds a matrix from row-major data. Panics on length mismatch or
    /// non-finite entries.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols, "row-major data length mismatch");
        assert!(
            data.iter().all(|v| v.is_finite()),
            "non-finite matrix entry"
        );
        DenseMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self::from_vec(r, c, rows.concat())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self::from_vec(rows, cols, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// `self * v` for a vector of length `cols`.
    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    /// `selfᵀ * v` for a vector of length `rows`.
    pub fn matvec_transpose(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![0.0; self.cols];
        for i in 0..self.rows {
            let row = self.row(i);
            let vi = v[i];
            for (o, a) in out.iter_mut().zip(row) {
                *o += vi * a;
            }
        }
        out
    }

    pub fn matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, other.rows);
        DenseMatrix::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).map(|k| self[(i, k)] * other[(k, j)]).sum()
        })
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Largest |a_ij - a_ji| over the strict upper triangle; 0 for non-square.
    pub fn max_asymmetry(&self) -> f64 {
        if self.rows != self.cols {
            return 0.0;
        }
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i + 1..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst
    }
}

impl std::ops::Index<(usize, usize)> for DenseMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Cholesky factorization of a symmetric positive definite matrix.
///
/// `ok` is false when a pivot fell at or below [`PIVOT_TOL`]; the factor is
/// then unusable and signals a degenerate (duplicate-point) system upstream.
#[derive(Debug, Clone)]
pub struct SpdFactorization {
    dim: usize,
    factor: DenseMatrix,
    ok: bool,
}

impl SpdFactorization {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Lower-triangular factor L with `L Lᵀ = A`.
    pub fn factor(&self) -> &DenseMatrix {
        &self.factor
    }

    pub fn ok(&self) -> bool {
        self.ok
    }
}

/// Factors a symmetric matrix as `L Lᵀ`.
///
/// Returns `NotSymmetric` when the input is asymmetric beyond
/// [`SYMMETRY_TOL`]; an indefinite matrix yields `ok = false` instead of an
/// error so callers can report the degeneracy in their own vocabulary.
pub fn spd_factor(m: &DenseMatrix) -> Result<SpdFactorization> {
    if m.rows() != m.cols() {
        return Err(Error::DimensionMismatch {
            expected: m.rows(),
            got: m.cols(),
        });
    }
    let asym = m.max_asymmetry();
    if asym > SYMMETRY_TOL {
        return Err(Error::NotSymmetric(asym));
    }
    let n = m.rows();
    let mut l = DenseMatrix::zeros(n, n);
    for j in 0..n {
        let mut pivot = m[(j, j)];
        for k in 0..j {
            pivot -= l[(j, k)] * l[(j, k)];
        }
        if pivot <= PIVOT_TOL {
            return Ok(SpdFactorization {
                dim: n,
                factor: l,
                ok: false,
            });
        }
        let diag = pivot.sqrt();
        l[(j, j)] = diag;
        for i in j + 1..n {
            let mut s = m[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / diag;
        }
    }
    Ok(SpdFactorization {
        dim: n,
        factor: l,
        ok: true,
    })
}

/// Solves `A x = rhs` from the factorization of `A`.
pub fn spd_solve(fact: &SpdFactorization, rhs: &[f64]) -> Result<Vec<f64>> {
    if !fact.ok {
        return Err(Error::NotPositiveDefinite);
    }
    if rhs.len() != fact.dim {
        return Err(Error::DimensionMismatch {
            expected: fact.dim,
            got: rhs.len(),
        });
    }
    let n = fact.dim;
    let l = &fact.factor;
    // forward: L y = rhs
    let mut y = rhs.to_vec();
    for i in 0..n {
        for k in 0..i {
            y[i] -= l[(i, k)] * y[k];
        }
        y[i] /= l[(i, i)];
    }
    // backward: Lᵀ x = y
    for i in (0..n).rev() {
        for k in i + 1..n {
            y[i] -= l[(k, i)] * y[k];
        }
        y[i] /= l[(i, i)];
    }
    Ok(y)
}

/// Full inverse of the factored matrix, symmetrized exactly.
pub fn symmetric_inverse(fact: &SpdFactorization) -> Result<DenseMatrix> {
    if !fact.ok {
        return Err(Error::NotPositiveDefinite);
    }
    let n = fact.dim;
    let mut inv = DenseMatrix::zeros(n, n);
    let mut e = vec![0.0; n];
    for j in 0..n {
        e[j] = 1.0;
        let col = spd_solve(fact, &e)?;
        e[j] = 0.0;
        for i in 0..n {
            inv[(i, j)] = col[i];
        }
    }
    // enforce exact symmetry on top of rounding noise
    for i in 0..n {
        for j in i + 1..n {
            let s = 0.5 * (inv[(i, j)] + inv[(j, i)]);
            inv[(i, j)] = s;
            inv[(j, i)] = s;
        }
    }
    Ok(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_util::rng;
    use rand::Rng;

    #[test]
    fn factor_identity() {
        let m = DenseMatrix::identity(2);
        let f = spd_factor(&m).unwrap();
        assert!(f.ok());
        assert_eq!(f.factor(), &DenseMatrix::identity(2));
    }

    #[test]
    fn factor_hand_cholesky() {
        let m = DenseMatrix::from_rows(&[vec![4.0, 2.0], vec![2.0, 3.0]]);
        let f = spd_factor(&m).unwrap();
        assert!(f.ok());
        let l = f.factor();
        assert!((l[(0, 0)] - 2.0).abs() < 1e-14);
        assert!(l[(0, 1)].abs() < 1e-14);
        assert!((l[(1, 0)] - 1.0).abs() < 1e-14);
        assert!((l[(1, 1)] - 2.0f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn factor_rank_deficient() {
        let m = DenseMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]);
        let f = spd_factor(&m).unwrap();
        assert!(!f.ok());
    }

    #[test]
    fn factor_rejects_asymmetry() {
        let m = DenseMatrix::from_rows(&[vec![1.0, 0.5], vec![0.0, 1.0]]);
        assert!(matches!(spd_factor(&m), Err(Error::NotSymmetric(_))));
    }

    #[test]
    fn solve_identity_and_diagonal() {
        let f = spd_factor(&DenseMatrix::identity(2)).unwrap();
        assert_eq!(spd_solve(&f, &[3.0, 7.0]).unwrap(), vec![3.0, 7.0]);

        let f = spd_factor(&DenseMatrix::from_rows(&[vec![2.0]])).unwrap();
        assert!((spd_solve(&f, &[1.0]).unwrap()[0] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn solve_two_by_two() {
        let m = DenseMatrix::from_rows(&[vec![4.0, 2.0], vec![2.0, 3.0]]);
        let f = spd_factor(&m).unwrap();
        let x = spd_solve(&f, &[6.0, 5.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-12);
        assert!((x[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn solve_dimension_mismatch() {
        let f = spd_factor(&DenseMatrix::identity(2)).unwrap();
        assert!(matches!(
            spd_solve(&f, &[1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn inverse_examples() {
        let f = spd_factor(&DenseMatrix::identity(3)).unwrap();
        let inv = symmetric_inverse(&f).unwrap();
        assert_eq!(inv, DenseMatrix::identity(3));

        let f = spd_factor(&DenseMatrix::from_rows(&[vec![2.0, 0.0], vec![0.0, 4.0]])).unwrap();
        let inv = symmetric_inverse(&f).unwrap();
        assert!((inv[(0, 0)] - 0.5).abs() < 1e-15);
        assert!((inv[(1, 1)] - 0.25).abs() < 1e-15);
        assert!(inv[(0, 1)].abs() < 1e-15);

        let m = DenseMatrix::from_rows(&[vec![4.0, 2.0], vec![2.0, 3.0]]);
        let inv = symmetric_inverse(&spd_factor(&m).unwrap()).unwrap();
        // 2x2 inverse formula: (1/8) [[3,-2],[-2,4]]
        assert!((inv[(0, 0)] - 3.0 / 8.0).abs() < 1e-14);
        assert!((inv[(0, 1)] + 2.0 / 8.0).abs() < 1e-14);
        assert!((inv[(1, 0)] + 2.0 / 8.0).abs() < 1e-14);
        assert!((inv[(1, 1)] - 4.0 / 8.0).abs() < 1e-14);
    }

    #[test]
    fn random_spd_roundtrips() {
        let mut r = rng(42);
        for _ in 0..200 {
            let n = r.gen_range(1..=30);
            let a = DenseMatrix::from_fn(n, n, |_, _| r.gen_range(-1.0..1.0));
            // AᵀA + I is SPD
            let mut m = a.transpose().matmul(&a);
            for i in 0..n {
                m[(i, i)] += 1.0;
            }
            let f = spd_factor(&m).unwrap();
            assert!(f.ok());

            // reconstruction: ||L Lᵀ - M||_F <= 1e-10 ||M||_F
            let l = f.factor();
            let rec = l.matmul(&l.transpose());
            let mut diff = 0.0f64;
            for i in 0..n {
                for j in 0..n {
                    diff += (rec[(i, j)] - m[(i, j)]).powi(2);
                }
            }
            assert!(diff.sqrt() <= 1e-10 * m.frobenius_norm());

            // solve residual
            let rhs: Vec<f64> = (0..n).map(|_| r.gen_range(-1.0..1.0)).collect();
            let x = spd_solve(&f, &rhs).unwrap();
            let res = m.matvec(&x);
            let rhs_inf = rhs.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
            for i in 0..n {
                assert!((res[i] - rhs[i]).abs() <= 1e-9 * (1.0 + rhs_inf));
            }

            // inverse product deviation
            let inv = symmetric_inverse(&f).unwrap();
            let prod = inv.matmul(&m);
            for i in 0..n {
                for j in 0..n {
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((prod[(i, j)] - expect).abs() <= 1e-8);
                }
            }
        }
    }
}
