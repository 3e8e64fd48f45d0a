//! H-set certification and the two-sided error sandwich.
//!
//! A signed point set `(H, sigma)` is an H-set for a trial space `V` when no
//! `v` in `V` makes `v(h) sigma(h)` negative everywhere on `H`. With the
//! N x n matrix `A`, `A[k][i] = v_i(h_k) sigma_k`, the property is equivalent
//! to the existence of a nonzero `w >= 0` with `wᵀA = 0`, a Farkas
//! certificate, and is decided by the box LP `max 1ᵀw, 0 <= w <= 1,
//! Aᵀw = 0` started at the origin: the candidate is an H-set exactly when the
//! maximum is positive. A negative verdict comes with a constructive witness
//! `x` solving `Ax <= -1`.

use serde::Serialize;

use crate::kernels::{kernel_matrix, Kernel, PointSet};
use crate::linalg::DenseMatrix;
use crate::lp::{check_feasible, solve_lp, Feasibility, LpProblem, LpStatus, RowSense, Sense};
use crate::{Error, Result};

/// Smallest LP objective accepted as a "positive maximum".
pub const CERT_TOL: f64 = 1e-7;
/// Weights at or below this are dropped by [`reduce_support`].
pub const SUPPORT_TOL: f64 = 1e-9;

/// A point set with a sign per point; the candidate `(H, sigma)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignedPointSet {
    points: PointSet,
    signs: Vec<f64>,
}

impl SignedPointSet {
    pub fn new(points: PointSet, signs: Vec<f64>) -> Result<Self> {
        if signs.len() != points.len() {
            return Err(Error::DimensionMismatch {
                expected: points.len(),
                got: signs.len(),
            });
        }
        if let Some(&bad) = signs.iter().find(|s| s.abs() != 1.0) {
            return Err(Error::InvalidSigns(bad));
        }
        Ok(SignedPointSet { points, signs })
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn signs(&self) -> &[f64] {
        &self.signs
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn subset(&self, indices: &[usize]) -> SignedPointSet {
        SignedPointSet {
            points: self.points.subset(indices),
            signs: indices.iter().map(|&i| self.signs[i]).collect(),
        }
    }

    /// The same points with every sign flipped.
    pub fn flipped(&self) -> SignedPointSet {
        SignedPointSet {
            points: self.points.clone(),
            signs: self.signs.iter().map(|s| -s).collect(),
        }
    }
}

/// Outcome of an H-set test; serializes as the result record of a run.
#[derive(Debug, Clone, Serialize)]
pub struct HSetCertificate {
    pub is_hset: bool,
    /// Nonnegative weights with `wᵀA = 0`; meaningful when `is_hset`.
    pub weights: Vec<f64>,
    /// The achieved maximum of `1ᵀw` over the certification box.
    pub objective: f64,
    /// For a negative verdict: an `x` with `Ax <= -1` entrywise.
    pub witness: Option<Vec<f64>>,
    pub rows: usize,
    pub cols: usize,
    /// Rank of the homogeneous system `Aᵀw = 0` (dependent rows shrink it).
    pub row_rank: usize,
    pub cert_tol: f64,
    pub support_tol: f64,
}

/// Applies the signs to the rows of a basis-value matrix:
/// `A[k][i] = basis_values[k][i] * signs[k]`.
pub fn assemble_signed_matrix(basis_values: &DenseMatrix, signs: &[f64]) -> Result<DenseMatrix> {
    if signs.len() != basis_values.rows() {
        return Err(Error::DimensionMismatch {
            expected: basis_values.rows(),
            got: signs.len(),
        });
    }
    Ok(DenseMatrix::from_fn(
        basis_values.rows(),
        basis_values.cols(),
        |k, i| basis_values[(k, i)] * signs[k],
    ))
}

/// Decides the H-set property of the signed system `A`.
///
/// Exactly one of the two holds: a positive certificate (`is_hset` with
/// weights) or a witness `x` with `Ax < 0` entrywise; both are produced
/// constructively and verify numerically.
pub fn test_hset(a: &DenseMatrix) -> Result<HSetCertificate> {
    let n_pts = a.rows();
    let n_basis = a.cols();
    if n_pts == 0 {
        return Err(Error::EmptyInput("H-set test needs at least one point"));
    }

    let problem = LpProblem::with_bounds(
        Sense::Max,
        vec![1.0; n_pts],
        a.transpose(),
        vec![RowSense::Eq; n_basis],
        vec![0.0; n_basis],
        vec![0.0; n_pts],
        vec![1.0; n_pts],
    );
    let sol = solve_lp(&problem)?;
    if sol.status != LpStatus::Optimal {
        return Err(Error::UnexpectedLpStatus(sol.status));
    }

    let row_rank = homogeneous_rank(a);
    let is_hset = sol.objective_value > CERT_TOL;
    let weights: Vec<f64> = sol.primal.iter().map(|&w| w.max(0.0)).collect();

    let witness = if is_hset {
        None
    } else {
        // the proof's reduction: no certificate means Ax <= -1 is solvable
        match check_feasible(a, &vec![-1.0; n_pts])? {
            Feasibility::Feasible(x) => Some(x),
            Feasibility::Infeasible(_) => {
                return Err(Error::Numerical("certification dichotomy violated"))
            }
        }
    };

    Ok(HSetCertificate {
        is_hset,
        weights,
        objective: sol.objective_value,
        witness,
        rows: n_pts,
        cols: n_basis,
        row_rank,
        cert_tol: CERT_TOL,
        support_tol: SUPPORT_TOL,
    })
}

/// Rank of `Aᵀ` by Gaussian elimination; diagnostic for dependent
/// homogeneous conditions on regular point sets.
fn homogeneous_rank(a: &DenseMatrix) -> usize {
    let mut m = a.transpose();
    let (rows, cols) = (m.rows(), m.cols());
    let tol = 1e-10 * (1.0 + m.max_abs());
    let mut rank = 0;
    let mut col = 0;
    while rank < rows && col < cols {
        let mut piv = rank;
        let mut piv_val = m[(rank, col)].abs();
        for r in rank + 1..rows {
            if m[(r, col)].abs() > piv_val {
                piv_val = m[(r, col)].abs();
                piv = r;
            }
        }
        if piv_val <= tol {
            col += 1;
            continue;
        }
        if piv != rank {
            for c in 0..cols {
                let tmp = m[(rank, c)];
                m[(rank, c)] = m[(piv, c)];
                m[(piv, c)] = tmp;
            }
        }
        for r in rank + 1..rows {
            let f = m[(r, col)] / m[(rank, col)];
            if f != 0.0 {
                for c in col..cols {
                    let v = m[(rank, c)];
                    m[(r, c)] -= f * v;
                }
            }
        }
        rank += 1;
        col += 1;
    }
    rank
}

/// The signed kernel matrix `A[k][i] = K(x_i, h_k) sigma_k` of a candidate
/// against the centers spanning the trial space.
pub fn kernel_hset_matrix(
    kernel: &Kernel,
    centers: &PointSet,
    candidate: &SignedPointSet,
) -> Result<DenseMatrix> {
    let values = kernel_matrix(kernel, candidate.points(), centers)?;
    assemble_signed_matrix(&values, candidate.signs())
}

/// The function `f = sum_k w_k K(., h_k) sigma_k` certifying an H-set: it is
/// nonzero, vanishes on the centers, and its coefficient signs are `sigma`.
#[derive(Debug, Clone, Serialize)]
pub struct HSetFunction {
    pub candidate: SignedPointSet,
    pub weights: Vec<f64>,
    pub kernel: Kernel,
}

impl HSetFunction {
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        let mut s = 0.0;
        for (k, h) in self.candidate.points().iter().enumerate() {
            s += self.weights[k] * self.candidate.signs()[k] * self.kernel.eval(x, h)?;
        }
        Ok(s)
    }
}

/// Builds the certifying kernel function and verifies that it vanishes on
/// the centers.
pub fn kernel_hset_function(
    kernel: &Kernel,
    centers: &PointSet,
    candidate: &SignedPointSet,
    cert: &HSetCertificate,
) -> Result<HSetFunction> {
    if !cert.is_hset {
        return Err(Error::NotAnHSet);
    }
    if cert.weights.len() != candidate.len() {
        return Err(Error::DimensionMismatch {
            expected: candidate.len(),
            got: cert.weights.len(),
        });
    }
    let f = HSetFunction {
        candidate: candidate.clone(),
        weights: cert.weights.clone(),
        kernel: *kernel,
    };
    let scale = 1.0 + cert.weights.iter().sum::<f64>();
    for x in centers.iter() {
        if f.eval(x)?.abs() > 1e-8 * scale {
            return Err(Error::CertificateMismatch);
        }
    }
    Ok(f)
}

/// Drops the zero-weight points of a certified H-set; the maximization of
/// `1ᵀw` concentrates weight on few components, so large candidates shrink.
pub fn reduce_support(
    candidate: &SignedPointSet,
    cert: &HSetCertificate,
) -> Result<SignedPointSet> {
    if !cert.is_hset {
        return Err(Error::NotAnHSet);
    }
    if cert.weights.len() != candidate.len() {
        return Err(Error::DimensionMismatch {
            expected: candidate.len(),
            got: cert.weights.len(),
        });
    }
    let keep: Vec<usize> = (0..candidate.len())
        .filter(|&k| cert.weights[k] > SUPPORT_TOL)
        .collect();
    Ok(candidate.subset(&keep))
}

/// `mu = min_k (f_k - v_k) sigma_k`, the observable lower-bound candidate.
pub fn mu_bound(f_on_h: &[f64], v_on_h: &[f64], signs: &[f64]) -> Result<f64> {
    if v_on_h.len() != f_on_h.len() || signs.len() != f_on_h.len() {
        return Err(Error::DimensionMismatch {
            expected: f_on_h.len(),
            got: v_on_h.len().min(signs.len()),
        });
    }
    if f_on_h.is_empty() {
        return Err(Error::EmptyInput("mu bound needs at least one point"));
    }
    Ok(f_on_h
        .iter()
        .zip(v_on_h)
        .zip(signs)
        .map(|((f, v), s)| (f - v) * s)
        .fold(f64::INFINITY, f64::min))
}

/// The two-sided bound verdict: when the candidate is a certified H-set and
/// `mu > 0`, the best-approximation error lies in `[mu, sup_error]`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SandwichVerdict {
    pub applicable: bool,
    pub mu: f64,
    pub sup_error: f64,
    pub gap_ratio: Option<f64>,
}

pub fn error_sandwich(mu: f64, sup_error: f64, cert: &HSetCertificate) -> SandwichVerdict {
    assert!(sup_error >= 0.0, "sup error must be nonnegative");
    let applicable = cert.is_hset && mu > 0.0;
    SandwichVerdict {
        applicable,
        mu,
        sup_error,
        gap_ratio: applicable.then(|| sup_error / mu),
    }
}
