//! Discrete Chebyshev (minimax) approximation on finite point sets.
//!
//! `solve_minimax` poses `min eta` subject to `|f_k - B_k x| <= eta` as an LP
//! and solves primal and dual with one simplex run. The dual weights `w` of
//! the optimal basis satisfy `Bᵀw = 0`, `||w||_1 = 1`, `fᵀw = eta*`, vanish
//! off the extremal points, and carry the residual signs there, so the
//! support of `w` hands back an extremal-point H-set for free.

use crate::hset::SignedPointSet;
use crate::kernels::PointSet;
use crate::linalg::{dot, DenseMatrix};
use crate::lp::{solve_lp, LpProblem, LpStatus, RowSense, Sense};
use crate::{Error, Result};

/// Dual weights at or below this magnitude are treated as zero support.
pub const SUPPORT_TOL: f64 = 1e-9;
/// Minimax values at or below this mean the data is exactly representable
/// (data in this crate is O(1)-scaled kernel and peaks values).
pub const EMPTY_ETA_TOL: f64 = 1e-9;

/// A minimax fit together with the dual weight vector of the same basis.
#[derive(Debug, Clone)]
pub struct ChebSolution {
    /// Coefficients `x*` of the best approximation in the trial basis.
    pub coefficients: Vec<f64>,
    /// The minimax value `eta* = max_k |f_k - (B x*)_k|`.
    pub eta_star: f64,
    /// Residuals `f - B x*`, one per point.
    pub residuals: Vec<f64>,
    /// Residual signs (+1 for nonnegative).
    pub sigma_star: Vec<f64>,
    /// Dual weights `w*` with `Bᵀw* = 0`, `||w*||_1 = 1`, `fᵀw* = eta*`.
    pub dual_weights: Vec<f64>,
}

/// Best sup-norm approximation of `data` on the rows of `basis_values`.
///
/// `basis_values` is N x n with entry `(k, i)` the i-th basis function at the
/// k-th point.
pub fn solve_minimax(basis_values: &DenseMatrix, data: &[f64]) -> Result<ChebSolution> {
    let n_pts = basis_values.rows();
    let n_basis = basis_values.cols();
    if n_pts == 0 {
        return Err(Error::EmptyInput("minimax needs at least one point"));
    }
    if data.len() != n_pts {
        return Err(Error::DimensionMismatch {
            expected: n_pts,
            got: data.len(),
        });
    }

    // variables (x, eta); rows: -Bx - eta <= -f, then Bx - eta <= f
    let mut rows = DenseMatrix::zeros(2 * n_pts, n_basis + 1);
    let mut rhs = vec![0.0; 2 * n_pts];
    for k in 0..n_pts {
        for i in 0..n_basis {
            rows[(k, i)] = -basis_values[(k, i)];
            rows[(n_pts + k, i)] = basis_values[(k, i)];
        }
        rows[(k, n_basis)] = -1.0;
        rows[(n_pts + k, n_basis)] = -1.0;
        rhs[k] = -data[k];
        rhs[n_pts + k] = data[k];
    }
    let mut objective = vec![0.0; n_basis + 1];
    objective[n_basis] = 1.0;
    let problem = LpProblem::new(
        Sense::Min,
        objective,
        rows,
        vec![RowSense::Le; 2 * n_pts],
        rhs,
    );
    let sol = solve_lp(&problem)?;
    if sol.status != LpStatus::Optimal {
        return Err(Error::UnexpectedLpStatus(sol.status));
    }

    let coefficients = sol.primal[..n_basis].to_vec();
    let eta_star = sol.primal[n_basis];
    let residuals: Vec<f64> = (0..n_pts)
        .map(|k| data[k] - dot(basis_values.row(k), &coefficients))
        .collect();
    let sigma_star = residuals
        .iter()
        .map(|&r| if r >= 0.0 { 1.0 } else { -1.0 })
        .collect();
    // the LE-row multipliers of the two blocks combine into the signed
    // dual weight vector of the classic dual program
    let dual_weights = (0..n_pts)
        .map(|k| sol.dual[n_pts + k] - sol.dual[k])
        .collect();

    Ok(ChebSolution {
        coefficients,
        eta_star,
        residuals,
        sigma_star,
        dual_weights,
    })
}

/// The support of the dual weights as a signed point set.
///
/// By complementary slackness the support consists of extremal points and
/// the weight signs equal the residual signs there, so the result certifies
/// as an H-set (`hset::test_hset`) whenever the dual is a basic solution.
pub fn extract_extremal_hset(sol: &ChebSolution, points: &PointSet) -> Result<SignedPointSet> {
    if points.len() != sol.dual_weights.len() {
        return Err(Error::DimensionMismatch {
            expected: sol.dual_weights.len(),
            got: points.len(),
        });
    }
    if sol.eta_star <= EMPTY_ETA_TOL {
        return Err(Error::EmptySupport);
    }
    let support: Vec<usize> = (0..points.len())
        .filter(|&k| sol.dual_weights[k].abs() > SUPPORT_TOL)
        .collect();
    if support.is_empty() {
        return Err(Error::EmptySupport);
    }
    let signs = support
        .iter()
        .map(|&k| {
            if sol.dual_weights[k] >= 0.0 {
                1.0
            } else {
                -1.0
            }
        })
        .collect();
    SignedPointSet::new(points.subset(&support), signs)
}

/// Best approximation errors on subsets bound those on the full set from
/// below; returns whether the pair respects that within tolerance.
pub fn minimax_on_subset_bound(eta_subset: f64, eta_full: f64) -> bool {
    eta_subset <= eta_full + 1e-9
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hset::test_hset;
    use crate::kernels::{kernel_matrix, Kernel, PointSet};
    use crate::test_util::{random_points, rng};
    use rand::Rng;

    #[test]
    fn two_point_gaussian_translate() {
        // basis K(., 0) sampled at {0, 1}; data (0, 1)
        let a = (-1.0f64).exp();
        let basis = DenseMatrix::from_rows(&[vec![1.0], vec![a]]);
        let sol = solve_minimax(&basis, &[0.0, 1.0]).unwrap();
        let expect = 1.0 / (1.0 + a);
        assert!((sol.eta_star - expect).abs() < 1e-10);
        assert!((sol.coefficients[0] - expect).abs() < 1e-10);
        assert_eq!(sol.sigma_star, vec![-1.0, 1.0]);
        assert!((sol.dual_weights[0] + a / (1.0 + a)).abs() < 1e-9);
        assert!((sol.dual_weights[1] - expect).abs() < 1e-9);
    }

    #[test]
    fn representable_data_has_zero_eta() {
        let basis = DenseMatrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]]);
        // data = first column + 2 * second column
        let sol = solve_minimax(&basis, &[1.0, 2.0, 3.0]).unwrap();
        assert!(sol.eta_star <= 1e-10);
        let points = PointSet::from_1d(&[0.0, 1.0, 2.0]);
        assert!(matches!(
            extract_extremal_hset(&sol, &points),
            Err(Error::EmptySupport)
        ));
    }

    #[test]
    fn zero_basis_returns_sup_norm() {
        let basis = DenseMatrix::zeros(3, 2);
        let sol = solve_minimax(&basis, &[0.5, -2.0, 1.0]).unwrap();
        assert!((sol.eta_star - 2.0).abs() < 1e-10);
        assert_eq!(sol.coefficients, vec![0.0, 0.0]);
    }

    #[test]
    fn extract_two_point_hset() {
        let a = (-1.0f64).exp();
        let basis = DenseMatrix::from_rows(&[vec![1.0], vec![a]]);
        let sol = solve_minimax(&basis, &[0.0, 1.0]).unwrap();
        let points = PointSet::from_1d(&[0.0, 1.0]);
        let h = extract_extremal_hset(&sol, &points).unwrap();
        assert_eq!(h.len(), 2);
        assert_eq!(h.signs(), &[-1.0, 1.0]);
        assert_eq!(h.points().point(0), &[0.0]);
        assert_eq!(h.points().point(1), &[1.0]);
    }

    #[test]
    fn subset_bound_cases() {
        assert!(minimax_on_subset_bound(0.5, 0.5));
        assert!(minimax_on_subset_bound(0.0, 0.3));
        assert!(!minimax_on_subset_bound(0.4, 0.3));
    }

    #[test]
    fn random_subset_bound_holds() {
        let mut r = rng(51);
        for _ in 0..20 {
            let n = r.gen_range(1..=5);
            let big = r.gen_range(n + 2..=25);
            let basis = DenseMatrix::from_fn(big, n, |_, _| r.gen_range(-1.0..1.0));
            let data: Vec<f64> = (0..big).map(|_| r.gen_range(-1.0..1.0)).collect();
            let full = solve_minimax(&basis, &data).unwrap();

            let keep: Vec<usize> = (0..big).filter(|_| r.gen_bool(0.6)).collect();
            if keep.is_empty() {
                continue;
            }
            let sub_basis = DenseMatrix::from_fn(keep.len(), n, |i, j| basis[(keep[i], j)]);
            let sub_data: Vec<f64> = keep.iter().map(|&k| data[k]).collect();
            let sub = solve_minimax(&sub_basis, &sub_data).unwrap();
            assert!(minimax_on_subset_bound(sub.eta_star, full.eta_star));
        }
    }

    /// The five solution invariants plus support size and certification on
    /// random instances.
    #[test]
    fn random_instances_invariants() {
        let mut r = rng(99);
        for trial in 0..100 {
            let n = r.gen_range(1..=12);
            let n_pts = r.gen_range(n + 2..=60);
            let basis = DenseMatrix::from_fn(n_pts, n, |_, _| r.gen_range(-1.0..1.0));
            let data: Vec<f64> = (0..n_pts).map(|_| r.gen_range(-1.0..1.0)).collect();
            let sol = solve_minimax(&basis, &data).unwrap();

            // ||residuals||_inf = eta*
            let rinf = sol.residuals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            assert!((rinf - sol.eta_star).abs() <= 1e-8, "trial {trial}");

            // Bᵀw = 0 and ||w||_1 = 1
            let btw = basis.matvec_transpose(&sol.dual_weights);
            for v in &btw {
                assert!(v.abs() <= 1e-8, "trial {trial}: Bᵀw entry {v}");
            }
            let l1: f64 = sol.dual_weights.iter().map(|v| v.abs()).sum();
            assert!((l1 - 1.0).abs() <= 1e-8, "trial {trial}: |w|_1 = {l1}");

            // strong duality fᵀw = eta*
            let fw = dot(&data, &sol.dual_weights);
            assert!(
                (fw - sol.eta_star).abs() <= 1e-7,
                "trial {trial}: fᵀw = {fw} vs {}",
                sol.eta_star
            );

            // slackness and sign agreement
            let mut nnz = 0;
            for k in 0..n_pts {
                let w = sol.dual_weights[k];
                if sol.residuals[k].abs() < sol.eta_star - 1e-7 {
                    assert!(w.abs() <= SUPPORT_TOL, "trial {trial} point {k}");
                }
                if w.abs() > SUPPORT_TOL {
                    nnz += 1;
                    assert_eq!(w.signum(), sol.sigma_star[k], "trial {trial} point {k}");
                }
            }
            assert!(nnz <= n + 1, "trial {trial}: support {nnz} > n+1");

            if sol.eta_star > EMPTY_ETA_TOL {
                let pts = random_points(&mut r, n_pts, 2);
                let h = extract_extremal_hset(&sol, &pts).unwrap();
                let sub_basis =
                    DenseMatrix::from_fn(h.len(), n, |i, j| basis[(pts_index(&h, i), j)]);
                let a = crate::hset::assemble_signed_matrix(&sub_basis, h.signs()).unwrap();
                let cert = test_hset(&a).unwrap();
                assert!(cert.is_hset, "trial {trial}: extremal support must certify");
            }
        }

        fn pts_index(h: &SignedPointSet, i: usize) -> usize {
            h.points().label(i)
        }
    }

    #[test]
    fn kernel_case_matches_lagrangian_structure() {
        // N = n+1 on X ∪ {xi}: the dual support is xi plus the centers with
        // nonvanishing Lagrangian there
        let mut r = rng(104);
        let k = Kernel::gaussian(1.0);
        let centers = random_points(&mut r, 6, 2);
        let xi = vec![r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)];
        let mut t = centers.clone();
        t.push(xi.clone());
        let basis = kernel_matrix(&k, &t, &centers).unwrap();
        let data: Vec<f64> = t.iter().map(crate::experiment::peaks).collect();
        let sol = solve_minimax(&basis, &data).unwrap();
        let h = extract_extremal_hset(&sol, &t).unwrap();

        let sys = crate::interp::build_system(k, centers).unwrap();
        let u = sys.lagrangians_at(&xi).unwrap();
        let expect: usize = 1 + u.iter().filter(|v| v.abs() > 1e-9).count();
        assert_eq!(h.len(), expect);
    }
}
