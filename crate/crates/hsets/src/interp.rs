//! Kernel interpolation machinery: interpolants, Lagrange bases, Power and
//! Lebesgue functions, cardinal functions, fill distance, and the
//! target-dependent zero-set distance.

use crate::kernels::{distance, kernel_matrix, squared_distance, Kernel, PointSet, RegularGrid};
use crate::linalg::{dot, spd_factor, spd_solve, symmetric_inverse, DenseMatrix, SpdFactorization};
use crate::{Error, Result};

/// Squared Power function values at or below this are treated as "the point
/// already lies in the center set".
pub const DEGENERATE_TOL: f64 = 1e-10;

/// A kernel, its centers `X`, and the factored / inverted kernel matrix.
///
/// The inverse entries drive every Lagrange-basis query: the Lagrangian of
/// center `x_i` is `u_i(x) = sum_j inv[i][j] K(x, x_j)`.
#[derive(Debug, Clone)]
pub struct KernelSystem {
    kernel: Kernel,
    centers: PointSet,
    fact: SpdFactorization,
    inverse: DenseMatrix,
}

/// Builds the system for distinct centers; fails with `DegeneratePoints` when
/// the kernel matrix is numerically singular (coinciding points).
pub fn build_system(kernel: Kernel, centers: PointSet) -> Result<KernelSystem> {
    let km = kernel_matrix(&kernel, &centers, &centers)?;
    let fact = spd_factor(&km)?;
    if !fact.ok() {
        return Err(Error::DegeneratePoints);
    }
    let inverse = symmetric_inverse(&fact)?;
    Ok(KernelSystem {
        kernel,
        centers,
        fact,
        inverse,
    })
}

impl KernelSystem {
    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    pub fn centers(&self) -> &PointSet {
        &self.centers
    }

    /// Number of centers.
    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    pub fn factorization(&self) -> &SpdFactorization {
        &self.fact
    }

    /// Entries of the symmetric inverse kernel matrix.
    pub fn inverse(&self) -> &DenseMatrix {
        &self.inverse
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.centers.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.centers.dim(),
                got: x.len(),
            });
        }
        Ok(())
    }

    /// The vector `(K(x_1, x), ..., K(x_n, x))`.
    pub fn kernel_values_at(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(x)?;
        Ok(self
            .centers
            .iter()
            .map(|c| self.kernel.radial(squared_distance(c, x)))
            .collect())
    }

    /// All Lagrange basis values `(u_1(x), ..., u_n(x))`; `u_i(x_j) = δ_ij`.
    pub fn lagrangians_at(&self, x: &[f64]) -> Result<Vec<f64>> {
        let k = self.kernel_values_at(x)?;
        Ok(self.inverse.matvec(&k))
    }

    /// Squared Power function `P_X^2(x) = K(x,x) - sum_i u_i(x) K(x_i, x)`,
    /// clamped at zero from below against rounding.
    pub fn power_function_sq(&self, x: &[f64]) -> Result<f64> {
        let k = self.kernel_values_at(x)?;
        let u = self.inverse.matvec(&k);
        let p2 = self.kernel.at_zero() - dot(&u, &k);
        Ok(if p2 < 0.0 { 0.0 } else { p2 })
    }

    /// Lebesgue function `L_X(x) = sum_i |u_i(x)|`.
    pub fn lebesgue_function(&self, x: &[f64]) -> Result<f64> {
        Ok(self.lagrangians_at(x)?.iter().map(|v| v.abs()).sum())
    }

    /// Interpolant with the given values at the centers.
    pub fn interpolate(&self, values: &[f64]) -> Result<Interpolant<'_>> {
        if values.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                got: values.len(),
            });
        }
        let coefficients = if self.is_empty() {
            Vec::new()
        } else {
            spd_solve(&self.fact, values)?
        };
        Ok(Interpolant {
            system: self,
            coefficients,
        })
    }

    /// The cardinal function of `xi` over `X ∪ {xi}`: one at `xi`, zero on X.
    ///
    /// Requires `xi` to be separated from the centers
    /// (`P_X^2(xi) > DEGENERATE_TOL`).
    pub fn cardinal_g(&self, xi: &[f64]) -> Result<CardinalFunction<'_>> {
        let p2 = self.power_function_sq(xi)?;
        if p2 <= DEGENERATE_TOL {
            return Err(Error::PointTooClose);
        }
        let u = self.lagrangians_at(xi)?;
        Ok(CardinalFunction {
            system: self,
            xi: xi.to_vec(),
            coeff_xi: 1.0 / p2,
            coeff_centers: u.iter().map(|&ui| -ui / p2).collect(),
        })
    }
}

/// A function `s = sum_j c_j K(., x_j)` in the span of the center translates.
#[derive(Debug, Clone)]
pub struct Interpolant<'a> {
    system: &'a KernelSystem,
    coefficients: Vec<f64>,
}

impl Interpolant<'_> {
    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        let k = self.system.kernel_values_at(x)?;
        Ok(dot(&self.coefficients, &k))
    }
}

/// The cardinal function `g_xi` in the coefficient basis of `X ∪ {xi}`:
/// `g(x) = coeff_xi K(x, xi) + sum_j coeff_centers[j] K(x, x_j)`.
#[derive(Debug, Clone)]
pub struct CardinalFunction<'a> {
    system: &'a KernelSystem,
    xi: Vec<f64>,
    coeff_xi: f64,
    coeff_centers: Vec<f64>,
}

impl CardinalFunction<'_> {
    pub fn xi(&self) -> &[f64] {
        &self.xi
    }

    pub fn coeff_xi(&self) -> f64 {
        self.coeff_xi
    }

    pub fn coeff_centers(&self) -> &[f64] {
        &self.coeff_centers
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        let k = self.system.kernel_values_at(x)?;
        let kxi = self.system.kernel().eval(x, &self.xi)?;
        Ok(self.coeff_xi * kxi + dot(&self.coeff_centers, &k))
    }
}

/// Fill distance `h(X, G) = max over g in G of min over x in X of |x - g|`,
/// with the finite grid `G` standing in for the continuous domain.
pub fn fill_distance(centers: &PointSet, grid: &PointSet) -> Result<f64> {
    if centers.is_empty() {
        return Err(Error::EmptyInput("fill distance needs at least one center"));
    }
    if grid.is_empty() {
        return Err(Error::EmptyInput("fill distance needs a nonempty grid"));
    }
    if centers.dim() != grid.dim() {
        return Err(Error::DimensionMismatch {
            expected: centers.dim(),
            got: grid.dim(),
        });
    }
    Ok(grid
        .iter()
        .map(|g| {
            centers
                .iter()
                .map(|x| distance(x, g))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max))
}

/// Distance of the grid to the zero set of `f - s` united with the centers.
///
/// Zeros are estimated on the grid: nodes where `f - s` vanishes to rounding
/// count directly, and sign changes along grid edges are refined by linear
/// interpolation. Since the centers are always part of the zero set, a
/// constant-sign residual automatically falls back to `fill_distance`.
pub fn zero_set_distance<F>(
    sys: &KernelSystem,
    s: &Interpolant<'_>,
    f: F,
    grid: &RegularGrid,
) -> Result<f64>
where
    F: Fn(&[f64]) -> f64,
{
    if sys.is_empty() {
        return Err(Error::EmptyInput("zero-set distance needs centers"));
    }
    let nodes: Vec<Vec<f64>> = (0..grid.len()).map(|i| grid.node(i)).collect();
    let mut errs = Vec::with_capacity(nodes.len());
    let mut f_inf = 0.0f64;
    for p in &nodes {
        let fv = f(p);
        f_inf = f_inf.max(fv.abs());
        errs.push(fv - s.eval(p)?);
    }
    let node_zero_tol = 1e-12 * (1.0 + f_inf);

    let mut zeros: Vec<Vec<f64>> = sys.centers().iter().map(|p| p.to_vec()).collect();
    for (p, &e) in nodes.iter().zip(&errs) {
        if e.abs() <= node_zero_tol {
            zeros.push(p.clone());
        }
    }
    for (a, b) in grid.edges() {
        let (ea, eb) = (errs[a], errs[b]);
        if ea.abs() > node_zero_tol && eb.abs() > node_zero_tol && ea * eb < 0.0 {
            let lambda = ea / (ea - eb);
            let pa = &nodes[a];
            let pb = &nodes[b];
            zeros.push(
                pa.iter()
                    .zip(pb)
                    .map(|(x, y)| x + lambda * (y - x))
                    .collect(),
            );
        }
    }

    Ok(nodes
        .iter()
        .map(|p| {
            zeros
                .iter()
                .map(|z| distance(z, p))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max))
}
