//! Kernels, point sets, box domains, and regular evaluation grids.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::linalg::DenseMatrix;
use crate::{Error, Result};

/// Supported families of symmetric strictly positive definite radial kernels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelFamily {
    Gaussian,
    InverseMultiquadric,
    Matern32,
}

/// A radial kernel with a positive length scale `s`.
///
/// Conventions, with `r = ||x - y||`:
/// * Gaussian: `exp(-r^2 / s^2)` (so scale one is `exp(-r^2)`),
/// * inverse multiquadric: `1 / sqrt(1 + r^2 / s^2)`,
/// * Matern 3/2: `(1 + sqrt(3) r / s) exp(-sqrt(3) r / s)`.
///
/// All three are strictly positive definite on every box, take the value 1 at
/// `r = 0`, and are symmetric bit-exactly because they only see `r^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Kernel {
    family: KernelFamily,
    scale: f64,
}

impl Kernel {
    pub fn new(family: KernelFamily, scale: f64) -> Self {
        assert!(
            scale.is_finite() && scale > 0.0,
            "kernel scale must be positive"
        );
        Kernel { family, scale }
    }

    pub fn gaussian(scale: f64) -> Self {
        Self::new(KernelFamily::Gaussian, scale)
    }

    pub fn inverse_multiquadric(scale: f64) -> Self {
        Self::new(KernelFamily::InverseMultiquadric, scale)
    }

    pub fn matern32(scale: f64) -> Self {
        Self::new(KernelFamily::Matern32, scale)
    }

    pub fn family(&self) -> KernelFamily {
        self.family
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Kernel value as a function of the squared distance.
    pub fn radial(&self, r2: f64) -> f64 {
        let s2 = self.scale * self.scale;
        match self.family {
            KernelFamily::Gaussian => (-r2 / s2).exp(),
            KernelFamily::InverseMultiquadric => 1.0 / (1.0 + r2 / s2).sqrt(),
            KernelFamily::Matern32 => {
                let a = (3.0 * r2).sqrt() / self.scale;
                (1.0 + a) * (-a).exp()
            }
        }
    }

    /// `K(x, y)`; errors when the points have different dimensions.
    pub fn eval(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        if x.len() != y.len() {
            return Err(Error::DimensionMismatch {
                expected: x.len(),
                got: y.len(),
            });
        }
        Ok(self.radial(squared_distance(x, y)))
    }

    /// `K(x, x)`, the peak value (1 for all supported families).
    pub fn at_zero(&self) -> f64 {
        self.radial(0.0)
    }
}

pub fn squared_distance(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum()
}

pub fn distance(x: &[f64], y: &[f64]) -> f64 {
    squared_distance(x, y).sqrt()
}

/// An ordered list of points in a common dimension.
///
/// `labels` optionally ties each point back to an index in a larger set, e.g.
/// a candidate subset remembering its position in the full grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointSet {
    dim: usize,
    points: Vec<Vec<f64>>,
    labels: Option<Vec<usize>>,
}

impl PointSet {
    pub fn new(dim: usize, points: Vec<Vec<f64>>) -> Self {
        assert!(
            points
                .iter()
                .all(|p| p.len() == dim && p.iter().all(|v| v.is_finite())),
            "every point must have dimension {dim} and finite coordinates"
        );
        PointSet {
            dim,
            points,
            labels: None,
        }
    }

    pub fn with_labels(dim: usize, points: Vec<Vec<f64>>, labels: Vec<usize>) -> Self {
        assert_eq!(points.len(), labels.len());
        let mut ps = Self::new(dim, points);
        ps.labels = Some(labels);
        ps
    }

    pub fn empty(dim: usize) -> Self {
        Self::new(dim, Vec::new())
    }

    pub fn from_1d(coords: &[f64]) -> Self {
        Self::new(1, coords.iter().map(|&c| vec![c]).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.points.iter().map(|p| p.as_slice())
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    /// Label of point `i`: the stored label, or `i` itself.
    pub fn label(&self, i: usize) -> usize {
        self.labels.as_ref().map_or(i, |l| l[i])
    }

    pub fn labels(&self) -> Option<&[usize]> {
        self.labels.as_deref()
    }

    /// Subset by indices; labels record the provenance of each kept point.
    pub fn subset(&self, indices: &[usize]) -> PointSet {
        let points = indices.iter().map(|&i| self.points[i].clone()).collect();
        let labels = indices.iter().map(|&i| self.label(i)).collect();
        PointSet::with_labels(self.dim, points, labels)
    }

    pub fn push(&mut self, p: Vec<f64>) {
        assert_eq!(p.len(), self.dim);
        self.points.push(p);
        if let Some(l) = &mut self.labels {
            l.push(l.len());
        }
    }

    pub fn min_pairwise_distance(&self) -> Option<f64> {
        let n = self.points.len();
        if n < 2 {
            return None;
        }
        let mut best = f64::INFINITY;
        for i in 0..n {
            for j in i + 1..n {
                best = best.min(distance(&self.points[i], &self.points[j]));
            }
        }
        Some(best)
    }
}

/// An axis-aligned box `[lo_1, hi_1] x ... x [lo_d, hi_d]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoxDomain {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl BoxDomain {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Self {
        assert_eq!(lo.len(), hi.len());
        assert!(
            lo.iter()
                .zip(&hi)
                .all(|(a, b)| a.is_finite() && b.is_finite() && a < b),
            "box requires lo < hi per axis"
        );
        BoxDomain { lo, hi }
    }

    /// The cube `[-1, 1]^dim`.
    pub fn symmetric_unit(dim: usize) -> Self {
        Self::new(vec![-1.0; dim], vec![1.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[f64] {
        &self.lo
    }

    pub fn hi(&self) -> &[f64] {
        &self.hi
    }

    /// `n` points sampled coordinate-by-coordinate from the uniform
    /// distribution on the box; deterministic given the generator state.
    pub fn sample_uniform<R: Rng>(&self, n: usize, rng: &mut R) -> PointSet {
        let pts = (0..n)
            .map(|_| {
                (0..self.dim())
                    .map(|d| rng.gen_range(self.lo[d]..self.hi[d]))
                    .collect()
            })
            .collect();
        PointSet::new(self.dim(), pts)
    }
}

/// A regular tensor grid over a box, with `shape[d] >= 2` nodes per axis.
///
/// Nodes are indexed row-major with the last axis fastest; `edges` yields all
/// axis-aligned nearest-neighbor pairs, the unit cells of sign-change scans.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegularGrid {
    domain: BoxDomain,
    shape: Vec<usize>,
}

impl RegularGrid {
    pub fn new(domain: BoxDomain, shape: Vec<usize>) -> Self {
        assert_eq!(shape.len(), domain.dim());
        assert!(
            shape.iter().all(|&s| s >= 2),
            "grid needs >= 2 nodes per axis"
        );
        RegularGrid { domain, shape }
    }

    /// Square grid with `res` nodes per axis.
    pub fn square(domain: BoxDomain, res: usize) -> Self {
        let dim = domain.dim();
        Self::new(domain, vec![res; dim])
    }

    pub fn domain(&self) -> &BoxDomain {
        &self.domain
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn dim(&self) -> usize {
        self.shape.len()
    }

    pub fn len(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn axis_coord(&self, d: usize, i: usize) -> f64 {
        let span = self.domain.hi[d] - self.domain.lo[d];
        self.domain.lo[d] + (i as f64) * span / ((self.shape[d] - 1) as f64)
    }

    pub fn node(&self, flat: usize) -> Vec<f64> {
        let mut idx = flat;
        let dim = self.dim();
        let mut multi = vec![0usize; dim];
        for d in (0..dim).rev() {
            multi[d] = idx % self.shape[d];
            idx /= self.shape[d];
        }
        (0..dim).map(|d| self.axis_coord(d, multi[d])).collect()
    }

    pub fn points(&self) -> PointSet {
        PointSet::new(self.dim(), (0..self.len()).map(|i| self.node(i)).collect())
    }

    /// All axis-aligned neighbor pairs `(a, b)` with `a < b` in flat indexing.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let dim = self.dim();
        let mut strides = vec![1usize; dim];
        for d in (0..dim.saturating_sub(1)).rev() {
            strides[d] = strides[d + 1] * self.shape[d + 1];
        }
        let mut out = Vec::new();
        for flat in 0..self.len() {
            let mut idx = flat;
            let mut multi = vec![0usize; dim];
            for d in (0..dim).rev() {
                multi[d] = idx % self.shape[d];
                idx /= self.shape[d];
            }
            for d in 0..dim {
                if multi[d] + 1 < self.shape[d] {
                    out.push((flat, flat + strides[d]));
                }
            }
        }
        out
    }

    /// Largest axis step, the resolution scale of grid-based estimates.
    pub fn max_spacing(&self) -> f64 {
        (0..self.dim())
            .map(|d| (self.domain.hi[d] - self.domain.lo[d]) / ((self.shape[d] - 1) as f64))
            .fold(0.0, f64::max)
    }
}

/// The matrix of kernel values `K(p_i, q_j)`, `p` indexing rows.
///
/// With `p` and `q` the same set the result is symmetric bit-exactly and
/// strictly positive definite for distinct points.
pub fn kernel_matrix(kernel: &Kernel, p: &PointSet, q: &PointSet) -> Result<DenseMatrix> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            got: q.dim(),
        });
    }
    Ok(DenseMatrix::from_fn(p.len(), q.len(), |i, j| {
        kernel.radial(squared_distance(p.point(i), q.point(j)))
    }))
}

/// Value of the expansion `sum_i coeffs[i] * K(x, centers_i)` at `x`.
pub fn expansion_value(
    kernel: &Kernel,
    centers: &PointSet,
    coeffs: &[f64],
    x: &[f64],
) -> Result<f64> {
    if coeffs.len() != centers.len() {
        return Err(Error::DimensionMismatch {
            expected: centers.len(),
            got: coeffs.len(),
        });
    }
    if x.len() != centers.dim() {
        return Err(Error::DimensionMismatch {
            expected: centers.dim(),
            got: x.len(),
        });
    }
    Ok(centers
        .iter()
        .zip(coeffs)
        .map(|(c, w)| w * kernel.radial(squared_distance(x, c)))
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::spd_factor;
    use crate::test_util::{random_points, rng};
    use rand::Rng;

    #[test]
    fn gaussian_values() {
        let k = Kernel::gaussian(1.0);
        assert_eq!(k.eval(&[0.3, -0.2], &[0.3, -0.2]).unwrap(), 1.0);
        let v = k.eval(&[0.0], &[1.0]).unwrap();
        assert!((v - (-1.0f64).exp()).abs() < 1e-15);
        let k2 = Kernel::gaussian(2.0);
        let v = k2.eval(&[0.0], &[2.0]).unwrap();
        assert!((v - (-1.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn eval_dimension_mismatch() {
        let k = Kernel::gaussian(1.0);
        assert!(matches!(
            k.eval(&[0.0], &[0.0, 1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn matrix_examples() {
        let k = Kernel::gaussian(1.0);
        let single = PointSet::from_1d(&[0.0]);
        let m = kernel_matrix(&k, &single, &single).unwrap();
        assert_eq!(m.rows(), 1);
        assert_eq!(m[(0, 0)], 1.0);

        let two = PointSet::from_1d(&[0.0, 1.0]);
        let m = kernel_matrix(&k, &two, &two).unwrap();
        let e1 = (-1.0f64).exp();
        assert_eq!(m[(0, 0)], 1.0);
        assert!((m[(0, 1)] - e1).abs() < 1e-15);
        assert!((m[(1, 0)] - e1).abs() < 1e-15);

        let rect = kernel_matrix(&k, &single, &two).unwrap();
        assert_eq!(rect.rows(), 1);
        assert_eq!(rect.cols(), 2);
        assert!((rect[(0, 1)] - e1).abs() < 1e-15);
    }

    #[test]
    fn square_matrix_exactly_symmetric() {
        let mut r = rng(7);
        for family in [
            KernelFamily::Gaussian,
            KernelFamily::InverseMultiquadric,
            KernelFamily::Matern32,
        ] {
            let k = Kernel::new(family, 0.8);
            let pts = random_points(&mut r, 12, 2);
            let m = kernel_matrix(&k, &pts, &pts).unwrap();
            assert_eq!(m.max_asymmetry(), 0.0);
        }
    }

    #[test]
    fn random_sets_strictly_positive_definite() {
        let mut r = rng(11);
        for trial in 0..100 {
            let family = match trial % 3 {
                0 => KernelFamily::Gaussian,
                1 => KernelFamily::InverseMultiquadric,
                _ => KernelFamily::Matern32,
            };
            let k = Kernel::new(family, 1.0);
            let n = r.gen_range(1..=20);
            let pts = random_points(&mut r, n, 2);
            let m = kernel_matrix(&k, &pts, &pts).unwrap();
            assert!(spd_factor(&m).unwrap().ok(), "family {family:?}, n={n}");
        }
    }

    #[test]
    fn shift_and_rotation_invariance() {
        let mut r = rng(13);
        for family in [
            KernelFamily::Gaussian,
            KernelFamily::InverseMultiquadric,
            KernelFamily::Matern32,
        ] {
            let k = Kernel::new(family, 1.3);
            for _ in 0..50 {
                let x = [r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)];
                let y = [r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)];
                let t = [r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0)];
                let xs = [x[0] + t[0], x[1] + t[1]];
                let ys = [y[0] + t[0], y[1] + t[1]];
                let base = k.eval(&x, &y).unwrap();
                assert!((k.eval(&xs, &ys).unwrap() - base).abs() <= 1e-14);

                let phi: f64 = r.gen_range(0.0..std::f64::consts::TAU);
                let rot = |p: &[f64; 2]| {
                    [
                        phi.cos() * p[0] - phi.sin() * p[1],
                        phi.sin() * p[0] + phi.cos() * p[1],
                    ]
                };
                assert!((k.eval(&rot(&x), &rot(&y)).unwrap() - base).abs() <= 1e-14);
            }
        }
    }

    #[test]
    fn grid_shape_and_edges() {
        let g = RegularGrid::square(BoxDomain::symmetric_unit(2), 3);
        assert_eq!(g.len(), 9);
        let pts = g.points();
        assert_eq!(pts.point(0), &[-1.0, -1.0]);
        assert_eq!(pts.point(8), &[1.0, 1.0]);
        assert_eq!(pts.point(4), &[0.0, 0.0]);
        // 2 * 3 horizontal rows of 2 edges + same vertical
        assert_eq!(g.edges().len(), 12);
        assert!((g.max_spacing() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn expansion_matches_manual_sum() {
        let k = Kernel::gaussian(1.0);
        let centers = PointSet::from_1d(&[0.0, 1.0]);
        let v = expansion_value(&k, &centers, &[2.0, -1.0], &[0.5]).unwrap();
        let expect = 2.0 * k.radial(0.25) - 1.0 * k.radial(0.25);
        assert!((v - expect).abs() < 1e-15);
    }
}
