//! The reproducible experiment pipeline behind the `hsets` binary: seeded
//! center sampling, minimax fitting on a regular grid, threshold-based H-set
//! candidates, support reduction, zero-set maps, greedy selection, and
//! CSV/JSON emission.
//!
//! All outputs are deterministic functions of the configuration (including
//! the seed): reports carry no timestamps, grids are scanned in index order,
//! and numbers serialize in shortest round-trip form.

use std::fs;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cheb::{extract_extremal_hset, solve_minimax, ChebSolution};
use crate::divdiff::{
    divdiff_map, error_zero_map, greedy_select_by, lagrangian_zero_map, ErrorZeroMap, GreedyRule,
    GreedySelection, LagrangianCrossing,
};
use crate::hset::{
    error_sandwich, kernel_hset_matrix, mu_bound, reduce_support, test_hset, HSetCertificate,
    SandwichVerdict, SignedPointSet,
};
use crate::interp::{build_system, fill_distance, zero_set_distance, KernelSystem};
use crate::kernels::{expansion_value, kernel_matrix, BoxDomain, Kernel, PointSet, RegularGrid};
use crate::linalg::{dot, DenseMatrix};
use crate::{Error, Result};

/// The classical two-dimensional test surface of three Gaussian bumps.
pub fn peaks(p: &[f64]) -> f64 {
    assert_eq!(p.len(), 2, "peaks is a function of two variables");
    let (x, y) = (p[0], p[1]);
    3.0 * (1.0 - x) * (1.0 - x) * (-x * x - (y + 1.0) * (y + 1.0)).exp()
        - 10.0 * (x / 5.0 - x.powi(3) - y.powi(5)) * (-x * x - y * y).exp()
        - (1.0 / 3.0) * (-(x + 1.0) * (x + 1.0) - y * y).exp()
}

/// Declarative target choice, echoed into every report.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TargetSpec {
    /// `peaks`, optionally precomposed with the affine map onto `[-3,3]^2`.
    Peaks { rescale: bool },
    /// A kernel expansion loaded from a CSV with `x,y,coef` columns and
    /// evaluated with the configured kernel.
    CustomFile { path: String },
}

/// A target resolved to something evaluable anywhere in the domain.
#[derive(Debug, Clone)]
pub enum TargetFunction {
    Peaks {
        rescale: bool,
    },
    KernelExpansion {
        kernel: Kernel,
        centers: PointSet,
        coefficients: Vec<f64>,
    },
}

impl TargetFunction {
    pub fn eval(&self, p: &[f64]) -> f64 {
        match self {
            TargetFunction::Peaks { rescale: false } => peaks(p),
            TargetFunction::Peaks { rescale: true } => peaks(&[3.0 * p[0], 3.0 * p[1]]),
            TargetFunction::KernelExpansion {
                kernel,
                centers,
                coefficients,
            } => expansion_value(kernel, centers, coefficients, p)
                .expect("expansion dimensions were validated at load"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub kernel: Kernel,
    pub n_centers: usize,
    pub center_seed: u64,
    pub domain: BoxDomain,
    pub grid_resolution: usize,
    pub eval_grid_resolution: usize,
    pub target: TargetSpec,
    pub mu_thresholds: Vec<f64>,
    pub multiplier_threshold: Option<f64>,
}

impl ExperimentConfig {
    /// The flagship shape: Gaussian at scale one, 25 random centers in
    /// `[-1,1]^2`, an 11x11 fitting grid, and a 41x41 evaluation grid.
    pub fn paper_shape(seed: u64) -> Self {
        ExperimentConfig {
            kernel: Kernel::gaussian(1.0),
            n_centers: 25,
            center_seed: seed,
            domain: BoxDomain::symmetric_unit(2),
            grid_resolution: 11,
            eval_grid_resolution: 41,
            target: TargetSpec::Peaks { rescale: false },
            mu_thresholds: Vec::new(),
            multiplier_threshold: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_centers == 0 {
            return Err(Error::InvalidConfig("need at least one center"));
        }
        if self.grid_resolution < 2 || self.eval_grid_resolution < 2 {
            return Err(Error::InvalidConfig("grid resolutions must be at least 2"));
        }
        if !self
            .mu_thresholds
            .iter()
            .all(|t| t.is_finite() && *t >= 0.0)
        {
            return Err(Error::InvalidConfig("mu thresholds must be nonnegative"));
        }
        if let Some(t) = self.multiplier_threshold {
            if !(t.is_finite() && t >= 0.0) {
                return Err(Error::InvalidConfig(
                    "multiplier threshold must be nonnegative",
                ));
            }
        }
        Ok(())
    }

    pub fn resolve_target(&self) -> Result<TargetFunction> {
        match &self.target {
            TargetSpec::Peaks { rescale } => Ok(TargetFunction::Peaks { rescale: *rescale }),
            TargetSpec::CustomFile { path } => {
                let loaded = read_points_csv(Path::new(path))?;
                let coefficients = loaded.coefficients.ok_or_else(|| {
                    Error::Parse(format!("{path}: custom target needs a 'coef' column"))
                })?;
                if loaded.points.dim() != self.domain.dim() {
                    return Err(Error::DimensionMismatch {
                        expected: self.domain.dim(),
                        got: loaded.points.dim(),
                    });
                }
                Ok(TargetFunction::KernelExpansion {
                    kernel: self.kernel,
                    centers: loaded.points,
                    coefficients,
                })
            }
        }
    }

    /// Centers drawn uniformly from the domain with the configured seed.
    pub fn sample_centers(&self) -> Result<PointSet> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.center_seed);
        let centers = self.domain.sample_uniform(self.n_centers, &mut rng);
        if let Some(d) = centers.min_pairwise_distance() {
            if d <= 1e-12 {
                return Err(Error::DegeneratePoints);
            }
        }
        Ok(centers)
    }
}

/// Everything the downstream pipeline steps need from a minimax fit.
#[derive(Debug, Clone)]
pub struct ApproxRun {
    pub config: ExperimentConfig,
    pub target: TargetFunction,
    pub centers: PointSet,
    pub t_grid: RegularGrid,
    pub t_points: PointSet,
    pub eval_grid: RegularGrid,
    pub basis_on_t: DenseMatrix,
    pub f_on_t: Vec<f64>,
    pub solution: ChebSolution,
    pub sup_error_eval: f64,
}

/// Fits the trial space spanned by the seeded centers to the target on the
/// regular grid `T` in the sup norm, then measures the fit on the denser
/// evaluation grid.
pub fn run_approx(config: &ExperimentConfig) -> Result<ApproxRun> {
    config.validate()?;
    let target = config.resolve_target()?;
    let centers = config.sample_centers()?;
    let t_grid = RegularGrid::square(config.domain.clone(), config.grid_resolution);
    let t_points = t_grid.points();
    let eval_grid = RegularGrid::square(config.domain.clone(), config.eval_grid_resolution);

    let basis_on_t = kernel_matrix(&config.kernel, &t_points, &centers)?;
    let f_on_t: Vec<f64> = t_points.iter().map(|p| target.eval(p)).collect();
    let solution = solve_minimax(&basis_on_t, &f_on_t)?;

    let mut sup_error_eval = 0.0f64;
    for i in 0..eval_grid.len() {
        let p = eval_grid.node(i);
        let fit = expansion_value(&config.kernel, &centers, &solution.coefficients, &p)?;
        sup_error_eval = sup_error_eval.max((target.eval(&p) - fit).abs());
    }

    Ok(ApproxRun {
        config: config.clone(),
        target,
        centers,
        t_grid,
        t_points,
        eval_grid,
        basis_on_t,
        f_on_t,
        solution,
        sup_error_eval,
    })
}

impl ApproxRun {
    pub fn fit_value(&self, p: &[f64]) -> f64 {
        expansion_value(
            &self.config.kernel,
            &self.centers,
            &self.solution.coefficients,
            p,
        )
        .expect("fit evaluation dimensions")
    }

    pub fn report(&self) -> ApproxReport {
        let abs: Vec<f64> = self.solution.residuals.iter().map(|r| r.abs()).collect();
        ApproxReport {
            kernel: self.config.kernel,
            n_centers: self.config.n_centers,
            center_seed: self.config.center_seed,
            grid_resolution: self.config.grid_resolution,
            eval_grid_resolution: self.config.eval_grid_resolution,
            target: self.config.target.clone(),
            centers: self.centers.points().to_vec(),
            eta_star_on_t: self.solution.eta_star,
            sup_error_on_eval_grid: self.sup_error_eval,
            dual_support_size: self
                .solution
                .dual_weights
                .iter()
                .filter(|w| w.abs() > crate::cheb::SUPPORT_TOL)
                .count(),
            min_abs_residual: abs.iter().cloned().fold(f64::INFINITY, f64::min),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ApproxReport {
    pub kernel: Kernel,
    pub n_centers: usize,
    pub center_seed: u64,
    pub grid_resolution: usize,
    pub eval_grid_resolution: usize,
    pub target: TargetSpec,
    pub centers: Vec<Vec<f64>>,
    pub eta_star_on_t: f64,
    pub sup_error_on_eval_grid: f64,
    pub dual_support_size: usize,
    pub min_abs_residual: f64,
}

/// How an H-set candidate was carved out of the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SelectionRule {
    MuThreshold,
    TopResiduals,
    DualWeight,
}

/// One candidate with its verdict, achieved `mu`, and sandwich bracket.
#[derive(Debug, Clone)]
pub struct CandidateOutcome {
    pub selection: SelectionRule,
    pub threshold: f64,
    pub signed_set: SignedPointSet,
    pub certificate: HSetCertificate,
    pub mu: f64,
    pub sandwich: SandwichVerdict,
}

impl CandidateOutcome {
    pub fn report(&self) -> CandidateReport {
        CandidateReport {
            selection: self.selection,
            threshold: self.threshold,
            count: self.signed_set.len(),
            is_hset: self.certificate.is_hset,
            objective: self.certificate.objective,
            row_rank: self.certificate.row_rank,
            support_size: self
                .certificate
                .weights
                .iter()
                .filter(|w| **w > self.certificate.support_tol)
                .count(),
            mu: self.mu,
            sandwich: self.sandwich,
            labels: (0..self.signed_set.len())
                .map(|i| self.signed_set.points().label(i))
                .collect(),
            signs: self.signed_set.signs().to_vec(),
            points: self.signed_set.points().points().to_vec(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CandidateReport {
    pub selection: SelectionRule,
    pub threshold: f64,
    pub count: usize,
    pub is_hset: bool,
    pub objective: f64,
    pub row_rank: usize,
    pub support_size: usize,
    pub mu: f64,
    pub sandwich: SandwichVerdict,
    pub labels: Vec<usize>,
    pub signs: Vec<f64>,
    pub points: Vec<Vec<f64>>,
}

fn candidate_from_indices(
    run: &ApproxRun,
    indices: &[usize],
    selection: SelectionRule,
    threshold: f64,
) -> Result<CandidateOutcome> {
    let points = run.t_points.subset(indices);
    let signs: Vec<f64> = indices
        .iter()
        .map(|&k| {
            if run.solution.residuals[k] >= 0.0 {
                1.0
            } else {
                -1.0
            }
        })
        .collect();
    let signed_set = SignedPointSet::new(points, signs)?;
    let a = kernel_hset_matrix(&run.config.kernel, &run.centers, &signed_set)?;
    let certificate = test_hset(&a)?;

    let f_h: Vec<f64> = indices.iter().map(|&k| run.f_on_t[k]).collect();
    let v_h: Vec<f64> = indices
        .iter()
        .map(|&k| dot(run.basis_on_t.row(k), &run.solution.coefficients))
        .collect();
    let mu = mu_bound(&f_h, &v_h, signed_set.signs())?;
    let sandwich = error_sandwich(mu, run.sup_error_eval, &certificate);

    Ok(CandidateOutcome {
        selection,
        threshold,
        signed_set,
        certificate,
        mu,
        sandwich,
    })
}

/// All grid points whose |residual| reaches the threshold, signed by the
/// residual.
pub fn candidate_at_threshold(run: &ApproxRun, mu: f64) -> Result<CandidateOutcome> {
    let indices: Vec<usize> = (0..run.t_points.len())
        .filter(|&k| run.solution.residuals[k].abs() >= mu)
        .collect();
    if indices.is_empty() {
        return Err(Error::EmptySelection {
            threshold: mu,
            max_residual: run.solution.eta_star,
        });
    }
    candidate_from_indices(run, &indices, SelectionRule::MuThreshold, mu)
}

/// The `k` grid points of largest |residual| (ties toward lower index).
pub fn candidate_top_k(run: &ApproxRun, k: usize) -> Result<CandidateOutcome> {
    let n_pts = run.t_points.len();
    if k == 0 || n_pts == 0 {
        return Err(Error::EmptySelection {
            threshold: f64::INFINITY,
            max_residual: run.solution.eta_star,
        });
    }
    let mut order: Vec<usize> = (0..n_pts).collect();
    order.sort_by(|&a, &b| {
        run.solution.residuals[b]
            .abs()
            .partial_cmp(&run.solution.residuals[a].abs())
            .unwrap()
            .then(a.cmp(&b))
    });
    let take = k.min(n_pts);
    let mut indices = order[..take].to_vec();
    indices.sort_unstable();
    let threshold = run.solution.residuals[order[take - 1]].abs();
    candidate_from_indices(run, &indices, SelectionRule::TopResiduals, threshold)
}

/// Grid points carrying dual weight above the threshold; the simplex
/// analogue of selecting by interior-point multiplier magnitude.
pub fn candidate_by_dual_threshold(run: &ApproxRun, threshold: f64) -> Result<CandidateOutcome> {
    let indices: Vec<usize> = (0..run.t_points.len())
        .filter(|&k| run.solution.dual_weights[k].abs() > threshold)
        .collect();
    if indices.is_empty() {
        let max_w = run
            .solution
            .dual_weights
            .iter()
            .fold(0.0f64, |m, w| m.max(w.abs()));
        return Err(Error::EmptySelection {
            threshold,
            max_residual: max_w,
        });
    }
    candidate_from_indices(run, &indices, SelectionRule::DualWeight, threshold)
}

#[derive(Debug, Clone)]
pub struct ReduceOutcome {
    pub reduced: SignedPointSet,
    pub recertificate: HSetCertificate,
    pub size_before: usize,
    pub size_after: usize,
    pub mu_before: f64,
    pub mu_after: f64,
}

impl ReduceOutcome {
    pub fn report(&self) -> ReduceReport {
        ReduceReport {
            size_before: self.size_before,
            size_after: self.size_after,
            shrink_factor: self.size_before as f64 / self.size_after.max(1) as f64,
            mu_before: self.mu_before,
            mu_after: self.mu_after,
            recertified: self.recertificate.is_hset,
            labels_after: (0..self.reduced.len())
                .map(|i| self.reduced.points().label(i))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ReduceReport {
    pub size_before: usize,
    pub size_after: usize,
    pub shrink_factor: f64,
    pub mu_before: f64,
    pub mu_after: f64,
    pub recertified: bool,
    pub labels_after: Vec<usize>,
}

/// Drops zero-weight points from a certified candidate and recertifies.
///
/// Reduction works on dual coefficients, not on residual values, so `mu`
/// is not expected to improve; both values are reported.
pub fn run_reduce(run: &ApproxRun, candidate: &CandidateOutcome) -> Result<ReduceOutcome> {
    let reduced = reduce_support(&candidate.signed_set, &candidate.certificate)?;
    let a = kernel_hset_matrix(&run.config.kernel, &run.centers, &reduced)?;
    let recertificate = test_hset(&a)?;

    let labels: Vec<usize> = (0..reduced.len())
        .map(|i| reduced.points().label(i))
        .collect();
    let f_h: Vec<f64> = labels.iter().map(|&k| run.f_on_t[k]).collect();
    let v_h: Vec<f64> = labels
        .iter()
        .map(|&k| dot(run.basis_on_t.row(k), &run.solution.coefficients))
        .collect();
    let mu_after = mu_bound(&f_h, &v_h, reduced.signs())?;
    // reduction works on dual coefficients, not on residual values: the
    // achieved mu never beats the largest residual
    assert!(mu_after <= run.solution.eta_star + 1e-9);

    Ok(ReduceOutcome {
        size_before: candidate.signed_set.len(),
        size_after: reduced.len(),
        mu_before: candidate.mu,
        mu_after,
        reduced,
        recertificate,
    })
}

#[derive(Debug, Clone)]
pub struct MapsOutcome {
    pub grid: RegularGrid,
    pub lagrangian_crossings: Vec<LagrangianCrossing>,
    pub divdiff_values: Vec<Option<f64>>,
    pub error_zeros: ErrorZeroMap,
    pub fill_distance: f64,
    pub zero_set_distance: f64,
}

impl MapsOutcome {
    pub fn report(&self) -> MapsReport {
        MapsReport {
            grid_resolution: self.grid.shape().to_vec(),
            max_spacing: self.grid.max_spacing(),
            lagrangian_crossing_count: self.lagrangian_crossings.len(),
            error_crossing_count: self.error_zeros.crossings.len(),
            identically_zero_error: self.error_zeros.identically_zero,
            fill_distance: self.fill_distance,
            zero_set_distance: self.zero_set_distance,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MapsReport {
    pub grid_resolution: Vec<usize>,
    pub max_spacing: f64,
    pub lagrangian_crossing_count: usize,
    pub error_crossing_count: usize,
    pub identically_zero_error: bool,
    pub fill_distance: f64,
    pub zero_set_distance: f64,
}

/// Lagrangian zero curves, the divided-difference surface, and the error
/// zero set on the evaluation grid, plus the two grid distances.
pub fn run_maps(config: &ExperimentConfig) -> Result<MapsOutcome> {
    config.validate()?;
    let target = config.resolve_target()?;
    let centers = config.sample_centers()?;
    let sys = build_system(config.kernel, centers)?;
    let grid = RegularGrid::square(config.domain.clone(), config.eval_grid_resolution);
    let f = |p: &[f64]| target.eval(p);

    let lagrangian_crossings = lagrangian_zero_map(&sys, &grid)?;
    let divdiff_values = divdiff_map(&sys, f, &grid)?;
    let error_zeros = error_zero_map(&sys, f, &grid)?;

    let f_centers: Vec<f64> = sys.centers().iter().map(f).collect();
    let s = sys.interpolate(&f_centers)?;
    let fd = fill_distance(sys.centers(), &grid.points())?;
    let zsd = zero_set_distance(&sys, &s, f, &grid)?;

    Ok(MapsOutcome {
        grid,
        lagrangian_crossings,
        divdiff_values,
        error_zeros,
        fill_distance: fd,
        zero_set_distance: zsd,
    })
}

#[derive(Debug, Clone)]
pub struct GreedyOutcome {
    pub rule: GreedyRule,
    pub selection: GreedySelection,
    pub sup_error_before: f64,
    pub sup_error_after: f64,
}

impl GreedyOutcome {
    pub fn report(&self) -> GreedyReport {
        GreedyReport {
            rule: self.rule,
            count: self.selection.order.len(),
            order: self.selection.order.clone(),
            objectives: self.selection.objectives.clone(),
            points: self.selection.points.points().to_vec(),
            sup_error_before: self.sup_error_before,
            sup_error_after: self.sup_error_after,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GreedyReport {
    pub rule: GreedyRule,
    pub count: usize,
    pub order: Vec<usize>,
    pub objectives: Vec<f64>,
    pub points: Vec<Vec<f64>>,
    pub sup_error_before: f64,
    pub sup_error_after: f64,
}

fn interpolation_sup_error(
    sys: &KernelSystem,
    target: &TargetFunction,
    grid: &RegularGrid,
) -> Result<f64> {
    let f_centers: Vec<f64> = sys.centers().iter().map(|p| target.eval(p)).collect();
    let s = sys.interpolate(&f_centers)?;
    let mut sup = 0.0f64;
    for i in 0..grid.len() {
        let p = grid.node(i);
        sup = sup.max((target.eval(&p) - s.eval(&p)?).abs());
    }
    Ok(sup)
}

/// Greedily adds `count` grid points to the centers and reports the
/// interpolation error before and after.
pub fn run_greedy(
    config: &ExperimentConfig,
    count: usize,
    rule: GreedyRule,
) -> Result<GreedyOutcome> {
    config.validate()?;
    let target = config.resolve_target()?;
    let centers = config.sample_centers()?;
    let sys = build_system(config.kernel, centers)?;
    let candidates = RegularGrid::square(config.domain.clone(), config.grid_resolution).points();
    let eval_grid = RegularGrid::square(config.domain.clone(), config.eval_grid_resolution);

    let sup_error_before = interpolation_sup_error(&sys, &target, &eval_grid)?;
    let selection = greedy_select_by(&sys, |p| target.eval(p), &candidates, count, rule)?;

    let mut grown = sys.centers().clone();
    for p in selection.points.iter() {
        grown.push(p.to_vec());
    }
    let grown_sys = build_system(config.kernel, grown)?;
    let sup_error_after = interpolation_sup_error(&grown_sys, &target, &eval_grid)?;

    Ok(GreedyOutcome {
        rule,
        selection,
        sup_error_before,
        sup_error_after,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct FreeHsetReport {
    pub support_size: usize,
    pub certified: bool,
    pub mu: f64,
}

#[derive(Debug, Clone)]
pub struct ReproOutcome {
    pub approx: ApproxRun,
    pub free_hset: Option<FreeHsetReport>,
    pub top_n: CandidateOutcome,
    pub ladder: Vec<CandidateOutcome>,
    pub reduction: Option<ReduceOutcome>,
}

impl ReproOutcome {
    pub fn report(&self) -> ReproReport {
        ReproReport {
            approx: self.approx.report(),
            free_hset: self.free_hset.clone(),
            top_n: self.top_n.report(),
            ladder: self.ladder.iter().map(|c| c.report()).collect(),
            reduction: self.reduction.as_ref().map(|r| r.report()),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ReproReport {
    pub approx: ApproxReport,
    pub free_hset: Option<FreeHsetReport>,
    pub top_n: CandidateReport,
    pub ladder: Vec<CandidateReport>,
    pub reduction: Option<ReduceReport>,
}

/// The full pipeline: minimax fit, the free H-set from the simplex dual, a
/// top-|residual| candidate of the size of the center set, a descending mu
/// ladder of threshold candidates, and support reduction of the largest
/// certified one.
pub fn run_repro(config: &ExperimentConfig) -> Result<ReproOutcome> {
    let run = run_approx(config)?;
    let n = config.n_centers;
    let n_pts = run.t_points.len();

    // the theorem check: the dual support certifies as an H-set
    let free_hset = match extract_extremal_hset(&run.solution, &run.t_points) {
        Err(Error::EmptySupport) => None,
        Err(e) => return Err(e),
        Ok(h) => {
            let a = kernel_hset_matrix(&config.kernel, &run.centers, &h)?;
            let cert = test_hset(&a)?;
            let labels: Vec<usize> = (0..h.len()).map(|i| h.points().label(i)).collect();
            let f_h: Vec<f64> = labels.iter().map(|&k| run.f_on_t[k]).collect();
            let v_h: Vec<f64> = labels
                .iter()
                .map(|&k| dot(run.basis_on_t.row(k), &run.solution.coefficients))
                .collect();
            Some(FreeHsetReport {
                support_size: h.len(),
                certified: cert.is_hset,
                mu: mu_bound(&f_h, &v_h, h.signs())?,
            })
        }
    };

    let top_n = candidate_top_k(&run, n.min(n_pts))?;

    // thresholds from the sorted |residual| ladder at growing target sizes
    let mut abs: Vec<f64> = run.solution.residuals.iter().map(|r| r.abs()).collect();
    abs.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut sizes = vec![
        n,
        n + 1,
        (3 * n).div_ceil(2),
        2 * n,
        3 * n,
        4 * n,
        6 * n,
        n_pts,
    ];
    sizes.retain(|&s| s >= 1 && s <= n_pts);
    sizes.dedup();
    let mut thresholds: Vec<f64> = sizes.iter().map(|&s| abs[s - 1]).collect();
    thresholds.dedup();

    let mut ladder = Vec::new();
    for mu in thresholds {
        ladder.push(candidate_at_threshold(&run, mu)?);
    }

    let reduction = match ladder
        .iter()
        .filter(|c| c.certificate.is_hset)
        .max_by_key(|c| c.signed_set.len())
    {
        Some(best) => Some(run_reduce(&run, best)?),
        None => None,
    };

    Ok(ReproOutcome {
        approx: run,
        free_hset,
        top_n,
        ladder,
        reduction,
    })
}

// ---------------------------------------------------------------------------
// file I/O
// ---------------------------------------------------------------------------

/// Points loaded from a CSV with `x,y` columns and optional `sign` / `coef`.
#[derive(Debug, Clone)]
pub struct LoadedPoints {
    pub points: PointSet,
    pub signs: Option<Vec<f64>>,
    pub coefficients: Option<Vec<f64>>,
}

pub fn read_points_csv(path: &Path) -> Result<LoadedPoints> {
    let mut reader = csv::Reader::from_path(path)?;
    let headers = reader.headers()?.clone();
    let find = |name: &str| headers.iter().position(|h| h.trim() == name);
    let (Some(xi), Some(yi)) = (find("x"), find("y")) else {
        return Err(Error::Parse(format!(
            "{}: need 'x' and 'y' columns, found {:?}",
            path.display(),
            headers.iter().collect::<Vec<_>>()
        )));
    };
    let si = find("sign");
    let ci = find("coef");

    let parse = |field: &str, row: usize| -> Result<f64> {
        field.trim().parse::<f64>().map_err(|_| {
            Error::Parse(format!(
                "{}: row {row}: bad number {field:?}",
                path.display()
            ))
        })
    };

    let mut points = Vec::new();
    let mut signs = Vec::new();
    let mut coefs = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record?;
        points.push(vec![parse(&record[xi], row)?, parse(&record[yi], row)?]);
        if let Some(si) = si {
            signs.push(parse(&record[si], row)?);
        }
        if let Some(ci) = ci {
            coefs.push(parse(&record[ci], row)?);
        }
    }
    Ok(LoadedPoints {
        points: PointSet::new(2, points),
        signs: si.map(|_| signs),
        coefficients: ci.map(|_| coefs),
    })
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

fn fmt(v: f64) -> String {
    format!("{v}")
}

pub fn write_points_csv(path: &Path, points: &PointSet, signs: Option<&[f64]>) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    if signs.is_some() {
        w.write_record(["x", "y", "sign"])?;
    } else {
        w.write_record(["x", "y"])?;
    }
    for (i, p) in points.iter().enumerate() {
        match signs {
            Some(s) => w.write_record([fmt(p[0]), fmt(p[1]), fmt(s[i])])?,
            None => w.write_record([fmt(p[0]), fmt(p[1])])?,
        }
    }
    w.flush()?;
    Ok(())
}

/// Residuals of the fit on the grid `T`: `x,y,f,fit,residual` rows.
pub fn write_residuals_csv(path: &Path, run: &ApproxRun) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["x", "y", "f", "fit", "residual"])?;
    for (k, p) in run.t_points.iter().enumerate() {
        let fit = run.f_on_t[k] - run.solution.residuals[k];
        w.write_record([
            fmt(p[0]),
            fmt(p[1]),
            fmt(run.f_on_t[k]),
            fmt(fit),
            fmt(run.solution.residuals[k]),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Pointwise error of the fit on the evaluation grid: `x,y,error` rows.
pub fn write_eval_error_csv(path: &Path, run: &ApproxRun) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["x", "y", "error"])?;
    for i in 0..run.eval_grid.len() {
        let p = run.eval_grid.node(i);
        let e = run.target.eval(&p) - run.fit_value(&p);
        w.write_record([fmt(p[0]), fmt(p[1]), fmt(e)])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_lagrangian_zeros_csv(path: &Path, crossings: &[LagrangianCrossing]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["lagrangian", "x", "y"])?;
    for c in crossings {
        w.write_record([c.center_index.to_string(), fmt(c.point[0]), fmt(c.point[1])])?;
    }
    w.flush()?;
    Ok(())
}

/// Divided-difference surface; nodes at centers carry `nan`.
pub fn write_divdiff_map_csv(
    path: &Path,
    grid: &RegularGrid,
    values: &[Option<f64>],
) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["x", "y", "value"])?;
    for (i, v) in values.iter().enumerate() {
        let p = grid.node(i);
        let s = match v {
            Some(v) => fmt(*v),
            None => "nan".to_string(),
        };
        w.write_record([fmt(p[0]), fmt(p[1]), s])?;
    }
    w.flush()?;
    Ok(())
}

/// Error zero set: centers (exact zeros) and edge crossings.
pub fn write_error_zeros_csv(path: &Path, map: &ErrorZeroMap) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["kind", "x", "y"])?;
    for p in &map.centers {
        w.write_record(["center".to_string(), fmt(p[0]), fmt(p[1])])?;
    }
    for p in &map.crossings {
        w.write_record(["crossing".to_string(), fmt(p[0]), fmt(p[1])])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_greedy_csv(path: &Path, outcome: &GreedyOutcome) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["step", "candidate", "x", "y", "objective"])?;
    for (step, (&ci, p)) in outcome
        .selection
        .order
        .iter()
        .zip(outcome.selection.points.iter())
        .enumerate()
    {
        w.write_record([
            step.to_string(),
            ci.to_string(),
            fmt(p[0]),
            fmt(p[1]),
            fmt(outcome.selection.objectives[step]),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    Ok(())
}

/// Writes the approx artifacts; returns the paths written.
pub fn write_approx_outputs(dir: &Path, run: &ApproxRun) -> Result<Vec<PathBuf>> {
    ensure_dir(dir)?;
    let report = dir.join("approx_report.json");
    write_json(&report, &run.report())?;
    let centers = dir.join("centers.csv");
    write_points_csv(&centers, &run.centers, None)?;
    let residuals = dir.join("residuals_t.csv");
    write_residuals_csv(&residuals, run)?;
    let eval = dir.join("error_eval.csv");
    write_eval_error_csv(&eval, run)?;
    Ok(vec![report, centers, residuals, eval])
}

pub fn write_maps_outputs(dir: &Path, maps: &MapsOutcome) -> Result<Vec<PathBuf>> {
    ensure_dir(dir)?;
    let report = dir.join("maps_report.json");
    write_json(&report, &maps.report())?;
    let lag = dir.join("lagrangian_zeros.csv");
    write_lagrangian_zeros_csv(&lag, &maps.lagrangian_crossings)?;
    let dd = dir.join("divdiff_map.csv");
    write_divdiff_map_csv(&dd, &maps.grid, &maps.divdiff_values)?;
    let ez = dir.join("error_zeros.csv");
    write_error_zeros_csv(&ez, &maps.error_zeros)?;
    Ok(vec![report, lag, dd, ez])
}

pub fn write_greedy_outputs(dir: &Path, outcome: &GreedyOutcome) -> Result<Vec<PathBuf>> {
    ensure_dir(dir)?;
    let report = dir.join("greedy_report.json");
    write_json(&report, &outcome.report())?;
    let sel = dir.join("greedy_selection.csv");
    write_greedy_csv(&sel, outcome)?;
    Ok(vec![report, sel])
}

pub fn write_repro_outputs(dir: &Path, outcome: &ReproOutcome) -> Result<Vec<PathBuf>> {
    ensure_dir(dir)?;
    let mut paths = write_approx_outputs(dir, &outcome.approx)?;
    let report = dir.join("repro_report.json");
    write_json(&report, &outcome.report())?;
    paths.push(report);
    Ok(paths)
}
