//! Thin command-line front end over [`hsets::experiment`].
//!
//! Exit codes: 0 on success, 2 when `--expect-hset` was given and a requested
//! candidate failed certification, 1 on any error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hsets::divdiff::GreedyRule;
use hsets::experiment::{
    self, candidate_at_threshold, candidate_by_dual_threshold, run_approx, run_greedy, run_maps,
    run_repro, CandidateReport, ExperimentConfig, TargetSpec,
};
use hsets::hset::{kernel_hset_matrix, test_hset, SignedPointSet};
use hsets::kernels::{BoxDomain, Kernel, KernelFamily};

#[derive(Parser)]
#[command(
    name = "hsets",
    about = "H-set certification and minimax approximation in kernel-based trial spaces",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum KernelArg {
    Gaussian,
    #[value(alias = "imq")]
    InverseMultiquadric,
    Matern32,
}

#[derive(Clone, Copy, ValueEnum)]
enum RuleArg {
    Divdiff,
    Error,
}

#[derive(Args)]
struct CommonArgs {
    /// Kernel family of the trial space
    #[arg(long, value_enum, default_value = "gaussian")]
    kernel: KernelArg,
    /// Kernel length scale
    #[arg(long, default_value_t = 1.0)]
    scale: f64,
    /// Number of random centers defining the trial space
    #[arg(long, default_value_t = 25)]
    centers: usize,
    /// Seed of the center sampler (recorded in every report)
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Nodes per axis of the fitting grid T
    #[arg(long, default_value_t = 11)]
    grid: usize,
    /// Nodes per axis of the evaluation grid
    #[arg(long = "eval-grid", default_value_t = 41)]
    eval_grid: usize,
    /// Target: "peaks" or a CSV path with x,y,coef columns
    #[arg(long, default_value = "peaks")]
    target: String,
    /// Evaluate peaks on [-3,3]^2 by rescaling the domain coordinates
    #[arg(long = "peaks-rescale", default_value_t = false)]
    peaks_rescale: bool,
    /// Output directory for reports and CSV files
    #[arg(long = "out-dir", default_value = "out")]
    out_dir: PathBuf,
}

impl CommonArgs {
    fn config(&self) -> Result<ExperimentConfig, String> {
        if !(self.scale.is_finite() && self.scale > 0.0) {
            return Err("--scale must be a positive number".into());
        }
        let family = match self.kernel {
            KernelArg::Gaussian => KernelFamily::Gaussian,
            KernelArg::InverseMultiquadric => KernelFamily::InverseMultiquadric,
            KernelArg::Matern32 => KernelFamily::Matern32,
        };
        let target = if self.target == "peaks" {
            TargetSpec::Peaks {
                rescale: self.peaks_rescale,
            }
        } else {
            TargetSpec::CustomFile {
                path: self.target.clone(),
            }
        };
        Ok(ExperimentConfig {
            kernel: Kernel::new(family, self.scale),
            n_centers: self.centers,
            center_seed: self.seed,
            domain: BoxDomain::symmetric_unit(2),
            grid_resolution: self.grid,
            eval_grid_resolution: self.eval_grid,
            target,
            mu_thresholds: Vec::new(),
            multiplier_threshold: None,
        })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Minimax fit of the target on the grid T; writes report and residuals
    Approx(CommonArgs),
    /// Certify H-set candidates: by residual thresholds, dual weights, or an
    /// imported signed point set
    HsetTest {
        #[command(flatten)]
        common: CommonArgs,
        /// Residual threshold mu; repeatable
        #[arg(long = "mu")]
        mu: Vec<f64>,
        /// Select points with |dual weight| above this instead
        #[arg(long = "multiplier-threshold")]
        multiplier_threshold: Option<f64>,
        /// CSV with x,y,sign columns to certify directly
        #[arg(long)]
        points: Option<PathBuf>,
        /// Exit with code 2 if any requested candidate is not an H-set
        #[arg(long = "expect-hset", default_value_t = false)]
        expect_hset: bool,
    },
    /// Certify a threshold candidate and reduce it to its weight support
    Reduce {
        #[command(flatten)]
        common: CommonArgs,
        /// Residual threshold; defaults to the smallest |residual| (all of T)
        #[arg(long = "mu")]
        mu: Option<f64>,
        #[arg(long = "expect-hset", default_value_t = false)]
        expect_hset: bool,
    },
    /// Lagrangian zero curves, divided-difference surface, error zero set
    Maps(CommonArgs),
    /// Greedy point selection by divided-difference or plain error score
    Greedy {
        #[command(flatten)]
        common: CommonArgs,
        /// Number of points to select
        #[arg(long, default_value_t = 5)]
        count: usize,
        /// Selection score
        #[arg(long, value_enum, default_value = "divdiff")]
        rule: RuleArg,
    },
    /// The full pipeline: fit, free H-set, candidate ladder, reduction
    Repro(CommonArgs),
}

fn list_outputs(paths: &[PathBuf]) {
    for p in paths {
        println!("wrote {}", p.display());
    }
}

/// Certification summary line per candidate.
fn print_candidate(c: &CandidateReport) {
    let verdict = if c.is_hset { "H-SET" } else { "not an H-set" };
    let sandwich = if c.sandwich.applicable {
        format!(
            ", bracket [{:.6}, {:.6}] (ratio {:.3})",
            c.sandwich.mu,
            c.sandwich.sup_error,
            c.sandwich.gap_ratio.unwrap_or(f64::NAN)
        )
    } else {
        String::new()
    };
    println!(
        "threshold {:.6}: {} points -> {} (objective {:.6}, rank {}, support {}){}",
        c.threshold, c.count, verdict, c.objective, c.row_rank, c.support_size, sandwich
    );
}

fn run(cli: Cli) -> Result<ExitCode, Box<dyn std::error::Error>> {
    match cli.command {
        Command::Approx(common) => {
            let config = common.config()?;
            let t0 = Instant::now();
            let run = run_approx(&config)?;
            eprintln!("approx took {:?}", t0.elapsed());
            let report = run.report();
            println!(
                "eta* on T = {:.6}, sup error on eval grid = {:.6} (dual support {})",
                report.eta_star_on_t, report.sup_error_on_eval_grid, report.dual_support_size
            );
            list_outputs(&experiment::write_approx_outputs(&common.out_dir, &run)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::HsetTest {
            common,
            mu,
            multiplier_threshold,
            points,
            expect_hset,
        } => {
            let mut config = common.config()?;
            config.mu_thresholds = mu.clone();
            config.multiplier_threshold = multiplier_threshold;
            let t0 = Instant::now();
            let mut all_certified = true;
            let mut reports = Vec::new();

            if let Some(path) = &points {
                // certify an imported signed set against the seeded centers
                let loaded = experiment::read_points_csv(path)?;
                let signs = loaded
                    .signs
                    .ok_or("imported candidate needs a 'sign' column")?;
                let candidate = SignedPointSet::new(loaded.points, signs)?;
                let centers = config.sample_centers()?;
                let a = kernel_hset_matrix(&config.kernel, &centers, &candidate)?;
                let cert = test_hset(&a)?;
                all_certified &= cert.is_hset;
                println!(
                    "imported candidate ({} points): {} (objective {:.6}, rank {})",
                    candidate.len(),
                    if cert.is_hset {
                        "H-SET"
                    } else {
                        "not an H-set"
                    },
                    cert.objective,
                    cert.row_rank
                );
                experiment::write_json(&certificate_path(&common.out_dir)?, &cert)?;
            } else {
                if mu.is_empty() && multiplier_threshold.is_none() {
                    return Err("give --mu, --multiplier-threshold, or --points".into());
                }
                let run = run_approx(&config)?;
                for &threshold in &mu {
                    let cand = candidate_at_threshold(&run, threshold)?;
                    let rep = cand.report();
                    print_candidate(&rep);
                    all_certified &= rep.is_hset;
                    reports.push(rep);
                }
                if let Some(threshold) = multiplier_threshold {
                    let cand = candidate_by_dual_threshold(&run, threshold)?;
                    let rep = cand.report();
                    print_candidate(&rep);
                    all_certified &= rep.is_hset;
                    reports.push(rep);
                }
                std::fs::create_dir_all(&common.out_dir)?;
                experiment::write_json(&common.out_dir.join("hset_report.json"), &reports)?;
                println!(
                    "wrote {}",
                    common.out_dir.join("hset_report.json").display()
                );
            }
            eprintln!("hset-test took {:?}", t0.elapsed());
            if expect_hset && !all_certified {
                return Ok(ExitCode::from(2));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Reduce {
            common,
            mu,
            expect_hset,
        } => {
            let config = common.config()?;
            let t0 = Instant::now();
            let run = run_approx(&config)?;
            let threshold = mu.unwrap_or_else(|| {
                run.solution
                    .residuals
                    .iter()
                    .map(|r| r.abs())
                    .fold(f64::INFINITY, f64::min)
            });
            let cand = candidate_at_threshold(&run, threshold)?;
            print_candidate(&cand.report());
            if !cand.certificate.is_hset {
                eprintln!("candidate failed certification; nothing to reduce");
                return Ok(if expect_hset {
                    ExitCode::from(2)
                } else {
                    ExitCode::SUCCESS
                });
            }
            let reduced = experiment::run_reduce(&run, &cand)?;
            let rep = reduced.report();
            println!(
                "reduced {} -> {} points (x{:.2}), recertified: {}, mu {:.6} -> {:.6}",
                rep.size_before,
                rep.size_after,
                rep.shrink_factor,
                rep.recertified,
                rep.mu_before,
                rep.mu_after
            );
            std::fs::create_dir_all(&common.out_dir)?;
            experiment::write_json(&common.out_dir.join("reduce_report.json"), &rep)?;
            println!(
                "wrote {}",
                common.out_dir.join("reduce_report.json").display()
            );
            eprintln!("reduce took {:?}", t0.elapsed());
            if expect_hset && !rep.recertified {
                return Ok(ExitCode::from(2));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Maps(common) => {
            let config = common.config()?;
            let t0 = Instant::now();
            let maps = run_maps(&config)?;
            let rep = maps.report();
            println!(
                "fill distance = {:.6}, zero-set distance = {:.6} ({} Lagrangian crossings, {} error crossings)",
                rep.fill_distance,
                rep.zero_set_distance,
                rep.lagrangian_crossing_count,
                rep.error_crossing_count
            );
            list_outputs(&experiment::write_maps_outputs(&common.out_dir, &maps)?);
            eprintln!("maps took {:?}", t0.elapsed());
            Ok(ExitCode::SUCCESS)
        }
        Command::Greedy {
            common,
            count,
            rule,
        } => {
            let config = common.config()?;
            let rule = match rule {
                RuleArg::Divdiff => GreedyRule::DividedDifference,
                RuleArg::Error => GreedyRule::ErrorOnly,
            };
            let t0 = Instant::now();
            let outcome = run_greedy(&config, count, rule)?;
            let rep = outcome.report();
            println!(
                "selected {} points; interpolation sup error {:.6} -> {:.6}",
                rep.count, rep.sup_error_before, rep.sup_error_after
            );
            list_outputs(&experiment::write_greedy_outputs(
                &common.out_dir,
                &outcome,
            )?);
            eprintln!("greedy took {:?}", t0.elapsed());
            Ok(ExitCode::SUCCESS)
        }
        Command::Repro(common) => {
            let config = common.config()?;
            let t0 = Instant::now();
            let outcome = run_repro(&config)?;
            let rep = outcome.report();
            println!(
                "eta* on T = {:.6}, sup error = {:.6}",
                rep.approx.eta_star_on_t, rep.approx.sup_error_on_eval_grid
            );
            if let Some(free) = &rep.free_hset {
                println!(
                    "dual support: {} points, certified: {}, mu = {:.6}",
                    free.support_size, free.certified, free.mu
                );
            }
            print_candidate(&rep.top_n);
            for c in &rep.ladder {
                print_candidate(c);
            }
            if let Some(r) = &rep.reduction {
                println!(
                    "reduction: {} -> {} points (x{:.2}), recertified: {}",
                    r.size_before, r.size_after, r.shrink_factor, r.recertified
                );
            }
            list_outputs(&experiment::write_repro_outputs(&common.out_dir, &outcome)?);
            eprintln!("repro took {:?}", t0.elapsed());
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn certificate_path(dir: &Path) -> Result<PathBuf, std::io::Error> {
    std::fs::create_dir_all(dir)?;
    Ok(dir.join("hset_certificate.json"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
