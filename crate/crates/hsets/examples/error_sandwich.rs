//! Two-sided a-posteriori bounds from an H-set.
//!
//! Given any candidate approximation, pick near-extremal points of its error
//! with the error signs. If that signed set certifies as an H-set and
//! `mu = min (f - v)(h) sigma(h)` is positive, the best possible sup-norm
//! error is bracketed in `[mu, sup |f - v|]`, computable from observed
//! values alone with no optimization of the candidate required.
//!
//! Run with: `cargo run --example error_sandwich`

use hsets::experiment::{candidate_at_threshold, run_approx, ExperimentConfig};
use hsets::hset::error_sandwich;

fn main() -> hsets::Result<()> {
    let mut config = ExperimentConfig::paper_shape(11);
    config.n_centers = 12;
    config.grid_resolution = 9;
    config.eval_grid_resolution = 25;

    let run = run_approx(&config)?;
    println!(
        "minimax fit: eta* = {:.6} on the grid, sup error {:.6} on the fine grid",
        run.solution.eta_star, run.sup_error_eval
    );

    // sweep selection thresholds from just below eta* downwards
    for fraction in [0.999, 0.8, 0.5, 0.2] {
        let mu = run.solution.eta_star * fraction;
        let cand = candidate_at_threshold(&run, mu)?;
        let verdict = error_sandwich(cand.mu, run.sup_error_eval, &cand.certificate);
        print!(
            "threshold {:.6}: {:3} points, H-set: {:5}",
            mu,
            cand.signed_set.len(),
            cand.certificate.is_hset
        );
        if verdict.applicable {
            println!(
                "  -> best error in [{:.6}, {:.6}], ratio {:.3}",
                verdict.mu,
                verdict.sup_error,
                verdict.gap_ratio.unwrap()
            );
        } else {
            println!("  -> no bracket (not certified or mu <= 0)");
        }
    }
    Ok(())
}
