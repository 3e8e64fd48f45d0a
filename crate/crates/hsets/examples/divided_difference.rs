//! Kernel-based divided differences on `X ∪ {xi}`.
//!
//! On one extra point the minimax dual is unique up to sign and known in
//! closed form from the Lagrange basis: weight `1/(1+L)` at `xi` and
//! `-u_i(xi)/(1+L)` at the centers. Pairing with the data gives
//! `(f(xi) - s(xi)) / (1 + L(xi))`, whose absolute value equals the LP
//! minimax error. Both routes are checked here side by side, along with the
//! equioscillation of the optimal residual.
//!
//! Run with: `cargo run --example divided_difference`

use hsets::divdiff::{
    divided_difference, equioscillation_check, hset_from_point, minimax_on_union,
};
use hsets::experiment::peaks;
use hsets::interp::build_system;
use hsets::kernels::{BoxDomain, Kernel};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> hsets::Result<()> {
    let kernel = Kernel::gaussian(1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let centers = BoxDomain::symmetric_unit(2).sample_uniform(8, &mut rng);
    let sys = build_system(kernel, centers)?;
    let xi = [0.31, -0.42];

    let dd = divided_difference(&sys, peaks, &xi)?;
    println!("divided difference at xi = {xi:?}");
    println!("  value        = {:+.8}", dd.value);
    println!("  weight at xi = {:+.8}", dd.weight_at_xi);
    let l1: f64 =
        dd.weight_at_xi.abs() + dd.weights_at_centers.iter().map(|w| w.abs()).sum::<f64>();
    println!("  l1 norm of weights = {l1:.12} (normalized)");

    let (sol, _) = minimax_on_union(&sys, peaks, &xi)?;
    println!("closed form |value| = {:.12}", dd.eta_star);
    println!("LP minimax    eta*  = {:.12}", sol.eta_star);
    println!(
        "difference          = {:.3e}",
        (dd.eta_star - sol.eta_star).abs()
    );

    let rep = equioscillation_check(&sys, peaks, &xi)?;
    println!(
        "equioscillation: {}/{} residuals extremal, {} degenerate Lagrangians",
        rep.extremal_count, rep.total_points, rep.degenerate_count
    );

    let hset = hset_from_point(&sys, peaks, &xi)?;
    println!(
        "H-set from the dual signs: {} points (xi plus the centers)",
        hset.len()
    );
    Ok(())
}
