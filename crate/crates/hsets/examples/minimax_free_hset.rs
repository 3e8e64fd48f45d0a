//! Discrete Chebyshev approximation hands back an H-set for free.
//!
//! Fitting the peaks function on a grid in the sup norm by a simplex LP
//! yields, besides the coefficients, a basic dual weight vector. Its support
//! consists of extremal points, its signs are the residual signs there, and
//! the support always certifies as an H-set.
//!
//! Run with: `cargo run --example minimax_free_hset`

use hsets::cheb::{extract_extremal_hset, solve_minimax};
use hsets::experiment::peaks;
use hsets::hset::{kernel_hset_matrix, test_hset};
use hsets::kernels::{kernel_matrix, BoxDomain, Kernel, RegularGrid};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> hsets::Result<()> {
    let kernel = Kernel::gaussian(1.0);
    let domain = BoxDomain::symmetric_unit(2);
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let centers = domain.sample_uniform(12, &mut rng);
    let grid = RegularGrid::square(domain, 9).points();

    let basis = kernel_matrix(&kernel, &grid, &centers)?;
    let data: Vec<f64> = grid.iter().map(peaks).collect();
    let sol = solve_minimax(&basis, &data)?;
    println!(
        "fitted {} centers on a {}-point grid",
        centers.len(),
        grid.len()
    );
    println!("minimax error eta* = {:.6}", sol.eta_star);

    let support = sol.dual_weights.iter().filter(|w| w.abs() > 1e-9).count();
    println!(
        "dual support: {support} points (at most dim + 1 = {})",
        centers.len() + 1
    );

    let hset = extract_extremal_hset(&sol, &grid)?;
    println!("extremal H-set candidate:");
    for i in 0..hset.len() {
        let p = hset.points().point(i);
        println!(
            "  ({:+.3}, {:+.3})  sign {:+}  residual {:+.6}",
            p[0],
            p[1],
            hset.signs()[i],
            sol.residuals[hset.points().label(i)]
        );
    }

    let a = kernel_hset_matrix(&kernel, &centers, &hset)?;
    let cert = test_hset(&a)?;
    println!(
        "certified: {} (objective {:.6})",
        cert.is_hset, cert.objective
    );
    Ok(())
}
