//! Kernel interpolation machinery: Lagrange basis, Power function, Lebesgue
//! function, cardinal functions, and the two grid distances.
//!
//! Run with: `cargo run --example interpolation_basics`

use hsets::experiment::peaks;
use hsets::interp::{build_system, fill_distance, zero_set_distance};
use hsets::kernels::{BoxDomain, Kernel, RegularGrid};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> hsets::Result<()> {
    let kernel = Kernel::gaussian(1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let centers = BoxDomain::symmetric_unit(2).sample_uniform(9, &mut rng);
    let sys = build_system(kernel, centers)?;

    // Lagrange property at the first center
    let u = sys.lagrangians_at(sys.centers().point(0))?;
    println!(
        "Lagrangians at x_0: {:?}",
        u.iter().map(|v| format!("{v:+.2e}")).collect::<Vec<_>>()
    );

    let xi = [0.2, 0.1];
    println!("at xi = {xi:?}:");
    println!("  P^2(xi) = {:.6}", sys.power_function_sq(&xi)?);
    println!("  L(xi)   = {:.6}", sys.lebesgue_function(&xi)?);

    let g = sys.cardinal_g(&xi)?;
    println!(
        "  cardinal g: g(xi) = {:.9}, g(x_0) = {:.2e}",
        g.eval(&xi)?,
        g.eval(sys.centers().point(0))?
    );

    // interpolate the peaks surface and look at the two grid distances
    let values: Vec<f64> = sys.centers().iter().map(peaks).collect();
    let s = sys.interpolate(&values)?;
    let grid = RegularGrid::square(BoxDomain::symmetric_unit(2), 41);

    let mut sup = 0.0f64;
    for i in 0..grid.len() {
        let p = grid.node(i);
        sup = sup.max((peaks(&p) - s.eval(&p)?).abs());
    }
    println!("interpolation sup error on a 41x41 grid: {sup:.6}");

    let fd = fill_distance(sys.centers(), &grid.points())?;
    let zsd = zero_set_distance(&sys, &s, peaks, &grid)?;
    println!("fill distance      h(X)     = {fd:.6}");
    println!(
        "zero-set distance  h(X ∪ Z) = {zsd:.6} (never larger: error zeros act as free centers)"
    );
    Ok(())
}
