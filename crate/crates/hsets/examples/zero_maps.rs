//! Grid maps for plotting: Lagrangian zero curves, the divided-difference
//! surface, and the zero set of the interpolation error.
//!
//! Writes three CSV files under ./out-zero-maps; plot them with any tool
//! (the columns are plain coordinates and values).
//!
//! Run with: `cargo run --example zero_maps`

use hsets::divdiff::{divdiff_map, error_zero_map, lagrangian_zero_map};
use hsets::experiment::{
    peaks, write_divdiff_map_csv, write_error_zeros_csv, write_lagrangian_zeros_csv,
};
use hsets::interp::build_system;
use hsets::kernels::{BoxDomain, Kernel, RegularGrid};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::path::Path;

fn main() -> hsets::Result<()> {
    let kernel = Kernel::gaussian(1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let centers = BoxDomain::symmetric_unit(2).sample_uniform(25, &mut rng);
    let sys = build_system(kernel, centers)?;
    let grid = RegularGrid::square(BoxDomain::symmetric_unit(2), 41);

    let out = Path::new("out-zero-maps");
    std::fs::create_dir_all(out)?;

    let crossings = lagrangian_zero_map(&sys, &grid)?;
    write_lagrangian_zeros_csv(&out.join("lagrangian_zeros.csv"), &crossings)?;
    println!(
        "{} Lagrangian zero crossings -> {}",
        crossings.len(),
        out.join("lagrangian_zeros.csv").display()
    );

    let values = divdiff_map(&sys, peaks, &grid)?;
    write_divdiff_map_csv(&out.join("divdiff_map.csv"), &grid, &values)?;
    let missing = values.iter().filter(|v| v.is_none()).count();
    println!(
        "divided-difference surface on {} nodes ({} at centers marked nan) -> {}",
        grid.len(),
        missing,
        out.join("divdiff_map.csv").display()
    );

    let zeros = error_zero_map(&sys, peaks, &grid)?;
    write_error_zeros_csv(&out.join("error_zeros.csv"), &zeros)?;
    println!(
        "{} error zero crossings (+ {} centers) -> {}",
        zeros.crossings.len(),
        zeros.centers.len(),
        out.join("error_zeros.csv").display()
    );
    Ok(())
}
