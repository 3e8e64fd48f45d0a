//! Greedy center selection: divided-difference score vs plain error score.
//!
//! The divided-difference rule picks the grid point maximizing
//! `|f - s| / (1 + L)`, the minimax error the point would induce on
//! `X ∪ {xi}`; the error rule picks the largest |f - s|.
//!
//! Run with: `cargo run --example greedy_points`

use hsets::divdiff::{greedy_select_by, GreedyRule};
use hsets::experiment::peaks;
use hsets::interp::build_system;
use hsets::kernels::{BoxDomain, Kernel, RegularGrid};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn sup_error(sys: &hsets::interp::KernelSystem, grid: &RegularGrid) -> hsets::Result<f64> {
    let values: Vec<f64> = sys.centers().iter().map(peaks).collect();
    let s = sys.interpolate(&values)?;
    let mut sup = 0.0f64;
    for i in 0..grid.len() {
        let p = grid.node(i);
        sup = sup.max((peaks(&p) - s.eval(&p)?).abs());
    }
    Ok(sup)
}

fn main() -> hsets::Result<()> {
    let kernel = Kernel::gaussian(1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let start = BoxDomain::symmetric_unit(2).sample_uniform(5, &mut rng);
    let candidates = RegularGrid::square(BoxDomain::symmetric_unit(2), 11).points();
    let eval_grid = RegularGrid::square(BoxDomain::symmetric_unit(2), 41);

    for rule in [GreedyRule::DividedDifference, GreedyRule::ErrorOnly] {
        let sys = build_system(kernel, start.clone())?;
        let before = sup_error(&sys, &eval_grid)?;
        let sel = greedy_select_by(&sys, peaks, &candidates, 8, rule)?;

        let mut grown = start.clone();
        for p in sel.points.iter() {
            grown.push(p.to_vec());
        }
        let after = sup_error(&build_system(kernel, grown)?, &eval_grid)?;

        println!("{rule:?}:");
        for (step, (&idx, score)) in sel.order.iter().zip(&sel.objectives).enumerate() {
            let p = sel.points.point(step);
            println!(
                "  step {step}: candidate {idx:3} at ({:+.2}, {:+.2})  score {score:.6}",
                p[0], p[1]
            );
        }
        println!("  interpolation sup error: {before:.6} -> {after:.6}");
    }
    Ok(())
}
