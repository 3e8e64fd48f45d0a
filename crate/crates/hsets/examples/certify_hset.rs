//! Certify signed point sets as H-sets.
//!
//! An H-set for a trial space `V` is a point set `H` with signs `sigma` such
//! that no `v` in `V` makes every `v(h) sigma(h)` negative. The test is a
//! small LP: maximize `1ᵀw` over `0 <= w <= 1` with `Aᵀw = 0` for the signed
//! kernel matrix `A`. A positive maximum certifies; otherwise a witness
//! function direction with `Ax < 0` is produced.
//!
//! Run with: `cargo run --example certify_hset`

use hsets::hset::{kernel_hset_function, kernel_hset_matrix, test_hset, SignedPointSet};
use hsets::kernels::{Kernel, PointSet};

fn main() -> hsets::Result<()> {
    let kernel = Kernel::gaussian(1.0);
    // trial space: span of K(., 0) on the real line
    let centers = PointSet::from_1d(&[0.0]);

    // mirrored points with opposite signs: certifiable, because
    // f = K(., -1) - K(., +1) vanishes at 0 with coefficient signs (+, -)
    let candidate = SignedPointSet::new(PointSet::from_1d(&[-1.0, 1.0]), vec![1.0, -1.0])?;
    let a = kernel_hset_matrix(&kernel, &centers, &candidate)?;
    let cert = test_hset(&a)?;
    println!("mirrored pair, signs (+1, -1):");
    println!(
        "  H-set: {} (objective {:.6})",
        cert.is_hset, cert.objective
    );
    println!("  weights: {:?}", cert.weights);

    let f = kernel_hset_function(&kernel, &centers, &candidate, &cert)?;
    println!(
        "  certifying function at the center: {:.3e}",
        f.eval(&[0.0])?
    );
    println!("  certifying function at 0.5: {:.6}", f.eval(&[0.5])?);

    // the same points with equal signs cannot be an H-set: every nonnegative
    // kernel combination is positive at the center
    let candidate = SignedPointSet::new(PointSet::from_1d(&[-1.0, 1.0]), vec![1.0, 1.0])?;
    let a = kernel_hset_matrix(&kernel, &centers, &candidate)?;
    let cert = test_hset(&a)?;
    println!("mirrored pair, signs (+1, +1):");
    println!(
        "  H-set: {} (objective {:.6})",
        cert.is_hset, cert.objective
    );
    let witness = cert.witness.expect("negative verdicts carry a witness");
    println!("  witness coefficients: {witness:?}");
    let values = a.matvec(&witness);
    println!("  A * witness = {values:?} (all negative)");
    Ok(())
}
