//! H-set certification and minimax approximation in kernel-based trial spaces.
//!
//! An H-set for a trial space `V` on a point set `T` is a subset `H` of `T`
//! together with signs `sigma: H -> {-1,+1}` such that no `v` in `V` makes
//! `v(h) * sigma(h)` negative at every `h`. Whenever a candidate approximation
//! leaves residuals whose signs match an H-set, the quantity
//! `mu = min (f - v)(h) * sigma(h)` brackets the best possible sup-norm error
//! from below, giving a two-sided a-posteriori bound from observable data.
//!
//! This crate provides, for trial spaces spanned by translates of a strictly
//! positive definite kernel:
//!
//! * LP-based H-set certification with Farkas witnesses ([`hset`]),
//! * discrete Chebyshev (minimax) approximation whose simplex dual hands back
//!   an extremal-point H-set for free ([`cheb`]),
//! * kernel interpolation machinery: Lagrange bases, Power and Lebesgue
//!   functions, cardinal functions, fill distances ([`interp`]),
//! * kernel-based divided differences on `X ∪ {xi}` with closed-form dual
//!   weights, equioscillation diagnostics, zero-set maps, and greedy point
//!   selection ([`divdiff`]),
//! * a reproducible experiment pipeline with CSV/JSON outputs ([`experiment`]),
//!   also exposed through the `hsets` command-line binary.
//!
//! Start with the runnable examples (`cargo run --example minimax_free_hset`)
//! or build a [`interp::KernelSystem`] directly:
//!
//! ```
//! use hsets::kernels::{Kernel, PointSet};
//! use hsets::interp::build_system;
//!
//! let centers = PointSet::from_1d(&[0.0, 1.0]);
//! let sys = build_system(Kernel::gaussian(1.0), centers).unwrap();
//! let u = sys.lagrangians_at(&[0.0]).unwrap();
//! assert!((u[0] - 1.0).abs() < 1e-12 && u[1].abs() < 1e-12);
//! ```

// dense index loops are the clearest form for the small-matrix kernels here
#![allow(clippy::needless_range_loop)]

pub mod cheb;
pub mod divdiff;
mod error;
pub mod experiment;
pub mod hset;
pub mod interp;
pub mod kernels;
pub mod linalg;
pub mod lp;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
