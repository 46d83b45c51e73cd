//! # swemb
//!
//! Sliced 1-Wasserstein machinery for empirical measures, with explicit
//! Hilbert embeddings and quotient metrics for finite isometry groups.
//!
//! The library computes, exactly where a closed form exists and by seeded
//! Monte-Carlo otherwise:
//!
//! - exact 1-Wasserstein distances between equal-size empirical measures
//!   (dense shortest-augmenting-path assignment, sorted pairing on the line);
//! - sliced 1-Wasserstein distances: Monte-Carlo in any dimension, exact in
//!   the plane by arc decomposition;
//! - the slice constant `kappa(n)` (the integral of the first coordinate's
//!   absolute value over the unit sphere) and the special functions behind
//!   it: Beta, regularized incomplete Beta, hyperspherical-cap distribution;
//! - verification harnesses for the sandwich bounds
//!   `kappa(n) W1 / (16 e (k!)^2) <= SW1 <= kappa(n) W1` (n >= 3) and the
//!   planar variant;
//! - explicit finite-set Hilbert embeddings from the kernel `SW1 / kappa`
//!   by double centering and spectral factorization;
//! - quotient metrics `min_g ||x - g y||` for finite groups of affine
//!   isometries, and the isometric reduction of orbit spaces to
//!   empirical-measure spaces.
//!
//! ## Conventions
//!
//! The sliced distance is the UNNORMALIZED integral over the sphere (no
//! division by the sphere area); see [`sliced`] for details. Every random
//! routine is keyed by an explicit 64-bit seed and is bit-reproducible
//! across runs and thread counts.

#![forbid(unsafe_code)]

pub mod bounds;
pub mod embedding;
mod error;
pub mod io;
pub mod measures;
pub mod orbit;
pub mod rng;
pub mod sliced;
pub mod special;

pub use error::{Error, Result};
pub use measures::{w1, w1_line, EmpiricalMeasure, Matching};
pub use sliced::{project, sw1_exact_2d, sw1_monte_carlo, Direction, SlicedEstimate, SlicedMethod};
pub use special::{
    beta, cap_cdf, cap_density, cap_expectation, kappa, reg_inc_beta, sphere_area, Dimension,
};
