//! Casimir mutual free energy of two concentric dielectric spheres at
//! arbitrary temperature.
//!
//! The free energy is the Matsubara/multipole double sum
//!
//! ```text
//! βF = Σ'_m Σ_l (2l+1) [ln(1 − λ_l^TM) + ln(1 − λ_l^TE)]
//! ```
//!
//! (the `m = 0` term at half weight), with mode eigenvalues built from
//! Riccati–Bessel functions of imaginary argument. Those come from direct
//! evaluation for low order and small argument ([`specfun`]) and from high
//! order Debye expansions elsewhere ([`debye`]).
//!
//! Everything in the core is nondimensional (`ħ = c = k_B = 1`, lengths in
//! units of the inner radius `a`); [`units`] holds the SI conversions.

// Domain checks are written `!(x > 0.0)` on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod debye;
pub mod dispersion;
pub mod eigen;
pub mod error;
pub mod specfun;
pub mod thermal;
pub mod units;

pub use error::{Error, Result};
