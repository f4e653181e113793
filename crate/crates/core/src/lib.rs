//! Spectral theory of one- and two-particle lattice quantum walks with an
//! on-site (ultralocal) interaction.
//!
//! The crate is `no_std` (with `alloc`) so the numerical core can be embedded
//! anywhere; the `std` feature only switches error types to `std::error`, and
//! `parallel` spreads grid reductions over a rayon pool without changing any
//! result bit.
//!
//! Layout:
//!
//! - [`quadrature`]: tensor midpoint rules on the torus with doubling,
//!   Richardson extrapolation for edge singularities, divergence verdicts and
//!   the Bessel-path evaluator for resolvent integrals.
//! - [`model`]: parameters, quasi-momenta and the closed-form scalar
//!   functions (effective hopping `r`, phase `eta`, support set, band edges).
//! - [`green`]: the resolvent torus integrals (Watson constants, fiber
//!   constants, `p(nu)`, `q(nu, phi)`) and the edge square-integrability test.
//! - [`spectrum`]: dispersion-equation solver and the spectral classifiers.
//! - [`wavefunction`]: bound-state kernels, eigenvectors and the
//!   one-particle-subspace generator.
//! - [`oracle`]: finite-lattice Hamiltonians, Lanczos and dense Hermitian
//!   eigensolvers used as brute-force cross-checks.
#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

mod error;
mod math;

pub mod green;
pub mod model;
pub mod oracle;
pub mod quadrature;
pub mod spectrum;
pub mod wavefunction;

pub use error::{Error, Result};
pub use model::{OneParticleParams, QuasiMomentum, TwoParticleParams};
