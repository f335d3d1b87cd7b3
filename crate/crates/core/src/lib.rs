//! Free scalar field on the strip `ℝ^{d-1} × [−S, S]` and the half-space
//! with generalized Wentzell (dynamical) boundary conditions.
//!
//! The boundary value of the field obeys its own Klein–Gordon equation,
//! sourced by the inward normal derivative of the bulk field:
//!
//! ```text
//! (−□ + μ²) φ = 0              in the bulk
//! (−□_h + μ²) φ| = c⁻¹ ∂_⊥ φ    on the boundary
//! ```
//!
//! Modules:
//! - [`space`]: parameters, grids, the weighted space `L²(Σ) ⊕ L²(∂Σ)`
//! - [`modes`]: transverse spectrum, normalizations, boundary couplings
//! - [`evolve`]: spectral and FDTD time evolution, energy, causality
//! - [`qft`]: boundary two-point functions and smeared mode coefficients
//! - [`holo`]: the bulk-to-boundary map
//! - [`verify`]: the acceptance checks, shared by tests and the CLI

pub mod error;
pub mod evolve;
pub mod holo;
pub mod modes;
pub mod qft;
pub mod space;
pub mod special;
pub mod verify;

pub use error::{Error, Result};
