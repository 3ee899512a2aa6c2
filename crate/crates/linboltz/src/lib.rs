//! Linearized Boltzmann collision operators for polyatomic gases with
//! discrete internal energy levels and for monatomic gas mixtures.
//!
//! The crate builds the reduced collision kernels, discretizes the
//! linearized operator `L = Λ − K` on a truncated velocity grid, and measures
//! the structural properties the continuous operator is known to have:
//! symmetric kernels, a null space spanned by the collision invariants,
//! nonnegativity, linear growth of the collision frequency, conservation and
//! entropy dissipation of the nonlinear operator, and the decay conditions
//! behind compactness of `K`.
//!
//! Indices of energy levels and species are zero based throughout.

#![warn(missing_docs)]

pub mod cli;
pub mod cross_sections;
pub mod error;
pub mod gas_models;
pub mod kernels;
pub mod operator;
pub mod quadrature;
pub mod io;
pub mod verify;

pub use error::{Error, Result};
pub use gas_models::Vec3;
