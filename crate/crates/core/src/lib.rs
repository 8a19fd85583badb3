//! Exact quadratic-argument solutions of the Davey-Stewartson system
//!
//! ```text
//! 2iu_t + ε₁u_xx + u_yy − 2ε₂|u|²u − 2uv = 0
//! v_xx − ε₁(v_yy + 2(|u|²)_xx) = 0
//! ```
//!
//! together with its symmetry transforms, a finite-difference residual
//! oracle, and a split-step spectral evolver for DS-II.

pub mod ansatz;
pub mod catalog;
pub mod elliptic;
pub mod evolve;
pub mod matrix;
pub mod residual;
pub mod symmetry;
pub mod table;
pub mod timefn;
pub mod variant;

use thiserror::Error;

pub use catalog::{PointValue, Solution};
pub use timefn::TimeFunction;
pub use variant::{Sign, Variant};

/// Any error raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("elliptic: {0}")]
    Elliptic(#[from] elliptic::EllipticError),
    #[error("timefn: {0}")]
    TimeFn(#[from] timefn::TimeFnError),
    #[error("ansatz: {0}")]
    Ansatz(#[from] ansatz::AnsatzError),
    #[error("catalog: {0}")]
    Catalog(#[from] catalog::CatalogError),
    #[error("symmetry: {0}")]
    Symmetry(#[from] symmetry::SymmetryError),
    #[error("residual: {0}")]
    Residual(#[from] residual::ResidualError),
    #[error("evolve: {0}")]
    Evolve(#[from] evolve::EvolveError),
}
