//! Construction, deformation, and simulation of XX spin chains whose
//! one-excitation dynamics exhibit perfect state transfer and two-site
//! fractional revival.
//!
//! The crate is organised around the one-excitation restriction of a chain,
//! a Jacobi matrix:
//!
//! - [`chain`] — chain and measure types, eigendecomposition contract;
//! - [`orthopoly`] — the attached orthogonal polynomials and the
//!   characteristic-polynomial route to the weights;
//! - [`inverse`] — spectrum + weight rule → unique chain (discrete
//!   Stieltjes reconstruction);
//! - [`models`] — closed-form families on uniform and bi-lattice spectra;
//! - [`deform`] — isospectral deformations trading mirror symmetry for
//!   two-site revival with zero relative phase;
//! - [`surgery`] — eigenvalue removal preserving transfer;
//! - [`dynamics`] — exact propagators, transfer/revival detectors, and the
//!   closed-form amplitude of the uniform chain;
//! - [`designer`] — the generic two-parameter revival synthesis.

pub mod chain;
pub mod deform;
pub mod designer;
pub mod dynamics;
pub mod error;
pub mod inverse;
pub mod models;
pub mod orthopoly;
pub mod surgery;

pub use chain::{eigendecompose, spectral_data, EigenSystem, JacobiMatrix, SpectralData};
pub use error::{Error, Result};
