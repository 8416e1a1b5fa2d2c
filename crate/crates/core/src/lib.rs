//! Exchange-mediated magnon-phonon coupling for an isotropic
//! three-dimensional ferromagnet with a flat optical phonon branch.
//!
//! The crate computes the retarded coupling `Δ_MP(ω)`, the renormalized
//! magnon spectral functions, the temperature-dependent magnetization and the
//! Curie temperature, together with independent numerical oracles for each
//! analytic shortcut (Matsubara summation, Kramers-Kronig, sum rules).

pub mod coupling;
pub mod error;
pub mod grid;
pub mod kramers_kronig;
pub mod model;
pub mod quadrature;
pub mod spectra;
pub mod spin_algebra;
pub mod thermo;

pub mod cli;

pub use error::{Error, Result};
