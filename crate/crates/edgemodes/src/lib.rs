//! Simulation library for Majorana edge modes in the kicked transverse-field Ising chain.
//!
//! Engines, from cheapest to most general:
//! - [`freefermion`]: exact single-particle solution of the integrable drive (h = 0).
//! - [`statevector`]: dense many-body Floquet dynamics, XY control model, exact diagonalization.
//! - [`lindblad`]: discrete-time dissipative channel on small density matrices.
//!
//! [`spectroscopy`], [`reconstruct`] and [`experiments`] build on these.

pub mod core;
pub mod error;
pub mod experiments;
pub mod freefermion;
pub mod lindblad;
pub mod reconstruct;
pub mod spectroscopy;
pub mod statevector;

pub use error::{Error, Result};
