//! Nonequilibrium steady states of a two-site fermionic junction between two
//! reservoirs, from a Bloch-Redfield master equation kept beyond the secular
//! approximation, together with the quantum Fisher information with respect
//! to the tunneling rate, quantum correlations, currents and entropy
//! production.

pub mod density;
pub mod error;
pub mod flags;
pub mod linalg;
pub mod metrology;
pub mod liouvillian;
pub mod model;
pub mod observables;
pub mod sweep;
pub mod thermo;
pub mod verify;

pub use density::DensityMatrix;
pub use error::{Error, Result};
pub use model::{BathParams, EigenBasis, SystemParams};
