//! Variational quantum algorithm workbench: an exact statevector simulator,
//! Pauli observables, a catalog of circuit ansatz families, variational
//! drivers and small quantum machine learning pipelines.

pub mod ansatz;
pub mod error;
pub mod hamiltonian;
pub mod qml;
pub mod sim;
pub mod variational;

pub use error::{Error, Result};
