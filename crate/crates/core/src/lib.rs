//! State-vector and density-matrix simulation of quantum algorithms,
//! adiabatic schedules, open-system dynamics and small protocols.

pub mod error;
pub mod linalg;
pub mod qadiabatic;
pub mod qalgo;
pub mod qgate;
pub mod qopen;
pub mod qproto;
pub mod qstate;
pub mod rng;

pub use error::{Error, Result};
