//! Neural-network quantum states and correlator product states as exactly
//! sampleable tensor networks.
//!
//! Bit order: site 0 is the most significant bit when a configuration is
//! read as an integer. Pauli conventions: `Z|b> = (-1)^b |b>`.

/// Library version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub mod amplitude;
pub mod config;
pub mod cps;
pub mod dense;
pub mod error;
pub mod exact;
pub mod hamiltonian;
pub mod ising;
pub mod mat;
pub mod model;
pub mod nqs;
pub mod oracle;
pub mod scaled;
pub mod tensors;
pub mod vmc;
pub mod zoo;

pub use amplitude::{AmplitudeSource, FnAmplitude, Uniform};
pub use config::{enumerate_sector, Config};
pub use dense::{fidelity, max_deviation, DenseState, DEFAULT_ORACLE_CAP};
pub use error::{Error, Result};
pub use exact::{ground_state_exact, spectrum};
pub use hamiltonian::{Hamiltonian, Pauli, PauliTerm};
pub use ising::{classical_energy, ClassicalIsingParams};
pub use mat::CMat;
pub use model::{Model, ModelDocument, MODEL_FORMAT, MODEL_VERSION};
pub use num_complex::Complex64;
pub use scaled::ScaledComplex;
