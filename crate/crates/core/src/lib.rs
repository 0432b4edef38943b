//! Floquet Ising chain toolkit: exact and free-fermion simulators, hardware-style
//! noise, readout/depolarization mitigation, spectral diagnostics and small-n
//! process tomography.

pub mod analysis;
pub mod chain;
pub mod error;
pub mod fermion;
pub mod fit;
pub mod linalg;
pub mod mitigation;
pub mod noise;
pub mod panel;
pub mod pauli;
pub mod pfaffian;
pub mod pipeline;
pub mod rng;
pub mod statevector;
pub mod tomography;

pub use chain::{ChainConfig, InitialKind, InitialState};
pub use error::{Error, Result};
pub use panel::{Stage, TimeSeriesPanel};
pub use pauli::{Pauli, PauliString};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
