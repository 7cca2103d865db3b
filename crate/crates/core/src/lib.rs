pub mod dynamics;
pub mod error;
pub mod experiment;
pub mod mackey_glass;
pub mod network;
pub mod pauli;
pub mod qrc;
pub mod qubit;
pub mod response;
pub mod spectra;

pub use error::{Error, Result};
