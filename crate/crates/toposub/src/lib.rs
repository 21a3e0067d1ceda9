pub mod error;
pub mod ring_linalg;

pub use error::{Error, Result};
pub mod pauli;
pub mod lattice;
pub mod code;
pub mod theory;
pub mod builder;
pub mod anyon_lab;
pub mod catalog;
