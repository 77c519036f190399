//! Stabilizer, inflation and symmetry based tests for quantum network states.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod bounds;
pub mod error;
pub mod graphs;
pub mod network;
pub mod nogo;
pub mod optimize;
pub mod pauli;
pub mod states;
pub mod symmetry;
pub mod witness;

pub use error::{Error, Result};
