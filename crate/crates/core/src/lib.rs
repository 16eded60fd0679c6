//! Simulation of thermalisation under quantum control.
//!
//! A probe thermalises either with one of two baths selected by a control
//! qubit ([`twobath`]), or with a single bath prepared in a superposition of
//! purifications at different temperatures ([`onebath`]). The [`collision`]
//! module replaces full thermalisation by repeated partial collisions with
//! fresh bath qubits. All operator algebra lives in [`qmath`].

pub mod error;
pub mod qmath;
pub mod thermal;
pub mod channels;
pub mod twobath;
pub mod onebath;
pub mod collision;

pub use error::{Error, Result};
