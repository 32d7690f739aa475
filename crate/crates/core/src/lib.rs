//! Staggered quantum walks on triangle-free graphs and their realization on
//! arrays of superconducting resonators with SQUID couplers.
//!
//! - [`graph`]: graphs, triangle-free checks, tessellations and generators.
//! - [`walk`]: reflection Hamiltonians and exact single-photon evolution.
//! - [`circuit`]: resonator modes, couplings and on/off flux settings.
//! - [`schedule`]: compilation of a walk into a per-SQUID flux schedule.
//! - [`oracle`]: dense brute-force references used for verification.

pub mod circuit;
pub mod error;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod schedule;
pub mod walk;

pub use error::{Error, ErrorClass, Result};
