//! Exact fair division of multicakes (disjoint unions of intervals) with a
//! bound on the number of intervals each agent receives.

#![no_std]

extern crate alloc;

pub mod division;
pub mod efm;
pub mod envyfree2;
pub mod error;
pub mod model;
pub mod oracles;
pub mod rectilinear;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Scalar;
