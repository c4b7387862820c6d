pub mod coarsen;
pub mod error;
pub mod extend;
pub mod flatten;
pub mod functionals;
pub mod geometry;
pub mod grid;
pub mod harness;
pub mod partition;

pub use error::{Error, Result};
