pub mod analysis;
pub mod cli;
pub mod error;
pub mod floquet;
pub mod potentials;
pub mod propagator;
pub mod spline;

pub use error::{Error, Result};
