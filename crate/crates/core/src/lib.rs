pub mod cli;
pub mod daubechies;
pub mod error;
pub mod estimator;
pub mod experiment;
pub mod grid;
pub mod io;
pub mod meyer;
pub mod rates;
pub mod signals;
pub mod system;

pub use error::{Error, Result};
