pub mod cli;
pub mod decimal;
pub mod error;
pub mod exactval;
pub mod formulas;
pub mod spectral;
pub mod verifier;
pub mod specfun;

pub use error::{Error, Result};
