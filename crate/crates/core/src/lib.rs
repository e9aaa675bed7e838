pub mod closedform;
pub mod dirac;
pub mod error;
pub mod funk_hecke;
pub mod optimize;
pub mod oracle;
pub mod specfun;
pub mod weights;

pub use error::{Error, Result};
