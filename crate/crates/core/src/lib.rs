pub mod cli;
pub mod criteria;
pub mod divisors;
pub mod error;
pub mod exactgroup;
pub mod numerics;
pub mod thetafield;

pub use error::{Error, Result};
