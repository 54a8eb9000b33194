pub mod approx;
pub mod cli;
pub mod error;
pub mod frechet;
pub mod geometry;
pub mod middle;
pub mod reduction;
mod search;

pub use error::{Error, Result};
