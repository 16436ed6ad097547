//! Exact homological algebra for conilpotent coalgebras.

pub mod error;
pub mod exactlin;

pub use error::{Error, Result};
pub mod coalg;
pub mod cobar;
pub mod resolve;
pub mod dualalg;
pub mod witness;
