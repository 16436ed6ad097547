//! Conilpotent coalgebras and their comodules.

mod coalgebra;
mod comodule;
mod graded;

pub use coalgebra::{Coalgebra, FiltrationChain, Term, ValidationReport};
pub use comodule::{primitives, Comodule};
pub use graded::GradedCoalgebra;
