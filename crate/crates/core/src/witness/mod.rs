//! Finite models of the two counterexamples over an infinitely cogenerated
//! conilpotent coalgebra: a non-rational two-dimensional module and a
//! contramodule extension that splits only as a module.

mod contra;
mod nonrational;

pub use contra::{build_contra_witness, phi, verify_contra_witness, ContraInput, ContraReport, ContraWitness, TaggedLinearMap};
pub use nonrational::{
    build_nonrational_module, is_rational, max_rational_submodule, nonrational_report, verify_module_axioms, EventuallyConstant,
    NonrationalReport, SubringElement, TaggedCofunctional, TwoDimModule,
};
