//! Reduced cobar complex, Ext tables and the concatenation product.
//!
//! The differential on `x_1⊗…⊗x_i` is `Σ_t (-1)^{t+1} x_1⊗…⊗μ̄(x_t)⊗…⊗x_i`
//! with `t` counted from 1.

mod coefficients;
mod complex;
mod ext;
mod product;

pub use coefficients::{cobar_with_coefficients, CoefficientComplex};
pub use complex::{Bidegree, CobarComplex};
pub use ext::{ext_table, ExtTable, Window};
pub use product::{check_anti_isomorphism, reverse_factors, AntiIsomorphismReport, CobarClass, CohomologyBasis, ExtAlgebra};
