//! Dual and graded algebras, modules over them, and the Ext comparisons.

mod algebra;
mod bar;
mod compare;
mod ext;
mod initial;
mod module;

pub use algebra::{dual_algebra, dual_algebra_with, graded_dual, quadratic_algebra, Algebra, AlgebraReport, Convention, GradedAlgebra, GradedDual};
pub use bar::{bar_differential_squares_to_zero, bar_ext_table};
pub use module::{comodule_to_module, comodule_to_module_over, comodule_to_module_with, module_to_comodule, ExtensionSpace, ModulePresentation};
pub use ext::{free_hom_complex, free_resolution, module_ext, FreeResolution};
pub use compare::{compare_theorem1, comodule_ext, ComparisonReport};
pub use initial::{ext_via_initially_projective, is_projective, InitialExtReport, InitiallyProjectiveResolution};
