//! Hilbert modules over finite-dimensional C*-algebras.
//!
//! The algebra is a direct sum of full matrix blocks acting on `G`; a module
//! element `x` is represented by the operator `L_x: G -> H` with
//! `⟨x, y⟩ = L_x* L_y`, so module questions reduce to operator questions on
//! `H`. Every module here is self-dual and every submodule is complemented.

mod algebra;
mod map;
mod ops;
pub mod random;
mod space;
mod submodule;

pub use algebra::CStarAlgebra;
pub use map::{same_module, ModuleMap};
pub use ops::{
    classify_mod, complement, contained_partial_isometry_mod, cross_orthogonality_residual,
    domination_defect, factor_partial_isometry, is_partial_isometry_mod, isometric_submodule,
    kernel_of, lift, operator_map, product_invariance_criterion, range_submodule, Complement,
    ContainedModulePI, Factorization, InvarianceCriterion, ModulePartialIsometry,
};
pub use space::{unvectorize, vectorize, HilbertModule};
pub use submodule::Submodule;
