//! Dense complex linear algebra and the tolerance policy shared by all predicates.

mod eigen;
mod matrix;
mod subspace;
mod tolerance;

pub use eigen::{
    hermitian_eigensystem, pinv, psd_order_leq, spectral_norm, svd, HermitianEigen, Svd,
};
pub use matrix::{adjoint, inner, norm, ComplexMatrix, MatrixFile, C64};
pub use subspace::{eigenspace_at_one, orthogonal_projection, Subspace};
pub use tolerance::{Tolerance, MAX_TOLERANCE};

pub(crate) use matrix::ONE;
