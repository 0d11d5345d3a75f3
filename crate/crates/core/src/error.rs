use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("matrix entries must be finite")]
    NonFinite,

    #[error("matrix is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("matrix is not a positive contraction")]
    NotContractivePositive,

    #[error("operator is not a contraction (norm {norm:.12})")]
    NotContraction { norm: f64 },

    #[error("operator is not a partial isometry (residual {residual:.3e})")]
    NotPartialIsometry { residual: f64 },

    #[error("target of the right factor does not match the source of the left factor")]
    TargetSourceMismatch,

    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),

    #[error("invalid subspace: {0}")]
    InvalidSubspace(String),

    #[error("invalid partial function: {0}")]
    InvalidPartialFn(String),

    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    #[error("invalid module: {0}")]
    InvalidModule(String),

    #[error("element is not in the module")]
    NotInModule,

    #[error("inner product leaves the algebra (off-block residual {residual:.3e})")]
    NotInAlgebra { residual: f64 },

    #[error("module map is ill-formed: {0}")]
    IllFormedMap(String),

    #[error("submodule is not complemented")]
    NotComplemented,

    #[error("invalid partially defined isometry: {0}")]
    InvalidPdi(String),

    /// A proved identity failed numerically. Carries a description of the failing check.
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}
