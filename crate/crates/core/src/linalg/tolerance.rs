use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Upper bound accepted for every tolerance field.
pub const MAX_TOLERANCE: f64 = 1e-3;

/// Numerical slack shared by every predicate in the crate.
///
/// `eq` bounds Frobenius residuals of matrix identities, `eig1` is the width of
/// the window `[1 - eig1, 1 + eq]` in which an eigenvalue of `c*c` counts as 1,
/// and `ortho` bounds the deviation of a basis Gram matrix from the identity.
///
/// A contraction with a singular value in `(1 - eig1, 1)` is classified as
/// isometric in that direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub eq: f64,
    pub eig1: f64,
    pub ortho: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            eq: 1e-9,
            eig1: 1e-9,
            ortho: 1e-10,
        }
    }
}

impl Tolerance {
    pub fn new(eq: f64, eig1: f64, ortho: f64) -> Result<Self> {
        let tol = Tolerance { eq, eig1, ortho };
        tol.validate()?;
        Ok(tol)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("eq", self.eq), ("eig1", self.eig1), ("ortho", self.ortho)] {
            if !(0.0..=MAX_TOLERANCE).contains(&v) {
                return Err(Error::InvalidTolerance(format!(
                    "{name} = {v} is outside [0, {MAX_TOLERANCE}]"
                )));
            }
        }
        Ok(())
    }

    /// Replaces `eq`, keeping the other fields.
    pub fn with_eq(self, eq: f64) -> Result<Self> {
        Tolerance::new(eq, self.eig1, self.ortho)
    }

    /// Singular values at or below this (relative to the operator scale) are
    /// treated as zero when computing ranges and kernels.
    pub fn rank(&self) -> f64 {
        self.eq.sqrt().max(1e-10)
    }

    /// Slack for subspace membership and inclusion of computed bases, where
    /// residuals accumulate over several factorizations.
    pub fn inclusion(&self) -> f64 {
        (10.0 * self.eq).max(self.ortho)
    }
}
