use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, ONE};

/// `B = M_{n_1} ⊕ ... ⊕ M_{n_k}`, acting by block-diagonal matrices on
/// `G = C^{n_1 + ... + n_k}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct CStarAlgebra {
    block_sizes: Vec<usize>,
}

impl TryFrom<Vec<usize>> for CStarAlgebra {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        CStarAlgebra::new(v)
    }
}

impl From<CStarAlgebra> for Vec<usize> {
    fn from(a: CStarAlgebra) -> Self {
        a.block_sizes
    }
}

impl CStarAlgebra {
    pub fn new(block_sizes: Vec<usize>) -> Result<Self> {
        if block_sizes.is_empty() {
            return Err(Error::InvalidAlgebra(
                "at least one block is required".into(),
            ));
        }
        if block_sizes.contains(&0) {
            return Err(Error::InvalidAlgebra(
                "block sizes must be at least 1".into(),
            ));
        }
        Ok(CStarAlgebra { block_sizes })
    }

    /// The scalars `C = M_1`.
    pub fn scalars() -> Self {
        CStarAlgebra {
            block_sizes: vec![1],
        }
    }

    /// The full matrix algebra `M_n`.
    pub fn full_matrix(n: usize) -> Result<Self> {
        CStarAlgebra::new(vec![n])
    }

    pub fn block_sizes(&self) -> &[usize] {
        &self.block_sizes
    }

    pub fn num_blocks(&self) -> usize {
        self.block_sizes.len()
    }

    /// Dimension of the representation space `G`.
    pub fn rep_dim(&self) -> usize {
        self.block_sizes.iter().sum()
    }

    /// Dimension of `B` as a vector space.
    pub fn dim(&self) -> usize {
        self.block_sizes.iter().map(|n| n * n).sum()
    }

    /// Dimension of the center, one per block.
    pub fn center_dim(&self) -> usize {
        self.block_sizes.len()
    }

    /// Half-open index range of block `i` inside `G`.
    pub fn block_range(&self, i: usize) -> std::ops::Range<usize> {
        let start: usize = self.block_sizes[..i].iter().sum();
        start..start + self.block_sizes[i]
    }

    /// Index of the block containing coordinate `g` of `G`.
    pub fn block_of(&self, g: usize) -> usize {
        let mut acc = 0;
        for (i, n) in self.block_sizes.iter().enumerate() {
            acc += n;
            if g < acc {
                return i;
            }
        }
        panic!("coordinate {g} outside G");
    }

    /// Matrix units `e_{ij}` of every block, as `n x n` matrices.
    pub fn basis(&self) -> Vec<ComplexMatrix> {
        let n = self.rep_dim();
        let mut out = Vec::with_capacity(self.dim());
        for b in 0..self.num_blocks() {
            let r = self.block_range(b);
            for i in r.clone() {
                for j in r.clone() {
                    let mut e = ComplexMatrix::zeros(n, n);
                    e[(i, j)] = ONE;
                    out.push(e);
                }
            }
        }
        out
    }

    /// Unit projection onto block `i`.
    pub fn block_unit(&self, i: usize) -> ComplexMatrix {
        let n = self.rep_dim();
        let mut e = ComplexMatrix::zeros(n, n);
        for g in self.block_range(i) {
            e[(g, g)] = ONE;
        }
        e
    }

    pub fn identity(&self) -> ComplexMatrix {
        ComplexMatrix::identity(self.rep_dim())
    }

    /// Frobenius norm of the entries of `x` outside the diagonal blocks.
    pub fn off_block_residual(&self, x: &ComplexMatrix) -> f64 {
        let n = self.rep_dim();
        assert_eq!(x.shape(), (n, n), "not an n x n matrix");
        let mut s = 0.0;
        for i in 0..n {
            let bi = self.block_of(i);
            for j in 0..n {
                if self.block_of(j) != bi {
                    s += x[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    }

    pub fn contains(&self, x: &ComplexMatrix, eps: f64) -> bool {
        x.shape() == (self.rep_dim(), self.rep_dim()) && self.off_block_residual(x) <= eps
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_bookkeeping() {
        let a = CStarAlgebra::new(vec![2, 1, 3]).unwrap();
        assert_eq!(a.rep_dim(), 6);
        assert_eq!(a.dim(), 4 + 1 + 9);
        assert_eq!(a.center_dim(), 3);
        assert_eq!(a.block_range(2), 3..6);
        assert_eq!(a.block_of(2), 1);
        assert_eq!(a.basis().len(), 14);
        let sum = a
            .basis()
            .iter()
            .fold(ComplexMatrix::zeros(6, 6), |acc, e| &acc + e);
        assert_eq!(a.off_block_residual(&sum), 0.0);
    }

    #[test]
    fn membership() {
        let a = CStarAlgebra::new(vec![1, 1]).unwrap();
        assert!(a.contains(&ComplexMatrix::from_real_diag(&[2.0, -1.0]), 0.0));
        assert!(!a.contains(&ComplexMatrix::from_real(&[&[0.0, 1.0], &[0.0, 0.0]]), 1e-9));
        assert!(a.contains(&ComplexMatrix::from_real(&[&[0.0, 1.0], &[1.0, 0.0]]), 1.5));
        let full = CStarAlgebra::full_matrix(2).unwrap();
        assert!(full.contains(&ComplexMatrix::from_real(&[&[0.0, 1.0], &[0.0, 0.0]]), 0.0));
    }

    #[test]
    fn rejects_empty_blocks() {
        assert!(CStarAlgebra::new(vec![]).is_err());
        assert!(CStarAlgebra::new(vec![2, 0]).is_err());
    }
}
