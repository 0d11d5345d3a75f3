use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, Subspace, Tolerance, C64};

use super::space::{vectorize, HilbertModule};

/// A subspace of a module's scalar span that is closed under right
/// multiplication. Held as an orthonormal basis in `C^{m n}`.
#[derive(Debug, Clone)]
pub struct Submodule {
    parent: Arc<HilbertModule>,
    space: Subspace,
}

impl Submodule {
    /// Span of `elements`, which must lie in `parent` and span a set closed
    /// under right multiplication.
    pub fn from_elements(
        parent: Arc<HilbertModule>,
        elements: &[ComplexMatrix],
        tol: &Tolerance,
    ) -> Result<Self> {
        let eps = tol.inclusion();
        for (j, x) in elements.iter().enumerate() {
            if !parent.contains(x, eps * x.frobenius_norm().max(1.0)) {
                return Err(Error::InvalidModule(format!(
                    "element {j} is not in the parent module"
                )));
            }
        }
        let dim = parent.lift_dim() * parent.rep_dim();
        let vecs: Vec<Vec<C64>> = elements.iter().map(vectorize).collect();
        let space = Subspace::span(dim, &vecs, tol);
        let s = Submodule { parent, space };
        let residual = s.closure_residual();
        if residual > eps {
            return Err(Error::InvalidModule(format!(
                "span is not closed under right multiplication (residual {residual:.3e})"
            )));
        }
        Ok(s)
    }

    /// Wraps a subspace of the parent span without the closure check.
    pub(crate) fn from_space_unchecked(parent: Arc<HilbertModule>, space: Subspace) -> Self {
        Submodule { parent, space }
    }

    pub fn zero(parent: Arc<HilbertModule>) -> Self {
        let dim = parent.lift_dim() * parent.rep_dim();
        Submodule {
            parent,
            space: Subspace::zero(dim),
        }
    }

    pub fn full(parent: Arc<HilbertModule>) -> Self {
        let space = parent.span().clone();
        Submodule { parent, space }
    }

    /// Submodule spanned by the listed parent generators, closed under right
    /// multiplication.
    pub fn generated_by_indices(
        parent: Arc<HilbertModule>,
        indices: &[usize],
        tol: &Tolerance,
    ) -> Result<Self> {
        let mut seeds = Vec::with_capacity(indices.len());
        for &i in indices {
            let g = parent
                .generators()
                .get(i)
                .ok_or_else(|| Error::InvalidModule(format!("generator index {i} out of range")))?;
            seeds.push(g.clone());
        }
        Submodule::generated_by(parent, &seeds, tol)
    }

    /// Smallest submodule containing `seeds`.
    pub fn generated_by(
        parent: Arc<HilbertModule>,
        seeds: &[ComplexMatrix],
        tol: &Tolerance,
    ) -> Result<Self> {
        let mut elements: Vec<ComplexMatrix> = seeds.to_vec();
        for x in seeds {
            for b in parent.algebra().basis() {
                elements.push(x * &b);
            }
        }
        Submodule::from_elements(parent, &elements, tol)
    }

    pub fn parent(&self) -> &Arc<HilbertModule> {
        &self.parent
    }

    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.space.is_zero()
    }

    /// Orthonormal scalar basis as elements.
    pub fn basis_elements(&self) -> Vec<ComplexMatrix> {
        self.parent.elements_of(&self.space)
    }

    pub fn contains(&self, x: &ComplexMatrix, eps: f64) -> bool {
        x.shape() == (self.parent.lift_dim(), self.parent.rep_dim())
            && self.space.contains(&vectorize(x), eps)
    }

    /// Distance of `x` from the submodule.
    pub fn residual(&self, x: &ComplexMatrix) -> f64 {
        self.space.residual(&vectorize(x))
    }

    /// `other ⊆ self` within `eps`.
    pub fn includes(&self, other: &Submodule, eps: f64) -> bool {
        self.space.includes(&other.space, eps)
    }

    pub fn same_as(&self, other: &Submodule, eps: f64) -> bool {
        self.space.same_as(&other.space, eps)
    }

    /// Largest distance from the span of `x b` over basis elements `x` and
    /// matrix units `b`.
    pub fn closure_residual(&self) -> f64 {
        let units = self.parent.algebra().basis();
        let mut worst: f64 = 0.0;
        for x in self.basis_elements() {
            for b in &units {
                worst = worst.max(self.residual(&(&x * b)));
            }
        }
        worst
    }

    /// Largest distance from the span of `x + y` over pairs of basis elements.
    pub fn addition_residual(&self) -> f64 {
        let basis = self.basis_elements();
        let mut worst: f64 = 0.0;
        for x in &basis {
            for y in &basis {
                worst = worst.max(self.residual(&(x + y)));
            }
        }
        worst
    }

    /// Closure of `span{L_x g}` over elements of the submodule.
    pub fn lifted_space(&self, tol: &Tolerance) -> Subspace {
        Subspace::range(
            &ComplexMatrix::hstack(self.parent.lift_dim(), &self.basis_elements()),
            tol,
        )
    }

    /// The submodule as a module in its own right, generated by its
    /// orthonormal basis.
    pub fn to_module(&self, tol: &Tolerance) -> Result<Arc<HilbertModule>> {
        Ok(Arc::new(HilbertModule::new(
            self.parent.algebra().clone(),
            self.parent.lift_dim(),
            self.basis_elements(),
            tol,
        )?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn first_row_matrices() {
        let e = Arc::new(HilbertModule::matrix_algebra(2, &tol()).unwrap());
        let s = Submodule::generated_by_indices(e.clone(), &[0], &tol()).unwrap();
        assert_eq!(s.dim(), 2);
        assert!(s.contains(&e.generators()[1], 1e-12));
        assert!(!s.contains(&e.generators()[2], 1e-3));
        assert!(s.closure_residual() < 1e-12);
        assert!(s.addition_residual() < 1e-12);
        assert_eq!(s.lifted_space(&tol()).dim(), 1);
        let m = s.to_module(&tol()).unwrap();
        assert_eq!(m.dim(), 2);
    }

    #[test]
    fn column_span_is_not_a_submodule() {
        let e = Arc::new(HilbertModule::matrix_algebra(2, &tol()).unwrap());
        // {e11, e21}: first-column matrices are not closed under right action.
        let g = e.generators();
        let err =
            Submodule::from_elements(e.clone(), &[g[0].clone(), g[2].clone()], &tol()).unwrap_err();
        assert!(matches!(err, Error::InvalidModule(_)));
    }

    #[test]
    fn inclusion_and_equality() {
        let e = Arc::new(HilbertModule::matrix_algebra(2, &tol()).unwrap());
        let a = Submodule::generated_by_indices(e.clone(), &[1], &tol()).unwrap();
        let b = Submodule::generated_by_indices(e.clone(), &[0], &tol()).unwrap();
        assert!(a.same_as(&b, 1e-12));
        let full = Submodule::full(e.clone());
        assert!(full.includes(&a, 1e-12));
        assert!(!a.includes(&full, 1e-3));
        assert!(a.includes(&Submodule::zero(e), 0.0));
    }
}
