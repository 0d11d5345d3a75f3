use crate::error::{Error, Result};
use crate::linalg::{pinv, ComplexMatrix, Subspace, Tolerance, C64, ONE};

use super::algebra::CStarAlgebra;

/// A Hilbert module over a block-diagonal matrix algebra, held in lifted
/// form: every element `x` is the `m x n` matrix `L_x: G -> H`, with
/// `⟨x, y⟩ = L_x* L_y` and right action `x b = L_x b`.
///
/// Elements are vectorized row-major into `C^{m n}`; the module is the
/// scalar span of its generators there.
#[derive(Debug, Clone)]
pub struct HilbertModule {
    algebra: CStarAlgebra,
    lift_dim: usize,
    generators: Vec<ComplexMatrix>,
    span: Subspace,
    coords: ComplexMatrix,
    lifted: Subspace,
    /// Pseudoinverse of `[L_1 | ... | L_k]`.
    stacked_pinv: ComplexMatrix,
}

pub fn vectorize(x: &ComplexMatrix) -> Vec<C64> {
    x.as_slice().to_vec()
}

pub fn unvectorize(rows: usize, cols: usize, v: &[C64]) -> ComplexMatrix {
    ComplexMatrix::from_vec(rows, cols, v.to_vec())
}

impl HilbertModule {
    /// Validates the generators: shape `lift_dim x n`, linear independence,
    /// closure under right multiplication by matrix units of the algebra,
    /// and inner products inside the algebra.
    pub fn new(
        algebra: CStarAlgebra,
        lift_dim: usize,
        generators: Vec<ComplexMatrix>,
        tol: &Tolerance,
    ) -> Result<Self> {
        let n = algebra.rep_dim();
        if let Some(g) = generators.iter().find(|g| g.shape() != (lift_dim, n)) {
            return Err(Error::ShapeMismatch(format!(
                "generator is {}x{}, expected {lift_dim}x{n}",
                g.rows(),
                g.cols()
            )));
        }
        let dim = lift_dim * n;
        let vecs: Vec<Vec<C64>> = generators.iter().map(vectorize).collect();
        let gmat = ComplexMatrix::from_columns(dim, &vecs);
        let span = Subspace::range(&gmat, tol);
        if span.dim() < generators.len() {
            return Err(Error::InvalidModule(format!(
                "{} generators span only {} dimensions",
                generators.len(),
                span.dim()
            )));
        }
        let eps = tol.inclusion();
        let basis = algebra.basis();
        for (j, x) in generators.iter().enumerate() {
            let scale = x.frobenius_norm().max(1.0);
            for b in &basis {
                if !span.contains(&vectorize(&(x * b)), eps * scale) {
                    return Err(Error::InvalidModule(format!(
                        "generator {j} is not closed under right multiplication"
                    )));
                }
            }
        }
        for x in &generators {
            for y in &generators {
                let residual = algebra.off_block_residual(&(&x.adjoint() * y));
                if residual > eps * x.frobenius_norm().max(1.0) * y.frobenius_norm().max(1.0) {
                    return Err(Error::NotInAlgebra { residual });
                }
            }
        }
        let cutoff = tol.rank() * gmat.frobenius_norm().max(1.0);
        let coords = pinv(&gmat, cutoff);
        let stacked = ComplexMatrix::hstack(lift_dim, &generators);
        let lifted = Subspace::range(&stacked, tol);
        let stacked_pinv = pinv(&stacked, tol.rank() * stacked.frobenius_norm().max(1.0));
        Ok(HilbertModule {
            algebra,
            lift_dim,
            generators,
            span,
            coords,
            lifted,
            stacked_pinv,
        })
    }

    /// The smallest module containing `seeds`: their span, closed under right
    /// multiplication by iterating to a fixpoint. Generators of the result are
    /// an orthonormal basis of the span.
    pub fn generated_by(
        algebra: CStarAlgebra,
        lift_dim: usize,
        seeds: &[ComplexMatrix],
        tol: &Tolerance,
    ) -> Result<Self> {
        let n = algebra.rep_dim();
        if let Some(g) = seeds.iter().find(|g| g.shape() != (lift_dim, n)) {
            return Err(Error::ShapeMismatch(format!(
                "seed is {}x{}, expected {lift_dim}x{n}",
                g.rows(),
                g.cols()
            )));
        }
        let dim = lift_dim * n;
        let basis = algebra.basis();
        let mut span = Subspace::span(dim, &seeds.iter().map(vectorize).collect::<Vec<_>>(), tol);
        let eps = tol.inclusion();
        loop {
            let mut missing = Vec::new();
            for v in span.basis_vectors() {
                let x = unvectorize(lift_dim, n, &v);
                for b in &basis {
                    let xb = vectorize(&(&x * b));
                    if !span.contains(&xb, eps) {
                        missing.push(xb);
                    }
                }
            }
            if missing.is_empty() {
                break;
            }
            let mut vecs = span.basis_vectors();
            vecs.extend(missing);
            let next = Subspace::span(dim, &vecs, tol);
            if next.dim() == span.dim() {
                break;
            }
            span = next;
        }
        let generators = span
            .basis_vectors()
            .iter()
            .map(|v| unvectorize(lift_dim, n, v))
            .collect();
        HilbertModule::new(algebra, lift_dim, generators, tol)
    }

    /// `C^dim` as a module over the scalars, generated by the unit vectors.
    pub fn hilbert_space(dim: usize, tol: &Tolerance) -> Result<Self> {
        let generators = (0..dim)
            .map(|i| {
                let mut e = ComplexMatrix::zeros(dim, 1);
                e[(i, 0)] = ONE;
                e
            })
            .collect();
        HilbertModule::new(CStarAlgebra::scalars(), dim, generators, tol)
    }

    /// `M_n` as a right module over itself with `⟨x, y⟩ = x* y`, generated by
    /// the matrix units.
    pub fn matrix_algebra(n: usize, tol: &Tolerance) -> Result<Self> {
        let algebra = CStarAlgebra::full_matrix(n)?;
        let generators = algebra.basis();
        HilbertModule::new(algebra, n, generators, tol)
    }

    pub fn algebra(&self) -> &CStarAlgebra {
        &self.algebra
    }

    pub fn lift_dim(&self) -> usize {
        self.lift_dim
    }

    pub fn rep_dim(&self) -> usize {
        self.algebra.rep_dim()
    }

    pub fn generators(&self) -> &[ComplexMatrix] {
        &self.generators
    }

    /// Dimension of the module as a complex vector space.
    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    /// The module as a subspace of `C^{m n}`.
    pub fn span(&self) -> &Subspace {
        &self.span
    }

    /// `[L_1 | ... | L_k]⁺`; `C = [c(x_1) | ... | c(x_k)] [L_1 | ... | L_k]⁺`
    /// recovers the lift of a map from its images.
    pub(crate) fn stacked_pinv(&self) -> &ComplexMatrix {
        &self.stacked_pinv
    }

    /// Closure of `span{L_x g}` in `H = C^m`.
    pub fn lifted_space(&self) -> &Subspace {
        &self.lifted
    }

    /// Lifted space of the `i`-th central summand, `span{L_x g : g in block i}`.
    pub fn block_lifted_space(&self, i: usize, tol: &Tolerance) -> Subspace {
        let unit = self.algebra.block_unit(i);
        let parts: Vec<ComplexMatrix> = self.generators.iter().map(|x| x * &unit).collect();
        Subspace::range(&ComplexMatrix::hstack(self.lift_dim, &parts), tol)
    }

    /// An orthonormal scalar basis of the module, as elements.
    pub fn orthonormal_elements(&self) -> Vec<ComplexMatrix> {
        self.elements_of(&self.span)
    }

    pub(crate) fn elements_of(&self, s: &Subspace) -> Vec<ComplexMatrix> {
        s.basis_vectors()
            .iter()
            .map(|v| unvectorize(self.lift_dim, self.rep_dim(), v))
            .collect()
    }

    /// `Σ coeffs[j] L_j`.
    pub fn element(&self, coeffs: &[C64]) -> ComplexMatrix {
        assert_eq!(coeffs.len(), self.dim(), "coefficient count mismatch");
        let mut x = ComplexMatrix::zeros(self.lift_dim, self.rep_dim());
        for (c, g) in coeffs.iter().zip(&self.generators) {
            x = &x + &g.scale(*c);
        }
        x
    }

    /// Generator coordinates of the element nearest to `x` in the module.
    pub fn coordinates(&self, x: &ComplexMatrix) -> Vec<C64> {
        self.coords.mul_vec(&vectorize(x))
    }

    pub fn contains(&self, x: &ComplexMatrix, eps: f64) -> bool {
        x.shape() == (self.lift_dim, self.rep_dim()) && self.span.contains(&vectorize(x), eps)
    }

    /// `L_x* L_y` without validation.
    pub fn inner(&self, x: &ComplexMatrix, y: &ComplexMatrix) -> ComplexMatrix {
        &x.adjoint() * y
    }

    /// `⟨x, y⟩`, checked to lie in the algebra.
    pub fn module_inner(
        &self,
        x: &ComplexMatrix,
        y: &ComplexMatrix,
        tol: &Tolerance,
    ) -> Result<ComplexMatrix> {
        let shape = (self.lift_dim, self.rep_dim());
        if x.shape() != shape || y.shape() != shape {
            return Err(Error::ShapeMismatch(format!(
                "elements must be {}x{}",
                shape.0, shape.1
            )));
        }
        let ip = self.inner(x, y);
        let residual = self.algebra.off_block_residual(&ip);
        if residual > tol.inclusion() * x.frobenius_norm().max(1.0) * y.frobenius_norm().max(1.0) {
            return Err(Error::NotInAlgebra { residual });
        }
        Ok(ip)
    }

    /// Same algebra, same lift dimension and the same span.
    pub fn same_as(&self, other: &HilbertModule, tol: &Tolerance) -> bool {
        self.algebra == other.algebra
            && self.lift_dim == other.lift_dim
            && self.span.same_as(&other.span, tol.inclusion())
    }

    /// Whether the inner products `⟨x, y⟩` span the whole algebra.
    pub fn is_full(&self, tol: &Tolerance) -> bool {
        let n = self.rep_dim();
        let mut vecs = Vec::new();
        for x in &self.generators {
            for y in &self.generators {
                vecs.push(vectorize(&self.inner(x, y)));
            }
        }
        Subspace::span(n * n, &vecs, tol).dim() == self.algebra.dim()
    }

    pub fn center_dim(&self) -> usize {
        self.algebra.center_dim()
    }
}
