use super::eigen::{hermitian_eigensystem, one_sided_jacobi};
use super::matrix::{inner, norm, ComplexMatrix, C64, ONE, ZERO};
use super::tolerance::Tolerance;
use crate::error::{Error, Result};

/// A subspace of `C^ambient_dim`, held as an orthonormal basis (matrix columns).
#[derive(Debug, Clone)]
pub struct Subspace {
    ambient_dim: usize,
    basis: ComplexMatrix,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: ComplexMatrix::zeros(ambient_dim, 0),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: ComplexMatrix::identity(ambient_dim),
        }
    }

    /// Wraps vectors that are already orthonormal; the Gram matrix must be the
    /// identity within `tol.ortho`.
    pub fn from_orthonormal(
        ambient_dim: usize,
        vectors: &[Vec<C64>],
        tol: &Tolerance,
    ) -> Result<Self> {
        if vectors.len() > ambient_dim || vectors.iter().any(|v| v.len() != ambient_dim) {
            return Err(Error::InvalidSubspace(format!(
                "{} vectors do not fit in dimension {ambient_dim}",
                vectors.len()
            )));
        }
        let basis = ComplexMatrix::from_columns(ambient_dim, vectors);
        let gram = &basis.adjoint() * &basis;
        let dev = gram.distance(&ComplexMatrix::identity(vectors.len()));
        if dev > tol.ortho {
            return Err(Error::InvalidSubspace(format!(
                "basis Gram matrix deviates from identity by {dev:.3e}"
            )));
        }
        Ok(Subspace { ambient_dim, basis })
    }

    /// Column space of `a`; singular values at or below
    /// `tol.rank() * max(1, σ_max)` are discarded.
    pub fn range(a: &ComplexMatrix, tol: &Tolerance) -> Self {
        let m = a.rows();
        if a.cols() == 0 || m == 0 {
            return Subspace::zero(m);
        }
        if a.cols() > m {
            // Left singular vectors of a are the right singular vectors of a*,
            // and Jacobi on a* rotates only m columns.
            let f = one_sided_jacobi(&a.adjoint());
            let cutoff = rank_cutoff(&f.sigma, tol);
            let cols: Vec<Vec<C64>> = (0..m)
                .filter(|&j| f.sigma[j] > cutoff)
                .map(|j| f.v.column(j))
                .collect();
            let cols = orthonormalize(m, &cols);
            return Subspace {
                ambient_dim: m,
                basis: ComplexMatrix::from_columns(m, &cols),
            };
        }
        let f = one_sided_jacobi(a);
        let cutoff = rank_cutoff(&f.sigma, tol);
        let cols: Vec<Vec<C64>> = (0..a.cols())
            .filter(|&j| f.sigma[j] > cutoff)
            .map(|j| {
                f.work
                    .column(j)
                    .into_iter()
                    .map(|z| z / f.sigma[j])
                    .collect()
            })
            .collect();
        let cols = orthonormalize(m, &cols);
        Subspace {
            ambient_dim: m,
            basis: ComplexMatrix::from_columns(m, &cols),
        }
    }

    /// Span of the given vectors, with the same rank rule as [`range`](Self::range).
    pub fn span(ambient_dim: usize, vectors: &[Vec<C64>], tol: &Tolerance) -> Self {
        Subspace::range(&ComplexMatrix::from_columns(ambient_dim, vectors), tol)
    }

    /// Null space of `a`, with the same rank rule as [`range`](Self::range).
    pub fn kernel(a: &ComplexMatrix, tol: &Tolerance) -> Self {
        let n = a.cols();
        if a.rows() == 0 {
            return Subspace::full(n);
        }
        if n > a.rows() {
            // Jacobi on a wide matrix rotates n columns of which at most
            // `rows` survive; take the complement of the row space instead.
            return Subspace::range(&a.adjoint(), tol).complement();
        }
        let f = one_sided_jacobi(a);
        let cutoff = rank_cutoff(&f.sigma, tol);
        let cols: Vec<Vec<C64>> = (0..n)
            .filter(|&j| f.sigma[j] <= cutoff)
            .map(|j| f.v.column(j))
            .collect();
        let cols = orthonormalize(n, &cols);
        Subspace {
            ambient_dim: n,
            basis: ComplexMatrix::from_columns(n, &cols),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    /// Orthonormal basis as the columns of an `ambient_dim x dim` matrix.
    pub fn basis(&self) -> &ComplexMatrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<C64>> {
        self.basis.columns()
    }

    pub fn project(&self, v: &[C64]) -> Vec<C64> {
        let coeffs = self.basis.adjoint().mul_vec(v);
        self.basis.mul_vec(&coeffs)
    }

    /// Distance from `v` to the subspace.
    pub fn residual(&self, v: &[C64]) -> f64 {
        let p = self.project(v);
        norm(&v.iter().zip(&p).map(|(a, b)| a - b).collect::<Vec<_>>())
    }

    /// `v` lies in the subspace up to `eps * max(1, ‖v‖)`.
    pub fn contains(&self, v: &[C64], eps: f64) -> bool {
        self.residual(v) <= eps * norm(v).max(1.0)
    }

    /// `‖(1 - P_self) Q_other‖_F` for the orthonormal basis `Q_other`.
    pub fn inclusion_residual(&self, other: &Subspace) -> f64 {
        assert_eq!(
            self.ambient_dim, other.ambient_dim,
            "ambient dimension mismatch"
        );
        let q = &other.basis;
        let pq = &self.basis * &(&self.basis.adjoint() * q);
        q.distance(&pq)
    }

    /// `other ⊆ self` within `eps`.
    pub fn includes(&self, other: &Subspace, eps: f64) -> bool {
        self.ambient_dim == other.ambient_dim && self.inclusion_residual(other) <= eps
    }

    /// Mutual inclusion within `eps`.
    pub fn same_as(&self, other: &Subspace, eps: f64) -> bool {
        self.dim() == other.dim() && self.includes(other, eps) && other.includes(self, eps)
    }

    /// Orthogonal complement in the ambient space.
    pub fn complement(&self) -> Subspace {
        let (n, k) = (self.ambient_dim, self.dim());
        let mut vectors = self.basis_vectors();
        vectors.resize(n, vec![ZERO; n]);
        let completed = orthonormal_completion(n, &vectors);
        Subspace {
            ambient_dim: n,
            basis: ComplexMatrix::from_columns(n, &completed[k..]),
        }
    }

    /// Sum of two subspaces of the same ambient space.
    pub fn join(&self, other: &Subspace, tol: &Tolerance) -> Subspace {
        assert_eq!(
            self.ambient_dim, other.ambient_dim,
            "ambient dimension mismatch"
        );
        let mut vs = self.basis_vectors();
        vs.extend(other.basis_vectors());
        Subspace::span(self.ambient_dim, &vs, tol)
    }
}

fn rank_cutoff(sigma: &[f64], tol: &Tolerance) -> f64 {
    let top = sigma.first().copied().unwrap_or(0.0);
    tol.rank() * top.max(1.0)
}

/// Modified Gram-Schmidt, applied twice, on vectors assumed linearly independent.
fn orthonormalize(n: usize, vectors: &[Vec<C64>]) -> Vec<Vec<C64>> {
    let mut out: Vec<Vec<C64>> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for q in &out {
                let c = inner(q, &w);
                w.iter_mut().zip(q).for_each(|(a, b)| *a -= c * b);
            }
        }
        let nw = norm(&w);
        if nw > 0.0 {
            out.push(w.into_iter().map(|z| z / nw).collect());
        }
    }
    debug_assert!(out.iter().all(|v| v.len() == n));
    out
}

/// Orthonormalizes `vectors` in order, replacing any vector that is (nearly)
/// dependent on its predecessors by a fresh unit vector, so the result always
/// has `vectors.len()` orthonormal columns. Requires `vectors.len() <= n`.
pub(crate) fn orthonormal_completion(n: usize, vectors: &[Vec<C64>]) -> Vec<Vec<C64>> {
    assert!(vectors.len() <= n, "more vectors than dimensions");
    let mut out: Vec<Vec<C64>> = Vec::with_capacity(vectors.len());
    let mut next_unit = 0;
    for v in vectors {
        let mut accepted = reduce(&out, v, 1e-8 * norm(v));
        while accepted.is_none() {
            let mut e = vec![ZERO; n];
            e[next_unit] = ONE;
            next_unit += 1;
            accepted = reduce(&out, &e, 0.1);
        }
        out.push(accepted.unwrap());
    }
    out
}

fn reduce(basis: &[Vec<C64>], v: &[C64], min_norm: f64) -> Option<Vec<C64>> {
    let mut w = v.to_vec();
    for _ in 0..2 {
        for q in basis {
            let c = inner(q, &w);
            w.iter_mut().zip(q).for_each(|(a, b)| *a -= c * b);
        }
    }
    let nw = norm(&w);
    (nw > min_norm && nw > 0.0).then(|| w.into_iter().map(|z| z / nw).collect())
}

/// Span of the eigenvectors of `a` with eigenvalue at least `1 - tol.eig1`.
/// `a` must be Hermitian, positive semidefinite and of norm at most `1 + tol.eq`.
pub fn eigenspace_at_one(a: &ComplexMatrix, tol: &Tolerance) -> Result<Subspace> {
    let eig = hermitian_eigensystem(a, tol)?;
    let n = a.rows();
    if let (Some(top), Some(bottom)) = (eig.max_value(), eig.min_value()) {
        if top > 1.0 + tol.eq || bottom < -tol.eq {
            return Err(Error::NotContractivePositive);
        }
    }
    let vectors: Vec<Vec<C64>> = eig
        .values
        .iter()
        .enumerate()
        .take_while(|(_, &l)| l >= 1.0 - tol.eig1)
        .map(|(k, _)| eig.vector(k))
        .collect();
    Ok(Subspace {
        ambient_dim: n,
        basis: ComplexMatrix::from_columns(n, &vectors),
    })
}

/// `Σ b b*` over the basis vectors.
pub fn orthogonal_projection(s: &Subspace) -> ComplexMatrix {
    &s.basis * &s.basis.adjoint()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn r(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn eigenspace_of_diag() {
        let s = eigenspace_at_one(&ComplexMatrix::from_real_diag(&[1.0, 0.25]), &tol()).unwrap();
        assert_eq!(s.dim(), 1);
        assert!(s.contains(&[r(1.0), r(0.0)], 1e-15));
        assert_eq!(
            orthogonal_projection(&s),
            ComplexMatrix::from_real_diag(&[1.0, 0.0])
        );
    }

    #[test]
    fn eigenspace_of_identity_is_everything() {
        let s = eigenspace_at_one(&ComplexMatrix::identity(3), &tol()).unwrap();
        assert_eq!(s.dim(), 3);
    }

    #[test]
    fn eigenspace_empty_window() {
        let s = eigenspace_at_one(&ComplexMatrix::from_real_diag(&[0.9, 0.5]), &tol()).unwrap();
        assert!(s.is_zero());
        assert_eq!(orthogonal_projection(&s), ComplexMatrix::zeros(2, 2));
    }

    #[test]
    fn eigenspace_window_edges() {
        // 1 - 1e-12 lies inside the window by convention; 1 - 1e-6 does not.
        let s = eigenspace_at_one(
            &ComplexMatrix::from_real_diag(&[1.0 - 1e-12, 1.0 - 1e-6]),
            &tol(),
        )
        .unwrap();
        assert_eq!(s.dim(), 1);
    }

    #[test]
    fn eigenspace_preconditions() {
        let t = tol();
        assert_eq!(
            eigenspace_at_one(&ComplexMatrix::from_real_diag(&[1.1, 0.0]), &t).unwrap_err(),
            Error::NotContractivePositive
        );
        assert_eq!(
            eigenspace_at_one(&ComplexMatrix::from_real_diag(&[0.5, -0.1]), &t).unwrap_err(),
            Error::NotContractivePositive
        );
        assert!(matches!(
            eigenspace_at_one(&ComplexMatrix::from_real(&[&[0.0, 1.0], &[0.0, 0.0]]), &t),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn projection_onto_diagonal_line() {
        let h = 0.5f64.sqrt();
        let s = Subspace::from_orthonormal(2, &[vec![r(h), r(h)]], &tol()).unwrap();
        let p = orthogonal_projection(&s);
        let expected = ComplexMatrix::from_real(&[&[0.5, 0.5], &[0.5, 0.5]]);
        assert!(p.distance(&expected) < 1e-15);
        assert!((&p * &p).distance(&p) < 1e-15);
        assert_eq!(p.hermitian_residual(), 0.0);
    }

    #[test]
    fn from_orthonormal_rejects_non_orthonormal() {
        assert!(Subspace::from_orthonormal(2, &[vec![r(1.0), r(1.0)]], &tol()).is_err());
        assert!(Subspace::from_orthonormal(1, &[vec![r(1.0)], vec![r(1.0)]], &tol()).is_err());
    }

    #[test]
    fn range_and_kernel_are_complementary() {
        let a = ComplexMatrix::from_real(&[&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0]]);
        let range = Subspace::range(&a, &tol());
        let kernel = Subspace::kernel(&a, &tol());
        assert_eq!(range.dim(), 1);
        assert_eq!(kernel.dim(), 2);
        for v in kernel.basis_vectors() {
            assert!(norm(&a.mul_vec(&v)) < 1e-14);
        }
        assert!(range.contains(&[r(1.0), r(2.0)], 1e-14));
        assert!(!range.contains(&[r(1.0), r(0.0)], 1e-6));
    }

    #[test]
    fn inclusion_and_equality_are_basis_independent() {
        let t = tol();
        let a = Subspace::span(
            3,
            &[vec![r(1.0), r(0.0), r(0.0)], vec![r(0.0), r(1.0), r(0.0)]],
            &t,
        );
        let b = Subspace::span(
            3,
            &[vec![r(1.0), r(1.0), r(0.0)], vec![r(1.0), r(-1.0), r(0.0)]],
            &t,
        );
        let line = Subspace::span(3, &[vec![r(3.0), r(-2.0), r(0.0)]], &t);
        assert!(a.same_as(&b, 1e-12));
        assert!(a.includes(&line, 1e-12));
        assert!(!line.includes(&a, 1e-12));
        assert_eq!(a.complement().dim(), 1);
        assert_eq!(line.join(&a.complement(), &t).dim(), 2);
    }

    #[test]
    fn completion_fills_dependent_columns() {
        let v = orthonormal_completion(
            3,
            &[vec![r(1.0), r(0.0), r(0.0)], vec![r(2.0), r(0.0), r(0.0)]],
        );
        assert_eq!(v.len(), 2);
        assert!(inner(&v[0], &v[1]).norm() < 1e-15);
        assert!((norm(&v[1]) - 1.0).abs() < 1e-15);
    }
}
