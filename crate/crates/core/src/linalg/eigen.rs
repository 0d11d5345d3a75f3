//! Hermitian eigendecomposition by cyclic complex Jacobi rotations, and the
//! spectral quantities built on it (operator norm, thin SVD, pseudoinverse).

use super::matrix::{ComplexMatrix, C64, ONE, ZERO};
use super::tolerance::Tolerance;
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 64;

/// Eigenvalues in descending order with matching orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.vectors.column(k)
    }

    /// `V diag(λ) V*`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let lam: Vec<C64> = self.values.iter().map(|&l| C64::new(l, 0.0)).collect();
        let vd = &self.vectors * &ComplexMatrix::from_diag(&lam);
        &vd * &self.vectors.adjoint()
    }

    pub fn min_value(&self) -> Option<f64> {
        self.values.last().copied()
    }

    pub fn max_value(&self) -> Option<f64> {
        self.values.first().copied()
    }
}

/// Eigensystem of a Hermitian matrix; rejects input whose anti-Hermitian part
/// exceeds `tol.eq` in Frobenius norm.
pub fn hermitian_eigensystem(a: &ComplexMatrix, tol: &Tolerance) -> Result<HermitianEigen> {
    if !a.is_square() {
        return Err(Error::ShapeMismatch(format!(
            "eigensystem of a {}x{} matrix",
            a.rows(),
            a.cols()
        )));
    }
    let residual = a.hermitian_residual();
    if residual > tol.eq {
        return Err(Error::NotHermitian { residual });
    }
    Ok(jacobi(&a.hermitian_part()))
}

/// Cyclic Jacobi on the Hermitian part of `a`. Each rotation is a phase
/// that makes the pivot real followed by a real Givens rotation.
pub(crate) fn jacobi(a: &ComplexMatrix) -> HermitianEigen {
    let n = a.rows();
    let mut m = a.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let scale = m.frobenius_norm();

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|p| (p + 1..n).map(move |q| (p, q)))
            .map(|(p, q)| m[(p, q)].norm_sqr())
            .sum();
        if off.sqrt() <= f64::EPSILON * 0.25 * scale || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(j, j)].re.total_cmp(&m[(i, i)].re));
    let values = order.iter().map(|&i| m[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    HermitianEigen { values, vectors }
}

fn rotate(m: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = m[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    // Negligible against both diagonal entries: drop it.
    if r < f64::EPSILON * 1e-3 * (app.abs().min(aqq.abs())) {
        m[(p, q)] = ZERO;
        m[(q, p)] = ZERO;
        return;
    }
    let phase = apq / r;
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta >= 0.0 {
        1.0 / (theta + (1.0 + theta * theta).sqrt())
    } else {
        -1.0 / (-theta + (1.0 + theta * theta).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // U = diag(1, conj(phase)) * [[c, s], [-s, c]] on coordinates (p, q).
    let u_pp = C64::new(c, 0.0);
    let u_pq = C64::new(s, 0.0);
    let u_qp = -phase.conj() * s;
    let u_qq = phase.conj() * c;

    let n = m.rows();
    for k in 0..n {
        let akp = m[(k, p)];
        let akq = m[(k, q)];
        m[(k, p)] = akp * u_pp + akq * u_qp;
        m[(k, q)] = akp * u_pq + akq * u_qq;
    }
    for k in 0..n {
        let apk = m[(p, k)];
        let aqk = m[(q, k)];
        m[(p, k)] = u_pp.conj() * apk + u_qp.conj() * aqk;
        m[(q, k)] = u_pq.conj() * apk + u_qq.conj() * aqk;
    }
    m[(p, q)] = ZERO;
    m[(q, p)] = ZERO;
    m[(p, p)] = C64::new(m[(p, p)].re, 0.0);
    m[(q, q)] = C64::new(m[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * u_pp + vkq * u_qp;
        v[(k, q)] = vkp * u_pq + vkq * u_qq;
    }
}

/// Operator (spectral) norm, via the smaller of `a*a` and `aa*`.
pub fn spectral_norm(a: &ComplexMatrix) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    let gram = if a.cols() <= a.rows() {
        &a.adjoint() * a
    } else {
        a * &a.adjoint()
    };
    jacobi(&gram).max_value().unwrap_or(0.0).max(0.0).sqrt()
}

/// Singular value decomposition `a = U diag(σ) V*`, σ descending, with
/// `min(rows, cols)` triplets. Computed by one-sided (Hestenes) Jacobi, which
/// keeps right singular vectors accurate for small singular values.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub sigma: Vec<f64>,
    pub v: ComplexMatrix,
}

pub fn svd(a: &ComplexMatrix) -> Svd {
    if a.cols() > a.rows() {
        // Jacobi cost grows with the square of the column count.
        let t = svd(&a.adjoint());
        return Svd {
            u: t.v,
            sigma: t.sigma,
            v: t.u,
        };
    }
    let full = one_sided_jacobi(a);
    let k = a.rows().min(a.cols());
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(k);
    for j in 0..k {
        let mut u = full.work.column(j);
        if full.sigma[j] > 0.0 {
            u.iter_mut().for_each(|z| *z /= full.sigma[j]);
        }
        cols.push(u);
    }
    // Columns for zero σ are completed by re-orthonormalization.
    let u = super::subspace::orthonormal_completion(a.rows(), &cols);
    Svd {
        u: ComplexMatrix::from_columns(a.rows(), &u),
        sigma: full.sigma[..k].to_vec(),
        v: full.v.column_block(0, k),
    }
}

/// All `cols` right singular vectors (including the kernel), σ descending.
pub(crate) struct FullRightSvd {
    /// `a V`, columns mutually orthogonal with norms `sigma`.
    pub work: ComplexMatrix,
    pub sigma: Vec<f64>,
    pub v: ComplexMatrix,
}

pub(crate) fn one_sided_jacobi(a: &ComplexMatrix) -> FullRightSvd {
    let (m, n) = a.shape();
    // column-major working copies
    let mut w: Vec<Vec<C64>> = a.columns();
    let mut v: Vec<Vec<C64>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { ONE } else { ZERO }).collect())
        .collect();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (alpha, beta, gamma) = {
                    let (x, y) = (&w[p], &w[q]);
                    let mut alpha = 0.0;
                    let mut beta = 0.0;
                    let mut gamma = ZERO;
                    for i in 0..m {
                        alpha += x[i].norm_sqr();
                        beta += y[i].norm_sqr();
                        gamma += x[i].conj() * y[i];
                    }
                    (alpha, beta, gamma)
                };
                let g = gamma.norm();
                if g == 0.0 || g <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let theta = (beta - alpha) / (2.0 * g);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let u_pp = C64::new(c, 0.0);
                let u_pq = C64::new(s, 0.0);
                let u_qp = -phase.conj() * s;
                let u_qq = phase.conj() * c;
                rotate_columns(&mut w, p, q, [u_pp, u_pq, u_qp, u_qq]);
                rotate_columns(&mut v, p, q, [u_pp, u_pq, u_qp, u_qq]);
            }
        }
        if !rotated {
            break;
        }
    }
    let norms: Vec<f64> = w.iter().map(|c| super::matrix::norm(c)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    FullRightSvd {
        work: ComplexMatrix::from_fn(m, n, |i, k| w[order[k]][i]),
        sigma: order.iter().map(|&j| norms[j]).collect(),
        v: ComplexMatrix::from_fn(n, n, |i, k| v[order[k]][i]),
    }
}

/// Applies `[x, y] <- [x, y] [[u_pp, u_pq], [u_qp, u_qq]]` to columns `p < q`.
fn rotate_columns(cols: &mut [Vec<C64>], p: usize, q: usize, u: [C64; 4]) {
    let (left, right) = cols.split_at_mut(q);
    let (x, y) = (&mut left[p], &mut right[0]);
    for (a, b) in x.iter_mut().zip(y.iter_mut()) {
        let (xa, yb) = (*a, *b);
        *a = xa * u[0] + yb * u[2];
        *b = xa * u[1] + yb * u[3];
    }
}

/// Moore-Penrose pseudoinverse; singular values at or below `cutoff` are
/// treated as zero.
pub fn pinv(a: &ComplexMatrix, cutoff: f64) -> ComplexMatrix {
    let (m, n) = a.shape();
    if a.is_empty() {
        return ComplexMatrix::zeros(n, m);
    }
    let s = svd(a);
    let mut out = ComplexMatrix::zeros(n, m);
    for (k, &sig) in s.sigma.iter().enumerate() {
        if sig <= cutoff || sig == 0.0 {
            continue;
        }
        for i in 0..n {
            for j in 0..m {
                out[(i, j)] += s.v[(i, k)] * s.u[(j, k)].conj() / sig;
            }
        }
    }
    out
}

/// Loewner order `a ≤ b`: the smallest eigenvalue of `b - a` is at least `-tol.eq`.
pub fn psd_order_leq(a: &ComplexMatrix, b: &ComplexMatrix, tol: &Tolerance) -> Result<bool> {
    if a.shape() != b.shape() || !a.is_square() {
        return Err(Error::ShapeMismatch(format!(
            "order comparison of {}x{} and {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    for m in [a, b] {
        let residual = m.hermitian_residual();
        if residual > tol.eq {
            return Err(Error::NotHermitian { residual });
        }
    }
    Ok(jacobi(&(b - a)).min_value().is_none_or(|l| l >= -tol.eq))
}
