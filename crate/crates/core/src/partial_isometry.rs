//! Partial isometries between finite-dimensional Hilbert spaces: classification,
//! the four-way product criterion, the maximal isometric subspace of a
//! contraction, and the associative composition `v·w = vw p_{v,w}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    eigenspace_at_one, orthogonal_projection, psd_order_leq, spectral_norm, svd, ComplexMatrix,
    Subspace, Tolerance,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorClass {
    pub is_contraction: bool,
    pub is_projection: bool,
    pub is_isometry: bool,
    pub is_coisometry: bool,
    pub is_partial_isometry: bool,
    pub is_unitary: bool,
}

impl OperatorClass {
    /// Most specific name: unitary, isometry, coisometry, projection,
    /// partial isometry, contraction, or operator.
    pub fn label(&self) -> &'static str {
        if self.is_unitary {
            "unitary"
        } else if self.is_isometry {
            "isometry"
        } else if self.is_coisometry {
            "coisometry"
        } else if self.is_projection {
            "projection"
        } else if self.is_partial_isometry {
            "partial isometry"
        } else if self.is_contraction {
            "contraction"
        } else {
            "operator"
        }
    }

    /// One-line summary such as `"contraction; not a partial isometry"`.
    pub fn summary(&self) -> String {
        if self.is_partial_isometry {
            self.label().to_string()
        } else {
            format!("{}; not a partial isometry", self.label())
        }
    }
}

pub fn classify(a: &ComplexMatrix, tol: &Tolerance) -> OperatorClass {
    let (m, n) = a.shape();
    let ad = a.adjoint();
    let ada = &ad * a;
    let aad = a * &ad;
    let is_projection = a.is_square() && ada.distance(a) <= tol.eq;
    let is_partial_isometry = (&aad * a).distance(a) <= tol.eq;
    let is_isometry = ada.distance(&ComplexMatrix::identity(n)) <= tol.eq;
    let is_coisometry = aad.distance(&ComplexMatrix::identity(m)) <= tol.eq;
    let is_contraction = spectral_norm(a) <= 1.0 + tol.eq;
    OperatorClass {
        is_contraction,
        is_projection,
        is_isometry,
        is_coisometry,
        is_partial_isometry,
        is_unitary: is_isometry && is_coisometry,
    }
}

/// `‖a a* a - a‖_F`.
pub fn partial_isometry_residual(a: &ComplexMatrix) -> f64 {
    (&(a * &a.adjoint()) * a).distance(a)
}

fn require_partial_isometry(a: &ComplexMatrix, tol: &Tolerance) -> Result<()> {
    let residual = partial_isometry_residual(a);
    if residual > tol.eq {
        return Err(Error::NotPartialIsometry { residual });
    }
    Ok(())
}

fn require_contraction(a: &ComplexMatrix, tol: &Tolerance) -> Result<()> {
    let norm = spectral_norm(a);
    if norm > 1.0 + tol.eq {
        return Err(Error::NotContraction { norm });
    }
    Ok(())
}

fn require_composable(v: &ComplexMatrix, w: &ComplexMatrix) -> Result<()> {
    if v.cols() != w.rows() {
        return Err(Error::ShapeMismatch(format!(
            "v is {}x{} but w is {}x{}",
            v.rows(),
            v.cols(),
            w.rows(),
            w.cols()
        )));
    }
    Ok(())
}

/// The four conditions for `vw` to be a partial isometry, each evaluated on
/// its own. For partial isometries they agree.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProductCriterion {
    /// `vw (vw)* vw = vw`.
    pub product_is_pi: bool,
    /// `e = v*v ww*` satisfies `e² = e`.
    pub idempotent: bool,
    /// `e` is idempotent and self-adjoint.
    pub projection: bool,
    /// `v*v` and `ww*` commute.
    pub projections_commute: bool,
    pub residuals: CriterionResiduals,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriterionResiduals {
    pub product_is_pi: f64,
    pub idempotent: f64,
    pub self_adjoint: f64,
    pub commutator: f64,
}

impl ProductCriterion {
    pub fn all_agree(&self) -> bool {
        let b = self.product_is_pi;
        self.idempotent == b && self.projection == b && self.projections_commute == b
    }
}

pub fn product_criterion(
    v: &ComplexMatrix,
    w: &ComplexMatrix,
    tol: &Tolerance,
) -> Result<ProductCriterion> {
    require_composable(v, w)?;
    require_partial_isometry(v, tol)?;
    require_partial_isometry(w, tol)?;

    let vw = v * w;
    let r1 = partial_isometry_residual(&vw);
    let initial = &v.adjoint() * v;
    let fin = w * &w.adjoint();
    let e = &initial * &fin;
    let r2 = (&e * &e).distance(&e);
    let r3 = e.hermitian_residual();
    let r4 = e.distance(&(&fin * &initial));
    Ok(ProductCriterion {
        product_is_pi: r1 <= tol.eq,
        idempotent: r2 <= tol.eq,
        projection: r2 <= tol.eq && r3 <= tol.eq,
        projections_commute: r4 <= tol.eq,
        residuals: CriterionResiduals {
            product_is_pi: r1,
            idempotent: r2,
            self_adjoint: r3,
            commutator: r4,
        },
    })
}

/// `{x : ‖cx‖ = ‖x‖}`, computed as the eigenspace of `c*c` at eigenvalue 1.
pub fn isometric_subspace(c: &ComplexMatrix, tol: &Tolerance) -> Result<Subspace> {
    require_contraction(c, tol)?;
    // c*c is Hermitian up to rounding; symmetrize before the eigen-solve.
    let gram = (&c.adjoint() * c).hermitian_part();
    eigenspace_at_one(&gram, tol)
}

/// The projection `p_c` onto the isometric subspace and the partial isometry
/// `c p_c` it cuts out of `c`.
#[derive(Debug, Clone)]
pub struct ContainedPI {
    pub p_c: ComplexMatrix,
    pub v: ComplexMatrix,
    pub subspace: Subspace,
}

pub fn contained_partial_isometry(c: &ComplexMatrix, tol: &Tolerance) -> Result<ContainedPI> {
    let subspace = isometric_subspace(c, tol)?;
    let p_c = orthogonal_projection(&subspace);
    let v = c * &p_c;
    Ok(ContainedPI { p_c, v, subspace })
}

/// Result of `v·w` together with the cut-down projection `p_{v,w}`.
#[derive(Debug, Clone)]
pub struct DotComposition {
    pub product: ComplexMatrix,
    pub p: ComplexMatrix,
    pub result: ComplexMatrix,
}

impl DotComposition {
    pub fn projection_is_zero(&self, tol: &Tolerance) -> bool {
        self.p.frobenius_norm() <= tol.eq
    }
}

/// `v·w := vw p_{v,w}`, the partial isometry contained in `vw`.
pub fn dot_compose(v: &ComplexMatrix, w: &ComplexMatrix, tol: &Tolerance) -> Result<ComplexMatrix> {
    Ok(dot_compose_detailed(v, w, tol)?.result)
}

pub fn dot_compose_detailed(
    v: &ComplexMatrix,
    w: &ComplexMatrix,
    tol: &Tolerance,
) -> Result<DotComposition> {
    require_composable(v, w)?;
    require_partial_isometry(v, tol)?;
    require_partial_isometry(w, tol)?;
    let product = v * w;
    let contained = contained_partial_isometry(&product, tol)?;
    Ok(DotComposition {
        product,
        p: contained.p_c,
        result: contained.v,
    })
}

/// Residuals and order relations accompanying a dot composition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DotCompositionFacts {
    /// `‖r r* r - r‖` for `r = v·w`.
    pub result_pi_residual: f64,
    /// `p_{v,w} ≤ w*w`.
    pub p_below_initial_of_w: bool,
    /// `‖s s* s - s‖` for `s = w p_{v,w}`.
    pub restricted_w_pi_residual: f64,
    /// `s s* ≤ v*v`.
    pub final_of_restricted_w_below_initial_of_v: bool,
}

pub fn dot_composition_facts(
    v: &ComplexMatrix,
    w: &ComplexMatrix,
    dc: &DotComposition,
    tol: &Tolerance,
) -> Result<DotCompositionFacts> {
    let s = w * &dc.p;
    let ss = (&s * &s.adjoint()).hermitian_part();
    Ok(DotCompositionFacts {
        result_pi_residual: partial_isometry_residual(&dc.result),
        p_below_initial_of_w: psd_order_leq(&dc.p, &(&w.adjoint() * w).hermitian_part(), tol)?,
        restricted_w_pi_residual: partial_isometry_residual(&s),
        final_of_restricted_w_below_initial_of_v: psd_order_leq(
            &ss,
            &(&v.adjoint() * v).hermitian_part(),
            tol,
        )?,
    })
}

/// Nearest partial isometry in Frobenius norm: singular values above 1/2 are
/// set to 1, the rest to 0. Used for optional re-projection of noisy input.
pub fn nearest_partial_isometry(a: &ComplexMatrix) -> ComplexMatrix {
    let s = svd(a);
    let mut out = ComplexMatrix::zeros(a.rows(), a.cols());
    for (k, &sv) in s.sigma.iter().enumerate() {
        if sv <= 0.5 {
            continue;
        }
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                out[(i, j)] += s.u[(i, k)] * s.v[(j, k)].conj();
            }
        }
    }
    out
}
