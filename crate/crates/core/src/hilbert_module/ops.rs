use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    eigenspace_at_one, hermitian_eigensystem, orthogonal_projection, ComplexMatrix, Subspace,
    Tolerance, C64,
};
use crate::partial_isometry::OperatorClass;

use super::map::{same_module, ModuleMap};
use super::space::{vectorize, HilbertModule};
use super::submodule::Submodule;

/// The lift `C` of `c`, `C L_x = L_{cx}`.
pub fn lift(c: &ModuleMap) -> &ComplexMatrix {
    c.lift()
}

/// Elements of `module` whose lifts take values in `s ⊆ H`, i.e. the kernel
/// of `x -> (1 - P_s) L_x`.
fn elements_lifting_into(
    module: &Arc<HilbertModule>,
    s: &Subspace,
    tol: &Tolerance,
) -> Result<Submodule> {
    let basis = module.orthonormal_elements();
    if basis.is_empty() {
        return Ok(Submodule::zero(module.clone()));
    }
    let p = orthogonal_projection(s);
    let residuals: Vec<Vec<C64>> = basis.iter().map(|x| vectorize(&(x - &(&p * x)))).collect();
    let rows = module.lift_dim() * module.rep_dim();
    let kernel = Subspace::kernel(&ComplexMatrix::from_columns(rows, &residuals), tol);
    let elements: Vec<ComplexMatrix> = kernel
        .basis_vectors()
        .iter()
        .map(|beta| combine(&basis, beta))
        .collect();
    Submodule::from_elements(module.clone(), &elements, tol)
        .map_err(|e| Error::InvariantViolation(format!("lifting preimage: {e}")))
}

fn combine(elements: &[ComplexMatrix], coeffs: &[C64]) -> ComplexMatrix {
    let (r, c) = elements[0].shape();
    elements
        .iter()
        .zip(coeffs)
        .fold(ComplexMatrix::zeros(r, c), |acc, (x, a)| {
            &acc + &x.scale(*a)
        })
}

/// The largest submodule on which `c` is isometric: elements whose lifts take
/// values in the eigenspace of `C*C` at 1.
pub fn isometric_submodule(c: &ModuleMap, tol: &Tolerance) -> Result<Submodule> {
    c.require_contraction(tol)?;
    let cl = c.lift();
    let gram = (&cl.adjoint() * cl).hermitian_part();
    let s = eigenspace_at_one(&gram, tol)?;
    elements_lifting_into(c.source(), &s, tol)
}

/// Result of the module partial isometry test.
#[derive(Debug, Clone)]
pub struct ModulePartialIsometry {
    pub is_partial_isometry: bool,
    /// `‖V V* V - V‖_F` for the lift `V`.
    pub residual: f64,
    /// `π_v`, with lift `V*V`, when `v` is a partial isometry.
    pub initial_projection: Option<ModuleMap>,
}

pub fn is_partial_isometry_mod(v: &ModuleMap, tol: &Tolerance) -> Result<ModulePartialIsometry> {
    v.require_contraction(tol)?;
    let vl = v.lift();
    let vd = vl.adjoint();
    let residual = (&(vl * &vd) * vl).distance(vl);
    if residual > tol.eq {
        return Ok(ModulePartialIsometry {
            is_partial_isometry: false,
            residual,
            initial_projection: None,
        });
    }
    let eps = tol.inclusion();
    for (j, y) in v.target().generators().iter().enumerate() {
        let back = &vd * y;
        if !v
            .source()
            .contains(&back, eps * back.frobenius_norm().max(1.0))
        {
            return Err(Error::IllFormedMap(format!(
                "adjoint of the lift carries target generator {j} out of the source"
            )));
        }
    }
    let pi = ModuleMap::from_lift(v.source().clone(), v.source().clone(), &(&vd * vl), tol)?;
    let recomposed = v.compose(&pi, tol)?;
    if recomposed.distance(v) > eps {
        return Err(Error::InvariantViolation("v π_v differs from v".into()));
    }
    let pl = pi.lift();
    if (pl * pl).distance(pl) > eps || pl.hermitian_residual() > eps {
        return Err(Error::InvariantViolation("π_v is not a projection".into()));
    }
    for x in kernel_of(v, tol).basis_elements() {
        if pi.apply(&x).frobenius_norm() > eps {
            return Err(Error::InvariantViolation(
                "π_v does not vanish on ker v".into(),
            ));
        }
    }
    Ok(ModulePartialIsometry {
        is_partial_isometry: true,
        residual,
        initial_projection: Some(pi),
    })
}

/// `ker v` as a submodule of the source.
pub fn kernel_of(v: &ModuleMap, tol: &Tolerance) -> Submodule {
    let source = v.source();
    let basis = source.orthonormal_elements();
    if basis.is_empty() {
        return Submodule::zero(source.clone());
    }
    let rows = v.target().lift_dim() * source.rep_dim();
    let images: Vec<Vec<C64>> = basis.iter().map(|x| v.apply_vec(x)).collect();
    let kernel = Subspace::kernel(&ComplexMatrix::from_columns(rows, &images), tol);
    let elements: Vec<ComplexMatrix> = kernel
        .basis_vectors()
        .iter()
        .map(|beta| combine(&basis, beta))
        .collect();
    let dim = source.lift_dim() * source.rep_dim();
    let space = Subspace::span(
        dim,
        &elements.iter().map(vectorize).collect::<Vec<_>>(),
        tol,
    );
    Submodule::from_space_unchecked(source.clone(), space)
}

/// `v E` as a submodule of the target.
pub fn range_submodule(v: &ModuleMap, tol: &Tolerance) -> Result<Submodule> {
    let images: Vec<ComplexMatrix> = v
        .source()
        .orthonormal_elements()
        .iter()
        .map(|x| v.apply(x))
        .collect();
    if images.is_empty() {
        return Ok(Submodule::zero(v.target().clone()));
    }
    Submodule::from_elements(v.target().clone(), &images, tol)
}

/// Both sides of the invariance criterion for a product of partial isometries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InvarianceCriterion {
    /// `v ∘ w` is a partial isometry.
    pub product_is_pi: bool,
    /// `π_v (wD) ⊆ wD`.
    pub range_invariant: bool,
    pub product_residual: f64,
    pub invariance_residual: f64,
}

impl InvarianceCriterion {
    pub fn agree(&self) -> bool {
        self.product_is_pi == self.range_invariant
    }
}

pub fn product_invariance_criterion(
    v: &ModuleMap,
    w: &ModuleMap,
    tol: &Tolerance,
) -> Result<InvarianceCriterion> {
    if !same_module(w.target(), v.source(), tol) {
        return Err(Error::TargetSourceMismatch);
    }
    let pi_v = require_pi(v, tol)?;
    require_pi(w, tol)?;
    let product = v.compose(w, tol)?;
    let prod = is_partial_isometry_mod(&product, tol)?;
    let wd = range_submodule(w, tol)?;
    let invariance_residual = wd
        .basis_elements()
        .iter()
        .map(|y| wd.residual(&pi_v.apply(y)))
        .fold(0.0, f64::max);
    Ok(InvarianceCriterion {
        product_is_pi: prod.is_partial_isometry,
        range_invariant: invariance_residual <= tol.inclusion(),
        product_residual: prod.residual,
        invariance_residual,
    })
}

/// Initial projection of `v`, or `NotPartialIsometry`.
pub(crate) fn require_pi(v: &ModuleMap, tol: &Tolerance) -> Result<ModuleMap> {
    let r = is_partial_isometry_mod(v, tol)?;
    r.initial_projection.ok_or(Error::NotPartialIsometry {
        residual: r.residual,
    })
}

/// `s⊥` and, when `parent = s ⊕ s⊥`, the projection onto `s`.
#[derive(Debug, Clone)]
pub struct Complement {
    pub complemented: bool,
    pub orthogonal: Submodule,
    pub projection: Option<ModuleMap>,
}

pub fn complement(s: &Submodule, tol: &Tolerance) -> Result<Complement> {
    let parent = s.parent().clone();
    let n = parent.rep_dim();
    let basis = parent.orthonormal_elements();
    let s_basis = s.basis_elements();
    let orthogonal = if s_basis.is_empty() {
        Submodule::full(parent.clone())
    } else if basis.is_empty() {
        Submodule::zero(parent.clone())
    } else {
        // column j stacks vec(⟨b_i, e_j⟩) over basis elements b_i of s
        let cols: Vec<Vec<C64>> = basis
            .iter()
            .map(|e| {
                s_basis
                    .iter()
                    .flat_map(|b| vectorize(&parent.inner(b, e)))
                    .collect()
            })
            .collect();
        let kernel = Subspace::kernel(
            &ComplexMatrix::from_columns(s_basis.len() * n * n, &cols),
            tol,
        );
        let elements: Vec<ComplexMatrix> = kernel
            .basis_vectors()
            .iter()
            .map(|beta| combine(&basis, beta))
            .collect();
        Submodule::from_elements(parent.clone(), &elements, tol)
            .map_err(|e| Error::InvariantViolation(format!("orthogonal complement: {e}")))?
    };
    let joined = s.space().join(orthogonal.space(), tol);
    let complemented = s.dim() + orthogonal.dim() == parent.dim() && joined.dim() == parent.dim();
    if !complemented {
        return Ok(Complement {
            complemented,
            orthogonal,
            projection: None,
        });
    }
    // s and s⊥ are also orthogonal for the trace inner product, so the module
    // projection is the scalar orthogonal projection of the span.
    let images: Vec<ComplexMatrix> = parent
        .generators()
        .iter()
        .map(|x| {
            let p = s.space().project(&vectorize(x));
            ComplexMatrix::from_vec(x.rows(), x.cols(), p)
        })
        .collect();
    let p = ModuleMap::from_images(parent.clone(), parent.clone(), images, tol)?;
    let eps = tol.inclusion();
    let pp = p.compose(&p, tol)?;
    if pp.distance(&p) > eps {
        return Err(Error::InvariantViolation(
            "projection is not idempotent".into(),
        ));
    }
    for x in parent.generators() {
        for y in parent.generators() {
            let py = p.apply(y);
            let lhs = parent.inner(&p.apply(x), &py);
            let rhs = parent.inner(x, &py);
            if lhs.distance(&rhs) > eps {
                return Err(Error::InvariantViolation(
                    "projection is not self-adjoint for the module inner product".into(),
                ));
            }
        }
    }
    Ok(Complement {
        complemented,
        orthogonal,
        projection: Some(p),
    })
}

/// `v = c p_c` together with `P_c` and its projection `p_c`.
#[derive(Debug, Clone)]
pub struct ContainedModulePI {
    pub submodule: Submodule,
    pub p_c: ModuleMap,
    pub v: ModuleMap,
}

/// The partial isometry contained in `c`. At finite dimension `P_c` always
/// has a complement, so `NotComplemented` is not produced in practice.
pub fn contained_partial_isometry_mod(c: &ModuleMap, tol: &Tolerance) -> Result<ContainedModulePI> {
    let submodule = isometric_submodule(c, tol)?;
    let comp = complement(&submodule, tol)?;
    let p_c = comp.projection.ok_or(Error::NotComplemented)?;
    let v = c.compose(&p_c, tol)?;
    let pi_v = require_pi(&v, tol)
        .map_err(|e| Error::InvariantViolation(format!("c p_c is not a partial isometry: {e}")))?;
    if pi_v.distance(&p_c) > tol.inclusion() {
        return Err(Error::InvariantViolation("π_v differs from p_c".into()));
    }
    Ok(ContainedModulePI { submodule, p_c, v })
}

/// How far `⟨cx, cx⟩ - ⟨x, π x⟩` is from being positive: the magnitude of
/// its most negative eigenvalue, or 0.
pub fn domination_defect(
    c: &ModuleMap,
    pi: &ModuleMap,
    x: &ComplexMatrix,
    tol: &Tolerance,
) -> Result<f64> {
    let module = c.source();
    let cx = c.apply(x);
    let d = &module.inner(&cx, &cx) - &module.inner(x, &pi.apply(x));
    let eig = hermitian_eigensystem(&d.hermitian_part(), tol)?;
    Ok(eig.min_value().map_or(0.0, |m| (-m).max(0.0)))
}

/// `max ‖⟨c(1 - p) y, c p x⟩‖_F` over pairs of source generators.
pub fn cross_orthogonality_residual(c: &ModuleMap, p: &ModuleMap) -> f64 {
    let module = c.source();
    let mut worst: f64 = 0.0;
    for x in module.generators() {
        let cpx = c.apply(&p.apply(x));
        for y in module.generators() {
            let c1py = c.apply(&(y - &p.apply(y)));
            worst = worst.max(module.inner(&c1py, &cpx).frobenius_norm());
        }
    }
    worst
}

/// Operator classes of a module map, judged on lifts: isometry means
/// `V*V = P_{H_E}`, coisometry `V V* = P_{H_F}`, projection `V*V = V` on
/// one module.
pub fn classify_mod(v: &ModuleMap, tol: &Tolerance) -> OperatorClass {
    let vl = v.lift();
    let vd = vl.adjoint();
    let vdv = &vd * vl;
    let vvd = vl * &vd;
    let ps = orthogonal_projection(v.source().lifted_space());
    let pt = orthogonal_projection(v.target().lifted_space());
    let is_isometry = vdv.distance(&ps) <= tol.eq;
    let is_coisometry = vvd.distance(&pt) <= tol.eq;
    OperatorClass {
        is_contraction: v.is_contraction(tol),
        is_projection: same_module(v.source(), v.target(), tol) && vdv.distance(vl) <= tol.eq,
        is_isometry,
        is_coisometry,
        is_partial_isometry: (&vvd * vl).distance(vl) <= tol.eq,
        is_unitary: is_isometry && is_coisometry,
    }
}

/// `v = i ∘ q` with `q: E -> π_v E` the corestricted projection (a
/// coisometry) and `i: π_v E -> F` the restriction of `v` (an isometry).
#[derive(Debug, Clone)]
pub struct Factorization {
    pub middle: Arc<HilbertModule>,
    pub coisometry: ModuleMap,
    pub isometry: ModuleMap,
}

pub fn factor_partial_isometry(v: &ModuleMap, tol: &Tolerance) -> Result<Factorization> {
    let pi = require_pi(v, tol)?;
    let initial = range_submodule(&pi, tol)?;
    let middle = initial.to_module(tol)?;
    let coisometry = ModuleMap::from_lift(v.source().clone(), middle.clone(), pi.lift(), tol)?;
    let isometry = ModuleMap::from_lift(middle.clone(), v.target().clone(), v.lift(), tol)?;
    Ok(Factorization {
        middle,
        coisometry,
        isometry,
    })
}

/// An operator `a: C^n -> C^m` as a map of Hilbert spaces viewed as modules
/// over the scalars.
pub fn operator_map(a: &ComplexMatrix, tol: &Tolerance) -> Result<ModuleMap> {
    let source = Arc::new(HilbertModule::hilbert_space(a.cols(), tol)?);
    let target = if a.rows() == a.cols() {
        source.clone()
    } else {
        Arc::new(HilbertModule::hilbert_space(a.rows(), tol)?)
    };
    ModuleMap::from_lift(source, target, a, tol)
}
