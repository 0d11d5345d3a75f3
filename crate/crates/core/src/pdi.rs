//! Partially defined isometries `(v, D_v)` between Hilbert modules and their
//! composition `(v ∘ w, {x ∈ D_w : w x ∈ D_v})`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hilbert_module::{
    is_partial_isometry_mod, isometric_submodule, operator_map, range_submodule, same_module,
    vectorize, HilbertModule, ModuleMap, Submodule,
};
use crate::linalg::{orthogonal_projection, ComplexMatrix, Subspace, Tolerance, C64};
use crate::pdf_sets::{to_partial_isometry, PartialFn};

/// A module map together with a submodule of its source on which it
/// preserves inner products.
#[derive(Debug, Clone)]
pub struct PartiallyDefinedIsometry {
    map: ModuleMap,
    domain: Submodule,
}

impl PartiallyDefinedIsometry {
    pub fn new(map: ModuleMap, domain: Submodule, tol: &Tolerance) -> Result<Self> {
        if !same_module(domain.parent(), map.source(), tol) {
            return Err(Error::InvalidPdi(
                "domain is not a submodule of the source".into(),
            ));
        }
        let eps = tol.inclusion();
        let closure = domain.closure_residual();
        if closure > eps {
            return Err(Error::InvalidPdi(format!(
                "domain is not closed under right multiplication ({closure:.3e})"
            )));
        }
        let pdi = PartiallyDefinedIsometry { map, domain };
        let residual = pdi.isometry_residual();
        if residual > eps {
            return Err(Error::InvalidPdi(format!(
                "map is not isometric on the domain ({residual:.3e})"
            )));
        }
        Ok(pdi)
    }

    /// The identity with full domain.
    pub fn identity(module: Arc<HilbertModule>, tol: &Tolerance) -> Result<Self> {
        let map = ModuleMap::identity(module.clone(), tol)?;
        PartiallyDefinedIsometry::new(map, Submodule::full(module), tol)
    }

    pub fn map(&self) -> &ModuleMap {
        &self.map
    }

    pub fn domain(&self) -> &Submodule {
        &self.domain
    }

    /// `max ‖⟨vx, vy⟩ - ⟨x, y⟩‖_F` over an orthonormal basis of the domain.
    pub fn isometry_residual(&self) -> f64 {
        let basis = self.domain.basis_elements();
        let images: Vec<ComplexMatrix> = basis.iter().map(|x| self.map.apply(x)).collect();
        let mut worst: f64 = 0.0;
        for (x, vx) in basis.iter().zip(&images) {
            for (y, vy) in basis.iter().zip(&images) {
                let d = (&vx.adjoint() * vy).distance(&(&x.adjoint() * y));
                worst = worst.max(d);
            }
        }
        worst
    }

    /// `max ‖v x - v' x‖_F` over an orthonormal basis of this domain.
    pub fn restriction_distance(&self, other: &PartiallyDefinedIsometry) -> f64 {
        self.domain
            .basis_elements()
            .iter()
            .map(|x| self.map.apply(x).distance(&other.map.apply(x)))
            .fold(0.0, f64::max)
    }

    /// Largest distance of one domain's basis from the other domain, both ways.
    pub fn domain_residual(&self, other: &PartiallyDefinedIsometry) -> f64 {
        let a = self.domain.space();
        let b = other.domain.space();
        a.inclusion_residual(b).max(b.inclusion_residual(a))
    }

    /// Equal domains and equal restrictions to them.
    pub fn same_as(&self, other: &PartiallyDefinedIsometry, tol: &Tolerance) -> bool {
        self.domain.dim() == other.domain.dim()
            && self.domain_residual(other) <= tol.inclusion()
            && self.restriction_distance(other) <= tol.inclusion()
    }
}

/// `(v, D_v) ∘ (w, D_w)`. The domain is the kernel of
/// `x -> (1 - P) L_{wx}` on `D_w`, with `P` the projection onto the lifted
/// space of `D_v`.
pub fn compose_pdi(
    v: &PartiallyDefinedIsometry,
    w: &PartiallyDefinedIsometry,
    tol: &Tolerance,
) -> Result<PartiallyDefinedIsometry> {
    if !same_module(w.map.target(), v.map.source(), tol) {
        return Err(Error::TargetSourceMismatch);
    }
    let map = v.map.compose(&w.map, tol)?;
    let source = w.map.source().clone();
    let basis = w.domain.basis_elements();
    let domain = if basis.is_empty() {
        Submodule::zero(source)
    } else {
        let p = orthogonal_projection(&v.domain.lifted_space(tol));
        let cols: Vec<Vec<C64>> = basis
            .iter()
            .map(|x| {
                let wx = w.map.apply(x);
                vectorize(&(&wx - &(&p * &wx)))
            })
            .collect();
        let rows = cols[0].len();
        let kernel = Subspace::kernel(&ComplexMatrix::from_columns(rows, &cols), tol);
        let elements: Vec<ComplexMatrix> = kernel
            .basis_vectors()
            .iter()
            .map(|beta| {
                basis.iter().zip(beta).fold(
                    ComplexMatrix::zeros(basis[0].rows(), basis[0].cols()),
                    |acc, (x, c)| &acc + &x.scale(*c),
                )
            })
            .collect();
        let eps = tol.inclusion();
        for x in &elements {
            if !v.domain.contains(&w.map.apply(x), eps) {
                return Err(Error::InvariantViolation(
                    "preimage element is not carried into D_v".into(),
                ));
            }
        }
        if elements.is_empty() {
            Submodule::zero(source)
        } else {
            Submodule::from_elements(source, &elements, tol)
                .map_err(|e| Error::InvariantViolation(format!("composed domain: {e}")))?
        }
    };
    PartiallyDefinedIsometry::new(map, domain, tol)
}

/// `(c, P_c)`; exists for every contraction.
pub fn contained_pdi(c: &ModuleMap, tol: &Tolerance) -> Result<PartiallyDefinedIsometry> {
    let domain = isometric_submodule(c, tol)?;
    PartiallyDefinedIsometry::new(c.clone(), domain, tol)
}

/// `(v, π_v E)` for a partial isometry `v`.
pub fn initial_pdi(v: &ModuleMap, tol: &Tolerance) -> Result<PartiallyDefinedIsometry> {
    let r = is_partial_isometry_mod(v, tol)?;
    let pi = r.initial_projection.ok_or(Error::NotPartialIsometry {
        residual: r.residual,
    })?;
    let domain = range_submodule(&pi, tol)?;
    PartiallyDefinedIsometry::new(v.clone(), domain, tol)
}

/// Both sides of `(vw, P_{vw}) = (v, π_v E) ∘ (w, π_w D)`.
#[derive(Debug, Clone)]
pub struct PropositionCheck {
    pub holds: bool,
    pub contained: PartiallyDefinedIsometry,
    pub composed: PartiallyDefinedIsometry,
    pub domain_residual: f64,
    pub map_residual: f64,
}

pub fn final_proposition_check(
    v: &ModuleMap,
    w: &ModuleMap,
    tol: &Tolerance,
) -> Result<PropositionCheck> {
    if !same_module(w.target(), v.source(), tol) {
        return Err(Error::TargetSourceMismatch);
    }
    let lv = initial_pdi(v, tol)?;
    let lw = initial_pdi(w, tol)?;
    let contained = contained_pdi(&v.compose(w, tol)?, tol)?;
    let composed = compose_pdi(&lv, &lw, tol)?;
    let domain_residual = contained.domain_residual(&composed);
    let map_residual = contained.restriction_distance(&composed);
    let holds = contained.domain().dim() == composed.domain().dim()
        && domain_residual <= tol.inclusion()
        && map_residual <= tol.eq.max(tol.inclusion());
    Ok(PropositionCheck {
        holds,
        contained,
        composed,
        domain_residual,
        map_residual,
    })
}

/// `(v_f, span{e_a : a ∈ dom f})` for an injective partial function.
pub fn pdi_from_partial_fn(f: &PartialFn, tol: &Tolerance) -> Result<PartiallyDefinedIsometry> {
    if !f.is_injective() {
        return Err(Error::InvalidPdi(
            "partial function is not injective".into(),
        ));
    }
    let map = operator_map(&to_partial_isometry(f), tol)?;
    let domain = Submodule::generated_by_indices(map.source().clone(), &f.domain(), tol)?;
    PartiallyDefinedIsometry::new(map, domain, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pdf_sets::{compose_pdf, FiniteSet};

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn on_c2(a: &ComplexMatrix) -> ModuleMap {
        operator_map(a, &tol()).unwrap()
    }

    #[test]
    fn swap_then_restricted_identity() {
        let id = on_c2(&ComplexMatrix::identity(2));
        let d_v = Submodule::generated_by_indices(id.source().clone(), &[0], &tol()).unwrap();
        let v = PartiallyDefinedIsometry::new(id.clone(), d_v, &tol()).unwrap();
        let swap = ModuleMap::from_lift(
            id.source().clone(),
            id.source().clone(),
            &ComplexMatrix::from_real(&[&[0.0, 1.0], &[1.0, 0.0]]),
            &tol(),
        )
        .unwrap();
        let w = PartiallyDefinedIsometry::new(
            swap.clone(),
            Submodule::full(id.source().clone()),
            &tol(),
        )
        .unwrap();
        let vw = compose_pdi(&v, &w, &tol()).unwrap();
        let e2 = &id.source().generators()[1];
        assert_eq!(vw.domain().dim(), 1);
        assert!(vw.domain().contains(e2, 1e-12));
        let image = vw.map().apply(e2);
        assert!(image.distance(&id.source().generators()[0]) < 1e-12);
    }

    #[test]
    fn full_domain_on_the_left_keeps_right_domain() {
        let id = on_c2(&ComplexMatrix::identity(2));
        let v = PartiallyDefinedIsometry::identity(id.source().clone(), &tol()).unwrap();
        let d_w = Submodule::generated_by_indices(id.source().clone(), &[1], &tol()).unwrap();
        let w = PartiallyDefinedIsometry::new(id.clone(), d_w, &tol()).unwrap();
        let vw = compose_pdi(&v, &w, &tol()).unwrap();
        assert!(vw.domain().same_as(w.domain(), 1e-12));
        let empty =
            PartiallyDefinedIsometry::new(id.clone(), Submodule::zero(id.source().clone()), &tol())
                .unwrap();
        assert!(compose_pdi(&v, &empty, &tol()).unwrap().domain().is_zero());
    }

    #[test]
    fn rejects_non_isometric_domain() {
        let c = on_c2(&ComplexMatrix::from_real_diag(&[1.0, 0.5]));
        let err =
            PartiallyDefinedIsometry::new(c.clone(), Submodule::full(c.source().clone()), &tol())
                .unwrap_err();
        assert!(matches!(err, Error::InvalidPdi(_)));
    }

    #[test]
    fn contained_pdi_examples() {
        let e = Arc::new(HilbertModule::matrix_algebra(2, &tol()).unwrap());
        let c = ModuleMap::from_lift(
            e.clone(),
            e.clone(),
            &ComplexMatrix::from_real_diag(&[1.0, 0.5]),
            &tol(),
        )
        .unwrap();
        let pdi = contained_pdi(&c, &tol()).unwrap();
        let g = e.generators();
        let second_row_zero =
            Submodule::from_elements(e.clone(), &[g[0].clone(), g[1].clone()], &tol()).unwrap();
        assert!(pdi.domain().same_as(&second_row_zero, 1e-12));

        let id = ModuleMap::identity(e.clone(), &tol()).unwrap();
        assert_eq!(contained_pdi(&id, &tol()).unwrap().domain().dim(), 4);
        let zero = ModuleMap::zero(e.clone(), e, &tol()).unwrap();
        assert!(contained_pdi(&zero, &tol()).unwrap().domain().is_zero());
    }

    #[test]
    fn proposition_on_the_worked_pair() {
        let h = 0.5;
        let v = on_c2(&ComplexMatrix::from_real_diag(&[1.0, 0.0]));
        let w = ModuleMap::from_lift(
            v.source().clone(),
            v.source().clone(),
            &ComplexMatrix::from_real(&[&[h, h], &[h, h]]),
            &tol(),
        )
        .unwrap();
        let r = final_proposition_check(&v, &w, &tol()).unwrap();
        assert!(r.holds);
        assert!(r.contained.domain().is_zero());
        assert!(r.composed.domain().is_zero());

        let u = on_c2(&ComplexMatrix::from_real(&[&[0.0, 1.0], &[1.0, 0.0]]));
        let r = final_proposition_check(&u, &u, &tol()).unwrap();
        assert!(r.holds);
        assert_eq!(r.contained.domain().dim(), 2);
    }

    #[test]
    fn functor_bridge_small_case() {
        let a = FiniteSet::numbered("a", 3);
        let b = FiniteSet::numbered("b", 3);
        let c = FiniteSet::numbered("c", 2);
        let g = PartialFn::from_indices(a, b.clone(), vec![Some(2), None, Some(0)]).unwrap();
        let f = PartialFn::from_indices(b, c, vec![Some(1), Some(0), None]).unwrap();
        let fg = compose_pdf(&f, &g).unwrap();
        let composed = compose_pdi(
            &pdi_from_partial_fn(&f, &tol()).unwrap(),
            &pdi_from_partial_fn(&g, &tol()).unwrap(),
            &tol(),
        )
        .unwrap();
        let expected = pdi_from_partial_fn(&fg, &tol()).unwrap();
        assert!(composed.domain().same_as(expected.domain(), 1e-12));
        assert_eq!(composed.domain().dim(), 1);
    }
}
