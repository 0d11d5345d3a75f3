use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{spectral_norm, ComplexMatrix, Tolerance, C64};

use super::space::{vectorize, HilbertModule};

/// A right-linear map `c: E -> F`, stored both as its action on source
/// generators (columns in target generator coordinates) and as its lift
/// `C: H_E -> H_F` with `C L_x = L_{cx}`. The lift vanishes off the lifted
/// source space.
#[derive(Debug, Clone)]
pub struct ModuleMap {
    source: Arc<HilbertModule>,
    target: Arc<HilbertModule>,
    action: ComplexMatrix,
    lift: ComplexMatrix,
}

/// Same module up to a change of generators.
pub fn same_module(a: &Arc<HilbertModule>, b: &Arc<HilbertModule>, tol: &Tolerance) -> bool {
    Arc::ptr_eq(a, b) || a.same_as(b, tol)
}

impl ModuleMap {
    /// From the action matrix (`target.dim() x source.dim()`).
    pub fn new(
        source: Arc<HilbertModule>,
        target: Arc<HilbertModule>,
        action: ComplexMatrix,
        tol: &Tolerance,
    ) -> Result<Self> {
        if action.shape() != (target.dim(), source.dim()) {
            return Err(Error::ShapeMismatch(format!(
                "action is {}x{}, expected {}x{}",
                action.rows(),
                action.cols(),
                target.dim(),
                source.dim()
            )));
        }
        let images: Vec<ComplexMatrix> = (0..source.dim())
            .map(|j| target.element(&action.column(j)))
            .collect();
        ModuleMap::from_images(source, target, images, tol)
    }

    /// From the images `c(x_j)` of the source generators. Fails with
    /// `IllFormedMap` unless the images lie in the target and some operator
    /// `C` satisfies `C L_j = c(x_j)` for every `j`; that operator exists
    /// exactly when the assignment is right linear and bounded.
    pub fn from_images(
        source: Arc<HilbertModule>,
        target: Arc<HilbertModule>,
        images: Vec<ComplexMatrix>,
        tol: &Tolerance,
    ) -> Result<Self> {
        if images.len() != source.dim() {
            return Err(Error::ShapeMismatch(format!(
                "{} images for {} generators",
                images.len(),
                source.dim()
            )));
        }
        if source.rep_dim() != target.rep_dim() || source.algebra() != target.algebra() {
            return Err(Error::IllFormedMap(
                "source and target algebras differ".into(),
            ));
        }
        let eps = tol.inclusion();
        for (j, y) in images.iter().enumerate() {
            if y.shape() != (target.lift_dim(), target.rep_dim()) {
                return Err(Error::ShapeMismatch(format!(
                    "image {j} has the wrong shape"
                )));
            }
            if !target.contains(y, eps * y.frobenius_norm().max(1.0)) {
                return Err(Error::IllFormedMap(format!(
                    "image {j} is not in the target"
                )));
            }
        }
        let l = ComplexMatrix::hstack(source.lift_dim(), source.generators());
        let m = ComplexMatrix::hstack(target.lift_dim(), &images);
        let lift = if source.dim() == 0 {
            ComplexMatrix::zeros(target.lift_dim(), source.lift_dim())
        } else {
            &m * source.stacked_pinv()
        };
        let defect = (&lift * &l).distance(&m);
        if defect > eps * m.frobenius_norm().max(1.0) {
            return Err(Error::IllFormedMap(format!(
                "no operator C with C L_x = L_cx (defect {defect:.3e})"
            )));
        }
        let action = ComplexMatrix::from_columns(
            target.dim(),
            &images
                .iter()
                .map(|y| target.coordinates(y))
                .collect::<Vec<_>>(),
        );
        Ok(ModuleMap {
            source,
            target,
            action,
            lift,
        })
    }

    /// The map `x -> C x` for an operator `C: C^{m_E} -> C^{m_F}`, which must
    /// carry the source into the target.
    pub fn from_lift(
        source: Arc<HilbertModule>,
        target: Arc<HilbertModule>,
        lift: &ComplexMatrix,
        tol: &Tolerance,
    ) -> Result<Self> {
        if lift.shape() != (target.lift_dim(), source.lift_dim()) {
            return Err(Error::ShapeMismatch(format!(
                "lift is {}x{}, expected {}x{}",
                lift.rows(),
                lift.cols(),
                target.lift_dim(),
                source.lift_dim()
            )));
        }
        let images = source.generators().iter().map(|x| lift * x).collect();
        ModuleMap::from_images(source, target, images, tol)
    }

    pub fn identity(module: Arc<HilbertModule>, tol: &Tolerance) -> Result<Self> {
        let id = ComplexMatrix::identity(module.dim());
        ModuleMap::new(module.clone(), module, id, tol)
    }

    pub fn zero(
        source: Arc<HilbertModule>,
        target: Arc<HilbertModule>,
        tol: &Tolerance,
    ) -> Result<Self> {
        let z = ComplexMatrix::zeros(target.dim(), source.dim());
        ModuleMap::new(source, target, z, tol)
    }

    pub fn source(&self) -> &Arc<HilbertModule> {
        &self.source
    }

    pub fn target(&self) -> &Arc<HilbertModule> {
        &self.target
    }

    /// Columns are the target coordinates of the images of source generators.
    pub fn action(&self) -> &ComplexMatrix {
        &self.action
    }

    /// The operator `C` on lifted spaces.
    pub fn lift(&self) -> &ComplexMatrix {
        &self.lift
    }

    pub fn apply(&self, x: &ComplexMatrix) -> ComplexMatrix {
        &self.lift * x
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &ModuleMap, tol: &Tolerance) -> Result<ModuleMap> {
        if !same_module(other.target(), self.source(), tol) {
            return Err(Error::TargetSourceMismatch);
        }
        let images = other
            .source
            .generators()
            .iter()
            .map(|x| self.apply(&other.apply(x)))
            .collect();
        ModuleMap::from_images(other.source.clone(), self.target.clone(), images, tol)
    }

    /// `‖C‖`, which equals the norm of the map.
    pub fn norm(&self) -> f64 {
        spectral_norm(&self.lift)
    }

    pub fn is_contraction(&self, tol: &Tolerance) -> bool {
        self.norm() <= 1.0 + tol.eq
    }

    pub(crate) fn require_contraction(&self, tol: &Tolerance) -> Result<()> {
        let norm = self.norm();
        if norm > 1.0 + tol.eq {
            return Err(Error::NotContraction { norm });
        }
        Ok(())
    }

    /// Largest deviation from `c(x b) = c(x) b` over source generators and
    /// matrix units `b`, computed through the action matrix rather than the
    /// lift.
    pub fn right_linearity_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        let images: Vec<ComplexMatrix> = (0..self.source.dim())
            .map(|j| self.target.element(&self.action.column(j)))
            .collect();
        for (x, cx) in self.source.generators().iter().zip(&images) {
            for b in self.source.algebra().basis() {
                let xb = x * &b;
                let coeffs = self.source.coordinates(&xb);
                let mut c_xb = ComplexMatrix::zeros(cx.rows(), cx.cols());
                for (k, img) in images.iter().enumerate() {
                    c_xb = &c_xb + &img.scale(coeffs[k]);
                }
                worst = worst.max(c_xb.distance(&(cx * &b)));
            }
        }
        worst
    }

    /// Maximum distance between the lifts of two maps with the same source
    /// and target.
    pub fn distance(&self, other: &ModuleMap) -> f64 {
        self.lift.distance(&other.lift)
    }

    /// Scalar multiple `s c`.
    pub fn scale(&self, s: C64, tol: &Tolerance) -> Result<ModuleMap> {
        ModuleMap::new(
            self.source.clone(),
            self.target.clone(),
            self.action.scale(s),
            tol,
        )
    }

    /// Vectorized image of `x`, for subspace computations.
    pub(crate) fn apply_vec(&self, x: &ComplexMatrix) -> Vec<C64> {
        vectorize(&self.apply(x))
    }
}
