//! Random algebras, modules, elements and module maps.

use std::sync::Arc;

use rand::Rng;

use crate::error::Result;
use crate::linalg::{ComplexMatrix, Tolerance};
use crate::random::{
    commuting_pair, gaussian_matrix, gaussian_vector, random_contraction, random_partial_isometry,
    random_partial_isometry_of_rank, random_unitary,
};

use super::algebra::CStarAlgebra;
use super::map::ModuleMap;
use super::space::HilbertModule;

pub fn random_algebra<R: Rng + ?Sized>(
    rng: &mut R,
    max_blocks: usize,
    max_block_size: usize,
) -> CStarAlgebra {
    let k = rng.random_range(1..=max_blocks.max(1));
    let sizes = (0..k)
        .map(|_| rng.random_range(1..=max_block_size.max(1)))
        .collect();
    CStarAlgebra::new(sizes).expect("block sizes are positive")
}

/// Module whose `i`-th central summand lifts onto a `dims[i]`-dimensional
/// subspace of `H = C^m`, `m = Σ dims + extra`, in random position. Seeds are
/// Gaussian elements; the module is their closure, presented through a
/// random (non-orthonormal) set of generators.
pub fn random_module_with_dims<R: Rng + ?Sized>(
    rng: &mut R,
    algebra: &CStarAlgebra,
    dims: &[usize],
    extra: usize,
    tol: &Tolerance,
) -> Result<HilbertModule> {
    assert_eq!(dims.len(), algebra.num_blocks(), "one dimension per block");
    let m = dims.iter().sum::<usize>() + extra;
    let n = algebra.rep_dim();
    let u = random_unitary(rng, m);
    let seeds_needed = dims
        .iter()
        .zip(algebra.block_sizes())
        .map(|(d, b)| d.div_ceil(*b))
        .max()
        .unwrap_or(0);
    let mut seeds = Vec::with_capacity(seeds_needed);
    for _ in 0..seeds_needed {
        let mut seed = ComplexMatrix::zeros(m, n);
        let mut offset = 0;
        for (i, &d) in dims.iter().enumerate() {
            let cols = algebra.block_range(i);
            let g = gaussian_matrix(rng, d, cols.len());
            for r in 0..m {
                for (jj, j) in cols.clone().enumerate() {
                    for k in 0..d {
                        seed[(r, j)] += u[(r, offset + k)] * g[(k, jj)];
                    }
                }
            }
            offset += d;
        }
        seeds.push(seed);
    }
    let closed = HilbertModule::generated_by(algebra.clone(), m, &seeds, tol)?;
    let k = closed.dim();
    if k == 0 {
        return Ok(closed);
    }
    let mix = random_unitary(rng, k);
    let generators: Vec<ComplexMatrix> = (0..k)
        .map(|j| {
            let scale = rng.random_range(0.5..2.0);
            closed.element(&mix.column(j)).scale_real(scale)
        })
        .collect();
    HilbertModule::new(algebra.clone(), m, generators, tol)
}

/// Random per-block lifted dimensions with total in `1..=max_lift`.
pub fn random_dims<R: Rng + ?Sized>(rng: &mut R, blocks: usize, max_lift: usize) -> Vec<usize> {
    let total = rng.random_range(1..=max_lift.max(1));
    let mut dims = vec![0; blocks];
    for _ in 0..total {
        dims[rng.random_range(0..blocks)] += 1;
    }
    dims
}

/// Random module with `Σ dims <= lift_dim <= max_lift`.
pub fn random_module<R: Rng + ?Sized>(
    rng: &mut R,
    algebra: &CStarAlgebra,
    max_lift: usize,
    tol: &Tolerance,
) -> Result<HilbertModule> {
    let dims = random_dims(rng, algebra.num_blocks(), max_lift);
    let used: usize = dims.iter().sum();
    let extra = rng.random_range(0..=max_lift.saturating_sub(used));
    random_module_with_dims(rng, algebra, &dims, extra, tol)
}

pub fn random_element<R: Rng + ?Sized>(rng: &mut R, module: &HilbertModule) -> ComplexMatrix {
    module.element(&gaussian_vector(rng, module.dim()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapKind {
    Contraction,
    PartialIsometry,
    /// Isometric on each block; needs `dim H_E,i <= dim H_F,i`.
    Isometry,
    /// Coisometric on each block; needs `dim H_E,i >= dim H_F,i`.
    Coisometry,
}

/// `C = Σ_i Q'_i K_i Q_i*`, where `Q_i`, `Q'_i` are orthonormal bases of the
/// `i`-th lifted summands of source and target and `K_i` is random of the
/// requested kind. Every such `C` is the lift of a module map.
pub fn random_module_map<R: Rng + ?Sized>(
    rng: &mut R,
    source: &Arc<HilbertModule>,
    target: &Arc<HilbertModule>,
    kind: MapKind,
    tol: &Tolerance,
) -> Result<ModuleMap> {
    let blocks = source.algebra().num_blocks();
    let mut lift = ComplexMatrix::zeros(target.lift_dim(), source.lift_dim());
    for i in 0..blocks {
        let q = source.block_lifted_space(i, tol);
        let qt = target.block_lifted_space(i, tol);
        let (d, dt) = (q.dim(), qt.dim());
        let k = match kind {
            MapKind::Contraction => random_contraction(rng, dt, d),
            MapKind::PartialIsometry => random_partial_isometry(rng, dt, d),
            MapKind::Isometry | MapKind::Coisometry => {
                random_partial_isometry_of_rank(rng, dt, d, d.min(dt))
            }
        };
        lift = &lift + &(&(qt.basis() * &k) * &q.basis().adjoint());
    }
    ModuleMap::from_lift(source.clone(), target.clone(), &lift, tol)
}

/// Partial isometries `v: E -> F` and `w: D -> E` whose projections `π_v`
/// and `w w*` commute, so `v ∘ w` is a partial isometry.
pub fn random_commuting_pair<R: Rng + ?Sized>(
    rng: &mut R,
    d: &Arc<HilbertModule>,
    e: &Arc<HilbertModule>,
    f: &Arc<HilbertModule>,
    tol: &Tolerance,
) -> Result<(ModuleMap, ModuleMap)> {
    let blocks = e.algebra().num_blocks();
    let mut vl = ComplexMatrix::zeros(f.lift_dim(), e.lift_dim());
    let mut wl = ComplexMatrix::zeros(e.lift_dim(), d.lift_dim());
    for i in 0..blocks {
        let qd = d.block_lifted_space(i, tol);
        let qe = e.block_lifted_space(i, tol);
        let qf = f.block_lifted_space(i, tol);
        let (kv, kw) = commuting_pair(rng, qf.dim(), qe.dim(), qd.dim());
        vl = &vl + &(&(qf.basis() * &kv) * &qe.basis().adjoint());
        wl = &wl + &(&(qe.basis() * &kw) * &qd.basis().adjoint());
    }
    let v = ModuleMap::from_lift(e.clone(), f.clone(), &vl, tol)?;
    let w = ModuleMap::from_lift(d.clone(), e.clone(), &wl, tol)?;
    Ok((v, w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert_module::ops::{classify_mod, is_partial_isometry_mod};
    use crate::random::rng_from_seed;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn random_modules_validate() {
        let mut rng = rng_from_seed(11);
        for _ in 0..20 {
            let a = random_algebra(&mut rng, 3, 3);
            let m = random_module(&mut rng, &a, 8, &tol()).unwrap();
            let expected: usize = (0..a.num_blocks())
                .map(|i| m.block_lifted_space(i, &tol()).dim() * a.block_sizes()[i])
                .sum();
            assert_eq!(m.dim(), expected);
            assert!(m.lift_dim() <= 8);
        }
    }

    #[test]
    fn random_maps_have_requested_kind() {
        let mut rng = rng_from_seed(12);
        let tol = tol();
        for _ in 0..10 {
            let a = random_algebra(&mut rng, 2, 2);
            let dims = random_dims(&mut rng, a.num_blocks(), 4);
            let bigger: Vec<usize> = dims.iter().map(|d| d + rng.random_range(0..2)).collect();
            let e = Arc::new(random_module_with_dims(&mut rng, &a, &dims, 1, &tol).unwrap());
            let f = Arc::new(random_module_with_dims(&mut rng, &a, &bigger, 0, &tol).unwrap());
            let iso = random_module_map(&mut rng, &e, &f, MapKind::Isometry, &tol).unwrap();
            assert!(classify_mod(&iso, &tol).is_isometry);
            let co = random_module_map(&mut rng, &f, &e, MapKind::Coisometry, &tol).unwrap();
            assert!(classify_mod(&co, &tol).is_coisometry);
            let pi = random_module_map(&mut rng, &e, &f, MapKind::PartialIsometry, &tol).unwrap();
            assert!(
                is_partial_isometry_mod(&pi, &tol)
                    .unwrap()
                    .is_partial_isometry
            );
            let c = random_module_map(&mut rng, &e, &f, MapKind::Contraction, &tol).unwrap();
            assert!(c.is_contraction(&tol));
            assert!(c.right_linearity_residual() < 1e-9);
        }
    }
}
