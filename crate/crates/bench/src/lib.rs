//! Seeded inputs shared by the benchmarks.

use std::sync::Arc;

use piso::hilbert_module::random::{random_module_map, random_module_with_dims, MapKind};
use piso::hilbert_module::{CStarAlgebra, HilbertModule, ModuleMap};
use piso::linalg::{ComplexMatrix, Tolerance};
use piso::random::{gaussian_matrix, random_contraction, random_partial_isometry, rng_from_seed};

pub fn hermitian(n: usize, seed: u64) -> ComplexMatrix {
    gaussian_matrix(&mut rng_from_seed(seed), n, n).hermitian_part()
}

pub fn contraction(n: usize, seed: u64) -> ComplexMatrix {
    random_contraction(&mut rng_from_seed(seed), n, n)
}

pub fn partial_isometry_pair(n: usize, seed: u64) -> (ComplexMatrix, ComplexMatrix) {
    let mut rng = rng_from_seed(seed);
    (
        random_partial_isometry(&mut rng, n, n),
        random_partial_isometry(&mut rng, n, n),
    )
}

/// A module over `blocks` whose lifted space has dimension `lift` in every
/// block, and one map of each requested kind on it.
pub fn module_maps(blocks: &[usize], lift: usize, kinds: &[MapKind], seed: u64) -> Vec<ModuleMap> {
    let tol = Tolerance::default();
    let mut rng = rng_from_seed(seed);
    let algebra = CStarAlgebra::new(blocks.to_vec()).expect("valid blocks");
    let dims = vec![lift; blocks.len()];
    let e: Arc<HilbertModule> =
        Arc::new(random_module_with_dims(&mut rng, &algebra, &dims, 0, &tol).expect("module"));
    kinds
        .iter()
        .map(|&k| random_module_map(&mut rng, &e, &e, k, &tol).expect("map"))
        .collect()
}
