//! Seeded generators for random test instances.
//!
//! Every generator takes an explicit RNG; [`trial_rng`] derives an independent
//! stream from a master seed and a trial index so work can be sharded freely.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{inner, norm, svd, ComplexMatrix, Subspace, C64};

pub type TrialRng = ChaCha8Rng;

/// Upper end of the singular values drawn for non-isometric directions.
/// Values in `(1 - 1e-6, 1)` are never produced.
pub const NON_ISOMETRIC_MAX: f64 = 1.0 - 1e-6;

/// SplitMix64 finalizer of `master ^ golden * (index + 1)`.
pub fn trial_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ 0x9E37_79B9_7F4A_7C15u64.wrapping_mul(index.wrapping_add(1));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn rng_from_seed(seed: u64) -> TrialRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn trial_rng(master: u64, index: u64) -> TrialRng {
    rng_from_seed(trial_seed(master, index))
}

/// Standard complex Gaussian entry, `E|z|^2 = 1`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<C64> {
    (0..n).map(|_| complex_gaussian(rng)).collect()
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Haar unitary: Gram-Schmidt on a Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let g = gaussian_matrix(rng, n, n);
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut w = g.column(j);
        for _ in 0..2 {
            for q in &cols {
                let c = inner(q, &w);
                w.iter_mut().zip(q).for_each(|(a, b)| *a -= c * b);
            }
        }
        let nw = norm(&w);
        cols.push(w.into_iter().map(|z| z / nw).collect());
    }
    ComplexMatrix::from_columns(n, &cols)
}

/// Partial isometry of uniformly random rank in `0..=min(rows, cols)`.
pub fn random_partial_isometry<R: Rng + ?Sized>(
    rng: &mut R,
    rows: usize,
    cols: usize,
) -> ComplexMatrix {
    let k = rng.random_range(0..=rows.min(cols));
    random_partial_isometry_of_rank(rng, rows, cols, k)
}

/// SVD of a Gaussian matrix with the top `rank` singular values set to 1 and
/// the rest to 0.
pub fn random_partial_isometry_of_rank<R: Rng + ?Sized>(
    rng: &mut R,
    rows: usize,
    cols: usize,
    rank: usize,
) -> ComplexMatrix {
    let g = gaussian_matrix(rng, rows, cols);
    with_singular_values(&g, &vec![1.0; rank])
}

/// Contraction `U diag(σ) V*` with Haar-like singular vectors: a random number
/// of unit singular values, the rest uniform in `[0, NON_ISOMETRIC_MAX]`.
pub fn random_contraction<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    let k = rows.min(cols);
    let ones = rng.random_range(0..=k);
    let mut sigma: Vec<f64> = vec![1.0; ones];
    sigma.extend((ones..k).map(|_| rng.random_range(0.0..=NON_ISOMETRIC_MAX)));
    let g = gaussian_matrix(rng, rows, cols);
    with_singular_values(&g, &sigma)
}

/// Replaces the leading singular values of `g` by `sigma` (descending order
/// not required) and the remaining ones by 0.
fn with_singular_values(g: &ComplexMatrix, sigma: &[f64]) -> ComplexMatrix {
    let s = svd(g);
    let mut out = ComplexMatrix::zeros(g.rows(), g.cols());
    for (k, &sv) in sigma.iter().enumerate().take(s.sigma.len()) {
        for i in 0..g.rows() {
            for j in 0..g.cols() {
                out[(i, j)] += s.u[(i, k)] * s.v[(j, k)].conj() * sv;
            }
        }
    }
    out
}

/// Partial isometries `v: E -> F`, `w: D -> E` (shapes `f x e`, `e x d`) whose
/// initial projection `v*v` and final projection `ww*` are 0/1 diagonal matrices
/// conjugated by one shared unitary of `E`, hence commute.
pub fn commuting_pair<R: Rng + ?Sized>(
    rng: &mut R,
    f: usize,
    e: usize,
    d: usize,
) -> (ComplexMatrix, ComplexMatrix) {
    let shared = random_unitary(rng, e);
    let rank_v = rng.random_range(0..=e.min(f));
    let rank_w = rng.random_range(0..=e.min(d));
    let mut idx: Vec<usize> = (0..e).collect();
    shuffle(rng, &mut idx);
    let support_v: Vec<usize> = idx[..rank_v].to_vec();
    shuffle(rng, &mut idx);
    let support_w: Vec<usize> = idx[..rank_w].to_vec();

    let out_f = random_unitary(rng, f);
    let mut v = ComplexMatrix::zeros(f, e);
    for (slot, &i) in support_v.iter().enumerate() {
        // v maps shared column i to out_f column `slot`.
        for r in 0..f {
            for c in 0..e {
                v[(r, c)] += out_f[(r, slot)] * shared[(c, i)].conj();
            }
        }
    }
    let in_d = random_unitary(rng, d);
    let mut w = ComplexMatrix::zeros(e, d);
    for (slot, &i) in support_w.iter().enumerate() {
        for r in 0..e {
            for c in 0..d {
                w[(r, c)] += shared[(r, i)] * in_d[(c, slot)].conj();
            }
        }
    }
    (v, w)
}

fn shuffle<R: Rng + ?Sized, T>(rng: &mut R, items: &mut [T]) {
    for i in (1..items.len()).rev() {
        let j = rng.random_range(0..=i);
        items.swap(i, j);
    }
}

/// A random subspace of dimension `k` of the given subspace.
pub fn random_subspace_of<R: Rng + ?Sized>(rng: &mut R, s: &Subspace, k: usize) -> Vec<Vec<C64>> {
    assert!(k <= s.dim(), "requested dimension exceeds the subspace");
    let coeffs = random_unitary(rng, s.dim());
    let q = s.basis() * &coeffs;
    (0..k).map(|j| q.column(j)).collect()
}

/// Idempotent `U [[I_k, T], [0, 0]] U*` with random unitary `U`. With
/// `off_diagonal_scale == 0` this is an orthogonal projection; otherwise the
/// block `T` is Gaussian, rescaled to Frobenius norm `off_diagonal_scale`.
pub fn random_idempotent<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    rank: usize,
    off_diagonal_scale: f64,
) -> ComplexMatrix {
    assert!(rank <= n);
    let mut core = ComplexMatrix::zeros(n, n);
    for i in 0..rank {
        core[(i, i)] = C64::new(1.0, 0.0);
    }
    if off_diagonal_scale > 0.0 && rank < n && rank > 0 {
        let t = gaussian_matrix(rng, rank, n - rank);
        let s = off_diagonal_scale / t.frobenius_norm();
        for i in 0..rank {
            for j in 0..n - rank {
                core[(i, rank + j)] = t[(i, j)] * s;
            }
        }
    }
    let u = random_unitary(rng, n);
    &(&u * &core) * &u.adjoint()
}
