//! Injective partially defined functions between finite label sets, their
//! composition on the canonical maximal domain, and the map `f ↦ v_f` into
//! 0/1 partial isometries.

use std::collections::{BTreeMap, HashSet};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, ONE};
use crate::partial_isometry::OperatorClass;

/// Ordered set of distinct labels; a label's basis index is its position.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct FiniteSet {
    labels: Vec<String>,
}

impl TryFrom<Vec<String>> for FiniteSet {
    type Error = Error;

    fn try_from(labels: Vec<String>) -> Result<Self> {
        FiniteSet::new(labels)
    }
}

impl From<FiniteSet> for Vec<String> {
    fn from(s: FiniteSet) -> Self {
        s.labels
    }
}

impl FiniteSet {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::InvalidPartialFn(format!("duplicate label {l:?}")));
            }
        }
        Ok(FiniteSet { labels })
    }

    /// `{prefix1, ..., prefixN}`.
    pub fn numbered(prefix: &str, n: usize) -> Self {
        FiniteSet {
            labels: (1..=n).map(|i| format!("{prefix}{i}")).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

/// Injective partial function `source ⊃ D_f -> target`, stored as
/// `image[b] = Some(index of f(b))` for `b ∈ D_f`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PartialFnFile", into = "PartialFnFile")]
pub struct PartialFn {
    source: FiniteSet,
    target: FiniteSet,
    image: Vec<Option<usize>>,
}

/// `{"source": [...], "target": [...], "map": {"b": "a", ...}}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PartialFnFile {
    pub source: Vec<String>,
    pub target: Vec<String>,
    pub map: BTreeMap<String, String>,
}

impl TryFrom<PartialFnFile> for PartialFn {
    type Error = Error;

    fn try_from(f: PartialFnFile) -> Result<Self> {
        let source = FiniteSet::new(f.source)?;
        let target = FiniteSet::new(f.target)?;
        PartialFn::from_pairs(
            source,
            target,
            f.map.iter().map(|(k, v)| (k.as_str(), v.as_str())),
        )
    }
}

impl From<PartialFn> for PartialFnFile {
    fn from(f: PartialFn) -> Self {
        let map = f
            .pairs()
            .map(|(b, a)| (b.to_string(), a.to_string()))
            .collect();
        PartialFnFile {
            source: f.source.labels,
            target: f.target.labels,
            map,
        }
    }
}

impl PartialFn {
    /// Builds from index data; rejects out-of-range indices and repeated values.
    pub fn from_indices(
        source: FiniteSet,
        target: FiniteSet,
        image: Vec<Option<usize>>,
    ) -> Result<Self> {
        if image.len() != source.len() {
            return Err(Error::InvalidPartialFn(format!(
                "{} images for {} source labels",
                image.len(),
                source.len()
            )));
        }
        let mut hit = vec![false; target.len()];
        for a in image.iter().flatten() {
            if *a >= target.len() {
                return Err(Error::InvalidPartialFn(format!(
                    "target index {a} out of range"
                )));
            }
            if std::mem::replace(&mut hit[*a], true) {
                return Err(Error::InvalidPartialFn(format!(
                    "not injective: {:?} is hit twice",
                    target.labels[*a]
                )));
            }
        }
        Ok(PartialFn {
            source,
            target,
            image,
        })
    }

    pub fn from_pairs<'a>(
        source: FiniteSet,
        target: FiniteSet,
        pairs: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<Self> {
        let mut image = vec![None; source.len()];
        for (b, a) in pairs {
            let bi = source
                .index_of(b)
                .ok_or_else(|| Error::InvalidPartialFn(format!("{b:?} is not a source label")))?;
            let ai = target
                .index_of(a)
                .ok_or_else(|| Error::InvalidPartialFn(format!("{a:?} is not a target label")))?;
            if image[bi].replace(ai).is_some() {
                return Err(Error::InvalidPartialFn(format!("{b:?} mapped twice")));
            }
        }
        PartialFn::from_indices(source, target, image)
    }

    pub fn identity(set: FiniteSet) -> Self {
        let image = (0..set.len()).map(Some).collect();
        PartialFn {
            source: set.clone(),
            target: set,
            image,
        }
    }

    pub fn empty(source: FiniteSet, target: FiniteSet) -> Self {
        let image = vec![None; source.len()];
        PartialFn {
            source,
            target,
            image,
        }
    }

    pub fn source(&self) -> &FiniteSet {
        &self.source
    }

    pub fn target(&self) -> &FiniteSet {
        &self.target
    }

    pub fn image_indices(&self) -> &[Option<usize>] {
        &self.image
    }

    /// Domain `D_f` as source indices.
    pub fn domain(&self) -> Vec<usize> {
        (0..self.image.len())
            .filter(|&i| self.image[i].is_some())
            .collect()
    }

    pub fn apply(&self, label: &str) -> Option<&str> {
        let b = self.source.index_of(label)?;
        self.image[b].map(|a| self.target.labels[a].as_str())
    }

    /// `(b, f(b))` for `b ∈ D_f`, in source order.
    pub fn pairs(&self) -> impl Iterator<Item = (&str, &str)> {
        self.image.iter().enumerate().filter_map(|(b, a)| {
            a.map(|a| {
                (
                    self.source.labels[b].as_str(),
                    self.target.labels[a].as_str(),
                )
            })
        })
    }

    pub fn is_total(&self) -> bool {
        self.image.iter().all(Option::is_some)
    }

    pub fn is_surjective(&self) -> bool {
        self.image.iter().flatten().count() == self.target.len()
    }

    pub fn is_injective(&self) -> bool {
        let values: Vec<usize> = self.image.iter().flatten().copied().collect();
        values.iter().collect::<HashSet<_>>().len() == values.len()
    }
}

/// `f ∘ g` on `{c ∈ D_g : g(c) ∈ D_f}`. Requires `g.target == f.source`.
pub fn compose_pdf(f: &PartialFn, g: &PartialFn) -> Result<PartialFn> {
    if g.target != f.source {
        return Err(Error::TargetSourceMismatch);
    }
    let image = g
        .image
        .iter()
        .map(|gc| gc.and_then(|b| f.image[b]))
        .collect();
    let composed = PartialFn {
        source: g.source.clone(),
        target: f.target.clone(),
        image,
    };
    debug_assert!(composed.is_injective());
    Ok(composed)
}

/// `v_f`: `|target| x |source|` with a 1 at `(f(b), b)` for `b ∈ D_f`.
pub fn to_partial_isometry(f: &PartialFn) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(f.target.len(), f.source.len());
    for (b, a) in f.image.iter().enumerate() {
        if let Some(a) = a {
            m[(*a, b)] = ONE;
        }
    }
    m
}

/// Class of `v_f` read off from `f`: isometry iff total, coisometry iff
/// surjective, unitary iff bijective.
pub fn classify_pdf(f: &PartialFn) -> OperatorClass {
    let is_isometry = f.is_total();
    let is_coisometry = f.is_surjective();
    OperatorClass {
        is_contraction: true,
        is_projection: f.source == f.target
            && f.image
                .iter()
                .enumerate()
                .all(|(b, a)| a.is_none_or(|a| a == b)),
        is_isometry,
        is_coisometry,
        is_partial_isometry: true,
        is_unitary: is_isometry && is_coisometry,
    }
}

/// All injective partial functions `source ⊃ D -> target`.
pub fn all_injective_partial_fns(source: &FiniteSet, target: &FiniteSet) -> Vec<PartialFn> {
    let mut out = Vec::new();
    let mut image = vec![None; source.len()];
    let mut used = vec![false; target.len()];
    enumerate(0, &mut image, &mut used, &mut |img| {
        out.push(PartialFn {
            source: source.clone(),
            target: target.clone(),
            image: img.to_vec(),
        })
    });
    out
}

fn enumerate(
    pos: usize,
    image: &mut Vec<Option<usize>>,
    used: &mut Vec<bool>,
    emit: &mut impl FnMut(&[Option<usize>]),
) {
    if pos == image.len() {
        emit(image);
        return;
    }
    image[pos] = None;
    enumerate(pos + 1, image, used, emit);
    for a in 0..used.len() {
        if used[a] {
            continue;
        }
        used[a] = true;
        image[pos] = Some(a);
        enumerate(pos + 1, image, used, emit);
        used[a] = false;
    }
    image[pos] = None;
}

/// Uniform over domains-with-injections: each source label is mapped with
/// probability `density` to a fresh unused target label, if one is left.
pub fn random_partial_fn<R: Rng + ?Sized>(
    rng: &mut R,
    source: &FiniteSet,
    target: &FiniteSet,
    density: f64,
) -> PartialFn {
    let mut free: Vec<usize> = (0..target.len()).collect();
    let mut image = vec![None; source.len()];
    for slot in image.iter_mut() {
        if !free.is_empty() && rng.random_bool(density.clamp(0.0, 1.0)) {
            let k = rng.random_range(0..free.len());
            *slot = Some(free.swap_remove(k));
        }
    }
    PartialFn {
        source: source.clone(),
        target: target.clone(),
        image,
    }
}
