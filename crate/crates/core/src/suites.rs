//! Randomized property suites. One trial draws its instance from a seed and
//! checks every property of its suite on it, so a failing trial is
//! reproduced by re-running the same `(suite, seed, dim, tol)`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::hilbert_module::random::{
    random_algebra, random_commuting_pair, random_dims, random_element, random_module,
    random_module_map, random_module_with_dims, MapKind,
};
use crate::hilbert_module::{
    classify_mod, contained_partial_isometry_mod, cross_orthogonality_residual, domination_defect,
    factor_partial_isometry, is_partial_isometry_mod, isometric_submodule, operator_map,
    product_invariance_criterion, vectorize, CStarAlgebra, HilbertModule, ModuleMap,
};
use crate::io::ModuleMapFile;
use crate::linalg::{
    inner, orthogonal_projection, psd_order_leq, spectral_norm, ComplexMatrix, Subspace, Tolerance,
    C64,
};
use crate::partial_isometry::{
    classify, contained_partial_isometry, dot_compose, dot_compose_detailed, dot_composition_facts,
    isometric_subspace, product_criterion,
};
use crate::pdf_sets::{
    classify_pdf, compose_pdf, random_partial_fn, to_partial_isometry, FiniteSet, PartialFn,
};
use crate::pdi::{
    compose_pdi, contained_pdi, final_proposition_check, pdi_from_partial_fn,
    PartiallyDefinedIsometry,
};
use crate::random::{
    commuting_pair, random_contraction, random_idempotent, random_partial_isometry,
    random_subspace_of, rng_from_seed, TrialRng,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    /// Product criterion for two partial isometries; adjoint symmetry;
    /// contractive idempotents.
    Pilem,
    /// The projection onto the isometric subspace of a contraction.
    Clem,
    /// Facts about the dot composition.
    Cthm,
    /// Associativity of the dot composition.
    Cathm,
    /// Partial functions embed exactly as partial isometries.
    Functor,
    /// Module representation, isometric submodules, closure laws,
    /// factorization and the scalar specialization.
    ModuleTool,
    /// Invariance criterion for module products.
    Invariance,
    /// Contained partial isometry of a module contraction.
    Univthm,
    /// Contained PDI of a product versus the composed PDIs; category laws.
    Proposition,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Pilem,
        Suite::Clem,
        Suite::Cthm,
        Suite::Cathm,
        Suite::Functor,
        Suite::ModuleTool,
        Suite::Invariance,
        Suite::Univthm,
        Suite::Proposition,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Pilem => "pilem",
            Suite::Clem => "clem",
            Suite::Cthm => "cthm",
            Suite::Cathm => "cathm",
            Suite::Functor => "functor",
            Suite::ModuleTool => "module-tool",
            Suite::Invariance => "invariance",
            Suite::Univthm => "univthm",
            Suite::Proposition => "proposition",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Suite::ALL
            .iter()
            .copied()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

/// A serialized input of a trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Instance {
    Matrix(ComplexMatrix),
    PartialFn(PartialFn),
    ModuleMap(ModuleMapFile),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedInstance {
    pub name: String,
    pub instance: Instance,
}

/// One evaluated property. `residual` is set for checks that bound a
/// quantity which should vanish.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub passed: bool,
    pub residual: Option<f64>,
}

/// Result of one trial.
#[derive(Debug, Clone, Default)]
pub struct TrialOutcome {
    /// Largest residual among quantities that should vanish.
    pub residual: f64,
    /// Names and details of the violated properties.
    pub failures: Vec<String>,
    /// Inputs drawn for the trial.
    pub inputs: Vec<NamedInstance>,
    /// Properties evaluated, in order.
    pub checks: Vec<CheckRecord>,
}

impl TrialOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn bound(&mut self, name: &str, residual: f64, bound: f64) {
        if residual.is_finite() {
            self.residual = self.residual.max(residual);
        }
        let passed = residual <= bound;
        if !passed {
            self.failures.push(format!(
                "{name}: residual {residual:.3e} exceeds {bound:.1e}"
            ));
        }
        self.checks.push(CheckRecord {
            name: name.into(),
            passed,
            residual: Some(residual),
        });
    }

    fn check(&mut self, name: &str, ok: bool) {
        if !ok {
            self.failures.push(name.to_string());
        }
        self.checks.push(CheckRecord {
            name: name.into(),
            passed: ok,
            residual: None,
        });
    }

    fn matrix(&mut self, name: &str, m: &ComplexMatrix) {
        self.inputs.push(NamedInstance {
            name: name.into(),
            instance: Instance::Matrix(m.clone()),
        });
    }

    fn partial_fn(&mut self, name: &str, f: &PartialFn) {
        self.inputs.push(NamedInstance {
            name: name.into(),
            instance: Instance::PartialFn(f.clone()),
        });
    }

    fn module_map(&mut self, name: &str, c: &ModuleMap) {
        self.inputs.push(NamedInstance {
            name: name.into(),
            instance: Instance::ModuleMap(ModuleMapFile::from_map(c)),
        });
    }
}

/// Share of trials drawn with commuting projections, so both answers of the
/// product criteria are exercised.
pub const COMMUTING_SHARE: f64 = 0.3;

/// Runs one trial of `suite` on the instance drawn from `seed`. `dim` bounds
/// the Hilbert-space dimensions; module suites use blocks of size at most
/// `min(dim, 3)` and lift dimension at most `min(2 dim, 8)`.
pub fn run_trial(suite: Suite, seed: u64, dim: usize, tol: &Tolerance) -> TrialOutcome {
    let mut rng = rng_from_seed(seed);
    let mut out = TrialOutcome::default();
    let dim = dim.max(1);
    let result = match suite {
        Suite::Pilem => pilem(&mut rng, dim, tol, &mut out),
        Suite::Clem => clem(&mut rng, dim, tol, &mut out),
        Suite::Cthm => cthm(&mut rng, dim, tol, &mut out),
        Suite::Cathm => cathm(&mut rng, dim, tol, &mut out),
        Suite::Functor => functor(&mut rng, dim, tol, &mut out),
        Suite::ModuleTool => module_tool(&mut rng, dim, tol, &mut out),
        Suite::Invariance => invariance(&mut rng, dim, tol, &mut out),
        Suite::Univthm => univthm(&mut rng, dim, tol, &mut out),
        Suite::Proposition => proposition(&mut rng, dim, tol, &mut out),
    };
    if let Err(e) = result {
        out.failures.push(format!("error: {e}"));
    }
    out
}

fn pick_dim(rng: &mut TrialRng, max: usize) -> usize {
    rng.random_range(max.min(2)..=max)
}

fn pi_pair(rng: &mut TrialRng, f: usize, e: usize, d: usize) -> (ComplexMatrix, ComplexMatrix) {
    if rng.random_bool(COMMUTING_SHARE) {
        commuting_pair(rng, f, e, d)
    } else {
        (
            random_partial_isometry(rng, f, e),
            random_partial_isometry(rng, e, d),
        )
    }
}

fn pilem(rng: &mut TrialRng, dim: usize, tol: &Tolerance, out: &mut TrialOutcome) -> Result<()> {
    let (f, e, d) = (pick_dim(rng, dim), pick_dim(rng, dim), pick_dim(rng, dim));
    let (v, w) = pi_pair(rng, f, e, d);
    out.matrix("v", &v);
    out.matrix("w", &w);
    let pc = product_criterion(&v, &w, tol)?;
    out.check("four conditions agree", pc.all_agree());
    if pc.product_is_pi {
        let r = pc.residuals;
        let worst = r
            .product_is_pi
            .max(r.idempotent)
            .max(r.self_adjoint)
            .max(r.commutator);
        out.bound("residuals of an agreeing product", worst, tol.eq);
    }
    let reversed = classify(&(&w.adjoint() * &v.adjoint()), tol).is_partial_isometry;
    out.check(
        "(vw)* is a partial isometry iff vw is",
        reversed == pc.product_is_pi,
    );

    let n = pick_dim(rng, dim);
    let rank = rng.random_range(0..=n);
    let scale = if rng.random_bool(0.5) {
        0.0
    } else {
        rng.random_range(1e-3..1.0)
    };
    let idem = random_idempotent(rng, n, rank, scale);
    out.matrix("idempotent", &idem);
    let contractive = spectral_norm(&idem) <= 1.0 + tol.eq;
    let self_adjoint = idem.hermitian_residual() <= tol.inclusion();
    out.check(
        "contractive idempotent iff self-adjoint",
        contractive == self_adjoint,
    );
    if contractive {
        out.bound(
            "contractive idempotent is self-adjoint",
            idem.hermitian_residual(),
            tol.inclusion(),
        );
    }
    Ok(())
}

fn clem(rng: &mut TrialRng, dim: usize, tol: &Tolerance, out: &mut TrialOutcome) -> Result<()> {
    let (m, n) = (pick_dim(rng, dim), pick_dim(rng, dim));
    let c = random_contraction(rng, m, n);
    out.matrix("c", &c);
    let cp = contained_partial_isometry(&c, tol)?;
    let v = &cp.v;
    out.bound(
        "(c p_c)*(c p_c) = p_c",
        (&v.adjoint() * v).distance(&cp.p_c),
        tol.inclusion(),
    );
    let cc = (&c.adjoint() * &c).hermitian_part();
    out.check("p_c <= c*c", psd_order_leq(&cp.p_c, &cc, tol)?);

    let s = &cp.subspace;
    let k = rng.random_range(0..=s.dim());
    let sub = Subspace::span(n, &random_subspace_of(rng, s, k), tol);
    let q = orthogonal_projection(&sub);
    let cq = &c * &q;
    out.bound(
        "subprojection q: (cq)*(cq) = q",
        (&cq.adjoint() * &cq).distance(&q),
        tol.inclusion(),
    );

    let outside = s.complement();
    if !outside.is_zero() {
        let t = &random_subspace_of(rng, &outside, 1)[0];
        let dir: Vec<C64> = if s.is_zero() {
            t.clone()
        } else {
            let u = &random_subspace_of(rng, s, 1)[0];
            // at least half of the weight lies outside
            let a = rng.random_range(std::f64::consts::FRAC_PI_4..std::f64::consts::FRAC_PI_2);
            u.iter()
                .zip(t)
                .map(|(x, y)| x * a.cos() + y * a.sin())
                .collect()
        };
        let q = orthogonal_projection(&Subspace::span(n, &[dir], tol));
        let cq = &c * &q;
        let d = (&cq.adjoint() * &cq).distance(&q);
        out.check(
            "projection leaving the isometric subspace is not isometric",
            d > tol.eq,
        );
    }
    Ok(())
}

fn cthm(rng: &mut TrialRng, dim: usize, tol: &Tolerance, out: &mut TrialOutcome) -> Result<()> {
    let (f, e, d) = (pick_dim(rng, dim), pick_dim(rng, dim), pick_dim(rng, dim));
    let (v, w) = pi_pair(rng, f, e, d);
    out.matrix("v", &v);
    out.matrix("w", &w);
    let dc = dot_compose_detailed(&v, &w, tol)?;
    let facts = dot_composition_facts(&v, &w, &dc, tol)?;
    out.bound(
        "v·w is a partial isometry",
        facts.result_pi_residual,
        tol.inclusion(),
    );
    out.check("p_{v,w} <= w*w", facts.p_below_initial_of_w);
    out.bound(
        "w p_{v,w} is a partial isometry",
        facts.restricted_w_pi_residual,
        tol.inclusion(),
    );
    out.check(
        "final projection of w p_{v,w} <= v*v",
        facts.final_of_restricted_w_below_initial_of_v,
    );
    Ok(())
}

fn cathm(rng: &mut TrialRng, dim: usize, tol: &Tolerance, out: &mut TrialOutcome) -> Result<()> {
    let dims: Vec<usize> = (0..4).map(|_| pick_dim(rng, dim)).collect();
    let (u, v) = pi_pair(rng, dims[0], dims[1], dims[2]);
    let w = random_partial_isometry(rng, dims[2], dims[3]);
    out.matrix("u", &u);
    out.matrix("v", &v);
    out.matrix("w", &w);
    let left = dot_compose(&dot_compose(&u, &v, tol)?, &w, tol)?;
    let right = dot_compose(&u, &dot_compose(&v, &w, tol)?, tol)?;
    out.bound("(u·v)·w = u·(v·w)", left.distance(&right), 100.0 * tol.eq);
    Ok(())
}

fn functor(rng: &mut TrialRng, dim: usize, tol: &Tolerance, out: &mut TrialOutcome) -> Result<()> {
    let max = dim.min(6);
    let sizes: Vec<usize> = (0..3).map(|_| rng.random_range(0..=max)).collect();
    let a = FiniteSet::numbered("a", sizes[0]);
    let b = FiniteSet::numbered("b", sizes[1]);
    let c = FiniteSet::numbered("c", sizes[2]);
    let density: f64 = rng.random_range(0.0..=1.0);
    let g = random_partial_fn(rng, &a, &b, density);
    let density: f64 = rng.random_range(0.0..=1.0);
    let f = random_partial_fn(rng, &b, &c, density);
    out.partial_fn("f", &f);
    out.partial_fn("g", &g);
    let fg = compose_pdf(&f, &g)?;
    let lhs = to_partial_isometry(&fg);
    let rhs = &to_partial_isometry(&f) * &to_partial_isometry(&g);
    out.check("v_{f∘g} = v_f v_g exactly", lhs == rhs);
    let vf = to_partial_isometry(&f);
    let (cls, expected) = (classify(&vf, tol), classify_pdf(&f));
    out.check(
        "classes of v_f match f",
        cls.is_isometry == expected.is_isometry
            && cls.is_coisometry == expected.is_coisometry
            && cls.is_partial_isometry,
    );
    if !a.is_empty() && !b.is_empty() && !c.is_empty() {
        let composed = compose_pdi(
            &pdi_from_partial_fn(&f, tol)?,
            &pdi_from_partial_fn(&g, tol)?,
            tol,
        )?;
        let expected = pdi_from_partial_fn(&fg, tol)?;
        out.check(
            "composed PDI domain is spanned by the composed domain",
            composed
                .domain()
                .same_as(expected.domain(), tol.inclusion()),
        );
    }
    Ok(())
}

/// Algebra and lift bound for module suites at dimension bound `dim`.
fn module_setting(rng: &mut TrialRng, dim: usize) -> (CStarAlgebra, usize) {
    let algebra = random_algebra(rng, 3, dim.min(3));
    (algebra, (2 * dim).min(8))
}

fn module_tool(
    rng: &mut TrialRng,
    dim: usize,
    tol: &Tolerance,
    out: &mut TrialOutcome,
) -> Result<()> {
    let (algebra, max_lift) = module_setting(rng, dim);
    let e = Arc::new(random_module(rng, &algebra, max_lift, tol)?);
    let f = Arc::new(random_module(rng, &algebra, max_lift, tol)?);

    // ⟨L_x g, L_y g'⟩ = ⟨g, ⟨x, y⟩ g'⟩
    let n = algebra.rep_dim();
    let mut worst: f64 = 0.0;
    for x in e.generators() {
        for y in e.generators() {
            let ip = e.module_inner(x, y, tol)?;
            let g = crate::random::gaussian_vector(rng, n);
            let h = crate::random::gaussian_vector(rng, n);
            let lhs = inner(&x.mul_vec(&g), &y.mul_vec(&h));
            let rhs = inner(&g, &ip.mul_vec(&h));
            worst = worst.max((lhs - rhs).norm());
        }
    }
    out.bound("tool fidelity", worst, tol.inclusion());

    let c = random_module_map(rng, &e, &f, MapKind::Contraction, tol)?;
    out.module_map("c", &c);
    out.bound(
        "c is right linear",
        c.right_linearity_residual(),
        tol.inclusion(),
    );
    let pc = isometric_submodule(&c, tol)?;
    out.bound(
        "P_c closed under right multiplication",
        pc.closure_residual(),
        tol.inclusion(),
    );
    out.bound(
        "P_c closed under addition",
        pc.addition_residual(),
        tol.inclusion(),
    );
    let mut worst: f64 = 0.0;
    for x in pc.basis_elements() {
        let cx = c.apply(&x);
        worst = worst.max(e.inner(&cx, &cx).distance(&e.inner(&x, &x)));
    }
    out.bound("c isometric on P_c", worst, 10.0 * tol.eq);
    for g in e.generators() {
        let p = pc.space().project(&vectorize(g));
        let rest: Vec<C64> = vectorize(g).iter().zip(&p).map(|(a, b)| a - b).collect();
        let norm = crate::linalg::norm(&rest);
        if norm <= 1e-6 * crate::linalg::norm(&vectorize(g)) {
            continue;
        }
        let x =
            ComplexMatrix::from_vec(g.rows(), g.cols(), rest.iter().map(|z| z / norm).collect());
        let cx = c.apply(&x);
        let d = e.inner(&cx, &cx).distance(&e.inner(&x, &x));
        out.check(
            "extending P_c by an outside generator breaks isometry",
            d > tol.eq,
        );
    }

    // closure laws under composition
    let blocks = algebra.num_blocks();
    let base = random_dims(rng, blocks, (max_lift / 2).max(1));
    let mid: Vec<usize> = base.iter().map(|d| d + rng.random_range(0..=1)).collect();
    let top: Vec<usize> = mid.iter().map(|d| d + rng.random_range(0..=1)).collect();
    let small = Arc::new(random_module_with_dims(rng, &algebra, &base, 0, tol)?);
    let medium = Arc::new(random_module_with_dims(rng, &algebra, &mid, 0, tol)?);
    let large = Arc::new(random_module_with_dims(rng, &algebra, &top, 0, tol)?);

    let i1 = random_module_map(rng, &small, &medium, MapKind::Isometry, tol)?;
    let i2 = random_module_map(rng, &medium, &large, MapKind::Isometry, tol)?;
    out.check(
        "isometry ∘ isometry is an isometry",
        classify_mod(&i2.compose(&i1, tol)?, tol).is_isometry,
    );
    let c1 = random_module_map(rng, &large, &medium, MapKind::Coisometry, tol)?;
    let c2 = random_module_map(rng, &medium, &small, MapKind::Coisometry, tol)?;
    out.check(
        "coisometry ∘ coisometry is a coisometry",
        classify_mod(&c2.compose(&c1, tol)?, tol).is_coisometry,
    );
    let p1 = random_module_map(rng, &small, &medium, MapKind::PartialIsometry, tol)?;
    out.check(
        "isometry ∘ partial isometry is a partial isometry",
        is_partial_isometry_mod(&i2.compose(&p1, tol)?, tol)?.is_partial_isometry,
    );
    let p2 = random_module_map(rng, &medium, &large, MapKind::PartialIsometry, tol)?;
    out.check(
        "partial isometry ∘ coisometry is a partial isometry",
        is_partial_isometry_mod(&p2.compose(&c1, tol)?, tol)?.is_partial_isometry,
    );
    let fac = factor_partial_isometry(&p2, tol)?;
    out.check(
        "factor through π_v E: isometry",
        classify_mod(&fac.isometry, tol).is_isometry,
    );
    out.check(
        "factor through π_v E: coisometry",
        classify_mod(&fac.coisometry, tol).is_coisometry,
    );
    out.bound(
        "factors recompose to v",
        fac.isometry.compose(&fac.coisometry, tol)?.distance(&p2),
        tol.inclusion(),
    );

    specialization(rng, dim, tol, out)
}

/// Module operations over the scalars against the Hilbert-space ones.
pub(crate) fn specialization(
    rng: &mut TrialRng,
    dim: usize,
    tol: &Tolerance,
    out: &mut TrialOutcome,
) -> Result<()> {
    let (m, n, k) = (pick_dim(rng, dim), pick_dim(rng, dim), pick_dim(rng, dim));
    let c = random_contraction(rng, m, n);
    let (v, w) = pi_pair(rng, m, n, k);
    out.matrix("scalar c", &c);
    out.matrix("scalar v", &v);
    out.matrix("scalar w", &w);
    let cm = operator_map(&c, tol)?;
    let vm = operator_map(&v, tol)?;
    let wm = operator_map(&w, tol)?;
    let (a, b) = (classify(&c, tol), classify_mod(&cm, tol));
    out.check("scalar specialization: classes", a == b);
    let s = isometric_subspace(&c, tol)?;
    let sm = isometric_submodule(&cm, tol)?;
    out.check(
        "scalar specialization: isometric subspace",
        s.same_as(sm.space(), tol.inclusion()),
    );
    let cp = contained_partial_isometry(&c, tol)?;
    let cpm = contained_partial_isometry_mod(&cm, tol)?;
    out.bound(
        "scalar specialization: contained partial isometry",
        cp.v.distance(cpm.v.lift()),
        tol.inclusion(),
    );
    let pc = product_criterion(&v, &w, tol)?;
    let pm = product_invariance_criterion(&vm, &wm, tol)?;
    out.check(
        "scalar specialization: product criterion",
        pc.product_is_pi == pm.product_is_pi && pm.agree(),
    );
    Ok(())
}

fn random_pi_pair_mod(
    rng: &mut TrialRng,
    d: &Arc<HilbertModule>,
    e: &Arc<HilbertModule>,
    f: &Arc<HilbertModule>,
    tol: &Tolerance,
) -> Result<(ModuleMap, ModuleMap)> {
    if rng.random_bool(COMMUTING_SHARE) {
        random_commuting_pair(rng, d, e, f, tol)
    } else {
        Ok((
            random_module_map(rng, e, f, MapKind::PartialIsometry, tol)?,
            random_module_map(rng, d, e, MapKind::PartialIsometry, tol)?,
        ))
    }
}

fn invariance(
    rng: &mut TrialRng,
    dim: usize,
    tol: &Tolerance,
    out: &mut TrialOutcome,
) -> Result<()> {
    let (algebra, max_lift) = module_setting(rng, dim);
    let d = Arc::new(random_module(rng, &algebra, max_lift, tol)?);
    let e = Arc::new(random_module(rng, &algebra, max_lift, tol)?);
    let f = Arc::new(random_module(rng, &algebra, max_lift, tol)?);
    let (v, w) = random_pi_pair_mod(rng, &d, &e, &f, tol)?;
    out.module_map("v", &v);
    out.module_map("w", &w);
    let r = product_invariance_criterion(&v, &w, tol)?;
    out.check(
        "product is a partial isometry iff π_v leaves wD invariant",
        r.agree(),
    );
    Ok(())
}

fn univthm(rng: &mut TrialRng, dim: usize, tol: &Tolerance, out: &mut TrialOutcome) -> Result<()> {
    let (algebra, max_lift) = module_setting(rng, dim);
    let e = Arc::new(random_module(rng, &algebra, max_lift, tol)?);
    let f = Arc::new(random_module(rng, &algebra, max_lift, tol)?);
    let c = random_module_map(rng, &e, &f, MapKind::Contraction, tol)?;
    out.module_map("c", &c);
    let r = contained_partial_isometry_mod(&c, tol)?;
    out.bound(
        "P_c closed under right multiplication",
        r.submodule.closure_residual(),
        tol.inclusion(),
    );
    out.bound(
        "P_c closed under addition",
        r.submodule.addition_residual(),
        tol.inclusion(),
    );
    let pi = is_partial_isometry_mod(&r.v, tol)?;
    out.check("c p_c is a partial isometry", pi.is_partial_isometry);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let x = random_element(rng, &e);
        let scale = x.frobenius_norm();
        if scale == 0.0 {
            continue;
        }
        let x = x.scale_real(1.0 / scale);
        worst = worst.max(domination_defect(&c, &r.p_c, &x, tol)?);
    }
    out.bound("⟨cx, cx⟩ - ⟨x, π_v x⟩ is positive", worst, tol.inclusion());
    out.bound(
        "⟨c(1 - p_c)y, c p_c x⟩ = 0",
        cross_orthogonality_residual(&c, &r.p_c),
        tol.inclusion(),
    );
    Ok(())
}

fn proposition(
    rng: &mut TrialRng,
    dim: usize,
    tol: &Tolerance,
    out: &mut TrialOutcome,
) -> Result<()> {
    let (algebra, max_lift) = module_setting(rng, dim);
    let modules: Vec<Arc<HilbertModule>> = (0..4)
        .map(|_| random_module(rng, &algebra, max_lift, tol).map(Arc::new))
        .collect::<Result<_>>()?;
    let (v, w) = random_pi_pair_mod(rng, &modules[0], &modules[1], &modules[2], tol)?;
    out.module_map("v", &v);
    out.module_map("w", &w);
    let r = final_proposition_check(&v, &w, tol)?;
    out.check("contained PDI of vw equals the composed PDIs", r.holds);
    out.bound(
        "domain mutual inclusion",
        r.domain_residual,
        tol.inclusion(),
    );

    let c1 = random_module_map(rng, &modules[0], &modules[1], MapKind::Contraction, tol)?;
    let c2 = random_module_map(rng, &modules[1], &modules[2], MapKind::Contraction, tol)?;
    let c3 = random_module_map(rng, &modules[2], &modules[3], MapKind::Contraction, tol)?;
    out.module_map("c1", &c1);
    out.module_map("c2", &c2);
    out.module_map("c3", &c3);
    let (a, b, c) = (
        contained_pdi(&c3, tol)?,
        contained_pdi(&c2, tol)?,
        contained_pdi(&c1, tol)?,
    );
    let left = compose_pdi(&compose_pdi(&a, &b, tol)?, &c, tol)?;
    let right = compose_pdi(&a, &compose_pdi(&b, &c, tol)?, tol)?;
    out.check("PDI composition is associative", left.same_as(&right, tol));
    let id_src = PartiallyDefinedIsometry::identity(modules[1].clone(), tol)?;
    let id_tgt = PartiallyDefinedIsometry::identity(modules[2].clone(), tol)?;
    out.check(
        "identity is right neutral",
        compose_pdi(&b, &id_src, tol)?.same_as(&b, tol),
    );
    out.check(
        "identity is left neutral",
        compose_pdi(&id_tgt, &b, tol)?.same_as(&b, tol),
    );
    Ok(())
}
