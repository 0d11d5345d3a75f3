//! Acceptance suite. Runs as a plain binary (`harness = false`) so the
//! per-criterion PASS/FAIL lines are always printed; exits nonzero if any
//! criterion fails.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use piso::hilbert_module::{
    classify_mod, complement, contained_partial_isometry_mod, cross_orthogonality_residual,
    domination_defect, is_partial_isometry_mod, isometric_submodule, operator_map,
    product_invariance_criterion, random::*, HilbertModule, ModuleMap, Submodule,
};
use piso::linalg::{
    orthogonal_projection, psd_order_leq, spectral_norm, ComplexMatrix, Subspace, Tolerance, C64,
};
use piso::partial_isometry::{
    classify, contained_partial_isometry, dot_compose, dot_compose_detailed, isometric_subspace,
    product_criterion,
};
use piso::pdf_sets::{
    all_injective_partial_fns, compose_pdf, random_partial_fn, to_partial_isometry, FiniteSet,
};
use piso::pdi::final_proposition_check;
use piso::random::{
    commuting_pair, random_contraction, random_idempotent, random_partial_isometry,
    random_subspace_of, trial_rng, TrialRng,
};
use rand::Rng;

const MASTER_SEED: u64 = 20_241;

type Outcome = Result<String, String>;

fn tol() -> Tolerance {
    Tolerance::default().with_eq(1e-8).unwrap()
}

fn run(n: usize, name: &str, limit: Option<Duration>, body: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let result = body();
    let elapsed = start.elapsed();
    let (mut ok, mut detail) = match result {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    if let Some(limit) = limit {
        if elapsed > limit {
            ok = false;
            detail = format!("{detail}; exceeded {:.0} s", limit.as_secs_f64());
        }
    }
    let tag = if ok { "PASS" } else { "FAIL" };
    println!(
        "{tag} [{n:>2}] {name}: {detail} ({:.2} s)",
        elapsed.as_secs_f64()
    );
    ok
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: piso::Error) -> String {
    e.to_string()
}

fn rng(criterion: u64, trial: usize) -> TrialRng {
    trial_rng(MASTER_SEED + criterion, trial as u64)
}

fn pi_pair(rng: &mut TrialRng, f: usize, e: usize, d: usize) -> (ComplexMatrix, ComplexMatrix) {
    if rng.random_bool(0.3) {
        commuting_pair(rng, f, e, d)
    } else {
        (
            random_partial_isometry(rng, f, e),
            random_partial_isometry(rng, e, d),
        )
    }
}

fn criterion_1() -> Outcome {
    let tol = tol();
    let (mut worst, mut agreeing) = (0.0_f64, 0);
    for t in 0..500 {
        let mut rng = rng(1, t);
        let (f, e, d) = (
            rng.random_range(2..=6),
            rng.random_range(2..=6),
            rng.random_range(2..=6),
        );
        let (v, w) = pi_pair(&mut rng, f, e, d);
        let pc = product_criterion(&v, &w, &tol).map_err(err)?;
        ensure(pc.all_agree(), || {
            format!("trial {t}: criteria disagree: {pc:?}")
        })?;
        if pc.product_is_pi {
            agreeing += 1;
            let r = pc.residuals;
            worst = worst.max(
                r.product_is_pi
                    .max(r.idempotent)
                    .max(r.self_adjoint)
                    .max(r.commutator),
            );
        }
    }
    ensure(worst <= 1e-8, || format!("residual {worst:.2e} above 1e-8"))?;
    Ok(format!(
        "500 pairs agree, {agreeing} partial-isometry products, worst residual {worst:.2e}"
    ))
}

fn criterion_2() -> Outcome {
    let tol = tol();
    let mut worst: f64 = 0.0;
    let (mut inside, mut outside) = (0, 0);
    for t in 0..300 {
        let mut rng = rng(2, t);
        let (m, n) = (rng.random_range(1..=6), rng.random_range(1..=6));
        let c = random_contraction(&mut rng, m, n);
        let cp = contained_partial_isometry(&c, &tol).map_err(err)?;
        let d = (&cp.v.adjoint() * &cp.v).distance(&cp.p_c);
        worst = worst.max(d);
        let cc = (&c.adjoint() * &c).hermitian_part();
        ensure(psd_order_leq(&cp.p_c, &cc, &tol).map_err(err)?, || {
            format!("trial {t}: p_c is not below c*c")
        })?;

        let s = &cp.subspace;
        if inside < 100 && !s.is_zero() {
            let k = rng.random_range(1..=s.dim());
            let q = orthogonal_projection(&Subspace::span(
                n,
                &random_subspace_of(&mut rng, s, k),
                &tol,
            ));
            let cq = &c * &q;
            let dq = (&cq.adjoint() * &cq).distance(&q);
            ensure(dq <= 1e-8, || {
                format!("trial {t}: subprojection residual {dq:.2e}")
            })?;
            inside += 1;
        }
        let comp = s.complement();
        if outside < 100 && !comp.is_zero() {
            let out_dir = &random_subspace_of(&mut rng, &comp, 1)[0];
            let dir: Vec<C64> = if s.is_zero() {
                out_dir.clone()
            } else {
                let u = &random_subspace_of(&mut rng, s, 1)[0];
                let a = rng.random_range(std::f64::consts::FRAC_PI_4..std::f64::consts::FRAC_PI_2);
                u.iter()
                    .zip(out_dir)
                    .map(|(x, y)| x * a.cos() + y * a.sin())
                    .collect()
            };
            let q = orthogonal_projection(&Subspace::span(n, &[dir], &tol));
            let cq = &c * &q;
            let dq = (&cq.adjoint() * &cq).distance(&q);
            ensure(dq > tol.eq, || {
                format!("trial {t}: projection leaving S is isometric ({dq:.2e})")
            })?;
            outside += 1;
        }
    }
    ensure(worst <= 1e-8, || {
        format!("(c p_c)*(c p_c) - p_c = {worst:.2e}")
    })?;
    ensure(inside == 100 && outside == 100, || {
        format!("only {inside} subprojections and {outside} outside projections generated")
    })?;
    Ok(format!(
        "300 contractions, worst residual {worst:.2e}, 100 + 100 projections"
    ))
}

fn criterion_3() -> Outcome {
    let tol = tol();
    let mut worst: f64 = 0.0;
    for t in 0..300 {
        let mut rng = rng(3, t);
        let dims: Vec<usize> = (0..4).map(|_| rng.random_range(2..=5)).collect();
        let (u, v) = pi_pair(&mut rng, dims[0], dims[1], dims[2]);
        let w = random_partial_isometry(&mut rng, dims[2], dims[3]);
        let left = dot_compose(&dot_compose(&u, &v, &tol).map_err(err)?, &w, &tol).map_err(err)?;
        let right = dot_compose(&u, &dot_compose(&v, &w, &tol).map_err(err)?, &tol).map_err(err)?;
        worst = worst.max(left.distance(&right));
    }
    ensure(worst <= 1e-7, || {
        format!("associativity defect {worst:.2e}")
    })?;
    Ok(format!("300 triples, worst defect {worst:.2e}"))
}

fn criterion_4() -> Outcome {
    let mut exhaustive = 0usize;
    for a in 0..=3 {
        for b in 0..=3 {
            for c in 0..=3 {
                let (sa, sb, sc) = (
                    FiniteSet::numbered("a", a),
                    FiniteSet::numbered("b", b),
                    FiniteSet::numbered("c", c),
                );
                let gs = all_injective_partial_fns(&sa, &sb);
                let fs = all_injective_partial_fns(&sb, &sc);
                for f in &fs {
                    let vf = to_partial_isometry(f);
                    for g in &gs {
                        let fg = compose_pdf(f, g).map_err(err)?;
                        ensure(
                            to_partial_isometry(&fg) == &vf * &to_partial_isometry(g),
                            || format!("v_(f∘g) != v_f v_g at sizes {a}, {b}, {c}"),
                        )?;
                        exhaustive += 1;
                    }
                }
            }
        }
    }
    for t in 0..1000 {
        let mut rng = rng(4, t);
        let sizes: Vec<usize> = (0..3).map(|_| rng.random_range(0..=6)).collect();
        let (sa, sb, sc) = (
            FiniteSet::numbered("a", sizes[0]),
            FiniteSet::numbered("b", sizes[1]),
            FiniteSet::numbered("c", sizes[2]),
        );
        let density = rng.random_range(0.0..=1.0);
        let g = random_partial_fn(&mut rng, &sa, &sb, density);
        let density = rng.random_range(0.0..=1.0);
        let f = random_partial_fn(&mut rng, &sb, &sc, density);
        let fg = compose_pdf(&f, &g).map_err(err)?;
        ensure(
            to_partial_isometry(&fg) == &to_partial_isometry(&f) * &to_partial_isometry(&g),
            || format!("random instance {t} differs"),
        )?;
    }
    Ok(format!(
        "{exhaustive} exhaustive compositions and 1000 random ones, zero error"
    ))
}

fn criterion_5() -> Outcome {
    let tol = tol();
    let mut worst: f64 = 0.0;
    let mut rejected = 0;
    let (mut matrices, mut modules) = (0, 0);
    let mut t = 0;
    while matrices < 250 {
        let mut rng = rng(5, t);
        t += 1;
        let n = rng.random_range(1..=6);
        let rank = rng.random_range(0..=n);
        let scale = if rng.random_bool(0.5) {
            0.0
        } else {
            rng.random_range(1e-3..1.0)
        };
        let e = random_idempotent(&mut rng, n, rank, scale);
        ensure((&e * &e).distance(&e) <= 1e-10, || {
            "generator gave a non-idempotent".into()
        })?;
        if spectral_norm(&e) > 1.0 + tol.eq {
            rejected += 1;
            continue;
        }
        worst = worst.max(e.distance(&e.adjoint()));
        matrices += 1;
    }
    for t in 0..250 {
        let mut rng = rng(50, t);
        let algebra = random_algebra(&mut rng, 3, 3);
        let e = Arc::new(random_module(&mut rng, &algebra, 8, &tol).map_err(err)?);
        let seeds: Vec<ComplexMatrix> = (0..rng.random_range(0..=2))
            .map(|_| random_element(&mut rng, &e))
            .collect();
        let s = Submodule::generated_by(e.clone(), &seeds, &tol).map_err(err)?;
        let p = complement(&s, &tol)
            .map_err(err)?
            .projection
            .ok_or_else(|| format!("module trial {t}: submodule not complemented"))?;
        ensure(p.is_contraction(&tol), || {
            format!("module trial {t}: projection is not contractive")
        })?;
        let pp = p.compose(&p, &tol).map_err(err)?;
        ensure(pp.distance(&p) <= 1e-8, || {
            format!("module trial {t}: not idempotent")
        })?;
        worst = worst.max(p.lift().distance(&p.lift().adjoint()));
        modules += 1;
    }
    ensure(worst <= 1e-8, || format!("‖e - e*‖ = {worst:.2e}"))?;
    Ok(format!(
        "{matrices} operator and {modules} module idempotents ({rejected} non-contractive skipped), worst ‖e - e*‖ {worst:.2e}"
    ))
}

fn module_triple(rng: &mut TrialRng, tol: &Tolerance) -> Result<Vec<Arc<HilbertModule>>, String> {
    let algebra = random_algebra(rng, 3, 3);
    (0..3)
        .map(|_| {
            random_module(rng, &algebra, 8, tol)
                .map(Arc::new)
                .map_err(err)
        })
        .collect()
}

fn module_pi_pair(
    rng: &mut TrialRng,
    m: &[Arc<HilbertModule>],
    tol: &Tolerance,
) -> Result<(ModuleMap, ModuleMap), String> {
    if rng.random_bool(0.3) {
        random_commuting_pair(rng, &m[0], &m[1], &m[2], tol).map_err(err)
    } else {
        Ok((
            random_module_map(rng, &m[1], &m[2], MapKind::PartialIsometry, tol).map_err(err)?,
            random_module_map(rng, &m[0], &m[1], MapKind::PartialIsometry, tol).map_err(err)?,
        ))
    }
}

fn criterion_6() -> Outcome {
    let tol = tol();
    let mut products = 0;
    for t in 0..300 {
        let mut rng = rng(6, t);
        let m = module_triple(&mut rng, &tol)?;
        let (v, w) = module_pi_pair(&mut rng, &m, &tol)?;
        let r = product_invariance_criterion(&v, &w, &tol).map_err(err)?;
        ensure(r.product_is_pi == r.range_invariant, || {
            format!("trial {t}: {r:?}")
        })?;
        products += usize::from(r.product_is_pi);
    }
    Ok(format!(
        "300 pairs agree, {products} partial-isometry products"
    ))
}

fn criterion_7() -> Outcome {
    let tol = tol();
    let (mut closure, mut wdom, mut wcomm) = (0.0_f64, 0.0_f64, 0.0_f64);
    for t in 0..200 {
        let mut rng = rng(7, t);
        let m = module_triple(&mut rng, &tol)?;
        let c =
            random_module_map(&mut rng, &m[0], &m[1], MapKind::Contraction, &tol).map_err(err)?;
        let r = contained_partial_isometry_mod(&c, &tol).map_err(err)?;
        closure = closure
            .max(r.submodule.closure_residual())
            .max(r.submodule.addition_residual());
        ensure(
            is_partial_isometry_mod(&r.v, &tol)
                .map_err(err)?
                .is_partial_isometry,
            || format!("trial {t}: c p_c is not a partial isometry"),
        )?;
        for _ in 0..20 {
            let x = random_element(&mut rng, &m[0]);
            let s = x.frobenius_norm();
            if s > 0.0 {
                wdom = wdom
                    .max(domination_defect(&c, &r.p_c, &x.scale_real(1.0 / s), &tol).map_err(err)?);
            }
        }
        wcomm = wcomm.max(cross_orthogonality_residual(&c, &r.p_c));
    }
    ensure(closure <= 1e-8, || {
        format!("closure residual {closure:.2e}")
    })?;
    ensure(wdom <= 1e-8, || format!("positivity defect {wdom:.2e}"))?;
    ensure(wcomm <= 1e-8, || {
        format!("orthogonality residual {wcomm:.2e}")
    })?;
    Ok(format!(
        "200 contractions, closure {closure:.2e}, positivity defect {wdom:.2e}, orthogonality {wcomm:.2e}"
    ))
}

fn criterion_8() -> Outcome {
    let tol = tol();
    let mut worst: f64 = 0.0;
    for t in 0..200 {
        let mut rng = rng(8, t);
        let m = module_triple(&mut rng, &tol)?;
        let (v, w) = module_pi_pair(&mut rng, &m, &tol)?;
        let r = final_proposition_check(&v, &w, &tol).map_err(err)?;
        ensure(r.holds, || {
            format!("trial {t}: contained PDI differs from the composition")
        })?;
        worst = worst.max(r.domain_residual);
    }
    ensure(worst <= 1e-8, || format!("domain residual {worst:.2e}"))?;
    Ok(format!("200 pairs, worst domain residual {worst:.2e}"))
}

fn criterion_9() -> Outcome {
    let tol = Tolerance::default();
    let e1 = ComplexMatrix::from_real_diag(&[1.0, 0.0]);
    let half = ComplexMatrix::from_real_diag(&[1.0, 0.5]);

    let cp = contained_partial_isometry(&half, &tol).map_err(err)?;
    let d1 = cp.p_c.distance(&e1);
    ensure(d1 <= 1e-12, || format!("Hilbert-space p_c off by {d1:.2e}"))?;

    let m2 = Arc::new(HilbertModule::matrix_algebra(2, &tol).map_err(err)?);
    let c = ModuleMap::from_lift(m2.clone(), m2.clone(), &half, &tol).map_err(err)?;
    let pc = isometric_submodule(&c, &tol).map_err(err)?;
    let g = m2.generators();
    let second_row_zero = Submodule::from_elements(m2.clone(), &g[..2], &tol).map_err(err)?;
    ensure(pc.same_as(&second_row_zero, 1e-12), || {
        "module P_c is not the second-row-zero matrices".into()
    })?;

    let w = ComplexMatrix::from_real(&[&[0.5, 0.5], &[0.5, 0.5]]);
    let dc = dot_compose_detailed(&e1, &w, &tol).map_err(err)?;
    let d3 = dc.result.frobenius_norm();
    ensure(d3 <= 1e-12, || format!("v·w has norm {d3:.2e}"))?;
    ensure(!classify(&half, &tol).is_partial_isometry, || {
        "diag(1, 0.5) classified as partial isometry".into()
    })?;
    Ok(format!(
        "p_c off by {d1:.1e}, module P_c exact, ‖v·w‖ = {d3:.1e}"
    ))
}

fn criterion_10() -> Outcome {
    let tol = tol();
    let mut worst: f64 = 0.0;
    for t in 0..100 {
        let mut rng = rng(10, t);
        let (m, n, k) = (
            rng.random_range(1..=5),
            rng.random_range(1..=5),
            rng.random_range(1..=5),
        );
        let c = random_contraction(&mut rng, m, n);
        let (v, w) = pi_pair(&mut rng, m, n, k);
        let (cm, vm, wm) = (
            operator_map(&c, &tol).map_err(err)?,
            operator_map(&v, &tol).map_err(err)?,
            operator_map(&w, &tol).map_err(err)?,
        );
        ensure(cm.source().algebra().block_sizes() == [1], || {
            "operator module is not over C".into()
        })?;
        ensure(classify(&c, &tol) == classify_mod(&cm, &tol), || {
            format!("trial {t}: classes differ")
        })?;
        let s = isometric_subspace(&c, &tol).map_err(err)?;
        let sm = isometric_submodule(&cm, &tol).map_err(err)?;
        ensure(s.same_as(sm.space(), 1e-8), || {
            format!("trial {t}: isometric subspaces differ")
        })?;
        let cp = contained_partial_isometry(&c, &tol).map_err(err)?;
        let cpm = contained_partial_isometry_mod(&cm, &tol).map_err(err)?;
        worst = worst
            .max(cp.v.distance(cpm.v.lift()))
            .max(cp.p_c.distance(cpm.p_c.lift()));
        let pc = product_criterion(&v, &w, &tol).map_err(err)?;
        let pm = product_invariance_criterion(&vm, &wm, &tol).map_err(err)?;
        ensure(pc.product_is_pi == pm.product_is_pi && pm.agree(), || {
            format!("trial {t}: product criteria differ")
        })?;
    }
    ensure(worst <= 1e-8, || {
        format!("contained partial isometries differ by {worst:.2e}")
    })?;
    Ok(format!("100 runs agree, worst difference {worst:.2e}"))
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let results = [
        run(
            1,
            "product criterion equivalence",
            Some(secs(10)),
            criterion_1,
        ),
        run(
            2,
            "contained partial isometry of a contraction",
            Some(secs(10)),
            criterion_2,
        ),
        run(
            3,
            "associativity of the dot composition",
            Some(secs(20)),
            criterion_3,
        ),
        run(
            4,
            "partial functions to partial isometries",
            Some(secs(5)),
            criterion_4,
        ),
        run(
            5,
            "contractive idempotents are projections",
            None,
            criterion_5,
        ),
        run(
            6,
            "module product criterion and range invariance",
            Some(secs(30)),
            criterion_6,
        ),
        run(7, "module contained partial isometry", None, criterion_7),
        run(8, "contained PDI of a product", None, criterion_8),
        run(9, "worked examples", None, criterion_9),
        run(10, "scalar specialization", None, criterion_10),
    ];
    let passed = results.iter().filter(|&&ok| ok).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
