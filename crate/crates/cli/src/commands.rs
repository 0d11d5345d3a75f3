//! The `classify`, `compose` and `contained` commands.

use std::path::Path;

use clap::ValueEnum;
use piso::hilbert_module::{
    classify_mod, contained_partial_isometry_mod, is_partial_isometry_mod, operator_map,
    product_invariance_criterion, ModuleMap,
};
use piso::io::{ModuleMapFile, PdiFile};
use piso::linalg::{ComplexMatrix, Tolerance, C64};
use piso::partial_isometry::{
    classify, contained_partial_isometry, dot_compose_detailed, nearest_partial_isometry,
    product_criterion, OperatorClass,
};
use piso::pdf_sets::{classify_pdf, compose_pdf, to_partial_isometry};
use piso::pdi::{compose_pdi, contained_pdi};
use serde::Serialize;

use crate::error::{code, CliError};
use crate::input::{to_json, write_json, Input};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Plain product `vw`.
    Product,
    /// The partial isometry `vw p_{v,w}` contained in `vw`.
    Dot,
    /// Composition of partially defined isometries or partial functions.
    Pdi,
}

fn fmt_real(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.6}")
        .trim_end_matches('0')
        .trim_end_matches('.')
        .to_string()
}

fn fmt_entry(z: C64) -> String {
    if z.im == 0.0 {
        fmt_real(z.re)
    } else if z.re == 0.0 {
        format!("{}i", fmt_real(z.im))
    } else {
        let sign = if z.im < 0.0 { '-' } else { '+' };
        format!("{}{sign}{}i", fmt_real(z.re), fmt_real(z.im.abs()))
    }
}

fn print_matrix(label: &str, m: &ComplexMatrix) {
    println!("{label} ({} x {}):", m.rows(), m.cols());
    let cells: Vec<Vec<String>> = (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| fmt_entry(m[(i, j)])).collect())
        .collect();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(0);
    for row in cells {
        let row: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
        println!("  [{}]", row.join("  "));
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn print_class(c: &OperatorClass) {
    println!(
        "contraction: {}, projection: {}, isometry: {}, coisometry: {}, partial isometry: {}, unitary: {}",
        yes_no(c.is_contraction),
        yes_no(c.is_projection),
        yes_no(c.is_isometry),
        yes_no(c.is_coisometry),
        yes_no(c.is_partial_isometry),
        yes_no(c.is_unitary)
    );
}

#[derive(Serialize)]
struct ClassifyReport {
    kind: &'static str,
    summary: String,
    class: OperatorClass,
    #[serde(skip_serializing_if = "Option::is_none")]
    initial_projection: Option<ComplexMatrix>,
}

pub fn classify_cmd(input: &Input, json: bool, tol: &Tolerance) -> Result<u8, CliError> {
    let (class, initial) = match input {
        Input::Matrix(_) | Input::PartialFn(_) => {
            let a = input.operator().expect("operator input");
            let class = match input {
                Input::PartialFn(f) => classify_pdf(f),
                _ => classify(&a, tol),
            };
            let initial = class.is_partial_isometry.then(|| &a.adjoint() * &a);
            (class, initial)
        }
        Input::ModuleMap(c) => module_class(c, tol)?,
        Input::Pdi(p) => module_class(p.map(), tol)?,
    };
    let report = ClassifyReport {
        kind: input.kind(),
        summary: class.summary(),
        class,
        initial_projection: initial,
    };
    if json {
        print!("{}", to_json(&report));
        return Ok(code::PASS);
    }
    println!("{}", report.summary);
    println!("input: {}", report.kind);
    match input {
        Input::Matrix(m) => println!("shape: {} x {}", m.rows(), m.cols()),
        Input::PartialFn(f) => print_matrix("v_f", &to_partial_isometry(f)),
        Input::ModuleMap(c) => print_module_shape(c),
        Input::Pdi(p) => {
            print_module_shape(p.map());
            println!(
                "domain dimension: {}, isometry residual on the domain: {:.3e}",
                p.domain().dim(),
                p.isometry_residual()
            );
        }
    }
    print_class(&report.class);
    if let Some(p) = &report.initial_projection {
        print_matrix("initial projection", p);
    }
    Ok(code::PASS)
}

fn module_class(
    c: &ModuleMap,
    tol: &Tolerance,
) -> Result<(OperatorClass, Option<ComplexMatrix>), CliError> {
    let class = classify_mod(c, tol);
    let pi = is_partial_isometry_mod(c, tol)?;
    Ok((class, pi.initial_projection.map(|p| p.lift().clone())))
}

fn print_module_shape(c: &ModuleMap) {
    println!(
        "algebra blocks: {:?}; source dimension {}, target dimension {}",
        c.source().algebra().block_sizes(),
        c.source().dim(),
        c.target().dim()
    );
}

fn reprojected(a: ComplexMatrix, reproject: bool) -> ComplexMatrix {
    if reproject {
        nearest_partial_isometry(&a)
    } else {
        a
    }
}

fn require_composable(v: &ComplexMatrix, w: &ComplexMatrix) -> Result<(), CliError> {
    if v.cols() != w.rows() {
        return Err(CliError::new(
            code::SHAPE,
            format!(
                "cannot compose {} x {} with {} x {}",
                v.rows(),
                v.cols(),
                w.rows(),
                w.cols()
            ),
        ));
    }
    Ok(())
}

fn emit<T: Serialize>(out: Option<&Path>, value: &T, label: &str) -> Result<(), CliError> {
    match out {
        Some(path) => {
            write_json(path, value)?;
            println!("wrote {label} to {}", path.display());
        }
        None => print!("{}", to_json(value)),
    }
    Ok(())
}

fn emit_matrix(out: Option<&Path>, m: &ComplexMatrix) -> Result<(), CliError> {
    if out.is_none() {
        print_matrix("result", m);
    }
    if let Some(path) = out {
        emit(Some(path), m, "matrix")?;
    }
    Ok(())
}

pub fn compose_cmd(
    v: &Input,
    w: &Input,
    mode: Mode,
    out: Option<&Path>,
    reproject: bool,
    tol: &Tolerance,
) -> Result<u8, CliError> {
    match mode {
        Mode::Product | Mode::Dot => {
            if let (Some(a), Some(b)) = (v.operator(), w.operator()) {
                let (a, b) = (reprojected(a, reproject), reprojected(b, reproject));
                require_composable(&a, &b)?;
                return if mode == Mode::Product {
                    operator_product(&a, &b, out, tol)
                } else {
                    operator_dot(&a, &b, out, tol)
                };
            }
            if let (Input::ModuleMap(a), Input::ModuleMap(b)) = (v, w) {
                return module_compose(a, b, mode, out, tol);
            }
            Err(CliError::precondition(format!(
                "mode {mode:?} needs two operators (matrices or partial functions) or two module maps, got a {} and a {}",
                v.kind(),
                w.kind()
            ).to_lowercase()))
        }
        Mode::Pdi => match (v, w) {
            (Input::Pdi(a), Input::Pdi(b)) => {
                let c = compose_pdi(a, b, tol)?;
                println!("composed domain dimension: {}", c.domain().dim());
                emit(out, &PdiFile::from_pdi(&c), "PDI")?;
                Ok(code::PASS)
            }
            (Input::PartialFn(f), Input::PartialFn(g)) => {
                let fg = compose_pdf(f, g)?;
                println!("composed domain size: {}", fg.domain().len());
                emit(out, &fg, "partial function")?;
                Ok(code::PASS)
            }
            _ => Err(CliError::precondition(format!(
                "mode pdi needs two PDI files or two partial functions, got a {} and a {}",
                v.kind(),
                w.kind()
            ))),
        },
    }
}

fn operator_product(
    v: &ComplexMatrix,
    w: &ComplexMatrix,
    out: Option<&Path>,
    tol: &Tolerance,
) -> Result<u8, CliError> {
    let both_pi = classify(v, tol).is_partial_isometry && classify(w, tol).is_partial_isometry;
    if both_pi {
        let pc = product_criterion(v, w, tol)?;
        println!(
            "product already partial isometry: {}",
            yes_no(pc.product_is_pi)
        );
        println!(
            "v*v ww* idempotent: {}, a projection: {}, v*v and ww* commute: {}",
            yes_no(pc.idempotent),
            yes_no(pc.projection),
            yes_no(pc.projections_commute)
        );
    } else {
        println!("inputs are not both partial isometries; product criterion skipped");
    }
    emit_matrix(out, &(v * w))?;
    Ok(code::PASS)
}

fn operator_dot(
    v: &ComplexMatrix,
    w: &ComplexMatrix,
    out: Option<&Path>,
    tol: &Tolerance,
) -> Result<u8, CliError> {
    let dc = dot_compose_detailed(v, w, tol)?;
    println!(
        "product already partial isometry: {}",
        yes_no(classify(&dc.product, tol).is_partial_isometry)
    );
    if dc.projection_is_zero(tol) {
        println!("p_{{v,w}} = 0");
    } else {
        println!("p_{{v,w}} has rank {}", dc.p.trace().re.round());
    }
    emit_matrix(out, &dc.result)?;
    Ok(code::PASS)
}

fn module_compose(
    v: &ModuleMap,
    w: &ModuleMap,
    mode: Mode,
    out: Option<&Path>,
    tol: &Tolerance,
) -> Result<u8, CliError> {
    let both_pi = is_partial_isometry_mod(v, tol)?.is_partial_isometry
        && is_partial_isometry_mod(w, tol)?.is_partial_isometry;
    if mode == Mode::Dot && !both_pi {
        return Err(CliError::precondition(
            "dot composition needs two partial isometries",
        ));
    }
    let product = v.compose(w, tol)?;
    if both_pi {
        let r = product_invariance_criterion(v, w, tol)?;
        println!(
            "product already partial isometry: {}",
            yes_no(r.product_is_pi)
        );
        println!("π_v leaves wD invariant: {}", yes_no(r.range_invariant));
    }
    let result = if mode == Mode::Dot {
        contained_partial_isometry_mod(&product, tol)?.v
    } else {
        product
    };
    emit(out, &ModuleMapFile::from_map(&result), "module map")?;
    Ok(code::PASS)
}

pub fn contained_cmd(
    input: &Input,
    module: bool,
    out: Option<&Path>,
    tol: &Tolerance,
) -> Result<u8, CliError> {
    let map = match input {
        Input::ModuleMap(c) => c.clone(),
        Input::Matrix(_) | Input::PartialFn(_) => {
            let c = input.operator().expect("operator input");
            if module {
                operator_map(&c, tol)?
            } else {
                let cp = contained_partial_isometry(&c, tol)?;
                println!("isometric subspace dimension: {}", cp.subspace.dim());
                print_matrix("p_c", &cp.p_c);
                if out.is_none() {
                    print_matrix("c p_c", &cp.v);
                } else {
                    emit(out, &cp.v, "matrix")?;
                }
                return Ok(code::PASS);
            }
        }
        Input::Pdi(_) => {
            return Err(CliError::precondition(
                "contained needs a matrix, partial function or module map",
            ))
        }
    };
    let r = contained_partial_isometry_mod(&map, tol)?;
    println!("isometric submodule dimension: {}", r.submodule.dim());
    print_matrix("lift of p_c", r.p_c.lift());
    print_matrix("lift of c p_c", r.v.lift());
    if out.is_some() {
        emit(out, &PdiFile::from_pdi(&contained_pdi(&map, tol)?), "PDI")?;
    }
    Ok(code::PASS)
}
