//! One function per subcommand; each returns text and JSON renderings of
//! the same report. Ray labels are 1-based in text and 0-based in JSON,
//! matching the model file.

use std::fmt::Write as _;

use qsheaf_core::deformation::{classify, local_freeness_check, polymology_from_basis, sr_ideal, LocalFreeness, TermKind, Witness};
use qsheaf_core::instanton::{sector as build_sector, sector_basis};
use qsheaf_core::lattice::CurveClass;
use qsheaf_core::poly::cache::{cached_groebner, GroebnerCache};
use qsheaf_core::poly::{Monomial, Polynomial};
use qsheaf_core::quantum::{
    correlator_in_sectors, correlator_series, is_fano, parse_w, psi_names, q_monomial, qsr_generators, series_string,
    verify_all, QuantumError, VerifyOptions,
};
use serde_json::{json, Value};

use crate::model::Model;
use crate::{CliError, REPORT_VERSION};

/// Seed of the local-freeness sampler; fixed so reports are reproducible.
const SEED: u64 = 0x5eed;

pub struct Report {
    pub text: String,
    pub json: Value,
    pub status: i32,
}

fn ok(command: &str, text: String, mut body: Value) -> Report {
    body["schema"] = json!(REPORT_VERSION);
    body["command"] = json!(command);
    Report { text, json: body, status: 0 }
}

fn quantum_err(e: QuantumError) -> CliError {
    CliError::Validation(format!("QuantumError: {e}"))
}

fn poly_text(m: &Model, p: &Polynomial) -> String {
    p.display_with(&psi_names(m.cl.pic_rank())).to_string()
}

fn mono_text(m: &Model, mono: &Monomial) -> String {
    poly_text(m, &Polynomial::term(mono.clone(), qsheaf_core::linalg::rat(1)))
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn class_json(m: &Model, b: &CurveClass) -> Value {
    json!({ "coords": m.cl.coords(b), "d": b.d(), "q": q_monomial(&m.cl, b) })
}

fn class_text(m: &Model, b: &CurveClass) -> String {
    format!("[{}] {} ({})", join(&m.cl.coords(b)), b, q_monomial(&m.cl, b))
}

pub fn parse_beta(m: &Model, text: &str) -> Result<CurveClass, CliError> {
    let coords = text
        .split(',')
        .map(|t| t.trim().parse::<i64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| CliError::Parse(format!("--beta {text:?}: expected comma-separated integers")))?;
    m.cl.curve_from_coords(&coords).map_err(|e| CliError::Validation(format!("LatticeError: {e}")))
}

pub fn analyze(m: &Model, trials: usize) -> Report {
    let (fan, cl) = (&m.fan, &m.cl);
    let mut t = String::new();
    writeln!(t, "rank {}  rays {}  maximal cones {}", fan.rank(), fan.num_rays(), fan.max_cones().len()).unwrap();
    for (i, r) in fan.rays().iter().enumerate() {
        writeln!(t, "  rho{} = ({})  [D{}] = ({})", i + 1, join(r), i + 1, join(cl.divisor_class(i))).unwrap();
    }
    writeln!(t, "h-vector ({})", join(&fan.h_vector())).unwrap();
    writeln!(t, "Picard rank {}; basis D{}", cl.pic_rank(), cl.basis_rays().iter().map(|r| (r + 1).to_string()).collect::<Vec<_>>().join(", D")).unwrap();
    let classes: Vec<String> = cl
        .equiv_classes()
        .iter()
        .map(|c| format!("c{}={{{}}}", c.id + 1, c.members.iter().map(|r| format!("rho{}", r + 1)).collect::<Vec<_>>().join(",")))
        .collect();
    writeln!(t, "equivalence classes {}", classes.join(" ")).unwrap();
    writeln!(t, "Mori generators:").unwrap();
    for g in cl.mori_generators() {
        writeln!(t, "  {}", class_text(m, g)).unwrap();
    }
    writeln!(t, "Mori basis unimodular: {}; Fano: {}", cl.mori_is_unimodular(), is_fano(cl)).unwrap();
    let rels = cl.primitive_relations(fan).ok();
    writeln!(t, "primitive collections:").unwrap();
    let mut prim_json = Vec::new();
    for k in fan.primitive_collections() {
        let rel = rels.as_ref().and_then(|rs| rs.iter().find(|r| r.collection == k));
        match rel {
            Some(r) => writeln!(t, "  {k}  beta_K {}", class_text(m, &r.beta)).unwrap(),
            None => writeln!(t, "  {k}").unwrap(),
        }
        prim_json.push(json!({ "rays": k.rays, "beta": rel.map(|r| class_json(m, &r.beta)) }));
    }

    let e = &m.deformation;
    let nonlinear = e.entries().iter().filter(|x| classify(fan, x.ray, &x.m) == TermKind::Nonlinear).count();
    writeln!(t, "deformation: {} entries ({} nonlinear), tangent bundle: {}", e.entries().len(), nonlinear, e.is_tangent()).unwrap();
    let lf = local_freeness_check(fan, e, trials, SEED);
    let (lf_text, lf_json, status) = match &lf {
        LocalFreeness::Pass { points, lines } => (
            format!("pass ({points} points, {lines} lines; probabilistic)"),
            json!({ "pass": true, "points": points, "lines": lines }),
            0,
        ),
        LocalFreeness::Fail(Witness::Point(x)) => {
            let x: Vec<String> = x.iter().map(|v| v.to_string()).collect();
            (format!("FAIL: rank drops at x = ({})", x.join(", ")), json!({ "pass": false, "point": x }), 2)
        }
        LocalFreeness::Fail(Witness::LineRoots { a, b, gcd }) => {
            let a: Vec<String> = a.iter().map(|v| v.to_string()).collect();
            let b: Vec<String> = b.iter().map(|v| v.to_string()).collect();
            let g = gcd.display_with(&["t".to_string()]).to_string();
            (
                format!("FAIL: rank drops on a + t*b at roots of {g}, a = ({}), b = ({})", a.join(", "), b.join(", ")),
                json!({ "pass": false, "line": { "a": a, "b": b, "gcd": g } }),
                2,
            )
        }
    };
    writeln!(t, "local freeness: {lf_text}").unwrap();

    let body = json!({
        "rank": fan.rank(),
        "rays": fan.rays(),
        "max_cones": fan.max_cones(),
        "h_vector": fan.h_vector(),
        "pic_rank": cl.pic_rank(),
        "basis_rays": cl.basis_rays(),
        "divisor_classes": (0..fan.num_rays()).map(|i| cl.divisor_class(i).to_vec()).collect::<Vec<_>>(),
        "equivalence_classes": cl.equiv_classes().iter().map(|c| c.members.clone()).collect::<Vec<_>>(),
        "mori_generators": cl.mori_generators().iter().map(|g| class_json(m, g)).collect::<Vec<_>>(),
        "mori_unimodular": cl.mori_is_unimodular(),
        "fano": is_fano(cl),
        "primitive_collections": prim_json,
        "deformation": { "entries": e.entries().len(), "nonlinear": nonlinear, "tangent": e.is_tangent() },
        "local_freeness": lf_json,
    });
    let mut r = ok("analyze", t, body);
    r.status = status;
    r
}

pub fn polymology(m: &Model, cache: Option<&dyn GroebnerCache>) -> Result<Report, CliError> {
    let ideal = sr_ideal(&m.fan, &m.cl, &m.lin);
    let basis = cached_groebner(&ideal, cache);
    let p = polymology_from_basis(&m.fan, basis).map_err(|e| CliError::Validation(format!("DeformationError: {e}")))?;
    let gens: Vec<String> = ideal.generators.iter().map(|g| poly_text(m, g)).collect();
    let gb: Vec<String> = p.basis.polys().iter().map(|g| poly_text(m, g)).collect();
    let mut t = String::new();
    writeln!(t, "dims {}", join(&p.dims)).unwrap();
    writeln!(t, "SR generators:").unwrap();
    for (k, g) in m.fan.primitive_collections().iter().zip(&gens) {
        writeln!(t, "  Q_{k} = {g}").unwrap();
    }
    writeln!(t, "Groebner basis (grevlex):").unwrap();
    for g in &gb {
        writeln!(t, "  {g}").unwrap();
    }
    writeln!(t, "top generator {}", mono_text(m, &p.generator)).unwrap();
    Ok(ok(
        "polymology",
        t,
        json!({ "dims": p.dims, "sr_generators": gens, "groebner_basis": gb, "generator": mono_text(m, &p.generator) }),
    ))
}

pub fn sector(m: &Model, beta: &CurveClass, cache: Option<&dyn GroebnerCache>) -> Result<Report, CliError> {
    let s = build_sector(&m.fan, &m.cl, &m.lin, beta);
    let gb = sector_basis(&s, m.cl.pic_rank(), cache);
    let dims = if s.n_beta >= 0 { gb.quotient_dims(s.n_beta as u32 + 1).ok() } else { None };
    let gens: Vec<String> = s.ideal_gens.iter().map(|g| poly_text(m, g)).collect();
    let gbs: Vec<String> = gb.polys().iter().map(|g| poly_text(m, g)).collect();
    let edges: Vec<String> = s.enhanced_edges.iter().map(|(r, i)| format!("(rho{},{})", r + 1, i)).collect();
    let mut t = String::new();
    writeln!(t, "beta {}", class_text(m, beta)).unwrap();
    writeln!(t, "effective {}  nonempty {}", s.effective, s.nonempty).unwrap();
    writeln!(t, "enhanced edges ({}): {}", edges.len(), edges.join(" ")).unwrap();
    let deg: Vec<String> = s.degenerate.iter().map(|r| format!("(rho{},0)", r + 1)).collect();
    writeln!(t, "degenerate edges: {}", if deg.is_empty() { "none".to_string() } else { deg.join(" ") }).unwrap();
    writeln!(t, "n_beta {}", s.n_beta).unwrap();
    writeln!(t, "h0 exponents {}", join(&s.exponents)).unwrap();
    writeln!(t, "ideal generators:").unwrap();
    for g in &gens {
        writeln!(t, "  {g}").unwrap();
    }
    if let Some(d) = &dims {
        writeln!(t, "graded dims {}", join(d)).unwrap();
    }
    Ok(ok(
        "sector",
        t,
        json!({
            "beta": class_json(m, beta),
            "effective": s.effective,
            "nonempty": s.nonempty,
            "enhanced_edges": s.enhanced_edges,
            "degenerate": s.degenerate,
            "n_beta": s.n_beta,
            "exponents": s.exponents,
            "ideal_generators": gens,
            "groebner_basis": gbs,
            "graded_dims": dims,
        }),
    ))
}

pub fn qsr(m: &Model) -> Result<Report, CliError> {
    let rels = qsr_generators(&m.fan, &m.cl, &m.lin).map_err(quantum_err)?;
    let mut t = String::new();
    let mut rows = Vec::new();
    for q in &rels {
        let shown = q.difference.display(&m.cl);
        writeln!(t, "{}: {}", q.collection(), shown).unwrap();
        rows.push(json!({
            "collection": q.collection().rays,
            "beta": class_json(m, &q.relation.beta),
            "lhs": poly_text(m, &q.lhs),
            "rhs": poly_text(m, &q.rhs),
            "relation": shown,
        }));
    }
    Ok(ok("qsr", t, json!({ "relations": rows })))
}

pub fn correlator(
    m: &Model,
    poly: &str,
    max_degree: i64,
    sectors: Option<Vec<CurveClass>>,
    cache: Option<&dyn GroebnerCache>,
) -> Result<Report, CliError> {
    let p = parse_w(&m.cl, poly).map_err(|e| CliError::Parse(format!("--poly: {e}")))?;
    let report = match sectors {
        Some(s) => correlator_in_sectors(&m.fan, &m.cl, &m.lin, &p, &s, m.options.anchor_bound, cache),
        None => correlator_series(&m.fan, &m.cl, &m.lin, &p, max_degree, m.options.anchor_bound, cache),
    }
    .map_err(quantum_err)?;
    let series = series_string(&m.cl, &report.series);
    let mut t = String::new();
    writeln!(t, "poly {}", poly_text(m, &p)).unwrap();
    writeln!(t, "anchor {}  generator {}", class_text(m, &report.anchor), mono_text(m, &report.generator)).unwrap();
    let mut rows = Vec::new();
    for v in &report.values {
        let note = v.reason.map(|r| format!("  ({r})")).unwrap_or_default();
        writeln!(t, "  {}: {}{}", class_text(m, &v.beta), v.lambda, note).unwrap();
        rows.push(json!({
            "beta": class_json(m, &v.beta),
            "value": v.lambda.to_string(),
            "zero_reason": v.reason.map(|r| r.to_string()),
        }));
    }
    writeln!(t, "series {series}").unwrap();
    Ok(ok(
        "correlator",
        t,
        json!({
            "poly": poly_text(m, &p),
            "anchor": class_json(m, &report.anchor),
            "generator": mono_text(m, &report.generator),
            "sectors": rows,
            "series": series,
        }),
    ))
}

pub fn verify(m: &Model, grid: i64, all: bool, cache: Option<&dyn GroebnerCache>) -> Result<Report, CliError> {
    let opts = VerifyOptions { grid, anchor_bound: m.options.anchor_bound, polynomial: true, correlator: all };
    let cases = verify_all(&m.fan, &m.cl, &m.lin, opts, cache).map_err(quantum_err)?;
    let failed = cases.iter().filter(|c| !c.passed()).count();
    let flag = |b: Option<bool>| match b {
        Some(true) => "pass",
        Some(false) => "FAIL",
        None => "-",
    };
    let mut t = String::new();
    writeln!(t, "grid c1<={grid}{}", if is_fano(&m.cl) { "" } else { " and Mori height<=grid" }).unwrap();
    let mut rows = Vec::new();
    for c in &cases {
        if all || !c.passed() {
            writeln!(
                t,
                "  K={} beta=[{}] anchor=[{}] exponents={} polynomial={} correlator={}",
                c.collection,
                join(&m.cl.coords(&c.beta)),
                join(&m.cl.coords(&c.anchor)),
                flag(Some(c.exponents)),
                flag(c.polynomial),
                flag(c.correlator)
            )
            .unwrap();
        }
        rows.push(json!({
            "collection": c.collection.rays,
            "beta": m.cl.coords(&c.beta),
            "anchor": m.cl.coords(&c.anchor),
            "exponents": c.exponents,
            "polynomial": c.polynomial,
            "correlator": c.correlator,
            "pass": c.passed(),
        }));
    }
    writeln!(t, "{} cases, {} failed", cases.len(), failed).unwrap();
    let mut r = ok("verify", t, json!({ "grid": grid, "cases": rows, "failed": failed }));
    r.status = if failed == 0 { 0 } else { 2 };
    Ok(r)
}
