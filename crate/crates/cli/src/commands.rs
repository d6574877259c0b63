use std::path::Path;
use std::sync::Arc;

use ncdiff::algebra::{derivation_space, Algebra, Bimodule};
use ncdiff::connections::{
    bianchi as bianchi_checks, check_projection_curvature, connection_check as check_connection, curvature as curvature_of,
    find_projections, horizontal_forms, lambda_commutes_with_d, splitting_row_holds, Bundle, Projection, OPPOSITE_INVOLUTIVITY,
};
use ncdiff::derivations::{algebraic_bracket, fn_bracket as fn_bracket_of, FieldValuedForm, FieldValuedFormJson, IdentityCheck};
use ncdiff::forms::{de_rham, kernel_of_mu_n_spaces, Omega};
use ncdiff::group::GroupAction;
use ncdiff::hochschild::cohomology;
use ncdiff::linalg::Subspace;
use ncdiff::schouten::{
    nr_bracket as nr_bracket_of, poisson_bracket_hom_check, poisson_check, poisson_lattice_scan, MultiMap, MultiMapJson,
};
use ncdiff::verify::{self, Status, VerifyConfig};
use ncdiff::{dsl, Error, Execution, Matrix, Result};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::json;

use crate::report::{list, render, value_of, Header, Rendered};
use crate::{BaseChoice, Common, ModuleChoice, PairArgs, ProjectionArgs};

struct Input {
    label: String,
    algebra: Arc<Algebra>,
    action: Option<GroupAction>,
    om: Arc<Omega>,
    exec: Execution,
}

fn load(c: &Common) -> Result<Input> {
    if c.truncation == 0 {
        return Err(Error::Input("truncation N must be at least 1".into()));
    }
    let (label, loaded) = match (&c.builtin, &c.file) {
        (Some(b), _) => (b.clone(), dsl::load(&format!("builtin {b}"))?),
        (None, Some(path)) => {
            let loaded = dsl::load(&read(path)?)?;
            (loaded.name.clone(), loaded)
        }
        (None, None) => return Err(Error::Input("pass --builtin or --file".into())),
    };
    let exec = if c.sequential { Execution::Sequential } else { Execution::default() };
    Ok(Input { label, om: Omega::new(loaded.algebra.clone()), algebra: loaded.algebra, action: loaded.action, exec })
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    serde_json::from_str(&read(path)?).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn header<'a>(command: &'a str, c: &Common, input: &'a Input) -> Header<'a> {
    Header { command, algebra: &input.label, dim: input.algebra.dim(), seed: c.seed, truncation: c.truncation }
}

fn matrix_rows(m: &Matrix) -> Vec<Vec<String>> {
    (0..m.rows()).map(|r| m.row(r).iter().map(|x| x.to_string()).collect()).collect()
}

fn mark(holds: bool) -> &'static str {
    if holds {
        "ok  "
    } else {
        "FAIL"
    }
}

pub fn info(c: &Common) -> Result<Rendered> {
    let input = load(c)?;
    let a = &input.algebra;
    let omega_dims: Vec<usize> = (0..=c.truncation).map(|k| input.om.dim(k)).collect();
    let der_dim = derivation_space(a, &Bimodule::regular(a)).dim();
    let result = json!({
        "basis": a.names(),
        "dim": a.dim(),
        "commutative": a.is_commutative(),
        "center_dim": a.center().dim(),
        "omega_dims": omega_dims,
        "der_dim": der_dim,
    });
    let text = vec![
        format!("basis: {}", list(a.names())),
        format!("commutative: {}, center dim {}", a.is_commutative(), a.center().dim()),
        format!("Omega dims: {}", list(&omega_dims)),
        format!("Der dim: {der_dim}"),
    ];
    Ok(render(c.format, &header("info", c, &input), &result, &text, Vec::new()))
}

pub fn verify(c: &Common, trials: usize) -> Result<Rendered> {
    let input = load(c)?;
    let cfg = VerifyConfig { truncation: c.truncation, seed: c.seed, trials, exec: input.exec };
    let report = verify::run(&input.algebra, &input.label, input.action.clone(), &cfg)?;
    let mut text = Vec::with_capacity(report.checks.len() + 1);
    for ch in &report.checks {
        let tag = match ch.status {
            Status::Pass => "ok  ",
            Status::Fail => "FAIL",
            Status::Skipped => "skip",
        };
        let mut line = format!("{tag} {}: {}", ch.module, ch.name);
        if let Some(w) = &ch.witness {
            line.push_str(&format!(" ({w})"));
        }
        text.push(line);
    }
    text.push(format!("{} passed, {} failed, {} skipped", report.passed, report.failed, report.skipped));
    let witnesses = report.failures().map(|f| format!("{}: {}: {}", f.module, f.name, f.witness.as_deref().unwrap_or(""))).collect();
    Ok(render(c.format, &header("verify", c, &input), &report, &text, witnesses))
}

fn read_fvf(om: &Omega, path: &Path) -> Result<FieldValuedForm> {
    FieldValuedForm::from_json(om, &read_json::<FieldValuedFormJson>(path)?)
}

fn fvf_text(om: &Omega, k: &FieldValuedForm) -> Vec<String> {
    (0..om.m())
        .map(|i| {
            let terms: Vec<String> = k.delta(i).terms().map(|(idx, x)| format!("{x} {}", om.label(k.degree(), idx))).collect();
            let rhs = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
            format!("  K(d {}) = {rhs}", om.algebra().names()[i])
        })
        .collect()
}

fn fvf_bracket(
    command: &str,
    c: &Common,
    pair: &PairArgs,
    f: impl Fn(&Omega, &FieldValuedForm, &FieldValuedForm) -> Result<FieldValuedForm>,
) -> Result<Rendered> {
    let input = load(c)?;
    let om = &input.om;
    let (k, l) = (read_fvf(om, &pair.left)?, read_fvf(om, &pair.right)?);
    let b = f(om, &k, &l)?;
    let mut text = vec![format!("degree {}", b.degree())];
    text.extend(fvf_text(om, &b));
    Ok(render(c.format, &header(command, c, &input), &b.to_json(om), &text, Vec::new()))
}

pub fn fn_bracket(c: &Common, pair: &PairArgs) -> Result<Rendered> {
    fvf_bracket("fn-bracket", c, pair, |om, k, l| Ok(fn_bracket_of(om, k, l)))
}

pub fn alg_bracket(c: &Common, pair: &PairArgs) -> Result<Rendered> {
    fvf_bracket("alg-bracket", c, pair, algebraic_bracket)
}

fn read_map(a: &Arc<Algebra>, path: &Path) -> Result<MultiMap> {
    MultiMap::from_json(a, &read_json::<MultiMapJson>(path)?)
}

pub fn nr_bracket(c: &Common, pair: &PairArgs) -> Result<Rendered> {
    let input = load(c)?;
    let a = &input.algebra;
    let b = nr_bracket_of(&read_map(a, &pair.left)?, &read_map(a, &pair.right)?)?;
    let text = vec![format!("arity {}", b.arity()), format!("coords: {}", list(b.coords()))];
    Ok(render(c.format, &header("nr-bracket", c, &input), &b.to_json(), &text, Vec::new()))
}

fn projections(input: &Input, p: &ProjectionArgs) -> Result<(Vec<Projection>, bool)> {
    match &p.projection {
        Some(path) => Ok((vec![Projection::new(&input.om, read_fvf(&input.om, path)?)?], true)),
        None => {
            let s = find_projections(&input.om)?;
            Ok((s.projections, s.exhaustive))
        }
    }
}

#[derive(Serialize)]
struct CheckLine {
    name: String,
    holds: bool,
    expected: bool,
}

fn lines(checks: Vec<IdentityCheck>) -> Vec<CheckLine> {
    checks
        .into_iter()
        .map(|ch| CheckLine { expected: !OPPOSITE_INVOLUTIVITY.contains(&ch.name.as_str()), name: ch.name, holds: ch.holds })
        .collect()
}

fn check_text(i: usize, checks: &[CheckLine], text: &mut Vec<String>, witnesses: &mut Vec<String>) {
    for ch in checks {
        let note = if ch.expected { "" } else { " [reported only]" };
        text.push(format!("  {} {}{note}", mark(ch.holds), ch.name));
        if ch.expected && !ch.holds {
            witnesses.push(format!("projection {i}: {}", ch.name));
        }
    }
}

pub fn curvature(c: &Common, p: &ProjectionArgs) -> Result<Rendered> {
    let input = load(c)?;
    let om = &input.om;
    let (ps, exhaustive) = projections(&input, p)?;
    let (mut text, mut witnesses, mut out) =
        (vec![format!("{} projection(s), search exhaustive: {exhaustive}", ps.len())], Vec::new(), Vec::new());
    for (i, proj) in ps.iter().enumerate() {
        let cv = curvature_of(om, proj);
        let checks = lines(check_projection_curvature(om, proj, c.truncation.min(3))?);
        text.push(format!("projection {i}: rank {}, R = 0: {}, Rbar = 0: {}", proj.matrix().rank(), cv.r.is_zero(), cv.rbar.is_zero()));
        check_text(i, &checks, &mut text, &mut witnesses);
        out.push(json!({
            "index": i,
            "matrix": matrix_rows(proj.matrix()),
            "r_zero": cv.r.is_zero(),
            "rbar_zero": cv.rbar.is_zero(),
            "bracket": value_of(&cv.bracket.to_json(om)),
            "r": value_of(&cv.r.to_json(om)),
            "rbar": value_of(&cv.rbar.to_json(om)),
            "checks": value_of(&checks),
        }));
    }
    let result = json!({ "exhaustive": exhaustive, "projections": out });
    Ok(render(c.format, &header("curvature", c, &input), &result, &text, witnesses))
}

pub fn bianchi(c: &Common, p: &ProjectionArgs) -> Result<Rendered> {
    let input = load(c)?;
    let om = &input.om;
    let (ps, exhaustive) = projections(&input, p)?;
    let (mut text, mut witnesses, mut out) =
        (vec![format!("{} projection(s), search exhaustive: {exhaustive}", ps.len())], Vec::new(), Vec::new());
    for (i, proj) in ps.iter().enumerate() {
        let checks = lines(bianchi_checks(om, proj)?);
        text.push(format!("projection {i}:"));
        check_text(i, &checks, &mut text, &mut witnesses);
        out.push(json!({ "index": i, "matrix": matrix_rows(proj.matrix()), "checks": value_of(&checks) }));
    }
    let result = json!({ "exhaustive": exhaustive, "projections": out });
    Ok(render(c.format, &header("bianchi", c, &input), &result, &text, witnesses))
}

pub fn connection_check(c: &Common, chi: Option<&Path>, base: BaseChoice) -> Result<Rendered> {
    let input = load(c)?;
    let (a, om) = (&input.algebra, &input.om);
    let action = input.action.clone().unwrap_or_else(|| GroupAction::trivial(a));
    let bundle = match base {
        BaseChoice::Fixed => Bundle::from_action(action.clone()),
        BaseChoice::Center => Bundle::new(a.clone(), a.center())?,
        BaseChoice::Scalars => Bundle::new(a.clone(), Subspace::from_generators(a.dim(), [a.unit_coords()]))?,
    };
    let candidates = match chi {
        Some(path) => vec![read_fvf(om, path)?],
        None => find_projections(om)?.projections.into_iter().map(|p| p.form().clone()).collect(),
    };
    let splitting = splitting_row_holds(om, &bundle)?;
    let lambda = lambda_commutes_with_d(om, &action, c.truncation)?;
    let hor = horizontal_forms(om, &bundle, 1)?.dim();
    let mut text = vec![
        format!("base dim {}, horizontal 1-forms dim {hor}", bundle.base().dim()),
        format!("{} splitting row", mark(splitting)),
        format!("{} lambda_g commutes with d to degree {}", mark(lambda), c.truncation),
    ];
    let mut out = Vec::new();
    for (i, k) in candidates.iter().enumerate() {
        let r = check_connection(om, &bundle, k)?;
        text.push(format!(
            "candidate {i}: connection {}, idempotent {}, horizontal image {}, principal {}",
            r.is_connection,
            r.idempotent,
            r.image_is_horizontal,
            r.principal.map_or("n/a".to_string(), |b| b.to_string())
        ));
        out.push(json!({ "index": i, "report": value_of(&r) }));
    }
    let mut witnesses = Vec::new();
    if !splitting {
        witnesses.push("splitting row: dim Omega_1 - dim Omega^hor_1 != dim A(x)_B A - dim A".to_string());
    }
    if !lambda {
        witnesses.push("lambda_g does not commute with d".to_string());
    }
    let result = json!({
        "base_dim": bundle.base().dim(),
        "horizontal_dim": hor,
        "splitting_row": splitting,
        "lambda_commutes_with_d": lambda,
        "candidates": out,
    });
    Ok(render(c.format, &header("connection-check", c, &input), &result, &text, witnesses))
}

pub fn hochschild(c: &Common, degree: Option<usize>, module: ModuleChoice) -> Result<Rendered> {
    let input = load(c)?;
    let a = &input.algebra;
    let (tag, m) = match module {
        ModuleChoice::Regular => ("A", Bimodule::regular(a)),
        ModuleChoice::Free => ("A(x)A", Bimodule::free(a)),
    };
    let degrees: Vec<usize> = match degree {
        Some(n) => vec![n],
        None => (0..=c.truncation).collect(),
    };
    let (mut text, mut witnesses, mut reports) = (vec![format!("M = {tag}")], Vec::new(), Vec::new());
    for n in degrees {
        let r = cohomology(&input.om, &m, n, input.exec)?;
        text.push(format!(
            "{} n = {n}: dim Hom {}, dim im I* {}, H^n forms {}, H^n complex {}",
            mark(r.agree),
            r.dim_hom,
            r.dim_image_istar,
            r.dim_hn_forms,
            r.dim_hn_complex
        ));
        if !r.agree {
            witnesses.push(format!("n = {n}: forms route {} vs complex {}", r.dim_hn_forms, r.dim_hn_complex));
        }
        reports.push(r);
    }
    let result = json!({ "module": tag, "reports": value_of(&reports) });
    Ok(render(c.format, &header("hochschild", c, &input), &result, &text, witnesses))
}

pub fn derham(c: &Common) -> Result<Rendered> {
    let input = load(c)?;
    let r = de_rham(&input.om, c.truncation, input.exec)?;
    let text = vec![
        format!("form dims: {}", list(&r.form_dims)),
        format!("commutator dims: {}", list(&r.commutator_dims)),
        format!("homology below N: {}", list(&r.homology)),
        format!("top degree lower bound: {}", r.top_lower_bound),
        format!("{} dbar o dbar = 0", mark(r.d_squared_zero)),
        format!("{} d preserves graded commutators", mark(r.d_preserves_commutators)),
    ];
    let mut witnesses = Vec::new();
    if !r.d_squared_zero {
        witnesses.push("dbar o dbar != 0".to_string());
    }
    if !r.d_preserves_commutators {
        witnesses.push("d does not preserve graded commutators".to_string());
    }
    Ok(render(c.format, &header("derham", c, &input), &r, &text, witnesses))
}

pub fn poisson(c: &Common, mu: Option<&Path>, scan: Option<i64>, max_points: usize) -> Result<Rendered> {
    let input = load(c)?;
    let a = &input.algebra;
    let (source, mu) = match mu {
        Some(path) => (path.display().to_string(), read_map(a, path)?),
        None => ("commutator".to_string(), MultiMap::commutator(a)),
    };
    if mu.arity() != 2 {
        return Err(Error::Input(format!("a Poisson candidate is bilinear, got arity {}", mu.arity())));
    }
    let v = poisson_check(&mu)?;
    let bracket_hom = if v.is_poisson() { Some(poisson_bracket_hom_check(&mu)?) } else { None };
    let mut text = vec![
        format!("candidate: {source}"),
        format!("{} skew", mark(v.skew)),
        format!("{} biderivation", mark(v.biderivation)),
        format!("{} Jacobi", mark(v.jacobi)),
    ];
    if let Some(h) = bracket_hom {
        text.push(format!("{} mu(mu(a,b),c) = mu(a,mu(b,c)) - mu(b,mu(a,c))", mark(h)));
    }
    let scan_json = match scan {
        Some(bound) => {
            let s = poisson_lattice_scan(a, bound, max_points)?;
            text.push(format!(
                "scan: {} candidates dim, {} searched, {} Poisson found, exhaustive {}",
                s.candidates_dim,
                s.searched,
                s.found.len(),
                s.exhaustive
            ));
            let found: Vec<MultiMapJson> = s.found.iter().map(MultiMap::to_json).collect();
            json!({ "candidates_dim": s.candidates_dim, "searched": s.searched, "exhaustive": s.exhaustive, "found": value_of(&found) })
        }
        None => serde_json::Value::Null,
    };
    let mut witnesses = Vec::new();
    if !v.is_poisson() {
        witnesses.push(format!("{source}: skew {}, biderivation {}, jacobi {}", v.skew, v.biderivation, v.jacobi));
    }
    if bracket_hom == Some(false) {
        witnesses.push(format!("{source}: bracket expansion fails"));
    }
    let result = json!({
        "candidate": source,
        "verdict": value_of(&v),
        "is_poisson": v.is_poisson(),
        "bracket_expansion": bracket_hom,
        "scan": scan_json,
    });
    Ok(render(c.format, &header("poisson-check", c, &input), &result, &text, witnesses))
}

pub fn kernel_mu_n(c: &Common) -> Result<Rendered> {
    let input = load(c)?;
    let (mut text, mut witnesses, mut out) = (Vec::new(), Vec::new(), Vec::new());
    for n in 2..=c.truncation.max(2) {
        let (lhs, rhs) = kernel_of_mu_n_spaces(&input.algebra, n)?;
        let equal = lhs == rhs;
        text.push(format!("{} n = {n}: dim ker mu^n {}, dim of the sum {}", mark(equal), lhs.dim(), rhs.dim()));
        if !equal {
            witnesses.push(format!("n = {n}: ker mu^n has dim {}, the sum {}", lhs.dim(), rhs.dim()));
        }
        out.push(json!({ "n": n, "dim_kernel": lhs.dim(), "dim_sum": rhs.dim(), "equal": equal }));
    }
    let result = json!({ "degrees": out });
    Ok(render(c.format, &header("kernel-mu-n", c, &input), &result, &text, witnesses))
}
