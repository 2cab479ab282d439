use std::path::Path;

use rayon::prelude::*;
use serde_json::{json, Value};

use eds_core::cartan::{
    cartan_system, cauchy_generator, coframe_and_covering, compare_solutions, db_system, form_relations, leaf_chart,
    phi_from_y0, solve_i, solve_ii, verify_solution, SolutionChecks,
};
use eds_core::io::{rational_from_json, point_from_json, point_to_json, points_from_json};
use eds_core::jetclassify::{
    build_chart, classify_type, fiber_at, regularity_check, transversal_is_full, transversal_part, SolvedSystem, TypeLabel,
};
use eds_core::pfaffian::{cauchy_char, derived_agrees_with_flag, derived_flag, growth_at, normalize_field, weak_flag};
use eds_core::prolong::{self as pl, stratify, tower, transition_check, verify_adapted, ProlongOutcome};
use eds_core::symbolalg::{compare_with_flag, graded_symbol, graded_symbol_direct, match_model, symbol_setup};
use eds_core::symcore::{parse, var, Expr, RationalPoint};
use eds_core::Error;

macro_rules! val {
    ($e:expr) => {
        serde_json::to_value(&$e).expect("serializable")
    };
}

pub struct Output {
    pub report: Value,
    /// Domain-level failure to report with exit code 1.
    pub failure: Option<String>,
}

impl Output {
    fn ok(report: Value) -> Self {
        Output { report, failure: None }
    }
}

pub enum CliError {
    Input(String),
    Domain(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Domain(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Domain(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_input_error() {
            CliError::Input(e.to_string())
        } else {
            CliError::Domain(e.to_string())
        }
    }
}

type Res<T> = std::result::Result<T, CliError>;

fn read_file(path: &Path) -> Res<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn read_system(path: &Path) -> Res<SolvedSystem> {
    let text = read_file(path)?;
    SolvedSystem::parse_json(&text).map_err(|e| match e {
        Error::Input(m) => CliError::Input(format!("{}: {m}", path.display())),
        o => CliError::from(o),
    })
}

/// Inline JSON when the argument looks like JSON, a file path otherwise.
fn read_json(arg: &str) -> Res<Value> {
    let t = arg.trim_start();
    let text = if t.starts_with('{') || t.starts_with('[') { arg.to_string() } else { read_file(Path::new(arg))? };
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("invalid JSON: {e}")))
}

fn parse_expr(text: &str) -> Res<Expr> {
    parse(text).map_err(|e| CliError::Input(format!("`{text}`: {e}")))
}

fn max_depth() -> Res<usize> {
    match std::env::var("EDS_MAX_DEPTH") {
        Ok(v) => v.trim().parse().map_err(|_| CliError::Input(format!("EDS_MAX_DEPTH must be a positive integer, got `{v}`"))),
        Err(_) => Ok(3),
    }
}

pub fn classify(system: &Path, points: &str, verify: bool) -> Res<Output> {
    let sys = read_system(system)?;
    let r = build_chart(&sys)?;
    let pts = points_from_json(&read_json(points)?)?;
    let reports: Vec<_> = pts.par_iter().map(|p| classify_type(&r, &sys, p)).collect();
    let mut results = Vec::new();
    let mut failure = None;
    let mut consistent = true;
    for (p, rep) in pts.iter().zip(reports) {
        let rep = rep?;
        if let TypeLabel::Degenerate(why) = &rep.label {
            failure.get_or_insert_with(|| format!("degenerate point {}: {why}", point_to_json(p)));
        }
        consistent &= rep.cauchy_consistent;
        results.push(json!({ "point": point_to_json(p), "report": val!(rep) }));
    }
    let mut report = json!({ "system": val!(sys.to_json()), "results": results });
    if verify {
        let reg = regularity_check(&sys, &pts)?;
        report["verify"] = json!({ "regularity": val!(reg), "cauchy_consistent": consistent });
    }
    Ok(Output { report, failure })
}

pub fn fiber(system: &Path, points: &str, verify: bool) -> Res<Output> {
    let sys = read_system(system)?;
    let r = build_chart(&sys)?;
    let pts = points_from_json(&read_json(points)?)?;
    let fibers: Vec<_> = pts.par_iter().map(|p| fiber_at(&r, p)).collect();
    let mut results = Vec::new();
    for f in fibers {
        let f = f?;
        let mut v = val!(f);
        v["transversal_part"] = val!(transversal_part(&f));
        if verify {
            v["transversal_is_full"] = json!(transversal_is_full(&f));
        }
        results.push(v);
    }
    let mut report = json!({ "system": val!(sys.to_json()), "results": results });
    if verify {
        report["verify"] = json!({ "regularity": val!(regularity_check(&sys, &pts)?) });
    }
    Ok(Output::ok(report))
}

fn check_depth(depth: usize) -> Res<usize> {
    let cap = max_depth()?;
    if depth == 0 || depth > cap {
        return Err(CliError::Input(format!("depth must be between 1 and {cap} (EDS_MAX_DEPTH)")));
    }
    Ok(depth)
}

pub fn prolong(system: &Path, points: &str, depth: usize, verify: bool) -> Res<Output> {
    let depth = check_depth(depth)?;
    let sys = read_system(system)?;
    let r = build_chart(&sys)?;
    let pts = points_from_json(&read_json(points)?)?;
    let mut report = match pl::prolong(&r, &sys, &pts)? {
        ProlongOutcome::Trivial { label, fibers } => {
            return Ok(Output::ok(json!({ "trivial": { "type": val!(label), "fibers": val!(fibers) } })));
        }
        ProlongOutcome::Charts(p) => {
            let mut v = val!(p.report(&pts)?);
            if verify {
                let adapted = verify_adapted(&p.adapted).is_ok();
                v["verify"] = json!({
                    "adapted_coframe": adapted,
                    "transition": val!(transition_check(&p.transition)?),
                });
            }
            v
        }
    };
    if depth > 1 {
        let t = tower(&r, depth, 5, 0)?;
        let levels: Vec<Value> = t
            .levels
            .iter()
            .zip(&t.checks)
            .map(|(charts, check)| {
                json!({
                    "depth": check.depth,
                    "kernel_dims": val!(check.kernel_dims),
                    "charts": charts.iter().map(|c| json!({
                        "path": val!(c.path),
                        "theta": c.theta.to_string(),
                        "f": c.f.to_string(),
                    })).collect::<Vec<_>>(),
                })
            })
            .collect();
        report["tower"] = Value::Array(levels);
    }
    Ok(Output::ok(report))
}

pub fn symbol(system: Option<&Path>, sigma1: bool, point: &str, verify: bool) -> Res<Output> {
    let sys = match system {
        Some(p) => read_system(p)?,
        None => cartan_system(),
    };
    let r = build_chart(&sys)?;
    let p = pl::prolong_involutive(&r)?;
    let chart = if sigma1 { &p.nontransversal } else { &p.transversal };
    let mut pt = point_from_json(&read_json(point)?)?;
    if let std::collections::btree_map::Entry::Vacant(e) = pt.entry(var(&chart.fiber_var)) {
        e.insert(rational_from_json(&json!(0))?);
    }
    if let Some(missing) = chart.chart.coords().iter().find(|v| !pt.contains_key(*v)) {
        return Err(CliError::Input(format!("point lacks coordinate `{missing}`")));
    }
    let (filt, frame) = symbol_setup(chart)?;
    let g = graded_symbol(&filt, &frame, &pt)?;
    let m = match_model(&g)?;
    let mut report = val!(g.report(m.model));
    report["k"] = json!(m.k);
    report["full_match"] = json!(m.full_match);
    report["signs"] = val!(m.signs);
    report["stratum"] = val!(stratify(chart, &pt)?);
    report["point"] = point_to_json(&pt);
    if verify {
        let direct = graded_symbol_direct(&filt, &frame, &pt, None)?;
        let units = unit_functions(&pt, frame.fields.len());
        let rescaled = graded_symbol_direct(&filt, &frame, &pt, Some(&units))?;
        report["verify"] = json!({
            "direct_brackets_agree": direct == g,
            "rescaled_frame_agrees": rescaled == g,
            "antisymmetric": g.antisymmetric(),
            "jacobi": g.jacobi(),
            "graded": g.graded(),
            "bracket_compatible": filt.bracket_compatible(&frame.fields),
            "weak_flag": val!(compare_with_flag(&filt)?),
        });
    }
    Ok(Output::ok(report))
}

/// Functions `1 + (k+1)(v − v₀)` over the chart coordinates, equal to 1 at the point.
fn unit_functions(pt: &RationalPoint, n: usize) -> Vec<Expr> {
    let coords: Vec<_> = pt.iter().collect();
    (0..n)
        .map(|k| {
            let (v, c) = coords[k % coords.len()];
            let shift = &Expr::var(v) - &Expr::constant(c.clone());
            &Expr::one() + &(&Expr::int(k as i64 + 1) * &shift)
        })
        .collect()
}

pub fn cauchy(system: &Path, verify: bool) -> Res<Output> {
    let sys = read_system(system)?;
    let s = build_chart(&sys)?.system()?;
    let ch = cauchy_char(&s)?;
    let fields: Vec<String> = ch.fields.iter().map(|f| normalize_field(f).to_string()).collect();
    let mut report = json!({
        "rank": ch.rank(),
        "fields": fields,
        "loci": ch.loci.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
    });
    if verify {
        let ok = ch.fields.iter().all(|x| {
            s.contains_field(x) && s.generators().iter().all(|g| s.reduce(&g.d().interior(x)).is_zero())
        });
        report["verify"] = json!({ "fields_are_characteristic": ok });
    }
    Ok(Output::ok(report))
}

pub fn growth(system: &Path, points: Option<&str>, verify: bool) -> Res<Output> {
    let sys = read_system(system)?;
    let s = build_chart(&sys)?.system()?;
    let n = s.chart().dim();
    let weak = weak_flag(&s, n)?;
    let strong = derived_flag(&s, n)?;
    let mut report = json!({ "weak": val!(weak.report()), "strong": val!(strong.report()) });
    if let Some(p) = points {
        let pts = points_from_json(&read_json(p)?)?;
        let vals: Vec<_> = pts.par_iter().map(|pt| growth_at(&weak, pt)).collect();
        let mut out = Vec::new();
        for (pt, v) in pts.iter().zip(vals) {
            out.push(json!({ "point": point_to_json(pt), "growth": v? }));
        }
        report["pointwise"] = Value::Array(out);
    }
    if verify {
        report["verify"] = json!({
            "weak_monotone": weak.monotone(),
            "weak_bracket_compatible": weak.bracket_compatible(),
            "strong_monotone": strong.monotone(),
            "derived_agrees_with_flag": derived_agrees_with_flag(&s)?,
        });
    }
    Ok(Output::ok(report))
}

fn checks_failure(c: &SolutionChecks) -> Option<String> {
    (!(c.pullbacks_zero && c.w_y_zero && c.immersion_ok && c.principal))
        .then(|| "solution checks failed".to_string())
}

pub fn cartan_solve(second: bool, y0: Option<&str>, phi: Option<&str>, verify: bool) -> Res<Output> {
    let s = if second {
        let phi = phi.ok_or_else(|| CliError::Input("method ii needs --phi".into()))?;
        solve_ii(&parse_expr(phi)?)?
    } else {
        let y0 = y0.ok_or_else(|| CliError::Input("method i needs --y0".into()))?;
        solve_i(&parse_expr(y0)?)?
    };
    let checks = if verify { Some(verify_solution(&s, 5, 0)?) } else { None };
    let failure = checks.as_ref().and_then(checks_failure);
    Ok(Output { report: val!(s.to_json(checks)), failure })
}

pub fn cartan_compare(y0: &str, verify: bool) -> Res<Output> {
    let y0 = parse_expr(y0)?;
    let phi = phi_from_y0(&y0)?;
    let equal = compare_solutions(&y0)?;
    let mut report = json!({ "y0": y0.to_string(), "phi": phi.to_string(), "equal": equal });
    if verify {
        report["verify"] = json!({
            "method_i": val!(verify_solution(&solve_i(&y0)?, 5, 0)?),
            "method_ii": val!(verify_solution(&solve_ii(&phi)?, 5, 0)?),
        });
    }
    let failure = (!equal).then(|| "the two constructions differ".to_string());
    Ok(Output { report, failure })
}

pub fn cartan_report(verify: bool) -> Res<Output> {
    let covering = coframe_and_covering(10, 0)?;
    let leaf = leaf_chart()?;
    let db = db_system();
    let gen: Vec<String> = cauchy_generator()?.iter().map(|f| f.to_string()).collect();
    let quotient: Vec<String> = leaf.quotient.components().iter().map(|c| c.to_string()).collect();
    let lift: Vec<String> = leaf.lift.components().iter().map(|c| c.to_string()).collect();
    let mut report = json!({
        "coframe": val!(covering),
        "cauchy": gen,
        "quotient": quotient,
        "lift": lift,
        "relations": val!(form_relations()?),
        "db_generators": db.generators().iter().map(|g| g.to_string()).collect::<Vec<_>>(),
    });
    if verify {
        let flag = weak_flag(&db, 5)?;
        report["verify"] = json!({
            "leaf_chart": val!(leaf.verify()?),
            "db_weak_flag": val!(flag.ranks),
            "db_cauchy_rank": cauchy_char(&db)?.rank(),
        });
    }
    Ok(Output::ok(report))
}
