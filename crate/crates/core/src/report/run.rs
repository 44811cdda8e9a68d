//! Dispatch from a problem file to the solvers, and the report they produce.

use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::problem::{Command, OrbitMode, ProblemFile};
use crate::arith::residue::{pow_big, reduce_point};
use crate::arith::{parse_map, parse_point, parse_scalar, FieldKind, Scalar};
use crate::error::{DmlError, Result};
use crate::growth::{
    arithmetic_degree_profile, degree_sequence, density_profile, dyadic_windows, ksm_fit, weil_height,
};
use crate::interpolate::{boost_iterate, delta_norm, interpolate_action, AffinoidSelfMap};
use crate::returns::{classify_returns, exact_scan, sml_solve, ReturnSet, Status};

pub const TOOL_NAME: &str = "dml";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Exit code for a successful run whose answer is complete or certified.
pub const EXIT_OK: i32 = 0;
/// Exit code for a run that finished with a partial or numerically certified answer.
pub const EXIT_PARTIAL: i32 = 2;
/// Exit code for malformed input and solver errors.
pub const EXIT_ERROR: i32 = 3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: ToolInfo,
    pub command: String,
    /// The problem document after overrides.
    pub input: Value,
    /// CERTIFIED, CERTIFIED-NUMERIC, PARTIAL or COMPLETE.
    pub status: String,
    pub exit_code: i32,
    pub result: Value,
    pub elapsed_ms: u64,
}

pub fn exit_code_for(status: &str) -> i32 {
    match status {
        "CERTIFIED" | "COMPLETE" => EXIT_OK,
        _ => EXIT_PARTIAL,
    }
}

/// Parses, solves and packages a problem file.
pub fn run_text(text: &str, overrides: &[String]) -> Result<Report> {
    let (pf, doc) = ProblemFile::from_json(text, overrides)?;
    run(&pf, doc)
}

pub fn run(pf: &ProblemFile, input: Value) -> Result<Report> {
    let start = Instant::now();
    let (status, result) = match pf.command {
        Command::Orbit => run_orbit(pf)?,
        Command::Sml => return_set_outcome(sml_solve(&pf.recurrence()?, &pf.config)?)?,
        Command::Interp => run_interp(pf)?,
        Command::Degree => run_degree(pf)?,
        Command::Height => run_height(pf)?,
        Command::Density => run_density(pf)?,
    };
    Ok(Report {
        tool: ToolInfo { name: TOOL_NAME.into(), version: TOOL_VERSION.into() },
        command: pf.command.as_str().into(),
        input,
        exit_code: exit_code_for(status.as_str()),
        status,
        result,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

type Outcome = (String, Value);

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

fn return_set_outcome(rs: ReturnSet) -> Result<Outcome> {
    Ok((rs.status.as_str().into(), to_value(&rs)))
}

/// Return set of an orbit problem, or a bounded scan when the classifier does not apply.
fn solve_orbit(pf: &ProblemFile) -> Result<(Status, Option<ReturnSet>, Value, u64)> {
    let prob = pf.orbit_problem()?;
    let classify = match pf.mode {
        OrbitMode::Auto => pf.field == FieldKind::Rational,
        OrbitMode::Classify => true,
        OrbitMode::Brute => false,
    };
    if classify {
        let rs = classify_returns(&prob, &pf.config)?;
        let v = to_value(&rs);
        return Ok((rs.status, Some(rs), v, 0));
    }
    let scan = exact_scan(&prob, pf.config.n_max, Some(pf.config.size_budget));
    let status = if scan.truncated { Status::Partial } else { Status::Certified };
    let v = json!({
        "method": "brute_force",
        "hits": scan.hits,
        "horizon": scan.horizon,
        "truncated": scan.truncated,
    });
    Ok((status, None, v, scan.horizon))
}

fn run_orbit(pf: &ProblemFile) -> Result<Outcome> {
    let (status, rs, v, _) = solve_orbit(pf)?;
    // a bounded scan answers only up to its horizon
    let label = if rs.is_none() && status == Status::Certified { "COMPLETE" } else { status.as_str() };
    Ok((label.into(), v))
}

fn run_interp(pf: &ProblemFile) -> Result<Outcome> {
    let spec = pf.interp.as_ref().expect("validated");
    if pf.field != FieldKind::Rational {
        return Err(DmlError::Unsupported("interpolation needs a map over Q".into()));
    }
    let f = pf.parse_map()?;
    let n = f.dim();
    let (p, k) = (spec.prime, spec.precision);
    crate::arith::check_prime(p)?;
    let max_terms = pf.config.max_terms;
    let mut h = match &spec.center {
        Some(c) => AffinoidSelfMap::recenter_at(&f, &parse_point(c, FieldKind::Rational)?, p, spec.scale, spec.iterate, k, max_terms)?,
        None => AffinoidSelfMap::from_map(&f, p, k)?,
    };
    let mut boost = 1u64;
    if spec.boost {
        let (t, hb) = boost_iterate(&h, max_terms)?;
        boost = t;
        h = hb;
    }
    let base = match &spec.base {
        Some(b) => {
            let pt = parse_point(b, FieldKind::Rational)?;
            if pt.dim() != n {
                return Err(DmlError::DimensionMismatch { expected: n, found: pt.dim() });
            }
            reduce_point(&pt, h.ring())?
        }
        None => vec![BigInt::zero(); n],
    };
    let g = interpolate_action(&h, &base)?;
    let prec = g.precision();
    let m = pow_big(p, prec);
    let mut x = base.clone();
    for step in 0..=spec.check {
        let expect: Vec<BigInt> = x.iter().map(|c| num_integer::Integer::mod_floor(c, &m)).collect();
        if g.value_at(step) != expect {
            return Err(DmlError::PrecisionExhausted(format!("interpolation disagrees with the orbit at n = {step}")));
        }
        x = h.eval(&x);
    }
    let series: Vec<Value> = g
        .series
        .iter()
        .map(|s| {
            json!({
                "coefficients": s.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "certified": s.certified(),
            })
        })
        .collect();
    Ok((
        "COMPLETE".into(),
        json!({
            "certificate": to_value(&g.certificate),
            "delta_norm": to_value(&delta_norm(&h)),
            "boost": boost,
            "provenance": h.provenance().map(to_value),
            "series": series,
            "checked_through": spec.check,
        }),
    ))
}

fn run_degree(pf: &ProblemFile) -> Result<Outcome> {
    let f = pf.parse_map()?;
    let ds = degree_sequence(&f, pf.steps.unwrap_or(10), pf.config.max_terms)?;
    let status = if ds.truncated { "PARTIAL" } else { "COMPLETE" };
    Ok((status.into(), to_value(&ds)))
}

fn parse_epsilon(text: &str) -> Result<BigRational> {
    match parse_scalar(text, FieldKind::Rational)? {
        Scalar::Rational(r) if r >= BigRational::zero() => Ok(r),
        _ => Err(DmlError::Invalid(format!("epsilon `{text}` must be a non-negative rational"))),
    }
}

fn run_height(pf: &ProblemFile) -> Result<Outcome> {
    let x = pf.parse_point()?;
    if pf.map.is_none() {
        return Ok(("COMPLETE".into(), json!({ "height": to_value(&weil_height(&x)) })));
    }
    let f = parse_map(pf.map.as_deref().unwrap(), x.dim(), pf.field)?;
    let steps = pf.steps.unwrap_or(20);
    let budget = pf.config.size_budget;
    let profile = arithmetic_degree_profile(&f, &x, steps, budget)?;
    let mut truncated = profile.truncated;
    let mut fits = Vec::new();
    if !pf.epsilon.is_empty() {
        let ds = degree_sequence(&f, steps.min(10), pf.config.max_terms)?;
        for e in &pf.epsilon {
            let eps = parse_epsilon(e)?;
            let fit = ksm_fit(&f, &x, &ds.lambda1, &eps, steps, budget)?;
            truncated |= fit.truncated;
            fits.push(json!({ "epsilon": e, "fit": to_value(&fit) }));
        }
    }
    let status = if truncated { "PARTIAL" } else { "COMPLETE" };
    Ok((status.into(), json!({ "profile": to_value(&profile), "ksm": fits })))
}

fn run_density(pf: &ProblemFile) -> Result<Outcome> {
    let mut horizon = pf.horizon.unwrap_or(1024);
    let (status, members, source) = if let Some(set) = &pf.set {
        let mut s = set.clone();
        s.sort_unstable();
        s.dedup();
        (Status::Certified, s, Value::String("explicit".into()))
    } else {
        let (status, rs, v, scan_horizon) = if pf.recurrence.is_some() {
            let rs = sml_solve(&pf.recurrence()?, &pf.config)?;
            let v = to_value(&rs);
            (rs.status, Some(rs), v, 0)
        } else {
            solve_orbit(pf)?
        };
        match rs {
            Some(rs) => (status, rs.members_up_to(horizon.saturating_sub(1)), v),
            None => {
                // the scan decides indices 0..=scan_horizon
                horizon = horizon.min(scan_horizon + 1);
                let hits: Vec<u64> = v["hits"]
                    .as_array()
                    .map(|a| a.iter().filter_map(Value::as_u64).collect())
                    .unwrap_or_default();
                (status, hits, v)
            }
        }
    };
    let windows = pf.windows.clone().unwrap_or_else(|| dyadic_windows(horizon));
    let prof = density_profile(&members, horizon, &windows);
    Ok((status.as_str().into(), json!({ "density": to_value(&prof), "source": source })))
}

/// Canonical JSON: keys sorted, no insignificant whitespace, exact values as strings.
pub fn emit_json(r: &Report) -> String {
    // serde_json::Value keeps object keys in a BTreeMap, so this round trip sorts them
    let v = to_value(r);
    serde_json::to_string(&v).expect("json") + "\n"
}

pub fn parse_report(text: &str) -> Result<Report> {
    serde_json::from_str(text).map_err(|e| DmlError::Invalid(format!("report: {e}")))
}

pub fn emit_text(r: &Report) -> String {
    let mut out = format!("{} {}\ncommand: {}\nstatus: {}\n", r.tool.name, r.tool.version, r.command, r.status);
    let res = &r.result;
    match r.command.as_str() {
        "orbit" | "sml" if res.get("progressions").is_some() => {
            for p in res["progressions"].as_array().into_iter().flatten() {
                out += &format!("progression: {}n + {}\n", p["a"], p["b"]);
            }
            out += &format!("sporadic: {}\n", res["sporadic"]);
            for u in res["unresolved_classes"].as_array().into_iter().flatten() {
                out += &format!("unresolved: {}n + {} ({})\n", u["modulus"], u["offset"], u["diagnostic"].as_str().unwrap_or(""));
            }
        }
        "orbit" => {
            out += &format!("hits: {}\nhorizon: {}\n", res["hits"], res["horizon"]);
        }
        "interp" => {
            let c = &res["certificate"];
            out += &format!(
                "prime: {}\ndelta exponent: {}\nterms: {}\nprecision: {}\nboost: {}\n",
                c["prime"], c["delta_exponent"], c["terms"], c["precision"], res["boost"]
            );
            out += &format!("r comparison: {}\n", c["r_comparison"].as_str().unwrap_or(""));
        }
        "degree" => {
            out += &format!("degrees: {}\nlambda1: {}\n", res["degrees"], res["lambda1"]);
        }
        "height" => {
            if let Some(h) = res.get("height") {
                out += &format!("height: {h}\n");
            } else {
                let p = &res["profile"];
                out += &format!("upper root: {}\nlower root: {}\n", p["upper"], p["lower"]);
                for f in res["ksm"].as_array().into_iter().flatten() {
                    out += &format!("ksm epsilon {}: {}\n", f["epsilon"].as_str().unwrap_or(""), f["fit"]);
                }
            }
        }
        "density" => {
            let d = &res["density"];
            out += &format!("horizon: {}\n", d["horizon"]);
            for e in d["profile"].as_array().into_iter().flatten() {
                out += &format!("window {}: {} at {} (density {})\n", e["window"], e["max_count"], e["start"], e["density"].as_str().unwrap_or(""));
            }
        }
        _ => {}
    }
    out += &format!("exit code: {}", r.exit_code);
    if r.exit_code == EXIT_PARTIAL {
        out += " (answer is partial or numerically certified)";
    }
    out + "\n"
}
