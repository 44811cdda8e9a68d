//! Per-residue-class classification: recenter on the cycle, interpolate, count zeros.

use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use super::brute::{exact_scan, ExactScan};
use super::cycle::{good_primes, jacobian, mat_eval, mat_identity, mat_mul, matrix_order, residue_cycle};
use super::problem::{OrbitProblem, SolverConfig};
use super::set::{Progression, ReturnSet, Status, UnresolvedClass};
use crate::arith::residue::{int_valuation, pow_big, reduce_map, reduce_point, reduce_poly, PrimePower, ResidueMap};
use crate::arith::{FieldKind, MultiPoly};
use crate::error::{DmlError, Result};
use crate::interpolate::{action::r_transcript, plan_terms, series_from_orbit};
use crate::padic::{find_integer_zeros, strassmann_bound, DiscReport, PadicSeries, SeriesSummary, StrassmannBound};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassOutcome {
    Resolved,
    Numeric,
    Unresolved,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassReport {
    pub class: u64,
    pub offset: u64,
    pub delta_exponent: u32,
    pub precision_ladder: Vec<u32>,
    pub strassmann_bound: Option<usize>,
    pub hits: Vec<u64>,
    pub outcome: ClassOutcome,
    pub diagnostic: String,
    pub evidence: u64,
    pub series: Option<SeriesSummary>,
    pub discs: Vec<DiscReport>,
}

/// One complete run of the pipeline at a fixed prime.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeAttempt {
    pub prime: u64,
    pub level: u32,
    pub preperiod: u64,
    pub cycle_period: u64,
    pub jacobian_order: u64,
    pub boost: u64,
    pub period: u64,
    pub r_comparison: String,
    pub preperiod_hits: Vec<u64>,
    pub preperiod_unverified: Vec<u64>,
    pub classes: Vec<ClassReport>,
}

impl PrimeAttempt {
    pub fn unresolved_count(&self) -> usize {
        self.classes.iter().filter(|c| c.outcome == ClassOutcome::Unresolved).count()
            + self.preperiod_unverified.len()
    }

    fn into_return_set(self, scan: &ExactScan, failures: Vec<String>) -> ReturnSet {
        let mut sporadic = self.preperiod_hits.clone();
        let mut progs = Vec::new();
        let mut unresolved = Vec::new();
        let mut status = Status::Certified;
        for c in &self.classes {
            match c.outcome {
                ClassOutcome::Resolved => sporadic.extend(&c.hits),
                ClassOutcome::Numeric => {
                    progs.push(Progression { a: self.period, b: c.offset });
                    status = Status::CertifiedNumeric;
                }
                ClassOutcome::Unresolved => {
                    sporadic.extend(&c.hits);
                    unresolved.push(UnresolvedClass {
                        modulus: self.period,
                        offset: c.offset,
                        diagnostic: c.diagnostic.clone(),
                    })
                }
            }
        }
        for &n in &self.preperiod_unverified {
            unresolved.push(UnresolvedClass {
                modulus: 0,
                offset: n,
                diagnostic: "preperiod index beyond the exact horizon".into(),
            });
        }
        sporadic.sort();
        sporadic.dedup();
        let cert = json!({
            "method": "p-adic interpolation",
            "exact_horizon": scan.horizon,
            "exact_horizon_truncated": scan.truncated,
            "rejected_primes": failures,
            "attempt": self,
        });
        ReturnSet::new(progs, sporadic, unresolved, status, cert)
    }
}

/// `f^n(x0) mod p^k` for `n < count`.
fn orbit_mod(f: &ResidueMap, x0: &[BigInt], count: u64) -> Vec<Vec<BigInt>> {
    let mut out = Vec::with_capacity(count as usize);
    let mut x = x0.to_vec();
    for _ in 0..count {
        let next = f.eval(&x);
        out.push(std::mem::replace(&mut x, next));
    }
    out
}

fn vec_valuation(a: &[BigInt], b: &[BigInt], p: u64, cap: u32) -> u32 {
    a.iter()
        .zip(b)
        .filter_map(|(x, y)| int_valuation(&(x - y), p))
        .min()
        .unwrap_or(cap)
        .min(cap)
}

/// `S(T) = g(y + p^e G(T))` where each `G_j` is known modulo `p^K`.
fn target_series(g: &MultiPoly, y: &[BigInt], e: u32, gs: &[PadicSeries]) -> Result<PadicSeries> {
    let p = gs[0].prime();
    let prec = gs.iter().map(|s| s.certified()).min().unwrap() + e;
    let ring = PrimePower::new(p, prec);
    let scale = pow_big(p, e);
    let coords: Vec<PadicSeries> = gs
        .iter()
        .zip(y)
        .map(|(s, yj)| {
            let c = s.coeffs().iter().map(|c| c * &scale).collect();
            PadicSeries::new(p, c, s.precision() + e, s.tail() + e).add_constant(yj)
        })
        .collect();
    let gr = reduce_poly(g, &ring)?;
    let mut acc = PadicSeries::zero(p, prec);
    for (mono, c) in gr.terms() {
        let mut term = PadicSeries::new(p, vec![c.clone()], prec, prec);
        for (j, &k) in mono.0.iter().enumerate() {
            if k > 0 {
                term = term.mul(&coords[j].pow(k));
            }
        }
        acc = acc.add(&term);
    }
    Ok(acc)
}

struct Setup<'a> {
    prob: &'a OrbitProblem,
    cfg: &'a SolverConfig,
    scan: &'a ExactScan,
    p: u64,
    e: u32,
    s: u64,
    period: u64,
    /// Shared orbit `f^n(x) mod p^base_prec`, long enough for the first rung of the ladder.
    base: Vec<Vec<BigInt>>,
    base_prec: u32,
}

impl Setup<'_> {
    fn t_max(&self, offset: u64) -> Option<u64> {
        (self.scan.horizon >= offset).then(|| (self.scan.horizon - offset) / self.period)
    }

    /// Runs interpolation and zero location for class `r` at working precision `k`.
    fn run_class(&self, r: u64, d: u32, k: u32) -> Result<(PadicSeries, Option<crate::padic::ZeroSearch>)> {
        let plan = plan_terms(self.p, d, k)?;
        let w = self.e + plan.working_precision;
        let offset = self.s + r;
        let len = offset + self.period * plan.terms + 1;
        let own;
        let full = if w <= self.base_prec && len <= self.base.len() as u64 {
            &self.base
        } else {
            let ring = PrimePower::new(self.p, w);
            let fr = reduce_map(self.prob.map(), &ring)?;
            let x0 = reduce_point(self.prob.point(), &ring)?;
            own = orbit_mod(&fr, &x0, len);
            &own
        };
        let wm = pow_big(self.p, w);
        let y: Vec<BigInt> = full[offset as usize].iter().map(|c| c.mod_floor(&wm)).collect();
        let scale = pow_big(self.p, self.e);
        let hmod = pow_big(self.p, plan.working_precision);
        let wmod = wm;
        let h_orbit: Vec<Vec<BigInt>> = (0..=plan.terms)
            .map(|n| {
                let z = &full[(offset + self.period * n) as usize];
                z.iter()
                    .zip(&y)
                    .map(|(a, b)| ((a - b).mod_floor(&wmod) / &scale).mod_floor(&hmod))
                    .collect()
            })
            .collect();
        let gs = series_from_orbit(self.p, d, &h_orbit, &plan)?;
        let series = target_series(&self.prob.targets()[0], &y, self.e, &gs)?;
        if strassmann_bound(&series) == StrassmannBound::Degenerate {
            return Ok((series, None));
        }
        let (t_max, oracle_ok) = match self.t_max(offset) {
            Some(t) => (t, true),
            None => (0, false),
        };
        let scan = self.scan;
        let per = self.period;
        let oracle = move |t: u64| oracle_ok && scan.contains(offset + per * t);
        let search = find_integer_zeros(&series, t_max, &oracle, self.cfg.refine_depth)?;
        Ok((series, Some(search)))
    }

    fn classify(&self, r: u64, d: u32) -> ClassReport {
        let offset = self.s + r;
        let mut report = ClassReport {
            class: r,
            offset,
            delta_exponent: d,
            precision_ladder: vec![],
            strassmann_bound: None,
            hits: vec![],
            outcome: ClassOutcome::Unresolved,
            diagnostic: String::new(),
            evidence: 0,
            series: None,
            discs: vec![],
        };
        let mut k = self.cfg.k.min(self.cfg.k_max).max(1);
        loop {
            report.precision_ladder.push(k);
            match self.run_class(r, d, k) {
                Err(err) => {
                    report.diagnostic = err.to_string();
                    return report;
                }
                Ok((series, Some(search))) => {
                    report.series = Some(series.summary(8));
                    report.strassmann_bound = Some(search.bound);
                    report.hits = search.zeros.iter().map(|t| offset + self.period * t).collect();
                    report.discs = search.discs;
                    if search.resolved {
                        report.outcome = ClassOutcome::Resolved;
                    } else {
                        report.diagnostic = format!(
                            "{} exact hits against a Strassmann bound of {}",
                            search.zeros.len(),
                            search.bound
                        );
                    }
                    return report;
                }
                Ok((series, None)) => {
                    report.series = Some(series.summary(8));
                    if k < self.cfg.k_max {
                        k = (k * 2).min(self.cfg.k_max);
                        continue;
                    }
                    return self.numeric_evidence(report);
                }
            }
        }
    }

    /// Identically zero at `k_max`: accept the whole class when exact evidence agrees.
    fn numeric_evidence(&self, mut report: ClassReport) -> ClassReport {
        let offset = report.offset;
        let reachable = self.cfg.n_max.saturating_sub(offset) / self.period;
        let needed = self.cfg.k_evidence.min(reachable);
        match self.t_max(offset) {
            Some(t_max) if t_max >= needed => {
                let all = (0..=t_max).all(|t| self.scan.contains(offset + self.period * t));
                if all {
                    report.outcome = ClassOutcome::Numeric;
                    report.evidence = t_max + 1;
                    report.diagnostic = format!(
                        "series vanishes modulo p^{}; {} consecutive exact hits",
                        self.cfg.k_max,
                        t_max + 1
                    );
                } else {
                    report.diagnostic = format!(
                        "series vanishes modulo p^{} but exact evidence has a miss",
                        self.cfg.k_max
                    );
                }
            }
            _ => {
                report.diagnostic = format!(
                    "series vanishes modulo p^{}; exact horizon {} too short for evidence",
                    self.cfg.k_max, self.scan.horizon
                );
            }
        }
        report
    }
}

/// Full pipeline at a fixed prime `p`.
pub fn attempt_prime(prob: &OrbitProblem, cfg: &SolverConfig, scan: &ExactScan, p: u64) -> Result<PrimeAttempt> {
    let n = prob.dim();
    let mut last_err = DmlError::ContractionNotCertified(format!("no level e tried at p = {p}"));
    let e_start = if p == 2 { 2 } else { 1 };
    for e in e_start..=cfg.e_cap.max(e_start) {
        let cyc = residue_cycle(prob.map(), prob.point(), p, e + 1, cfg.state_cap)?;
        let (s, m0) = (cyc.preperiod, cyc.period);
        // étale check and Jacobian order on the cycle
        let jring = PrimePower::new(p, e + 1);
        let jac = jacobian(prob.map(), &jring)?;
        let pm = BigInt::from(p);
        let mut j0 = mat_identity(n);
        for y in &cyc.cycle {
            j0 = mat_mul(&mat_eval(&jac, y, &pm), &j0, &pm);
        }
        let ord = matrix_order(&j0, p, cfg.period_cap).ok_or_else(|| {
            DmlError::ContractionNotCertified(format!(
                "Jacobian of f^{m0} on the cycle is singular mod {p} or has order above {}",
                cfg.period_cap
            ))
        })?;
        let mut period = m0 * ord;
        let mut boost = 1u64;
        let mut ds: Vec<u32>;
        loop {
            if period > cfg.period_cap {
                return Err(DmlError::BudgetExceeded(format!("period {period} exceeds cap {}", cfg.period_cap)));
            }
            // values mod p^(2e+1) decide v(f^m(y) - y) up to the cap 2e
            let ring = PrimePower::new(p, 2 * e + 1);
            let fr = reduce_map(prob.map(), &ring)?;
            let x0 = reduce_point(prob.point(), &ring)?;
            let orb = orbit_mod(&fr, &x0, s + 2 * period);
            // v(Df^m(y_r) - I) capped at e is the same for every class: consecutive
            // classes are conjugate modulo p^(e+1)
            let mm = pow_big(p, e);
            let jac_e = jacobian(prob.map(), &PrimePower::new(p, e))?;
            let mut df = mat_identity(n);
            for y in &orb[s as usize..(s + period) as usize] {
                df = mat_mul(&mat_eval(&jac_e, y, &mm), &df, &mm);
            }
            let id = mat_identity(n);
            let jv = df
                .iter()
                .zip(&id)
                .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).mod_floor(&mm)))
                .filter_map(|c| int_valuation(&c, p))
                .min()
                .unwrap_or(e)
                .min(e);
            ds = (0..period)
                .map(|r| {
                    let a = &orb[(s + r) as usize];
                    let b = &orb[(s + r + period) as usize];
                    (vec_valuation(b, a, p, 2 * e) - e).min(jv).min(e)
                })
                .collect();
            let dmin = *ds.iter().min().unwrap();
            if dmin as u64 * (p - 1) > 1 {
                break;
            }
            if boost >= (p as u64).pow(cfg.boost_cap) {
                break;
            }
            period *= p;
            boost *= p;
        }
        let dmin = *ds.iter().min().unwrap();
        if dmin as u64 * (p - 1) <= 1 {
            last_err = DmlError::ContractionNotCertified(r_transcript(p, dmin));
            continue;
        }
        let base_prec = e + ds
            .iter()
            .map(|&d| plan_terms(p, d, cfg.k).map(|pl| pl.working_precision))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .max()
            .unwrap();
        let max_terms = ds.iter().map(|&d| plan_terms(p, d, cfg.k).map(|pl| pl.terms)).collect::<Result<Vec<_>>>()?;
        let base_len = s + period * (max_terms.into_iter().max().unwrap() + 1);
        let ring = PrimePower::new(p, base_prec);
        let base = orbit_mod(&reduce_map(prob.map(), &ring)?, &reduce_point(prob.point(), &ring)?, base_len);
        let setup = Setup { prob, cfg, scan, p, e, s, period, base, base_prec };
        let classes: Vec<ClassReport> =
            (0..period).into_par_iter().map(|r| setup.classify(r, ds[r as usize])).collect();
        let pre_end = s.min(scan.horizon + 1);
        let preperiod_hits = scan.hits.iter().copied().filter(|&n| n < pre_end).collect();
        let preperiod_unverified = (pre_end..s).collect();
        return Ok(PrimeAttempt {
            prime: p,
            level: e,
            preperiod: s,
            cycle_period: m0,
            jacobian_order: ord,
            boost,
            period,
            r_comparison: r_transcript(p, dmin),
            preperiod_hits,
            preperiod_unverified,
            classes,
        });
    }
    Err(last_err)
}

fn classify_single(prob: &OrbitProblem, cfg: &SolverConfig) -> Result<ReturnSet> {
    let scan = exact_scan(prob, cfg.n_max, Some(cfg.size_budget));
    let primes = good_primes(prob, &cfg.primes);
    if primes.is_empty() {
        return Err(DmlError::NoGoodPrime);
    }
    let mut failures = Vec::new();
    let mut best: Option<PrimeAttempt> = None;
    for p in primes {
        match attempt_prime(prob, cfg, &scan, p) {
            Ok(a) if a.unresolved_count() == 0 => return Ok(a.into_return_set(&scan, failures)),
            Ok(a) => {
                failures.push(format!("p = {p}: {} unresolved classes", a.unresolved_count()));
                if best.as_ref().map(|b| a.unresolved_count() < b.unresolved_count()).unwrap_or(true) {
                    best = Some(a);
                }
            }
            Err(err) => failures.push(format!("p = {p}: {err}")),
        }
    }
    match best {
        Some(a) => Ok(a.into_return_set(&scan, failures)),
        None => Ok(ReturnSet::new(
            vec![],
            scan.hits.clone(),
            vec![UnresolvedClass { modulus: 1, offset: 0, diagnostic: failures.join("; ") }],
            Status::Partial,
            json!({
                "method": "exact scan only",
                "exact_horizon": scan.horizon,
                "rejected_primes": failures,
            }),
        )),
    }
}

/// The return set of `prob`; several targets are classified separately and intersected.
pub fn classify_returns(prob: &OrbitProblem, cfg: &SolverConfig) -> Result<ReturnSet> {
    if prob.field() != FieldKind::Rational {
        return Err(DmlError::Unsupported(
            "the classifier runs over Q; use brute force over function fields".into(),
        ));
    }
    let mut acc: Option<ReturnSet> = None;
    for g in prob.targets() {
        let single = if prob.targets().len() == 1 { prob.clone() } else { prob.with_target(g.clone())? };
        let rs = classify_single(&single, cfg)?;
        acc = Some(match acc {
            None => rs,
            Some(prev) => prev.intersect(&rs),
        });
    }
    Ok(acc.expect("at least one target"))
}
