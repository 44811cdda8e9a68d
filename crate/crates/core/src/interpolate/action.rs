//! Mahler-series interpolation `G(T) = Σ_i C(T, i) · Δ^i(u_j)(base)` of an orbit.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;

use super::affinoid::{delta_norm, AffinoidSelfMap};
use crate::arith::residue::{int_valuation, inv_mod, pow_big};
use crate::error::{DmlError, Result};
use crate::padic::{factorial_valuation, PadicSeries, RConstant};

/// Lower bound on the valuation of every Mahler term with index `i > terms`, given
/// `‖Δ‖ ≤ p^-d`: `min_{i > I} (d·i - v_p(i!)) ≥ ⌈d(I+1) - I/(p-1)⌉`.
pub fn tail_valuation(p: u64, d: u32, terms: u64) -> u32 {
    let num = d as i64 * (terms as i64 + 1) * (p as i64 - 1) - terms as i64;
    let den = p as i64 - 1;
    Integer::div_ceil(&num, &den).max(0) as u32
}

/// Number of Mahler terms and working precision needed for a series certified to `p^-target`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MahlerPlan {
    pub terms: u64,
    pub working_precision: u32,
    pub target: u32,
}

/// Smallest `I` with `tail_valuation(I) ≥ target`; requires `d(p-1) > 1`.
pub fn plan_terms(p: u64, d: u32, target: u32) -> Result<MahlerPlan> {
    if !RConstant::new(p).norm_strictly_below(d) {
        return Err(DmlError::ContractionNotCertified(format!(
            "‖Δ‖ ≤ {p}^-{d} is not strictly below R({p}) = {p}^(-1/{})",
            p - 1
        )));
    }
    let mut terms = 0u64;
    while tail_valuation(p, d, terms) < target {
        terms += 1;
    }
    let working_precision = target + factorial_valuation(terms, p) as u32;
    Ok(MahlerPlan { terms, working_precision, target })
}

/// Best certified precision reachable when orbit values are only known mod `p^available`.
pub fn plan_for_available(p: u64, d: u32, available: u32) -> Result<MahlerPlan> {
    let mut best = plan_terms(p, d, 1)?;
    if best.working_precision > available {
        return Err(DmlError::PrecisionExhausted(format!(
            "precision {available} too small for a single certified digit"
        )));
    }
    let mut target = 2;
    loop {
        let plan = plan_terms(p, d, target)?;
        if plan.working_precision > available {
            return Ok(best);
        }
        best = plan;
        target += 1;
    }
}

/// Builds the interpolation series of each coordinate from orbit values.
///
/// `orbit[n][j]` must hold `u_j(H^n(base))` modulo `p^plan.working_precision` for
/// `n = 0..=plan.terms`. The i-th forward difference of the orbit equals `Δ^i(u_j)(base)`,
/// and is checked against the certified bound `v ≥ d·i`.
pub fn series_from_orbit(
    p: u64,
    d: u32,
    orbit: &[Vec<BigInt>],
    plan: &MahlerPlan,
) -> Result<Vec<PadicSeries>> {
    let terms = plan.terms as usize;
    if orbit.len() <= terms {
        return Err(DmlError::Invalid(format!(
            "need {} orbit points, got {}",
            terms + 1,
            orbit.len()
        )));
    }
    let dim = orbit[0].len();
    let work = pow_big(p, plan.working_precision);
    let target = pow_big(p, plan.target);
    let tail = tail_valuation(p, d, plan.terms);

    let mut out = Vec::with_capacity(dim);
    for j in 0..dim {
        let mut row: Vec<BigInt> = orbit[..=terms].iter().map(|x| x[j].mod_floor(&work)).collect();
        // b_i = Δ^i(u_j)(base) / i!, reduced mod p^target
        let mut b = Vec::with_capacity(terms + 1);
        for i in 0..=terms {
            let a = row[0].clone();
            let need = (d as u64 * i as u64).min(plan.working_precision as u64) as u32;
            if let Some(v) = int_valuation(&a, p) {
                if v < need {
                    return Err(DmlError::ContractionNotCertified(format!(
                        "difference {i} of coordinate {j} has valuation {v} < {need}"
                    )));
                }
            }
            b.push(divide_by_factorial(a, i as u64, p, &target));
            for n in 0..row.len() - 1 {
                row[n] = (&row[n + 1] - &row[n]).mod_floor(&work);
            }
            row.pop();
        }
        out.push(PadicSeries::new(p, falling_horner(&b, &target), plan.target, tail));
    }
    Ok(out)
}

/// `a / i!` modulo `modulus`, for `a` divisible by `p^v_p(i!)`.
fn divide_by_factorial(a: BigInt, i: u64, p: u64, modulus: &BigInt) -> BigInt {
    if a.is_zero() {
        return a;
    }
    let vf = factorial_valuation(i, p) as u32;
    let unit = (1..=i)
        .map(|mut x| {
            while x % p == 0 {
                x /= p;
            }
            BigInt::from(x)
        })
        .fold(BigInt::from(1), |acc, x| (acc * x).mod_floor(modulus));
    ((a / pow_big(p, vf)) * inv_mod(&unit, modulus).expect("unit")).mod_floor(modulus)
}

/// Monomial coefficients of `Σ_i b_i · T(T-1)…(T-i+1)`, by nested multiplication.
fn falling_horner(b: &[BigInt], modulus: &BigInt) -> Vec<BigInt> {
    let mut acc: Vec<BigInt> = vec![BigInt::zero(); b.len()];
    let mut deg = 0usize;
    let mut nonzero = false;
    for (i, bi) in b.iter().enumerate().rev() {
        if nonzero {
            // acc ← acc · (T - i)
            let shift = BigInt::from(i as u64);
            for k in (0..=deg).rev() {
                let c = std::mem::take(&mut acc[k]);
                acc[k + 1] = (&acc[k + 1] + &c).mod_floor(modulus);
                acc[k] = (-(c * &shift)).mod_floor(modulus);
            }
            deg += 1;
        }
        acc[0] = (&acc[0] + bi).mod_floor(modulus);
        nonzero = nonzero || !bi.is_zero();
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InterpolationCertificate {
    pub prime: u64,
    pub delta_exponent: u32,
    pub r_comparison: String,
    pub terms: u64,
    pub tail: u32,
    pub precision: u32,
}

/// Per-coordinate series `G_j(T)` with `G(n) = H^n(base)` for integers `n ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterpolationResult {
    pub series: Vec<PadicSeries>,
    pub certificate: InterpolationCertificate,
}

impl InterpolationResult {
    pub fn value_at(&self, n: u64) -> Vec<BigInt> {
        self.series.iter().map(|s| s.eval(&BigInt::from(n))).collect()
    }

    pub fn precision(&self) -> u32 {
        self.series.iter().map(|s| s.certified()).min().unwrap_or(0)
    }
}

pub(crate) fn r_transcript(p: u64, d: u32) -> String {
    format!(
        "|Delta| <= {p}^-{d}; R({p}) = {p}^(-1/{}); d*(p-1) = {} {} 1",
        p - 1,
        d as u64 * (p - 1),
        if d as u64 * (p - 1) > 1 { ">" } else { "<=" }
    )
}

/// Interpolates the orbit of `base` (a point of ℤ_p^N given by residues) under `h`.
pub fn interpolate_action(h: &AffinoidSelfMap, base: &[BigInt]) -> Result<InterpolationResult> {
    if base.len() != h.dim() {
        return Err(DmlError::DimensionMismatch { expected: h.dim(), found: base.len() });
    }
    let p = h.prime();
    let dn = delta_norm(h);
    if !dn.below_r(p) {
        return Err(DmlError::ContractionNotCertified(r_transcript(p, dn.d)));
    }
    let plan = plan_for_available(p, dn.d, h.precision())?;
    let ring = h.ring();
    let mut orbit = Vec::with_capacity(plan.terms as usize + 1);
    let mut x: Vec<BigInt> = base.iter().map(|c| ring.reduce(c)).collect();
    for _ in 0..=plan.terms {
        orbit.push(x.clone());
        x = h.eval(&x);
    }
    let series = series_from_orbit(p, dn.d, &orbit, &plan)?;
    let result = InterpolationResult {
        certificate: InterpolationCertificate {
            prime: p,
            delta_exponent: dn.d,
            r_comparison: r_transcript(p, dn.d),
            terms: plan.terms,
            tail: tail_valuation(p, dn.d, plan.terms),
            precision: plan.target,
        },
        series,
    };
    // G(n) = H^n(base) for n = 0, 1, 2
    let m = pow_big(p, result.precision());
    for n in 0..3usize.min(orbit.len()) {
        let expect: Vec<BigInt> = orbit[n].iter().map(|c| c.mod_floor(&m)).collect();
        if result.value_at(n as u64) != expect {
            return Err(DmlError::PrecisionExhausted(format!(
                "interpolation disagrees with the orbit at n = {n}"
            )));
        }
    }
    Ok(result)
}
