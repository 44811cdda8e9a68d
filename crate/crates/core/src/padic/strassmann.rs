//! Strassmann zero counting and oracle-confirmed zero location on the unit disc.

use num_bigint::BigInt;
use serde::Serialize;

use super::series::PadicSeries;
use crate::arith::residue::int_valuation;
use crate::error::{DmlError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StrassmannBound {
    Bound(usize),
    Degenerate,
}

/// Largest index attaining the certified maximal coefficient norm, which bounds the number
/// of zeros in the closed unit disc; `Degenerate` when no coefficient is certifiably nonzero.
pub fn strassmann_bound(s: &PadicSeries) -> StrassmannBound {
    let mut best: Option<(u32, usize)> = None;
    for i in 0..=s.degree() {
        if let Some(v) = s.certified_valuation(i) {
            match best {
                Some((bv, _)) if v > bv => {}
                _ => best = Some((v, i)),
            }
        }
    }
    match best {
        Some((_, i)) => StrassmannBound::Bound(i),
        None => StrassmannBound::Degenerate,
    }
}

/// One sub-disc `T = offset + p^level · T'` examined during zero location.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiscReport {
    pub offset: u64,
    pub level: u32,
    pub bound: Option<usize>,
    pub hits: usize,
    pub resolved: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZeroSearch {
    pub zeros: Vec<u64>,
    pub bound: usize,
    pub resolved: bool,
    /// For each zero, whether the derivative there is a certified unit (simple zero).
    pub simple: Vec<bool>,
    pub discs: Vec<DiscReport>,
}

/// Locates the integer zeros `0 ≤ T ≤ n_max` of `s` using the exact `oracle` for membership.
///
/// The series only supplies the zero-count bound. When fewer hits than the bound are found,
/// the disc is split into residue classes mod `p` (up to `max_depth` levels) and each sub-disc
/// is counted separately; the search is resolved when every leaf disc is accounted for.
pub fn find_integer_zeros(
    s: &PadicSeries,
    n_max: u64,
    oracle: &dyn Fn(u64) -> bool,
    max_depth: u32,
) -> Result<ZeroSearch> {
    let bound = match strassmann_bound(s) {
        StrassmannBound::Bound(b) => b,
        StrassmannBound::Degenerate => {
            return Err(DmlError::PrecisionExhausted(
                "series is indistinguishable from zero".into(),
            ))
        }
    };
    let zeros: Vec<u64> = (0..=n_max).filter(|&n| oracle(n)).collect();
    let deriv = s.derivative();
    let mut simple = Vec::with_capacity(zeros.len());
    for &z in &zeros {
        if int_valuation(&s.eval(&BigInt::from(z)), s.prime()).is_some() {
            return Err(DmlError::PrecisionExhausted(format!(
                "series does not vanish at confirmed zero T = {z} modulo p^{}",
                s.certified()
            )));
        }
        simple.push(int_valuation(&deriv.eval(&BigInt::from(z)), s.prime()) == Some(0));
    }
    if zeros.len() > bound {
        return Err(DmlError::PrecisionExhausted(format!(
            "{} confirmed zeros exceed the Strassmann bound {bound}",
            zeros.len()
        )));
    }
    let mut discs = vec![DiscReport {
        offset: 0,
        level: 0,
        bound: Some(bound),
        hits: zeros.len(),
        resolved: zeros.len() == bound,
    }];
    let resolved = zeros.len() == bound || refine(s, &zeros, 0, 0, max_depth, &mut discs)?;
    Ok(ZeroSearch { zeros, bound, resolved, simple, discs })
}

fn refine(
    s: &PadicSeries,
    zeros: &[u64],
    offset: u64,
    level: u32,
    max_depth: u32,
    discs: &mut Vec<DiscReport>,
) -> Result<bool> {
    if level >= max_depth {
        return Ok(false);
    }
    let p = s.prime();
    let step = p.pow(level);
    let mut all = true;
    for c in 0..p {
        let child = offset + c * step;
        let child_level = level + 1;
        let modulus = p.pow(child_level);
        let sub = s.recenter(&BigInt::from(child), child_level);
        let hits: Vec<u64> = zeros.iter().copied().filter(|z| z % modulus == child).collect();
        let report = |bound: Option<usize>, resolved: bool| DiscReport {
            offset: child,
            level: child_level,
            bound,
            hits: hits.len(),
            resolved,
        };
        match strassmann_bound(&sub) {
            StrassmannBound::Degenerate => {
                discs.push(report(None, false));
                all = false;
            }
            StrassmannBound::Bound(b) => {
                if hits.len() > b {
                    return Err(DmlError::PrecisionExhausted(format!(
                        "sub-disc {child} mod {p}^{child_level}: {} zeros exceed bound {b}",
                        hits.len()
                    )));
                }
                if hits.len() == b {
                    discs.push(report(Some(b), true));
                } else {
                    discs.push(report(Some(b), false));
                    if !refine(s, &hits, child, child_level, max_depth, discs)? {
                        all = false;
                    }
                }
            }
        }
    }
    Ok(all)
}
