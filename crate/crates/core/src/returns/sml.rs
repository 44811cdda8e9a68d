//! Zero sets of linear recurrences through the companion map.

use serde_json::json;

use super::classify::classify_returns;
use super::problem::{Recurrence, SolverConfig};
use super::set::{Progression, ReturnSet, Status};
use crate::arith::residue::scalar_is_p_integral;
use crate::arith::Scalar;
use crate::error::{DmlError, Result};

fn is_p_unit(c: &Scalar, p: u64) -> bool {
    scalar_is_p_integral(c, p) && c.inv().map(|i| scalar_is_p_integral(&i, p)).unwrap_or(false)
}

/// `{n ≥ 0 : A_n = 0}`.
///
/// Leading zero coefficients are stripped: if `a_0 = … = a_{k-1} = 0` then `B_n = A_{n+k}`
/// satisfies the recurrence of order `l - k` with coefficients `a_k, …`.
pub fn sml_solve(rec: &Recurrence, cfg: &SolverConfig) -> Result<ReturnSet> {
    let l = rec.order();
    let shift = rec.coeffs().iter().take_while(|c| c.is_zero()).count();
    let head: Vec<u64> = rec.initial()[..shift]
        .iter()
        .enumerate()
        .filter(|(_, a)| a.is_zero())
        .map(|(i, _)| i as u64)
        .collect();
    if shift == l {
        // A_n = 0 for every n ≥ l
        return Ok(ReturnSet::new(
            vec![Progression { a: 1, b: l as u64 }],
            head,
            vec![],
            Status::Certified,
            json!({ "method": "zero recurrence", "order": l }),
        ));
    }
    let tail = Recurrence::new(rec.coeffs()[shift..].to_vec(), rec.initial()[shift..].to_vec())?;
    if tail.initial().iter().all(|a| a.is_zero()) {
        return Ok(ReturnSet::new(
            vec![Progression { a: 1, b: 0 }],
            vec![],
            vec![],
            Status::Certified,
            json!({ "method": "vanishing initial values", "shift": shift }),
        ));
    }
    let a0 = &tail.coeffs()[0];
    let mut sub = cfg.clone();
    sub.primes.retain(|&p| is_p_unit(a0, p));
    if sub.primes.is_empty() {
        return Err(DmlError::NoGoodPrime);
    }
    sub.n_max = cfg.n_max.saturating_sub(shift as u64);
    let inner = classify_returns(&tail.companion()?, &sub)?;
    let k = shift as u64;
    let mut sporadic = head;
    sporadic.extend(inner.sporadic.iter().map(|n| n + k));
    let progs = inner.progressions.iter().map(|p| Progression { a: p.a, b: p.b + k }).collect();
    let unresolved = inner
        .unresolved_classes
        .iter()
        .cloned()
        .map(|mut u| {
            u.offset += k;
            u
        })
        .collect();
    Ok(ReturnSet::new(
        progs,
        sporadic,
        unresolved,
        inner.status,
        json!({ "method": "companion map", "shift": shift, "inner": inner.certificate }),
    ))
}

/// Exact zero set of `A_n` on `[0, n_max]`.
pub fn recurrence_zeros(rec: &Recurrence, n_max: u64) -> Vec<u64> {
    rec.terms(n_max as usize + 1)
        .iter()
        .enumerate()
        .filter(|(_, a)| a.is_zero())
        .map(|(i, _)| i as u64)
        .collect()
}
