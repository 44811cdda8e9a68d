//! Exact orbit enumeration; the membership oracle behind every other operation.

use num_traits::Signed;

use super::problem::OrbitProblem;
use crate::arith::{Point, Scalar};
use crate::error::{DmlError, Result};

/// Bit size of a scalar: numerator plus denominator bits over ℚ, degrees over 𝔽_p(t).
pub fn scalar_size(c: &Scalar) -> u64 {
    match c {
        Scalar::Rational(r) => r.numer().abs().bits() + r.denom().bits(),
        Scalar::Fp(_) => 1,
        Scalar::Fpt(f) => {
            let deg = |p: &crate::arith::FpPoly| p.degree().map(|d| d as u64 + 1).unwrap_or(0);
            deg(f.num()) + deg(f.den())
        }
    }
}

pub fn point_size(x: &Point) -> u64 {
    x.coords().iter().map(scalar_size).sum()
}

/// Hits of an exact scan; `horizon` is the last index examined.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactScan {
    pub hits: Vec<u64>,
    pub horizon: u64,
    pub truncated: bool,
}

impl ExactScan {
    pub fn contains(&self, n: u64) -> bool {
        self.hits.binary_search(&n).is_ok()
    }
}

/// Scans `n = 0..=n_max`, stopping early once the orbit point exceeds `size_budget` bits.
pub fn exact_scan(prob: &OrbitProblem, n_max: u64, size_budget: Option<u64>) -> ExactScan {
    let f = prob.map();
    let mut x = prob.point().clone();
    let mut hits = Vec::new();
    let mut n = 0u64;
    loop {
        if prob.targets().iter().all(|g| g.eval(x.coords()).is_zero()) {
            hits.push(n);
        }
        if n == n_max {
            return ExactScan { hits, horizon: n, truncated: false };
        }
        let next = f.eval_unchecked(&x);
        if let Some(b) = size_budget {
            if point_size(&next) > b {
                return ExactScan { hits, horizon: n, truncated: true };
            }
        }
        x = next;
        n += 1;
    }
}

/// Exactly `{n ≤ n_max : g(f^n(x)) = 0}` for every target `g`.
pub fn brute_force_returns(prob: &OrbitProblem, n_max: u64, size_budget: Option<u64>) -> Result<Vec<u64>> {
    let scan = exact_scan(prob, n_max, size_budget);
    if scan.truncated {
        return Err(DmlError::BudgetExceeded(format!(
            "orbit point {} exceeds {} bits",
            scan.horizon + 1,
            size_budget.unwrap_or(0)
        )));
    }
    Ok(scan.hits)
}
