use std::cmp::Ordering;

use num_rational::BigRational;
use num_bigint::BigInt;
use serde::Serialize;

use super::mahler::factorial_valuation;

/// The convergence radius `R = p^(-1/(p-1))` (or 1 for residue characteristic 0).
///
/// Norms are compared through exponents: `p^-a` versus `p^(-1/(p-1))` is decided by
/// comparing `a·(p-1)` with 1, exactly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RConstant {
    pub prime: Option<u64>,
}

impl RConstant {
    pub fn new(p: u64) -> Self {
        RConstant { prime: Some(p) }
    }

    pub fn residue_char_zero() -> Self {
        RConstant { prime: None }
    }

    /// The exponent `e` with `R = p^e`, i.e. `-1/(p-1)`; zero when `R = 1`.
    pub fn exponent(&self) -> BigRational {
        match self.prime {
            Some(p) => BigRational::new(BigInt::from(-1), BigInt::from(p - 1)),
            None => BigRational::from_integer(BigInt::from(0)),
        }
    }

    /// Compares the norm `p^-a` with `R`.
    pub fn compare_norm(&self, a: &BigRational) -> Ordering {
        // p^-a vs p^e  <=>  e vs -a (larger exponent = larger norm)
        (-a).cmp(&self.exponent())
    }

    /// `p^-d < R` strictly, for an integer exponent `d`.
    pub fn norm_strictly_below(&self, d: u32) -> bool {
        match self.prime {
            Some(p) => d as u64 * (p - 1) > 1,
            None => d > 0,
        }
    }

    /// `|i!| >= R^i`.
    pub fn factorial_bound_holds(&self, i: u64) -> bool {
        match self.prime {
            Some(p) => factorial_valuation(i, p) * (p - 1) <= i,
            None => true,
        }
    }
}
