use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

use crate::arith::residue::{int_valuation, inv_mod, pow_big};

/// p-adic valuation; `Infinity` is the valuation of exact zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

/// A p-adic number `p^v · u` with the unit `u` known modulo `p^k`.
///
/// An approximate zero (known only to be divisible by `p^a`) is stored with `unit = 0`,
/// `rel_prec = 0` and `v = a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicNumber {
    p: u64,
    v: i64,
    unit: BigInt,
    rel_prec: u32,
    exact_zero: bool,
}

impl PadicNumber {
    pub fn exact_zero(p: u64) -> Self {
        PadicNumber { p, v: 0, unit: BigInt::zero(), rel_prec: 0, exact_zero: true }
    }

    /// Zero known modulo `p^abs`.
    pub fn approx_zero(p: u64, abs: i64) -> Self {
        PadicNumber { p, v: abs, unit: BigInt::zero(), rel_prec: 0, exact_zero: false }
    }

    /// Embeds a rational with relative precision `k`.
    pub fn from_rational(x: &BigRational, p: u64, k: u32) -> Self {
        if x.is_zero() {
            return PadicNumber::exact_zero(p);
        }
        let vn = int_valuation(x.numer(), p).unwrap() as i64;
        let vd = int_valuation(x.denom(), p).unwrap() as i64;
        let pk = pow_big(p, k);
        let num = x.numer() / pow_big(p, vn as u32);
        let den = x.denom() / pow_big(p, vd as u32);
        let unit = (num * inv_mod(&den, &pk).unwrap()).mod_floor(&pk);
        PadicNumber { p, v: vn - vd, unit, rel_prec: k, exact_zero: false }
    }

    pub fn from_int(n: i64, p: u64, k: u32) -> Self {
        PadicNumber::from_rational(&BigRational::from_integer(BigInt::from(n)), p, k)
    }

    /// Builds from an integer known modulo `p^abs`.
    pub fn from_residue(n: &BigInt, p: u64, abs: u32) -> Self {
        let m = pow_big(p, abs);
        let r = n.mod_floor(&m);
        match int_valuation(&r, p) {
            None => PadicNumber::approx_zero(p, abs as i64),
            Some(v) => PadicNumber {
                p,
                v: v as i64,
                unit: r / pow_big(p, v),
                rel_prec: abs - v,
                exact_zero: false,
            },
        }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn is_exact_zero(&self) -> bool {
        self.exact_zero
    }

    /// True when the number is known to be nonzero.
    pub fn is_certified_nonzero(&self) -> bool {
        !self.exact_zero && self.rel_prec > 0
    }

    /// Valuation, or a lower bound for approximate zeros.
    pub fn valuation(&self) -> Valuation {
        if self.exact_zero {
            Valuation::Infinity
        } else {
            Valuation::Finite(self.v)
        }
    }

    /// Absolute precision: the number is known modulo `p^abs`.
    pub fn absolute_precision(&self) -> Option<i64> {
        if self.exact_zero {
            None
        } else {
            Some(self.v + self.rel_prec as i64)
        }
    }

    pub fn relative_precision(&self) -> u32 {
        self.rel_prec
    }

    pub fn unit(&self) -> &BigInt {
        &self.unit
    }

    /// Residue modulo `p^abs` for a p-integral number (`v ≥ 0`), `abs` at most the absolute precision.
    pub fn residue(&self, abs: u32) -> Option<BigInt> {
        let m = pow_big(self.p, abs);
        if self.exact_zero || self.unit.is_zero() {
            return Some(BigInt::zero());
        }
        if self.v < 0 {
            return None;
        }
        Some((pow_big(self.p, self.v as u32) * &self.unit).mod_floor(&m))
    }

    fn min_abs(&self, o: &PadicNumber) -> Option<i64> {
        match (self.absolute_precision(), o.absolute_precision()) {
            (None, None) => None,
            (Some(a), None) | (None, Some(a)) => Some(a),
            (Some(a), Some(b)) => Some(a.min(b)),
        }
    }

    pub fn add(&self, o: &PadicNumber) -> PadicNumber {
        if self.exact_zero {
            return o.clone();
        }
        if o.exact_zero {
            return self.clone();
        }
        let abs = self.min_abs(o).unwrap();
        let w = self.v.min(o.v);
        if abs <= w {
            return PadicNumber::approx_zero(self.p, abs);
        }
        let m = pow_big(self.p, (abs - w) as u32);
        let a = &self.unit * pow_big(self.p, (self.v - w) as u32);
        let b = &o.unit * pow_big(self.p, (o.v - w) as u32);
        let s = (a + b).mod_floor(&m);
        match int_valuation(&s, self.p) {
            None => PadicNumber::approx_zero(self.p, abs),
            Some(t) => PadicNumber {
                p: self.p,
                v: w + t as i64,
                unit: s / pow_big(self.p, t),
                rel_prec: (abs - w - t as i64) as u32,
                exact_zero: false,
            },
        }
    }

    pub fn neg(&self) -> PadicNumber {
        if self.rel_prec == 0 {
            return self.clone();
        }
        let m = pow_big(self.p, self.rel_prec);
        PadicNumber { unit: (-&self.unit).mod_floor(&m), ..self.clone() }
    }

    pub fn sub(&self, o: &PadicNumber) -> PadicNumber {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &PadicNumber) -> PadicNumber {
        if self.exact_zero || o.exact_zero {
            return PadicNumber::exact_zero(self.p);
        }
        if self.rel_prec == 0 || o.rel_prec == 0 {
            // an approximate zero in p^a times anything of valuation w lies in p^(a+w)
            return PadicNumber::approx_zero(self.p, self.v + o.v);
        }
        let k = self.rel_prec.min(o.rel_prec);
        let m = pow_big(self.p, k);
        PadicNumber {
            p: self.p,
            v: self.v + o.v,
            unit: (&self.unit * &o.unit).mod_floor(&m),
            rel_prec: k,
            exact_zero: false,
        }
    }

    /// Division by a certified-nonzero number.
    pub fn div(&self, o: &PadicNumber) -> Option<PadicNumber> {
        if !o.is_certified_nonzero() {
            return None;
        }
        if self.exact_zero {
            return Some(self.clone());
        }
        if self.rel_prec == 0 {
            return Some(PadicNumber::approx_zero(self.p, self.v - o.v));
        }
        let k = self.rel_prec.min(o.rel_prec);
        let m = pow_big(self.p, k);
        let inv = inv_mod(&o.unit, &m)?;
        Some(PadicNumber {
            p: self.p,
            v: self.v - o.v,
            unit: (&self.unit * inv).mod_floor(&m),
            rel_prec: k,
            exact_zero: false,
        })
    }
}

impl fmt::Display for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exact_zero {
            write!(f, "0")
        } else if self.rel_prec == 0 {
            write!(f, "O({}^{})", self.p, self.v)
        } else {
            write!(f, "{}^{} * {} + O({}^{})", self.p, self.v, self.unit, self.p, self.v + self.rel_prec as i64)
        }
    }
}

pub fn valuation(x: &PadicNumber) -> Valuation {
    x.valuation()
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::residue::rat_valuation;
    use crate::arith::scalar::rat;
    use proptest::prelude::*;

    #[test]
    fn valuation_examples() {
        assert_eq!(PadicNumber::from_int(250, 5, 10).valuation(), Valuation::Finite(3));
        assert_eq!(PadicNumber::from_rational(&rat(1, 9), 3, 10).valuation(), Valuation::Finite(-2));
        assert_eq!(valuation(&PadicNumber::exact_zero(7)), Valuation::Infinity);
    }

    #[test]
    fn cancellation_loses_relative_precision() {
        let a = PadicNumber::from_int(1, 5, 4);
        let b = PadicNumber::from_int(26, 5, 4);
        let d = b.sub(&a);
        assert_eq!(d.valuation(), Valuation::Finite(2));
        assert_eq!(d.absolute_precision(), Some(4));
        let z = a.sub(&a);
        assert!(!z.is_certified_nonzero());
        assert!(!z.is_exact_zero());
    }

    fn as_rational(x: &PadicNumber) -> BigRational {
        if x.unit().is_zero() {
            return BigRational::zero();
        }
        let pv = BigRational::from_integer(pow_big(x.prime(), x.v.unsigned_abs() as u32));
        let u = BigRational::from_integer(x.unit().clone());
        if x.v >= 0 {
            u * pv
        } else {
            u / pv
        }
    }

    fn agrees(exact: &BigRational, approx: &PadicNumber) -> bool {
        match approx.absolute_precision() {
            None => exact.is_zero(),
            Some(abs) => match rat_valuation(&(exact - as_rational(approx)), approx.prime()) {
                None => true,
                Some(v) => v >= abs,
            },
        }
    }

    fn small_rational() -> impl Strategy<Value = BigRational> {
        (-2000i64..2000, 1i64..300).prop_map(|(n, d)| rat(n, d))
    }

    proptest! {
        #[test]
        fn arithmetic_matches_exact(a in small_rational(), b in small_rational(),
                                    pi in 0usize..4, k in 1u32..12) {
            let p = [2u64, 3, 5, 7][pi];
            let pa = PadicNumber::from_rational(&a, p, k);
            let pb = PadicNumber::from_rational(&b, p, k);
            prop_assert!(agrees(&(&a + &b), &pa.add(&pb)));
            prop_assert!(agrees(&(&a - &b), &pa.sub(&pb)));
            prop_assert!(agrees(&(&a * &b), &pa.mul(&pb)));
            if !b.is_zero() {
                let q = pa.div(&pb).unwrap();
                prop_assert!(agrees(&(&a / &b), &q));
            }
        }
    }
}
