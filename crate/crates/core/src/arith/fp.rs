//! Prime fields and univariate polynomials over them.

use std::fmt;

use crate::error::{DmlError, Result};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(DmlError::Invalid(format!("{p} is not prime")))
    }
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    if p <= u32::MAX as u64 {
        // operands are reduced, so the product fits in 64 bits
        (a * b) % p
    } else {
        ((a as u128 * b as u128) % p as u128) as u64
    }
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

/// Element of 𝔽_p, value kept in `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp {
    value: u64,
    p: u64,
}

impl Fp {
    pub fn new(value: i64, p: u64) -> Self {
        let v = value.rem_euclid(p as i64) as u64;
        Fp { value: v, p }
    }

    pub fn from_u64(value: u64, p: u64) -> Self {
        Fp { value: value % p, p }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn add(&self, o: &Fp) -> Fp {
        Fp::from_u64(self.value + o.value, self.p)
    }

    pub fn sub(&self, o: &Fp) -> Fp {
        Fp::from_u64(self.value + self.p - o.value, self.p)
    }

    pub fn neg(&self) -> Fp {
        Fp::from_u64(self.p - self.value, self.p)
    }

    pub fn mul(&self, o: &Fp) -> Fp {
        Fp { value: mul_mod(self.value, o.value, self.p), p: self.p }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Fp> {
        if self.value == 0 {
            None
        } else {
            Some(Fp { value: pow_mod(self.value, self.p - 2, self.p), p: self.p })
        }
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Dense polynomial in `t` over 𝔽_p, coefficients low degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FpPoly {
    coeffs: Vec<u64>,
    p: u64,
}

impl FpPoly {
    pub fn zero(p: u64) -> Self {
        FpPoly { coeffs: Vec::new(), p }
    }

    pub fn constant(c: u64, p: u64) -> Self {
        FpPoly::from_coeffs(vec![c], p)
    }

    /// The polynomial `t`.
    pub fn t(p: u64) -> Self {
        FpPoly::from_coeffs(vec![0, 1], p)
    }

    pub fn from_coeffs(mut coeffs: Vec<u64>, p: u64) -> Self {
        for c in coeffs.iter_mut() {
            *c %= p;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FpPoly { coeffs, p }
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn add(&self, o: &FpPoly) -> FpPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let c = (0..n)
            .map(|i| {
                self.coeffs.get(i).copied().unwrap_or(0) + o.coeffs.get(i).copied().unwrap_or(0)
            })
            .collect();
        FpPoly::from_coeffs(c, self.p)
    }

    pub fn neg(&self) -> FpPoly {
        let c = self.coeffs.iter().map(|&a| (self.p - a) % self.p).collect();
        FpPoly::from_coeffs(c, self.p)
    }

    pub fn sub(&self, o: &FpPoly) -> FpPoly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &FpPoly) -> FpPoly {
        if self.is_zero() || o.is_zero() {
            return FpPoly::zero(self.p);
        }
        let mut c = vec![0u64; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                c[i + j] = (c[i + j] + mul_mod(a, b, self.p)) % self.p;
            }
        }
        FpPoly::from_coeffs(c, self.p)
    }

    pub fn scale(&self, s: u64) -> FpPoly {
        let c = self.coeffs.iter().map(|&a| mul_mod(a, s, self.p)).collect();
        FpPoly::from_coeffs(c, self.p)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &FpPoly) -> (FpPoly, FpPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let inv_lead = Fp::from_u64(d.leading(), self.p).inv().expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        let mut quo = vec![0u64; self.coeffs.len().saturating_sub(dd).max(1)];
        while rem.len() > dd {
            let k = rem.len() - 1 - dd;
            let c = mul_mod(*rem.last().unwrap(), inv_lead.value(), self.p);
            quo[k] = c;
            for (j, &b) in d.coeffs.iter().enumerate() {
                let sub = mul_mod(c, b, self.p);
                rem[k + j] = (rem[k + j] + self.p - sub) % self.p;
            }
            while rem.last() == Some(&0) {
                rem.pop();
            }
        }
        (FpPoly::from_coeffs(quo, self.p), FpPoly::from_coeffs(rem, self.p))
    }

    pub fn monic(&self) -> FpPoly {
        match Fp::from_u64(self.leading(), self.p).inv() {
            Some(inv) => self.scale(inv.value()),
            None => self.clone(),
        }
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(&self, o: &FpPoly) -> FpPoly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }
}

impl fmt::Display for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "t")?,
                (1, c) => write!(f, "{c}*t")?,
                (i, 1) => write!(f, "t^{i}")?,
                (i, c) => write!(f, "{c}*t^{i}")?,
            }
        }
        Ok(())
    }
}

/// Reduced rational function over 𝔽_p: gcd(num, den) = 1, den monic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: FpPoly,
    den: FpPoly,
}

impl RatFunc {
    pub fn new(num: FpPoly, den: FpPoly) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        let p = num.modulus();
        if num.is_zero() {
            return Some(RatFunc { num, den: FpPoly::constant(1, p) });
        }
        if den.is_one() {
            return Some(RatFunc { num, den });
        }
        if den.degree() == Some(0) {
            let c = Fp::from_u64(den.leading(), p).inv().expect("nonzero");
            return Some(RatFunc { num: num.scale(c.value()), den: FpPoly::constant(1, p) });
        }
        let g = num.gcd(&den);
        let (n, _) = num.div_rem(&g);
        let (d, _) = den.div_rem(&g);
        let lead = Fp::from_u64(d.leading(), p).inv().expect("nonzero");
        Some(RatFunc { num: n.scale(lead.value()), den: d.scale(lead.value()) })
    }

    pub fn from_poly(num: FpPoly) -> Self {
        let p = num.modulus();
        RatFunc { num, den: FpPoly::constant(1, p) }
    }

    pub fn zero(p: u64) -> Self {
        RatFunc::from_poly(FpPoly::zero(p))
    }

    pub fn constant(c: i64, p: u64) -> Self {
        RatFunc::from_poly(FpPoly::constant(Fp::new(c, p).value(), p))
    }

    pub fn t(p: u64) -> Self {
        RatFunc::from_poly(FpPoly::t(p))
    }

    pub fn num(&self) -> &FpPoly {
        &self.num
    }

    pub fn den(&self) -> &FpPoly {
        &self.den
    }

    pub fn modulus(&self) -> u64 {
        self.num.modulus()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        if self.den == o.den {
            return RatFunc::new(self.num.add(&o.num), self.den.clone()).unwrap();
        }
        let n = self.num.mul(&o.den).add(&o.num.mul(&self.den));
        RatFunc::new(n, self.den.mul(&o.den)).unwrap()
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        RatFunc::new(self.num.mul(&o.num), self.den.mul(&o.den)).unwrap()
    }

    pub fn inv(&self) -> Option<RatFunc> {
        RatFunc::new(self.den.clone(), self.num.clone())
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fp_inverse() {
        for a in 1..7 {
            let x = Fp::new(a, 7);
            assert_eq!(x.mul(&x.inv().unwrap()), Fp::new(1, 7));
        }
        assert!(Fp::new(0, 7).inv().is_none());
    }

    #[test]
    fn poly_gcd_and_reduction() {
        let p = 2;
        // (t+1)^2 = t^2 + 1 over F_2
        let tp1 = FpPoly::from_coeffs(vec![1, 1], p);
        let sq = tp1.mul(&tp1);
        assert_eq!(sq, FpPoly::from_coeffs(vec![1, 0, 1], p));
        let r = RatFunc::new(sq, tp1.clone()).unwrap();
        assert_eq!(r.num(), &tp1);
        assert!(r.den().is_one());
    }

    #[test]
    fn denominator_is_monic() {
        let p = 5;
        let r = RatFunc::new(FpPoly::constant(1, p), FpPoly::from_coeffs(vec![1, 3], p)).unwrap();
        assert_eq!(r.den().leading(), 1);
        // 1/(3t+1) = 2/(t+2) since 3^{-1} = 2 mod 5
        assert_eq!(r.num(), &FpPoly::constant(2, p));
        assert_eq!(r.den(), &FpPoly::from_coeffs(vec![2, 1], p));
    }

    #[test]
    fn one_minus_t_plus_t_is_one() {
        let p = 3;
        let t = RatFunc::t(p);
        let one = RatFunc::constant(1, p);
        assert_eq!(one.sub(&t).add(&t), one);
    }
}
