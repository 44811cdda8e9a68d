//! Reduction of p-integral objects into ℤ/p^e, and polynomials over ℤ/p^e.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::map::{PolyMap, Point};
use super::poly::{Monomial, MultiPoly};
use super::scalar::{FieldKind, Scalar};
use crate::error::{DmlError, Result};

/// p-adic valuation of a nonzero integer; `None` for zero.
pub fn int_valuation(n: &BigInt, p: u64) -> Option<u32> {
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut v = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(&p);
        if !r.is_zero() {
            return Some(v);
        }
        m = q;
        v += 1;
    }
}

/// Valuation of a rational; `None` for zero.
pub fn rat_valuation(x: &BigRational, p: u64) -> Option<i64> {
    let vn = int_valuation(x.numer(), p)? as i64;
    let vd = int_valuation(x.denom(), p).unwrap_or(0) as i64;
    Some(vn - vd)
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let g = a.mod_floor(m).extended_gcd(m);
    if !g.gcd.is_one() {
        return None;
    }
    Some(g.x.mod_floor(m))
}

pub fn pow_big(p: u64, e: u32) -> BigInt {
    num_traits::pow(BigInt::from(p), e as usize)
}

/// The ring ℤ/p^e.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrimePower {
    p: u64,
    e: u32,
    modulus: BigInt,
}

impl PrimePower {
    pub fn new(p: u64, e: u32) -> Self {
        PrimePower { p, e, modulus: pow_big(p, e) }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn exponent(&self) -> u32 {
        self.e
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    pub fn reduce(&self, n: &BigInt) -> BigInt {
        n.mod_floor(&self.modulus)
    }

    /// Image of a p-integral rational.
    pub fn reduce_rational(&self, x: &BigRational) -> Result<BigInt> {
        let den = x.denom();
        if den.is_multiple_of(&BigInt::from(self.p)) {
            return Err(DmlError::NonIntegralAtP { p: self.p, denominator: den.to_string() });
        }
        let inv = inv_mod(den, &self.modulus).expect("denominator coprime to p");
        Ok(self.reduce(&(x.numer() * inv)))
    }

    pub fn reduce_scalar(&self, x: &Scalar) -> Result<BigInt> {
        match x {
            Scalar::Rational(r) => self.reduce_rational(r),
            other => Err(DmlError::FieldMismatch {
                left: FieldKind::Rational.to_string(),
                right: other.field().to_string(),
            }),
        }
    }
}

/// Polynomial with coefficients in ℤ/p^e, nonzero residues only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResiduePoly {
    nvars: usize,
    ring: PrimePower,
    terms: BTreeMap<Monomial, BigInt>,
}

impl ResiduePoly {
    pub fn zero(nvars: usize, ring: PrimePower) -> Self {
        ResiduePoly { nvars, ring, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, ring: PrimePower, c: BigInt) -> Self {
        let mut r = ResiduePoly::zero(nvars, ring);
        r.add_term(Monomial::one(nvars), c);
        r
    }

    pub fn var(nvars: usize, ring: PrimePower, i: usize) -> Self {
        let mut r = ResiduePoly::zero(nvars, ring);
        r.add_term(Monomial::var(nvars, i), BigInt::one());
        r
    }

    pub fn from_terms(
        nvars: usize,
        ring: PrimePower,
        terms: impl IntoIterator<Item = (Vec<u32>, BigInt)>,
    ) -> Self {
        let mut r = ResiduePoly::zero(nvars, ring);
        for (e, c) in terms {
            r.add_term(Monomial(e), c);
        }
        r
    }

    pub fn add_term(&mut self, m: Monomial, c: BigInt) {
        let sum = match self.terms.remove(&m) {
            Some(old) => self.ring.reduce(&(old + c)),
            None => self.ring.reduce(&c),
        };
        if !sum.is_zero() {
            self.terms.insert(m, sum);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn ring(&self) -> &PrimePower {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// Gauss valuation: min p-adic valuation of the coefficients, `None` if zero mod p^e.
    pub fn gauss_valuation(&self) -> Option<u32> {
        self.terms.values().filter_map(|c| int_valuation(c, self.ring.p)).min()
    }

    pub fn add(&self, o: &ResiduePoly) -> ResiduePoly {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn neg(&self) -> ResiduePoly {
        let mut r = ResiduePoly::zero(self.nvars, self.ring.clone());
        for (m, c) in &self.terms {
            r.add_term(m.clone(), -c);
        }
        r
    }

    pub fn sub(&self, o: &ResiduePoly) -> ResiduePoly {
        self.add(&o.neg())
    }

    pub fn scale(&self, s: &BigInt) -> ResiduePoly {
        let mut r = ResiduePoly::zero(self.nvars, self.ring.clone());
        for (m, c) in &self.terms {
            r.add_term(m.clone(), c * s);
        }
        r
    }

    pub fn mul(&self, o: &ResiduePoly) -> ResiduePoly {
        let mut acc: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                *acc.entry(m1.mul(m2)).or_insert_with(BigInt::zero) += c1 * c2;
            }
        }
        let terms = acc
            .into_iter()
            .map(|(m, c)| (m, self.ring.reduce(&c)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        ResiduePoly { nvars: self.nvars, ring: self.ring.clone(), terms }
    }

    pub fn eval(&self, x: &[BigInt]) -> BigInt {
        let mut acc = BigInt::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &e) in x.iter().zip(&m.0) {
                match e {
                    0 => {}
                    1..=8 => {
                        for _ in 0..e {
                            t = self.ring.reduce(&(t * xi));
                        }
                    }
                    _ => t = self.ring.reduce(&(t * xi.modpow(&BigInt::from(e), self.ring.modulus()))),
                }
            }
            acc += t;
        }
        self.ring.reduce(&acc)
    }

    /// Substitution `self(subs)`, aborting when a partial result exceeds `max_terms`.
    pub fn compose(&self, subs: &[ResiduePoly], max_terms: usize) -> Result<ResiduePoly> {
        let out_vars = subs.first().map(|s| s.nvars).unwrap_or(0);
        let one = ResiduePoly::constant(out_vars, self.ring.clone(), BigInt::one());
        let mut powers: Vec<Vec<ResiduePoly>> =
            subs.iter().map(|s| vec![one.clone(), s.clone()]).collect();
        let mut r = ResiduePoly::zero(out_vars, self.ring.clone());
        for (m, c) in &self.terms {
            let mut t = one.scale(c);
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul(&subs[i]);
                    if next.nterms() > max_terms {
                        return Err(DmlError::BudgetExceeded(format!(
                            "residue composition exceeded {max_terms} terms"
                        )));
                    }
                    powers[i].push(next);
                }
                t = t.mul(&powers[i][e as usize]);
            }
            r = r.add(&t);
            if r.nterms() > max_terms {
                return Err(DmlError::BudgetExceeded(format!(
                    "residue composition exceeded {max_terms} terms"
                )));
            }
        }
        Ok(r)
    }

    /// Same polynomial viewed modulo a smaller power of p.
    pub fn reduce_to(&self, ring: &PrimePower) -> ResiduePoly {
        assert_eq!(ring.p, self.ring.p);
        let mut r = ResiduePoly::zero(self.nvars, ring.clone());
        for (m, c) in &self.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }
}

impl fmt::Display for ResiduePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lifted = MultiPoly::from_terms(
            self.nvars,
            FieldKind::Rational,
            self.terms
                .iter()
                .map(|(m, c)| (m.0.clone(), Scalar::Rational(BigRational::from_integer(c.clone())))),
        );
        write!(f, "{lifted} mod {}^{}", self.ring.p, self.ring.e)
    }
}

/// A polynomial map reduced into ℤ/p^e.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueMap {
    pub coords: Vec<ResiduePoly>,
}

impl ResidueMap {
    pub fn eval(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.coords.iter().map(|c| c.eval(x)).collect()
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

/// Result of reducing a map, polynomial or point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Residue {
    Poly(ResiduePoly),
    Map(ResidueMap),
    Point(Vec<BigInt>),
}

pub fn reduce_poly(f: &MultiPoly, ring: &PrimePower) -> Result<ResiduePoly> {
    let mut r = ResiduePoly::zero(f.nvars(), ring.clone());
    for (m, c) in f.terms() {
        r.add_term(m.clone(), ring.reduce_scalar(c)?);
    }
    Ok(r)
}

pub fn reduce_map(f: &PolyMap, ring: &PrimePower) -> Result<ResidueMap> {
    Ok(ResidueMap { coords: f.coords().iter().map(|c| reduce_poly(c, ring)).collect::<Result<_>>()? })
}

pub fn reduce_point(x: &Point, ring: &PrimePower) -> Result<Vec<BigInt>> {
    x.coords().iter().map(|c| ring.reduce_scalar(c)).collect()
}

/// Things that can be reduced modulo p^e.
pub enum Reducible<'a> {
    Poly(&'a MultiPoly),
    Map(&'a PolyMap),
    Point(&'a Point),
}

pub fn reduce_mod_p(obj: Reducible<'_>, p: u64, e: u32) -> Result<Residue> {
    let ring = PrimePower::new(p, e);
    Ok(match obj {
        Reducible::Poly(f) => Residue::Poly(reduce_poly(f, &ring)?),
        Reducible::Map(f) => Residue::Map(reduce_map(f, &ring)?),
        Reducible::Point(x) => Residue::Point(reduce_point(x, &ring)?),
    })
}

/// True when every coefficient is p-integral.
pub fn is_p_integral_poly(f: &MultiPoly, p: u64) -> bool {
    f.terms().all(|(_, c)| scalar_is_p_integral(c, p))
}

pub fn scalar_is_p_integral(c: &Scalar, p: u64) -> bool {
    match c {
        Scalar::Rational(r) => !r.denom().is_multiple_of(&BigInt::from(p)),
        _ => false,
    }
}

/// Lift a residue in [0, p^e) to the symmetric range, for display.
pub fn symmetric(c: &BigInt, ring: &PrimePower) -> BigInt {
    let half: BigInt = ring.modulus() / 2;
    if c > &half {
        c - ring.modulus()
    } else {
        c.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::parse::{parse_map, parse_point};

    #[test]
    fn nonintegral_denominator() {
        let f = parse_map("(x1/3 + 1)", 1, FieldKind::Rational).unwrap();
        assert!(matches!(
            reduce_mod_p(Reducible::Map(&f), 3, 1),
            Err(DmlError::NonIntegralAtP { p: 3, .. })
        ));
    }

    #[test]
    fn inverse_of_two_mod_25() {
        let x = parse_point("(7/2)", FieldKind::Rational).unwrap();
        let r = reduce_mod_p(Reducible::Point(&x), 5, 2).unwrap();
        assert_eq!(r, Residue::Point(vec![BigInt::from(16)]));
    }

    #[test]
    fn reduce_to_f2() {
        let f = parse_map("(x1^2 + 1)", 1, FieldKind::Rational).unwrap();
        let Residue::Map(m) = reduce_mod_p(Reducible::Map(&f), 2, 1).unwrap() else { panic!() };
        assert_eq!(m.coords[0].nterms(), 2);
        assert_eq!(m.coords[0].coeff(&Monomial(vec![2])), BigInt::one());
        assert_eq!(m.coords[0].coeff(&Monomial(vec![0])), BigInt::one());
        let g = parse_map("(3*x1^2 + 1)", 1, FieldKind::Rational).unwrap();
        let Residue::Map(m2) = reduce_mod_p(Reducible::Map(&g), 2, 1).unwrap() else { panic!() };
        assert_eq!(m, m2);
    }

    #[test]
    fn valuations() {
        assert_eq!(int_valuation(&BigInt::from(250), 5), Some(3));
        assert_eq!(int_valuation(&BigInt::from(0), 5), None);
        assert_eq!(rat_valuation(&BigRational::new(1.into(), 9.into()), 3), Some(-2));
    }
}
