//! Sparse multivariate polynomials over a [`FieldKind`].

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use super::scalar::{FieldKind, Scalar};
use crate::error::{DmlError, Result};

/// Exponent vector ordered graded-lexicographically (total degree first, then lex).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Total degree; the zero polynomial has degree `NegInfinity`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(u32),
}

impl Degree {
    pub fn finite(&self) -> Option<u32> {
        match self {
            Degree::Finite(d) => Some(*d),
            Degree::NegInfinity => None,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    nvars: usize,
    field: FieldKind,
    terms: BTreeMap<Monomial, Scalar>,
}

impl MultiPoly {
    pub fn zero(nvars: usize, field: FieldKind) -> Self {
        MultiPoly { nvars, field, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        let field = c.field();
        MultiPoly::monomial(nvars, field, Monomial::one(nvars), c)
    }

    pub fn var(nvars: usize, field: FieldKind, i: usize) -> Self {
        MultiPoly::monomial(nvars, field, Monomial::var(nvars, i), field.one())
    }

    pub fn monomial(nvars: usize, field: FieldKind, m: Monomial, c: Scalar) -> Self {
        debug_assert_eq!(m.0.len(), nvars);
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MultiPoly { nvars, field, terms }
    }

    /// Builds from (exponents, coefficient) pairs, merging duplicates and dropping zeros.
    pub fn from_terms(
        nvars: usize,
        field: FieldKind,
        terms: impl IntoIterator<Item = (Vec<u32>, Scalar)>,
    ) -> Self {
        let mut p = MultiPoly::zero(nvars, field);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length");
            p.add_term(Monomial(e), c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(old) => {
                let s = old.add(&c);
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn field(&self) -> FieldKind {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn total_degree(&self) -> Degree {
        // grlex order puts a maximal-degree monomial last
        match self.terms.keys().next_back() {
            Some(m) => Degree::Finite(m.degree()),
            None => Degree::NegInfinity,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn constant_term(&self) -> Scalar {
        self.coeff(&Monomial::one(self.nvars))
    }

    pub fn add(&self, o: &MultiPoly) -> MultiPoly {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            field: self.field,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, o: &MultiPoly) -> MultiPoly {
        self.add(&o.neg())
    }

    pub fn scale(&self, s: &Scalar) -> MultiPoly {
        if s.is_zero() {
            return MultiPoly::zero(self.nvars, self.field);
        }
        MultiPoly {
            nvars: self.nvars,
            field: self.field,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.mul(s))).collect(),
        }
    }

    pub fn mul(&self, o: &MultiPoly) -> MultiPoly {
        let mut r = MultiPoly::zero(self.nvars, self.field);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                r.add_term(m1.mul(m2), c1.mul(c2));
            }
        }
        r
    }

    pub fn pow(&self, mut e: u32) -> MultiPoly {
        let mut acc = MultiPoly::constant(self.nvars, self.field.one());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn eval(&self, x: &[Scalar]) -> Scalar {
        assert_eq!(x.len(), self.nvars);
        let mut acc: Option<Scalar> = None;
        for (m, c) in &self.terms {
            let mut t: Option<Scalar> = (!c.is_one()).then(|| c.clone());
            for (xi, &e) in x.iter().zip(&m.0) {
                if e > 0 {
                    let xe = xi.pow(e);
                    t = Some(match t {
                        Some(t) => t.mul(&xe),
                        None => xe,
                    });
                }
            }
            let t = t.unwrap_or_else(|| c.clone());
            acc = Some(match acc {
                Some(a) => a.add(&t),
                None => t,
            });
        }
        acc.unwrap_or_else(|| self.field.zero())
    }

    /// Substitutes `subs[i]` for variable `i`; the result lives in `subs`' variable count.
    /// `max_terms` bounds every intermediate and final term count.
    pub fn compose(&self, subs: &[MultiPoly], max_terms: Option<usize>) -> Result<MultiPoly> {
        assert_eq!(subs.len(), self.nvars);
        let out_vars = subs.first().map(|s| s.nvars).unwrap_or(0);
        let check = |p: &MultiPoly| -> Result<()> {
            match max_terms {
                Some(cap) if p.nterms() > cap => Err(DmlError::BudgetExceeded(format!(
                    "composition produced {} terms (cap {cap})",
                    p.nterms()
                ))),
                _ => Ok(()),
            }
        };
        // powers[i][e] = subs[i]^e, filled lazily
        let mut powers: Vec<Vec<MultiPoly>> = subs
            .iter()
            .map(|s| vec![MultiPoly::constant(out_vars, self.field.one()), s.clone()])
            .collect();
        let mut r = MultiPoly::zero(out_vars, self.field);
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(out_vars, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul(&subs[i]);
                    check(&next)?;
                    powers[i].push(next);
                }
                t = t.mul(&powers[i][e as usize]);
                check(&t)?;
            }
            r = r.add(&t);
            check(&r)?;
        }
        Ok(r)
    }

    /// Partial derivative with respect to variable `i` (characteristic 0 only meaningful
    /// as written; over 𝔽_p the integer factor is reduced).
    pub fn derivative(&self, i: usize) -> MultiPoly {
        let mut r = MultiPoly::zero(self.nvars, self.field);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[i] -= 1;
            r.add_term(m2, c.mul(&self.field.from_int(e as i64)));
        }
        r
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let (neg, mag) = if c.is_negative() { (true, c.neg()) } else { (false, c.clone()) };
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let vars: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { format!("x{}", i + 1) } else { format!("x{}^{e}", i + 1) })
                .collect();
            let coeff = if mag.is_compound() { format!("({mag})") } else { mag.to_string() };
            if vars.is_empty() {
                write!(f, "{coeff}")?;
            } else if mag.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{coeff}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::scalar::rat;

    fn q(n: i64) -> Scalar {
        Scalar::Rational(rat(n, 1))
    }

    #[test]
    fn zero_has_sentinel_degree() {
        let z = MultiPoly::zero(2, FieldKind::Rational);
        assert_eq!(z.total_degree(), Degree::NegInfinity);
        assert!(Degree::NegInfinity < Degree::Finite(0));
    }

    #[test]
    fn cancellation_drops_terms() {
        let x = MultiPoly::var(1, FieldKind::Rational, 0);
        let d = x.sub(&x);
        assert!(d.is_zero());
        assert_eq!(d.nterms(), 0);
    }

    #[test]
    fn grlex_printing() {
        let f = MultiPoly::from_terms(
            2,
            FieldKind::Rational,
            vec![(vec![0, 0], q(5)), (vec![1, 0], q(-1)), (vec![2, 1], q(3)), (vec![0, 3], q(1))],
        );
        assert_eq!(f.to_string(), "3*x1^2*x2 + x2^3 - x1 + 5");
        assert_eq!(f.total_degree(), Degree::Finite(3));
    }

    #[test]
    fn derivative_of_square() {
        let x = MultiPoly::var(1, FieldKind::Rational, 0);
        let f = x.pow(2);
        assert_eq!(f.derivative(0), x.scale(&q(2)));
    }

    #[test]
    fn compose_budget() {
        let x = MultiPoly::var(2, FieldKind::Rational, 0);
        let y = MultiPoly::var(2, FieldKind::Rational, 1);
        let s = x.add(&y).add(&MultiPoly::constant(2, q(1)));
        let f = x.pow(6);
        assert!(matches!(
            f.compose(&[s.clone(), y.clone()], Some(10)),
            Err(DmlError::BudgetExceeded(_))
        ));
        assert!(f.compose(&[s, y], None).is_ok());
    }
}
