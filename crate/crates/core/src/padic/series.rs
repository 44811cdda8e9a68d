use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use super::number::PadicNumber;
use crate::arith::residue::{int_valuation, pow_big};

/// An integral p-adic power series on the closed unit disc, known up to `p^-certified()`.
///
/// Certified statement: the represented function is `Σ c_i T^i` with
/// `|c_i - coeffs[i]| ≤ p^-precision` for `i ≤ D`, and `|c_i| ≤ p^-tail` for `i > D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicSeries {
    p: u64,
    coeffs: Vec<BigInt>,
    precision: u32,
    tail: u32,
}

impl PadicSeries {
    pub fn new(p: u64, coeffs: Vec<BigInt>, precision: u32, tail: u32) -> Self {
        let m = pow_big(p, precision);
        let coeffs = coeffs.into_iter().map(|c| c.mod_floor(&m)).collect();
        PadicSeries { p, coeffs, precision, tail }
    }

    /// A polynomial with integer coefficients, known exactly; precision is the working cap.
    pub fn exact(p: u64, coeffs: &[i64], precision: u32) -> Self {
        PadicSeries::new(p, coeffs.iter().map(|&c| BigInt::from(c)).collect(), precision, precision)
    }

    pub fn zero(p: u64, precision: u32) -> Self {
        PadicSeries::new(p, vec![BigInt::zero()], precision, precision)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn tail(&self) -> u32 {
        self.tail
    }

    /// Every coefficient is known modulo `p^certified()`.
    pub fn certified(&self) -> u32 {
        self.precision.min(self.tail)
    }

    /// Truncation degree D.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coefficient(&self, i: usize) -> PadicNumber {
        let c = self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero);
        PadicNumber::from_residue(&c, self.p, self.certified())
    }

    /// Certified valuation of coefficient `i`, `None` when it is indistinguishable from zero.
    pub fn certified_valuation(&self, i: usize) -> Option<u32> {
        let m = pow_big(self.p, self.certified());
        let c = self.coeffs.get(i)?.mod_floor(&m);
        int_valuation(&c, self.p)
    }

    /// True when every coefficient vanishes modulo `p^certified()`.
    pub fn is_degenerate(&self) -> bool {
        (0..self.coeffs.len()).all(|i| self.certified_valuation(i).is_none())
    }

    fn modulus(&self) -> BigInt {
        pow_big(self.p, self.precision)
    }

    pub fn add(&self, o: &PadicSeries) -> PadicSeries {
        let n = self.coeffs.len().max(o.coeffs.len());
        let c = (0..n)
            .map(|i| {
                self.coeffs.get(i).cloned().unwrap_or_default()
                    + o.coeffs.get(i).cloned().unwrap_or_default()
            })
            .collect();
        PadicSeries::new(
            self.p,
            c,
            self.precision.min(o.precision),
            self.tail.min(o.tail),
        )
    }

    pub fn neg(&self) -> PadicSeries {
        PadicSeries::new(self.p, self.coeffs.iter().map(|c| -c).collect(), self.precision, self.tail)
    }

    pub fn sub(&self, o: &PadicSeries) -> PadicSeries {
        self.add(&o.neg())
    }

    pub fn scale(&self, s: &BigInt) -> PadicSeries {
        PadicSeries::new(self.p, self.coeffs.iter().map(|c| c * s).collect(), self.precision, self.tail)
    }

    pub fn add_constant(&self, s: &BigInt) -> PadicSeries {
        let mut c = self.coeffs.clone();
        if c.is_empty() {
            c.push(BigInt::zero());
        }
        c[0] += s;
        PadicSeries::new(self.p, c, self.precision, self.tail)
    }

    /// Product truncated at the larger input degree; dropped coefficients are absorbed
    /// into the tail bound.
    pub fn mul(&self, o: &PadicSeries) -> PadicSeries {
        let prec = self.precision.min(o.precision);
        let m = pow_big(self.p, prec);
        let keep = self.coeffs.len().max(o.coeffs.len());
        let mut full = vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                full[i + j] += a * b;
            }
        }
        let mut tail = self.certified().min(o.certified());
        for c in full.iter().skip(keep) {
            if let Some(v) = int_valuation(&c.mod_floor(&m), self.p) {
                tail = tail.min(v);
            }
        }
        full.truncate(keep);
        PadicSeries::new(self.p, full, prec, tail)
    }

    pub fn pow(&self, e: u32) -> PadicSeries {
        let mut acc = PadicSeries::new(self.p, vec![BigInt::one()], self.precision, self.tail);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Value at an integer point, modulo `p^certified()`.
    pub fn eval(&self, t: &BigInt) -> BigInt {
        let m = pow_big(self.p, self.certified());
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = (acc * t + c).mod_floor(&m);
        }
        acc
    }

    pub fn derivative(&self) -> PadicSeries {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigInt::from(i))
            .collect::<Vec<_>>();
        let c = if c.is_empty() { vec![BigInt::zero()] } else { c };
        PadicSeries::new(self.p, c, self.precision, self.tail)
    }

    /// The series `T ↦ S(offset + p^scale · T)`, again on the closed unit disc.
    pub fn recenter(&self, offset: &BigInt, scale: u32) -> PadicSeries {
        let m = self.modulus();
        let step = pow_big(self.p, scale);
        // Horner in the polynomial ring: acc = acc * (offset + step T) + c_i
        let mut acc: Vec<BigInt> = vec![BigInt::zero()];
        for c in self.coeffs.iter().rev() {
            let mut next = vec![BigInt::zero(); acc.len() + 1];
            for (k, a) in acc.iter().enumerate() {
                next[k] += a * offset;
                next[k + 1] += a * &step;
            }
            next[0] += c;
            for x in next.iter_mut() {
                *x = x.mod_floor(&m);
            }
            while next.len() > 1 && next.last().map(|x| x.is_zero()).unwrap_or(false) {
                next.pop();
            }
            acc = next;
        }
        PadicSeries::new(self.p, acc, self.precision, self.tail)
    }

    /// Lowers the stored precision (never raises it).
    pub fn with_precision(&self, precision: u32) -> PadicSeries {
        PadicSeries::new(self.p, self.coeffs.clone(), precision.min(self.precision), self.tail)
    }
}

impl fmt::Display for PadicSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*T")?,
                _ => write!(f, "{c}*T^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O({}^{})", self.p, self.certified())
    }
}

/// Compact summary used in certificates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeriesSummary {
    pub prime: u64,
    pub degree: usize,
    pub precision: u32,
    pub tail: u32,
    pub leading_valuations: Vec<Option<u32>>,
}

impl PadicSeries {
    pub fn summary(&self, shown: usize) -> SeriesSummary {
        SeriesSummary {
            prime: self.p,
            degree: self.degree(),
            precision: self.precision,
            tail: self.tail,
            leading_valuations: (0..self.coeffs.len().min(shown))
                .map(|i| self.certified_valuation(i))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recenter_matches_evaluation() {
        let s = PadicSeries::exact(5, &[3, 1, 7, 2], 10);
        let r = s.recenter(&BigInt::from(2), 1);
        for t in 0..6 {
            let direct = s.eval(&BigInt::from(2 + 5 * t));
            assert_eq!(r.eval(&BigInt::from(t)), direct);
        }
    }

    #[test]
    fn product_absorbs_dropped_terms() {
        let a = PadicSeries::exact(3, &[1, 9], 8);
        let b = a.mul(&a);
        // 1 + 18T + 81T^2 truncated at degree 1: tail drops to v(81) = 4
        assert_eq!(b.degree(), 1);
        assert_eq!(b.tail(), 4);
        assert_eq!(b.certified(), 4);
    }

    #[test]
    fn degenerate_detection() {
        let s = PadicSeries::exact(5, &[25, 125], 2);
        assert!(s.is_degenerate());
        let s = PadicSeries::exact(5, &[25, 126], 3);
        assert!(!s.is_degenerate());
    }
}
