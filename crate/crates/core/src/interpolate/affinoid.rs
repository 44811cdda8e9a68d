use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::arith::map::{PolyMap, Point};
use crate::arith::residue::{reduce_map, reduce_point, PrimePower, ResiduePoly};
use crate::error::{DmlError, Result};
use crate::padic::RConstant;

/// Where a recentered map came from: `f^m(center + p^scale · u) = center + p^scale · H(u)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub map: String,
    pub center: String,
    pub scale: u32,
    pub iterate: u64,
}

/// A polynomial self-map `H` of the closed unit polydisc over ℤ_p, coefficients known mod `p^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffinoidSelfMap {
    ring: PrimePower,
    coords: Vec<ResiduePoly>,
    provenance: Option<Provenance>,
}

/// Certified bound `‖Δ_H‖ ≤ p^-d`. When the displacement vanishes modulo `p^k`,
/// `d = k` and `vanishes` is set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaNorm {
    pub d: u32,
    pub vanishes: bool,
}

impl DeltaNorm {
    pub fn below_r(&self, p: u64) -> bool {
        RConstant::new(p).norm_strictly_below(self.d)
    }
}

impl AffinoidSelfMap {
    pub fn new(ring: PrimePower, coords: Vec<ResiduePoly>) -> Result<Self> {
        let n = coords.len();
        if n == 0 {
            return Err(DmlError::Invalid("affinoid map needs at least one coordinate".into()));
        }
        for c in &coords {
            if c.nvars() != n {
                return Err(DmlError::DimensionMismatch { expected: n, found: c.nvars() });
            }
            if c.ring() != &ring {
                return Err(DmlError::Invalid("coordinate precision mismatch".into()));
            }
        }
        Ok(AffinoidSelfMap { ring, coords, provenance: None })
    }

    /// Reduces a p-integral rational map modulo `p^k`; integral coefficients keep the unit
    /// polydisc invariant.
    pub fn from_map(f: &PolyMap, p: u64, k: u32) -> Result<Self> {
        let ring = PrimePower::new(p, k);
        let m = reduce_map(f, &ring)?;
        AffinoidSelfMap::new(ring, m.coords)
    }

    /// `H(u) = (f^m(y + p^e u) - y) / p^e` modulo `p^k`.
    ///
    /// Fails with `ContractionNotCertified` when `f^m(y) ≢ y (mod p^e)`, since then `H`
    /// is not integral.
    pub fn recenter_at(
        f: &PolyMap,
        y: &Point,
        p: u64,
        e: u32,
        m: u64,
        k: u32,
        max_terms: usize,
    ) -> Result<Self> {
        let n = f.dim();
        let big = PrimePower::new(p, k + e);
        let fr = reduce_map(f, &big)?;
        let yr = reduce_point(y, &big)?;
        let scale = crate::arith::residue::pow_big(p, e);
        // start from u ↦ y + p^e u
        let mut cur: Vec<ResiduePoly> = (0..n)
            .map(|i| {
                ResiduePoly::var(n, big.clone(), i)
                    .scale(&scale)
                    .add(&ResiduePoly::constant(n, big.clone(), yr[i].clone()))
            })
            .collect();
        for _ in 0..m {
            cur = fr
                .coords
                .iter()
                .map(|c| c.compose(&cur, max_terms))
                .collect::<Result<Vec<_>>>()?;
        }
        let ring = PrimePower::new(p, k);
        let mut coords = Vec::with_capacity(n);
        for (i, c) in cur.iter().enumerate() {
            let shifted = c.sub(&ResiduePoly::constant(n, big.clone(), yr[i].clone()));
            let mut h = ResiduePoly::zero(n, ring.clone());
            for (mono, coef) in shifted.terms() {
                if !(coef % &scale).is_zero() {
                    return Err(DmlError::ContractionNotCertified(format!(
                        "f^{m}(y) does not reduce to y modulo p^{e}"
                    )));
                }
                h.add_term(mono.clone(), coef / &scale);
            }
            coords.push(h);
        }
        let mut out = AffinoidSelfMap::new(ring, coords)?;
        out.provenance = Some(Provenance { map: f.to_string(), center: y.to_string(), scale: e, iterate: m });
        Ok(out)
    }

    pub fn prime(&self) -> u64 {
        self.ring.p()
    }

    pub fn precision(&self) -> u32 {
        self.ring.exponent()
    }

    pub fn ring(&self) -> &PrimePower {
        &self.ring
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[ResiduePoly] {
        &self.coords
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }

    pub fn nterms(&self) -> usize {
        self.coords.iter().map(|c| c.nterms()).sum()
    }

    pub fn identity(p: u64, k: u32, n: usize) -> Self {
        let ring = PrimePower::new(p, k);
        let coords = (0..n).map(|i| ResiduePoly::var(n, ring.clone(), i)).collect();
        AffinoidSelfMap { ring, coords, provenance: None }
    }

    /// The displacement `H_i - u_i` of each coordinate.
    pub fn displacement(&self) -> Vec<ResiduePoly> {
        let n = self.dim();
        self.coords
            .iter()
            .enumerate()
            .map(|(i, c)| c.sub(&ResiduePoly::var(n, self.ring.clone(), i)))
            .collect()
    }

    pub fn eval(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.coords.iter().map(|c| c.eval(x)).collect()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AffinoidSelfMap, max_terms: usize) -> Result<AffinoidSelfMap> {
        if other.dim() != self.dim() {
            return Err(DmlError::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        let coords = self
            .coords
            .iter()
            .map(|c| c.compose(&other.coords, max_terms))
            .collect::<Result<Vec<_>>>()?;
        Ok(AffinoidSelfMap { ring: self.ring.clone(), coords, provenance: None })
    }

    pub fn iterate(&self, n: u64, max_terms: usize) -> Result<AffinoidSelfMap> {
        let mut acc = AffinoidSelfMap::identity(self.prime(), self.precision(), self.dim());
        for _ in 0..n {
            acc = self.compose(&acc, max_terms)?;
        }
        Ok(acc)
    }

    pub fn is_identity(&self) -> bool {
        self.displacement().iter().all(|d| d.is_zero())
    }
}

/// `d = min_i gauss_val(H_i - u_i)`, capped at the working precision.
pub fn delta_norm(h: &AffinoidSelfMap) -> DeltaNorm {
    let d = h.displacement().iter().filter_map(|d| d.gauss_valuation()).min();
    match d {
        Some(d) => DeltaNorm { d, vanishes: false },
        None => DeltaNorm { d: h.precision(), vanishes: true },
    }
}

/// Smallest `N = p^t` with `‖Δ_{H^N}‖ < R(p)`, measured on the composed map.
pub fn boost_iterate(h: &AffinoidSelfMap, max_terms: usize) -> Result<(u64, AffinoidSelfMap)> {
    let p = h.prime();
    let start = delta_norm(h);
    if start.d == 0 {
        return Err(DmlError::ContractionNotCertified(
            "displacement has unit norm; no iterate contracts".into(),
        ));
    }
    let mut n = 1u64;
    let mut cur = h.clone();
    loop {
        let dn = delta_norm(&cur);
        if dn.below_r(p) {
            return Ok((n, cur));
        }
        if dn.vanishes {
            return Err(DmlError::PrecisionExhausted(
                "displacement vanished at working precision before crossing R".into(),
            ));
        }
        cur = cur.iterate(p, max_terms)?;
        n *= p;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::parse::{parse_map, parse_point};
    use crate::arith::scalar::FieldKind;

    fn aff(text: &str, n: usize, p: u64, k: u32) -> AffinoidSelfMap {
        AffinoidSelfMap::from_map(&parse_map(text, n, FieldKind::Rational).unwrap(), p, k).unwrap()
    }

    #[test]
    fn delta_norm_examples() {
        assert_eq!(delta_norm(&aff("(x1 + 5)", 1, 5, 20)).d, 1);
        assert_eq!(delta_norm(&aff("(x1 + x1^2)", 1, 3, 20)).d, 0);
        assert_eq!(delta_norm(&aff("(x1 + 5*x2, x2 + 25*x1^2)", 2, 5, 20)).d, 1);
        let id = delta_norm(&aff("(x1)", 1, 5, 20));
        assert!(id.vanishes);
    }

    #[test]
    fn boost_examples() {
        let (n, _) = boost_iterate(&aff("(x1 + 3)", 1, 3, 20), 1000).unwrap();
        assert_eq!(n, 1);
        let (n, h2) = boost_iterate(&aff("(x1 + 2)", 1, 2, 20), 1000).unwrap();
        assert_eq!(n, 2);
        assert_eq!(h2, aff("(x1 + 4)", 1, 2, 20));
        assert_eq!(delta_norm(&h2).d, 2);
        let (n, _) = boost_iterate(&aff("(x1 + 25)", 1, 5, 20), 1000).unwrap();
        assert_eq!(n, 1);
        assert!(boost_iterate(&aff("(x1 + x1^2)", 1, 3, 20), 1000).is_err());
    }

    #[test]
    fn recentering_identity() {
        let f = parse_map("(x1^2 + 5)", 1, FieldKind::Rational).unwrap();
        let y = parse_point("(0)", FieldKind::Rational).unwrap();
        let h = AffinoidSelfMap::recenter_at(&f, &y, 5, 1, 1, 10, 1000).unwrap();
        // f(5u) = 25u^2 + 5, so H(u) = 5u^2 + 1
        assert_eq!(h.coords(), aff("(5*x1^2 + 1)", 1, 5, 10).coords());
        assert_eq!(h.provenance().unwrap().scale, 1);
        for u in 0..6i64 {
            let lhs = BigInt::from(25 * u * u + 5);
            let rhs = BigInt::from(5) * &h.eval(&[BigInt::from(u)])[0];
            assert_eq!(lhs, rhs);
        }
        // second iterate around the 2-cycle-free point: f^2(0) = 30 ≡ 0 mod 5
        let h2 = AffinoidSelfMap::recenter_at(&f, &y, 5, 1, 2, 10, 1000).unwrap();
        assert_eq!(h2.eval(&[BigInt::from(0)])[0], BigInt::from(6));
        // not integral when f^m(y) leaves the disc
        let g = parse_map("(x1 + 1)", 1, FieldKind::Rational).unwrap();
        assert!(AffinoidSelfMap::recenter_at(&g, &y, 5, 1, 1, 10, 1000).is_err());
    }
}
