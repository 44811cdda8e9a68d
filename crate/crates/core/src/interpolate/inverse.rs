use num_bigint::BigInt;
use num_traits::Zero;

use super::affinoid::{delta_norm, AffinoidSelfMap};
use crate::arith::residue::{inv_mod, pow_big, PrimePower, ResiduePoly};
use crate::error::{DmlError, Result};

/// `Δ(h) = h ∘ H - h`.
pub fn delta(h: &AffinoidSelfMap, g: &ResiduePoly, max_terms: usize) -> Result<ResiduePoly> {
    Ok(g.compose(h.coords(), max_terms)?.sub(g))
}

/// `Δ^i(g)` for `i = 0..=n`.
pub fn delta_powers(
    h: &AffinoidSelfMap,
    g: &ResiduePoly,
    n: usize,
    max_terms: usize,
) -> Result<Vec<ResiduePoly>> {
    let mut out = vec![g.clone()];
    for _ in 0..n {
        let next = delta(h, out.last().unwrap(), max_terms)?;
        out.push(next);
    }
    Ok(out)
}

/// The inverse of a map with `‖Δ‖ < 1`, by fixed-point iteration `K ← id - Δ ∘ K`.
///
/// Each step gains `d` digits, so `⌈k/d⌉` steps give `K` modulo `p^k`.
pub fn invert_map(h: &AffinoidSelfMap, max_terms: usize) -> Result<AffinoidSelfMap> {
    let dn = delta_norm(h);
    if dn.d == 0 {
        return Err(DmlError::ContractionNotCertified("displacement has unit norm".into()));
    }
    let n = h.dim();
    let (p, k) = (h.prime(), h.precision());
    let disp = h.displacement();
    let id = AffinoidSelfMap::identity(p, k, n);
    let mut cur = id.clone();
    for _ in 0..k.div_ceil(dn.d) {
        let coords = (0..n)
            .map(|i| Ok(id.coords()[i].sub(&disp[i].compose(cur.coords(), max_terms)?)))
            .collect::<Result<Vec<_>>>()?;
        cur = AffinoidSelfMap::new(h.ring().clone(), coords)?;
    }
    if !h.compose(&cur, max_terms)?.is_identity() || !cur.compose(h, max_terms)?.is_identity() {
        return Err(DmlError::PrecisionExhausted("inverse check failed".into()));
    }
    if delta_norm(&cur).d != dn.d {
        return Err(DmlError::PrecisionExhausted("inverse has a different displacement norm".into()));
    }
    Ok(cur)
}

/// Vector field `θ_j = Σ_{i≥1} (-1)^{i-1} Δ^i(u_j) / i`, the derivative of the interpolated
/// action at `T = 0`. Division by `i` costs `v_p(i)` digits; the returned polynomials live in
/// the ring whose exponent is the certified precision.
pub fn vector_field(h: &AffinoidSelfMap, max_terms: usize) -> Result<Vec<ResiduePoly>> {
    let dn = delta_norm(h);
    let p = h.prime();
    if !dn.below_r(p) {
        return Err(DmlError::ContractionNotCertified(super::action::r_transcript(p, dn.d)));
    }
    let k = h.precision();
    let d = dn.d as i64;
    let vp = |i: u64| {
        let (mut i, mut v) = (i, 0i64);
        while i % p == 0 {
            i /= p;
            v += 1;
        }
        v
    };
    // terms beyond `last` have valuation d·i - v_p(i) ≥ k
    let mut last = 1u64;
    let mut prec = k as i64;
    loop {
        let i = last + 1;
        let bound = (i..i + 64).map(|j| d * j as i64 - vp(j)).min().unwrap();
        if bound >= k as i64 {
            break;
        }
        last = i;
    }
    for i in 1..=last {
        prec = prec.min(k as i64 - vp(i));
    }
    let prec = prec.max(0) as u32;
    let out_ring = PrimePower::new(p, prec);
    let n = h.dim();
    let mut out = Vec::with_capacity(n);
    for j in 0..n {
        let u = ResiduePoly::var(n, h.ring().clone(), j);
        let powers = delta_powers(h, &u, last as usize, max_terms)?;
        let mut acc = ResiduePoly::zero(n, out_ring.clone());
        for (i, g) in powers.iter().enumerate().skip(1) {
            let v = vp(i as u64) as u32;
            let unit = BigInt::from(i as u64 / p.pow(v));
            let inv = inv_mod(&unit, out_ring.modulus()).expect("unit");
            let sign = if i % 2 == 1 { BigInt::from(1) } else { BigInt::from(-1) };
            let pv = pow_big(p, v);
            let mut term = ResiduePoly::zero(n, out_ring.clone());
            for (m, c) in g.terms() {
                if !(c % &pv).is_zero() {
                    return Err(DmlError::PrecisionExhausted(format!(
                        "Δ^{i} not divisible by {p}^{v}"
                    )));
                }
                term.add_term(m.clone(), out_ring.reduce(&(c / &pv * &inv * &sign)));
            }
            acc = acc.add(&term);
        }
        out.push(acc);
    }
    Ok(out)
}
