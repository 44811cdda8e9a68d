//! Naive Weil heights on the projective completion of affine space.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::{FpPoly, Point, PolyMap, Scalar};
use crate::error::{DmlError, Result};
use crate::returns::brute::point_size;

/// Exact height: `log H` over ℚ, an integer degree over 𝔽_p(t).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Height {
    LogOf(BigInt),
    Degree(u64),
}

/// `h⁺ = max(h, 1)`. Over ℚ, `log H ≥ 1` exactly when `H ≥ 3`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HPlus {
    One,
    LogOf(BigInt),
    Degree(u64),
}

impl Height {
    pub fn plus(&self) -> HPlus {
        match self {
            Height::LogOf(h) if *h >= BigInt::from(3) => HPlus::LogOf(h.clone()),
            Height::Degree(d) if *d >= 1 => HPlus::Degree(*d),
            _ => HPlus::One,
        }
    }

    pub fn value(&self) -> f64 {
        match self {
            Height::LogOf(h) => ln_big(h),
            Height::Degree(d) => *d as f64,
        }
    }
}

impl HPlus {
    pub fn value(&self) -> f64 {
        match self {
            HPlus::One => 1.0,
            HPlus::LogOf(h) => ln_big(h),
            HPlus::Degree(d) => *d as f64,
        }
    }
}

fn tagged<S: serde::Serializer>(s: S, key: &str, value: serde_json::Value) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut m = s.serialize_map(Some(1))?;
    m.serialize_entry(key, &value)?;
    m.end()
}

// exact payloads are strings: {"logOf": "H"}, {"degree": d}, {"one": 1}
impl Serialize for Height {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Height::LogOf(h) => tagged(s, "logOf", h.to_string().into()),
            Height::Degree(d) => tagged(s, "degree", (*d).into()),
        }
    }
}

impl Serialize for HPlus {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            HPlus::One => tagged(s, "one", 1.into()),
            HPlus::LogOf(h) => tagged(s, "logOf", h.to_string().into()),
            HPlus::Degree(d) => tagged(s, "degree", (*d).into()),
        }
    }
}

/// Natural log of a positive integer of any size.
pub fn ln_big(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_string().parse::<f64>().map(f64::ln).unwrap_or(f64::INFINITY);
    }
    let shift = bits - 64;
    let top: BigInt = n >> shift;
    top.to_string().parse::<f64>().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HeightRecord {
    pub index: u64,
    pub field: String,
    pub height: Height,
    pub h_plus: HPlus,
}

fn poly_lcm(a: &FpPoly, b: &FpPoly) -> FpPoly {
    let g = a.gcd(b);
    a.mul(b).div_rem(&g).0.monic()
}

/// Height of the projective point `(1 : x_1 : … : x_N)`.
pub fn weil_height(x: &Point) -> HeightRecord {
    let height = match x.coords().first() {
        None => Height::LogOf(BigInt::one()),
        Some(Scalar::Rational(_)) => {
            let rats: Vec<_> = x.coords().iter().map(|c| c.as_rational().unwrap().clone()).collect();
            let l = rats.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
            let ints: Vec<BigInt> =
                std::iter::once(l.clone()).chain(rats.iter().map(|r| r.numer() * (&l / r.denom()))).collect();
            let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
            Height::LogOf(ints.iter().map(|c| (c / &g).abs()).max().unwrap())
        }
        Some(Scalar::Fp(_)) => Height::Degree(0),
        Some(Scalar::Fpt(first)) => {
            let fs: Vec<_> = x.coords().iter().map(|c| c.as_ratfunc().unwrap().clone()).collect();
            let p = first.modulus();
            let l = fs.iter().fold(FpPoly::constant(1, p), |acc, f| poly_lcm(&acc, f.den()));
            let polys: Vec<FpPoly> = std::iter::once(l.clone())
                .chain(fs.iter().map(|f| f.num().mul(&l.div_rem(f.den()).0)))
                .collect();
            let g = polys.iter().fold(FpPoly::zero(p), |acc, c| acc.gcd(c));
            Height::Degree(
                polys.iter().filter_map(|c| c.div_rem(&g).0.degree()).max().unwrap_or(0) as u64,
            )
        }
    };
    HeightRecord { index: 0, field: x.field().to_string(), h_plus: height.plus(), height }
}

/// `h⁺(f^n(x))^(1/n)` kept symbolically alongside its float value.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RootValue {
    pub base: HPlus,
    pub root: u64,
    pub estimate: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ArithmeticDegreeProfile {
    pub heights: Vec<HeightRecord>,
    pub roots: Vec<RootValue>,
    /// Prefix maximum and minimum of the roots, the desk-scale stand-ins for ᾱ and α̲.
    pub upper: f64,
    pub lower: f64,
    pub truncated: bool,
}

/// Heights along the orbit `x, f(x), …, f^{n_max}(x)`; stops early past `size_budget` bits.
pub fn orbit_heights(f: &PolyMap, x: &Point, n_max: u64, size_budget: u64) -> (Vec<HeightRecord>, bool) {
    let mut out = Vec::new();
    let mut cur = x.clone();
    for n in 0..=n_max {
        let mut rec = weil_height(&cur);
        rec.index = n;
        out.push(rec);
        if n == n_max {
            break;
        }
        let next = f.eval_unchecked(&cur);
        if point_size(&next) > size_budget {
            return (out, true);
        }
        cur = next;
    }
    (out, false)
}

pub fn arithmetic_degree_profile(
    f: &PolyMap,
    x: &Point,
    n_max: u64,
    size_budget: u64,
) -> Result<ArithmeticDegreeProfile> {
    f.eval(x)?;
    let (heights, truncated) = orbit_heights(f, x, n_max, size_budget);
    if heights.len() < 2 {
        return Err(DmlError::BudgetExceeded("no orbit step fits in the size budget".into()));
    }
    let roots: Vec<RootValue> = heights
        .iter()
        .skip(1)
        .map(|r| RootValue {
            base: r.h_plus.clone(),
            root: r.index,
            estimate: r.h_plus.value().powf(1.0 / r.index as f64),
        })
        .collect();
    let upper = roots.iter().map(|r| r.estimate).fold(f64::MIN, f64::max);
    let lower = roots.iter().map(|r| r.estimate).fold(f64::MAX, f64::min);
    Ok(ArithmeticDegreeProfile { heights, roots, upper, lower, truncated })
}
