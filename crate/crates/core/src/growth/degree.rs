//! Degree growth of iterates and the uniform Kawaguchi–Silverman–Matsuzawa constant.

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::height::{ln_big, orbit_heights, HPlus, HeightRecord};
use crate::arith::{Point, PolyMap};
use crate::error::{DmlError, Result};

/// `(deg f^n)^(1/n)`; `exact` is set when the degree is a perfect n-th power.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LambdaEstimate {
    pub degree: u64,
    pub root: u64,
    pub exact: Option<u64>,
    pub estimate: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegreeSequence {
    /// `deg f^n` for `n = 1, 2, …`.
    pub degrees: Vec<u64>,
    pub lambda1: LambdaEstimate,
    /// Successive ratios `deg f^(n+1) / deg f^n`, labeled estimates.
    pub ratio_estimates: Vec<f64>,
    pub truncated: bool,
}

impl DegreeSequence {
    /// `deg f^(a+b) ≤ deg f^a · deg f^b` over every computed pair.
    pub fn is_submultiplicative(&self) -> bool {
        let d = &self.degrees;
        (1..=d.len()).all(|a| (1..=d.len() - a).all(|b| d[a + b - 1] <= d[a - 1] * d[b - 1]))
    }
}

fn lambda_of(degree: u64, n: u64) -> LambdaEstimate {
    let r = (degree as u128).nth_root(n as u32);
    let exact = (r.checked_pow(n as u32) == Some(degree as u128)).then_some(r as u64);
    LambdaEstimate { degree, root: n, exact, estimate: (degree as f64).powf(1.0 / n as f64) }
}

/// Total degrees of `f, f², …, f^{n_max}` by exact composition. When an iterate exceeds
/// `max_terms`, the computed prefix is returned with `truncated` set.
pub fn degree_sequence(f: &PolyMap, n_max: u64, max_terms: usize) -> Result<DegreeSequence> {
    if n_max == 0 {
        return Err(DmlError::Invalid("n_max must be at least 1".into()));
    }
    let deg = |g: &PolyMap| g.total_degree().finite().unwrap_or(0) as u64;
    let mut degrees = vec![deg(f)];
    let mut cur = f.clone();
    let mut truncated = false;
    for _ in 1..n_max {
        match f.compose_with_budget(&cur, Some(max_terms)) {
            Ok(next) => {
                degrees.push(deg(&next));
                cur = next;
            }
            Err(DmlError::BudgetExceeded(_)) => {
                truncated = true;
                break;
            }
            Err(e) => return Err(e),
        }
    }
    let n = degrees.len() as u64;
    let ratio_estimates = degrees.windows(2).map(|w| w[1] as f64 / w[0].max(1) as f64).collect();
    Ok(DegreeSequence { lambda1: lambda_of(*degrees.last().unwrap(), n), degrees, ratio_estimates, truncated })
}

/// The fitted constant: exact when every ratio is a rational number, else a float.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KsmFit {
    #[serde(serialize_with = "ser_opt_rational")]
    pub exact: Option<BigRational>,
    pub estimate: f64,
    pub argmax: u64,
    pub lambda_is_estimate: bool,
    pub horizon: u64,
    pub truncated: bool,
}

fn ser_opt_rational<S: serde::Serializer>(v: &Option<BigRational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(r) => s.serialize_some(&r.to_string()),
        None => s.serialize_none(),
    }
}

/// `k` with `big = base^k`, when it exists.
fn integer_log(big: &BigInt, base: &BigInt) -> Option<u64> {
    if big.is_one() {
        return Some(0);
    }
    let guess = (ln_big(big) / ln_big(base)).round();
    if !guess.is_finite() || guess < 1.0 {
        return None;
    }
    let k = guess as u64;
    (num_traits::pow(base.clone(), k as usize) == *big).then_some(k)
}

/// `h⁺(f^n x) / h⁺(x)` as a rational when exactly comparable.
fn exact_height_ratio(h: &HPlus, h0: &HPlus) -> Option<BigRational> {
    match (h, h0) {
        (HPlus::One, HPlus::One) => Some(BigRational::one()),
        (HPlus::Degree(a), HPlus::Degree(b)) => Some(BigRational::new((*a).into(), (*b).into())),
        (HPlus::Degree(a), HPlus::One) => Some(BigRational::from_integer((*a).into())),
        (HPlus::One, HPlus::Degree(b)) => Some(BigRational::new(1.into(), (*b).into())),
        (HPlus::LogOf(a), HPlus::LogOf(b)) => {
            integer_log(a, b).map(|k| BigRational::from_integer(k.into()))
        }
        _ => None,
    }
}

/// `C = max_{0 ≤ n ≤ n_max} h⁺(f^n x) / ((λ + ε)^n h⁺(x))`.
///
/// `lambda` is the exact first dynamical degree when known; otherwise the float estimate is
/// used and the fit is flagged.
pub fn ksm_fit(
    f: &PolyMap,
    x: &Point,
    lambda: &LambdaEstimate,
    epsilon: &BigRational,
    n_max: u64,
    size_budget: u64,
) -> Result<KsmFit> {
    f.eval(x)?;
    let (heights, truncated): (Vec<HeightRecord>, bool) = orbit_heights(f, x, n_max, size_budget);
    let h0 = heights[0].h_plus.clone();
    let base_exact = lambda.exact.map(|l| BigRational::from_integer(l.into()) + epsilon);
    let base_f = lambda.exact.map(|l| l as f64).unwrap_or(lambda.estimate) + epsilon.to_f64().unwrap_or(0.0);
    let mut exact: Option<(BigRational, u64)> = base_exact.as_ref().map(|_| (BigRational::zero(), 0));
    let mut best = (f64::MIN, 0u64);
    for r in &heights {
        let n = r.index;
        let ratio = r.h_plus.value() / (base_f.powi(n as i32) * h0.value());
        if ratio > best.0 {
            best = (ratio, n);
        }
        if let (Some((cur, arg)), Some(b)) = (exact.as_mut(), base_exact.as_ref()) {
            match exact_height_ratio(&r.h_plus, &h0) {
                Some(q) => {
                    let v = q / num_traits::pow(b.clone(), n as usize);
                    if v > *cur {
                        *cur = v;
                        *arg = n;
                    }
                }
                None => exact = None,
            }
        }
    }
    let horizon = heights.last().map(|r| r.index).unwrap_or(0);
    Ok(match exact {
        Some((c, arg)) => KsmFit {
            estimate: c.to_f64().unwrap_or(best.0),
            exact: Some(c),
            argmax: arg,
            lambda_is_estimate: false,
            horizon,
            truncated,
        },
        None => KsmFit {
            exact: None,
            estimate: best.0,
            argmax: best.1,
            lambda_is_estimate: lambda.exact.is_none(),
            horizon,
            truncated,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{parse_map, parse_point, FieldKind};

    fn map(s: &str, n: usize) -> PolyMap {
        parse_map(s, n, FieldKind::Rational).unwrap()
    }

    #[test]
    fn degree_examples() {
        let d = degree_sequence(&map("(x1^2)", 1), 10, 1000).unwrap();
        assert_eq!(d.degrees, (1..=10).map(|n| 1u64 << n).collect::<Vec<_>>());
        assert_eq!(d.lambda1.exact, Some(2));
        let d = degree_sequence(&map("(x2, x1*x2)", 2), 5, 1000).unwrap();
        assert_eq!(d.degrees, vec![2, 3, 5, 8, 13]);
        let d = degree_sequence(&map("(x1 + 1)", 1), 8, 1000).unwrap();
        assert!(d.degrees.iter().all(|&x| x == 1));
        assert_eq!(d.lambda1.exact, Some(1));
    }

    #[test]
    fn budget_truncates() {
        let d = degree_sequence(&map("(x1^2 + x2, x1*x2 + 1)", 2), 30, 50).unwrap();
        assert!(d.truncated);
        assert!(d.degrees.len() < 30);
        assert!(d.is_submultiplicative());
    }

    #[test]
    fn squaring_constant_is_one() {
        let f = map("(x1^2)", 1);
        let lambda = degree_sequence(&f, 8, 1000).unwrap().lambda1;
        let x = parse_point("(3)", FieldKind::Rational).unwrap();
        let fit = ksm_fit(&f, &x, &lambda, &BigRational::zero(), 12, 1 << 20).unwrap();
        assert_eq!(fit.exact, Some(BigRational::one()));
    }

    #[test]
    fn fixed_point_constant_is_one() {
        let f = map("(x1^2)", 1);
        let lambda = degree_sequence(&f, 8, 1000).unwrap().lambda1;
        let x = parse_point("(1)", FieldKind::Rational).unwrap();
        let fit = ksm_fit(&f, &x, &lambda, &BigRational::new(1.into(), 10.into()), 20, 1 << 20).unwrap();
        assert_eq!(fit.exact, Some(BigRational::one()));
        assert_eq!(fit.argmax, 0);
    }
}
