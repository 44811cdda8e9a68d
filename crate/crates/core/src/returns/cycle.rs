use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use super::problem::OrbitProblem;
use crate::arith::residue::{is_p_integral_poly, reduce_map, reduce_point, scalar_is_p_integral, PrimePower};
use crate::arith::{FieldKind, PolyMap, ResiduePoly};
use crate::error::{DmlError, Result};

/// True when `f`, `x` and every target are p-integral.
pub fn is_p_integral(prob: &OrbitProblem, p: u64) -> bool {
    prob.map().coords().iter().all(|c| is_p_integral_poly(c, p))
        && prob.point().coords().iter().all(|c| scalar_is_p_integral(c, p))
        && prob.targets().iter().all(|g| is_p_integral_poly(g, p))
}

/// First candidate at which the whole instance is p-integral; odd primes are tried before 2.
pub fn select_prime(prob: &OrbitProblem, candidates: &[u64]) -> Result<u64> {
    good_primes(prob, candidates).into_iter().next().ok_or(DmlError::NoGoodPrime)
}

/// All p-integral candidates in preference order.
pub fn good_primes(prob: &OrbitProblem, candidates: &[u64]) -> Vec<u64> {
    if prob.field() != FieldKind::Rational {
        return vec![];
    }
    let mut order: Vec<u64> = candidates.iter().copied().filter(|&p| p != 2).collect();
    if candidates.contains(&2) {
        order.push(2);
    }
    order.dedup();
    order.into_iter().filter(|&p| crate::arith::is_prime(p) && is_p_integral(prob, p)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResidueCycle {
    pub prime: u64,
    pub level: u32,
    pub preperiod: u64,
    pub period: u64,
    /// `f^(s+i)(x) mod p^e` for `i < period`.
    #[serde(serialize_with = "serialize_cycle")]
    pub cycle: Vec<Vec<BigInt>>,
}

fn serialize_cycle<S: serde::Serializer>(c: &[Vec<BigInt>], s: S) -> std::result::Result<S::Ok, S::Error> {
    let v: Vec<Vec<String>> = c.iter().map(|x| x.iter().map(|y| y.to_string()).collect()).collect();
    v.serialize(s)
}

/// Minimal preperiod and period of `f^n(x) mod p^e`.
pub fn residue_cycle(f: &PolyMap, x: &crate::arith::Point, p: u64, e: u32, state_cap: u64) -> Result<ResidueCycle> {
    let n = f.dim() as u32;
    let states = (p as f64).powf((e * n) as f64);
    if states > state_cap as f64 {
        return Err(DmlError::BudgetExceeded(format!(
            "residue state space {p}^{} exceeds cap {state_cap}",
            e * n
        )));
    }
    let ring = PrimePower::new(p, e);
    let fr = reduce_map(f, &ring)?;
    let mut cur = reduce_point(x, &ring)?;
    let mut seen: HashMap<Vec<BigInt>, u64> = HashMap::new();
    let mut orbit = Vec::new();
    let mut i = 0u64;
    loop {
        if let Some(&s) = seen.get(&cur) {
            return Ok(ResidueCycle {
                prime: p,
                level: e,
                preperiod: s,
                period: i - s,
                cycle: orbit[s as usize..].to_vec(),
            });
        }
        seen.insert(cur.clone(), i);
        orbit.push(cur.clone());
        cur = fr.eval(&cur);
        i += 1;
    }
}

/// Jacobian matrix of `f` as residue polynomials over `ring`.
pub(crate) fn jacobian(f: &PolyMap, ring: &PrimePower) -> Result<Vec<Vec<ResiduePoly>>> {
    let n = f.dim();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| crate::arith::residue::reduce_poly(&f.coords()[i].derivative(j), ring))
                .collect::<Result<Vec<_>>>()
        })
        .collect()
}

pub(crate) type Matrix = Vec<Vec<BigInt>>;

pub(crate) fn mat_identity(n: usize) -> Matrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

pub(crate) fn mat_mul(a: &Matrix, b: &Matrix, m: &BigInt) -> Matrix {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(BigInt::zero(), |acc, k| acc + &a[i][k] * &b[k][j]).mod_floor(m))
                .collect()
        })
        .collect()
}

pub(crate) fn mat_eval(j: &[Vec<ResiduePoly>], x: &[BigInt], m: &BigInt) -> Matrix {
    j.iter().map(|row| row.iter().map(|c| c.eval(x).mod_floor(m)).collect()).collect()
}

/// Multiplicative order of `a` in `GL_N(𝔽_p)`, `None` when singular mod p or above `cap`.
pub(crate) fn matrix_order(a: &Matrix, p: u64, cap: u64) -> Option<u64> {
    let m = BigInt::from(p);
    let a: Matrix = a.iter().map(|r| r.iter().map(|c| c.mod_floor(&m)).collect()).collect();
    if determinant_mod_p(&a, p) == 0 {
        return None;
    }
    let id = mat_identity(a.len());
    let mut cur = a.clone();
    let mut k = 1u64;
    while cur != id {
        if k >= cap {
            return None;
        }
        cur = mat_mul(&cur, &a, &m);
        k += 1;
    }
    Some(k)
}

fn determinant_mod_p(a: &Matrix, p: u64) -> u64 {
    let n = a.len();
    let pp = p as i128;
    let mut m: Vec<Vec<i128>> = a
        .iter()
        .map(|r| r.iter().map(|c| i128::try_from(c.mod_floor(&BigInt::from(p))).unwrap()).collect())
        .collect();
    let mut det: i128 = 1;
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| m[r][col] != 0) else { return 0 };
        if piv != col {
            m.swap(piv, col);
            det = (pp - det) % pp;
        }
        det = det * m[col][col] % pp;
        let inv = {
            let e = m[col][col].extended_gcd(&pp);
            e.x.rem_euclid(pp)
        };
        for r in col + 1..n {
            let factor = m[r][col] * inv % pp;
            for c in col..n {
                m[r][c] = (m[r][c] - factor * m[col][c]).rem_euclid(pp);
            }
        }
    }
    det.rem_euclid(pp) as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{parse_map, parse_point, parse_poly, FieldKind};

    fn prob(f: &str, x: &str, g: &str, n: usize) -> OrbitProblem {
        let q = FieldKind::Rational;
        OrbitProblem::new(parse_map(f, n, q).unwrap(), parse_point(x, q).unwrap(), vec![parse_poly(g, n, q).unwrap()])
            .unwrap()
    }

    #[test]
    fn prime_selection() {
        assert_eq!(select_prime(&prob("(x1/3 + 1)", "(1/2)", "x1", 1), &[2, 3, 5, 7]).unwrap(), 5);
        assert_eq!(select_prime(&prob("(x1^2 + 1)", "(4)", "x1", 1), &[2, 3, 5, 7]).unwrap(), 3);
        assert!(matches!(
            select_prime(&prob("(x1/105)", "(1/2)", "x1", 1), &[2, 3, 5, 7]),
            Err(DmlError::NoGoodPrime)
        ));
    }

    fn cycle(f: &str, x: &str, p: u64) -> (u64, u64) {
        let q = FieldKind::Rational;
        let c = residue_cycle(&parse_map(f, 1, q).unwrap(), &parse_point(x, q).unwrap(), p, 1, 1 << 20).unwrap();
        (c.preperiod, c.period)
    }

    #[test]
    fn cycle_examples() {
        assert_eq!(cycle("(x1 + 1)", "(0)", 5), (0, 5));
        assert_eq!(cycle("(x1^2)", "(2)", 5), (2, 1));
        assert_eq!(cycle("(2*x1)", "(1)", 7), (0, 3));
    }

    #[test]
    fn cycle_matches_direct_enumeration() {
        // oracle: first repeat in the explicit list of residues
        let q = FieldKind::Rational;
        let f = parse_map("(x1^2 + 3*x2, x1 + 1)", 2, q).unwrap();
        let x = parse_point("(1, 2)", q).unwrap();
        let c = residue_cycle(&f, &x, 5, 1, 1 << 20).unwrap();
        let mut seq: Vec<(i64, i64)> = vec![(1, 2)];
        loop {
            let (a, b) = *seq.last().unwrap();
            let next = ((a * a + 3 * b).rem_euclid(5), (a + 1).rem_euclid(5));
            if let Some(s) = seq.iter().position(|&v| v == next) {
                assert_eq!(c.preperiod, s as u64);
                assert_eq!(c.period, (seq.len() - s) as u64);
                break;
            }
            seq.push(next);
        }
    }

    #[test]
    fn state_cap_enforced() {
        let q = FieldKind::Rational;
        let f = parse_map("(x1 + 1, x2)", 2, q).unwrap();
        let x = parse_point("(0, 0)", q).unwrap();
        assert!(matches!(residue_cycle(&f, &x, 7, 4, 1000), Err(DmlError::BudgetExceeded(_))));
    }

    #[test]
    fn matrix_orders() {
        let a = vec![vec![BigInt::from(0), BigInt::from(1)], vec![BigInt::from(1), BigInt::from(1)]];
        // the Pisano period mod 3 is 8
        assert_eq!(matrix_order(&a, 3, 1000), Some(8));
        let s = vec![vec![BigInt::from(3)]];
        assert_eq!(matrix_order(&s, 3, 1000), None);
    }
}
