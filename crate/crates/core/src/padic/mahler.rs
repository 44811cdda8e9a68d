//! Binomial polynomials `C(T, i) = T(T-1)...(T-i+1) / i!`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Coefficients (low degree first) of the falling factorial `T(T-1)...(T-i+1)`,
/// i.e. the signed Stirling numbers of the first kind.
pub fn falling_factorial(i: usize) -> Vec<BigInt> {
    let mut c = vec![BigInt::one()];
    for k in 0..i {
        // multiply by (T - k)
        let mut next = vec![BigInt::zero(); c.len() + 1];
        for (j, a) in c.iter().enumerate() {
            next[j + 1] += a;
            next[j] -= a * BigInt::from(k);
        }
        c = next;
    }
    c
}

/// `C(T, i)` expanded in powers of `T`, truncated to degree `max_degree`.
pub fn mahler_term(i: usize, max_degree: usize) -> Vec<BigRational> {
    let fact: BigInt = (1..=i).map(BigInt::from).product();
    let mut c: Vec<BigRational> = falling_factorial(i)
        .into_iter()
        .map(|a| BigRational::new(a, fact.clone()))
        .collect();
    c.truncate(max_degree + 1);
    c
}

/// `v_p(i!)` by Legendre's formula.
pub fn factorial_valuation(i: u64, p: u64) -> u64 {
    let mut v = 0;
    let mut q = i / p;
    while q > 0 {
        v += q;
        q /= p;
    }
    v
}

/// Exact value of a rational polynomial at an integer.
pub fn eval_rational(c: &[BigRational], t: i64) -> BigRational {
    let t = BigRational::from_integer(BigInt::from(t));
    c.iter().rev().fold(BigRational::zero(), |acc, a| acc * &t + a)
}
