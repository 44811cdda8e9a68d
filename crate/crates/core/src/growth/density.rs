//! Sliding-window densities of return sets.

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::returns::ReturnSet;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DensityEntry {
    pub window: u64,
    pub max_count: u64,
    /// First window start attaining the maximum.
    pub start: u64,
    #[serde(serialize_with = "ser_rational")]
    pub density: BigRational,
}

fn ser_rational<S: serde::Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DensityProfile {
    pub horizon: u64,
    pub profile: Vec<DensityEntry>,
}

/// Window lengths `1, 2, 4, …` up to `horizon + 1`.
pub fn dyadic_windows(horizon: u64) -> Vec<u64> {
    std::iter::successors(Some(1u64), |&l| l.checked_mul(2)).take_while(|&l| l <= horizon + 1).collect()
}

/// For each window length `L`, `max_I #(S ∩ I) / L` over intervals `I ⊆ [0, horizon]`.
/// Lengths longer than `horizon + 1` are skipped.
pub fn density_profile(set: &[u64], horizon: u64, windows: &[u64]) -> DensityProfile {
    let len = horizon as usize + 1;
    let mut prefix = vec![0u64; len + 1];
    let mut marks = vec![false; len];
    for &n in set {
        if n <= horizon {
            marks[n as usize] = true;
        }
    }
    for i in 0..len {
        prefix[i + 1] = prefix[i] + marks[i] as u64;
    }
    let profile = windows
        .par_iter()
        .filter(|&&l| l >= 1 && l <= horizon + 1)
        .map(|&l| {
            let l_us = l as usize;
            let (mut best, mut start) = (0u64, 0u64);
            for s in 0..=len - l_us {
                let c = prefix[s + l_us] - prefix[s];
                if c > best {
                    best = c;
                    start = s as u64;
                }
            }
            DensityEntry {
                window: l,
                max_count: best,
                start,
                density: BigRational::new(BigInt::from(best), BigInt::from(l)),
            }
        })
        .collect();
    DensityProfile { horizon, profile }
}

pub fn density_of_return_set(rs: &ReturnSet, horizon: u64, windows: &[u64]) -> DensityProfile {
    density_profile(&rs.members_up_to(horizon), horizon, windows)
}
