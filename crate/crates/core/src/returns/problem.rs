use serde::{Deserialize, Serialize};

use crate::arith::{FieldKind, MultiPoly, Point, PolyMap, Scalar};
use crate::error::{DmlError, Result};

/// `{n ≥ 0 : f^n(x) ∈ V}` with `V` cut out by one or more targets `g = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitProblem {
    map: PolyMap,
    point: Point,
    targets: Vec<MultiPoly>,
}

impl OrbitProblem {
    pub fn new(map: PolyMap, point: Point, targets: Vec<MultiPoly>) -> Result<Self> {
        let n = map.dim();
        if targets.is_empty() {
            return Err(DmlError::Invalid("at least one target is required".into()));
        }
        if point.dim() != n {
            return Err(DmlError::DimensionMismatch { expected: n, found: point.dim() });
        }
        for (kind, field) in std::iter::once(("point", point.field()))
            .chain(targets.iter().map(|g| ("target", g.field())))
        {
            if field != map.field() {
                return Err(DmlError::FieldMismatch {
                    left: map.field().to_string(),
                    right: format!("{kind} over {field}"),
                });
            }
        }
        if let Some(g) = targets.iter().find(|g| g.nvars() != n) {
            return Err(DmlError::DimensionMismatch { expected: n, found: g.nvars() });
        }
        Ok(OrbitProblem { map, point, targets })
    }

    pub fn map(&self) -> &PolyMap {
        &self.map
    }

    pub fn point(&self) -> &Point {
        &self.point
    }

    pub fn targets(&self) -> &[MultiPoly] {
        &self.targets
    }

    pub fn field(&self) -> FieldKind {
        self.map.field()
    }

    pub fn dim(&self) -> usize {
        self.map.dim()
    }

    /// The same orbit with a single target.
    pub fn with_target(&self, g: MultiPoly) -> Result<OrbitProblem> {
        OrbitProblem::new(self.map.clone(), self.point.clone(), vec![g])
    }
}

/// `A_{n+l} = Σ_{i<l} a_i A_{n+i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Recurrence {
    coeffs: Vec<Scalar>,
    initial: Vec<Scalar>,
}

impl Recurrence {
    pub fn new(coeffs: Vec<Scalar>, initial: Vec<Scalar>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(DmlError::Invalid("recurrence order must be at least 1".into()));
        }
        if coeffs.len() != initial.len() {
            return Err(DmlError::DimensionMismatch { expected: coeffs.len(), found: initial.len() });
        }
        if coeffs.iter().chain(&initial).any(|c| c.field() != FieldKind::Rational) {
            return Err(DmlError::Unsupported("recurrences are solved over Q only".into()));
        }
        Ok(Recurrence { coeffs, initial })
    }

    pub fn from_ints(coeffs: &[i64], initial: &[i64]) -> Result<Self> {
        let q = FieldKind::Rational;
        Recurrence::new(
            coeffs.iter().map(|&c| q.from_int(c)).collect(),
            initial.iter().map(|&c| q.from_int(c)).collect(),
        )
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn initial(&self) -> &[Scalar] {
        &self.initial
    }

    /// `A_0, …, A_{count-1}`.
    pub fn terms(&self, count: usize) -> Vec<Scalar> {
        let l = self.order();
        let mut a = self.initial.clone();
        while a.len() < count {
            let n = a.len() - l;
            let next = (0..l).fold(FieldKind::Rational.zero(), |acc, i| acc.add(&self.coeffs[i].mul(&a[n + i])));
            a.push(next);
        }
        a.truncate(count);
        a
    }

    /// Companion map `(x_0..x_{l-1}) ↦ (x_1, …, x_{l-1}, Σ a_i x_i)`, start point and target `x_0`.
    pub fn companion(&self) -> Result<OrbitProblem> {
        let l = self.order();
        let q = FieldKind::Rational;
        let mut coords: Vec<MultiPoly> = (1..l).map(|i| MultiPoly::var(l, q, i)).collect();
        let last = (0..l).fold(MultiPoly::zero(l, q), |acc, i| {
            acc.add(&MultiPoly::var(l, q, i).scale(&self.coeffs[i]))
        });
        coords.push(last);
        OrbitProblem::new(
            PolyMap::new(coords)?,
            Point::new(q, self.initial.clone())?,
            vec![MultiPoly::var(l, q, 0)],
        )
    }
}

/// Knobs for the classifier; defaults follow the CLI configuration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    pub primes: Vec<u64>,
    pub k: u32,
    pub k_max: u32,
    pub e_cap: u32,
    pub n_max: u64,
    pub k_evidence: u64,
    /// Largest residue state space `p^(eN)` explored by cycle detection.
    pub state_cap: u64,
    /// Largest period (after Jacobian and boost factors) handled per prime.
    pub period_cap: u64,
    /// Total bit size of an exact orbit point beyond which brute force stops.
    pub size_budget: u64,
    pub max_terms: usize,
    pub boost_cap: u32,
    pub refine_depth: u32,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            primes: vec![3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 2],
            k: 64,
            k_max: 512,
            e_cap: 6,
            n_max: 10_000,
            k_evidence: 200,
            state_cap: 1 << 22,
            period_cap: 2048,
            size_budget: 1 << 22,
            max_terms: 200_000,
            boost_cap: 6,
            refine_depth: 3,
        }
    }
}
