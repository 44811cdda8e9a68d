use std::fmt;

use super::poly::{Degree, MultiPoly};
use super::scalar::{FieldKind, Scalar};
use crate::error::{DmlError, Result};

/// A point of affine N-space over a [`FieldKind`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Point {
    field: FieldKind,
    coords: Vec<Scalar>,
}

impl Point {
    pub fn new(field: FieldKind, coords: Vec<Scalar>) -> Result<Self> {
        if let Some(c) = coords.iter().find(|c| c.field() != field) {
            return Err(DmlError::FieldMismatch {
                left: field.to_string(),
                right: c.field().to_string(),
            });
        }
        Ok(Point { field, coords })
    }

    pub fn field(&self) -> FieldKind {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Polynomial self-map of affine N-space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMap {
    field: FieldKind,
    coords: Vec<MultiPoly>,
}

impl PolyMap {
    pub fn new(coords: Vec<MultiPoly>) -> Result<Self> {
        let n = coords.len();
        let field = coords
            .first()
            .map(|c| c.field())
            .ok_or_else(|| DmlError::Invalid("map has no coordinates".into()))?;
        for c in &coords {
            if c.nvars() != n {
                return Err(DmlError::DimensionMismatch { expected: n, found: c.nvars() });
            }
            if c.field() != field {
                return Err(DmlError::FieldMismatch {
                    left: field.to_string(),
                    right: c.field().to_string(),
                });
            }
        }
        Ok(PolyMap { field, coords })
    }

    pub fn identity(n: usize, field: FieldKind) -> Self {
        PolyMap { field, coords: (0..n).map(|i| MultiPoly::var(n, field, i)).collect() }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn field(&self) -> FieldKind {
        self.field
    }

    pub fn coords(&self) -> &[MultiPoly] {
        &self.coords
    }

    /// Maximum total degree of the coordinates.
    pub fn total_degree(&self) -> Degree {
        self.coords.iter().map(|c| c.total_degree()).max().unwrap_or(Degree::NegInfinity)
    }

    pub fn nterms(&self) -> usize {
        self.coords.iter().map(|c| c.nterms()).sum()
    }

    fn check_point(&self, x: &Point) -> Result<()> {
        if x.dim() != self.dim() {
            return Err(DmlError::DimensionMismatch { expected: self.dim(), found: x.dim() });
        }
        if x.field() != self.field {
            return Err(DmlError::FieldMismatch {
                left: self.field.to_string(),
                right: x.field().to_string(),
            });
        }
        Ok(())
    }

    fn check_map(&self, g: &PolyMap) -> Result<()> {
        if g.dim() != self.dim() {
            return Err(DmlError::DimensionMismatch { expected: self.dim(), found: g.dim() });
        }
        if g.field != self.field {
            return Err(DmlError::FieldMismatch {
                left: self.field.to_string(),
                right: g.field.to_string(),
            });
        }
        Ok(())
    }

    /// One orbit step `f(x)`.
    pub fn eval(&self, x: &Point) -> Result<Point> {
        self.check_point(x)?;
        Ok(self.eval_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: &Point) -> Point {
        Point { field: self.field, coords: self.coords.iter().map(|c| c.eval(&x.coords)).collect() }
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &PolyMap) -> Result<PolyMap> {
        self.compose_with_budget(g, None)
    }

    pub fn compose_with_budget(&self, g: &PolyMap, max_terms: Option<usize>) -> Result<PolyMap> {
        self.check_map(g)?;
        let coords = self
            .coords
            .iter()
            .map(|c| c.compose(&g.coords, max_terms))
            .collect::<Result<Vec<_>>>()?;
        Ok(PolyMap { field: self.field, coords })
    }
}

impl fmt::Display for PolyMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

pub fn eval_map(f: &PolyMap, x: &Point) -> Result<Point> {
    f.eval(x)
}

pub fn compose_maps(f: &PolyMap, g: &PolyMap) -> Result<PolyMap> {
    f.compose(g)
}
