//! Problem-file schema and conversion to domain objects.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::arith::{check_prime, parse_map, parse_point, parse_poly, parse_scalar, FieldKind, MultiPoly, Point, PolyMap};
use crate::error::{DmlError, Result};
use crate::returns::{OrbitProblem, Recurrence, SolverConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Orbit,
    Sml,
    Interp,
    Degree,
    Height,
    Density,
}

impl Command {
    pub fn as_str(&self) -> &'static str {
        match self {
            Command::Orbit => "orbit",
            Command::Sml => "sml",
            Command::Interp => "interp",
            Command::Degree => "degree",
            Command::Height => "height",
            Command::Density => "density",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrbitMode {
    /// Classifier over ℚ, brute force over function fields.
    #[default]
    Auto,
    Classify,
    Brute,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecurrenceSpec {
    pub coeffs: Vec<String>,
    pub initial: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InterpSpec {
    pub prime: u64,
    pub precision: u32,
    /// Base point of the orbit inside the unit polydisc; defaults to the origin.
    #[serde(default)]
    pub base: Option<String>,
    /// Recenter `f^iterate` on the disc `center + p^scale ℤ_p^N` before interpolating.
    #[serde(default)]
    pub center: Option<String>,
    #[serde(default = "one_u32")]
    pub scale: u32,
    #[serde(default = "one_u64")]
    pub iterate: u64,
    /// Replace the map by its smallest contracting `p^t`-th iterate.
    #[serde(default)]
    pub boost: bool,
    /// Orbit length compared against the interpolation.
    #[serde(default = "twenty")]
    pub check: u64,
}

fn one_u32() -> u32 {
    1
}
fn one_u64() -> u64 {
    1
}
fn twenty() -> u64 {
    20
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub version: u32,
    pub command: Command,
    #[serde(default = "rational")]
    pub field: FieldKind,
    #[serde(default)]
    pub map: Option<String>,
    #[serde(default)]
    pub point: Option<String>,
    #[serde(default)]
    pub targets: Vec<String>,
    #[serde(default)]
    pub recurrence: Option<RecurrenceSpec>,
    #[serde(default)]
    pub mode: OrbitMode,
    #[serde(default)]
    pub interp: Option<InterpSpec>,
    /// Orbit or degree length for `degree` and `height`.
    #[serde(default)]
    pub steps: Option<u64>,
    /// KSM slack values, as exact rationals.
    #[serde(default)]
    pub epsilon: Vec<String>,
    /// Explicit return set for `density`; otherwise the orbit problem is solved.
    #[serde(default)]
    pub set: Option<Vec<u64>>,
    #[serde(default)]
    pub horizon: Option<u64>,
    #[serde(default)]
    pub windows: Option<Vec<u64>>,
    #[serde(default)]
    pub config: SolverConfig,
}

fn rational() -> FieldKind {
    FieldKind::Rational
}

impl ProblemFile {
    /// Parses problem JSON after applying `key=value` overrides. Bare keys address `config`;
    /// dotted keys address the document root. Values are read as JSON when possible,
    /// comma lists as arrays, anything else as a string.
    pub fn from_json(text: &str, overrides: &[String]) -> Result<(ProblemFile, Value)> {
        let mut doc: Value = serde_json::from_str(text).map_err(|e| DmlError::Syntax {
            offset: offset_of(text, e.line(), e.column()),
            message: format!("line {}, column {}: {e}", e.line(), e.column()),
        })?;
        for ov in overrides {
            apply_override(&mut doc, ov)?;
        }
        let pf: ProblemFile = serde_json::from_value(doc.clone())
            .map_err(|e| DmlError::Invalid(format!("schema violation: {e}")))?;
        pf.validate()?;
        Ok((pf, doc))
    }

    fn validate(&self) -> Result<()> {
        if self.version != 1 {
            return Err(DmlError::Invalid(format!("unsupported version {}", self.version)));
        }
        match self.field {
            FieldKind::Rational => {}
            FieldKind::Fp { p } | FieldKind::Fpt { p } => check_prime(p)?,
        }
        let need = |ok: bool, what: &str| {
            if ok {
                Ok(())
            } else {
                Err(DmlError::Invalid(format!("command {} requires {what}", self.command.as_str())))
            }
        };
        match self.command {
            Command::Orbit => need(self.map.is_some() && self.point.is_some() && !self.targets.is_empty(), "map, point and targets"),
            Command::Sml => need(self.recurrence.is_some(), "recurrence"),
            Command::Interp => need(self.map.is_some() && self.interp.is_some(), "map and interp"),
            Command::Degree => need(self.map.is_some(), "map"),
            Command::Height => need(self.point.is_some(), "point"),
            Command::Density => need(
                self.set.is_some() || (self.map.is_some() && self.point.is_some() && !self.targets.is_empty())
                    || self.recurrence.is_some(),
                "set, recurrence, or map, point and targets",
            ),
        }
    }

    /// Number of variables, taken from the map or the point.
    pub fn nvars(&self) -> Result<usize> {
        if let Some(m) = &self.map {
            return Ok(split_tuple(m).len());
        }
        if let Some(p) = &self.point {
            return Ok(self.parse_point_text(p)?.dim());
        }
        Err(DmlError::Invalid("no map or point to infer the dimension from".into()))
    }

    pub fn parse_map(&self) -> Result<PolyMap> {
        let text = self.map.as_deref().ok_or_else(|| DmlError::Invalid("missing map".into()))?;
        parse_map(text, self.nvars()?, self.field)
    }

    fn parse_point_text(&self, text: &str) -> Result<Point> {
        parse_point(text, self.field)
    }

    pub fn parse_point(&self) -> Result<Point> {
        let text = self.point.as_deref().ok_or_else(|| DmlError::Invalid("missing point".into()))?;
        self.parse_point_text(text)
    }

    pub fn parse_targets(&self) -> Result<Vec<MultiPoly>> {
        let n = self.nvars()?;
        self.targets.iter().map(|g| parse_poly(g, n, self.field)).collect()
    }

    pub fn orbit_problem(&self) -> Result<OrbitProblem> {
        OrbitProblem::new(self.parse_map()?, self.parse_point()?, self.parse_targets()?)
    }

    pub fn recurrence(&self) -> Result<Recurrence> {
        let spec = self.recurrence.as_ref().ok_or_else(|| DmlError::Invalid("missing recurrence".into()))?;
        let q = FieldKind::Rational;
        Recurrence::new(
            spec.coeffs.iter().map(|c| parse_scalar(c, q)).collect::<Result<_>>()?,
            spec.initial.iter().map(|c| parse_scalar(c, q)).collect::<Result<_>>()?,
        )
    }
}

/// Top-level comma split of a parenthesized tuple, for dimension inference.
fn split_tuple(text: &str) -> Vec<&str> {
    let t = text.trim();
    let inner = if t.starts_with('(') && matching_close(t) == Some(t.len() - 1) { &t[1..t.len() - 1] } else { t };
    let mut parts = Vec::new();
    let (mut depth, mut start) = (0i32, 0usize);
    for (i, c) in inner.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&inner[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&inner[start..]);
    parts
}

fn matching_close(t: &str) -> Option<usize> {
    let mut depth = 0i32;
    for (i, c) in t.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
            _ => {}
        }
    }
    None
}

fn offset_of(text: &str, line: usize, column: usize) -> usize {
    text.split_inclusive('\n').take(line.saturating_sub(1)).map(str::len).sum::<usize>() + column.saturating_sub(1)
}

fn apply_override(doc: &mut Value, ov: &str) -> Result<()> {
    let (key, raw) = ov
        .split_once('=')
        .ok_or_else(|| DmlError::Invalid(format!("override `{ov}` is not key=value")))?;
    let value = serde_json::from_str::<Value>(raw).unwrap_or_else(|_| {
        if raw.contains(',') {
            Value::Array(
                raw.split(',')
                    .map(|s| serde_json::from_str(s.trim()).unwrap_or_else(|_| Value::String(s.trim().into())))
                    .collect(),
            )
        } else {
            Value::String(raw.into())
        }
    });
    let path: Vec<&str> = if key.contains('.') { key.split('.').collect() } else { vec!["config", key] };
    let obj = doc.as_object_mut().ok_or_else(|| DmlError::Invalid("problem file must be an object".into()))?;
    let mut cur = obj;
    for part in &path[..path.len() - 1] {
        cur = cur
            .entry(part.to_string())
            .or_insert_with(|| Value::Object(Default::default()))
            .as_object_mut()
            .ok_or_else(|| DmlError::Invalid(format!("override path `{key}` crosses a non-object")))?;
    }
    cur.insert(path[path.len() - 1].to_string(), value);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides_and_inference() {
        let text = r#"{"version": 1, "command": "orbit", "map": "(x1 + 1, 2*x2)", "point": "(0, 1)", "targets": ["x2 - 32"]}"#;
        let (pf, _) = ProblemFile::from_json(text, &["k=32".into(), "primes=5,7".into(), "field.kind=rational".into()]).unwrap();
        assert_eq!(pf.config.k, 32);
        assert_eq!(pf.config.primes, vec![5, 7]);
        assert_eq!(pf.nvars().unwrap(), 2);
        assert_eq!(pf.orbit_problem().unwrap().dim(), 2);
    }

    #[test]
    fn malformed_json_reports_position() {
        let err = ProblemFile::from_json("{\n  \"version\": 1,\n  \"command\" \"orbit\"\n}", &[]).unwrap_err();
        match err {
            DmlError::Syntax { offset, message } => {
                assert!(message.contains("line 3"));
                assert_eq!(offset, 30);
            }
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn schema_violations() {
        assert!(ProblemFile::from_json(r#"{"version": 1, "command": "orbit"}"#, &[]).is_err());
        assert!(ProblemFile::from_json(r#"{"version": 1, "command": "fly"}"#, &[]).is_err());
        assert!(ProblemFile::from_json(r#"{"version": 2, "command": "degree", "map": "(x1)"}"#, &[]).is_err());
        let bad_field = r#"{"version": 1, "command": "degree", "map": "(x1)", "field": {"kind": "fpt", "p": 4}}"#;
        assert!(ProblemFile::from_json(bad_field, &[]).is_err());
    }
}
