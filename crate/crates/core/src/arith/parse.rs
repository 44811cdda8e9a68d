//! Text grammar for polynomials, maps and points.
//!
//! ```text
//! tuple  := '(' expr (',' expr)* ')' | expr (',' expr)*
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*        divisor must be a nonzero constant
//! unary  := '-' unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | 'x' index | 't' | '(' expr ')'
//! ```

use num_bigint::BigInt;

use super::map::{PolyMap, Point};
use super::poly::MultiPoly;
use super::scalar::FieldKind;
use crate::error::{DmlError, Result};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    nvars: usize,
    field: FieldKind,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, nvars: usize, field: FieldKind) -> Self {
        Parser { src: text.as_bytes(), pos: 0, nvars, field }
    }

    fn err<T>(&self, offset: usize, message: impl Into<String>) -> Result<T> {
        Err(DmlError::Syntax { offset, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            let at = self.pos;
            match self.src.get(at) {
                Some(&found) => self.err(at, format!("expected '{}', found '{}'", c as char, found as char)),
                None => self.err(at, format!("expected '{}', found end of input", c as char)),
            }
        }
    }

    fn expect_end(&mut self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(c) => self.err(self.pos, format!("unexpected '{}'", c as char)),
        }
    }

    fn digits(&mut self) -> &'a str {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap()
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = acc.add(&self.term()?);
            } else if self.eat(b'-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = acc.mul(&self.unary()?);
            } else if self.eat(b'/') {
                self.skip_ws();
                let at = self.pos;
                let d = self.unary()?;
                if !d.is_constant() {
                    return self.err(at, "division by a non-constant expression");
                }
                match d.constant_term().inv() {
                    Some(inv) => acc = acc.scale(&inv),
                    None => return self.err(at, "division by zero"),
                }
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<MultiPoly> {
        if self.eat(b'-') {
            Ok(self.unary()?.neg())
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<MultiPoly> {
        let base = self.atom()?;
        if self.eat(b'^') {
            self.skip_ws();
            let at = self.pos;
            let d = self.digits();
            if d.is_empty() {
                return self.err(at, "expected a nonnegative integer exponent");
            }
            let e: u32 = match d.parse() {
                Ok(e) => e,
                Err(_) => return self.err(at, "exponent too large"),
            };
            Ok(base.pow(e))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<MultiPoly> {
        let at = {
            self.skip_ws();
            self.pos
        };
        match self.peek() {
            None => self.err(at, "unexpected end of input"),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let d = self.digits();
                let n: BigInt = d.parse().unwrap();
                Ok(MultiPoly::constant(self.nvars, self.field.from_bigint(&n)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                if name == "t" {
                    return match self.field.t() {
                        Some(t) => Ok(MultiPoly::constant(self.nvars, t)),
                        None => Err(DmlError::UnknownVariable { name: name.into(), offset: start }),
                    };
                }
                let idx = name
                    .strip_prefix('x')
                    .and_then(|d| d.parse::<usize>().ok())
                    .filter(|&i| i >= 1 && i <= self.nvars);
                match idx {
                    Some(i) => Ok(MultiPoly::var(self.nvars, self.field, i - 1)),
                    None => Err(DmlError::UnknownVariable { name: name.into(), offset: start }),
                }
            }
            Some(c) => self.err(at, format!("unexpected '{}'", c as char)),
        }
    }

    fn list(&mut self) -> Result<Vec<MultiPoly>> {
        let mut items = vec![self.expr()?];
        while self.eat(b',') {
            items.push(self.expr()?);
        }
        Ok(items)
    }

    fn tuple(&mut self) -> Result<Vec<MultiPoly>> {
        if self.peek() == Some(b'(') {
            let save = self.pos;
            self.pos += 1;
            let attempt = self.list().and_then(|l| {
                self.expect(b')')?;
                self.expect_end()?;
                Ok(l)
            });
            if attempt.is_ok() {
                return attempt;
            }
            self.pos = save;
        }
        let l = self.list()?;
        self.expect_end()?;
        Ok(l)
    }
}

/// Parses one polynomial in `x1..x{nvars}`.
pub fn parse_poly(text: &str, nvars: usize, field: FieldKind) -> Result<MultiPoly> {
    let mut p = Parser::new(text, nvars, field);
    let e = p.expr()?;
    p.expect_end()?;
    Ok(e)
}

/// Parses a map `(f1, ..., fN)`; the number of coordinates must equal `nvars`.
pub fn parse_map(text: &str, nvars: usize, field: FieldKind) -> Result<PolyMap> {
    let coords = Parser::new(text, nvars, field).tuple()?;
    if coords.len() != nvars {
        return Err(DmlError::DimensionMismatch { expected: nvars, found: coords.len() });
    }
    PolyMap::new(coords)
}

/// Parses a point `(a1, ..., aN)` of constants.
pub fn parse_point(text: &str, field: FieldKind) -> Result<Point> {
    let coords = Parser::new(text, 0, field).tuple()?;
    Point::new(field, coords.into_iter().map(|c| c.constant_term()).collect())
}

/// Parses a single constant.
pub fn parse_scalar(text: &str, field: FieldKind) -> Result<super::scalar::Scalar> {
    Ok(parse_poly(text, 0, field)?.constant_term())
}
