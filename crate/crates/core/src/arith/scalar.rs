use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::fp::{Fp, FpPoly, RatFunc};

/// Coefficient field of a polynomial, map or point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FieldKind {
    Rational,
    Fp { p: u64 },
    Fpt { p: u64 },
}

impl FieldKind {
    pub fn zero(&self) -> Scalar {
        self.from_int(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> Scalar {
        match *self {
            FieldKind::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
            FieldKind::Fp { p } => Scalar::Fp(Fp::new(n, p)),
            FieldKind::Fpt { p } => Scalar::Fpt(RatFunc::constant(n, p)),
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> Scalar {
        match *self {
            FieldKind::Rational => Scalar::Rational(BigRational::from_integer(n.clone())),
            FieldKind::Fp { p } | FieldKind::Fpt { p } => {
                let r = (n % BigInt::from(p) + BigInt::from(p)) % BigInt::from(p);
                let v: i64 = r.try_into().expect("residue fits");
                self.from_int(v)
            }
        }
    }

    /// `num / den` as a field element, `None` when `den` vanishes in the field.
    pub fn from_fraction(&self, num: &BigInt, den: &BigInt) -> Option<Scalar> {
        let n = self.from_bigint(num);
        let d = self.from_bigint(den);
        d.inv().map(|di| n.mul(&di))
    }

    /// The function-field parameter `t`, only in 𝔽_p(t).
    pub fn t(&self) -> Option<Scalar> {
        match *self {
            FieldKind::Fpt { p } => Some(Scalar::Fpt(RatFunc::t(p))),
            _ => None,
        }
    }

    pub fn characteristic(&self) -> u64 {
        match *self {
            FieldKind::Rational => 0,
            FieldKind::Fp { p } | FieldKind::Fpt { p } => p,
        }
    }
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldKind::Rational => write!(f, "Q"),
            FieldKind::Fp { p } => write!(f, "F_{p}"),
            FieldKind::Fpt { p } => write!(f, "F_{p}(t)"),
        }
    }
}

/// An exact field element. Binary operations require both sides to live in the same field;
/// mixing fields is a programming error and panics.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Fp(Fp),
    Fpt(RatFunc),
}

macro_rules! same_field {
    ($a:expr, $b:expr, $x:ident, $y:ident => $rat:expr, $fp:expr, $fpt:expr) => {
        match ($a, $b) {
            (Scalar::Rational($x), Scalar::Rational($y)) => Scalar::Rational($rat),
            (Scalar::Fp($x), Scalar::Fp($y)) => Scalar::Fp($fp),
            (Scalar::Fpt($x), Scalar::Fpt($y)) => Scalar::Fpt($fpt),
            (a, b) => panic!("scalar field mismatch: {} vs {}", a.field(), b.field()),
        }
    };
}

/// Integer operands skip the gcd normalization, which dominates long integral orbits.
fn rat_op(
    a: &BigRational,
    b: &BigRational,
    int: impl Fn(&BigInt, &BigInt) -> BigInt,
    rat: impl Fn(&BigRational, &BigRational) -> BigRational,
) -> BigRational {
    if a.is_integer() && b.is_integer() {
        BigRational::from_integer(int(a.numer(), b.numer()))
    } else {
        rat(a, b)
    }
}

impl Scalar {
    pub fn field(&self) -> FieldKind {
        match self {
            Scalar::Rational(_) => FieldKind::Rational,
            Scalar::Fp(x) => FieldKind::Fp { p: x.modulus() },
            Scalar::Fpt(x) => FieldKind::Fpt { p: x.modulus() },
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(x) => x.is_zero(),
            Scalar::Fp(x) => x.is_zero(),
            Scalar::Fpt(x) => x.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        *self == self.field().one()
    }

    pub fn add(&self, o: &Scalar) -> Scalar {
        same_field!(self, o, a, b => rat_op(a, b, |x, y| x + y, |x, y| x + y), a.add(b), a.add(b))
    }

    pub fn sub(&self, o: &Scalar) -> Scalar {
        same_field!(self, o, a, b => rat_op(a, b, |x, y| x - y, |x, y| x - y), a.sub(b), a.sub(b))
    }

    pub fn mul(&self, o: &Scalar) -> Scalar {
        same_field!(self, o, a, b => rat_op(a, b, |x, y| x * y, |x, y| x * y), a.mul(b), a.mul(b))
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rational(x) => Scalar::Rational(-x),
            Scalar::Fp(x) => Scalar::Fp(x.neg()),
            Scalar::Fpt(x) => Scalar::Fpt(x.neg()),
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Rational(x) if x.is_zero() => None,
            Scalar::Rational(x) => Some(Scalar::Rational(x.recip())),
            Scalar::Fp(x) => x.inv().map(Scalar::Fp),
            Scalar::Fpt(x) => x.inv().map(Scalar::Fpt),
        }
    }

    pub fn pow(&self, mut e: u32) -> Scalar {
        if e == 1 {
            return self.clone();
        }
        let mut base = self.clone();
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(x) => Some(x),
            _ => None,
        }
    }

    pub fn as_ratfunc(&self) -> Option<&RatFunc> {
        match self {
            Scalar::Fpt(x) => Some(x),
            _ => None,
        }
    }

    /// True when the printed form needs parentheses as a coefficient.
    pub(crate) fn is_compound(&self) -> bool {
        match self {
            Scalar::Rational(_) | Scalar::Fp(_) => false,
            Scalar::Fpt(r) => {
                !r.den().is_one() || r.num().coeffs().iter().filter(|&&c| c != 0).count() > 1
            }
        }
    }

    /// True when the printed form starts with a minus sign.
    pub(crate) fn is_negative(&self) -> bool {
        matches!(self, Scalar::Rational(x) if x.is_negative())
    }
}

impl From<BigRational> for Scalar {
    fn from(x: BigRational) -> Self {
        Scalar::Rational(x)
    }
}

impl From<FpPoly> for Scalar {
    fn from(x: FpPoly) -> Self {
        Scalar::Fpt(RatFunc::from_poly(x))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(x) => {
                if x.denom().is_one() {
                    write!(f, "{}", x.numer())
                } else {
                    write!(f, "{}/{}", x.numer(), x.denom())
                }
            }
            Scalar::Fp(x) => write!(f, "{x}"),
            Scalar::Fpt(x) => write!(f, "{x}"),
        }
    }
}

/// Convenience constructor for exact rationals.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}
