use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{ArithOp, ExactRational};
use crate::error::{Error, Result};

/// `a + b√d` in `ℚ(√d)`, with `d > 1` square-free.
///
/// `d` is carried at runtime; mixing values from different fields is an error
/// rather than a coercion. Since `√d` is irrational, the representation is
/// unique and equality is structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadRational {
    a: ExactRational,
    b: ExactRational,
    d: u64,
}

fn is_square_free(d: u64) -> bool {
    let mut p = 2u64;
    while p * p <= d {
        if d.is_multiple_of(p * p) {
            return false;
        }
        p += 1;
    }
    true
}

fn check_radicand(d: i64) -> Result<u64> {
    // d = 1 is excluded: a + b√1 would not be a unique representation
    if d < 2 || !is_square_free(d as u64) {
        return Err(Error::InvalidRadicand(d));
    }
    Ok(d as u64)
}

impl QuadRational {
    pub fn new(a: ExactRational, b: ExactRational, d: i64) -> Result<Self> {
        Ok(Self { a, b, d: check_radicand(d)? })
    }

    pub fn from_rational(a: ExactRational, d: i64) -> Result<Self> {
        Self::new(a, ExactRational::zero(), d)
    }

    /// The generator `√d`.
    pub fn sqrt_d(d: i64) -> Result<Self> {
        Self::new(ExactRational::zero(), ExactRational::one(), d)
    }

    pub fn one(d: i64) -> Result<Self> {
        Self::from_rational(ExactRational::one(), d)
    }

    pub fn rational_part(&self) -> &ExactRational {
        &self.a
    }

    pub fn sqrt_part(&self) -> &ExactRational {
        &self.b
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// The value as a plain rational; fails if the `√d` part is nonzero.
    pub fn to_rational(&self) -> Result<ExactRational> {
        if self.is_rational() {
            Ok(self.a.clone())
        } else {
            Err(Error::IrrationalResidue(self.b.to_string()))
        }
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.d == other.d {
            Ok(())
        } else {
            Err(Error::FieldMismatch(self.d, other.d))
        }
    }

    fn with(&self, a: ExactRational, b: ExactRational) -> Self {
        Self { a, b, d: self.d }
    }

    pub fn conj(&self) -> Self {
        self.with(self.a.clone(), -&self.b)
    }

    /// Field norm `a² - d b²`.
    pub fn norm(&self) -> ExactRational {
        &self.a * &self.a - &(&self.b * &self.b) * &ExactRational::from(self.d)
    }

    pub fn neg(&self) -> Self {
        self.with(-&self.a, -&self.b)
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        self.same_field(rhs)?;
        Ok(self.with(&self.a + &rhs.a, &self.b + &rhs.b))
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        self.same_field(rhs)?;
        Ok(self.with(&self.a - &rhs.a, &self.b - &rhs.b))
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        self.same_field(rhs)?;
        let d = ExactRational::from(self.d);
        let a = &self.a * &rhs.a + &(&self.b * &rhs.b) * &d;
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        Ok(self.with(a, b))
    }

    pub fn inverse(&self) -> Result<Self> {
        // norm is nonzero for nonzero elements since √d is irrational
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.with(self.a.checked_div(&n)?, (-&self.b).checked_div(&n)?))
    }

    pub fn try_div(&self, rhs: &Self) -> Result<Self> {
        self.same_field(rhs)?;
        self.try_mul(&rhs.inverse()?)
    }

    pub fn scale(&self, k: &ExactRational) -> Self {
        self.with(&self.a * k, &self.b * k)
    }

    pub fn add_rational(&self, k: &ExactRational) -> Self {
        self.with(&self.a + k, self.b.clone())
    }

    /// Integer power; negative exponents invert first.
    pub fn powi(&self, exp: i64) -> Result<Self> {
        let base = if exp < 0 { self.inverse()? } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = self.with(ExactRational::one(), ExactRational::zero());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.try_mul(&sq)?;
            }
            e >>= 1;
            if e > 0 {
                sq = sq.try_mul(&sq)?;
            }
        }
        Ok(acc)
    }

    pub fn to_f64(&self) -> f64 {
        self.a.to_f64() + self.b.to_f64() * (self.d as f64).sqrt()
    }
}

/// Exact `x op y` in `ℚ(√d)`; mismatched fields and zero divisors are errors.
pub fn quad_arith(x: &QuadRational, y: &QuadRational, op: ArithOp) -> Result<QuadRational> {
    match op {
        ArithOp::Add => x.try_add(y),
        ArithOp::Sub => x.try_sub(y),
        ArithOp::Mul => x.try_mul(y),
        ArithOp::Div => x.try_div(y),
    }
}

impl fmt::Display for QuadRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*sqrt({})", self.a, self.b, self.d)
    }
}

impl fmt::Debug for QuadRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for QuadRational {
    type Err = Error;

    /// Grammar: `<rational> + <rational>*sqrt(<d>)`.
    fn from_str(s: &str) -> Result<Self> {
        let err = || Error::Parse { kind: "quadratic rational", input: s.to_string() };
        let (a, rest) = s.split_once(" + ").ok_or_else(err)?;
        let (b, rad) = rest.trim().split_once("*sqrt(").ok_or_else(err)?;
        let d = rad.strip_suffix(')').ok_or_else(err)?;
        let d: i64 = d.trim().parse().map_err(|_| err())?;
        Self::new(a.parse()?, b.parse()?, d)
    }
}

impl Serialize for QuadRational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for QuadRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
