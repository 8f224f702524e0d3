//! Exact arithmetic in a real quadratic field Q(sqrt(D)).
//!
//! Every coordinate, rotation entry and expansion factor in the engine is a
//! [`QScalar`]: a value `a + b*sqrt(D)` with arbitrary-precision rational
//! `a`, `b` and a fixed square-free `D > 1` shared by all scalars of one
//! tiling system. Arithmetic never rounds; comparisons are sign-exact.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("mismatched field discriminants: {0} vs {1}")]
    MismatchedField(u32, u32),
    #[error("invalid rational literal `{0}`")]
    BadRational(String),
}

/// `a + b*sqrt(d)` with exact rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QScalar {
    a: BigRational,
    b: BigRational,
    d: u32,
}

fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl QScalar {
    pub fn new(a: BigRational, b: BigRational, d: u32) -> Self {
        QScalar { a, b, d }
    }

    pub fn from_int(n: i64, d: u32) -> Self {
        QScalar::new(big(n), BigRational::zero(), d)
    }

    pub fn from_ratio(num: i64, den: i64, d: u32) -> Self {
        QScalar::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
            d,
        )
    }

    /// `num/den * sqrt(d)`
    pub fn surd_ratio(num: i64, den: i64, d: u32) -> Self {
        QScalar::new(
            BigRational::zero(),
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            d,
        )
    }

    pub fn zero(d: u32) -> Self {
        QScalar::from_int(0, d)
    }

    pub fn one(d: u32) -> Self {
        QScalar::from_int(1, d)
    }

    /// sqrt(D) itself.
    pub fn sqrt_d(d: u32) -> Self {
        QScalar::new(BigRational::zero(), BigRational::one(), d)
    }

    /// Parse a rational literal `p` or `p/q` into the rational part.
    pub fn parse_rational(text: &str, d: u32) -> Result<Self, ScalarError> {
        Ok(QScalar::new(parse_ratio(text)?, BigRational::zero(), d))
    }

    pub fn field_d(&self) -> u32 {
        self.d
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn surd_part(&self) -> &BigRational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    fn demand_same_field(&self, other: &Self) -> Result<(), ScalarError> {
        if self.d == other.d {
            Ok(())
        } else {
            Err(ScalarError::MismatchedField(self.d, other.d))
        }
    }

    /// Field norm `a^2 - D b^2` (rational).
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.b * &self.b * big(self.d as i64)
    }

    /// Galois conjugate `a - b*sqrt(D)`.
    pub fn conjugate(&self) -> Self {
        QScalar::new(self.a.clone(), -self.b.clone(), self.d)
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self, ScalarError> {
        self.demand_same_field(o)?;
        Ok(QScalar::new(&self.a + &o.a, &self.b + &o.b, self.d))
    }

    pub fn checked_sub(&self, o: &Self) -> Result<Self, ScalarError> {
        self.demand_same_field(o)?;
        Ok(QScalar::new(&self.a - &o.a, &self.b - &o.b, self.d))
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self, ScalarError> {
        self.demand_same_field(o)?;
        let d = big(self.d as i64);
        Ok(QScalar::new(
            &self.a * &o.a + &self.b * &o.b * &d,
            &self.a * &o.b + &self.b * &o.a,
            self.d,
        ))
    }

    pub fn checked_div(&self, o: &Self) -> Result<Self, ScalarError> {
        self.demand_same_field(o)?;
        if o.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        // 1/(a+b√D) = (a-b√D)/(a²-Db²); the norm is nonzero because √D is
        // irrational for square-free D > 1.
        let n = o.norm();
        let inv = QScalar::new(&o.a / &n, -&o.b / &n, o.d);
        self.checked_mul(&inv)
    }

    pub fn try_cmp(&self, o: &Self) -> Result<Ordering, ScalarError> {
        self.demand_same_field(o)?;
        let diff = self.checked_sub(o)?;
        Ok(diff.sign())
    }

    /// Exact sign of the real number `a + b*sqrt(D)` vs zero.
    pub fn sign(&self) -> Ordering {
        let sa = rational_sign(&self.a);
        let sb = rational_sign(&self.b);
        match (sa, sb) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (x, y) if x == y => x,
            _ => {
                // opposite signs: compare a² with D b²
                let lhs = &self.a * &self.a;
                let rhs = &self.b * &self.b * big(self.d as i64);
                match lhs.cmp(&rhs) {
                    Ordering::Greater => sa,
                    Ordering::Less => sb,
                    // a² = D b² with a,b ≠ 0 would make √D rational
                    Ordering::Equal => unreachable!("sqrt({}) cannot be rational", self.d),
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() == Ordering::Greater
    }

    pub fn abs(&self) -> Self {
        if self.sign() == Ordering::Less {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        a + b * (self.d as f64).sqrt()
    }
}

fn rational_sign(r: &BigRational) -> Ordering {
    if r.is_zero() {
        Ordering::Equal
    } else if r.is_positive() {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

pub fn parse_ratio(text: &str) -> Result<BigRational, ScalarError> {
    let bad = || ScalarError::BadRational(text.to_string());
    let mut parts = text.splitn(2, '/');
    let num: BigInt = parts.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
    let den: BigInt = match parts.next() {
        Some(s) => s.trim().parse().map_err(|_| bad())?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

pub fn ratio_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait for &QScalar {
            type Output = QScalar;
            fn $method(self, rhs: &QScalar) -> QScalar {
                self.$checked(rhs).expect("QScalar field mismatch")
            }
        }
        impl $trait for QScalar {
            type Output = QScalar;
            fn $method(self, rhs: QScalar) -> QScalar {
                (&self).$checked(&rhs).expect("QScalar field mismatch")
            }
        }
        impl $trait<&QScalar> for QScalar {
            type Output = QScalar;
            fn $method(self, rhs: &QScalar) -> QScalar {
                (&self).$checked(rhs).expect("QScalar field mismatch")
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);
forward_binop!(Div, div, checked_div);

impl Neg for QScalar {
    type Output = QScalar;
    fn neg(self) -> QScalar {
        QScalar::new(-self.a, -self.b, self.d)
    }
}

impl Neg for &QScalar {
    type Output = QScalar;
    fn neg(self) -> QScalar {
        QScalar::new(-self.a.clone(), -self.b.clone(), self.d)
    }
}

impl PartialOrd for QScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        self.try_cmp(other).expect("QScalar field mismatch")
    }
}

impl fmt::Display for QScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let surd = |f: &mut fmt::Formatter<'_>, b: &BigRational, lead_sign: bool| {
            if b.is_one() {
                write!(f, "{}√{}", if lead_sign { "+" } else { "" }, self.d)
            } else if (-b).is_one() {
                write!(f, "-√{}", self.d)
            } else if b.is_positive() && lead_sign {
                write!(f, "+{}√{}", ratio_string(b), self.d)
            } else {
                write!(f, "{}√{}", ratio_string(b), self.d)
            }
        };
        if self.b.is_zero() {
            return write!(f, "{}", ratio_string(&self.a));
        }
        if self.a.is_zero() {
            return surd(f, &self.b, false);
        }
        write!(f, "{}", ratio_string(&self.a))?;
        surd(f, &self.b, true)
    }
}

impl fmt::Debug for QScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
