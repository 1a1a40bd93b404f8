//! Reduced exact rationals over [`Int`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::int::Int;

/// An exact rational `num/den` with `den > 0` and `gcd(|num|, den) = 1`.
///
/// The sign always lives in the numerator, so two ratios are equal exactly
/// when their fields are equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Ratio {
    num: Int,
    den: Int,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RatioError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("cannot parse {0:?} as a rational (expected N or N/D)")]
    Parse(String),
}

impl Ratio {
    pub fn new(num: impl Into<Int>, den: impl Into<Int>) -> Result<Ratio, RatioError> {
        Ratio::from_parts(num.into(), den.into())
    }

    pub fn from_parts(num: Int, den: Int) -> Result<Ratio, RatioError> {
        if den.is_zero() {
            return Err(RatioError::ZeroDenominator);
        }
        let (num, den) = if den.is_negative() { (-num, -den) } else { (num, den) };
        let g = num.gcd(&den);
        if g == Int::ONE {
            return Ok(Ratio { num, den });
        }
        Ok(Ratio {
            num: num.div_exact(&g).expect("gcd divides numerator"),
            den: den.div_exact(&g).expect("gcd divides denominator"),
        })
    }

    pub fn integer(v: impl Into<Int>) -> Ratio {
        Ratio {
            num: v.into(),
            den: Int::ONE,
        }
    }

    pub fn zero() -> Ratio {
        Ratio::integer(0)
    }

    pub fn one() -> Ratio {
        Ratio::integer(1)
    }

    pub fn numer(&self) -> &Int {
        &self.num
    }

    pub fn denom(&self) -> &Int {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.num.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.num.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.den == Int::ONE
    }

    pub fn to_integer(&self) -> Option<Int> {
        self.is_integer().then(|| self.num.clone())
    }

    pub fn recip(&self) -> Option<Ratio> {
        Ratio::from_parts(self.den.clone(), self.num.clone()).ok()
    }

    pub fn checked_div(&self, rhs: &Ratio) -> Option<Ratio> {
        Some(self * &rhs.recip()?)
    }

    pub fn square(&self) -> Ratio {
        self * self
    }

    pub fn pow(&self, exp: u32) -> Ratio {
        // Reduced form is preserved under powers.
        Ratio {
            num: self.num.pow(exp),
            den: self.den.pow(exp),
        }
    }

    /// The exact square root when both reduced parts are perfect squares.
    pub fn sqrt_exact(&self) -> Option<Ratio> {
        Some(Ratio {
            num: self.num.perfect_sqrt()?,
            den: self.den.perfect_sqrt()?,
        })
    }

    pub fn is_perfect_square(&self) -> bool {
        self.sqrt_exact().is_some()
    }
}

impl From<Int> for Ratio {
    fn from(v: Int) -> Ratio {
        Ratio::integer(v)
    }
}

impl Add<&Ratio> for &Ratio {
    type Output = Ratio;
    fn add(self, rhs: &Ratio) -> Ratio {
        if self.den == rhs.den {
            return Ratio::from_parts(&self.num + &rhs.num, self.den.clone()).unwrap();
        }
        Ratio::from_parts(&self.num * &rhs.den + &rhs.num * &self.den, &self.den * &rhs.den).unwrap()
    }
}

impl Sub<&Ratio> for &Ratio {
    type Output = Ratio;
    fn sub(self, rhs: &Ratio) -> Ratio {
        self + &(-rhs)
    }
}

impl Mul<&Ratio> for &Ratio {
    type Output = Ratio;
    fn mul(self, rhs: &Ratio) -> Ratio {
        // Cross-cancel first to keep intermediates small.
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let cancel = |v: &Int, g: &Int| {
            if g.is_zero() {
                v.clone()
            } else {
                v.div_exact(g).unwrap()
            }
        };
        let num = cancel(&self.num, &g1) * cancel(&rhs.num, &g2);
        let den = cancel(&self.den, &g2) * cancel(&rhs.den, &g1);
        Ratio::from_parts(num, den).unwrap()
    }
}

macro_rules! forward_owned {
    ($($trait:ident $method:ident),*) => {$(
        impl $trait<Ratio> for Ratio {
            type Output = Ratio;
            fn $method(self, rhs: Ratio) -> Ratio {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Ratio> for Ratio {
            type Output = Ratio;
            fn $method(self, rhs: &Ratio) -> Ratio {
                (&self).$method(rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for &Ratio {
    type Output = Ratio;
    fn neg(self) -> Ratio {
        Ratio {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for Ratio {
    type Output = Ratio;
    fn neg(self) -> Ratio {
        -&self
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Ratio) -> Ordering {
        (&self.num * &other.den).cmp(&(&other.num * &self.den))
    }
}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Ratio) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl fmt::Debug for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Ratio {
    type Err = RatioError;

    fn from_str(s: &str) -> Result<Ratio, RatioError> {
        let bad = || RatioError::Parse(s.to_owned());
        let (n, d) = match s.trim().split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let n: Int = n.parse().map_err(|_| bad())?;
        let d: Int = d.parse().map_err(|_| bad())?;
        Ratio::from_parts(n, d)
    }
}

impl Serialize for Ratio {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Ratio {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Ratio, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
