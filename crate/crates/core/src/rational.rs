//! Exact rational and Gaussian-rational scalars.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// An exact rational number, always stored reduced with a positive
/// denominator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numerator: i64, denominator: i64) -> Result<Self, Error> {
        if denominator == 0 {
            return Err(Error::InvalidRational(format!("{numerator}/0")));
        }
        Ok(Self(BigRational::new(numerator.into(), denominator.into())))
    }

    pub fn from_integer(value: i64) -> Self {
        Self(BigRational::from_integer(value.into()))
    }

    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    pub fn one() -> Self {
        Self(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn numerator(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denominator(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn recip(&self) -> Option<Self> {
        (!self.is_zero()).then(|| Self(self.0.recip()))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::InvalidRational(s.to_string());
        let parse_int = |t: &str| -> Result<BigInt, Error> {
            let t = t.trim();
            let digits = t.strip_prefix(['-', '+']).unwrap_or(t);
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            t.parse::<BigInt>().map_err(|_| bad())
        };
        match s.split_once('/') {
            None => Ok(Self(BigRational::from_integer(parse_int(s)?))),
            Some((p, q)) => {
                let q = parse_int(q)?;
                if q.is_zero() {
                    return Err(bad());
                }
                Ok(Self(BigRational::new(parse_int(p)?, q)))
            }
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for Rational {
    fn from(value: i64) -> Self {
        Self::from_integer(value)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }

        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl std::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

/// `re + i·im` with exact rational parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn real(re: Rational) -> Self {
        Self {
            re,
            im: Rational::zero(),
        }
    }

    pub fn zero() -> Self {
        Self::real(Rational::zero())
    }

    pub fn conj(&self) -> Self {
        Self {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// `|z|²`.
    pub fn norm_sqr(&self) -> Rational {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        Self {
            re: &self.re * factor,
            im: &self.im * factor,
        }
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else {
            write!(f, "{}{:+}i", self.re, ImDisplay(&self.im))
        }
    }
}

struct ImDisplay<'a>(&'a Rational);

impl fmt::Display for ImDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if f.sign_plus() && !self.0.is_negative() {
            write!(f, "+")?;
        }
        write!(f, "{}", self.0)
    }
}

impl Add<&GaussianRational> for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Mul<&GaussianRational> for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &(&self.re * &rhs.re) - &(&self.im * &rhs.im),
            im: &(&self.re * &rhs.im) + &(&self.im * &rhs.re),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_reduce() {
        assert_eq!(q("2/4"), q("1/2"));
        assert_eq!(q("-3/-6").to_string(), "1/2");
        assert_eq!(q("3/-6").to_string(), "-1/2");
        assert_eq!(q("7").to_string(), "7");
        assert_eq!(q("-0").to_string(), "0");
        assert_eq!(q("4/2").to_string(), "2");
        for bad in ["", "1/0", "1.5", "a/b", "1/", "/2", "1/2/3", "--1"] {
            assert!(bad.parse::<Rational>().is_err(), "{bad} should not parse");
        }
    }

    #[test]
    fn arithmetic() {
        assert_eq!(&q("1/2") + &q("1/3"), q("5/6"));
        assert_eq!(&q("1/2") - &q("1/3"), q("1/6"));
        assert_eq!(&q("2/3") * &q("3/4"), q("1/2"));
        assert_eq!(-q("1/2"), q("-1/2"));
        assert_eq!(q("2/3").recip(), Some(q("3/2")));
        assert_eq!(q("0").recip(), None);
    }

    #[test]
    fn gaussian() {
        let i = GaussianRational::new(q("0"), q("1"));
        assert_eq!(&i * &i, GaussianRational::real(q("-1")));
        let z = GaussianRational::new(q("1/2"), q("-3"));
        assert_eq!((&z * &z.conj()), GaussianRational::real(z.norm_sqr()));
        assert_eq!(z.to_string(), "1/2-3i");
        assert_eq!(GaussianRational::new(q("1"), q("2")).to_string(), "1+2i");
    }

    #[test]
    fn serde_uses_strings() {
        let json = serde_json::to_string(&q("-5/7")).unwrap();
        assert_eq!(json, "\"-5/7\"");
        let back: Rational = serde_json::from_str(&json).unwrap();
        assert_eq!(back, q("-5/7"));
    }
}
