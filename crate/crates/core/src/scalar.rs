//! Exact Gaussian rationals `a + b i` with `a, b` arbitrary-precision rationals.
//!
//! This is the coefficient field for everything else in the crate. Values are
//! always normalized (`num_rational` keeps fractions in lowest terms with a
//! positive denominator), so structural equality is numeric equality.

use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An exact complex number with rational real and imaginary parts.
///
/// The derived ordering compares `(re, im)` lexicographically. It is a
/// structural order used for canonical sorting, not a field order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GaussianRational {
    re: BigRational,
    im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        Self { re, im: BigRational::zero() }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::real(BigRational::from_integer(BigInt::from(n)))
    }

    /// `num / den` as a real Gaussian rational. Panics if `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::real(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn complex(re: i64, im: i64) -> Self {
        Self::new(BigRational::from_integer(BigInt::from(re)), BigRational::from_integer(BigInt::from(im)))
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Self::complex(0, 1)
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -self.im.clone() }
    }

    /// `|z|^2 = re^2 + im^2`.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(Self { re: &self.re / &n, im: -(&self.im / &n) })
    }

    /// Integer power; negative exponents invert. `None` for `0^e` with `e < 0`.
    pub fn checked_pow(&self, exp: i64) -> Option<Self> {
        let base = if exp < 0 { self.inv()? } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = Self::one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Some(acc)
    }

    /// Integer power. Panics on `0^e` with `e < 0`.
    pub fn pow(&self, exp: i64) -> Self {
        self.checked_pow(exp).expect("zero raised to a negative power")
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        Self { re: BigRational::zero(), im: BigRational::zero() }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        Self { re: BigRational::one(), im: BigRational::zero() }
    }
}

impl From<i64> for GaussianRational {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

impl From<BigInt> for GaussianRational {
    fn from(n: BigInt) -> Self {
        Self::real(BigRational::from_integer(n))
    }
}

impl From<BigRational> for GaussianRational {
    fn from(r: BigRational) -> Self {
        Self::real(r)
    }
}

impl<'a> Add<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl<'a> Sub<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl<'a> Mul<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        if self.im.is_zero() && rhs.im.is_zero() {
            return GaussianRational::real(&self.re * &rhs.re);
        }
        GaussianRational { re: &self.re * &rhs.re - &self.im * &rhs.im, im: &self.re * &rhs.im + &self.im * &rhs.re }
    }
}

impl<'a> Div<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    /// Panics on division by zero.
    fn div(self, rhs: &GaussianRational) -> GaussianRational {
        if rhs.im.is_zero() {
            assert!(!rhs.re.is_zero(), "division by zero");
            return GaussianRational { re: &self.re / &rhs.re, im: &self.im / &rhs.re };
        }
        self * &rhs.inv().expect("division by zero")
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for GaussianRational {
            type Output = GaussianRational;
            fn $m(self, rhs: GaussianRational) -> GaussianRational {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $m(self, rhs: &GaussianRational) -> GaussianRational {
                (&self).$m(rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational { re: -self.re, im: -self.im }
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational { re: -self.re.clone(), im: -self.im.clone() }
    }
}

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, rhs: &GaussianRational) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, rhs: &GaussianRational) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&GaussianRational> for GaussianRational {
    fn mul_assign(&mut self, rhs: &GaussianRational) {
        *self = &*self * rhs;
    }
}

impl Sum for GaussianRational {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |mut acc, x| {
            acc += &x;
            acc
        })
    }
}

impl Product for GaussianRational {
    fn product<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::one(), |acc, x| &acc * &x)
    }
}

/// Renders `a/b` for reals and `a/b+c/di` (or `a/b-c/di`) otherwise.
impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        let sign = if self.im.is_negative() { '-' } else { '+' };
        write!(f, "{}{}{}i", self.re, sign, self.im.abs())
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("malformed rational `{s}`"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let num = num.strip_prefix('+').unwrap_or(num);
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = match den {
        Some(d) if !d.starts_with(['+', '-']) => d.parse().map_err(|_| bad())?,
        Some(_) => return Err(bad()),
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in `{s}`")));
    }
    Ok(BigRational::new(num, den))
}

fn parse_imaginary_coeff(s: &str) -> Result<BigRational> {
    match s {
        "" | "+" => Ok(BigRational::one()),
        "-" => Ok(-BigRational::one()),
        _ => parse_rational(s),
    }
}

/// Accepts `a`, `a/b`, `a/b+c/di`, `a/b-c/di`, and pure imaginary forms
/// such as `i`, `-i`, `3/2i`.
impl FromStr for GaussianRational {
    type Err = Error;

    fn from_str(raw: &str) -> Result<Self> {
        let s: String = raw.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty scalar".into()));
        }
        let Some(body) = s.strip_suffix('i') else {
            return Ok(Self::real(parse_rational(&s)?));
        };
        let split = body.char_indices().skip(1).filter(|&(_, c)| c == '+' || c == '-').map(|(k, _)| k).last();
        match split {
            Some(k) => Ok(Self::new(parse_rational(&body[..k])?, parse_imaginary_coeff(&body[k..])?)),
            None => Ok(Self::new(BigRational::zero(), parse_imaginary_coeff(body)?)),
        }
    }
}

impl Serialize for GaussianRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GaussianRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        // Integers are accepted as a convenience; output is always a string.
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Int(i64),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
            Raw::Int(n) => Ok(Self::from_integer(n)),
        }
    }
}

/// Shorthand used throughout tests and examples.
pub fn gr(n: i64) -> GaussianRational {
    GaussianRational::from_integer(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> GaussianRational {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_render() {
        assert_eq!(p("3"), gr(3));
        assert_eq!(p("6/4").to_string(), "3/2");
        assert_eq!(p("1/2+3/4i").to_string(), "1/2+3/4i");
        assert_eq!(p("-1/2-3/4i").to_string(), "-1/2-3/4i");
        assert_eq!(p("i"), GaussianRational::i());
        assert_eq!(p("-i"), -GaussianRational::i());
        assert_eq!(p("2-i"), GaussianRational::complex(2, -1));
        assert_eq!(p("5/3i"), GaussianRational::new(BigRational::zero(), p("5/3").re().clone()));
        assert_eq!(GaussianRational::i().to_string(), "0+1i");
        assert_eq!(p("0+1i"), GaussianRational::i());
    }

    #[test]
    fn parse_rejects_garbage() {
        for s in ["", "1/0", "abc", "1/-2", "1+2", "i+1"] {
            assert!(s.parse::<GaussianRational>().is_err(), "{s}");
        }
    }

    #[test]
    fn negative_powers_invert() {
        assert_eq!(gr(2).pow(-2), GaussianRational::ratio(1, 4));
        assert_eq!(GaussianRational::i().pow(4), gr(1));
        assert_eq!(GaussianRational::i().pow(-1), -GaussianRational::i());
        assert_eq!(gr(-1).pow(3), gr(-1));
        assert!(gr(0).checked_pow(-1).is_none());
        assert_eq!(gr(0).pow(0), gr(1));
    }

    #[test]
    fn field_ops() {
        let a = GaussianRational::complex(1, 2);
        let b = GaussianRational::complex(3, -1);
        assert_eq!(&(&a * &b) / &b, a);
        assert_eq!(&a * &a.inv().unwrap(), gr(1));
        assert_eq!(&a + &(-&a), gr(0));
    }

    #[test]
    fn serde_round_trip() {
        let z = p("-7/3+1/9i");
        let s = serde_json::to_string(&z).unwrap();
        assert_eq!(s, "\"-7/3+1/9i\"");
        assert_eq!(serde_json::from_str::<GaussianRational>(&s).unwrap(), z);
        assert_eq!(serde_json::from_str::<GaussianRational>("5").unwrap(), gr(5));
    }
}
