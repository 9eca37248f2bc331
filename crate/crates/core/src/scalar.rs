//! Exact field elements: rationals, or Gaussian rationals `re + im·i`.
//!
//! Rational mode models the real ground field, Gaussian mode the complex one.
//! Values of different modes never mix; the operator impls panic on a mode
//! mismatch while the `checked_*` family reports it as an error.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Deserializer, MapAccess, Visitor};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::ArithError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FieldMode {
    #[serde(rename = "Q")]
    Rational,
    #[serde(rename = "Q(i)")]
    Gaussian,
}

impl FieldMode {
    pub fn tag(self) -> &'static str {
        match self {
            FieldMode::Rational => "Q",
            FieldMode::Gaussian => "Q(i)",
        }
    }

    pub fn from_tag(s: &str) -> Option<Self> {
        match s {
            "Q" | "R" | "rational" | "real" => Some(FieldMode::Rational),
            "Q(i)" | "C" | "gaussian" | "complex" => Some(FieldMode::Gaussian),
            _ => None,
        }
    }
}

impl fmt::Display for FieldMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Arithmetic operation selector for [`Scalar::apply`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scalar {
    mode: FieldMode,
    re: BigRational,
    im: BigRational,
}

impl Hash for Scalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.mode.hash(state);
        self.re.numer().hash(state);
        self.re.denom().hash(state);
        self.im.numer().hash(state);
        self.im.denom().hash(state);
    }
}

impl Scalar {
    pub fn zero(mode: FieldMode) -> Self {
        Scalar { mode, re: BigRational::zero(), im: BigRational::zero() }
    }

    pub fn one(mode: FieldMode) -> Self {
        Scalar { mode, re: BigRational::one(), im: BigRational::zero() }
    }

    pub fn from_int(mode: FieldMode, v: i64) -> Self {
        Scalar { mode, re: BigRational::from_integer(BigInt::from(v)), im: BigRational::zero() }
    }

    pub fn from_ratio(mode: FieldMode, num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Scalar {
            mode,
            re: BigRational::new(BigInt::from(num), BigInt::from(den)),
            im: BigRational::zero(),
        }
    }

    pub fn from_rational(mode: FieldMode, re: BigRational) -> Self {
        Scalar { mode, re, im: BigRational::zero() }
    }

    pub fn gaussian(re: BigRational, im: BigRational) -> Self {
        Scalar { mode: FieldMode::Gaussian, re, im }
    }

    /// The imaginary unit; only exists in Gaussian mode.
    pub fn i() -> Self {
        Scalar { mode: FieldMode::Gaussian, re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn mode(&self) -> FieldMode {
        self.mode
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    /// Same value, tagged with another field mode. Fails when a nonzero
    /// imaginary part would be dropped.
    pub fn with_mode(&self, mode: FieldMode) -> Result<Self, ArithError> {
        if mode == FieldMode::Rational && !self.im.is_zero() {
            return Err(ArithError::FieldModeMismatch);
        }
        Ok(Scalar { mode, re: self.re.clone(), im: self.im.clone() })
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.im.is_zero() && self.re.is_integer()
    }

    /// The rational value, when the imaginary part vanishes.
    pub fn as_rational(&self) -> Option<&BigRational> {
        self.im.is_zero().then_some(&self.re)
    }

    pub fn apply(&self, op: ArithOp, other: &Scalar) -> Result<Scalar, ArithError> {
        match op {
            ArithOp::Add => self.checked_add(other),
            ArithOp::Sub => self.checked_sub(other),
            ArithOp::Mul => self.checked_mul(other),
            ArithOp::Div => self.checked_div(other),
        }
    }

    fn same_mode(&self, other: &Scalar) -> Result<(), ArithError> {
        if self.mode == other.mode {
            Ok(())
        } else {
            Err(ArithError::FieldModeMismatch)
        }
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar, ArithError> {
        self.same_mode(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn checked_sub(&self, other: &Scalar) -> Result<Scalar, ArithError> {
        self.same_mode(other)?;
        Ok(self.sub_unchecked(other))
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar, ArithError> {
        self.same_mode(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar, ArithError> {
        self.same_mode(other)?;
        let inv = other.inv()?;
        Ok(self.mul_unchecked(&inv))
    }

    pub fn inv(&self) -> Result<Scalar, ArithError> {
        if self.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        if self.im.is_zero() {
            return Ok(Scalar { mode: self.mode, re: self.re.recip(), im: BigRational::zero() });
        }
        let norm = &self.re * &self.re + &self.im * &self.im;
        Ok(Scalar { mode: self.mode, re: &self.re / &norm, im: -(&self.im / &norm) })
    }

    /// Complex conjugate (identity in rational mode).
    pub fn conj(&self) -> Scalar {
        Scalar { mode: self.mode, re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = Scalar::one(self.mode);
        for _ in 0..e {
            acc = acc.mul_unchecked(self);
        }
        acc
    }

    /// Sign of the value in rational mode (`None` for non-real values).
    pub fn signum(&self) -> Option<i32> {
        if !self.im.is_zero() {
            return None;
        }
        Some(if self.re.is_zero() {
            0
        } else if self.re.is_positive() {
            1
        } else {
            -1
        })
    }

    fn add_unchecked(&self, o: &Scalar) -> Scalar {
        if self.im.is_zero() && o.im.is_zero() {
            return Scalar { mode: self.mode, re: &self.re + &o.re, im: BigRational::zero() };
        }
        Scalar { mode: self.mode, re: &self.re + &o.re, im: &self.im + &o.im }
    }

    fn sub_unchecked(&self, o: &Scalar) -> Scalar {
        if self.im.is_zero() && o.im.is_zero() {
            return Scalar { mode: self.mode, re: &self.re - &o.re, im: BigRational::zero() };
        }
        Scalar { mode: self.mode, re: &self.re - &o.re, im: &self.im - &o.im }
    }

    fn mul_unchecked(&self, o: &Scalar) -> Scalar {
        if self.im.is_zero() && o.im.is_zero() {
            return Scalar { mode: self.mode, re: &self.re * &o.re, im: BigRational::zero() };
        }
        Scalar {
            mode: self.mode,
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    /// Parses `"p/q"`, `"p"`, and in Gaussian mode also `"a+bi"`-style input.
    pub fn parse(mode: FieldMode, s: &str) -> Result<Scalar, ArithError> {
        let s = s.trim();
        if mode == FieldMode::Gaussian {
            if let Some(v) = parse_gaussian_text(s) {
                return Ok(v);
            }
        }
        let re = parse_rational(s).ok_or_else(|| ArithError::Parse(s.to_string()))?;
        Ok(Scalar { mode, re, im: BigRational::zero() })
    }
}

pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).ok()?;
            let d = BigInt::from_str(d.trim()).ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => Some(BigRational::from_integer(BigInt::from_str(s).ok()?)),
    }
}

pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn parse_gaussian_text(s: &str) -> Option<Scalar> {
    let body = s.strip_suffix('i')?;
    // split at the last sign that is not the leading one
    let split = body
        .char_indices()
        .skip(1)
        .filter(|&(_, c)| c == '+' || c == '-')
        .map(|(k, _)| k)
        .last();
    let (re_txt, im_txt) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im_txt = match im_txt.trim_start_matches('+') {
        "" => "1",
        "-" => "-1",
        t => t,
    };
    let re = parse_rational(re_txt)?;
    let im = parse_rational(im_txt)?;
    Some(Scalar::gaussian(re, im))
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return f.write_str(&format_rational(&self.re));
        }
        if self.re.is_zero() {
            return write!(f, "{}i", format_rational(&self.im));
        }
        let sign = if self.im.is_negative() { "-" } else { "+" };
        write!(f, "{}{}{}i", format_rational(&self.re), sign, format_rational(&self.im.abs()))
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $inner:ident) => {
        impl<'a> $trait<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                assert_eq!(self.mode, rhs.mode, "field mode mismatch");
                self.$inner(rhs)
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_unchecked);
forward_binop!(Sub, sub, sub_unchecked);
forward_binop!(Mul, mul, mul_unchecked);

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &'a Scalar) -> Scalar {
        self.checked_div(rhs).expect("scalar division")
    }
}

impl Div<Scalar> for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        (&self).div(&rhs)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { mode: self.mode, re: -self.re.clone(), im: -self.im.clone() }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { mode: self.mode, re: -self.re, im: -self.im }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self.mode {
            FieldMode::Rational => serializer.serialize_str(&format_rational(&self.re)),
            FieldMode::Gaussian => {
                let mut map = serializer.serialize_map(Some(2))?;
                map.serialize_entry("re", &format_rational(&self.re))?;
                map.serialize_entry("im", &format_rational(&self.im))?;
                map.end()
            }
        }
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct ScalarVisitor;

        impl<'de> Visitor<'de> for ScalarVisitor {
            type Value = Scalar;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational string \"p/q\" or {\"re\":…,\"im\":…}")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Scalar, E> {
                let re = parse_rational(v).ok_or_else(|| E::custom(format!("bad rational {v:?}")))?;
                Ok(Scalar::from_rational(FieldMode::Rational, re))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Scalar, E> {
                Ok(Scalar::from_int(FieldMode::Rational, v))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Scalar, E> {
                Ok(Scalar::from_rational(FieldMode::Rational, BigRational::from_integer(BigInt::from(v))))
            }

            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Scalar, A::Error> {
                let mut re = None;
                let mut im = None;
                while let Some(key) = map.next_key::<String>()? {
                    let text: String = map.next_value()?;
                    let val = parse_rational(&text)
                        .ok_or_else(|| de::Error::custom(format!("bad rational {text:?}")))?;
                    match key.as_str() {
                        "re" => re = Some(val),
                        "im" => im = Some(val),
                        other => return Err(de::Error::unknown_field(other, &["re", "im"])),
                    }
                }
                Ok(Scalar::gaussian(re.unwrap_or_else(BigRational::zero), im.unwrap_or_else(BigRational::zero)))
            }
        }

        deserializer.deserialize_any(ScalarVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use FieldMode::*;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::from_ratio(Rational, n, d)
    }

    #[test]
    fn rational_addition() {
        assert_eq!(q(1, 2).apply(ArithOp::Add, &q(1, 3)).unwrap(), q(5, 6));
    }

    #[test]
    fn i_squared_is_minus_one() {
        let i = Scalar::i();
        assert_eq!(&i * &i, Scalar::from_int(Gaussian, -1));
    }

    #[test]
    fn division_by_zero() {
        assert_eq!(q(3, 4).apply(ArithOp::Div, &Scalar::zero(Rational)), Err(ArithError::DivisionByZero));
    }

    #[test]
    fn mixed_modes_rejected() {
        let a = q(1, 2);
        let b = Scalar::one(Gaussian);
        assert_eq!(a.checked_add(&b), Err(ArithError::FieldModeMismatch));
        assert_eq!(a.checked_div(&b), Err(ArithError::FieldModeMismatch));
    }

    #[test]
    fn canonical_form() {
        let v = q(6, -4);
        assert_eq!(v.re().numer(), &BigInt::from(-3));
        assert_eq!(v.re().denom(), &BigInt::from(2));
        assert_eq!(v.to_string(), "-3/2");
    }

    #[test]
    fn gaussian_inverse() {
        let z = Scalar::gaussian(BigRational::from_integer(1.into()), BigRational::from_integer(2.into()));
        assert!((&z * &z.inv().unwrap()).is_one());
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(Scalar::parse(Rational, "-7/21").unwrap(), q(-1, 3));
        let z = Scalar::parse(Gaussian, "1/2-3i").unwrap();
        assert_eq!(z.to_string(), "1/2-3i");
        assert_eq!(Scalar::parse(Gaussian, "i").unwrap(), Scalar::i());
        assert_eq!(Scalar::parse(Gaussian, "-i").unwrap(), -Scalar::i());
        assert_eq!(Scalar::parse(Gaussian, "5").unwrap(), Scalar::from_int(Gaussian, 5));
        assert!(Scalar::parse(Rational, "1/0").is_err());
    }

    #[test]
    fn serde_forms() {
        let r = q(2, 3);
        assert_eq!(serde_json::to_string(&r).unwrap(), "\"2/3\"");
        let z = Scalar::gaussian(BigRational::new(1.into(), 2.into()), BigRational::from_integer((-1).into()));
        let text = serde_json::to_string(&z).unwrap();
        assert_eq!(text, r#"{"re":"1/2","im":"-1"}"#);
        let back: Scalar = serde_json::from_str(&text).unwrap();
        assert_eq!(back, z);
    }
}
