//! Arbitrary-precision rational helpers shared by every certified path.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub type Rat = BigRational;

pub fn int(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

pub fn frac(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// `q^e` as a big integer, `e >= 0`.
pub fn big_pow(q: u32, e: u32) -> BigInt {
    num_traits::pow(BigInt::from(q), e as usize)
}

/// `q^e` for any integer exponent.
pub fn qpow(q: u32, e: i64) -> Rat {
    let p = big_pow(q, e.unsigned_abs() as u32);
    if e >= 0 {
        Rat::from_integer(p)
    } else {
        Rat::new(BigInt::one(), p)
    }
}

/// Decimal literal such as `1.31` as an exact rational `131/100`.
pub fn decimal(text: &str) -> Rat {
    let (whole, fracpart) = match text.split_once('.') {
        Some((w, f)) => (w, f),
        None => (text, ""),
    };
    let digits = format!("{whole}{fracpart}");
    let num: BigInt = digits.parse().expect("decimal literal");
    Rat::new(num, big_pow(10, fracpart.len() as u32))
}

/// Lossless text form: `"num/den"`, or just `"num"` for integers.
pub fn rat_str(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_rat(text: &str) -> Option<Rat> {
    let text = text.trim();
    match text.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rat::new(n, d))
            }
        }
        None => text.parse::<BigInt>().ok().map(Rat::from_integer),
    }
}

/// Nearest `f64`, for display and Monte-Carlo comparisons only.
pub fn to_f64(x: &Rat) -> f64 {
    if let Some(v) = x.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // Very large numerator/denominator: scale both down first.
    let nb = x.numer().bits() as i64;
    let db = x.denom().bits() as i64;
    let shift_n = (nb - 60).max(0);
    let shift_d = (db - 60).max(0);
    let n = (x.numer() >> shift_n as usize).to_f64().unwrap_or(0.0);
    let d = (x.denom() >> shift_d as usize).to_f64().unwrap_or(1.0);
    n / d * 2f64.powi((shift_n - shift_d) as i32)
}

/// Largest `m / 2^bits` not exceeding `x`.
pub fn floor_dyadic(x: &Rat, bits: u32) -> Rat {
    let scale = BigInt::one() << bits as usize;
    let scaled = x.numer() * &scale;
    let fl = scaled.div_floor(x.denom());
    Rat::new(fl, scale)
}

/// Smallest `m / 2^bits` not below `x`.
pub fn ceil_dyadic(x: &Rat, bits: u32) -> Rat {
    -floor_dyadic(&-x, bits)
}

pub fn is_nonneg(x: &Rat) -> bool {
    x.numer().sign() != Sign::Minus
}

pub fn abs(x: &Rat) -> Rat {
    x.abs()
}

/// JSON shape used for pmf entries: exact numerator and denominator as
/// decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatJson {
    pub num: String,
    pub den: String,
}

impl From<&Rat> for RatJson {
    fn from(x: &Rat) -> Self {
        RatJson {
            num: x.numer().to_string(),
            den: x.denom().to_string(),
        }
    }
}

impl RatJson {
    pub fn to_rat(&self) -> Option<Rat> {
        let n: BigInt = self.num.parse().ok()?;
        let d: BigInt = self.den.parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(Rat::new(n, d))
    }
}

/// Serde adapter writing a rational as its `"num/den"` string.
pub mod as_str {
    use super::{parse_rat, rat_str, Rat};
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&rat_str(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let text = String::deserialize(d)?;
        parse_rat(&text).ok_or_else(|| D::Error::custom(format!("bad rational {text:?}")))
    }
}
