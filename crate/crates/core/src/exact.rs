//! Exact scalars of the form r + s·√q with rational r, s.
//!
//! √q is irrational for prime q, so the representation is unique and
//! equality/sign tests are exact integer comparisons. Moment sums, main
//! terms, and their deviations all live here; floats are derived for
//! reporting only.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Sign of a + b·√q, exactly.
pub fn quad_sign(a: &BigInt, b: &BigInt, q: u64) -> Ordering {
    let (sa, sb) = (a.sign(), b.sign());
    use num_bigint::Sign::*;
    match (sa, sb) {
        (NoSign, NoSign) => Ordering::Equal,
        (Plus, Plus) | (Plus, NoSign) | (NoSign, Plus) => Ordering::Greater,
        (Minus, Minus) | (Minus, NoSign) | (NoSign, Minus) => Ordering::Less,
        (Plus, Minus) | (Minus, Plus) => {
            // Opposite signs: compare a² with q·b². Equality would force
            // √q rational, impossible for nonzero b.
            let lhs = a * a;
            let rhs = BigInt::from(q) * b * b;
            let cmp = lhs.cmp(&rhs);
            debug_assert_ne!(cmp, Ordering::Equal);
            if sa == Plus {
                cmp
            } else {
                cmp.reverse()
            }
        }
    }
}

/// r + s·√q with exact rational components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadVal {
    pub rat: BigRational,
    pub irr: BigRational,
}

impl QuadVal {
    pub fn zero() -> Self {
        QuadVal {
            rat: BigRational::zero(),
            irr: BigRational::zero(),
        }
    }

    pub fn from_rational(rat: BigRational) -> Self {
        QuadVal {
            rat,
            irr: BigRational::zero(),
        }
    }

    /// (x + y·√q) / scale.
    pub fn from_scaled(x: &BigInt, y: &BigInt, scale: &BigInt) -> Self {
        QuadVal {
            rat: BigRational::new(x.clone(), scale.clone()),
            irr: BigRational::new(y.clone(), scale.clone()),
        }
    }

    pub fn add(&self, other: &QuadVal) -> QuadVal {
        QuadVal {
            rat: &self.rat + &other.rat,
            irr: &self.irr + &other.irr,
        }
    }

    pub fn sub(&self, other: &QuadVal) -> QuadVal {
        QuadVal {
            rat: &self.rat - &other.rat,
            irr: &self.irr - &other.irr,
        }
    }

    /// Product, using √q·√q = q.
    pub fn mul(&self, other: &QuadVal, q: u64) -> QuadVal {
        let q = BigRational::from(BigInt::from(q));
        QuadVal {
            rat: &self.rat * &other.rat + &q * &self.irr * &other.irr,
            irr: &self.rat * &other.irr + &self.irr * &other.rat,
        }
    }

    pub fn scale(&self, c: &BigRational) -> QuadVal {
        QuadVal {
            rat: &self.rat * c,
            irr: &self.irr * c,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.irr.is_zero()
    }

    /// Exact sign.
    pub fn sign(&self, q: u64) -> Ordering {
        // Multiply through by the (positive) denominators.
        let a = self.rat.numer() * self.irr.denom();
        let b = self.irr.numer() * self.rat.denom();
        quad_sign(&a, &b, q)
    }

    pub fn cmp_quad(&self, other: &QuadVal, q: u64) -> Ordering {
        self.sub(other).sign(q)
    }

    pub fn abs(&self, q: u64) -> QuadVal {
        if self.sign(q) == Ordering::Less {
            QuadVal {
                rat: -self.rat.clone(),
                irr: -self.irr.clone(),
            }
        } else {
            self.clone()
        }
    }

    pub fn to_f64(&self, q: u64) -> f64 {
        ratio_to_f64(&self.rat) + ratio_to_f64(&self.irr) * (q as f64).sqrt()
    }
}

pub fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Fall back to a quotient of lossy conversions for extreme sizes.
        let n = r.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = r.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

/// Smallest integer N with N·den ≥ num, for den > 0. This is ⌈num/den⌉
/// computed exactly on quadratic values.
pub fn quad_ratio_ceil(num: &QuadVal, den: &QuadVal, q: u64) -> Result<BigInt> {
    if den.sign(q) != Ordering::Greater {
        return Err(Error::domain("ceiling of a quad ratio needs denominator > 0"));
    }
    let estimate = (num.to_f64(q) / den.to_f64(q)).ceil();
    let mut n = BigInt::from(estimate as i64);
    let passes = |n: &BigInt| {
        den.scale(&BigRational::from(n.clone()))
            .cmp_quad(num, q)
            != Ordering::Less
    };
    // The float estimate is within a couple of units; nudge exactly.
    while !passes(&n) {
        n += 1;
    }
    while passes(&(n.clone() - 1)) {
        n -= 1;
    }
    Ok(n)
}

/// A float rendered with 15 significant digits, the fixed report precision.
pub fn fmt_f64_15(x: f64) -> String {
    format!("{x:.14e}")
}

/// Serialize any value to JSON with every f64 printed at 15 significant
/// digits (diff-stable reports). Exact integers are strings already.
pub fn to_json_15sig<T: Serialize>(value: &T) -> Result<String> {
    struct Sig15;
    impl serde_json::ser::Formatter for Sig15 {
        fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
        where
            W: ?Sized + std::io::Write,
        {
            write!(writer, "{value:.14e}")
        }
    }
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Sig15);
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(out).expect("serde_json emits utf-8"))
}

/// BigInt wrapper that serializes as a decimal string, so downstream JSON
/// consumers never squeeze exact integers through 53-bit floats.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecInt(pub BigInt);

impl From<BigInt> for DecInt {
    fn from(v: BigInt) -> Self {
        DecInt(v)
    }
}

impl Serialize for DecInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for DecInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse::<BigInt>()
            .map(DecInt)
            .map_err(|e| serde::de::Error::custom(format!("bad integer string {s:?}: {e}")))
    }
}

/// BigRational wrapper serialized as "num/den" (always with the slash).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecRatio(pub BigRational);

impl From<BigRational> for DecRatio {
    fn from(v: BigRational) -> Self {
        DecRatio(v)
    }
}

impl Serialize for DecRatio {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{}/{}", self.0.numer(), self.0.denom()))
    }
}

impl<'de> Deserialize<'de> for DecRatio {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        let (n, den) = s
            .split_once('/')
            .ok_or_else(|| serde::de::Error::custom(format!("expected num/den, got {s:?}")))?;
        let n: BigInt = n
            .parse()
            .map_err(|e| serde::de::Error::custom(format!("bad numerator: {e}")))?;
        let den: BigInt = den
            .parse()
            .map_err(|e| serde::de::Error::custom(format!("bad denominator: {e}")))?;
        if den.is_zero() {
            return Err(serde::de::Error::custom("zero denominator"));
        }
        Ok(DecRatio(BigRational::new(n, den)))
    }
}

/// Exact quadratic value as serialized in reports: rat + irr·√q.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadJson {
    pub rat: DecRatio,
    pub irr: DecRatio,
}

impl QuadJson {
    pub fn of(v: &QuadVal) -> Self {
        QuadJson {
            rat: DecRatio(v.rat.clone()),
            irr: DecRatio(v.irr.clone()),
        }
    }

    pub fn value(&self) -> QuadVal {
        QuadVal {
            rat: self.rat.0.clone(),
            irr: self.irr.0.clone(),
        }
    }
}

impl fmt::Display for QuadVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}·√q", self.rat, self.irr)
    }
}
