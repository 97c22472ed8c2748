use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The prime field F_q underlying all polynomial arithmetic.
///
/// Construction enforces the family constraints: q is an odd prime with
/// 4 < q < 2^16 and q ≡ 1 (mod 4). The congruence makes the quadratic
/// reciprocity sign trivial, which the residue-symbol code relies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldSpec {
    q: u64,
}

/// An element of F_q, stored fully reduced into [0, q).
///
/// Arithmetic goes through [`FieldSpec`] so that the modulus is always
/// explicit; the raw value is available via [`FieldElement::value`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement(u64);

impl FieldElement {
    pub fn value(self) -> u64 {
        self.0
    }
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl FieldSpec {
    pub fn new(q: u64) -> Result<Self> {
        if q <= 4 || q >= (1 << 16) {
            return Err(Error::InvalidField {
                q,
                reason: "q must satisfy 4 < q < 2^16",
            });
        }
        if q % 4 != 1 {
            return Err(Error::InvalidField {
                q,
                reason: "q ≡ 1 (mod 4) is required (it makes the reciprocity sign +1)",
            });
        }
        if !is_prime_u64(q) {
            return Err(Error::InvalidField {
                q,
                reason: "q must be prime",
            });
        }
        Ok(FieldSpec { q })
    }

    #[inline]
    pub fn q(self) -> u64 {
        self.q
    }

    pub fn same_field(self, other: FieldSpec) -> Result<()> {
        if self.q != other.q {
            return Err(Error::FieldMismatch {
                left: self.q,
                right: other.q,
            });
        }
        Ok(())
    }

    /// Embed an arbitrary integer, reducing mod q.
    #[inline]
    pub fn element(self, v: u64) -> FieldElement {
        FieldElement(v % self.q)
    }

    #[inline]
    pub fn zero(self) -> FieldElement {
        FieldElement(0)
    }

    #[inline]
    pub fn one(self) -> FieldElement {
        FieldElement(1)
    }

    #[inline]
    pub fn add(self, a: FieldElement, b: FieldElement) -> FieldElement {
        let s = a.0 + b.0;
        FieldElement(if s >= self.q { s - self.q } else { s })
    }

    #[inline]
    pub fn sub(self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(if a.0 >= b.0 {
            a.0 - b.0
        } else {
            a.0 + self.q - b.0
        })
    }

    #[inline]
    pub fn neg(self, a: FieldElement) -> FieldElement {
        FieldElement(if a.0 == 0 { 0 } else { self.q - a.0 })
    }

    #[inline]
    pub fn mul(self, a: FieldElement, b: FieldElement) -> FieldElement {
        // q < 2^16, so the product fits u64 with room to spare.
        FieldElement(a.0 * b.0 % self.q)
    }

    pub fn pow(self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut base = a.0;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % self.q;
            }
            base = base * base % self.q;
            e >>= 1;
        }
        FieldElement(acc)
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(self, a: FieldElement) -> Option<FieldElement> {
        if a.0 == 0 {
            None
        } else {
            Some(self.pow(a, self.q - 2))
        }
    }

    /// Quadratic character of F_q as {-1, 0, +1}, by the Euler criterion.
    pub fn legendre(self, a: FieldElement) -> i8 {
        if a.0 == 0 {
            return 0;
        }
        let v = self.pow(a, (self.q - 1) / 2).0;
        if v == 1 {
            1
        } else {
            debug_assert_eq!(v, self.q - 1);
            -1
        }
    }
}

/// Table of quadratic-character values for all of F_q, for hot loops.
#[derive(Debug, Clone)]
pub struct LegendreTable {
    vals: Vec<i8>,
}

impl LegendreTable {
    pub fn new(spec: FieldSpec) -> Self {
        let q = spec.q() as usize;
        let mut vals = vec![-1i8; q];
        vals[0] = 0;
        // Mark squares directly instead of q Euler exponentiations.
        for a in 1..q as u64 {
            vals[(a * a % spec.q()) as usize] = 1;
        }
        LegendreTable { vals }
    }

    #[inline]
    pub fn get(&self, a: u64) -> i8 {
        self.vals[a as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_spec_validation() {
        assert!(FieldSpec::new(5).is_ok());
        assert!(FieldSpec::new(13).is_ok());
        assert!(FieldSpec::new(17).is_ok());
        assert!(FieldSpec::new(65521).is_ok());
        // 7 ≡ 3 (mod 4)
        assert!(matches!(
            FieldSpec::new(7),
            Err(Error::InvalidField { q: 7, .. })
        ));
        // 9 ≡ 1 (mod 4) but composite
        assert!(FieldSpec::new(9).is_err());
        assert!(FieldSpec::new(3).is_err());
        assert!(FieldSpec::new(65536).is_err());
        assert!(FieldSpec::new(2).is_err());
    }

    #[test]
    fn element_arithmetic() {
        let f = FieldSpec::new(5).unwrap();
        let a = f.element(3);
        let b = f.element(4);
        assert_eq!(f.add(a, b).value(), 2);
        assert_eq!(f.sub(a, b).value(), 4);
        assert_eq!(f.mul(a, b).value(), 2);
        assert_eq!(f.neg(a).value(), 2);
        assert_eq!(f.pow(a, 0).value(), 1);
        assert_eq!(f.pow(a, 4).value(), 1);
        let inv = f.inv(a).unwrap();
        assert_eq!(f.mul(a, inv).value(), 1);
        assert!(f.inv(f.zero()).is_none());
    }

    #[test]
    fn legendre_matches_table() {
        for q in [5u64, 13, 17, 29] {
            let f = FieldSpec::new(q).unwrap();
            let table = LegendreTable::new(f);
            for a in 0..q {
                assert_eq!(f.legendre(f.element(a)), table.get(a), "q={q} a={a}");
            }
        }
        // 2 is a non-square mod 5: 2^2 = 4 ≡ -1.
        let f5 = FieldSpec::new(5).unwrap();
        assert_eq!(f5.legendre(f5.element(2)), -1);
        assert_eq!(f5.legendre(f5.element(4)), 1);
    }
}
