use std::fmt;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::ffpoly::field::{FieldElement, FieldSpec};

/// Low-level coefficient-slice routines shared by the public API and the
/// enumeration hot loops. Coefficient vectors are low-to-high with no
/// trailing zeros; the empty vector is the zero polynomial.
pub(crate) mod raw {
    #[inline]
    pub fn trim(v: &mut Vec<u64>) {
        while v.last() == Some(&0) {
            v.pop();
        }
    }

    #[inline]
    pub fn degree(v: &[u64]) -> Option<usize> {
        if v.is_empty() {
            None
        } else {
            Some(v.len() - 1)
        }
    }

    /// Schoolbook product. Accumulates lazily in u64: degrees stay tiny
    /// (≤ ~40 terms) and q < 2^16, so sums stay far below 2^64.
    pub fn mul(a: &[u64], b: &[u64], q: u64, out: &mut Vec<u64>) {
        out.clear();
        if a.is_empty() || b.is_empty() {
            return;
        }
        out.resize(a.len() + b.len() - 1, 0);
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                out[i + j] += ai * bj;
            }
        }
        for c in out.iter_mut() {
            *c %= q;
        }
        trim(out);
    }

    /// In-place remainder modulo a monic divisor (top coefficient 1).
    pub fn rem_monic(a: &mut Vec<u64>, m: &[u64], q: u64) {
        debug_assert_eq!(m.last(), Some(&1));
        let dm = m.len() - 1;
        while a.len() > dm {
            let c = *a.last().unwrap();
            let top = a.len() - 1;
            if c != 0 {
                let base = top - dm;
                for (j, &mj) in m[..dm].iter().enumerate() {
                    let t = a[base + j] + (q - c * mj % q);
                    a[base + j] = t % q;
                }
            }
            a.pop();
        }
        trim(a);
    }

    /// General division with remainder; the divisor may be non-monic.
    pub fn divrem(a: &[u64], d: &[u64], q: u64, inv_lead: u64) -> (Vec<u64>, Vec<u64>) {
        debug_assert!(!d.is_empty());
        let dd = d.len() - 1;
        if a.len() <= dd {
            return (Vec::new(), a.to_vec());
        }
        let mut rem = a.to_vec();
        let mut quot = vec![0u64; a.len() - dd];
        while rem.len() > dd {
            let c = *rem.last().unwrap() * inv_lead % q;
            let top = rem.len() - 1;
            quot[top - dd] = c;
            if c != 0 {
                let base = top - dd;
                for (j, &dj) in d[..dd].iter().enumerate() {
                    let t = rem[base + j] + (q - c * dj % q);
                    rem[base + j] = t % q;
                }
            }
            rem.pop();
        }
        trim(&mut rem);
        trim(&mut quot);
        (quot, rem)
    }

    /// Remainder only, divisor may be non-monic.
    pub fn rem_general(a: &mut Vec<u64>, d: &[u64], q: u64, inv_lead: u64) {
        let dd = d.len() - 1;
        while a.len() > dd {
            let c = *a.last().unwrap() * inv_lead % q;
            let top = a.len() - 1;
            if c != 0 {
                let base = top - dd;
                for (j, &dj) in d[..dd].iter().enumerate() {
                    let t = a[base + j] + (q - c * dj % q);
                    a[base + j] = t % q;
                }
            }
            a.pop();
        }
        trim(a);
    }

    pub fn eval(a: &[u64], x: u64, q: u64) -> u64 {
        let mut acc = 0u64;
        for &c in a.iter().rev() {
            acc = (acc * x + c) % q;
        }
        acc
    }

    /// Scale to a monic polynomial, returning the original leading coefficient.
    pub fn make_monic(a: &mut [u64], q: u64, inv_lead: u64) -> u64 {
        let lead = *a.last().expect("nonzero polynomial");
        if lead != 1 {
            for c in a.iter_mut() {
                *c = *c * inv_lead % q;
            }
        }
        lead
    }
}

fn pow_u64(mut base: u64, mut e: u64, q: u64) -> u64 {
    let mut acc = 1u64;
    base %= q;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % q;
        }
        base = base * base % q;
        e >>= 1;
    }
    acc
}

/// A polynomial over F_q[T], dense low-to-high coefficients.
///
/// Invariant: the coefficient vector carries no trailing zeros, so the zero
/// polynomial is the empty vector and `degree` is `None` exactly for zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    spec: FieldSpec,
    coeffs: Vec<u64>,
}

impl Poly {
    pub fn zero(spec: FieldSpec) -> Self {
        Poly {
            spec,
            coeffs: Vec::new(),
        }
    }

    pub fn constant(spec: FieldSpec, c: u64) -> Self {
        Self::from_coeffs(spec, vec![c])
    }

    /// Build from arbitrary integer coefficients, reducing mod q and trimming.
    pub fn from_coeffs(spec: FieldSpec, mut coeffs: Vec<u64>) -> Self {
        for c in coeffs.iter_mut() {
            *c %= spec.q();
        }
        raw::trim(&mut coeffs);
        Poly { spec, coeffs }
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        raw::degree(&self.coeffs)
    }

    pub fn leading(&self) -> Option<FieldElement> {
        self.coeffs.last().map(|&c| self.spec.element(c))
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.spec.element(self.coeffs.get(i).copied().unwrap_or(0))
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub(crate) fn from_raw(spec: FieldSpec, coeffs: Vec<u64>) -> Self {
        debug_assert!(coeffs.last() != Some(&0));
        debug_assert!(coeffs.iter().all(|&c| c < spec.q()));
        Poly { spec, coeffs }
    }

    pub fn add(&self, other: &Poly) -> Result<Poly> {
        self.spec.same_field(other.spec)?;
        let q = self.spec.q();
        let (long, short) = if self.coeffs.len() >= other.coeffs.len() {
            (&self.coeffs, &other.coeffs)
        } else {
            (&other.coeffs, &self.coeffs)
        };
        let mut out = long.clone();
        for (i, &c) in short.iter().enumerate() {
            out[i] = (out[i] + c) % q;
        }
        raw::trim(&mut out);
        Ok(Poly::from_raw(self.spec, out))
    }

    pub fn sub(&self, other: &Poly) -> Result<Poly> {
        self.spec.same_field(other.spec)?;
        let q = self.spec.q();
        let mut out = self.coeffs.clone();
        if out.len() < other.coeffs.len() {
            out.resize(other.coeffs.len(), 0);
        }
        for (i, &c) in other.coeffs.iter().enumerate() {
            out[i] = (out[i] + q - c) % q;
        }
        raw::trim(&mut out);
        Ok(Poly::from_raw(self.spec, out))
    }

    pub fn mul(&self, other: &Poly) -> Result<Poly> {
        self.spec.same_field(other.spec)?;
        let mut out = Vec::new();
        raw::mul(&self.coeffs, &other.coeffs, self.spec.q(), &mut out);
        Ok(Poly::from_raw(self.spec, out))
    }

    pub fn mul_scalar(&self, c: FieldElement) -> Poly {
        let q = self.spec.q();
        let mut out: Vec<u64> = self.coeffs.iter().map(|&a| a * c.value() % q).collect();
        raw::trim(&mut out);
        Poly::from_raw(self.spec, out)
    }

    /// Quotient and remainder with deg(rem) < deg(divisor).
    pub fn divrem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        self.spec.same_field(divisor.spec)?;
        if divisor.is_zero() {
            return Err(Error::domain("division by the zero polynomial"));
        }
        let q = self.spec.q();
        let lead = *divisor.coeffs.last().unwrap();
        let inv_lead = pow_u64(lead, q - 2, q);
        let (quot, rem) = raw::divrem(&self.coeffs, &divisor.coeffs, q, inv_lead);
        Ok((
            Poly::from_raw(self.spec, quot),
            Poly::from_raw(self.spec, rem),
        ))
    }

    pub fn rem(&self, divisor: &Poly) -> Result<Poly> {
        Ok(self.divrem(divisor)?.1)
    }

    /// Monic gcd; gcd(0, 0) = 0 by convention.
    pub fn gcd_monic(&self, other: &Poly) -> Result<Poly> {
        self.spec.same_field(other.spec)?;
        let q = self.spec.q();
        let mut a = self.coeffs.clone();
        let mut b = other.coeffs.clone();
        while !b.is_empty() {
            let lead = *b.last().unwrap();
            let inv_lead = pow_u64(lead, q - 2, q);
            raw::rem_general(&mut a, &b, q, inv_lead);
            std::mem::swap(&mut a, &mut b);
        }
        if !a.is_empty() {
            let lead = *a.last().unwrap();
            let inv_lead = pow_u64(lead, q - 2, q);
            raw::make_monic(&mut a, q, inv_lead);
        }
        Ok(Poly::from_raw(self.spec, a))
    }

    pub fn eval(&self, x: FieldElement) -> FieldElement {
        self.spec
            .element(raw::eval(&self.coeffs, x.value(), self.spec.q()))
    }

    /// (self · other) mod m.
    pub fn mul_mod(&self, other: &Poly, m: &MonicPoly) -> Result<Poly> {
        self.spec.same_field(other.spec)?;
        self.spec.same_field(m.spec())?;
        let q = self.spec.q();
        let mut out = Vec::new();
        raw::mul(&self.coeffs, &other.coeffs, q, &mut out);
        raw::rem_monic(&mut out, m.coeffs(), q);
        Ok(Poly::from_raw(self.spec, out))
    }

    /// self^e mod m by binary exponentiation; e = 0 gives 1.
    ///
    /// The exponent is an arbitrary-precision integer: Euler-criterion
    /// exponents like (q^n - 1)/2 overflow u64 well inside the supported
    /// parameter range.
    pub fn pow_mod(&self, e: &BigUint, m: &MonicPoly) -> Result<Poly> {
        self.spec.same_field(m.spec())?;
        let q = self.spec.q();
        if m.degree() == 0 {
            return Ok(Poly::zero(self.spec));
        }
        let mut base = self.coeffs.clone();
        raw::rem_monic(&mut base, m.coeffs(), q);
        let mut acc = vec![1u64];
        let bits = e.bits();
        let mut scratch = Vec::new();
        for i in (0..bits).rev() {
            raw::mul(&acc, &acc, q, &mut scratch);
            raw::rem_monic(&mut scratch, m.coeffs(), q);
            std::mem::swap(&mut acc, &mut scratch);
            if e.bit(i) {
                raw::mul(&acc, &base, q, &mut scratch);
                raw::rem_monic(&mut scratch, m.coeffs(), q);
                std::mem::swap(&mut acc, &mut scratch);
            }
        }
        Ok(Poly::from_raw(self.spec, acc))
    }

    /// Split into leading coefficient and monic part; `None` for zero.
    pub fn to_monic(&self) -> Option<(FieldElement, MonicPoly)> {
        let lead = self.leading()?;
        if lead.value() == 1 {
            return Some((lead, MonicPoly(self.clone())));
        }
        let inv = self.spec.inv(lead).unwrap();
        Some((lead, MonicPoly(self.mul_scalar(inv))))
    }

    /// Parse the textual encoding: comma-separated coefficients, low-to-high,
    /// e.g. "1,0,2,1" = 1 + 2T² + T³. Coefficients must already lie in [0, q).
    pub fn parse(spec: FieldSpec, s: &str) -> Result<Poly> {
        let mut coeffs = Vec::new();
        for (i, part) in s.split(',').enumerate() {
            let part = part.trim();
            let c: u64 = part.parse().map_err(|_| {
                Error::Parse(format!("coefficient #{i} {part:?} is not a nonnegative integer"))
            })?;
            if c >= spec.q() {
                return Err(Error::Parse(format!(
                    "coefficient #{i} = {c} is out of range for q = {}",
                    spec.q()
                )));
            }
            coeffs.push(c);
        }
        raw::trim(&mut coeffs);
        Ok(Poly::from_raw(spec, coeffs))
    }
}

impl fmt::Display for Poly {
    /// The comma encoding, inverse of [`Poly::parse`]. Zero prints as "0".
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for c in &self.coeffs {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
            first = false;
        }
        Ok(())
    }
}

/// A monic polynomial: nonzero with leading coefficient 1.
///
/// Moduli, enumerated polynomials, and prime polynomials are all monic; the
/// newtype keeps that invariant at API boundaries. Derefs to [`Poly`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonicPoly(Poly);

impl MonicPoly {
    pub fn new(p: Poly) -> Result<Self> {
        match p.leading() {
            Some(l) if l.value() == 1 => Ok(MonicPoly(p)),
            Some(_) => Err(Error::domain("polynomial is not monic")),
            None => Err(Error::domain("the zero polynomial is not monic")),
        }
    }

    pub fn from_coeffs(spec: FieldSpec, coeffs: Vec<u64>) -> Result<Self> {
        Self::new(Poly::from_coeffs(spec, coeffs))
    }

    pub fn parse(spec: FieldSpec, s: &str) -> Result<Self> {
        Self::new(Poly::parse(spec, s)?)
    }

    pub fn one(spec: FieldSpec) -> Self {
        MonicPoly(Poly::from_raw(spec, vec![1]))
    }

    /// The polynomial T.
    pub fn x(spec: FieldSpec) -> Self {
        MonicPoly(Poly::from_raw(spec, vec![0, 1]))
    }

    /// T + a.
    pub fn x_plus(spec: FieldSpec, a: u64) -> Self {
        let a = a % spec.q();
        if a == 0 {
            Self::x(spec)
        } else {
            MonicPoly(Poly::from_raw(spec, vec![a, 1]))
        }
    }

    pub(crate) fn from_raw(spec: FieldSpec, coeffs: Vec<u64>) -> Self {
        debug_assert_eq!(coeffs.last(), Some(&1));
        MonicPoly(Poly::from_raw(spec, coeffs))
    }

    pub fn as_poly(&self) -> &Poly {
        &self.0
    }

    pub fn into_poly(self) -> Poly {
        self.0
    }

    /// Degree as usize (monic polynomials are nonzero).
    pub fn degree(&self) -> usize {
        self.0.degree().unwrap()
    }

    pub fn mul_monic(&self, other: &MonicPoly) -> Result<MonicPoly> {
        Ok(MonicPoly(self.0.mul(&other.0)?))
    }

    /// q^deg, the norm, as u128. Errors if it overflows.
    pub fn norm(&self) -> Result<u128> {
        let q = self.spec().q() as u128;
        let mut n = 1u128;
        for _ in 0..self.degree() {
            n = n
                .checked_mul(q)
                .ok_or_else(|| Error::domain("norm overflows u128"))?;
        }
        Ok(n)
    }
}

impl std::ops::Deref for MonicPoly {
    type Target = Poly;

    fn deref(&self) -> &Poly {
        &self.0
    }
}

impl fmt::Display for MonicPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;
    use num_traits::{One, Zero};
    use proptest::prelude::*;

    fn f5() -> FieldSpec {
        FieldSpec::new(5).unwrap()
    }

    #[test]
    fn mulmod_identity_and_reduction() {
        let spec = f5();
        let m = MonicPoly::from_coeffs(spec, vec![1, 0, 1]).unwrap(); // T² + 1
        let one = Poly::constant(spec, 1);
        let b = Poly::from_coeffs(spec, vec![3, 2]);
        assert_eq!(one.mul_mod(&b, &m).unwrap(), b);
        // T·T mod (T²+1) = -1 = 4 over F_5.
        let t = Poly::from_coeffs(spec, vec![0, 1]);
        assert_eq!(t.mul_mod(&t, &m).unwrap(), Poly::constant(spec, 4));
    }

    #[test]
    fn mulmod_rejects_field_mismatch() {
        let spec5 = f5();
        let spec13 = FieldSpec::new(13).unwrap();
        let m = MonicPoly::from_coeffs(spec5, vec![1, 0, 1]).unwrap();
        let a = Poly::constant(spec5, 2);
        let b = Poly::constant(spec13, 2);
        assert!(matches!(
            a.mul_mod(&b, &m),
            Err(Error::FieldMismatch { .. })
        ));
    }

    #[test]
    fn powmod_small_cases() {
        let spec = f5();
        let m = MonicPoly::from_coeffs(spec, vec![2, 1, 1]).unwrap();
        let a = Poly::from_coeffs(spec, vec![1, 3]);
        // a^1 = a
        assert_eq!(a.pow_mod(&BigUint::one(), &m).unwrap(), a);
        // a^0 = 1
        assert_eq!(
            a.pow_mod(&BigUint::zero(), &m).unwrap(),
            Poly::constant(spec, 1)
        );
        // 2^2 mod T = 4
        let t = MonicPoly::x(spec);
        let two = Poly::constant(spec, 2);
        assert_eq!(
            two.pow_mod(&BigUint::from(2u32), &t).unwrap(),
            Poly::constant(spec, 4)
        );
    }

    #[test]
    fn powmod_full_field_power_fixes_base() {
        // a^(q^deg m) ≡ a mod m for irreducible m: checked against plain
        // repeated multiplication, q = 5, deg m ≤ 3.
        let spec = f5();
        // T² + 2 and T³ + T + 1 are irreducible over F_5 (no roots; degree ≤ 3).
        for coeffs in [vec![2, 0, 1], vec![1, 1, 0, 1]] {
            let m = MonicPoly::from_coeffs(spec, coeffs).unwrap();
            for root in 0..5u64 {
                assert_ne!(m.eval(spec.element(root)).value(), 0);
            }
            let e = 5u64.pow(m.degree() as u32);
            for start in [vec![2u64, 1], vec![4, 0, 3], vec![1, 1]] {
                let a = Poly::from_coeffs(spec, start);
                let a = a.rem(m.as_poly()).unwrap();
                let fast = a.pow_mod(&BigUint::from(e), &m).unwrap();
                let mut slow = Poly::constant(spec, 1);
                for _ in 0..e {
                    slow = slow.mul_mod(&a, &m).unwrap();
                }
                assert_eq!(fast, slow);
                assert_eq!(fast, a, "Frobenius power must fix residues");
            }
        }
    }

    #[test]
    fn parse_and_display_round_trip() {
        let spec = f5();
        let p = Poly::parse(spec, "1,0,2,1").unwrap();
        assert_eq!(p.degree(), Some(3));
        assert_eq!(p.to_string(), "1,0,2,1");
        assert!(Poly::parse(spec, "1,7").is_err());
        assert!(Poly::parse(spec, "1,x").is_err());
        assert!(MonicPoly::parse(spec, "1,2").is_err()); // leading 2
        assert!(MonicPoly::parse(spec, "0").is_err());
        assert_eq!(Poly::zero(spec).to_string(), "0");
    }

    fn arb_poly(max_deg: usize) -> impl Strategy<Value = Poly> {
        prop::collection::vec(0u64..5, 0..=max_deg + 1)
            .prop_map(|cs| Poly::from_coeffs(FieldSpec::new(5).unwrap(), cs))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn mul_commutes(a in arb_poly(6), b in arb_poly(6)) {
            prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        }

        #[test]
        fn mulmod_commutes(a in arb_poly(4), b in arb_poly(4)) {
            let spec = FieldSpec::new(5).unwrap();
            let m = MonicPoly::from_coeffs(spec, vec![2, 0, 1, 1, 0, 1]).unwrap();
            let ar = a.rem(m.as_poly()).unwrap();
            let br = b.rem(m.as_poly()).unwrap();
            prop_assert_eq!(ar.mul_mod(&br, &m).unwrap(), br.mul_mod(&ar, &m).unwrap());
        }

        #[test]
        fn divrem_reconstructs(a in arb_poly(8), b in arb_poly(5)) {
            prop_assume!(!b.is_zero());
            let (quot, rem) = a.divrem(&b).unwrap();
            let back = quot.mul(&b).unwrap().add(&rem).unwrap();
            prop_assert_eq!(back, a);
            if let Some(dr) = rem.degree() {
                prop_assert!(dr < b.degree().unwrap());
            }
        }

        #[test]
        fn gcd_divides_both_and_is_monic(a in arb_poly(7), b in arb_poly(7)) {
            let g = a.gcd_monic(&b).unwrap();
            if g.is_zero() {
                prop_assert!(a.is_zero() && b.is_zero());
            } else {
                prop_assert_eq!(g.leading().unwrap().value(), 1);
                prop_assert!(a.rem(&g).unwrap().is_zero());
                prop_assert!(b.rem(&g).unwrap().is_zero());
            }
        }
    }
}
