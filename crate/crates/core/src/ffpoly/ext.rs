use num_bigint::BigUint;
use num_traits::One;

use crate::arith::{is_irreducible, Symbol};
use crate::error::{Error, Result};
use crate::ffpoly::field::FieldSpec;
use crate::ffpoly::poly::{MonicPoly, Poly};

/// The extension field F_{q^n} = F_q[T]/(modulus), with the modulus fixed to
/// the lexicographically first monic irreducible of degree n so element
/// representations are reproducible bit-for-bit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtField {
    base: FieldSpec,
    n: usize,
    modulus: MonicPoly,
}

/// An element of an [`ExtField`]: the residue polynomial of degree < n.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExtElem(Poly);

impl ExtElem {
    pub fn as_poly(&self) -> &Poly {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl ExtField {
    /// F_{q^n} with the deterministic modulus choice.
    pub fn new(base: FieldSpec, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("extension degree must be ≥ 1"));
        }
        let modulus = crate::arith::first_irreducible(base, n)?;
        Ok(ExtField { base, n, modulus })
    }

    /// F_q[T]/(modulus) for a caller-supplied irreducible modulus.
    pub fn with_modulus(modulus: MonicPoly) -> Result<Self> {
        let n = modulus.degree();
        if n == 0 || !is_irreducible(&modulus)? {
            return Err(Error::domain("extension modulus must be irreducible"));
        }
        Ok(ExtField {
            base: modulus.spec(),
            n,
            modulus,
        })
    }

    pub fn base(&self) -> FieldSpec {
        self.base
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> &MonicPoly {
        &self.modulus
    }

    /// q^n, the field order.
    pub fn order(&self) -> BigUint {
        BigUint::from(self.base.q()).pow(self.n as u32)
    }

    pub fn zero(&self) -> ExtElem {
        ExtElem(Poly::zero(self.base))
    }

    pub fn one(&self) -> ExtElem {
        ExtElem(Poly::constant(self.base, 1))
    }

    pub fn from_base(&self, c: u64) -> ExtElem {
        ExtElem(Poly::constant(self.base, c))
    }

    /// Reduce an arbitrary polynomial into the field.
    pub fn from_poly(&self, p: &Poly) -> Result<ExtElem> {
        self.base.same_field(p.spec())?;
        Ok(ExtElem(p.rem(self.modulus.as_poly())?))
    }

    pub fn add(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        ExtElem(a.0.add(&b.0).expect("same field"))
    }

    pub fn mul(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        ExtElem(a.0.mul_mod(&b.0, &self.modulus).expect("same field"))
    }

    pub fn pow(&self, a: &ExtElem, e: &BigUint) -> ExtElem {
        ExtElem(a.0.pow_mod(e, &self.modulus).expect("same field"))
    }

    /// All q^n elements: residues of degree < n, coefficient 0 varying
    /// fastest (same convention as monic enumeration).
    pub fn elements(&self) -> impl Iterator<Item = ExtElem> + '_ {
        let q = self.base.q() as u128;
        let total = self.order();
        let mut counter = vec![0u64; self.n];
        let mut remaining: u128 = {
            // Element enumeration is only used where q^n is iterable anyway.
            let mut t = 1u128;
            for _ in 0..self.n {
                t = t.saturating_mul(q);
            }
            debug_assert_eq!(BigUint::from(t), total);
            t
        };
        std::iter::from_fn(move || {
            if remaining == 0 {
                return None;
            }
            remaining -= 1;
            let elem = ExtElem(Poly::from_coeffs(self.base, counter.clone()));
            for c in counter.iter_mut() {
                *c += 1;
                if (*c as u128) < q {
                    break;
                }
                *c = 0;
            }
            Some(elem)
        })
    }

    /// Evaluate a base-field polynomial at an extension element (Horner).
    pub fn eval_base_poly(&self, p: &Poly, t: &ExtElem) -> Result<ExtElem> {
        self.base.same_field(p.spec())?;
        let mut acc = self.zero();
        for &c in p.coeffs().iter().rev() {
            acc = self.mul(&acc, t);
            acc = self.add(&acc, &self.from_base(c));
        }
        Ok(acc)
    }

    /// Quadratic character of F_{q^n} by the Euler criterion
    /// c^((q^n - 1)/2): 0 for zero, +1 for nonzero squares, -1 otherwise.
    pub fn quadratic_character(&self, c: &ExtElem) -> Symbol {
        if c.is_zero() {
            return Symbol::Zero;
        }
        let e = (self.order() - BigUint::one()) / BigUint::from(2u32);
        let v = self.pow(c, &e);
        let q = self.base.q();
        match v.0.degree() {
            Some(0) if v.0.coeff(0).value() == 1 => Symbol::PlusOne,
            Some(0) if v.0.coeff(0).value() == q - 1 => Symbol::MinusOne,
            _ => unreachable!("Euler criterion must land in ±1 for nonzero input"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f5() -> FieldSpec {
        FieldSpec::new(5).unwrap()
    }

    #[test]
    fn construction_and_order() {
        let k = ExtField::new(f5(), 2).unwrap();
        assert_eq!(k.degree(), 2);
        assert_eq!(k.order(), BigUint::from(25u32));
        // Deterministic modulus: T² + 2.
        assert_eq!(
            k.modulus(),
            &MonicPoly::from_coeffs(f5(), vec![2, 0, 1]).unwrap()
        );
        assert!(ExtField::new(f5(), 0).is_err());
        let red = MonicPoly::from_coeffs(f5(), vec![0, 0, 1]).unwrap();
        assert!(ExtField::with_modulus(red).is_err());
    }

    #[test]
    fn element_enumeration_is_complete() {
        let k = ExtField::new(f5(), 2).unwrap();
        let all: Vec<_> = k.elements().collect();
        assert_eq!(all.len(), 25);
        let distinct: std::collections::HashSet<_> = all.iter().collect();
        assert_eq!(distinct.len(), 25);
        assert!(all[0].is_zero());
    }

    #[test]
    fn multiplicative_group_order() {
        // a^(q^n - 1) = 1 for 100 seeded nonzero elements.
        for (q, n) in [(5u64, 2usize), (5, 3), (13, 2)] {
            let spec = FieldSpec::new(q).unwrap();
            let k = ExtField::new(spec, n).unwrap();
            let e = k.order() - BigUint::one();
            let mut rng = ChaCha8Rng::seed_from_u64(5);
            let mut tested = 0;
            while tested < 100 {
                let coeffs: Vec<u64> = (0..n).map(|_| rng.gen_range(0..q)).collect();
                let elem = k.from_poly(&Poly::from_coeffs(spec, coeffs)).unwrap();
                if elem.is_zero() {
                    continue;
                }
                assert_eq!(k.pow(&elem, &e), k.one());
                tested += 1;
            }
        }
    }

    #[test]
    fn quadratic_character_base_cases() {
        let k = ExtField::new(f5(), 1).unwrap();
        assert_eq!(k.quadratic_character(&k.zero()), Symbol::Zero);
        assert_eq!(k.quadratic_character(&k.one()), Symbol::PlusOne);
        // 2 is a non-square mod 5.
        assert_eq!(k.quadratic_character(&k.from_base(2)), Symbol::MinusOne);
    }

    #[test]
    fn quadratic_character_matches_square_table() {
        // Enumerate actual squares of F_{q^n} and compare.
        for (q, n) in [(5u64, 2usize), (13, 2)] {
            let spec = FieldSpec::new(q).unwrap();
            let k = ExtField::new(spec, n).unwrap();
            let squares: std::collections::HashSet<ExtElem> =
                k.elements().map(|a| k.mul(&a, &a)).collect();
            let mut counted_squares = 0u64;
            for a in k.elements() {
                let chi = k.quadratic_character(&a);
                if a.is_zero() {
                    assert_eq!(chi, Symbol::Zero);
                } else if squares.contains(&a) {
                    assert_eq!(chi, Symbol::PlusOne);
                    counted_squares += 1;
                } else {
                    assert_eq!(chi, Symbol::MinusOne);
                }
            }
            // Exactly (q^n - 1)/2 nonzero squares.
            let half = ((k.order() - BigUint::one()) / BigUint::from(2u32))
                .to_u64_digits()
                .first()
                .copied()
                .unwrap_or(0);
            assert!(!k.order().is_zero());
            assert_eq!(counted_squares, half);
        }
    }

    #[test]
    fn eval_base_poly_matches_base_eval() {
        let spec = f5();
        let k = ExtField::new(spec, 1).unwrap();
        let p = Poly::from_coeffs(spec, vec![1, 2, 0, 3]);
        for t in 0..5u64 {
            let v = k.eval_base_poly(&p, &k.from_base(t)).unwrap();
            assert_eq!(
                v.as_poly().coeff(0).value(),
                p.eval(spec.element(t)).value()
            );
        }
    }
}
