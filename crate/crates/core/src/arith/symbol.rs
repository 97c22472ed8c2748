use num_bigint::BigUint;
use num_traits::One;

use crate::arith::factor::factorize;
use crate::arith::irreducible::{is_irreducible, IrreducibilityTester};
use crate::error::{Error, Result};
use crate::ffpoly::enumerate_monic;
use crate::ffpoly::field::{FieldSpec, LegendreTable};
use crate::ffpoly::poly::{raw, MonicPoly, Poly};

/// Value of a quadratic residue symbol: 0 exactly when the arguments share an
/// irreducible factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symbol {
    MinusOne,
    Zero,
    PlusOne,
}

impl Symbol {
    pub fn as_i8(self) -> i8 {
        match self {
            Symbol::MinusOne => -1,
            Symbol::Zero => 0,
            Symbol::PlusOne => 1,
        }
    }

    pub fn from_i8(v: i8) -> Symbol {
        match v {
            -1 => Symbol::MinusOne,
            0 => Symbol::Zero,
            1 => Symbol::PlusOne,
            _ => panic!("symbol value out of range: {v}"),
        }
    }
}

impl std::ops::Mul for Symbol {
    type Output = Symbol;

    fn mul(self, rhs: Symbol) -> Symbol {
        Symbol::from_i8(self.as_i8() * rhs.as_i8())
    }
}

impl std::fmt::Display for Symbol {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:+}", self.as_i8())
    }
}

/// Shared lookup tables for fast symbol evaluation: the quadratic character
/// of F_q and the inverse table, both indexed by field value.
#[derive(Debug, Clone)]
pub struct SymbolCtx {
    spec: FieldSpec,
    legendre: LegendreTable,
    inverse: Vec<u64>,
}

impl SymbolCtx {
    pub fn new(spec: FieldSpec) -> Self {
        let q = spec.q();
        let mut inverse = vec![0u64; q as usize];
        for a in 1..q {
            inverse[a as usize] = spec.inv(spec.element(a)).unwrap().value();
        }
        SymbolCtx {
            spec,
            legendre: LegendreTable::new(spec),
            inverse,
        }
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    #[inline]
    pub fn legendre(&self, a: u64) -> i8 {
        self.legendre.get(a)
    }
}

/// Reusable buffers for the Euclidean symbol chain.
#[derive(Debug, Default, Clone)]
pub struct SymbolScratch {
    a: Vec<u64>,
    b: Vec<u64>,
}

/// (a / b) for monic b of degree ≥ 1, by reciprocity-flip Euclidean descent.
///
/// Because q ≡ 1 (mod 4) the reciprocity sign (-1)^(((q-1)/2)·deg A·deg B) is
/// always +1, so flips are signless; the only sign bookkeeping is the
/// constant rule (c / b) = χ_q(c)^(deg b) applied when a remainder is scaled
/// back to monic.
pub(crate) fn symbol_raw(
    a_in: &[u64],
    b_in: &[u64],
    ctx: &SymbolCtx,
    scratch: &mut SymbolScratch,
) -> i8 {
    let q = ctx.spec.q();
    debug_assert_eq!(b_in.last(), Some(&1));
    debug_assert!(b_in.len() >= 2);
    scratch.a.clear();
    scratch.a.extend_from_slice(a_in);
    scratch.b.clear();
    scratch.b.extend_from_slice(b_in);
    let a = &mut scratch.a;
    let b = &mut scratch.b;
    let mut sign = 1i8;
    loop {
        raw::rem_monic(a, b, q);
        if a.is_empty() {
            // deg b ≥ 1 here, so a common factor exists.
            return 0;
        }
        let lead = *a.last().unwrap();
        if lead != 1 {
            if (b.len() - 1) % 2 == 1 {
                sign *= ctx.legendre.get(lead);
            }
            let inv = ctx.inverse[lead as usize];
            for c in a.iter_mut() {
                *c = *c * inv % q;
            }
        }
        if a.len() == 1 {
            // a = 1 now; gcd was trivial.
            return sign;
        }
        std::mem::swap(a, b);
    }
}

/// The quadratic residue symbol (A / B), extended multiplicatively to
/// arbitrary monic B of degree ≥ 1 (Jacobi style). Returns zero when
/// gcd(A, B) ≠ 1; a zero A gives zero.
pub fn residue_symbol(a: &Poly, b: &MonicPoly) -> Result<Symbol> {
    a.spec().same_field(b.spec())?;
    if b.degree() == 0 {
        return Err(Error::domain(
            "residue symbol needs a nonconstant bottom argument",
        ));
    }
    let ctx = SymbolCtx::new(a.spec());
    let mut scratch = SymbolScratch::default();
    Ok(Symbol::from_i8(symbol_raw(
        a.coeffs(),
        b.coeffs(),
        &ctx,
        &mut scratch,
    )))
}

/// Same symbol where the bottom is irreducible, evaluated by the Euler
/// criterion f^((|P|-1)/2) mod P. Slow; this is the oracle the fast chain is
/// tested against.
pub fn residue_symbol_euler(f: &Poly, p: &MonicPoly) -> Result<Symbol> {
    f.spec().same_field(p.spec())?;
    if p.degree() == 0 || !is_irreducible(p)? {
        return Err(Error::domain(
            "the Euler-criterion symbol needs an irreducible bottom argument",
        ));
    }
    let r = f.rem(p.as_poly())?;
    if r.is_zero() {
        return Ok(Symbol::Zero);
    }
    let norm = BigUint::from(p.spec().q()).pow(p.degree() as u32);
    let e = (norm - BigUint::one()) / BigUint::from(2u32);
    let v = r.pow_mod(&e, p)?;
    let q = p.spec().q();
    if v.degree() == Some(0) {
        let c = v.coeff(0).value();
        if c == 1 {
            return Ok(Symbol::PlusOne);
        }
        if c == q - 1 {
            return Ok(Symbol::MinusOne);
        }
    }
    Err(Error::inconsistency(format!(
        "Euler criterion for ({f}) over ({p}) did not land in ±1"
    )))
}

/// Result of an exact character sum over the primes of one degree.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct CharSum {
    /// deg f (the fixed top argument).
    pub f_degree: usize,
    /// Degree of the primes summed over.
    pub n: usize,
    /// Number of primes of that degree.
    pub prime_count: u64,
    /// Exact S = Σ_{deg P = n} (f / P).
    pub sum: i64,
    /// |S| / ((deg f / n) · q^(n/2)), the normalized size against the
    /// square-root cancellation bound.
    pub normalized: f64,
}

/// Exact Σ_{deg P = n} (f / P) for a monic non-square f of degree ≥ 1,
/// with the ratio measuring the sum against (deg f / n)·q^(n/2).
///
/// Perfect squares are rejected: for them the sum is trivially
/// π_A(n) - #{P | f} and carries no cancellation information; see
/// [`char_sum_square_case`].
pub fn char_sum_over_primes(f: &MonicPoly, n: usize) -> Result<CharSum> {
    if f.degree() == 0 {
        return Err(Error::domain("character sums need deg f ≥ 1"));
    }
    if n == 0 {
        return Err(Error::domain("prime degree n must be ≥ 1"));
    }
    if factorize(f)?.is_perfect_square() {
        return Err(Error::domain(
            "f is a perfect square; the cancellation bound does not apply",
        ));
    }
    let spec = f.spec();
    let ctx = SymbolCtx::new(spec);
    let mut scratch = SymbolScratch::default();
    let mut tester = IrreducibilityTester::new(spec);
    let mut sum = 0i64;
    let mut prime_count = 0u64;
    for p in enumerate_monic(spec, n) {
        if !tester.test(&p) {
            continue;
        }
        prime_count += 1;
        sum += symbol_raw(f.coeffs(), p.coeffs(), &ctx, &mut scratch) as i64;
    }
    let normalized = sum.unsigned_abs() as f64
        / ((f.degree() as f64 / n as f64) * (spec.q() as f64).powf(n as f64 / 2.0));
    Ok(CharSum {
        f_degree: f.degree(),
        n,
        prime_count,
        sum,
        normalized,
    })
}

/// The square case of the same sum, computed without any symbol evaluation:
/// Σ_{deg P = n} (f / P) = π_A(n) - #{P : deg P = n, P | f} when f = g².
pub fn char_sum_square_case(f: &MonicPoly, n: usize) -> Result<i64> {
    let fac = factorize(f)?;
    if !fac.is_perfect_square() {
        return Err(Error::domain("f is not a perfect square"));
    }
    let pi = crate::arith::count::count_primes_u64(f.spec(), n)?;
    let dividing = fac
        .factors()
        .iter()
        .filter(|(p, _)| p.degree() == n)
        .count() as u64;
    Ok(pi as i64 - dividing as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f5() -> FieldSpec {
        FieldSpec::new(5).unwrap()
    }

    fn random_poly(rng: &mut ChaCha8Rng, spec: FieldSpec, deg: usize, monic: bool) -> Poly {
        let mut coeffs: Vec<u64> = (0..deg).map(|_| rng.gen_range(0..spec.q())).collect();
        coeffs.push(if monic { 1 } else { rng.gen_range(1..spec.q()) });
        Poly::from_coeffs(spec, coeffs)
    }

    #[test]
    fn zero_cases() {
        let spec = f5();
        let p = MonicPoly::from_coeffs(spec, vec![2, 0, 1]).unwrap();
        // B | A → 0
        let a = p.mul_monic(&MonicPoly::x(spec)).unwrap();
        assert_eq!(residue_symbol(a.as_poly(), &p).unwrap(), Symbol::Zero);
        assert_eq!(residue_symbol_euler(a.as_poly(), &p).unwrap(), Symbol::Zero);
        // f = P → 0
        assert_eq!(residue_symbol_euler(p.as_poly(), &p).unwrap(), Symbol::Zero);
        // zero numerator
        assert_eq!(
            residue_symbol(&Poly::zero(spec), &p).unwrap(),
            Symbol::Zero
        );
    }

    #[test]
    fn one_is_always_a_square() {
        let spec = f5();
        let p = MonicPoly::from_coeffs(spec, vec![2, 0, 1]).unwrap();
        let one = Poly::constant(spec, 1);
        assert_eq!(residue_symbol(&one, &p).unwrap(), Symbol::PlusOne);
        assert_eq!(residue_symbol_euler(&one, &p).unwrap(), Symbol::PlusOne);
    }

    #[test]
    fn constant_two_over_t() {
        // 2^((5-1)/2) = 4 ≡ -1 (mod 5)
        let spec = f5();
        let two = Poly::constant(spec, 2);
        let t = MonicPoly::x(spec);
        assert_eq!(residue_symbol_euler(&two, &t).unwrap(), Symbol::MinusOne);
        assert_eq!(residue_symbol(&two, &t).unwrap(), Symbol::MinusOne);
    }

    #[test]
    fn euler_rejects_reducible_bottom() {
        let spec = f5();
        let t2 = MonicPoly::from_coeffs(spec, vec![0, 0, 1]).unwrap();
        assert!(residue_symbol_euler(&Poly::constant(spec, 2), &t2).is_err());
    }

    #[test]
    fn agrees_with_euler_oracle() {
        // 400 seeded pairs (A, P) with P irreducible of degree ≤ 5, q ∈ {5, 13}.
        for q in [5u64, 13] {
            let spec = FieldSpec::new(q).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            let mut tester = IrreducibilityTester::new(spec);
            let mut done = 0;
            while done < 200 {
                let pd = rng.gen_range(1..=5usize);
                let p = random_poly(&mut rng, spec, pd, true);
                let p = MonicPoly::new(p).unwrap();
                if !tester.test(&p) {
                    continue;
                }
                let ad = rng.gen_range(0..=6usize);
                let a = random_poly(&mut rng, spec, ad, false);
                assert_eq!(
                    residue_symbol(&a, &p).unwrap(),
                    residue_symbol_euler(&a, &p).unwrap(),
                    "q={q} a={a} p={p}"
                );
                done += 1;
            }
        }
    }

    #[test]
    fn symmetric_on_coprime_monic_pairs() {
        // (A/B) = (B/A) for coprime monic pairs when q ≡ 1 mod 4.
        for q in [5u64, 13] {
            let spec = FieldSpec::new(q).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            let mut done = 0;
            while done < 300 {
                let da = rng.gen_range(1..=5);
                let a = MonicPoly::new(random_poly(&mut rng, spec, da, true)).unwrap();
                let db = rng.gen_range(1..=5);
                let b = MonicPoly::new(random_poly(&mut rng, spec, db, true)).unwrap();
                let coprime = a.gcd_monic(b.as_poly()).unwrap().degree() == Some(0);
                let ab = residue_symbol(a.as_poly(), &b).unwrap();
                let ba = residue_symbol(b.as_poly(), &a).unwrap();
                if coprime {
                    assert_eq!(ab, ba, "q={q} a={a} b={b}");
                } else {
                    assert_eq!(ab, Symbol::Zero);
                    assert_eq!(ba, Symbol::Zero);
                }
                done += 1;
            }
        }
    }

    #[test]
    fn multiplicative_in_both_arguments() {
        let spec = f5();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..300 {
            let d1 = rng.gen_range(0..=4);
            let a1 = random_poly(&mut rng, spec, d1, false);
            let d2 = rng.gen_range(0..=4);
            let a2 = random_poly(&mut rng, spec, d2, false);
            let d3 = rng.gen_range(1..=4);
            let b1 = MonicPoly::new(random_poly(&mut rng, spec, d3, true)).unwrap();
            let d4 = rng.gen_range(1..=4);
            let b2 = MonicPoly::new(random_poly(&mut rng, spec, d4, true)).unwrap();
            let prod_top = a1.mul(&a2).unwrap();
            assert_eq!(
                residue_symbol(&prod_top, &b1).unwrap(),
                residue_symbol(&a1, &b1).unwrap() * residue_symbol(&a2, &b1).unwrap()
            );
            let prod_bot = b1.mul_monic(&b2).unwrap();
            assert_eq!(
                residue_symbol(&a1, &prod_bot).unwrap(),
                residue_symbol(&a1, &b1).unwrap() * residue_symbol(&a1, &b2).unwrap()
            );
        }
    }

    #[test]
    fn char_sum_f_equals_t_degree_one() {
        // S = Σ_{t ∈ F_5} (T / (T+t)): brute force over the 5 linear primes.
        let spec = f5();
        let f = MonicPoly::x(spec);
        let report = char_sum_over_primes(&f, 1).unwrap();
        assert_eq!(report.prime_count, 5);
        // Independent Euler-criterion evaluation.
        let brute: i64 = (0..5)
            .map(|t| {
                residue_symbol_euler(f.as_poly(), &MonicPoly::x_plus(spec, t))
                    .unwrap()
                    .as_i8() as i64
            })
            .sum();
        assert_eq!(report.sum, brute);
        assert_eq!(report.sum, 0);
        assert!(report.normalized.is_finite());
    }

    #[test]
    fn char_sums_vanish_at_odd_prime_degrees() {
        // For squarefree non-square f of degree ≤ 2 and odd n ≥ 3 the sum is
        // exactly zero: grouping (f/P) = χ_{q^n}(f(θ)) over elements θ of
        // exact degree d | n, odd n/d restricts χ nontrivially to F_{q^d},
        // and the complete sums Σ_{θ∈F_{q^d}} χ(f(θ)) are 0 (linear f) or -1
        // (quadratic squarefree f) for every d, so the inclusion–exclusion
        // telescopes to zero.
        for q in [5u64, 13] {
            let spec = FieldSpec::new(q).unwrap();
            for f in [
                MonicPoly::x(spec),
                MonicPoly::x_plus(spec, 1),
                MonicPoly::from_coeffs(spec, vec![1, 0, 1]).unwrap(),
                MonicPoly::from_coeffs(spec, vec![2, 1, 1]).unwrap(),
            ] {
                if factorize(&f).unwrap().is_perfect_square() {
                    continue;
                }
                let r = char_sum_over_primes(&f, 3).unwrap();
                assert_eq!(r.sum, 0, "q={q} f={f} n=3");
                if q == 5 {
                    let r = char_sum_over_primes(&f, 5).unwrap();
                    assert_eq!(r.sum, 0, "q={q} f={f} n=5");
                }
            }
        }
    }

    #[test]
    fn char_sum_rejects_squares() {
        let spec = f5();
        let square = MonicPoly::from_coeffs(spec, vec![4, 4, 1]).unwrap(); // (T+2)²
        assert!(char_sum_over_primes(&square, 3).is_err());
        // Square path: π_A(3) = 40, no cubic prime divides (T+2)².
        assert_eq!(char_sum_square_case(&square, 3).unwrap(), 40);
        // And a square divisible by a prime of the right degree:
        // the sum over degree-1 primes loses exactly the P = T+2 term.
        assert_eq!(char_sum_square_case(&square, 1).unwrap(), 4);
    }
}
