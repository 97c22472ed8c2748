use num_bigint::BigUint;

use crate::arith::irreducible::IrreducibilityTester;
use crate::error::{Error, Result};
use crate::ffpoly::enumerate_monic;
use crate::ffpoly::field::FieldSpec;
use crate::ffpoly::poly::MonicPoly;

/// Complete factorization of a monic polynomial into prime powers.
///
/// Primes are listed smallest-first in the (degree, enumeration index) order,
/// so the factorization is deterministic. The unit f = 1 has an empty list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    factors: Vec<(MonicPoly, u32)>,
}

impl Factorization {
    pub fn factors(&self) -> &[(MonicPoly, u32)] {
        &self.factors
    }

    pub fn is_unit(&self) -> bool {
        self.factors.is_empty()
    }

    /// Multiply the prime powers back together.
    pub fn product(&self, spec: FieldSpec) -> Result<MonicPoly> {
        let mut acc = MonicPoly::one(spec);
        for (p, e) in &self.factors {
            for _ in 0..*e {
                acc = acc.mul_monic(p)?;
            }
        }
        Ok(acc)
    }

    /// d(f) = Π (e_i + 1), the number of monic divisors.
    pub fn divisor_count(&self) -> u64 {
        self.factors.iter().map(|(_, e)| *e as u64 + 1).product()
    }

    /// d(f²) = Π (2·e_i + 1).
    pub fn divisor_count_of_square(&self) -> u64 {
        self.factors.iter().map(|(_, e)| 2 * *e as u64 + 1).product()
    }

    /// A monic polynomial is a perfect square iff every exponent is even.
    pub fn is_perfect_square(&self) -> bool {
        self.factors.iter().all(|(_, e)| e % 2 == 0)
    }
}

/// Trial-division factorizer with a cached prime list.
///
/// Division candidates are the enumerated primes of degree up to half the
/// remaining cofactor; an irreducibility check on the cofactor short-circuits
/// the scan once the remaining part is prime. Degrees at play are tiny, so
/// nothing fancier is warranted.
pub struct Factorizer {
    spec: FieldSpec,
    tester: IrreducibilityTester,
    primes_by_degree: Vec<Vec<MonicPoly>>,
}

impl Factorizer {
    pub fn new(spec: FieldSpec) -> Self {
        Factorizer {
            spec,
            tester: IrreducibilityTester::new(spec),
            primes_by_degree: vec![Vec::new()],
        }
    }

    fn ensure_primes(&mut self, degree: usize) {
        while self.primes_by_degree.len() <= degree {
            let n = self.primes_by_degree.len();
            let tester = &mut self.tester;
            let list: Vec<MonicPoly> = enumerate_monic(self.spec, n)
                .filter(|p| tester.test(p))
                .collect();
            self.primes_by_degree.push(list);
        }
    }

    pub fn factorize(&mut self, f: &MonicPoly) -> Result<Factorization> {
        self.spec.same_field(f.spec())?;
        let mut factors: Vec<(MonicPoly, u32)> = Vec::new();
        let mut cofactor = f.clone();
        'outer: while cofactor.degree() > 0 {
            if self.tester.test(&cofactor) {
                factors.push((cofactor, 1));
                break;
            }
            let half = cofactor.degree() / 2;
            self.ensure_primes(half);
            for d in 1..=half {
                for i in 0..self.primes_by_degree[d].len() {
                    let p = &self.primes_by_degree[d][i];
                    let (quot, rem) = cofactor.divrem(p.as_poly())?;
                    if !rem.is_zero() {
                        continue;
                    }
                    let p = p.clone();
                    let mut exp = 1u32;
                    let mut reduced = MonicPoly::new(quot)?;
                    loop {
                        let (quot, rem) = reduced.divrem(p.as_poly())?;
                        if rem.is_zero() {
                            exp += 1;
                            reduced = MonicPoly::new(quot)?;
                        } else {
                            break;
                        }
                    }
                    factors.push((p, exp));
                    cofactor = reduced;
                    continue 'outer;
                }
            }
            // No factor of degree ≤ half exists, so the cofactor is prime;
            // the tester above should have caught it.
            return Err(Error::inconsistency(format!(
                "trial division and the irreducibility test disagree on {cofactor}"
            )));
        }
        Ok(Factorization { factors })
    }
}

/// One-shot factorization. Use [`Factorizer`] when factoring many inputs.
pub fn factorize(f: &MonicPoly) -> Result<Factorization> {
    Factorizer::new(f.spec()).factorize(f)
}

/// d(f), the number of monic divisors.
pub fn divisor_count(f: &MonicPoly) -> Result<u64> {
    Ok(factorize(f)?.divisor_count())
}

/// Is f a perfect square in F_q[T]?
pub fn is_perfect_square(f: &MonicPoly) -> Result<bool> {
    Ok(factorize(f)?.is_perfect_square())
}

/// Exact Σ_{deg f = n} d(f²), from the generating function
/// (1 - q·u²)/(1 - q·u)³: the coefficient of u^n is
/// q^n·(n+1)(n+2)/2 - q^(n-1)·n(n-1)/2.
pub fn divisor_square_sum(spec: FieldSpec, n: usize) -> BigUint {
    let q = BigUint::from(spec.q());
    let n_u = n as u64;
    let main = q.pow(n as u32) * BigUint::from((n_u + 1) * (n_u + 2) / 2);
    if n >= 2 {
        main - q.pow(n as u32 - 1) * BigUint::from(n_u * (n_u - 1) / 2)
    } else {
        main
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn f5() -> FieldSpec {
        FieldSpec::new(5).unwrap()
    }

    #[test]
    fn unit_factors_to_nothing() {
        let f = MonicPoly::one(f5());
        let fac = factorize(&f).unwrap();
        assert!(fac.is_unit());
        assert_eq!(fac.divisor_count(), 1);
        assert!(fac.is_perfect_square());
        assert_eq!(fac.product(f5()).unwrap(), f);
    }

    #[test]
    fn irreducible_factors_to_itself() {
        let f = MonicPoly::from_coeffs(f5(), vec![2, 0, 1]).unwrap();
        let fac = factorize(&f).unwrap();
        assert_eq!(fac.factors(), &[(f.clone(), 1)]);
        assert_eq!(fac.divisor_count(), 2);
        assert!(!fac.is_perfect_square());
    }

    #[test]
    fn square_of_linear() {
        // T² + 4T + 4 = (T + 2)²
        let f = MonicPoly::from_coeffs(f5(), vec![4, 4, 1]).unwrap();
        let fac = factorize(&f).unwrap();
        assert_eq!(fac.factors(), &[(MonicPoly::x_plus(f5(), 2), 2)]);
        assert_eq!(fac.divisor_count(), 3);
        assert!(fac.is_perfect_square());
    }

    #[test]
    fn reconstructs_exhaustively_degree_up_to_5() {
        let spec = f5();
        let mut fz = Factorizer::new(spec);
        for n in 1..=5usize {
            for f in enumerate_monic(spec, n) {
                let fac = fz.factorize(&f).unwrap();
                assert_eq!(fac.product(spec).unwrap(), f, "factors of {f}");
                // Every listed prime really is prime, pairwise distinct, and
                // in ascending (degree, enumeration index) order; within a
                // degree the enumeration index orders by high coefficients
                // first.
                for w in fac.factors().windows(2) {
                    let (a, b) = (&w[0].0, &w[1].0);
                    let key = |p: &MonicPoly| {
                        (p.degree(), p.coeffs().iter().rev().copied().collect::<Vec<_>>())
                    };
                    assert!(key(a) < key(b));
                }
                for (p, e) in fac.factors() {
                    assert!(crate::arith::is_irreducible(p).unwrap());
                    assert!(*e >= 1);
                }
            }
        }
    }

    #[test]
    fn divisor_sum_identity_small() {
        // Σ_{deg f = n} d(f) = (n+1)·q^n; brute force at q = 5, n = 2 gives 75.
        let spec = f5();
        let mut fz = Factorizer::new(spec);
        for n in 0..=3usize {
            let total: u64 = enumerate_monic(spec, n)
                .map(|f| fz.factorize(&f).unwrap().divisor_count())
                .sum();
            assert_eq!(total, (n as u64 + 1) * 5u64.pow(n as u32));
            if n == 2 {
                assert_eq!(total, 75);
            }
        }
    }

    #[test]
    fn divisor_square_sum_closed_form() {
        let spec = f5();
        assert_eq!(divisor_square_sum(spec, 0).to_u64().unwrap(), 1);
        // 5 monic linears, each d(P²) = 3.
        assert_eq!(divisor_square_sum(spec, 1).to_u64().unwrap(), 15);
        // Brute force over all 125 cubics.
        let mut fz = Factorizer::new(spec);
        for n in 0..=4usize {
            let brute: u64 = enumerate_monic(spec, n)
                .map(|f| fz.factorize(&f).unwrap().divisor_count_of_square())
                .sum();
            assert_eq!(
                BigUint::from(brute),
                divisor_square_sum(spec, n),
                "n = {n}"
            );
        }
    }
}
