use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::ffpoly::field::FieldSpec;

/// Möbius function of a positive integer.
pub fn mobius(mut n: u64) -> i64 {
    debug_assert!(n >= 1);
    let mut mu = 1i64;
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            mu = -mu;
        }
        d += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

/// Exact count of monic irreducibles of degree n:
/// π_A(n) = (1/n) Σ_{d|n} μ(d) q^(n/d).
pub fn count_primes(spec: FieldSpec, n: usize) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::domain("prime polynomials have degree ≥ 1"));
    }
    let q = BigInt::from(spec.q());
    let mut sum = BigInt::zero();
    for d in 1..=n as u64 {
        if n as u64 % d != 0 {
            continue;
        }
        let mu = mobius(d);
        if mu == 0 {
            continue;
        }
        let term = q.pow((n as u64 / d) as u32);
        if mu > 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    let (quot, rem) = sum.div_rem(&BigInt::from(n));
    if !rem.is_zero() || quot.is_negative() {
        return Err(Error::inconsistency(format!(
            "Gauss count for q={}, n={n} was not a nonnegative integer",
            spec.q()
        )));
    }
    Ok(quot.to_biguint().unwrap())
}

/// π_A(n) when it fits in u64.
pub fn count_primes_u64(spec: FieldSpec, n: usize) -> Result<u64> {
    count_primes(spec, n)?
        .to_u64()
        .ok_or_else(|| Error::domain(format!("π_A({n}) does not fit in u64 at q={}", spec.q())))
}

/// Does π_A(n) satisfy |π_A(n) - q^n/n| ≤ 2·q^(n/2)/n?
///
/// Checked exactly: the inequality is equivalent to (n·π - q^n)² ≤ 4·q^n.
pub fn prime_count_envelope_holds(spec: FieldSpec, n: usize, pi: &BigUint) -> bool {
    let q = BigInt::from(spec.q());
    let lhs = BigInt::from(pi.clone()) * BigInt::from(n as u64) - q.pow(n as u32);
    let bound = BigInt::from(4u32) * q.pow(n as u32);
    &lhs * &lhs <= bound
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::irreducible::enumerate_primes;

    #[test]
    fn mobius_small() {
        let want = [1i64, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0];
        for (i, &w) in want.iter().enumerate() {
            assert_eq!(mobius(i as u64 + 1), w, "μ({})", i + 1);
        }
    }

    #[test]
    fn degree_one_count_is_q() {
        for q in [5u64, 13, 17] {
            let spec = FieldSpec::new(q).unwrap();
            assert_eq!(count_primes_u64(spec, 1).unwrap(), q);
        }
    }

    #[test]
    fn matches_enumeration() {
        for q in [5u64, 13] {
            let spec = FieldSpec::new(q).unwrap();
            let max = if q == 5 { 6 } else { 4 };
            for n in 1..=max {
                let formula = count_primes_u64(spec, n).unwrap();
                let counted = enumerate_primes(spec, n).unwrap().count() as u64;
                assert_eq!(formula, counted, "q={q} n={n}");
            }
        }
    }

    #[test]
    fn known_values() {
        let f5 = FieldSpec::new(5).unwrap();
        assert_eq!(count_primes_u64(f5, 2).unwrap(), 10);
        assert_eq!(count_primes_u64(f5, 3).unwrap(), 40);
        // (5^7 - 5)/7
        assert_eq!(count_primes_u64(f5, 7).unwrap(), 11160);
        // (5^9 - 5^3)/9
        assert_eq!(count_primes_u64(f5, 9).unwrap(), 217000);
    }

    #[test]
    fn envelope_holds_widely() {
        for q in [5u64, 13] {
            let spec = FieldSpec::new(q).unwrap();
            for n in 1..=40 {
                let pi = count_primes(spec, n).unwrap();
                assert!(prime_count_envelope_holds(spec, n, &pi), "q={q} n={n}");
            }
        }
    }
}
