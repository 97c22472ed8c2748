use crate::error::{Error, Result};
use crate::ffpoly::field::FieldSpec;
use crate::ffpoly::poly::{raw, MonicPoly};
use crate::ffpoly::{enumerate_monic, monic_count};

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

fn distinct_prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Reusable workspace for irreducibility testing.
///
/// The test is the distinct-degree criterion: monic f of degree n is
/// irreducible iff T^(q^n) ≡ T (mod f) and gcd(T^(q^(n/ℓ)) - T, f) = 1 for
/// every prime ℓ | n. Frobenius powers are built iteratively (x ← x^q mod f),
/// so no exponent ever exceeds q. A root scan runs first: a root in F_q is a
/// linear factor, which settles degree ≥ 2 immediately.
pub struct IrreducibilityTester {
    q: u64,
    x: Vec<u64>,
    tmp: Vec<u64>,
    acc: Vec<u64>,
    ga: Vec<u64>,
    gb: Vec<u64>,
}

impl IrreducibilityTester {
    pub fn new(spec: FieldSpec) -> Self {
        IrreducibilityTester {
            q: spec.q(),
            x: Vec::new(),
            tmp: Vec::new(),
            acc: Vec::new(),
            ga: Vec::new(),
            gb: Vec::new(),
        }
    }

    /// Test a monic coefficient slice of degree ≥ 1.
    pub fn test_coeffs(&mut self, f: &[u64]) -> bool {
        let q = self.q;
        debug_assert_eq!(f.last(), Some(&1));
        let n = f.len() - 1;
        debug_assert!(n >= 1);
        if n == 1 {
            return true;
        }
        for a in 0..q {
            if raw::eval(f, a, q) == 0 {
                return false;
            }
        }
        if n == 2 || n == 3 {
            // No roots means no linear factor; for degrees 2 and 3 that is
            // already a proof of irreducibility.
            return true;
        }

        let primes = distinct_prime_divisors(n);
        let mut gcd_stages: Vec<usize> = primes.iter().map(|&l| n / l).collect();
        gcd_stages.sort_unstable();
        gcd_stages.dedup();

        // x starts as T mod f (deg f ≥ 2 so no reduction needed).
        self.x.clear();
        self.x.extend_from_slice(&[0, 1]);
        let mut stage = 0;
        for k in 1..=n {
            self.frobenius_step(f);
            if stage < gcd_stages.len() && gcd_stages[stage] == k {
                stage += 1;
                if !self.gcd_with_x_minus_t_is_one(f) {
                    return false;
                }
            }
        }
        // x now holds T^(q^n) mod f; require it to equal T.
        self.x == [0, 1]
    }

    pub fn test(&mut self, f: &MonicPoly) -> bool {
        self.test_coeffs(f.coeffs())
    }

    /// x ← x^q mod f.
    fn frobenius_step(&mut self, f: &[u64]) {
        let q = self.q;
        let e = q;
        self.acc.clear();
        self.acc.push(1);
        let bits = 64 - e.leading_zeros() as u64;
        for i in (0..bits).rev() {
            raw::mul(&self.acc, &self.acc, q, &mut self.tmp);
            raw::rem_monic(&mut self.tmp, f, q);
            std::mem::swap(&mut self.acc, &mut self.tmp);
            if (e >> i) & 1 == 1 {
                raw::mul(&self.acc, &self.x, q, &mut self.tmp);
                raw::rem_monic(&mut self.tmp, f, q);
                std::mem::swap(&mut self.acc, &mut self.tmp);
            }
        }
        std::mem::swap(&mut self.x, &mut self.acc);
    }

    /// gcd(x - T, f) == 1?
    fn gcd_with_x_minus_t_is_one(&mut self, f: &[u64]) -> bool {
        let q = self.q;
        self.ga.clear();
        self.ga.extend_from_slice(&self.x);
        if self.ga.len() < 2 {
            self.ga.resize(2, 0);
        }
        self.ga[1] = (self.ga[1] + q - 1) % q;
        raw::trim(&mut self.ga);
        self.gb.clear();
        self.gb.extend_from_slice(f);
        // gcd(ga, gb); f is nonzero so the loop terminates with gb's role.
        while !self.gb.is_empty() {
            let lead = *self.gb.last().unwrap();
            let inv_lead = pow_u64(lead, q - 2, q);
            raw::rem_general(&mut self.ga, &self.gb, q, inv_lead);
            std::mem::swap(&mut self.ga, &mut self.gb);
        }
        self.ga.len() == 1
    }
}

/// Is this monic polynomial irreducible? Degree 0 (units) is a domain error.
pub fn is_irreducible(f: &MonicPoly) -> Result<bool> {
    if f.degree() == 0 {
        return Err(Error::domain(
            "irreducibility is undefined for units (degree 0)",
        ));
    }
    let mut tester = IrreducibilityTester::new(f.spec());
    Ok(tester.test(f))
}

/// The first monic irreducible of degree `n` in enumeration order.
///
/// Deterministic by construction; extension fields use it as their modulus so
/// that point counts are reproducible bit-for-bit.
pub fn first_irreducible(spec: FieldSpec, n: usize) -> Result<MonicPoly> {
    if n == 0 {
        return Err(Error::domain("no irreducible polynomials of degree 0"));
    }
    let mut tester = IrreducibilityTester::new(spec);
    enumerate_monic(spec, n)
        .find(|p| tester.test(p))
        .ok_or_else(|| Error::inconsistency("no irreducible polynomial found"))
}

/// Deterministic stream of the monic irreducibles of degree `n`, in
/// enumeration order.
pub fn enumerate_primes(spec: FieldSpec, n: usize) -> Result<impl Iterator<Item = MonicPoly>> {
    if n == 0 {
        return Err(Error::domain("prime polynomials have degree ≥ 1"));
    }
    // Guard against absurd ranges before starting a non-terminating walk.
    monic_count(spec, n)?;
    let mut tester = IrreducibilityTester::new(spec);
    Ok(enumerate_monic(spec, n).filter(move |p| tester.test(p)))
}

/// All prime polynomials of degree 1..=max_degree, grouped by degree.
///
/// Built once and shared read-only by workers.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    spec: FieldSpec,
    by_degree: Vec<Vec<MonicPoly>>,
}

impl PrimeTable {
    pub fn build(spec: FieldSpec, max_degree: usize) -> Result<Self> {
        let mut by_degree = Vec::with_capacity(max_degree + 1);
        by_degree.push(Vec::new()); // degree 0: none
        for n in 1..=max_degree {
            by_degree.push(enumerate_primes(spec, n)?.collect());
        }
        Ok(PrimeTable { spec, by_degree })
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn max_degree(&self) -> usize {
        self.by_degree.len() - 1
    }

    pub fn of_degree(&self, n: usize) -> &[MonicPoly] {
        &self.by_degree[n]
    }

    /// Primes of all degrees 1..=max, ascending by (degree, enumeration index).
    pub fn ascending(&self) -> impl Iterator<Item = &MonicPoly> {
        self.by_degree.iter().flatten()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> FieldSpec {
        FieldSpec::new(5).unwrap()
    }

    #[test]
    fn linear_is_irreducible() {
        assert!(is_irreducible(&MonicPoly::x(f5())).unwrap());
        assert!(is_irreducible(&MonicPoly::x_plus(f5(), 3)).unwrap());
    }

    #[test]
    fn t_squared_is_not() {
        let t2 = MonicPoly::from_coeffs(f5(), vec![0, 0, 1]).unwrap();
        assert!(!is_irreducible(&t2).unwrap());
    }

    #[test]
    fn t_squared_plus_two() {
        // T² + 2 is irreducible over F_5 iff -2 = 3 is a non-square mod 5;
        // it is (squares are {1, 4}).
        let f = MonicPoly::from_coeffs(f5(), vec![2, 0, 1]).unwrap();
        assert!(is_irreducible(&f).unwrap());
    }

    #[test]
    fn units_are_a_domain_error() {
        assert!(is_irreducible(&MonicPoly::one(f5())).is_err());
    }

    /// Trial-division oracle: a monic polynomial of degree ≥ 1 is reducible
    /// iff some monic polynomial of degree in [1, deg/2] divides it.
    fn reducible_by_trial_division(f: &MonicPoly) -> bool {
        let n = f.degree();
        for d in 1..=n / 2 {
            for g in enumerate_monic(f.spec(), d) {
                if f.rem(g.as_poly()).unwrap().is_zero() {
                    return true;
                }
            }
        }
        false
    }

    #[test]
    fn agrees_with_trial_division_exhaustively() {
        // All monic polynomials of degree 1..=5 over F_5 (3905 of them).
        let spec = f5();
        let mut tester = IrreducibilityTester::new(spec);
        for n in 1..=5usize {
            for f in enumerate_monic(spec, n) {
                let fast = tester.test(&f);
                let slow = !reducible_by_trial_division(&f);
                assert_eq!(fast, slow, "disagreement at {f}");
            }
        }
    }

    #[test]
    fn agrees_with_trial_division_spot_q13() {
        let spec = FieldSpec::new(13).unwrap();
        let mut tester = IrreducibilityTester::new(spec);
        for n in [2usize, 4] {
            for (i, f) in enumerate_monic(spec, n).enumerate() {
                if i % 7 != 0 {
                    continue;
                }
                assert_eq!(tester.test(&f), !reducible_by_trial_division(&f));
            }
        }
    }

    #[test]
    fn first_irreducibles() {
        assert_eq!(first_irreducible(f5(), 1).unwrap(), MonicPoly::x(f5()));
        let q2 = first_irreducible(f5(), 2).unwrap();
        assert!(is_irreducible(&q2).unwrap());
        // Lexicographically first: T² + 2 (constants 0, 1 give reducible
        // T², T² + 1 = (T+2)(T+3)).
        assert_eq!(q2, MonicPoly::from_coeffs(f5(), vec![2, 0, 1]).unwrap());
    }

    #[test]
    fn prime_counts_small() {
        let spec = f5();
        assert_eq!(enumerate_primes(spec, 1).unwrap().count(), 5);
        // Degree 2: (q² - q)/2 = 10.
        assert_eq!(enumerate_primes(spec, 2).unwrap().count(), 10);
        // Degree 3: (q³ - q)/3 = 40.
        assert_eq!(enumerate_primes(spec, 3).unwrap().count(), 40);
    }
}
