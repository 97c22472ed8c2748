use crate::arith::{is_irreducible, SymbolCtx, SymbolScratch};
use crate::arith::symbol_raw;
use crate::error::{Error, Result};
use crate::ffpoly::{enumerate_monic, monic_count, FieldSpec, MonicPoly};
use crate::lfunc::points::PointCounts;

/// Enumeration budget guard: direct coefficient computation walks q^(2g)
/// polynomials and must stay inside exact i64 coefficient arithmetic.
const MAX_DIRECT_ENUM: u128 = 1 << 40;

/// The L-polynomial of χ_P in u = q^(-s): integer coefficients a_0..a_{2g}
/// for a prime modulus P of odd degree 2g+1.
///
/// Invariants: a_0 = 1, the degree is exactly 2g, and the functional
/// equation a_n = q^(n-g)·a_{2g-n} holds. All reciprocal roots have modulus
/// √q; that is checked separately as a numerical diagnostic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LPolynomial {
    spec: FieldSpec,
    modulus: MonicPoly,
    genus: u32,
    coeffs: Vec<i64>,
}

impl LPolynomial {
    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn modulus(&self) -> &MonicPoly {
        &self.modulus
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    /// a_0..a_{2g}, low-to-high in u.
    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub(crate) fn from_parts(
        spec: FieldSpec,
        modulus: MonicPoly,
        genus: u32,
        coeffs: Vec<i64>,
    ) -> Result<Self> {
        let l = LPolynomial {
            spec,
            modulus,
            genus,
            coeffs,
        };
        l.validate()?;
        Ok(l)
    }

    /// Check the structural invariants exactly.
    pub fn validate(&self) -> Result<()> {
        let g = self.genus as usize;
        if self.coeffs.len() != 2 * g + 1 {
            return Err(Error::inconsistency(format!(
                "L-polynomial for genus {g} must have 2g+1 = {} coefficients, got {}",
                2 * g + 1,
                self.coeffs.len()
            )));
        }
        if self.coeffs[0] != 1 {
            return Err(Error::inconsistency(format!(
                "a_0 must be 1, got {}",
                self.coeffs[0]
            )));
        }
        self.check_functional_equation()?;
        Ok(())
    }

    /// a_n = q^(n-g)·a_{2g-n} for every n.
    pub fn check_functional_equation(&self) -> Result<()> {
        let g = self.genus as usize;
        let q = self.spec.q() as i128;
        for n in g..=2 * g {
            let mut expected = self.coeffs[2 * g - n] as i128;
            for _ in 0..(n - g) {
                expected *= q;
            }
            if self.coeffs[n] as i128 != expected {
                return Err(Error::inconsistency(format!(
                    "functional equation fails at n={n}: a_n={} but q^(n-g)·a_(2g-n)={expected}",
                    self.coeffs[n]
                )));
            }
        }
        Ok(())
    }

    /// Power sums S_k = Σ_j α_j^k of the reciprocal roots, from the
    /// coefficients via the Newton recurrences; exact integers.
    pub fn power_sums(&self, max_k: usize) -> Vec<i128> {
        let d = 2 * self.genus as usize;
        let a: Vec<i128> = self.coeffs.iter().map(|&c| c as i128).collect();
        let mut s = vec![0i128; max_k + 1];
        for k in 1..=max_k {
            let mut acc = 0i128;
            for i in 1..k.min(d + 1) {
                acc += a[i] * s[k - i];
            }
            s[k] = if k <= d { -(k as i128) * a[k] - acc } else { -acc };
        }
        s
    }

    /// Point counts implied by the polynomial: N_n = q^n + 1 - S_n.
    pub fn implied_counts(&self, max_n: usize) -> Result<PointCounts> {
        let s = self.power_sums(max_n);
        let q = self.spec.q() as i128;
        let mut counts = Vec::with_capacity(max_n);
        let mut qn = 1i128;
        for (n, s_n) in s.iter().enumerate().take(max_n + 1).skip(1) {
            qn *= q;
            let v = qn + 1 - s_n;
            if v < 0 {
                return Err(Error::inconsistency(format!(
                    "implied point count N_{n} is negative"
                )));
            }
            counts.push(v as u64);
        }
        PointCounts::from_counts(self.spec, self.modulus.clone(), self.genus, counts)
    }
}

fn validate_modulus(p: &MonicPoly) -> Result<u32> {
    let deg = p.degree();
    if deg % 2 == 0 {
        return Err(Error::domain(format!(
            "modulus must have odd degree, got degree {deg}"
        )));
    }
    if !is_irreducible(p)? {
        return Err(Error::domain(format!("modulus {p} is not irreducible")));
    }
    Ok(((deg - 1) / 2) as u32)
}

/// Coefficients by direct character-sum enumeration:
/// a_n = Σ_{f monic, deg f = n} χ_P(f).
///
/// With `full_enumeration` every degree up to 2g is summed and the functional
/// equation is *checked*; otherwise degrees above g are *filled in* from it.
/// Cost is q^(2g) (full) or ~q^g (half): this is the small-genus oracle, not
/// the sweep evaluator.
pub fn lpoly_direct(p: &MonicPoly, full_enumeration: bool) -> Result<LPolynomial> {
    let spec = p.spec();
    let genus = validate_modulus(p)?;
    let g = genus as usize;
    let top = if full_enumeration { 2 * g } else { g };
    if monic_count(spec, top)? > MAX_DIRECT_ENUM {
        return Err(Error::domain(format!(
            "direct enumeration would visit q^{top} polynomials; choose a smaller genus"
        )));
    }

    let ctx = SymbolCtx::new(spec);
    let mut scratch = SymbolScratch::default();
    let mut coeffs = vec![0i64; 2 * g + 1];
    coeffs[0] = 1;
    for (n, coeff) in coeffs.iter_mut().enumerate().take(top + 1).skip(1) {
        let mut acc = 0i64;
        for f in enumerate_monic(spec, n) {
            // χ_P(f) = (P/f) = (f/P): deg f < deg P keeps the pair coprime
            // and q ≡ 1 (mod 4) kills the reciprocity sign.
            acc += symbol_raw(f.coeffs(), p.coeffs(), &ctx, &mut scratch) as i64;
        }
        *coeff = acc;
    }
    if !full_enumeration {
        let q = spec.q() as i128;
        for n in g + 1..=2 * g {
            let mut v = coeffs[2 * g - n] as i128;
            for _ in 0..(n - g) {
                v *= q;
            }
            coeffs[n] = i64::try_from(v).map_err(|_| {
                Error::inconsistency("functional-equation fill overflowed i64".to_string())
            })?;
        }
    }
    LPolynomial::from_parts(spec, p.clone(), genus, coeffs)
}

/// Coefficients from point counts N_1..N_g over F_{q^n}, by converting the
/// power sums S_n = q^n + 1 - N_n into coefficients with the Newton
/// recurrence k·a_k = -Σ_{i=1..k} S_i·a_{k-i}; the division by k must be
/// exact, anything else is a consistency failure. Degrees above g come from
/// the functional equation.
pub fn lpoly_from_counts(counts: &PointCounts, genus: u32) -> Result<LPolynomial> {
    let spec = counts.spec();
    let g = genus as usize;
    if counts.genus() != genus {
        return Err(Error::domain(format!(
            "point counts are for genus {}, requested genus {genus}",
            counts.genus()
        )));
    }
    if counts.len() < g {
        return Err(Error::domain(format!(
            "need N_1..N_{g} but only {} counts are available",
            counts.len()
        )));
    }
    let q = spec.q() as i128;
    let mut s = vec![0i128; g + 1];
    let mut qn = 1i128;
    for n in 1..=g {
        qn *= q;
        s[n] = qn + 1 - counts.get(n).unwrap() as i128;
    }
    let mut a = vec![0i128; 2 * g + 1];
    a[0] = 1;
    for k in 1..=g {
        let mut acc = 0i128;
        for i in 1..=k {
            acc += s[i] * a[k - i];
        }
        if acc % k as i128 != 0 {
            return Err(Error::inconsistency(format!(
                "Newton recurrence gave a non-integer a_{k} (sum {acc} not divisible by {k}); \
                 the point counts are wrong"
            )));
        }
        a[k] = -acc / k as i128;
    }
    for n in g + 1..=2 * g {
        let mut v = a[2 * g - n];
        for _ in 0..(n - g) {
            v *= q;
        }
        a[n] = v;
    }
    let coeffs: Vec<i64> = a
        .iter()
        .map(|&v| i64::try_from(v))
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::inconsistency("L-coefficient overflowed i64".to_string()))?;
    LPolynomial::from_parts(spec, counts.curve().clone(), genus, coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::enumerate_primes;

    fn f5() -> FieldSpec {
        FieldSpec::new(5).unwrap()
    }

    fn first_prime_of_degree(spec: FieldSpec, n: usize) -> MonicPoly {
        enumerate_primes(spec, n).unwrap().next().unwrap()
    }

    #[test]
    fn genus_zero_is_trivial() {
        let p = MonicPoly::x(f5());
        let l = lpoly_direct(&p, true).unwrap();
        assert_eq!(l.genus(), 0);
        assert_eq!(l.coeffs(), &[1]);
    }

    #[test]
    fn rejects_bad_moduli() {
        let spec = f5();
        // Even degree.
        let even = MonicPoly::from_coeffs(spec, vec![2, 0, 1]).unwrap();
        assert!(lpoly_direct(&even, false).is_err());
        // Reducible odd degree: T³.
        let t3 = MonicPoly::from_coeffs(spec, vec![0, 0, 0, 1]).unwrap();
        assert!(lpoly_direct(&t3, false).is_err());
    }

    #[test]
    fn full_enumeration_matches_half_fill() {
        // Exhaustive χ sums over 5 + 25 (+125 + 625) polynomials per degree.
        let spec = f5();
        for p in enumerate_primes(spec, 3).unwrap().take(6) {
            let full = lpoly_direct(&p, true).unwrap();
            let half = lpoly_direct(&p, false).unwrap();
            assert_eq!(full, half, "P = {p}");
        }
        let p5 = first_prime_of_degree(spec, 5);
        assert_eq!(
            lpoly_direct(&p5, true).unwrap(),
            lpoly_direct(&p5, false).unwrap()
        );
    }

    #[test]
    fn top_coefficient_is_q_to_g() {
        let spec = f5();
        for p in enumerate_primes(spec, 3).unwrap().take(4) {
            let l = lpoly_direct(&p, false).unwrap();
            assert_eq!(*l.coeffs().last().unwrap(), 5); // q^g, g = 1
        }
        let p5 = first_prime_of_degree(spec, 5);
        let l = lpoly_direct(&p5, false).unwrap();
        assert_eq!(*l.coeffs().last().unwrap(), 25);
    }

    #[test]
    fn power_sum_round_trip() {
        let spec = f5();
        let p = first_prime_of_degree(spec, 5);
        let l = lpoly_direct(&p, true).unwrap();
        // Rebuild the polynomial from its own implied counts.
        let counts = l.implied_counts(2).unwrap();
        let back = lpoly_from_counts(&counts, 2).unwrap();
        assert_eq!(back, l);
    }

    #[test]
    fn from_counts_genus_zero_ignores_counts() {
        let spec = f5();
        let p = MonicPoly::x_plus(spec, 2);
        let counts = PointCounts::from_counts(spec, p, 0, vec![]).unwrap();
        let l = lpoly_from_counts(&counts, 0).unwrap();
        assert_eq!(l.coeffs(), &[1]);
    }
}
