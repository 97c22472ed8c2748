//! The exact-identity suite behind `verify identities`: prime counts against
//! enumeration, divisor-sum identities, residue-symbol cross-checks, and the
//! measured character-sum cancellation ratios.

use num_bigint::{BigInt, BigUint};
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::time::Instant;

use crate::arith::count::{count_primes, prime_count_envelope_holds};
use crate::arith::factor::{divisor_square_sum, Factorizer};
use crate::arith::irreducible::IrreducibilityTester;
use crate::arith::symbol::{
    char_sum_over_primes, residue_symbol, residue_symbol_euler, CharSum, Symbol,
};
use crate::error::Result;
use crate::ffpoly::{enumerate_monic, monic_count, FieldSpec, MonicPoly};

/// Largest normalized ratio |S|·n/(deg f·q^(n/2)) observed on the reference
/// configuration (q = 5, all 25 non-square squarefree monic f of degree ≤ 2),
/// pinned from the first oracle run; the regression guard allows 3× headroom.
/// The underlying bound only promises "≪", so these are measured envelopes,
/// not asserted constants.
///
/// At odd prime degrees n ≥ 3 the sums vanish *exactly* for every f here:
/// writing (f/P) = χ_{q^n}(f(θ)) over the roots θ of P and grouping F_{q^n}
/// by exact degree, odd n restricts χ nontrivially to every subfield, and
/// the complete sums Σ_{θ∈F_{q^m}} χ(f(θ)) are 0 (deg f = 1) or -1
/// (deg f = 2 squarefree) independently of m, so the exact-degree sums
/// telescope to zero. The pinned odd maximum is therefore 0; reproducing it
/// is a sharp end-to-end test of the symbol pipeline.
pub const CHAR_SUM_PINNED_MAX_ODD_Q5: f64 = 0.0;
/// Even prime degrees carry the real measurement (subfield terms survive);
/// first-run maximum over n ∈ {2, 4, 6}.
pub const CHAR_SUM_PINNED_MAX_EVEN_Q5: f64 = 0.9600000000000001;

/// Enumeration ceiling for the suite's exhaustive passes.
const SUITE_ENUM_CAP: u128 = 6_000_000;

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentitySuiteReport {
    pub q: u64,
    pub max_degree: usize,
    pub elapsed_seconds: f64,
    pub checks: Vec<CheckResult>,
    pub char_sums: Vec<CharSum>,
    pub all_pass: bool,
}

fn push(checks: &mut Vec<CheckResult>, name: impl Into<String>, pass: bool, detail: String) {
    checks.push(CheckResult {
        name: name.into(),
        pass,
        detail,
    });
}

/// Run the whole identity suite at one q up to `max_degree`.
pub fn identity_suite(spec: FieldSpec, max_degree: usize) -> Result<IdentitySuiteReport> {
    let start = Instant::now();
    let mut checks = Vec::new();

    check_prime_counts(spec, max_degree, &mut checks)?;
    check_divisor_sums(spec, max_degree.min(6), &mut checks)?;
    check_factorize_reconstruction(spec, max_degree.min(5), &mut checks)?;
    check_symbol_agreement(spec, max_degree.min(7), &mut checks)?;
    let char_sums = check_char_sums(spec, &mut checks)?;

    let all_pass = checks.iter().all(|c| c.pass);
    Ok(IdentitySuiteReport {
        q: spec.q(),
        max_degree,
        elapsed_seconds: start.elapsed().as_secs_f64(),
        checks,
        char_sums,
        all_pass,
    })
}

/// π_A(n) by the Möbius/Gauss formula versus exhaustive enumeration, and the
/// |π_A(n) - q^n/n| ≤ 2·q^(n/2)/n envelope, all exact.
fn check_prime_counts(
    spec: FieldSpec,
    max_degree: usize,
    checks: &mut Vec<CheckResult>,
) -> Result<()> {
    let mut tester = IrreducibilityTester::new(spec);
    let mut enumerated_up_to = 0;
    let mut formula_vs_enum_ok = true;
    let mut envelope_ok = true;
    for n in 1..=max_degree {
        let pi = count_primes(spec, n)?;
        if !prime_count_envelope_holds(spec, n, &pi) {
            envelope_ok = false;
        }
        if monic_count(spec, n)? <= SUITE_ENUM_CAP {
            let mut counted = BigUint::ZERO;
            for f in enumerate_monic(spec, n) {
                if tester.test(&f) {
                    counted += 1u32;
                }
            }
            if counted != pi {
                formula_vs_enum_ok = false;
            }
            enumerated_up_to = n;
        }
    }
    push(
        checks,
        "prime count formula = enumeration",
        formula_vs_enum_ok,
        format!("exhaustive for n ≤ {enumerated_up_to}"),
    );
    push(
        checks,
        "prime count envelope |π - q^n/n| ≤ 2q^(n/2)/n",
        envelope_ok,
        format!("n ≤ {max_degree}"),
    );
    Ok(())
}

/// Σ d(f) = (n+1)·q^n and Σ d(f²) = closed form, by brute-force
/// factorization; plus the exact envelope |Σ d(f²) - (1-1/q)·q^n·n²/2|
/// ≤ 2·q^n·n.
fn check_divisor_sums(
    spec: FieldSpec,
    max_degree: usize,
    checks: &mut Vec<CheckResult>,
) -> Result<()> {
    let q = BigInt::from(spec.q());
    let mut fz = Factorizer::new(spec);
    let mut d_ok = true;
    let mut d2_ok = true;
    let mut envelope_ok = true;
    for n in 0..=max_degree {
        let mut sum_d = BigInt::ZERO;
        let mut sum_d2 = BigInt::ZERO;
        for f in enumerate_monic(spec, n) {
            let fac = fz.factorize(&f)?;
            sum_d += fac.divisor_count();
            sum_d2 += fac.divisor_count_of_square();
        }
        let want_d = BigInt::from(n as u64 + 1) * q.pow(n as u32);
        if sum_d != want_d {
            d_ok = false;
        }
        let want_d2 = BigInt::from(divisor_square_sum(spec, n));
        if sum_d2 != want_d2 {
            d2_ok = false;
        }
        if n >= 2 {
            // Main term (1/2)(1 - 1/q)·q^n·n² = (q-1)·q^(n-1)·n²/2, integral
            // since q is odd. The exact difference is
            // q^n·(3n+2)/2 + q^(n-1)·n/2 ≤ (1.5 + 1/n + 1/(2q))·q^n·n, so 3
            // is a safe envelope factor.
            let main: BigInt =
                (&q - 1) * q.pow(n as u32 - 1) * BigInt::from((n * n) as u64) / BigInt::from(2);
            let bound = BigInt::from(3u32) * q.pow(n as u32) * BigInt::from(n as u64);
            if (want_d2 - main).abs() > bound {
                envelope_ok = false;
            }
        }
    }
    push(
        checks,
        "Σ d(f) = (n+1)·q^n",
        d_ok,
        format!("brute force for n ≤ {max_degree}"),
    );
    push(
        checks,
        "Σ d(f²) closed form = brute force",
        d2_ok,
        format!("n ≤ {max_degree}"),
    );
    push(
        checks,
        "Σ d(f²) within 3·q^n·n of (1-1/q)·q^n·n²/2",
        envelope_ok,
        format!("2 ≤ n ≤ {max_degree}"),
    );
    Ok(())
}

/// factorize · product = identity, exhaustively up to the given degree.
fn check_factorize_reconstruction(
    spec: FieldSpec,
    max_degree: usize,
    checks: &mut Vec<CheckResult>,
) -> Result<()> {
    let mut fz = Factorizer::new(spec);
    let mut ok = true;
    let mut total = 0u64;
    for n in 1..=max_degree {
        if monic_count(spec, n)? > SUITE_ENUM_CAP {
            break;
        }
        for f in enumerate_monic(spec, n) {
            if fz.factorize(&f)?.product(spec)? != f {
                ok = false;
            }
            total += 1;
        }
    }
    push(
        checks,
        "factorize reconstructs its input",
        ok,
        format!("exhaustive on {total} polynomials (deg ≤ {max_degree})"),
    );
    Ok(())
}

/// Fast symbol ≡ Euler-criterion symbol on 1000 seeded pairs, plus symbol
/// symmetry (A/B) = (B/A) on every coprime monic pair encountered.
fn check_symbol_agreement(
    spec: FieldSpec,
    max_prime_degree: usize,
    checks: &mut Vec<CheckResult>,
) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xFF1D);
    let mut tester = IrreducibilityTester::new(spec);
    let q = spec.q();
    let mut agreement_ok = true;
    let mut symmetry_ok = true;
    let mut symmetric_pairs = 0u64;
    let mut done = 0;
    while done < 1000 {
        let pd = rng.gen_range(1..=max_prime_degree);
        let mut coeffs: Vec<u64> = (0..pd).map(|_| rng.gen_range(0..q)).collect();
        coeffs.push(1);
        let p = MonicPoly::from_coeffs(spec, coeffs).unwrap();
        if !tester.test(&p) {
            continue;
        }
        let ad = rng.gen_range(1..=max_prime_degree);
        let mut coeffs: Vec<u64> = (0..ad).map(|_| rng.gen_range(0..q)).collect();
        coeffs.push(1);
        let a = MonicPoly::from_coeffs(spec, coeffs).unwrap();

        let fast = residue_symbol(a.as_poly(), &p)?;
        let slow = residue_symbol_euler(a.as_poly(), &p)?;
        if fast != slow {
            agreement_ok = false;
        }
        let flipped = residue_symbol(p.as_poly(), &a)?;
        if fast == Symbol::Zero {
            if flipped != Symbol::Zero {
                symmetry_ok = false;
            }
        } else {
            symmetric_pairs += 1;
            if flipped != fast {
                symmetry_ok = false;
            }
        }
        done += 1;
    }
    push(
        checks,
        "residue_symbol = Euler criterion",
        agreement_ok,
        format!("1000 seeded pairs, prime degree ≤ {max_prime_degree}"),
    );
    push(
        checks,
        "symbol symmetry (A/B) = (B/A) on coprime pairs",
        symmetry_ok,
        format!("{symmetric_pairs} coprime pairs"),
    );
    Ok(())
}

/// Character sums over primes for every non-square squarefree monic f of
/// degree ≤ 2, at prime degrees n = 2..=7 (capped by enumeration cost).
/// Ratios are recorded; on the reference q = 5 configuration the odd grid
/// n ∈ {3, 5, 7} and the even grid n ∈ {2, 4, 6} must each stay within 3×
/// of their pinned maxima.
fn check_char_sums(spec: FieldSpec, checks: &mut Vec<CheckResult>) -> Result<Vec<CharSum>> {
    let mut fz = Factorizer::new(spec);
    let mut inputs: Vec<MonicPoly> = Vec::new();
    for deg in 1..=2usize {
        for f in enumerate_monic(spec, deg) {
            let fac = fz.factorize(&f)?;
            let squarefree = fac.factors().iter().all(|(_, e)| *e == 1);
            if squarefree && !fac.is_perfect_square() {
                inputs.push(f);
            }
        }
    }
    let mut reports = Vec::new();
    let mut all_finite = true;
    let mut max_odd = 0f64;
    let mut max_even = 0f64;
    let mut odd_used = Vec::new();
    let mut even_used = Vec::new();
    for n in 2usize..=7 {
        if monic_count(spec, n)? > SUITE_ENUM_CAP {
            continue;
        }
        if n % 2 == 1 {
            odd_used.push(n);
        } else {
            even_used.push(n);
        }
        for f in &inputs {
            let report = char_sum_over_primes(f, n)?;
            if !report.normalized.is_finite() {
                all_finite = false;
            }
            if n % 2 == 1 {
                max_odd = max_odd.max(report.normalized);
            } else {
                max_even = max_even.max(report.normalized);
            }
            reports.push(report);
        }
    }
    push(
        checks,
        "character-sum ratios finite",
        all_finite,
        format!(
            "{} sums over prime degrees {:?}∪{:?}, max odd {:.6}, max even {:.6}",
            reports.len(),
            odd_used,
            even_used,
            max_odd,
            max_even
        ),
    );
    if spec.q() == 5 && odd_used == [3, 5, 7] {
        let pass = max_odd <= 3.0 * CHAR_SUM_PINNED_MAX_ODD_Q5;
        push(
            checks,
            "character-sum odd-degree regression (q=5)",
            pass,
            format!(
                "max {:.6} vs pinned {:.6} (exact vanishing at odd n ≥ 3)",
                max_odd, CHAR_SUM_PINNED_MAX_ODD_Q5
            ),
        );
    }
    if spec.q() == 5 && even_used == [2, 4, 6] {
        let pass = max_even <= 3.0 * CHAR_SUM_PINNED_MAX_EVEN_Q5;
        push(
            checks,
            "character-sum even-degree regression (q=5)",
            pass,
            format!(
                "max {:.6} vs pinned {:.6} (3× headroom)",
                max_even, CHAR_SUM_PINNED_MAX_EVEN_Q5
            ),
        );
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_passes_quickly() {
        let spec = FieldSpec::new(5).unwrap();
        let report = identity_suite(spec, 4).unwrap();
        assert!(report.all_pass, "{report:#?}");
        assert!(!report.checks.is_empty());
        // Degree cap 4 skips the n = 5, 7 char-sum grid, so no regression row.
        assert!(report
            .checks
            .iter()
            .any(|c| c.name.contains("prime count formula")));
    }
}
