use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::arith::{
    divisor_square_sum, is_irreducible, symbol_raw, Factorizer, IrreducibilityTester, SymbolCtx,
    SymbolScratch,
};
use crate::error::{Error, Result};
use crate::exact::QuadVal;
use crate::ffpoly::{enumerate_monic, monic_count, FieldSpec, MonicPoly};
use crate::lfunc::lpoly::LPolynomial;
use num_bigint::BigInt;

/// L(1/2, χ_P) held exactly as (X + Y·√q)/q^g with integer X, Y.
///
/// √q is irrational, so the pair is unique and equality (in particular,
/// vanishing) is an exact integer test. The even-degree coefficients of the
/// L-polynomial land in X, the odd-degree ones in Y.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CentralValue {
    x: i128,
    y: i128,
    genus: u32,
}

impl CentralValue {
    pub fn new(x: i128, y: i128, genus: u32) -> Self {
        CentralValue { x, y, genus }
    }

    pub fn x(&self) -> i128 {
        self.x
    }

    pub fn y(&self) -> i128 {
        self.y
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn is_zero(&self) -> bool {
        self.x == 0 && self.y == 0
    }

    pub fn to_f64(&self, q: u64) -> f64 {
        (self.x as f64 + self.y as f64 * (q as f64).sqrt()) / (q as f64).powi(self.genus as i32)
    }

    pub fn to_quad(&self, q: u64) -> QuadVal {
        let scale = BigInt::from(q).pow(self.genus);
        QuadVal::from_scaled(&BigInt::from(self.x), &BigInt::from(self.y), &scale)
    }

    /// Square, at scale q^(2g): (X² + qY²) + (2XY)·√q.
    pub fn square_parts(&self, q: u64) -> (i128, i128) {
        (
            self.x * self.x + q as i128 * self.y * self.y,
            2 * self.x * self.y,
        )
    }
}

/// Evaluate L(1/2) from a computed L-polynomial:
/// X = Σ_{n even} a_n·q^(g - n/2), Y = Σ_{n odd} a_n·q^(g - (n+1)/2).
pub fn central_value(l: &LPolynomial) -> CentralValue {
    let g = l.genus() as usize;
    let q = l.spec().q() as i128;
    let mut qpow = vec![1i128; g + 1];
    for k in 1..=g {
        qpow[k] = qpow[k - 1] * q;
    }
    let mut x = 0i128;
    let mut y = 0i128;
    for (n, &a) in l.coeffs().iter().enumerate() {
        if n % 2 == 0 {
            x += a as i128 * qpow[g - n / 2];
        } else {
            y += a as i128 * qpow[g - (n + 1) / 2];
        }
    }
    CentralValue::new(x, y, l.genus())
}

/// Plan-table entry: how to obtain χ_P(f) for one enumerated monic f.
#[derive(Debug, Clone, Copy)]
enum PlanEntry {
    Unit,
    /// Index into the flat prime list.
    Prime(u32),
    /// χ(f) = χ(prime[p]) · χ(cofactor), cofactor addressed by
    /// (degree, enumeration index).
    Composite {
        p: u32,
        c_deg: u8,
        c_idx: u32,
    },
}

/// Memory guard for the chi table (one entry per monic f of degree ≤ g).
const MAX_PLAN_SIZE: u128 = 1 << 28;

/// Precomputed evaluation plan for all χ_P(f) with deg f ≤ g, shared
/// read-only across primes (and across worker threads).
///
/// Per modulus P only the symbols of the few irreducibles of degree ≤ g are
/// evaluated; every composite χ value is one table-driven multiplication.
/// This is what makes q^g-cost half sums cheap inside q^(2g+1)-sized sweeps.
pub struct ChiPlan {
    spec: FieldSpec,
    genus: u32,
    ctx: SymbolCtx,
    /// entries[m][idx], m = 0..=g.
    entries: Vec<Vec<PlanEntry>>,
    /// Irreducibles of degree 1..=g, ascending (degree, index).
    primes: Vec<MonicPoly>,
    /// For even m: indices (within degree m) of perfect squares l².
    squares: Vec<Vec<u32>>,
    /// q^k for k = 0..=g.
    qpow: Vec<i128>,
}

fn index_of(coeffs: &[u64], degree: usize, q: u64) -> usize {
    let mut idx = 0usize;
    for i in (0..degree).rev() {
        idx = idx * q as usize + coeffs.get(i).copied().unwrap_or(0) as usize;
    }
    idx
}

impl ChiPlan {
    pub fn new(spec: FieldSpec, genus: u32) -> Result<Self> {
        let g = genus as usize;
        let mut size = 0u128;
        for m in 0..=g {
            size += monic_count(spec, m)?;
        }
        if size > MAX_PLAN_SIZE {
            return Err(Error::domain(format!(
                "chi table would hold {size} entries; genus {genus} is out of reach at q={}",
                spec.q()
            )));
        }
        let q = spec.q();
        let mut tester = IrreducibilityTester::new(spec);
        let mut primes: Vec<MonicPoly> = Vec::new();
        let mut entries: Vec<Vec<PlanEntry>> = Vec::with_capacity(g + 1);
        entries.push(vec![PlanEntry::Unit]);
        for m in 1..=g {
            let count = monic_count(spec, m)? as usize;
            entries.push(vec![PlanEntry::Unit; count]);
            let mut set = vec![false; count];
            // Composites first: smallest prime factor wins, iterating prime
            // degrees ascending and never overwriting.
            let mut product = Vec::new();
            for dp in 1..m {
                // Primes of degree dp were all collected in earlier rounds.
                for (pi, p) in primes.iter().enumerate() {
                    if p.degree() != dp {
                        continue;
                    }
                    for h in enumerate_monic(spec, m - dp) {
                        crate::ffpoly::poly::raw::mul(p.coeffs(), h.coeffs(), q, &mut product);
                        let idx = index_of(&product, m, q);
                        if !set[idx] {
                            set[idx] = true;
                            entries[m][idx] = PlanEntry::Composite {
                                p: pi as u32,
                                c_deg: (m - dp) as u8,
                                c_idx: index_of(h.coeffs(), m - dp, q) as u32,
                            };
                        }
                    }
                }
            }
            // Remaining slots: either degree-m primes or composites whose
            // smallest factor has degree m (impossible), so test and record.
            for (idx, f) in enumerate_monic(spec, m).enumerate() {
                if set[idx] {
                    continue;
                }
                if !tester.test(&f) {
                    return Err(Error::inconsistency(format!(
                        "chi plan left composite {f} unassigned"
                    )));
                }
                entries[m][idx] = PlanEntry::Prime(primes.len() as u32);
                primes.push(f);
            }
        }
        // Perfect squares of each even degree: squares of enumerated l.
        let mut squares = vec![Vec::new(); g + 1];
        let mut sq = Vec::new();
        for m in (0..=g).step_by(2) {
            for l in enumerate_monic(spec, m / 2) {
                crate::ffpoly::poly::raw::mul(l.coeffs(), l.coeffs(), q, &mut sq);
                squares[m].push(index_of(&sq, m, q) as u32);
            }
        }
        let mut qpow = vec![1i128; g + 1];
        for k in 1..=g {
            qpow[k] = qpow[k - 1] * q as i128;
        }
        Ok(ChiPlan {
            spec,
            genus,
            ctx: SymbolCtx::new(spec),
            entries,
            primes,
            squares,
            qpow,
        })
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn scratch(&self) -> ChiScratch {
        ChiScratch {
            chi: self.entries.iter().map(|e| vec![0i8; e.len()]).collect(),
            prime_chi: vec![0i8; self.primes.len()],
            sym: SymbolScratch::default(),
        }
    }

    /// Half-sum evaluation of L(1/2, χ_P) for an irreducible P of degree
    /// 2g+1. `p` is trusted to be prime here (the sweep filters first);
    /// the public wrapper validates.
    pub fn eval(&self, p: &MonicPoly, scratch: &mut ChiScratch) -> Result<HalfSum> {
        self.eval_coeffs(p.coeffs(), scratch)
    }

    /// Allocation-free form for the sweep's inner loop.
    pub(crate) fn eval_coeffs(&self, p: &[u64], scratch: &mut ChiScratch) -> Result<HalfSum> {
        let g = self.genus as usize;
        debug_assert_eq!(p.len(), 2 * g + 2);
        for (i, ell) in self.primes.iter().enumerate() {
            scratch.prime_chi[i] = symbol_raw(ell.coeffs(), p, &self.ctx, &mut scratch.sym);
            // deg ℓ ≤ g < deg P: the symbol can never vanish.
            debug_assert_ne!(scratch.prime_chi[i], 0);
        }
        scratch.chi[0][0] = 1;
        for m in 1..=g {
            let (lower, cur) = scratch.chi.split_at_mut(m);
            let row = &mut cur[0];
            for (idx, entry) in self.entries[m].iter().enumerate() {
                row[idx] = match *entry {
                    PlanEntry::Unit => unreachable!("degree ≥ 1 entries are assigned"),
                    PlanEntry::Prime(p) => scratch.prime_chi[p as usize],
                    PlanEntry::Composite { p, c_deg, c_idx } => {
                        scratch.prime_chi[p as usize] * lower[c_deg as usize][c_idx as usize]
                    }
                };
            }
        }

        let mut by_degree = vec![0i64; g + 1];
        let mut square_by_degree = vec![0i64; g + 1];
        for m in 0..=g {
            by_degree[m] = scratch.chi[m].iter().map(|&v| v as i64).sum();
            if m % 2 == 0 {
                square_by_degree[m] = self.squares[m]
                    .iter()
                    .map(|&idx| scratch.chi[m][idx as usize] as i64)
                    .sum();
            }
        }

        // Both sums of the half-sum formula share the per-degree totals; the
        // second sum just stops one degree earlier.
        let mut x = 0i128;
        let mut y = 0i128;
        for (n, &c) in by_degree.iter().enumerate() {
            let weight = if n < g { 2 } else { 1 } as i128;
            if n % 2 == 0 {
                x += weight * c as i128 * self.qpow[g - n / 2];
            } else {
                y += weight * c as i128 * self.qpow[g - (n + 1) / 2];
            }
        }

        // Exact square part: every χ_P(l²) is +1 because deg l ≤ g < deg P,
        // so each (sum, degree) pair contributes exactly 1. Computed from the
        // actual χ values as an end-to-end checksum.
        let mut square_part = 0i64;
        for n in (0..=g).step_by(2) {
            let weight = if n < g { 2 } else { 1 } as i64;
            let scale = self.qpow[n / 2] as i64;
            let contribution = weight * square_by_degree[n];
            if contribution % scale != 0 {
                return Err(Error::inconsistency(format!(
                    "square-part χ sum at degree {n} is not divisible by q^{}",
                    n / 2
                )));
            }
            square_part += contribution / scale;
        }

        Ok(HalfSum {
            value: CentralValue::new(x, y, self.genus),
            by_degree,
            square_part,
        })
    }
}

/// Per-worker scratch buffers for [`ChiPlan::eval`].
pub struct ChiScratch {
    chi: Vec<Vec<i8>>,
    prime_chi: Vec<i8>,
    sym: SymbolScratch,
}

/// Result of one half-sum evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfSum {
    pub value: CentralValue,
    /// c_n = Σ_{deg f = n} χ_P(f) for n = 0..=g.
    pub by_degree: Vec<i64>,
    /// The χ-free part of the value: (⌊g/2⌋+1) + (⌊(g-1)/2⌋+1) = g+1 when
    /// every χ_P(l²) is +1, recomputed here from the actual χ values.
    pub square_part: i64,
}

/// L(1/2, χ_P) by the exact half-sum formula
/// Σ_{n=0..g} Σ_{deg f₁ = n} χ_P(f₁)·q^(-n/2)
/// + Σ_{m=0..g-1} Σ_{deg f₂ = m} χ_P(f₂)·q^(-m/2).
///
/// This is the production evaluator (cost ~2·q^g, against q^(2g) for the
/// direct route).
pub fn halfsum_value(p: &MonicPoly) -> Result<CentralValue> {
    Ok(halfsum_full(p)?.value)
}

/// Half-sum evaluation including the per-degree diagnostics.
pub fn halfsum_full(p: &MonicPoly) -> Result<HalfSum> {
    let deg = p.degree();
    if deg % 2 == 0 {
        return Err(Error::domain("modulus must have odd degree"));
    }
    if !is_irreducible(p)? {
        return Err(Error::domain(format!("{p} is not irreducible")));
    }
    let genus = ((deg - 1) / 2) as u32;
    let plan = ChiPlan::new(p.spec(), genus)?;
    let mut scratch = plan.scratch();
    plan.eval(p, &mut scratch)
}

/// Both sides of the exact divisor-weighted representation of L(1/2)²,
/// evaluated at scale q^(2g).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SecondMomentIdentity {
    pub genus: u32,
    /// Σ_{deg f ≤ 2g} χd/√|f| + Σ_{deg f ≤ 2g-1} χd/√|f| as (x + y√q)/q^(2g).
    pub divisor_route: (i128, i128),
    /// halfsum_value(P)² as (X² + qY², 2XY)/q^(2g).
    pub squared_central: (i128, i128),
    /// The perfect-square f terms of the divisor route (χ-free), same scale.
    pub square_part: (i128, i128),
    /// π-independent closed form of that square part:
    /// Σ_{m≤g} q^(-m)·D₂(m) + Σ_{m≤g-1} q^(-m)·D₂(m), scaled by q^(2g).
    pub square_part_closed_form: (i128, i128),
}

impl SecondMomentIdentity {
    pub fn holds(&self) -> bool {
        self.divisor_route == self.squared_central
            && self.square_part == self.square_part_closed_form
    }
}

/// Check the exact identity L(1/2, χ_P)² = divisor-weighted double sum.
///
/// Cost q^(2g): this is a sampled oracle, never the sweep path.
pub fn second_moment_identity(p: &MonicPoly) -> Result<SecondMomentIdentity> {
    let spec = p.spec();
    let deg = p.degree();
    if deg % 2 == 0 {
        return Err(Error::domain("modulus must have odd degree"));
    }
    if !is_irreducible(p)? {
        return Err(Error::domain(format!("{p} is not irreducible")));
    }
    let genus = ((deg - 1) / 2) as u32;
    let g = genus as usize;
    if monic_count(spec, 2 * g)? > (1 << 24) {
        return Err(Error::domain(format!(
            "the divisor-weighted sum enumerates q^(2g) = q^{} polynomials; \
             use genus ≤ 2 for this oracle",
            2 * g
        )));
    }

    let q = spec.q() as i128;
    let mut qpow = vec![1i128; 2 * g + 1];
    for k in 1..=2 * g {
        qpow[k] = qpow[k - 1] * q;
    }

    let ctx = SymbolCtx::new(spec);
    let mut sym = SymbolScratch::default();
    let mut factorizer = Factorizer::new(spec);
    let mut x = 0i128;
    let mut y = 0i128;
    let mut sq_x = 0i128;
    for n in 0..=2 * g {
        let weight = if n < 2 * g { 2 } else { 1 } as i128;
        let mut chi_d = 0i128;
        let mut chi_d_squares = 0i128;
        for f in enumerate_monic(spec, n) {
            let chi = symbol_raw(f.coeffs(), p.coeffs(), &ctx, &mut sym) as i128;
            if chi == 0 {
                continue;
            }
            let fac = factorizer.factorize(&f)?;
            let d = fac.divisor_count() as i128;
            chi_d += chi * d;
            if fac.is_perfect_square() {
                chi_d_squares += chi * d;
            }
        }
        if n % 2 == 0 {
            x += weight * chi_d * qpow[2 * g - n / 2];
            sq_x += weight * chi_d_squares * qpow[2 * g - n / 2];
        } else {
            y += weight * chi_d * qpow[2 * g - (n + 1) / 2];
        }
    }

    // Closed form of the square part: squares have degree 2m with l of
    // degree m, d(l²) summed by divisor_square_sum.
    let mut closed = 0i128;
    for m in 0..=g {
        let weight = if m < g { 2 } else { 1 } as i128;
        let d2: BigUint = divisor_square_sum(spec, m);
        let d2 = d2
            .to_i128()
            .ok_or_else(|| Error::inconsistency("divisor square sum overflow".to_string()))?;
        closed += weight * d2 * qpow[2 * g - m];
    }

    let central = halfsum_value(p)?;
    let squared = central.square_parts(spec.q());

    Ok(SecondMomentIdentity {
        genus,
        divisor_route: (x, y),
        squared_central: squared,
        square_part: (sq_x, 0),
        square_part_closed_form: (closed, 0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::enumerate_primes;
    use crate::lfunc::lpoly::lpoly_direct;

    fn f5() -> FieldSpec {
        FieldSpec::new(5).unwrap()
    }

    #[test]
    fn genus_zero_central_value_is_one() {
        let p = MonicPoly::x_plus(f5(), 3);
        let v = halfsum_value(&p).unwrap();
        assert_eq!((v.x(), v.y(), v.genus()), (1, 0, 0));
        assert_eq!(v.to_f64(5), 1.0);
        assert!(!v.is_zero());
    }

    #[test]
    fn central_value_is_linear_in_coefficients() {
        let spec = f5();
        let p = enumerate_primes(spec, 3).unwrap().next().unwrap();
        let l = lpoly_direct(&p, true).unwrap();
        let v = central_value(&l);
        // Doubling every a_n doubles (X, Y). Build the doubled evaluation
        // by hand from the coefficient formula.
        let g = l.genus() as usize;
        let q = 5i128;
        let mut x2 = 0i128;
        let mut y2 = 0i128;
        for (n, &a) in l.coeffs().iter().enumerate() {
            let a = 2 * a as i128;
            let mut w = 1i128;
            if n % 2 == 0 {
                for _ in 0..(g - n / 2) {
                    w *= q;
                }
                x2 += a * w;
            } else {
                for _ in 0..(g - (n + 1) / 2) {
                    w *= q;
                }
                y2 += a * w;
            }
        }
        assert_eq!((x2, y2), (2 * v.x(), 2 * v.y()));
    }

    #[test]
    fn halfsum_matches_direct_route() {
        let spec = f5();
        for p in enumerate_primes(spec, 3).unwrap().take(10) {
            let via_halfsum = halfsum_value(&p).unwrap();
            let via_direct = central_value(&lpoly_direct(&p, true).unwrap());
            assert_eq!(via_halfsum, via_direct, "P = {p}");
        }
        for p in enumerate_primes(spec, 5).unwrap().take(3) {
            let via_halfsum = halfsum_value(&p).unwrap();
            let via_direct = central_value(&lpoly_direct(&p, true).unwrap());
            assert_eq!(via_halfsum, via_direct, "P = {p}");
        }
    }

    #[test]
    fn square_part_is_genus_plus_one() {
        let spec = f5();
        for n in [1usize, 3, 5] {
            let g = (n - 1) / 2;
            for p in enumerate_primes(spec, n).unwrap().take(5) {
                let full = halfsum_full(&p).unwrap();
                assert_eq!(full.square_part, g as i64 + 1, "P = {p}");
            }
        }
    }

    #[test]
    fn second_moment_identity_genus_zero() {
        let p = MonicPoly::x(f5());
        let id = second_moment_identity(&p).unwrap();
        assert_eq!(id.divisor_route, (1, 0));
        assert_eq!(id.squared_central, (1, 0));
        assert!(id.holds());
    }

    #[test]
    fn second_moment_identity_small_genus() {
        let spec = f5();
        for p in enumerate_primes(spec, 3).unwrap().take(8) {
            let id = second_moment_identity(&p).unwrap();
            assert!(id.holds(), "P = {p}: {id:?}");
            // g = 1: closed form is q²·(1 + 1) + q·D₂(1) = 25·2 + 5·15 = 125.
            assert_eq!(id.square_part_closed_form.0, 125);
        }
    }

    #[test]
    fn plan_eval_matches_standalone_halfsum() {
        let spec = f5();
        let plan = ChiPlan::new(spec, 2).unwrap();
        let mut scratch = plan.scratch();
        for p in enumerate_primes(spec, 5).unwrap().take(6) {
            let via_plan = plan.eval(&p, &mut scratch).unwrap();
            let standalone = halfsum_full(&p).unwrap();
            assert_eq!(via_plan, standalone);
        }
    }
}
