use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{count_primes, divisor_square_sum};
use crate::error::{Error, Result};
use crate::exact::{fmt_f64_15, quad_ratio_ceil, DecInt, DecRatio, QuadJson, QuadVal};
use crate::ffpoly::FieldSpec;
use crate::moments::accumulator::MomentAccumulator;

/// Square/non-square decomposition of the first moment.
///
/// The square part is χ-free: every perfect-square f of degree ≤ g
/// contributes +1 per appearance, so per prime it is exactly
/// (⌊g/2⌋+1) + (⌊(g-1)/2⌋+1) = g+1, and in aggregate (g+1)·π_A(2g+1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FirstMomentSplit {
    pub square_part: DecInt,
    pub sum1_square_part: DecInt,
    pub sum2_square_part: DecInt,
    pub nonsquare_part: QuadJson,
    pub nonsquare_float: f64,
    /// |nonsquare| / (q^(3g/2)·g/(2g+1)); undefined at g = 0 where the
    /// non-square part is empty.
    pub nonsquare_normalized: Option<f64>,
    pub sum1_nonsquare: QuadJson,
    pub sum2_nonsquare: QuadJson,
}

/// Square/non-square decomposition of the second moment. The square part is
/// the exact rational π_A(2g+1)·(Σ_{m≤g} q^(-m)·D₂(m) + Σ_{m≤g-1} q^(-m)·D₂(m))
/// with D₂(m) = Σ_{deg l = m} d(l²); the non-square part is the exact
/// remainder.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SecondMomentSplit {
    pub square_part: DecRatio,
    pub square_part_float: f64,
    pub nonsquare_part: QuadJson,
    pub nonsquare_float: f64,
    /// |nonsquare| / (|P|·g); undefined at g = 0.
    pub nonsquare_normalized: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HigherMoment {
    pub k: u32,
    pub value: QuadJson,
    pub float: f64,
}

/// Complete record of one (q, g) sweep.
///
/// Exact fields are decimal strings or num/den strings; floats are derived
/// from them and rendered at 15 significant digits. Wall-clock and worker
/// count stay out of the serialized form so that reports are byte-identical
/// across resumes and worker counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub q: u64,
    pub genus: u32,
    pub degree: u32,
    /// |P| = q^(2g+1).
    pub norm_p: DecInt,
    pub prime_count: u64,
    pub prime_count_formula: DecInt,

    pub sum_x: DecInt,
    pub sum_y: DecInt,
    pub sum_sq_a: DecInt,
    pub sum_sq_b: DecInt,
    pub chi_by_degree: Vec<DecInt>,
    pub square_part_checksum: DecInt,

    pub s1_unweighted: QuadJson,
    pub s1_unweighted_float: f64,
    pub s1_weighted: QuadJson,
    pub s1_weighted_float: f64,
    pub m1: DecInt,
    pub m1_float: f64,
    pub d1: QuadJson,
    pub d1_float: f64,
    /// D1 / |P|^(3/4).
    pub d1_normalized: f64,
    pub s1_over_m1: f64,
    pub first_moment_split: FirstMomentSplit,

    pub s2: QuadJson,
    pub s2_float: f64,
    pub m2: DecRatio,
    pub m2_float: f64,
    pub d2: QuadJson,
    pub d2_float: f64,
    /// D2 / (|P|·(2g+1)).
    pub d2_normalized: f64,
    pub s2_over_m2: f64,
    pub second_moment_split: SecondMomentSplit,

    pub nonvanishing_count: u64,
    /// nonvanishing·(2g+1)²/|P|.
    pub nonvanishing_normalized: f64,
    /// ⌈S1_unweighted² / S2⌉, the Cauchy–Schwarz lower bound on the
    /// nonvanishing count.
    pub cauchy_schwarz_lower_bound: DecInt,
    pub cauchy_schwarz_holds: bool,

    pub min_central_value: f64,
    pub max_central_value: f64,
    pub higher_moments: Vec<HigherMoment>,

    #[serde(skip, default)]
    pub elapsed_seconds: f64,
    #[serde(skip, default)]
    pub workers: usize,
}

fn floor_half_plus_one(v: i64) -> i64 {
    // ⌊v/2⌋ + 1 with floor semantics for v = -1 (empty second sum at g=0).
    if v < 0 {
        0
    } else {
        v / 2 + 1
    }
}

/// Assemble (and exactness-check) the report from a finished accumulator.
pub fn build_report(
    acc: &MomentAccumulator,
    elapsed_seconds: f64,
    workers: usize,
) -> Result<SweepReport> {
    let q = acc.q();
    let spec = FieldSpec::new(q)?;
    let g = acc.genus() as usize;
    let degree = 2 * g as u32 + 1;
    let q_big = BigInt::from(q);
    let norm_p = q_big.pow(degree);

    // Structural exactness, before anything is reported.
    acc.check_first_moment_consistency()?;
    let pi = BigInt::from(count_primes(spec, 2 * g + 1)?);
    if pi != BigInt::from(acc.prime_count()) {
        return Err(Error::inconsistency(format!(
            "sweep saw {} primes but π_A({}) = {pi}",
            acc.prime_count(),
            2 * g + 1
        )));
    }
    let expected_checksum = BigInt::from(g as u64 + 1) * acc.prime_count();
    if acc.square_part_checksum() != &expected_checksum {
        return Err(Error::inconsistency(format!(
            "square-part checksum {} ≠ (g+1)·prime_count = {expected_checksum}",
            acc.square_part_checksum()
        )));
    }

    // First moment. The weight log_q|P| = 2g+1 is constant over the family.
    let s1u = acc.s1_unweighted();
    let weight = BigRational::from(BigInt::from(degree));
    let s1w = s1u.scale(&weight);
    let m1 = &norm_p * BigInt::from(g as u64 + 1);
    let m1_quad = QuadVal::from_rational(BigRational::from(m1.clone()));
    let d1 = s1w.sub(&m1_quad);
    let norm_p_f = (q as f64).powi(degree as i32);
    let d1_normalized = d1.to_f64(q) / norm_p_f.powf(0.75);
    let s1_over_m1 = s1w
        .scale(&BigRational::new(BigInt::from(1), m1.clone()))
        .to_f64(q);

    let first_moment_split = build_first_split(acc, &pi, &s1u, q, g)?;

    // Second moment.
    let s2 = acc.s2();
    let m2 = BigRational::new(
        (&q_big - 1) * q_big.pow(2 * g as u32) * BigInt::from((degree as u64) * (degree as u64)),
        BigInt::from(24u32),
    );
    let m2_quad = QuadVal::from_rational(m2.clone());
    let d2 = s2.sub(&m2_quad);
    let d2_normalized = d2.to_f64(q) / (norm_p_f * degree as f64);
    let s2_over_m2 = s2.scale(&m2.recip()).to_f64(q);

    let second_moment_split = build_second_split(&pi, &s2, spec, g)?;

    // Corollary diagnostics: nonvanishing·S2 ≥ S1u², exactly.
    let s1u_sq = s1u.mul(&s1u, q);
    let nv = BigRational::from(BigInt::from(acc.nonvanishing_count()));
    let cs_holds = s2.scale(&nv).cmp_quad(&s1u_sq, q) != Ordering::Less;
    if !cs_holds {
        return Err(Error::inconsistency(
            "Cauchy–Schwarz bound failed: nonvanishing·S2 < S1²".to_string(),
        ));
    }
    let cs_bound = if s2.sign(q) == Ordering::Greater {
        quad_ratio_ceil(&s1u_sq, &s2, q)?
    } else {
        BigInt::ZERO
    };
    let nonvanishing_normalized = acc.nonvanishing_count() as f64 * (degree as f64).powi(2)
        / norm_p_f;

    let higher_moments = acc
        .higher()
        .iter()
        .enumerate()
        .map(|(i, (a, b))| {
            let k = i as u32 + 3;
            let scale = q_big.pow(k * g as u32);
            let value = QuadVal::from_scaled(a, b, &scale);
            let float = value.to_f64(q);
            HigherMoment {
                k,
                value: QuadJson::of(&value),
                float,
            }
        })
        .collect();

    Ok(SweepReport {
        q,
        genus: g as u32,
        degree,
        norm_p: DecInt(norm_p),
        prime_count: acc.prime_count(),
        prime_count_formula: DecInt(pi),
        sum_x: DecInt(acc.sum_x().clone()),
        sum_y: DecInt(acc.sum_y().clone()),
        sum_sq_a: DecInt(acc.sum_sq_a().clone()),
        sum_sq_b: DecInt(acc.sum_sq_b().clone()),
        chi_by_degree: acc.chi_by_degree().iter().map(|c| DecInt(c.clone())).collect(),
        square_part_checksum: DecInt(acc.square_part_checksum().clone()),
        s1_unweighted: QuadJson::of(&s1u),
        s1_unweighted_float: s1u.to_f64(q),
        s1_weighted: QuadJson::of(&s1w),
        s1_weighted_float: s1w.to_f64(q),
        m1: DecInt(m1.clone()),
        m1_float: m1.to_f64().unwrap_or(f64::INFINITY),
        d1: QuadJson::of(&d1),
        d1_float: d1.to_f64(q),
        d1_normalized,
        s1_over_m1,
        first_moment_split,
        s2: QuadJson::of(&s2),
        s2_float: s2.to_f64(q),
        m2: DecRatio(m2.clone()),
        m2_float: crate::exact::ratio_to_f64(&m2),
        d2: QuadJson::of(&d2),
        d2_float: d2.to_f64(q),
        d2_normalized,
        s2_over_m2,
        second_moment_split,
        nonvanishing_count: acc.nonvanishing_count(),
        nonvanishing_normalized,
        cauchy_schwarz_lower_bound: DecInt(cs_bound),
        cauchy_schwarz_holds: cs_holds,
        min_central_value: acc.min_value().unwrap_or(f64::NAN),
        max_central_value: acc.max_value().unwrap_or(f64::NAN),
        higher_moments,
        elapsed_seconds,
        workers,
    })
}

fn build_first_split(
    acc: &MomentAccumulator,
    pi: &BigInt,
    s1u: &QuadVal,
    q: u64,
    g: usize,
) -> Result<FirstMomentSplit> {
    let sum1_sq = BigInt::from(floor_half_plus_one(g as i64)) * pi;
    let sum2_sq = BigInt::from(floor_half_plus_one(g as i64 - 1)) * pi;
    let square_part = &sum1_sq + &sum2_sq;
    debug_assert_eq!(square_part, BigInt::from(g as u64 + 1) * pi);
    let square_quad = QuadVal::from_rational(BigRational::from(square_part.clone()));
    let nonsquare = s1u.sub(&square_quad);
    if g == 0 && !nonsquare.is_zero() {
        return Err(Error::inconsistency(
            "genus 0 must have an empty non-square part".to_string(),
        ));
    }
    let denom = (q as f64).powf(1.5 * g as f64) * g as f64 / (2 * g + 1) as f64;
    let nonsquare_normalized = if g == 0 {
        None
    } else {
        Some(nonsquare.to_f64(q).abs() / denom)
    };

    // Per-sum decompositions from the per-degree χ sums.
    let partial_quad = |top: i64| -> QuadVal {
        let mut v = QuadVal::zero();
        let q_big = BigInt::from(q);
        for (n, c) in acc.chi_by_degree().iter().enumerate() {
            if (n as i64) > top {
                break;
            }
            let term = if n % 2 == 0 {
                QuadVal::from_rational(BigRational::new(c.clone(), q_big.pow(n as u32 / 2)))
            } else {
                QuadVal {
                    rat: BigRational::zero(),
                    irr: BigRational::new(c.clone(), q_big.pow((n as u32 + 1) / 2)),
                }
            };
            v = v.add(&term);
        }
        v
    };
    let sum1 = partial_quad(g as i64);
    let sum2 = partial_quad(g as i64 - 1);
    let sum1_nonsquare = sum1.sub(&QuadVal::from_rational(BigRational::from(sum1_sq.clone())));
    let sum2_nonsquare = sum2.sub(&QuadVal::from_rational(BigRational::from(sum2_sq.clone())));

    Ok(FirstMomentSplit {
        square_part: DecInt(square_part),
        sum1_square_part: DecInt(sum1_sq),
        sum2_square_part: DecInt(sum2_sq),
        nonsquare_float: nonsquare.to_f64(q),
        nonsquare_part: QuadJson::of(&nonsquare),
        nonsquare_normalized,
        sum1_nonsquare: QuadJson::of(&sum1_nonsquare),
        sum2_nonsquare: QuadJson::of(&sum2_nonsquare),
    })
}

fn build_second_split(
    pi: &BigInt,
    s2: &QuadVal,
    spec: FieldSpec,
    g: usize,
) -> Result<SecondMomentSplit> {
    let q = spec.q();
    let q_big = BigInt::from(q);
    let mut per_prime = BigRational::zero();
    for m in 0..=g {
        let weight = if m < g { 2u32 } else { 1 };
        let d2 = BigInt::from(divisor_square_sum(spec, m));
        per_prime += BigRational::new(BigInt::from(weight) * d2, q_big.pow(m as u32));
    }
    let square_part = per_prime * BigRational::from(pi.clone());
    let square_quad = QuadVal::from_rational(square_part.clone());
    let nonsquare = s2.sub(&square_quad);
    if g == 0 && !nonsquare.is_zero() {
        return Err(Error::inconsistency(
            "genus 0 must have an empty second-moment non-square part".to_string(),
        ));
    }
    let norm_p_f = (q as f64).powi(2 * g as i32 + 1);
    let nonsquare_normalized = if g == 0 {
        None
    } else {
        Some(nonsquare.to_f64(q).abs() / (norm_p_f * g as f64))
    };
    Ok(SecondMomentSplit {
        square_part_float: crate::exact::ratio_to_f64(&square_part),
        square_part: DecRatio(square_part),
        nonsquare_float: nonsquare.to_f64(q),
        nonsquare_part: QuadJson::of(&nonsquare),
        nonsquare_normalized,
    })
}

impl SweepReport {
    /// The canonical serialized form: compact JSON, floats at 15 significant
    /// digits, exact integers as strings. Byte-identical across resumes and
    /// worker counts.
    pub fn to_json(&self) -> Result<String> {
        crate::exact::to_json_15sig(self)
    }

    pub fn from_json(data: &str) -> Result<SweepReport> {
        Ok(serde_json::from_str(data)?)
    }

    /// Human-readable summary for the console.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let push = |out: &mut String, k: &str, v: String| {
            out.push_str(&format!("{k:<26} {v}\n"));
        };
        push(&mut out, "q, genus, deg P", format!("{}, {}, {}", self.q, self.genus, self.degree));
        push(&mut out, "|P| = q^(2g+1)", self.norm_p.0.to_string());
        push(
            &mut out,
            "primes",
            format!("{} (π_A = {})", self.prime_count, self.prime_count_formula.0),
        );
        push(
            &mut out,
            "S1 weighted",
            format!(
                "{} (exact ({} + {}·√q)/q^g ×(2g+1))",
                fmt_f64_15(self.s1_weighted_float),
                self.sum_x.0,
                self.sum_y.0
            ),
        );
        push(&mut out, "M1 = |P|(g+1)", fmt_f64_15(self.m1_float));
        push(
            &mut out,
            "S1/M1",
            format!("{} (D1/|P|^0.75 = {})", fmt_f64_15(self.s1_over_m1), fmt_f64_15(self.d1_normalized)),
        );
        push(
            &mut out,
            "S2",
            format!(
                "{} (exact ({} + {}·√q)/q^2g)",
                fmt_f64_15(self.s2_float),
                self.sum_sq_a.0,
                self.sum_sq_b.0
            ),
        );
        push(&mut out, "M2 = (1-1/q)|P|(2g+1)²/24", fmt_f64_15(self.m2_float));
        push(
            &mut out,
            "S2/M2",
            format!("{} (D2/(|P|(2g+1)) = {})", fmt_f64_15(self.s2_over_m2), fmt_f64_15(self.d2_normalized)),
        );
        push(
            &mut out,
            "square-part checksum",
            format!(
                "{} = (g+1)·primes ✓",
                self.square_part_checksum.0
            ),
        );
        push(
            &mut out,
            "nonvanishing",
            format!(
                "{} ≥ ⌈S1²/S2⌉ = {} ({})",
                self.nonvanishing_count,
                self.cauchy_schwarz_lower_bound.0,
                if self.cauchy_schwarz_holds { "ok" } else { "VIOLATED" }
            ),
        );
        push(
            &mut out,
            "central value range",
            format!(
                "[{}, {}]",
                fmt_f64_15(self.min_central_value),
                fmt_f64_15(self.max_central_value)
            ),
        );
        for hm in &self.higher_moments {
            push(&mut out, &format!("Σ L^{}", hm.k), fmt_f64_15(hm.float));
        }
        push(
            &mut out,
            "elapsed / workers",
            format!("{:.2}s / {}", self.elapsed_seconds, self.workers),
        );
        out
    }
}
