use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{DecInt, QuadVal};
use crate::lfunc::HalfSum;

/// Exact running sums over a family of primes of degree 2g+1.
///
/// Everything that feeds a theorem comparison is an integer: per-prime
/// central values contribute (X, Y) to the first moment and
/// (X² + qY², 2XY) to the second, all at fixed powers of q. Merging two
/// accumulators over disjoint prime sets is componentwise addition, so the
/// final state is independent of chunk scheduling.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentAccumulator {
    q: u64,
    genus: u32,
    prime_count: u64,
    /// C_n = Σ_P Σ_{deg f = n} χ_P(f) for n = 0..=g (per-degree diagnostics;
    /// the first moment is a weighted recombination of these).
    chi_by_degree: Vec<BigInt>,
    /// Σ X_P and Σ Y_P: first moment numerators at scale q^g.
    sum_x: BigInt,
    sum_y: BigInt,
    /// Σ (X² + qY²) and Σ 2XY: second moment numerators at scale q^(2g).
    sum_sq_a: BigInt,
    sum_sq_b: BigInt,
    /// Σ of the per-prime χ-derived square parts; each must equal g+1, so
    /// the total must equal (g+1)·prime_count.
    square_part_checksum: BigInt,
    nonvanishing_count: u64,
    min_value: Option<f64>,
    max_value: Option<f64>,
    /// Optional Σ L^k numerators (a_k + b_k·√q at scale q^(k·g)) for
    /// k = 3..=higher_max_k; reported without any theorem comparison.
    higher_max_k: u32,
    higher: Vec<(BigInt, BigInt)>,
}

impl MomentAccumulator {
    pub fn new(q: u64, genus: u32, higher_max_k: u32) -> Self {
        let k_count = higher_max_k.saturating_sub(2) as usize;
        MomentAccumulator {
            q,
            genus,
            prime_count: 0,
            chi_by_degree: vec![BigInt::ZERO; genus as usize + 1],
            sum_x: BigInt::ZERO,
            sum_y: BigInt::ZERO,
            sum_sq_a: BigInt::ZERO,
            sum_sq_b: BigInt::ZERO,
            square_part_checksum: BigInt::ZERO,
            nonvanishing_count: 0,
            min_value: None,
            max_value: None,
            higher_max_k,
            higher: vec![(BigInt::ZERO, BigInt::ZERO); k_count],
        }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn prime_count(&self) -> u64 {
        self.prime_count
    }

    pub fn chi_by_degree(&self) -> &[BigInt] {
        &self.chi_by_degree
    }

    pub fn sum_x(&self) -> &BigInt {
        &self.sum_x
    }

    pub fn sum_y(&self) -> &BigInt {
        &self.sum_y
    }

    pub fn sum_sq_a(&self) -> &BigInt {
        &self.sum_sq_a
    }

    pub fn sum_sq_b(&self) -> &BigInt {
        &self.sum_sq_b
    }

    pub fn square_part_checksum(&self) -> &BigInt {
        &self.square_part_checksum
    }

    pub fn nonvanishing_count(&self) -> u64 {
        self.nonvanishing_count
    }

    pub fn min_value(&self) -> Option<f64> {
        self.min_value
    }

    pub fn max_value(&self) -> Option<f64> {
        self.max_value
    }

    pub fn higher_max_k(&self) -> u32 {
        self.higher_max_k
    }

    pub fn higher(&self) -> &[(BigInt, BigInt)] {
        &self.higher
    }

    /// Fold in one prime's half-sum evaluation.
    pub fn observe(&mut self, hs: &HalfSum) -> Result<()> {
        let v = hs.value;
        if v.genus() != self.genus {
            return Err(Error::domain("genus mismatch in accumulator observe"));
        }
        self.prime_count += 1;
        for (n, &c) in hs.by_degree.iter().enumerate() {
            self.chi_by_degree[n] += c;
        }
        self.sum_x += v.x();
        self.sum_y += v.y();
        let (a, b) = v.square_parts(self.q);
        self.sum_sq_a += a;
        self.sum_sq_b += b;
        self.square_part_checksum += hs.square_part;
        if !v.is_zero() {
            self.nonvanishing_count += 1;
        }
        let f = v.to_f64(self.q);
        self.min_value = Some(self.min_value.map_or(f, |m| m.min(f)));
        self.max_value = Some(self.max_value.map_or(f, |m| m.max(f)));
        if self.higher_max_k >= 3 {
            let q = BigInt::from(self.q);
            let x = BigInt::from(v.x());
            let y = BigInt::from(v.y());
            let mut a = x.clone();
            let mut b = y.clone();
            for k in 2..=self.higher_max_k {
                let na = &a * &x + &q * &b * &y;
                let nb = &a * &y + &b * &x;
                a = na;
                b = nb;
                if k >= 3 {
                    let slot = &mut self.higher[(k - 3) as usize];
                    slot.0 += &a;
                    slot.1 += &b;
                }
            }
        }
        Ok(())
    }

    /// Merge another accumulator over a disjoint prime set. Componentwise
    /// addition: associative and commutative, so worker scheduling never
    /// affects the result.
    pub fn merge(&mut self, other: &MomentAccumulator) -> Result<()> {
        if self.q != other.q || self.genus != other.genus || self.higher_max_k != other.higher_max_k
        {
            return Err(Error::domain("accumulator parameter mismatch in merge"));
        }
        self.prime_count += other.prime_count;
        for (a, b) in self.chi_by_degree.iter_mut().zip(&other.chi_by_degree) {
            *a += b;
        }
        self.sum_x += &other.sum_x;
        self.sum_y += &other.sum_y;
        self.sum_sq_a += &other.sum_sq_a;
        self.sum_sq_b += &other.sum_sq_b;
        self.square_part_checksum += &other.square_part_checksum;
        self.nonvanishing_count += other.nonvanishing_count;
        self.min_value = match (self.min_value, other.min_value) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        self.max_value = match (self.max_value, other.max_value) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        for (a, b) in self.higher.iter_mut().zip(&other.higher) {
            a.0 += &b.0;
            a.1 += &b.1;
        }
        Ok(())
    }

    /// (sum_x + sum_y·√q)/q^g, the unweighted first moment.
    pub fn s1_unweighted(&self) -> QuadVal {
        let scale = BigInt::from(self.q).pow(self.genus);
        QuadVal::from_scaled(&self.sum_x, &self.sum_y, &scale)
    }

    /// (sum_sq_a + sum_sq_b·√q)/q^(2g), the second moment.
    pub fn s2(&self) -> QuadVal {
        let scale = BigInt::from(self.q).pow(2 * self.genus);
        QuadVal::from_scaled(&self.sum_sq_a, &self.sum_sq_b, &scale)
    }

    /// Rebuild (sum_x, sum_y) from the per-degree χ sums; they must agree
    /// with the directly accumulated values.
    pub fn check_first_moment_consistency(&self) -> Result<()> {
        let g = self.genus as usize;
        let q = BigInt::from(self.q);
        let mut qpow = vec![BigInt::from(1u32); g + 1];
        for k in 1..=g {
            qpow[k] = &qpow[k - 1] * &q;
        }
        let mut x = BigInt::ZERO;
        let mut y = BigInt::ZERO;
        for (n, c) in self.chi_by_degree.iter().enumerate() {
            let weight = if n < g { 2 } else { 1 };
            if n % 2 == 0 {
                x += BigInt::from(weight) * c * &qpow[g - n / 2];
            } else {
                y += BigInt::from(weight) * c * &qpow[g - (n + 1) / 2];
            }
        }
        if x != self.sum_x || y != self.sum_y {
            return Err(Error::inconsistency(
                "per-degree χ sums do not recombine to (sum_x, sum_y)".to_string(),
            ));
        }
        Ok(())
    }

    pub fn to_state(&self) -> AccumulatorState {
        AccumulatorState {
            prime_count: self.prime_count,
            chi_by_degree: self
                .chi_by_degree
                .iter()
                .map(|v| DecInt(v.clone()))
                .collect(),
            sum_x: DecInt(self.sum_x.clone()),
            sum_y: DecInt(self.sum_y.clone()),
            sum_sq_a: DecInt(self.sum_sq_a.clone()),
            sum_sq_b: DecInt(self.sum_sq_b.clone()),
            square_part_checksum: DecInt(self.square_part_checksum.clone()),
            nonvanishing_count: self.nonvanishing_count,
            min_value: self.min_value,
            max_value: self.max_value,
            higher: self
                .higher
                .iter()
                .map(|(a, b)| (DecInt(a.clone()), DecInt(b.clone())))
                .collect(),
        }
    }

    pub fn from_state(q: u64, genus: u32, higher_max_k: u32, state: &AccumulatorState) -> Result<Self> {
        let mut acc = MomentAccumulator::new(q, genus, higher_max_k);
        if state.chi_by_degree.len() != genus as usize + 1 {
            return Err(Error::domain(
                "accumulator state has the wrong number of per-degree sums",
            ));
        }
        if state.higher.len() != acc.higher.len() {
            return Err(Error::domain(
                "accumulator state has the wrong number of higher moments",
            ));
        }
        acc.prime_count = state.prime_count;
        acc.chi_by_degree = state.chi_by_degree.iter().map(|v| v.0.clone()).collect();
        acc.sum_x = state.sum_x.0.clone();
        acc.sum_y = state.sum_y.0.clone();
        acc.sum_sq_a = state.sum_sq_a.0.clone();
        acc.sum_sq_b = state.sum_sq_b.0.clone();
        acc.square_part_checksum = state.square_part_checksum.0.clone();
        acc.nonvanishing_count = state.nonvanishing_count;
        acc.min_value = state.min_value;
        acc.max_value = state.max_value;
        acc.higher = state
            .higher
            .iter()
            .map(|(a, b)| (a.0.clone(), b.0.clone()))
            .collect();
        Ok(acc)
    }
}

/// Serialized accumulator: exact integers as decimal strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccumulatorState {
    pub prime_count: u64,
    pub chi_by_degree: Vec<DecInt>,
    pub sum_x: DecInt,
    pub sum_y: DecInt,
    pub sum_sq_a: DecInt,
    pub sum_sq_b: DecInt,
    pub square_part_checksum: DecInt,
    pub nonvanishing_count: u64,
    pub min_value: Option<f64>,
    pub max_value: Option<f64>,
    pub higher: Vec<(DecInt, DecInt)>,
}
