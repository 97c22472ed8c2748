use crate::arith::{is_irreducible, Symbol};
use crate::error::{Error, Result};
use crate::ffpoly::{ExtField, FieldSpec, MonicPoly};

/// Projective point counts N_1..N_m of the hyperelliptic curve y² = P(T)
/// over the extension fields F_{q^n}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointCounts {
    spec: FieldSpec,
    curve: MonicPoly,
    genus: u32,
    counts: Vec<u64>,
}

impl PointCounts {
    pub fn from_counts(
        spec: FieldSpec,
        curve: MonicPoly,
        genus: u32,
        counts: Vec<u64>,
    ) -> Result<Self> {
        spec.same_field(curve.spec())?;
        Ok(PointCounts {
            spec,
            curve,
            genus,
            counts,
        })
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn curve(&self) -> &MonicPoly {
        &self.curve
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// N_n, 1-based.
    pub fn get(&self, n: usize) -> Option<u64> {
        self.counts.get(n - 1).copied()
    }

    pub fn all(&self) -> &[u64] {
        &self.counts
    }

    /// |N_n - (q^n + 1)| ≤ 2g·q^(n/2) for every stored count, exactly:
    /// squared form (N_n - q^n - 1)² ≤ 4g²·q^n.
    pub fn weil_bound_holds(&self) -> bool {
        let q = self.spec.q() as i128;
        let g = self.genus as i128;
        let mut qn = 1i128;
        for (i, &count) in self.counts.iter().enumerate() {
            let _ = i;
            qn *= q;
            let diff = count as i128 - qn - 1;
            if diff * diff > 4 * g * g * qn {
                return false;
            }
        }
        true
    }
}

/// Cost guard for field enumeration.
const MAX_POINT_ENUM: u128 = 1 << 28;

/// Count projective points of C_P : y² = P(T) over F_{q^n} for n = 1..=max_n:
/// N_n = 1 + Σ_{t ∈ F_{q^n}} (1 + χ(P(t))), the leading 1 being the single
/// point at infinity (deg P is odd). χ is the quadratic character of F_{q^n}
/// on the deterministic extension-field model.
pub fn point_counts(p: &MonicPoly, max_n: usize) -> Result<PointCounts> {
    let spec = p.spec();
    let deg = p.degree();
    if deg % 2 == 0 {
        return Err(Error::domain("point counting needs odd-degree P"));
    }
    if !is_irreducible(p)? {
        return Err(Error::domain(format!("{p} is not irreducible")));
    }
    let genus = ((deg - 1) / 2) as u32;
    let mut counts = Vec::with_capacity(max_n);
    for n in 1..=max_n {
        let field = ExtField::new(spec, n)?;
        let mut order = 1u128;
        for _ in 0..n {
            order *= spec.q() as u128;
        }
        if order > MAX_POINT_ENUM {
            return Err(Error::domain(format!(
                "point counting over F_q^{n} would enumerate {order} elements"
            )));
        }
        let mut total = 1u64; // the point at infinity
        for t in field.elements() {
            let v = field.eval_base_poly(p.as_poly(), &t)?;
            total += match field.quadratic_character(&v) {
                Symbol::PlusOne => 2,
                Symbol::Zero => 1,
                Symbol::MinusOne => 0,
            };
        }
        counts.push(total);
    }
    PointCounts::from_counts(spec, p.clone(), genus, counts)
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
    fn degree_one_curve_has_q_plus_one_points() {
        // χ sums to zero over all of F_5 as t + c ranges over the field:
        // N_1 = 1 + 5 + 0 = 6.
        for c in 0..5 {
            let p = MonicPoly::x_plus(f5(), c);
            let counts = point_counts(&p, 2).unwrap();
            assert_eq!(counts.get(1), Some(6));
            assert_eq!(counts.get(2), Some(26));
            assert!(counts.weil_bound_holds());
        }
    }

    #[test]
    fn n1_matches_first_l_coefficient() {
        // N_1 = q + 1 + a_1.
        let spec = f5();
        for p in enumerate_primes(spec, 3).unwrap().take(8) {
            let counts = point_counts(&p, 1).unwrap();
            let l = lpoly_direct(&p, false).unwrap();
            assert_eq!(
                counts.get(1).unwrap() as i64,
                5 + 1 + l.coeffs()[1],
                "P = {p}"
            );
        }
    }

    #[test]
    fn weil_bound_on_samples() {
        let spec = f5();
        for p in enumerate_primes(spec, 5).unwrap().take(5) {
            let counts = point_counts(&p, 3).unwrap();
            assert!(counts.weil_bound_holds(), "P = {p}");
        }
    }

    #[test]
    fn rejects_even_degree_and_reducible() {
        let spec = f5();
        let even = MonicPoly::from_coeffs(spec, vec![2, 0, 1]).unwrap();
        assert!(point_counts(&even, 1).is_err());
        let t3 = MonicPoly::from_coeffs(spec, vec![0, 0, 0, 1]).unwrap();
        assert!(point_counts(&t3, 1).is_err());
    }
}
