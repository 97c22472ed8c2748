use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{fmt_f64_15, quad_ratio_ceil};
use crate::moments::report::SweepReport;

/// One row of the trend table: how a sweep's moments track the main terms.
#[derive(Debug, Clone, Serialize)]
pub struct TrendRow {
    pub genus: u32,
    pub degree: u32,
    pub prime_count: u64,
    pub s1_over_m1: f64,
    pub s2_over_m2: f64,
    pub d1_normalized: f64,
    pub d2_normalized: f64,
    pub nonvanishing_count: u64,
    pub nonvanishing_normalized: f64,
    pub cauchy_schwarz_lower_bound: String,
    /// Re-derived from the exact fields, not trusted from the report.
    pub cauchy_schwarz_ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct TrendTable {
    pub q: u64,
    pub rows: Vec<TrendRow>,
    pub all_consistent: bool,
}

/// Build the asymptotic trend table from ≥ 2 reports at the same q,
/// ascending in genus. The Cauchy–Schwarz inequality
/// nonvanishing·S2 ≥ S1² is re-checked exactly from each report's exact
/// fields.
pub fn asymptotic_table(reports: &[SweepReport]) -> Result<TrendTable> {
    if reports.len() < 2 {
        return Err(Error::domain("the trend table needs at least two reports"));
    }
    let q = reports[0].q;
    if reports.iter().any(|r| r.q != q) {
        return Err(Error::domain(
            "all reports in one table must share the same q",
        ));
    }
    let mut sorted: Vec<&SweepReport> = reports.iter().collect();
    sorted.sort_by_key(|r| r.genus);
    if sorted.windows(2).any(|w| w[0].genus == w[1].genus) {
        return Err(Error::domain("duplicate genus among the reports"));
    }

    let mut rows = Vec::with_capacity(sorted.len());
    let mut all_consistent = true;
    for r in sorted {
        let s1 = r.s1_unweighted.value();
        let s2 = r.s2.value();
        let s1_sq = s1.mul(&s1, q);
        let nv = BigRational::from(BigInt::from(r.nonvanishing_count));
        let cs_ok = s2.scale(&nv).cmp_quad(&s1_sq, q) != Ordering::Less;
        let bound = if s2.sign(q) == Ordering::Greater {
            quad_ratio_ceil(&s1_sq, &s2, q)?
        } else {
            BigInt::ZERO
        };
        let bound_matches = bound == r.cauchy_schwarz_lower_bound.0
            && BigInt::from(r.nonvanishing_count) >= bound;
        if !(cs_ok && bound_matches && r.cauchy_schwarz_holds) {
            all_consistent = false;
        }
        rows.push(TrendRow {
            genus: r.genus,
            degree: r.degree,
            prime_count: r.prime_count,
            s1_over_m1: r.s1_over_m1,
            s2_over_m2: r.s2_over_m2,
            d1_normalized: r.d1_normalized,
            d2_normalized: r.d2_normalized,
            nonvanishing_count: r.nonvanishing_count,
            nonvanishing_normalized: r.nonvanishing_normalized,
            cauchy_schwarz_lower_bound: bound.to_string(),
            cauchy_schwarz_ok: cs_ok && bound_matches,
        });
    }
    Ok(TrendTable {
        q,
        rows,
        all_consistent,
    })
}

impl TrendTable {
    pub fn render_text(&self) -> String {
        let mut out = format!("trend table, q = {}\n", self.q);
        out.push_str(&format!(
            "{:>2} {:>3} {:>9} {:>22} {:>22} {:>22} {:>22} {:>9} {:>12} {:>10} {:>3}\n",
            "g",
            "deg",
            "primes",
            "S1/M1",
            "S2/M2",
            "D1/|P|^0.75",
            "D2/(|P|(2g+1))",
            "nonvan",
            "nv(2g+1)²/|P|",
            "⌈S1²/S2⌉",
            "C-S"
        ));
        for r in &self.rows {
            out.push_str(&format!(
                "{:>2} {:>3} {:>9} {:>22} {:>22} {:>22} {:>22} {:>9} {:>12.6} {:>10} {:>3}\n",
                r.genus,
                r.degree,
                r.prime_count,
                fmt_f64_15(r.s1_over_m1),
                fmt_f64_15(r.s2_over_m2),
                fmt_f64_15(r.d1_normalized),
                fmt_f64_15(r.d2_normalized),
                r.nonvanishing_count,
                r.nonvanishing_normalized,
                r.cauchy_schwarz_lower_bound,
                if r.cauchy_schwarz_ok { "ok" } else { "BAD" }
            ));
        }
        out
    }

    pub fn render_csv(&self) -> String {
        let mut out = String::from(
            "q,genus,degree,prime_count,s1_over_m1,s2_over_m2,d1_normalized,d2_normalized,\
             nonvanishing_count,nonvanishing_normalized,cauchy_schwarz_lower_bound,cauchy_schwarz_ok\n",
        );
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{}\n",
                self.q,
                r.genus,
                r.degree,
                r.prime_count,
                fmt_f64_15(r.s1_over_m1),
                fmt_f64_15(r.s2_over_m2),
                fmt_f64_15(r.d1_normalized),
                fmt_f64_15(r.d2_normalized),
                r.nonvanishing_count,
                fmt_f64_15(r.nonvanishing_normalized),
                r.cauchy_schwarz_lower_bound,
                r.cauchy_schwarz_ok
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffpoly::FieldSpec;
    use crate::moments::sweep::{sweep, SweepConfig, SweepOutcome};

    fn report(q: u64, genus: u32) -> SweepReport {
        let cfg = SweepConfig::new(FieldSpec::new(q).unwrap(), genus);
        match sweep(&cfg).unwrap() {
            SweepOutcome::Complete(r) => *r,
            _ => panic!(),
        }
    }

    #[test]
    fn table_marks_genus_zero_exact() {
        let reports = vec![report(5, 0), report(5, 1)];
        let table = asymptotic_table(&reports).unwrap();
        assert!(table.all_consistent);
        assert_eq!(table.rows[0].genus, 0);
        // S1/M1 = 1 exactly at genus 0.
        assert_eq!(table.rows[0].s1_over_m1, 1.0);
        assert!(table.rows.iter().all(|r| r.cauchy_schwarz_ok));
        let text = table.render_text();
        assert!(text.contains("S1/M1"));
        let csv = table.render_csv();
        assert_eq!(csv.lines().count(), 3);
    }

    #[test]
    fn table_rejects_bad_inputs() {
        let a = report(5, 0);
        assert!(asymptotic_table(&[a.clone()]).is_err());
        let b = report(13, 0);
        assert!(asymptotic_table(&[a.clone(), b]).is_err());
        assert!(asymptotic_table(&[a.clone(), a]).is_err());
    }

    #[test]
    fn tampered_report_fails_consistency() {
        let a = report(5, 0);
        let mut b = report(5, 1);
        b.nonvanishing_count = 0; // S1² > 0 forces a violation
        let table = asymptotic_table(&[a, b]).unwrap();
        assert!(!table.all_consistent);
    }
}
