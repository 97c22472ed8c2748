use serde::Serialize;

use ffl::error::Error;
use ffl::exact::{fmt_f64_15, to_json_15sig};
use ffl::lfunc::{
    central_value, halfsum_value, lpoly_direct, lpoly_from_counts, point_counts, rh_check,
    CentralValue, LPolynomial,
};
use ffl::{FieldSpec, MonicPoly};

pub enum Method {
    Direct { full_enumeration: bool },
    Halfsum,
    Pointcount,
}

#[derive(Serialize)]
struct Output {
    q: u64,
    poly: String,
    degree: usize,
    genus: u32,
    method: &'static str,
    /// a_0..a_2g; absent for the halfsum route, which never materializes
    /// the polynomial.
    coefficients: Option<Vec<String>>,
    x: String,
    y: String,
    central_value: f64,
    central_value_is_zero: bool,
    functional_equation: &'static str,
    rh: RhOut,
    weil_bound: &'static str,
    point_counts: Option<Vec<u64>>,
}

#[derive(Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
enum RhOut {
    Skipped { reason: &'static str },
    Checked { pass: bool, tol: f64, max_rel_dev: f64, root_moduli: Vec<f64>, target: f64 },
}

pub fn run(
    spec: FieldSpec,
    poly: &str,
    method: Method,
    rh_tol: f64,
    json: bool,
) -> Result<bool, Error> {
    let p = MonicPoly::parse(spec, poly)?;
    let degree = p.degree();

    let mut counts_out = None;
    let (value, lpoly, method_name, fe_status): (CentralValue, Option<LPolynomial>, _, _) =
        match method {
            Method::Halfsum => (halfsum_value(&p)?, None, "halfsum", "skipped (no polynomial)"),
            Method::Direct { full_enumeration } => {
                let l = lpoly_direct(&p, full_enumeration)?;
                let status = if full_enumeration {
                    "checked (full enumeration)"
                } else {
                    "filled (half enumeration)"
                };
                (central_value(&l), Some(l), "direct", status)
            }
            Method::Pointcount => {
                let genus = ((degree - 1) / 2) as u32;
                let counts = point_counts(&p, genus as usize)?;
                counts_out = Some(counts.all().to_vec());
                let l = lpoly_from_counts(&counts, genus)?;
                (central_value(&l), Some(l), "pointcount", "filled (from counts)")
            }
        };
    let genus = value.genus();

    // Weil bound on whatever counts the chosen route produced.
    let weil_status = match (&counts_out, &lpoly) {
        (Some(_), _) => {
            let counts = point_counts(&p, genus as usize)?;
            if counts.weil_bound_holds() {
                "pass"
            } else {
                "FAIL"
            }
        }
        _ => "skipped",
    };

    let rh = match &lpoly {
        None => RhOut::Skipped {
            reason: "halfsum route has no polynomial",
        },
        Some(_) if genus == 0 => RhOut::Skipped {
            reason: "genus 0 is constant",
        },
        Some(l) => {
            let report = rh_check(l, rh_tol)?;
            RhOut::Checked {
                pass: report.passes(),
                tol: report.tol,
                max_rel_dev: report.max_rel_dev,
                root_moduli: report.moduli.clone(),
                target: report.target,
            }
        }
    };

    let pass = match &rh {
        RhOut::Checked { pass, .. } => *pass,
        RhOut::Skipped { .. } => true,
    } && weil_status != "FAIL";

    let out = Output {
        q: spec.q(),
        poly: p.to_string(),
        degree,
        genus,
        method: method_name,
        coefficients: lpoly
            .as_ref()
            .map(|l| l.coeffs().iter().map(|c| c.to_string()).collect()),
        x: value.x().to_string(),
        y: value.y().to_string(),
        central_value: value.to_f64(spec.q()),
        central_value_is_zero: value.is_zero(),
        functional_equation: fe_status,
        rh,
        weil_bound: weil_status,
        point_counts: counts_out,
    };

    if json {
        println!("{}", to_json_15sig(&out)?);
    } else {
        println!("q = {}, P = {} (degree {degree}, genus {genus})", out.q, out.poly);
        println!("method: {}", out.method);
        if let Some(coeffs) = &out.coefficients {
            println!("a_0..a_2g: [{}]", coeffs.join(", "));
        }
        println!(
            "L(1/2) = (X + Y·√q)/q^g with X = {}, Y = {}  →  {}",
            out.x,
            out.y,
            fmt_f64_15(out.central_value)
        );
        if out.central_value_is_zero {
            println!("central value is exactly zero");
        }
        println!("functional equation: {}", out.functional_equation);
        match &out.rh {
            RhOut::Skipped { reason } => println!("root-modulus check: skipped ({reason})"),
            RhOut::Checked {
                pass,
                tol,
                max_rel_dev,
                ..
            } => println!(
                "root-modulus check: {} (max relative deviation {:.3e}, tol {:.1e})",
                if *pass { "pass" } else { "FAIL" },
                max_rel_dev,
                tol
            ),
        }
        if let Some(counts) = &out.point_counts {
            println!("point counts N_1..N_g: {counts:?} (Weil bound: {})", out.weil_bound);
        }
    }
    Ok(pass)
}
