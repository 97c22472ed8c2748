use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::lfunc::lpoly::LPolynomial;

/// Moduli of the roots of the L-polynomial against the target circle
/// |u| = q^(-1/2).
#[derive(Debug, Clone)]
pub struct RootReport {
    /// Sorted ascending.
    pub moduli: Vec<f64>,
    pub target: f64,
    pub max_rel_dev: f64,
    pub tol: f64,
}

impl RootReport {
    pub fn passes(&self) -> bool {
        self.max_rel_dev <= self.tol
    }
}

/// Find the complex roots of Σ a_n·u^n and check that every modulus lies in
/// q^(-1/2)·[1-tol, 1+tol]. Degrees here are ≤ ~10, so companion-matrix
/// eigenvalues are plenty.
///
/// This is a floating diagnostic; the exact pipeline never consumes it.
pub fn rh_check(l: &LPolynomial, tol: f64) -> Result<RootReport> {
    let d = 2 * l.genus() as usize;
    if d == 0 {
        return Err(Error::domain(
            "genus 0 has a constant L-polynomial with no roots",
        ));
    }
    let coeffs = l.coeffs();
    let lead = coeffs[d] as f64;
    // Companion matrix of the monic normalization: subdiagonal ones, last
    // column -a_i/a_d.
    let mut m = DMatrix::<f64>::zeros(d, d);
    for i in 1..d {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..d {
        m[(i, d - 1)] = -(coeffs[i] as f64) / lead;
    }
    let schur = m.try_schur(1e-14, 10_000).ok_or_else(|| {
        Error::Numerical(format!(
            "eigenvalue iteration did not converge for L-polynomial {:?} over q={}",
            coeffs,
            l.spec().q()
        ))
    })?;
    let eigs = schur.complex_eigenvalues();
    let target = 1.0 / (l.spec().q() as f64).sqrt();
    let mut moduli: Vec<f64> = eigs.iter().map(|c| c.norm()).collect();
    moduli.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let max_rel_dev = moduli
        .iter()
        .map(|m| (m - target).abs() / target)
        .fold(0.0f64, f64::max);
    Ok(RootReport {
        moduli,
        target,
        max_rel_dev,
        tol,
    })
}
