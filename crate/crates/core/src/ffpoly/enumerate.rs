use crate::error::{Error, Result};
use crate::ffpoly::field::FieldSpec;
use crate::ffpoly::poly::MonicPoly;

/// q^n as u128, erroring on overflow.
pub fn monic_count(spec: FieldSpec, n: usize) -> Result<u128> {
    let q = spec.q() as u128;
    let mut total = 1u128;
    for _ in 0..n {
        total = total
            .checked_mul(q)
            .ok_or_else(|| Error::domain(format!("q^{n} does not fit in u128")))?;
    }
    Ok(total)
}

/// The monic polynomial of degree `n` at position `index` in enumeration
/// order.
///
/// The order is fixed: `index` written in base q gives the low coefficients,
/// least-significant digit first, so coefficient 0 varies fastest. Degree-n
/// index k therefore has coeffs[i] = (k / q^i) mod q for i < n and
/// coeffs[n] = 1. Checkpointing and chunked sweeps rely on this order never
/// changing.
pub fn monic_by_index(spec: FieldSpec, n: usize, index: u128) -> MonicPoly {
    let q = spec.q() as u128;
    let mut coeffs = Vec::with_capacity(n + 1);
    let mut k = index;
    for _ in 0..n {
        coeffs.push((k % q) as u64);
        k /= q;
    }
    debug_assert_eq!(k, 0, "index out of range for degree {n}");
    coeffs.push(1);
    MonicPoly::from_raw(spec, coeffs)
}

/// Deterministic stream of all q^n monic polynomials of degree `n`, in the
/// enumeration order documented on [`monic_by_index`].
pub fn enumerate_monic(spec: FieldSpec, n: usize) -> MonicIter {
    MonicIter::new(spec, n, 0, None)
}

/// Iterator over monic polynomials of fixed degree; supports sub-ranges of
/// the enumeration for chunked processing.
pub struct MonicIter {
    spec: FieldSpec,
    n: usize,
    // Odometer over the low n coefficients; absent once exhausted.
    current: Option<Vec<u64>>,
    index: u128,
    end: Option<u128>,
}

impl MonicIter {
    /// Iterate indices [start, end) of the degree-n enumeration
    /// (end = None means q^n).
    pub fn range(spec: FieldSpec, n: usize, start: u128, end: u128) -> Self {
        MonicIter::new(spec, n, start, Some(end))
    }

    fn new(spec: FieldSpec, n: usize, start: u128, end: Option<u128>) -> Self {
        let q = spec.q() as u128;
        let mut current = Vec::with_capacity(n + 1);
        let mut k = start;
        for _ in 0..n {
            current.push((k % q) as u64);
            k /= q;
        }
        current.push(1);
        let current = if k == 0 { Some(current) } else { None };
        MonicIter {
            spec,
            n,
            current,
            index: start,
            end,
        }
    }

    /// Index (within the degree's enumeration) of the element `next` will
    /// return.
    pub fn position(&self) -> u128 {
        self.index
    }

    fn advance(&mut self) {
        self.index += 1;
        let q = self.spec.q();
        let coeffs = self.current.as_mut().unwrap();
        for i in 0..self.n {
            coeffs[i] += 1;
            if coeffs[i] < q {
                return;
            }
            coeffs[i] = 0;
        }
        // Odometer wrapped past the last degree-n polynomial.
        self.current = None;
    }
}

impl Iterator for MonicIter {
    type Item = MonicPoly;

    fn next(&mut self) -> Option<MonicPoly> {
        if let Some(end) = self.end {
            if self.index >= end {
                return None;
            }
        }
        let coeffs = self.current.as_ref()?.clone();
        let mut trimmed = coeffs;
        // Low coefficients may be zero but the leading 1 never is.
        debug_assert_eq!(trimmed.last(), Some(&1));
        let item = MonicPoly::from_raw(self.spec, std::mem::take(&mut trimmed));
        self.advance();
        Some(item)
    }
}
