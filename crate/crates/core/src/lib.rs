//! Exact computation of quadratic Dirichlet L-functions over the rational
//! function field F_q(T), for prime-polynomial moduli of odd degree, together
//! with the exhaustive machinery to sweep whole families and compare their
//! first and second moments against the expected main terms.
//!
//! Everything that feeds an assertion is exact: field and polynomial
//! arithmetic over F_q, residue symbols, L-polynomial coefficients, and the
//! central values L(1/2, χ_P) = (X + Y√q)/q^g held as integer pairs. Floating
//! point only appears in reports and in the root-modulus diagnostic.

pub mod arith;
pub mod error;
pub mod exact;
pub mod ffpoly;
pub mod lfunc;
pub mod moments;

pub use arith::{Factorization, Symbol};
pub use error::{Error, Result};
pub use ffpoly::{ExtField, FieldElement, FieldSpec, MonicPoly, Poly};
pub use lfunc::{CentralValue, LPolynomial, PointCounts};
pub use moments::{MomentAccumulator, SweepConfig, SweepReport};
