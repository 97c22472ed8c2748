//! Exact arithmetic in F_q, F_q[T], and extension fields F_{q^n}, plus the
//! deterministic enumeration of monic polynomials that everything downstream
//! (sweeps, checkpoints, prime tables) keys off.

mod enumerate;
mod ext;
pub(crate) mod field;
pub(crate) mod poly;

pub use enumerate::{enumerate_monic, monic_by_index, monic_count, MonicIter};
pub use ext::{ExtElem, ExtField};
pub use field::{FieldElement, FieldSpec, LegendreTable};
pub use poly::{MonicPoly, Poly};
