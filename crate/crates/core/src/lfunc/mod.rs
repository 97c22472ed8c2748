//! L(s, χ_P) as a polynomial in u = q^(-s), computed by three independent
//! routes (character sums, the exact half-sum formula, point counting) with
//! validators for the functional equation and the root-modulus circle.

mod central;
mod lpoly;
pub mod oracle;
mod points;
mod roots;

pub use central::{
    central_value, halfsum_full, halfsum_value, second_moment_identity, CentralValue, ChiPlan,
    ChiScratch, HalfSum, SecondMomentIdentity,
};
pub use lpoly::{lpoly_direct, lpoly_from_counts, LPolynomial};
pub use points::{point_counts, PointCounts};
pub use roots::{rh_check, RootReport};
