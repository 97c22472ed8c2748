//! The sweep engine: enumerate every monic irreducible of degree 2g+1,
//! accumulate exact first and second moments of L(1/2, χ_P), compare against
//! the expected main terms, and do it restartably and deterministically.

mod accumulator;
mod checkpoint;
mod report;
mod sweep;
mod table;

pub use accumulator::{AccumulatorState, MomentAccumulator};
pub use checkpoint::Checkpoint;
pub use report::{
    build_report, FirstMomentSplit, HigherMoment, SecondMomentSplit, SweepReport,
};
pub use sweep::{sweep, SweepConfig, SweepOutcome, DEFAULT_CHUNK_SIZE};
pub use table::{asymptotic_table, TrendRow, TrendTable};
