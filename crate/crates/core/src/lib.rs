//! Exact expansion of Euler's product `(1 - x)(1 - x^2)(1 - x^3)...`.
//!
//! * [`series`]: truncated power series over arbitrary-precision integers,
//!   including the brute-force product every other module is checked against.
//! * [`pentagonal`]: the closed form, nonzero only at `(3n^2 ± n)/2`.
//! * [`telescope`]: the two split-and-merge derivations of the closed form,
//!   replayed stage by stage with exact verification.
//! * [`partitions`]: the reciprocal series and `p(n)` by three routes.
//! * [`verify`]: the division cascade and root-of-unity structure.

pub mod error;
pub mod partitions;
pub mod pentagonal;
pub mod series;
pub mod telescope;
pub mod verify;

pub use error::{Error, Result};
pub use partitions::{
    partitions_enumerate, partitions_oracle_dp, partitions_recurrence, reciprocal_series,
    ModularPartitionTable, PartitionTable,
};
pub use pentagonal::{
    closed_form_series, pentagonal_pair, pentagonal_terms_upto, PentagonalPair, Sign, Term,
};
pub use series::{partial_product, DenseSeries, SparseSeries, TruncatedSeries};
pub use telescope::{
    expand_tail, initial_tail, reduce_step, run_telescope, verify_step, DerivationTrace,
    EmissionRecord, TailFamily, Variant,
};
pub use verify::{
    division_cascade, eval_partial_product_at_root, root_multiplicity, CascadeReport,
    RootEvaluation,
};
