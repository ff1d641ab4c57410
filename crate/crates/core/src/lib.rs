//! Weighted zero-sum invariants of finite abelian groups.
//!
//! Computes the weighted Davenport constant `D_A(G)` and the weighted
//! Erdős–Ginzburg–Ziv constant `E_A(G)` by exhaustive search, and checks the
//! identity `E_A(n) = D_A(n) + n - 1` for cyclic groups on small grids.
//!
//! * [`algebra`]: groups, elements, sequences, weight sets, unit canonical form.
//! * [`profile`]: weighted subsequence-sum tables and the two zero-sum predicates.
//! * [`search`]: the constants, with extremal witnesses.
//! * [`lemma`]: instance checkers for the sumset bound, the subsequence
//!   theorem, and the translation identity.
//! * [`campaign`]: verification grids and their CSV/JSON reports.

pub mod algebra;
pub mod bits;
pub mod campaign;
mod error;
pub mod lemma;
pub mod profile;
pub mod search;

pub use algebra::{canonicalize_under_units, GSequence, GroupElement, GroupSpec, WeightSet};
pub use bits::ElementSet;
pub use error::{Error, InconclusiveReason, Result, YzHypothesis};
pub use profile::{
    has_exact_length_weighted_zero_sum, has_weighted_zero_sum, oracle_weighted_sums, oracle_weighted_sums_bounded,
    sum_profile, OracleBound, SumProfile,
};
pub use search::{
    classical_constants, egz_constant, lower_bound_witness, max_zero_sum_free_length, ConstantKind, ConstantResult,
    SearchBudget,
};
