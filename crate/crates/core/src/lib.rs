//! Fair division with exact arithmetic.
//!
//! * [`model`]: instances, allocations, the leximin order, envy-freeness
//!   and Pareto dominance.
//! * [`leximin`]: polynomial leximin solver for max-atomic utilities via a
//!   minimum-weight maximum matching.
//! * [`oracles`]: exhaustive ground-truth checkers.
//! * [`reductions`]: 3CNF and forall-exists 3CNF encodings into additive
//!   instances, with their constructive Pareto-improvements.
//! * [`formats`]: JSON documents, DIMACS and reports.

pub mod error;
pub mod formats;
pub mod formula;
pub mod leximin;
pub mod model;
pub mod oracles;
pub mod reductions;

pub use error::{Error, Result};
pub use formula::{AeFormula, Clause, CnfFormula, Literal, PartialAssignment};
pub use leximin::{
    decide_lmmuab, generate_weights, min_weight_max_matching, solve_leximin, Matching, WeightMatrix,
};
pub use model::{
    bundle_utility, dominates, is_envy_free, leximin_compare, rat, ratio, utility_vector,
    Allocation, EnvyVerdict, Instance, LeximinOrdering, Rational, UtilityKind, UtilitySpec,
    UtilityVector,
};
pub use oracles::{SearchBudget, Searched, TriVerdict};
