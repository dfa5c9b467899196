//! Ground-truth checkers: exhaustive leximin enumeration, Pareto-dominance
//! search, envy-free-and-efficient existence, and SAT / forall-exists
//! evaluation by enumeration.
//!
//! Searches are bounded by a [`SearchBudget`] counted in search-tree nodes;
//! running out yields [`TriVerdict::Unknown`] rather than a guess.

mod dominance;
mod eef;
mod leximin;
mod sat;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use dominance::{
    find_dominating_allocation, find_dominating_allocation_unpruned, is_pareto_optimal,
    OptimalityCertificate,
};
pub use eef::{brute_force_eef, search_x_forall_family, ChoiceScope, FamilyHit};
pub use leximin::brute_force_leximin;
pub use sat::{ae3cnf_eval, sat_on_partial, MAX_ENUMERATED_VARS};

/// Default node budget when none is given.
pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SearchBudget {
    max_nodes: u64,
}

impl SearchBudget {
    pub fn new(max_nodes: u64) -> Result<Self> {
        if max_nodes == 0 {
            return Err(Error::Contract("search budget must be positive".into()));
        }
        Ok(SearchBudget { max_nodes })
    }

    pub fn max_nodes(&self) -> u64 {
        self.max_nodes
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_nodes: DEFAULT_NODE_BUDGET,
        }
    }
}

/// Three-way answer. `Yes` always carries a checkable witness; `No` may
/// carry one too when the question is phrased negatively.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TriVerdict<Y, N = ()> {
    Yes(Y),
    No(N),
    Unknown,
}

impl<Y, N> TriVerdict<Y, N> {
    pub fn is_yes(&self) -> bool {
        matches!(self, TriVerdict::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, TriVerdict::No(_))
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, TriVerdict::Unknown)
    }

    pub fn yes(self) -> Option<Y> {
        match self {
            TriVerdict::Yes(y) => Some(y),
            _ => None,
        }
    }

    pub fn no(self) -> Option<N> {
        match self {
            TriVerdict::No(n) => Some(n),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            TriVerdict::Yes(_) => "yes",
            TriVerdict::No(_) => "no",
            TriVerdict::Unknown => "unknown",
        }
    }
}

impl<Y, N> fmt::Display for TriVerdict<Y, N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// A verdict plus the number of search nodes spent reaching it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Searched<Y, N = ()> {
    pub verdict: TriVerdict<Y, N>,
    pub nodes: u64,
}

/// Shared node counter so nested searches draw from one budget.
#[derive(Debug, Clone, Copy)]
pub(crate) struct NodeMeter {
    pub used: u64,
    pub limit: u64,
}

impl NodeMeter {
    pub fn new(budget: SearchBudget) -> Self {
        NodeMeter {
            used: 0,
            limit: budget.max_nodes(),
        }
    }

    /// Charges one node; false once the budget is exceeded.
    pub fn tick(&mut self) -> bool {
        self.used += 1;
        self.used <= self.limit
    }
}
