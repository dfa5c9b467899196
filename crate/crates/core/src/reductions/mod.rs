//! Executable hardness reductions into additive allocation instances:
//!
//! * [`reduce_3cnf_to_po`]: a 3CNF formula becomes an instance plus a
//!   baseline allocation that is Pareto-optimal exactly when the formula is
//!   unsatisfiable.
//! * [`reduce_ae3cnf_to_eef`]: a forall-exists 3CNF formula becomes an
//!   instance that has an envy-free Pareto-optimal allocation exactly when
//!   the formula is false.
//!
//! Both come with the constructive Pareto-improvements used to argue the
//! "satisfiable" directions, so the constructions can be checked end to end.

mod eef;
mod po;
mod roles;

use crate::error::{Error, Result};
use crate::formula::{AeFormula, Clause, CnfFormula, Literal};

pub use eef::{
    build_x_forall_allocation, construct_improvement_eef, reduce_ae3cnf_to_eef,
    reduce_ae3cnf_to_eef_with_m_factor, x_forall_choice_space, BigM, EefReduction, XForallChoices,
};
pub use po::{construct_improvement_po, reduce_3cnf_to_po, PoReduction};
pub use roles::{AgentRole, ReductionMap, ResourceRole};

/// Anything that wraps a CNF clause list.
pub trait ClauseSet: Clone {
    fn cnf(&self) -> &CnfFormula;
    fn cnf_mut(&mut self) -> &mut CnfFormula;
}

impl ClauseSet for CnfFormula {
    fn cnf(&self) -> &CnfFormula {
        self
    }

    fn cnf_mut(&mut self) -> &mut CnfFormula {
        self
    }
}

impl ClauseSet for AeFormula {
    fn cnf(&self) -> &CnfFormula {
        self.matrix()
    }

    fn cnf_mut(&mut self) -> &mut CnfFormula {
        self.matrix_mut()
    }
}

/// Variables missing at least one polarity, ascending.
pub fn unbalanced_vars(formula: &CnfFormula) -> Vec<usize> {
    let mut seen = vec![[false; 2]; formula.num_vars()];
    for l in formula.clauses().iter().flatten() {
        seen[l.var][l.positive as usize] = true;
    }
    seen.iter()
        .enumerate()
        .filter(|(_, s)| !(s[0] && s[1]))
        .map(|(v, _)| v)
        .collect()
}

/// Appends `{x, -x}` for every variable that lacks one of its literals.
/// Returns the new formula and the clauses that were added.
pub fn augment_both_polarities<F: ClauseSet>(formula: &F) -> (F, Vec<Clause>) {
    let mut out = formula.clone();
    let added: Vec<Clause> = unbalanced_vars(formula.cnf())
        .into_iter()
        .map(|v| vec![Literal::pos(v), Literal::neg(v)])
        .collect();
    for c in &added {
        out.cnf_mut().push_clause(c.clone());
    }
    (out, added)
}

/// Clauses as sets: repeated literals collapse, sizes must be 1..=3.
pub(crate) fn normalized_clauses(formula: &CnfFormula) -> Result<Vec<Clause>> {
    formula
        .clauses()
        .iter()
        .enumerate()
        .map(|(ci, clause)| {
            let mut set: Clause = Vec::with_capacity(clause.len());
            for l in clause {
                if !set.contains(l) {
                    set.push(*l);
                }
            }
            if set.is_empty() || set.len() > 3 {
                return Err(Error::Format(format!(
                    "clause {} has {} distinct literals; 3CNF clauses need 1 to 3",
                    ci + 1,
                    set.len()
                )));
            }
            Ok(set)
        })
        .collect()
}
