use crate::error::{Error, Result};
use crate::formula::{Clause, CnfFormula, Literal};
use crate::model::{rat, Allocation, Instance, Rational, UtilitySpec};

use super::normalized_clauses;
use super::roles::{AgentRole, ReductionMap, ResourceRole};

/// Pareto-optimality instance built from a 3CNF formula.
#[derive(Debug, Clone, PartialEq)]
pub struct PoReduction {
    /// The input with repeated literals inside a clause collapsed.
    pub formula: CnfFormula,
    pub instance: Instance,
    pub baseline: Allocation,
    pub roles: ReductionMap,
}

/// The baseline allocation is Pareto-optimal iff `formula` is unsatisfiable.
pub fn reduce_3cnf_to_po(formula: &CnfFormula) -> Result<PoReduction> {
    let clauses = normalized_clauses(formula)?;
    let w = formula.num_vars();
    let formula = CnfFormula::new(w, clauses.clone())?;

    let mut agents: Vec<AgentRole> = (0..clauses.len())
        .map(|clause| AgentRole::Clause { clause })
        .collect();
    for v in 0..w {
        agents.push(AgentRole::LiteralSet {
            literal: Literal::pos(v),
        });
        agents.push(AgentRole::LiteralSet {
            literal: Literal::neg(v),
        });
    }
    agents.push(AgentRole::Unassigned);
    agents.push(AgentRole::Satisfied);

    let mut resources: Vec<ResourceRole> =
        (0..w).map(|var| ResourceRole::Variable { var }).collect();
    resources.extend((0..clauses.len()).map(|clause| ResourceRole::Clause { clause }));
    for (clause, c) in clauses.iter().enumerate() {
        resources.extend(
            c.iter()
                .map(|&literal| ResourceRole::ClauseLiteral { clause, literal }),
        );
    }
    resources.push(ResourceRole::Satisfied);

    let roles = ReductionMap::new(agents, resources)?;
    let mut alpha = vec![vec![rat(0); roles.resource_roles().len()]; roles.agent_roles().len()];
    let mut owner = vec![None; roles.resource_roles().len()];
    let unassigned = roles.a(AgentRole::Unassigned);
    let satisfied = roles.a(AgentRole::Satisfied);

    for v in 0..w {
        let o = roles.r(ResourceRole::Variable { var: v });
        alpha[unassigned][o] = rat(1);
        for literal in [Literal::pos(v), Literal::neg(v)] {
            let count = occurrences(&clauses, literal);
            alpha[roles.a(AgentRole::LiteralSet { literal })][o] =
                Rational::from_integer(count.into());
        }
        owner[o] = Some(unassigned);
    }
    for (ci, c) in clauses.iter().enumerate() {
        let agent = roles.a(AgentRole::Clause { clause: ci });
        let o = roles.r(ResourceRole::Clause { clause: ci });
        alpha[satisfied][o] = rat(1);
        alpha[agent][o] = rat(1);
        owner[o] = Some(agent);
        for &literal in c {
            let o = roles.r(ResourceRole::ClauseLiteral {
                clause: ci,
                literal,
            });
            let set = roles.a(AgentRole::LiteralSet { literal });
            alpha[set][o] = rat(1);
            alpha[agent][o] = rat(1);
            owner[o] = Some(set);
        }
    }
    let o_sat = roles.r(ResourceRole::Satisfied);
    alpha[satisfied][o_sat] = rat(clauses.len() as i64);
    alpha[unassigned][o_sat] = rat(w as i64 + 1);
    owner[o_sat] = Some(satisfied);

    let instance = Instance::new(
        roles.agent_ids(),
        roles.resource_ids(),
        UtilitySpec::Additive(alpha),
    )?;
    Ok(PoReduction {
        formula,
        instance,
        baseline: Allocation::from_owners(owner),
        roles,
    })
}

fn occurrences(clauses: &[Clause], literal: Literal) -> usize {
    clauses.iter().filter(|c| c.contains(&literal)).count()
}

/// Pareto-improvement of the baseline driven by a satisfying assignment:
/// each variable resource goes to the agent of its true literal, the literal
/// resources of true literals go to their clause agents, every clause
/// resource goes to the satisfied agent, and the satisfied resource goes to
/// the unassigned agent.
pub fn construct_improvement_po(reduced: &PoReduction, sat: &[bool]) -> Result<Allocation> {
    let formula = &reduced.formula;
    if sat.len() != formula.num_vars() {
        return Err(Error::Precondition(format!(
            "assignment has {} values, formula has {} variables",
            sat.len(),
            formula.num_vars()
        )));
    }
    if !formula.evaluate(sat) {
        return Err(Error::Precondition(
            "assignment does not satisfy the formula".into(),
        ));
    }
    let roles = &reduced.roles;
    let mut alloc = reduced.baseline.clone();
    for (v, &value) in sat.iter().enumerate() {
        let t = Literal {
            var: v,
            positive: value,
        };
        let set = roles.a(AgentRole::LiteralSet { literal: t });
        alloc.set_owner(roles.r(ResourceRole::Variable { var: v }), Some(set));
    }
    for (ci, c) in formula.clauses().iter().enumerate() {
        let agent = roles.a(AgentRole::Clause { clause: ci });
        for &literal in c.iter().filter(|l| l.is_true_under(sat[l.var])) {
            alloc.set_owner(
                roles.r(ResourceRole::ClauseLiteral {
                    clause: ci,
                    literal,
                }),
                Some(agent),
            );
        }
        alloc.set_owner(
            roles.r(ResourceRole::Clause { clause: ci }),
            Some(roles.a(AgentRole::Satisfied)),
        );
    }
    alloc.set_owner(
        roles.r(ResourceRole::Satisfied),
        Some(roles.a(AgentRole::Unassigned)),
    );
    Ok(alloc)
}
