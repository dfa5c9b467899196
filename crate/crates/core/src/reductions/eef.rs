use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::{AeFormula, Clause, CnfFormula, Literal, PartialAssignment};
use crate::model::{rat, ratio, Allocation, Instance, Rational, UtilitySpec};

use super::roles::{AgentRole, ReductionMap, ResourceRole};
use super::{normalized_clauses, unbalanced_vars};

/// The "extremely large" coefficient of the EEF reduction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigM {
    value: Rational,
}

impl BigM {
    pub fn value(&self) -> &Rational {
        &self.value
    }
}

/// EEF-existence instance built from a forall-exists 3CNF formula.
#[derive(Debug, Clone, PartialEq)]
pub struct EefReduction {
    /// The input with repeated literals inside a clause collapsed.
    pub formula: AeFormula,
    pub instance: Instance,
    pub roles: ReductionMap,
    pub big_m: BigM,
    /// Cells holding M or M - 1.
    m_cells: Vec<(usize, usize)>,
}

impl EefReduction {
    pub fn m_cells(&self) -> &[(usize, usize)] {
        &self.m_cells
    }

    /// Sum of absolute values of every coefficient that is not M-valued.
    pub fn non_m_magnitude(&self) -> Rational {
        let mut sum = rat(0);
        for (i, row) in self.instance.utility().matrix().iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if !self.m_cells.contains(&(i, j)) {
                    sum += v.abs();
                }
            }
        }
        sum
    }

    /// M exceeds the total magnitude of all other coefficients.
    pub fn big_m_invariant_holds(&self) -> bool {
        self.big_m.value > self.non_m_magnitude()
    }

    /// `(clause, literal)` of every universal literal resource, in resource order.
    pub fn universal_literal_resources(&self) -> Vec<(usize, Literal)> {
        self.roles
            .resource_roles()
            .iter()
            .filter_map(|r| match *r {
                ResourceRole::UniversalLiteral { clause, literal } => Some((clause, literal)),
                _ => None,
            })
            .collect()
    }
}

#[derive(Clone)]
enum Cell {
    Plain(Rational),
    M,
    MMinusOne,
}

/// The instance has an envy-free Pareto-optimal allocation iff `formula`
/// is false. Every variable must occur in both polarities.
pub fn reduce_ae3cnf_to_eef(formula: &AeFormula) -> Result<EefReduction> {
    reduce_ae3cnf_to_eef_with_m_factor(formula, 1)
}

/// As [`reduce_ae3cnf_to_eef`] with M multiplied by `factor`.
pub fn reduce_ae3cnf_to_eef_with_m_factor(
    formula: &AeFormula,
    factor: u64,
) -> Result<EefReduction> {
    if factor == 0 {
        return Err(Error::Contract("M factor must be positive".into()));
    }
    let clauses = normalized_clauses(formula.matrix())?;
    let matrix = CnfFormula::new(formula.num_vars(), clauses.clone())?;
    let missing = unbalanced_vars(&matrix);
    if !missing.is_empty() {
        let names: Vec<String> = missing.iter().map(|v| format!("x{}", v + 1)).collect();
        return Err(Error::Precondition(format!(
            "variables {} do not occur in both polarities",
            names.join(", ")
        )));
    }
    let formula = AeFormula::new(
        formula.forall_vars().to_vec(),
        formula.exists_vars().to_vec(),
        matrix,
    )?;
    let forall = formula.forall_vars();
    let exists = formula.exists_vars();
    let universal = |l: &Literal| formula.is_universal(l.var);

    let mut agents: Vec<AgentRole> = (0..clauses.len())
        .map(|clause| AgentRole::Clause { clause })
        .collect();
    for &y in exists {
        agents.push(AgentRole::ExistentialAssignment {
            literal: Literal::pos(y),
        });
        agents.push(AgentRole::ExistentialAssignment {
            literal: Literal::neg(y),
        });
    }
    for &x in forall {
        agents.push(AgentRole::UniversalAssignment {
            literal: Literal::pos(x),
        });
        agents.push(AgentRole::UniversalAssignment {
            literal: Literal::neg(x),
        });
    }
    for &x in forall {
        agents.push(AgentRole::UniversalHelper {
            literal: Literal::pos(x),
        });
        agents.push(AgentRole::UniversalHelper {
            literal: Literal::neg(x),
        });
    }
    for (clause, c) in clauses.iter().enumerate() {
        for &literal in c.iter().filter(|l| universal(l)) {
            agents.push(AgentRole::LiteralEnvyProtection { clause, literal });
        }
    }
    agents.extend([
        AgentRole::Unassigned,
        AgentRole::UnassignedEnvyProtection,
        AgentRole::Satisfied,
    ]);

    let mut resources: Vec<ResourceRole> = (0..clauses.len())
        .map(|clause| ResourceRole::Clause { clause })
        .collect();
    resources.extend((0..clauses.len()).map(|clause| ResourceRole::ClauseCompensation { clause }));
    for (clause, c) in clauses.iter().enumerate() {
        for &literal in c {
            resources.push(if universal(&literal) {
                ResourceRole::UniversalLiteral { clause, literal }
            } else {
                ResourceRole::ExistentialLiteral { clause, literal }
            });
        }
    }
    resources.extend(
        forall
            .iter()
            .map(|&var| ResourceRole::UniversalVariable { var }),
    );
    resources.extend(
        exists
            .iter()
            .map(|&var| ResourceRole::ExistentialVariable { var }),
    );
    resources.extend(
        forall
            .iter()
            .map(|&var| ResourceRole::UniversalCompensation { var }),
    );
    for &x in forall {
        resources.push(ResourceRole::UniversalHelper {
            literal: Literal::pos(x),
        });
        resources.push(ResourceRole::UniversalHelper {
            literal: Literal::neg(x),
        });
    }
    for (clause, c) in clauses.iter().enumerate() {
        for &literal in c.iter().filter(|l| universal(l)) {
            resources.push(ResourceRole::LiteralEnvyProtection { clause, literal });
        }
    }
    resources.extend([
        ResourceRole::Satisfied,
        ResourceRole::Envy1,
        ResourceRole::Envy2,
    ]);

    let roles = ReductionMap::new(agents, resources)?;
    let n = roles.agent_roles().len();
    let m = roles.resource_roles().len();
    let mut cells = vec![vec![Cell::Plain(rat(0)); m]; n];
    let mut set = |agent: AgentRole, resource: ResourceRole, cell: Cell| {
        cells[roles.a(agent)][roles.r(resource)] = cell;
    };
    let int = |v: usize| Cell::Plain(rat(v as i64));
    let occ = |l: Literal| clauses.iter().filter(|c| c.contains(&l)).count();

    for (ci, c) in clauses.iter().enumerate() {
        let o_c = ResourceRole::Clause { clause: ci };
        let comp = ResourceRole::ClauseCompensation { clause: ci };
        let a_c = AgentRole::Clause { clause: ci };
        set(a_c, o_c, Cell::M);
        set(AgentRole::Satisfied, o_c, int(1));
        set(a_c, comp, Cell::MMinusOne);
        set(AgentRole::Unassigned, comp, int(1));
        for &l in c {
            if universal(&l) {
                let ep = AgentRole::LiteralEnvyProtection {
                    clause: ci,
                    literal: l,
                };
                let o = ResourceRole::UniversalLiteral {
                    clause: ci,
                    literal: l,
                };
                set(ep, o_c, Cell::M);
                set(a_c, o, int(1));
                set(AgentRole::UniversalHelper { literal: l }, o, int(1));
                set(ep, o, int(1));
                set(
                    ep,
                    ResourceRole::LiteralEnvyProtection {
                        clause: ci,
                        literal: l,
                    },
                    Cell::M,
                );
            } else {
                let o = ResourceRole::ExistentialLiteral {
                    clause: ci,
                    literal: l,
                };
                set(a_c, o, int(1));
                set(AgentRole::ExistentialAssignment { literal: l }, o, int(1));
            }
        }
    }
    for &x in forall {
        let (p, q) = (Literal::pos(x), Literal::neg(x));
        for l in [p, q] {
            let agent = AgentRole::UniversalAssignment { literal: l };
            set(agent, ResourceRole::UniversalVariable { var: x }, int(1));
            set(
                agent,
                ResourceRole::UniversalCompensation { var: x },
                int(1),
            );
            set(agent, ResourceRole::UniversalHelper { literal: p }, int(1));
            set(agent, ResourceRole::UniversalHelper { literal: q }, int(1));
            set(
                AgentRole::UniversalHelper { literal: l },
                ResourceRole::UniversalHelper { literal: l },
                int(occ(l)),
            );
        }
        set(
            AgentRole::Unassigned,
            ResourceRole::UniversalCompensation { var: x },
            int(1),
        );
    }
    for &y in exists {
        let o = ResourceRole::ExistentialVariable { var: y };
        for l in [Literal::pos(y), Literal::neg(y)] {
            set(
                AgentRole::ExistentialAssignment { literal: l },
                o,
                int(occ(l)),
            );
        }
        set(AgentRole::Unassigned, o, int(1));
    }
    let k = forall.len() + exists.len() + clauses.len();
    set(AgentRole::Unassigned, ResourceRole::Satisfied, int(k + 1));
    set(
        AgentRole::Satisfied,
        ResourceRole::Satisfied,
        int(clauses.len()),
    );
    set(AgentRole::Unassigned, ResourceRole::Envy1, int(2 * (k + 1)));
    set(
        AgentRole::Satisfied,
        ResourceRole::Envy1,
        Cell::Plain(ratio(1, 2)),
    );
    set(
        AgentRole::Unassigned,
        ResourceRole::Envy2,
        int(2 * (k + 1) + k),
    );
    set(
        AgentRole::UnassignedEnvyProtection,
        ResourceRole::Envy2,
        Cell::M,
    );

    let mut plain_sum = rat(0);
    let mut m_cells = Vec::new();
    for (i, row) in cells.iter().enumerate() {
        for (j, cell) in row.iter().enumerate() {
            match cell {
                Cell::Plain(v) => plain_sum += v.abs(),
                Cell::M | Cell::MMinusOne => m_cells.push((i, j)),
            }
        }
    }
    let big_m = (plain_sum + rat(1)) * rat(factor as i64);
    let alpha: Vec<Vec<Rational>> = cells
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|cell| match cell {
                    Cell::Plain(v) => v,
                    Cell::M => big_m.clone(),
                    Cell::MMinusOne => &big_m - rat(1),
                })
                .collect()
        })
        .collect();

    let instance = Instance::new(
        roles.agent_ids(),
        roles.resource_ids(),
        UtilitySpec::Additive(alpha),
    )?;
    let reduction = EefReduction {
        formula,
        instance,
        roles,
        big_m: BigM { value: big_m },
        m_cells,
    };
    if !reduction.big_m_invariant_holds() {
        return Err(Error::Postcondition(
            "M does not dominate the other coefficients".into(),
        ));
    }
    Ok(reduction)
}

/// The free choices of an X∀-allocation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct XForallChoices {
    /// Per universal variable, in quantifier order: the variable resource goes
    /// to the agent of the negative literal instead of the positive one.
    pub holder_negative: Vec<bool>,
    /// Per universal literal resource, in resource order: it goes to its
    /// envy-protection agent instead of the helper. Only allowed for literals
    /// that are false under the assignment.
    pub to_envy_protection: Vec<bool>,
}

impl XForallChoices {
    /// The lowest-index option at every choice point.
    pub fn defaults(reduced: &EefReduction) -> Self {
        XForallChoices {
            holder_negative: vec![false; reduced.formula.forall_vars().len()],
            to_envy_protection: vec![false; reduced.universal_literal_resources().len()],
        }
    }

    /// Reads the choices back from an allocation, which must be exactly the
    /// X∀-allocation of `s` under them.
    pub fn infer(
        reduced: &EefReduction,
        s: &PartialAssignment,
        alloc: &Allocation,
    ) -> Result<Self> {
        let roles = &reduced.roles;
        if alloc.num_resources() != reduced.instance.num_resources() {
            return Err(Error::Precondition(
                "allocation does not fit the reduced instance".into(),
            ));
        }
        let holder_negative = reduced
            .formula
            .forall_vars()
            .iter()
            .map(|&x| {
                alloc.owner(roles.r(ResourceRole::UniversalVariable { var: x }))
                    == Some(roles.a(AgentRole::UniversalAssignment {
                        literal: Literal::neg(x),
                    }))
            })
            .collect();
        let to_envy_protection = reduced
            .universal_literal_resources()
            .into_iter()
            .map(|(clause, literal)| {
                alloc.owner(roles.r(ResourceRole::UniversalLiteral { clause, literal }))
                    == Some(roles.a(AgentRole::LiteralEnvyProtection { clause, literal }))
            })
            .collect();
        let choices = XForallChoices {
            holder_negative,
            to_envy_protection,
        };
        let rebuilt = build_x_forall_allocation(reduced, s, &choices)
            .map_err(|_| Error::Precondition("allocation is not an X∀-allocation of s".into()))?;
        if &rebuilt != alloc {
            return Err(Error::Precondition(
                "allocation is not an X∀-allocation of s".into(),
            ));
        }
        Ok(choices)
    }
}

/// Number of binary choice points past which [`x_forall_choice_space`] refuses.
const MAX_CHOICE_BITS: usize = 20;

/// Every valid choice setting for `s`, in binary counting order.
pub fn x_forall_choice_space(
    reduced: &EefReduction,
    s: &PartialAssignment,
) -> Result<Vec<XForallChoices>> {
    require_forall_assignment(reduced, s)?;
    let forall = reduced.formula.forall_vars().len();
    let literals = reduced.universal_literal_resources();
    let free: Vec<usize> = literals
        .iter()
        .enumerate()
        .filter(|(_, (_, l))| s.literal_value(*l) == Some(false))
        .map(|(i, _)| i)
        .collect();
    let bits = forall + free.len();
    if bits > MAX_CHOICE_BITS {
        return Err(Error::TooLarge(format!(
            "{bits} choice points (limit {MAX_CHOICE_BITS})"
        )));
    }
    Ok((0u64..1 << bits)
        .map(|mask| {
            let holder_negative = (0..forall).map(|k| mask >> k & 1 == 1).collect();
            let mut to_envy_protection = vec![false; literals.len()];
            for (k, &i) in free.iter().enumerate() {
                to_envy_protection[i] = mask >> (forall + k) & 1 == 1;
            }
            XForallChoices {
                holder_negative,
                to_envy_protection,
            }
        })
        .collect())
}

fn require_forall_assignment(reduced: &EefReduction, s: &PartialAssignment) -> Result<()> {
    if s.len() != reduced.formula.num_vars() || !s.is_forall_assignment(&reduced.formula) {
        return Err(Error::Precondition(format!(
            "{s} is not an assignment of exactly the universal variables"
        )));
    }
    Ok(())
}

/// The X∀-allocation of `s` under `choices`.
///
/// For a universal variable with true literal `t` and false literal `f`, the
/// variable resource goes to the chosen assignment agent, the helper resource
/// of `t` to the other assignment agent, and the helper resource of `f` to
/// the helper agent of `f`. Universal literal resources of `t` go to the
/// helper of `t`; those of `f` go to the helper of `f` or to their
/// envy-protection agent, as chosen.
pub fn build_x_forall_allocation(
    reduced: &EefReduction,
    s: &PartialAssignment,
    choices: &XForallChoices,
) -> Result<Allocation> {
    require_forall_assignment(reduced, s)?;
    let forall = reduced.formula.forall_vars();
    let literals = reduced.universal_literal_resources();
    if choices.holder_negative.len() != forall.len()
        || choices.to_envy_protection.len() != literals.len()
    {
        return Err(Error::Precondition(format!(
            "choices cover {} variables and {} literal resources, expected {} and {}",
            choices.holder_negative.len(),
            choices.to_envy_protection.len(),
            forall.len(),
            literals.len()
        )));
    }
    let roles = &reduced.roles;
    let mut alloc = Allocation::unallocated(reduced.instance.num_resources());
    let mut give = |resource: ResourceRole, agent: AgentRole| {
        alloc.set_owner(roles.r(resource), Some(roles.a(agent)));
    };

    for (clause, c) in reduced.formula.clauses().iter().enumerate() {
        give(
            ResourceRole::Clause { clause },
            AgentRole::Clause { clause },
        );
        give(
            ResourceRole::ClauseCompensation { clause },
            AgentRole::Unassigned,
        );
        for &literal in c.iter().filter(|l| !reduced.formula.is_universal(l.var)) {
            give(
                ResourceRole::ExistentialLiteral { clause, literal },
                AgentRole::ExistentialAssignment { literal },
            );
        }
    }
    for (k, &x) in forall.iter().enumerate() {
        let t = true_literal(s, x);
        let f = t.negated();
        let holder = if choices.holder_negative[k] {
            Literal::neg(x)
        } else {
            Literal::pos(x)
        };
        give(
            ResourceRole::UniversalVariable { var: x },
            AgentRole::UniversalAssignment { literal: holder },
        );
        give(
            ResourceRole::UniversalHelper { literal: t },
            AgentRole::UniversalAssignment {
                literal: holder.negated(),
            },
        );
        give(
            ResourceRole::UniversalHelper { literal: f },
            AgentRole::UniversalHelper { literal: f },
        );
        give(
            ResourceRole::UniversalCompensation { var: x },
            AgentRole::Unassigned,
        );
    }
    for ((clause, literal), &to_ep) in literals.iter().copied().zip(&choices.to_envy_protection) {
        give(
            ResourceRole::LiteralEnvyProtection { clause, literal },
            AgentRole::LiteralEnvyProtection { clause, literal },
        );
        let o = ResourceRole::UniversalLiteral { clause, literal };
        if to_ep {
            if s.literal_value(literal) == Some(true) {
                return Err(Error::Precondition(format!(
                    "{o} belongs to a true literal and must go to its helper"
                )));
            }
            give(o, AgentRole::LiteralEnvyProtection { clause, literal });
        } else {
            give(o, AgentRole::UniversalHelper { literal });
        }
    }
    for &y in reduced.formula.exists_vars() {
        give(
            ResourceRole::ExistentialVariable { var: y },
            AgentRole::Unassigned,
        );
    }
    give(ResourceRole::Envy1, AgentRole::Unassigned);
    give(ResourceRole::Envy2, AgentRole::UnassignedEnvyProtection);
    give(ResourceRole::Satisfied, AgentRole::Satisfied);

    debug_assert!(alloc.owners().iter().all(Option::is_some));
    Ok(alloc)
}

fn true_literal(s: &PartialAssignment, var: usize) -> Literal {
    Literal {
        var,
        positive: s.get(var).expect("universal variable is assigned"),
    }
}

/// Pareto-improvement of the X∀-allocation `base` of `s`, driven by a full
/// assignment `ext` that extends `s` and satisfies the matrix.
///
/// The satisfied resource moves to the unassigned agent, clause resources to
/// the satisfied agent, clause compensation resources to their clause
/// agents. Each universal variable's compensation resource goes to whoever
/// holds the helper resource of its true literal, which in turn moves to its
/// helper agent; each existential variable resource goes to the agent of its
/// true literal. Literal resources of true literals move to their clauses.
pub fn construct_improvement_eef(
    reduced: &EefReduction,
    base: &Allocation,
    s: &PartialAssignment,
    ext: &PartialAssignment,
) -> Result<Allocation> {
    XForallChoices::infer(reduced, s, base)?;
    let full = ext
        .to_full()
        .filter(|_| ext.extends(s))
        .ok_or_else(|| Error::Precondition(format!("{ext} is not a full extension of {s}")))?;
    if !reduced.formula.matrix().evaluate(&full) {
        return Err(Error::Precondition(format!(
            "{ext} does not satisfy the formula"
        )));
    }

    let roles = &reduced.roles;
    let mut alloc = base.clone();
    let give = |alloc: &mut Allocation, resource: ResourceRole, agent: usize| {
        alloc.set_owner(roles.r(resource), Some(agent));
    };
    let unassigned = roles.a(AgentRole::Unassigned);
    let satisfied = roles.a(AgentRole::Satisfied);

    give(&mut alloc, ResourceRole::Satisfied, unassigned);
    let clauses: &[Clause] = reduced.formula.clauses();
    for (clause, c) in clauses.iter().enumerate() {
        let a_c = roles.a(AgentRole::Clause { clause });
        give(&mut alloc, ResourceRole::Clause { clause }, satisfied);
        give(&mut alloc, ResourceRole::ClauseCompensation { clause }, a_c);
        for &literal in c.iter().filter(|l| l.is_true_under(full[l.var])) {
            let o = if reduced.formula.is_universal(literal.var) {
                ResourceRole::UniversalLiteral { clause, literal }
            } else {
                ResourceRole::ExistentialLiteral { clause, literal }
            };
            give(&mut alloc, o, a_c);
        }
    }
    for &x in reduced.formula.forall_vars() {
        let t = true_literal(s, x);
        let helper_resource = ResourceRole::UniversalHelper { literal: t };
        let holder = base
            .owner(roles.r(helper_resource))
            .ok_or_else(|| Error::Precondition(format!("{helper_resource} is unallocated")))?;
        give(
            &mut alloc,
            ResourceRole::UniversalCompensation { var: x },
            holder,
        );
        give(
            &mut alloc,
            helper_resource,
            roles.a(AgentRole::UniversalHelper { literal: t }),
        );
    }
    for &y in reduced.formula.exists_vars() {
        let t = Literal {
            var: y,
            positive: full[y],
        };
        give(
            &mut alloc,
            ResourceRole::ExistentialVariable { var: y },
            roles.a(AgentRole::ExistentialAssignment { literal: t }),
        );
    }
    Ok(alloc)
}
