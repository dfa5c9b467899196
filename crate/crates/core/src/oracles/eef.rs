use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::PartialAssignment;
use crate::model::{is_envy_free, Allocation, Instance, UtilityKind};
use crate::reductions::{
    build_x_forall_allocation, x_forall_choice_space, EefReduction, XForallChoices,
};

use super::dominance::dominance_search;
use super::sat::MAX_ENUMERATED_VARS;
use super::{NodeMeter, SearchBudget, Searched, TriVerdict};

/// Envy-free Pareto-optimal allocation by enumeration.
///
/// Only allocations that could be Pareto-optimal are enumerated: a resource
/// some agent values positively goes to one of those agents; any other
/// resource is withheld or given to an agent that values it at zero. Each
/// envy-free candidate is then checked with the dominance search. One node
/// is charged per candidate, on top of the dominance search nodes.
pub fn brute_force_eef(instance: &Instance, budget: SearchBudget) -> Result<Searched<Allocation>> {
    instance.require_kind(UtilityKind::Additive)?;
    let n = instance.num_agents();
    let options: Vec<Vec<Option<usize>>> = (0..instance.num_resources())
        .map(|j| {
            let positive: Vec<Option<usize>> = (0..n)
                .filter(|&i| instance.value(i, j).is_positive())
                .map(Some)
                .collect();
            if !positive.is_empty() {
                return positive;
            }
            let mut opts = vec![None];
            opts.extend((0..n).filter(|&i| instance.value(i, j).is_zero()).map(Some));
            opts
        })
        .collect();

    let mut meter = NodeMeter::new(budget);
    let mut digits = vec![0usize; options.len()];
    loop {
        if !meter.tick() {
            return Ok(unknown(&meter));
        }
        let alloc =
            Allocation::from_owners(digits.iter().zip(&options).map(|(&d, o)| o[d]).collect());
        if is_envy_free(instance, &alloc)?.is_envy_free() {
            match dominance_search(instance, &alloc, &mut meter)? {
                TriVerdict::No(()) => {
                    return Ok(Searched {
                        verdict: TriVerdict::Yes(alloc),
                        nodes: meter.used,
                    })
                }
                TriVerdict::Yes(_) => {}
                TriVerdict::Unknown => return Ok(unknown(&meter)),
            }
        }
        let mut k = 0;
        while k < digits.len() && digits[k] + 1 == options[k].len() {
            digits[k] = 0;
            k += 1;
        }
        if k == digits.len() {
            return Ok(Searched {
                verdict: TriVerdict::No(()),
                nodes: meter.used,
            });
        }
        digits[k] += 1;
    }
}

fn unknown<Y>(meter: &NodeMeter) -> Searched<Y> {
    Searched {
        verdict: TriVerdict::Unknown,
        nodes: meter.limit,
    }
}

/// Which choice settings of each X∀-allocation to try.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChoiceScope {
    Default,
    All,
}

/// An envy-free Pareto-optimal X∀-allocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyHit {
    pub allocation: Allocation,
    pub assignment: PartialAssignment,
    pub choices: XForallChoices,
}

/// EEF search restricted to X∀-allocations: every assignment of the
/// universal variables (binary counting, first universal variable lowest),
/// under the default choices or all of them. Envy-free candidates are
/// certified with the dominance search; the first undominated one is
/// returned.
pub fn search_x_forall_family(
    reduced: &EefReduction,
    scope: ChoiceScope,
    budget: SearchBudget,
) -> Result<Searched<FamilyHit>> {
    let forall = reduced.formula.forall_vars();
    if forall.len() > MAX_ENUMERATED_VARS {
        return Err(Error::TooLarge(format!(
            "{} universal variables (limit {MAX_ENUMERATED_VARS})",
            forall.len()
        )));
    }
    let mut meter = NodeMeter::new(budget);
    let mut incomplete = false;
    for mask in 0u64..(1u64 << forall.len()) {
        let s = PartialAssignment::forall_from_mask(&reduced.formula, mask);
        let settings = match scope {
            ChoiceScope::Default => vec![XForallChoices::defaults(reduced)],
            ChoiceScope::All => x_forall_choice_space(reduced, &s)?,
        };
        for choices in settings {
            if !meter.tick() {
                return Ok(unknown(&meter));
            }
            let alloc = build_x_forall_allocation(reduced, &s, &choices)?;
            if !is_envy_free(&reduced.instance, &alloc)?.is_envy_free() {
                continue;
            }
            match dominance_search(&reduced.instance, &alloc, &mut meter)? {
                TriVerdict::No(()) => {
                    return Ok(Searched {
                        verdict: TriVerdict::Yes(FamilyHit {
                            allocation: alloc,
                            assignment: s,
                            choices,
                        }),
                        nodes: meter.used,
                    })
                }
                TriVerdict::Yes(_) => {}
                TriVerdict::Unknown => {
                    incomplete = true;
                    break;
                }
            }
        }
        if incomplete {
            break;
        }
    }
    let verdict = if incomplete {
        TriVerdict::Unknown
    } else {
        TriVerdict::No(())
    };
    Ok(Searched {
        verdict,
        nodes: meter.used.min(meter.limit),
    })
}
