//! Search for an allocation that Pareto-dominates a given baseline under
//! additive utilities.
//!
//! The pruned search only places a resource with an agent that values it
//! positively, or leaves it unallocated: any dominating allocation can be
//! rewritten into that shape by dropping resources held at non-positive
//! value. Each agent carries a slack, its best still-reachable utility
//! minus its baseline utility, and no placement may drive a slack below
//! zero. The next resource to branch on is the one with the fewest
//! placements left.

use std::ops::SubAssign;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::model::{
    pareto_dominates, utility_vector, Allocation, Instance, UtilityKind, UtilitySpec,
};

use super::{NodeMeter, SearchBudget, Searched, TriVerdict};

/// Proof-of-work for a completed search that found no dominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OptimalityCertificate {
    pub nodes: u64,
}

pub fn find_dominating_allocation(
    instance: &Instance,
    baseline: &Allocation,
    budget: SearchBudget,
) -> Result<Searched<Allocation>> {
    let mut meter = NodeMeter::new(budget);
    let verdict = dominance_search(instance, baseline, &mut meter)?;
    Ok(Searched {
        verdict,
        nodes: meter.used.min(meter.limit),
    })
}

/// `Yes` when no dominating allocation exists, `No` with a dominating
/// witness otherwise.
pub fn is_pareto_optimal(
    instance: &Instance,
    alloc: &Allocation,
    budget: SearchBudget,
) -> Result<Searched<OptimalityCertificate, Allocation>> {
    let found = find_dominating_allocation(instance, alloc, budget)?;
    let verdict = match found.verdict {
        TriVerdict::Yes(witness) => TriVerdict::No(witness),
        TriVerdict::No(()) => TriVerdict::Yes(OptimalityCertificate { nodes: found.nodes }),
        TriVerdict::Unknown => TriVerdict::Unknown,
    };
    Ok(Searched {
        verdict,
        nodes: found.nodes,
    })
}

/// Plain enumeration of all `(n+1)^m` allocations, one node per allocation.
pub fn find_dominating_allocation_unpruned(
    instance: &Instance,
    baseline: &Allocation,
    budget: SearchBudget,
) -> Result<Searched<Allocation>> {
    instance.require_kind(UtilityKind::Additive)?;
    let base = utility_vector(instance, baseline)?;
    let n = instance.num_agents();
    let m = instance.num_resources();
    let mut meter = NodeMeter::new(budget);
    let mut digits = vec![0usize; m];
    loop {
        if !meter.tick() {
            return Ok(Searched {
                verdict: TriVerdict::Unknown,
                nodes: meter.limit,
            });
        }
        let alloc = Allocation::from_owners(digits.iter().map(|&d| (d < n).then_some(d)).collect());
        if pareto_dominates(&utility_vector(instance, &alloc)?, &base) {
            return Ok(Searched {
                verdict: TriVerdict::Yes(alloc),
                nodes: meter.used,
            });
        }
        let mut k = 0;
        while k < m && digits[k] == n {
            digits[k] = 0;
            k += 1;
        }
        if k == m {
            return Ok(Searched {
                verdict: TriVerdict::No(()),
                nodes: meter.used,
            });
        }
        digits[k] += 1;
    }
}

pub(crate) fn dominance_search(
    instance: &Instance,
    baseline: &Allocation,
    meter: &mut NodeMeter,
) -> Result<TriVerdict<Allocation>> {
    instance.require_kind(UtilityKind::Additive)?;
    baseline.check(instance)?;
    let found = match scale_to_integers(instance) {
        Scaled::Small(coeff) => run_search(&coeff, baseline, meter),
        Scaled::Big(coeff) => run_search(&coeff, baseline, meter),
    };
    match found {
        Outcome::Found(owners) => {
            let witness = Allocation::from_owners(owners);
            let cand = utility_vector(instance, &witness)?;
            let base = utility_vector(instance, baseline)?;
            if !pareto_dominates(&cand, &base) {
                return Err(Error::Postcondition(
                    "dominance search returned a non-dominating witness".into(),
                ));
            }
            Ok(TriVerdict::Yes(witness))
        }
        Outcome::Exhausted => Ok(TriVerdict::No(())),
        Outcome::OutOfBudget => Ok(TriVerdict::Unknown),
    }
}

enum Scaled {
    Small(Vec<Vec<i128>>),
    Big(Vec<Vec<BigInt>>),
}

/// Multiplies every coefficient by the common denominator. Uses `i128`
/// when the total magnitude leaves plenty of headroom.
fn scale_to_integers(instance: &Instance) -> Scaled {
    let UtilitySpec::Additive(rows) = instance.utility() else {
        unreachable!("kind checked by caller")
    };
    let denom = rows
        .iter()
        .flatten()
        .fold(BigInt::from(1), |acc, q| acc.lcm(q.denom()));
    let big: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|q| q.numer() * (&denom / q.denom()))
                .collect()
        })
        .collect();
    let magnitude: BigInt = big.iter().flatten().map(|x| x.abs()).sum();
    if magnitude < BigInt::from(i128::MAX >> 8) {
        Scaled::Small(
            big.iter()
                .map(|row| row.iter().map(|x| x.to_i128().expect("bounded")).collect())
                .collect(),
        )
    } else {
        Scaled::Big(big)
    }
}

enum Outcome {
    Found(Vec<Option<usize>>),
    Exhausted,
    OutOfBudget,
}

trait Amount: Clone + Ord + Zero + for<'x> SubAssign<&'x Self> + std::ops::AddAssign<Self> {}
impl<T> Amount for T where T: Clone + Ord + Zero + for<'x> SubAssign<&'x T> + std::ops::AddAssign<T> {}

fn run_search<T: Amount>(
    coeff: &[Vec<T>],
    baseline: &Allocation,
    meter: &mut NodeMeter,
) -> Outcome {
    let n = coeff.len();
    let m = baseline.num_resources();
    let zero = T::zero();

    let cands: Vec<Vec<usize>> = (0..m)
        .map(|r| (0..n).filter(|&i| coeff[i][r] > zero).collect())
        .collect();

    // slack = (sum of positive coefficients) - (baseline utility)
    let mut slack: Vec<T> = vec![T::zero(); n];
    for (r, agents) in cands.iter().enumerate() {
        for &i in agents {
            slack[i] += coeff[i][r].clone();
        }
    }
    for (r, owner) in baseline.owners().iter().enumerate() {
        if let Some(i) = owner {
            slack[*i] -= &coeff[*i][r];
        }
    }
    if slack.iter().any(|s| *s < zero) {
        // cannot happen for a valid baseline; treated as nothing to find
        return Outcome::Exhausted;
    }
    let positive = slack.iter().filter(|s| **s > zero).count();

    let mut dfs = Dfs {
        coeff,
        cands,
        slack,
        positive,
        owner: vec![None; m],
        undecided: m,
        meter,
        zero,
    };
    match dfs.run() {
        Step::Found => Outcome::Found(
            dfs.owner
                .into_iter()
                .map(|o| o.expect("leaf decides every resource"))
                .collect(),
        ),
        Step::Exhausted => Outcome::Exhausted,
        Step::OutOfBudget => Outcome::OutOfBudget,
    }
}

enum Step {
    Found,
    Exhausted,
    OutOfBudget,
}

struct Dfs<'a, T> {
    coeff: &'a [Vec<T>],
    cands: Vec<Vec<usize>>,
    slack: Vec<T>,
    /// agents whose slack is still positive; zero means no strict gain is possible
    positive: usize,
    owner: Vec<Option<Option<usize>>>,
    undecided: usize,
    meter: &'a mut NodeMeter,
    zero: T,
}

impl<T: Amount> Dfs<'_, T> {
    fn run(&mut self) -> Step {
        if !self.meter.tick() {
            return Step::OutOfBudget;
        }
        if self.positive == 0 {
            return Step::Exhausted;
        }
        if self.undecided == 0 {
            return Step::Found;
        }

        // (resource, forced owner, option count)
        let mut pick: Option<(usize, Option<usize>, usize)> = None;
        for r in 0..self.owner.len() {
            if self.owner[r].is_some() {
                continue;
            }
            let mut blockers = 0;
            let mut blocker = None;
            for &i in &self.cands[r] {
                if self.slack[i] < self.coeff[i][r] {
                    blockers += 1;
                    blocker = Some(i);
                }
            }
            let count = match blockers {
                0 => self.cands[r].len() + 1,
                1 => 1,
                _ => return Step::Exhausted,
            };
            if pick.is_none_or(|(_, _, c)| count < c) {
                pick = Some((r, blocker, count));
            }
        }
        let (r, forced, _) = pick.expect("some resource is undecided");

        let options: Vec<Option<usize>> = match forced {
            Some(i) => vec![Some(i)],
            None => self.cands[r]
                .iter()
                .map(|&i| Some(i))
                .chain([None])
                .collect(),
        };
        for choice in options {
            self.assign(r, choice);
            match self.run() {
                Step::Exhausted => self.unassign(r, choice),
                done => return done,
            }
        }
        Step::Exhausted
    }

    fn assign(&mut self, r: usize, choice: Option<usize>) {
        self.owner[r] = Some(choice);
        self.undecided -= 1;
        for k in 0..self.cands[r].len() {
            let i = self.cands[r][k];
            if Some(i) == choice {
                continue;
            }
            let was_positive = self.slack[i] > self.zero;
            self.slack[i] -= &self.coeff[i][r];
            if was_positive && self.slack[i] <= self.zero {
                self.positive -= 1;
            }
        }
    }

    fn unassign(&mut self, r: usize, choice: Option<usize>) {
        self.owner[r] = None;
        self.undecided += 1;
        for k in 0..self.cands[r].len() {
            let i = self.cands[r][k];
            if Some(i) == choice {
                continue;
            }
            let was_positive = self.slack[i] > self.zero;
            self.slack[i] += self.coeff[i][r].clone();
            if !was_positive && self.slack[i] > self.zero {
                self.positive += 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{rat, ratio, UtilityKind};

    fn additive(rows: &[&[i64]]) -> Instance {
        Instance::from_matrix(
            UtilityKind::Additive,
            rows.iter()
                .map(|r| r.iter().map(|v| rat(*v)).collect())
                .collect(),
        )
        .unwrap()
    }

    fn budget() -> SearchBudget {
        SearchBudget::new(1_000_000).unwrap()
    }

    #[test]
    fn zero_coefficient_holder_is_dominated() {
        let inst = additive(&[&[0], &[2]]);
        let baseline = Allocation::from_owners(vec![Some(0)]);
        let found = find_dominating_allocation(&inst, &baseline, budget()).unwrap();
        let witness = found.verdict.yes().expect("dominated");
        assert_eq!(witness.owners(), &[Some(1)]);
    }

    #[test]
    fn personal_maxima_are_not_dominated() {
        let inst = additive(&[&[3, 0], &[0, 1]]);
        let baseline = Allocation::from_owners(vec![Some(0), Some(1)]);
        let found = find_dominating_allocation(&inst, &baseline, budget()).unwrap();
        assert!(found.verdict.is_no());
        let po = is_pareto_optimal(&inst, &baseline, budget()).unwrap();
        assert!(po.verdict.is_yes());
    }

    #[test]
    fn empty_resource_set_is_optimal() {
        let inst = Instance::from_matrix(UtilityKind::Additive, vec![vec![], vec![]]).unwrap();
        let po = is_pareto_optimal(&inst, &Allocation::unallocated(0), budget()).unwrap();
        assert!(po.verdict.is_yes());
    }

    #[test]
    fn negative_coefficients_and_fractions() {
        let inst = Instance::from_matrix(
            UtilityKind::Additive,
            vec![vec![rat(-1), ratio(1, 2)], vec![ratio(1, 3), rat(0)]],
        )
        .unwrap();
        // agent 0 holds a resource it dislikes
        let baseline = Allocation::from_owners(vec![Some(0), Some(0)]);
        let found = find_dominating_allocation(&inst, &baseline, budget()).unwrap();
        assert!(found.verdict.is_yes());
        let unpruned = find_dominating_allocation_unpruned(&inst, &baseline, budget()).unwrap();
        assert!(unpruned.verdict.is_yes());
    }

    #[test]
    fn tiny_budget_gives_unknown() {
        let inst = additive(&[&[1, 1, 1], &[1, 1, 1]]);
        let baseline = Allocation::from_owners(vec![Some(0), Some(1), Some(0)]);
        let found =
            find_dominating_allocation(&inst, &baseline, SearchBudget::new(1).unwrap()).unwrap();
        assert!(found.verdict.is_unknown());
        assert!(SearchBudget::new(0).is_err());
    }

    #[test]
    fn huge_coefficients_use_big_path() {
        let big = rat(i64::MAX);
        let inst = Instance::from_matrix(
            UtilityKind::Additive,
            vec![
                vec![big.clone() * big.clone(), rat(1)],
                vec![rat(0), rat(1)],
            ],
        )
        .unwrap();
        let baseline = Allocation::from_owners(vec![None, Some(1)]);
        let found = find_dominating_allocation(&inst, &baseline, budget()).unwrap();
        assert_eq!(found.verdict.yes().unwrap().owners(), &[Some(0), Some(1)]);
    }
}
