//! Leximin-maximal allocation for agents with max-utility functions and
//! atomic demands.
//!
//! Every (agent, resource) demand is turned into an integer edge weight so
//! that a higher demand always gets a strictly smaller weight, and every
//! weight dominates the total weight of all higher demands. A minimum-weight
//! maximum matching on the complete agent/resource bipartite graph then
//! gives each agent at most one resource and maximizes the sorted utility
//! vector lexicographically.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{Pow, Zero};

use crate::error::{contract, Result};
use crate::model::{
    leximin_compare, utility_vector, Allocation, Instance, LeximinOrdering, Rational, UtilityKind,
    UtilityVector,
};

/// Edge weights `weights[agent][resource]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightMatrix {
    weights: Vec<Vec<BigUint>>,
    num_resources: usize,
}

impl WeightMatrix {
    pub fn from_rows(weights: Vec<Vec<BigUint>>) -> Result<Self> {
        let num_resources = weights.first().map_or(0, Vec::len);
        if let Some(i) = weights.iter().position(|r| r.len() != num_resources) {
            return Err(contract(format!("weight row {i} has the wrong length")));
        }
        Ok(WeightMatrix {
            weights,
            num_resources,
        })
    }

    pub fn from_u64_rows(rows: &[Vec<u64>]) -> Result<Self> {
        WeightMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|w| BigUint::from(*w)).collect())
                .collect(),
        )
    }

    pub fn num_agents(&self) -> usize {
        self.weights.len()
    }

    pub fn num_resources(&self) -> usize {
        self.num_resources
    }

    pub fn get(&self, agent: usize, resource: usize) -> &BigUint {
        &self.weights[agent][resource]
    }

    pub fn rows(&self) -> &[Vec<BigUint>] {
        &self.weights
    }
}

/// Agent/resource pairs, sorted by agent.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matching {
    pairs: Vec<(usize, usize)>,
}

impl Matching {
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn total_weight(&self, weights: &WeightMatrix) -> BigUint {
        self.pairs.iter().map(|&(a, r)| weights.get(a, r)).sum()
    }

    pub fn to_allocation(&self, num_resources: usize) -> Allocation {
        let mut alloc = Allocation::unallocated(num_resources);
        for &(a, r) in &self.pairs {
            alloc.set_owner(r, Some(a));
        }
        alloc
    }
}

/// Weights for a max-atomic instance. Distinct demand values are visited
/// in descending order; each gets one more than the running total of all
/// weights handed out so far (counted with multiplicity).
pub fn generate_weights(instance: &Instance) -> Result<WeightMatrix> {
    instance.require_kind(UtilityKind::MaxAtomic)?;
    let demands = instance.utility().matrix();

    let mut counts: BTreeMap<&Rational, u64> = BTreeMap::new();
    for d in demands.iter().flatten() {
        *counts.entry(d).or_default() += 1;
    }

    let mut level_weight: BTreeMap<&Rational, BigUint> = BTreeMap::new();
    let mut running = BigUint::zero();
    for (value, count) in counts.iter().rev() {
        let weight = &running + 1u32;
        running += &weight * *count;
        level_weight.insert(*value, weight);
    }

    WeightMatrix::from_rows(
        demands
            .iter()
            .map(|row| row.iter().map(|d| level_weight[d].clone()).collect())
            .collect(),
    )
}

/// A maximum-cardinality matching of minimum total weight. Among optimal
/// matchings, the one whose agent-sorted pair list is lexicographically
/// smallest is returned.
pub fn min_weight_max_matching(weights: &WeightMatrix) -> Matching {
    let n = weights.num_agents();
    let m = weights.num_resources();
    if n == 0 || m == 0 {
        return Matching { pairs: Vec::new() };
    }

    // Tie-break: per agent i the matched column (or `m` for none) is a
    // base-(m+1) digit of weight (m+1)^(n-1-i). Scaling the real weights by
    // (m+1)^n keeps the tie-break strictly below one unit of real weight.
    let base = BigInt::from(m + 1);
    let digit: Vec<BigInt> = (0..n)
        .map(|i| Pow::pow(&base, (n - 1 - i) as u32))
        .collect();
    let scale: BigInt = Pow::pow(&base, n as u32);

    let cols = m.max(n);
    let cost: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            (0..cols)
                .map(|j| {
                    if j < m {
                        BigInt::from(weights.get(i, j).clone()) * &scale + &digit[i] * j
                    } else {
                        &digit[i] * m
                    }
                })
                .collect()
        })
        .collect();

    let row_to_col = hungarian(&cost);
    let mut pairs: Vec<(usize, usize)> = row_to_col
        .into_iter()
        .enumerate()
        .filter(|&(_, j)| j < m)
        .collect();
    pairs.sort_unstable();
    Matching { pairs }
}

/// Minimum-cost assignment of every row to a distinct column (rows <= cols),
/// via shortest augmenting paths with dual potentials. Returns the column of
/// each row.
fn hungarian(cost: &[Vec<BigInt>]) -> Vec<usize> {
    let n = cost.len();
    let m = cost[0].len();
    debug_assert!(n <= m);

    // 1-based; index 0 is the virtual root.
    let mut u = vec![BigInt::zero(); n + 1];
    let mut v = vec![BigInt::zero(); m + 1];
    let mut p = vec![0usize; m + 1];
    let mut way = vec![0usize; m + 1];
    let mut minv: Vec<Option<BigInt>> = vec![None; m + 1];
    let mut used = vec![false; m + 1];
    let mut cur = BigInt::zero();

    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        minv.iter_mut().for_each(|x| *x = None);
        used.iter_mut().for_each(|x| *x = false);
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut j1 = 0usize;
            for j in 1..=m {
                if used[j] {
                    continue;
                }
                cur.clone_from(&cost[i0 - 1][j - 1]);
                cur -= &u[i0];
                cur -= &v[j];
                let better = match &minv[j] {
                    None => true,
                    Some(mv) => cur < *mv,
                };
                if better {
                    match &mut minv[j] {
                        Some(mv) => mv.clone_from(&cur),
                        slot => *slot = Some(cur.clone()),
                    }
                    way[j] = j0;
                }
                if j1 == 0 || minv[j] < minv[j1] {
                    j1 = j;
                }
            }
            let delta = minv[j1].clone().expect("complete graph has a frontier");
            for j in 0..=m {
                if used[j] {
                    u[p[j]] += &delta;
                    v[j] -= &delta;
                } else if let Some(mv) = &mut minv[j] {
                    *mv -= &delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut row_to_col = vec![0usize; n];
    for j in 1..=m {
        if p[j] != 0 {
            row_to_col[p[j] - 1] = j - 1;
        }
    }
    row_to_col
}

/// Leximin-maximal allocation of a max-atomic instance. Each agent receives
/// at most one resource; agents left out of the matching get nothing.
pub fn solve_leximin(instance: &Instance) -> Result<Allocation> {
    let weights = generate_weights(instance)?;
    let matching = min_weight_max_matching(&weights);
    Ok(matching.to_allocation(instance.num_resources()))
}

/// Whether some admissible allocation is leximin-strictly better than `k`.
pub fn decide_lmmuab(instance: &Instance, k: &UtilityVector) -> Result<bool> {
    if k.len() != instance.num_agents() {
        return Err(contract(format!(
            "threshold vector has length {}, instance has {} agents",
            k.len(),
            instance.num_agents()
        )));
    }
    let best = utility_vector(instance, &solve_leximin(instance)?)?;
    Ok(leximin_compare(k, &best)? == LeximinOrdering::Less)
}

/// Bit length of the largest weight; handy for reporting.
pub fn max_weight_bits(weights: &WeightMatrix) -> u64 {
    weights
        .rows()
        .iter()
        .flatten()
        .map(BigUint::bits)
        .max()
        .unwrap_or(0)
}
