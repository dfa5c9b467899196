//! Exact-arithmetic allocation model: instances, allocations, utility
//! vectors, the leximin order, envy-freeness and Pareto dominance.
//!
//! Every number is a [`Rational`] (an arbitrary-precision fraction), so
//! comparisons made by the checkers and the reductions are exact.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{contract, Error, Result};

pub type Rational = BigRational;

/// Integer-valued rational.
pub fn rat(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// `numer / denom` as a reduced rational. Panics on a zero denominator.
pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UtilityKind {
    Additive,
    MaxAtomic,
}

impl UtilityKind {
    pub fn name(self) -> &'static str {
        match self {
            UtilityKind::Additive => "additive",
            UtilityKind::MaxAtomic => "max-atomic",
        }
    }
}

impl fmt::Display for UtilityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Per-agent, per-resource numbers; row `i` belongs to agent `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UtilitySpec {
    /// Bundle utility is the sum of the agent's coefficients.
    Additive(Vec<Vec<Rational>>),
    /// Bundle utility is the largest single-resource demand in the bundle,
    /// and zero for the empty bundle.
    MaxAtomic(Vec<Vec<Rational>>),
}

impl UtilitySpec {
    pub fn kind(&self) -> UtilityKind {
        match self {
            UtilitySpec::Additive(_) => UtilityKind::Additive,
            UtilitySpec::MaxAtomic(_) => UtilityKind::MaxAtomic,
        }
    }

    pub fn matrix(&self) -> &[Vec<Rational>] {
        match self {
            UtilitySpec::Additive(m) | UtilitySpec::MaxAtomic(m) => m,
        }
    }
}

/// An allocation setting: agents, resources and their utilities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    agents: Vec<String>,
    resources: Vec<String>,
    utility: UtilitySpec,
}

impl Instance {
    /// Validates dimensions, id uniqueness and (for max-atomic utilities)
    /// non-negative demands.
    pub fn new(agents: Vec<String>, resources: Vec<String>, utility: UtilitySpec) -> Result<Self> {
        if agents.is_empty() {
            return Err(Error::InvalidInstance(
                "at least one agent is required".into(),
            ));
        }
        let matrix = utility.matrix();
        if matrix.len() != agents.len() {
            return Err(Error::InvalidInstance(format!(
                "matrix has {} rows but there are {} agents",
                matrix.len(),
                agents.len()
            )));
        }
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != resources.len() {
                return Err(Error::InvalidInstance(format!(
                    "matrix row {i} has {} entries but there are {} resources",
                    row.len(),
                    resources.len()
                )));
            }
        }
        check_unique("agent", &agents)?;
        check_unique("resource", &resources)?;
        if let UtilitySpec::MaxAtomic(demands) = &utility {
            for (i, row) in demands.iter().enumerate() {
                if let Some(j) = row.iter().position(|d| d.is_negative()) {
                    return Err(Error::InvalidInstance(format!(
                        "negative max-atomic demand {} for agent {} on resource {}",
                        row[j], agents[i], resources[j]
                    )));
                }
            }
        }
        Ok(Instance {
            agents,
            resources,
            utility,
        })
    }

    /// Instance with generated ids `a1..an` and `o1..om`.
    pub fn from_matrix(kind: UtilityKind, matrix: Vec<Vec<Rational>>) -> Result<Self> {
        let n = matrix.len();
        let m = matrix.first().map_or(0, Vec::len);
        let agents = (1..=n).map(|i| format!("a{i}")).collect();
        let resources = (1..=m).map(|j| format!("o{j}")).collect();
        let utility = match kind {
            UtilityKind::Additive => UtilitySpec::Additive(matrix),
            UtilityKind::MaxAtomic => UtilitySpec::MaxAtomic(matrix),
        };
        Instance::new(agents, resources, utility)
    }

    pub fn agents(&self) -> &[String] {
        &self.agents
    }

    pub fn resources(&self) -> &[String] {
        &self.resources
    }

    pub fn num_agents(&self) -> usize {
        self.agents.len()
    }

    pub fn num_resources(&self) -> usize {
        self.resources.len()
    }

    pub fn utility(&self) -> &UtilitySpec {
        &self.utility
    }

    pub fn kind(&self) -> UtilityKind {
        self.utility.kind()
    }

    /// Coefficient (additive) or demand (max-atomic) of `agent` for `resource`.
    pub fn value(&self, agent: usize, resource: usize) -> &Rational {
        &self.utility.matrix()[agent][resource]
    }

    pub fn agent_index(&self, id: &str) -> Option<usize> {
        self.agents.iter().position(|a| a == id)
    }

    pub fn resource_index(&self, id: &str) -> Option<usize> {
        self.resources.iter().position(|r| r == id)
    }

    pub(crate) fn require_kind(&self, expected: UtilityKind) -> Result<()> {
        if self.kind() == expected {
            Ok(())
        } else {
            Err(Error::WrongUtilityKind {
                expected: expected.name(),
                found: self.kind().name(),
            })
        }
    }
}

fn check_unique(what: &str, ids: &[String]) -> Result<()> {
    let mut seen = HashSet::with_capacity(ids.len());
    for id in ids {
        if !seen.insert(id.as_str()) {
            return Err(Error::InvalidInstance(format!(
                "duplicate {what} id {id:?}"
            )));
        }
    }
    Ok(())
}

/// Owner of each resource, if any. A resource can have at most one owner,
/// so the preemption constraint holds by construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Allocation {
    owner: Vec<Option<usize>>,
}

impl Allocation {
    pub fn unallocated(num_resources: usize) -> Self {
        Allocation {
            owner: vec![None; num_resources],
        }
    }

    pub fn from_owners(owner: Vec<Option<usize>>) -> Self {
        Allocation { owner }
    }

    pub fn owners(&self) -> &[Option<usize>] {
        &self.owner
    }

    pub fn owner(&self, resource: usize) -> Option<usize> {
        self.owner[resource]
    }

    pub fn set_owner(&mut self, resource: usize, agent: Option<usize>) {
        self.owner[resource] = agent;
    }

    pub fn num_resources(&self) -> usize {
        self.owner.len()
    }

    /// Resources owned by `agent`, ascending.
    pub fn bundle(&self, agent: usize) -> Vec<usize> {
        self.owner
            .iter()
            .enumerate()
            .filter(|(_, o)| **o == Some(agent))
            .map(|(r, _)| r)
            .collect()
    }

    pub fn bundles(&self, num_agents: usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); num_agents];
        for (r, o) in self.owner.iter().enumerate() {
            if let Some(a) = o {
                if *a < num_agents {
                    out[*a].push(r);
                }
            }
        }
        out
    }

    /// Errors unless the allocation covers exactly the instance's resources
    /// and only names existing agents.
    pub fn check(&self, instance: &Instance) -> Result<()> {
        if self.owner.len() != instance.num_resources() {
            return Err(contract(format!(
                "allocation covers {} resources, instance has {}",
                self.owner.len(),
                instance.num_resources()
            )));
        }
        let n = instance.num_agents();
        if let Some((r, a)) = self
            .owner
            .iter()
            .enumerate()
            .find_map(|(r, o)| o.filter(|a| *a >= n).map(|a| (r, a)))
        {
            return Err(contract(format!(
                "resource {r} assigned to agent index {a}, but there are only {n} agents"
            )));
        }
        Ok(())
    }
}

/// Per-agent utilities of one allocation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UtilityVector {
    values: Vec<Rational>,
}

impl UtilityVector {
    pub fn new(values: Vec<Rational>) -> Self {
        UtilityVector { values }
    }

    pub fn from_integers(values: &[i64]) -> Self {
        UtilityVector::new(values.iter().map(|v| rat(*v)).collect())
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Non-decreasing permutation of the values.
    pub fn sorted(&self) -> Vec<Rational> {
        let mut sorted = self.values.clone();
        sorted.sort();
        sorted
    }
}

impl fmt::Display for UtilityVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LeximinOrdering {
    Less,
    Equal,
    Greater,
}

impl From<Ordering> for LeximinOrdering {
    fn from(o: Ordering) -> Self {
        match o {
            Ordering::Less => LeximinOrdering::Less,
            Ordering::Equal => LeximinOrdering::Equal,
            Ordering::Greater => LeximinOrdering::Greater,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnvyVerdict {
    EnvyFree,
    /// `envious` strictly prefers the bundle held by `envied`.
    Envies {
        envious: usize,
        envied: usize,
    },
}

impl EnvyVerdict {
    pub fn is_envy_free(&self) -> bool {
        matches!(self, EnvyVerdict::EnvyFree)
    }
}

pub fn bundle_utility(instance: &Instance, agent: usize, bundle: &[usize]) -> Result<Rational> {
    if agent >= instance.num_agents() {
        return Err(contract(format!(
            "agent index {agent} out of range (n = {})",
            instance.num_agents()
        )));
    }
    let m = instance.num_resources();
    if let Some(r) = bundle.iter().find(|r| **r >= m) {
        return Err(contract(format!(
            "resource index {r} out of range (m = {m})"
        )));
    }
    Ok(bundle_utility_unchecked(instance, agent, bundle))
}

pub(crate) fn bundle_utility_unchecked(
    instance: &Instance,
    agent: usize,
    bundle: &[usize],
) -> Rational {
    let row = &instance.utility().matrix()[agent];
    match instance.utility() {
        UtilitySpec::Additive(_) => bundle
            .iter()
            .fold(Rational::zero(), |acc, r| acc + &row[*r]),
        UtilitySpec::MaxAtomic(_) => bundle
            .iter()
            .map(|r| &row[*r])
            .max()
            .cloned()
            .unwrap_or_else(Rational::zero),
    }
}

pub fn utility_vector(instance: &Instance, alloc: &Allocation) -> Result<UtilityVector> {
    alloc.check(instance)?;
    let bundles = alloc.bundles(instance.num_agents());
    Ok(UtilityVector::new(
        bundles
            .iter()
            .enumerate()
            .map(|(i, b)| bundle_utility_unchecked(instance, i, b))
            .collect(),
    ))
}

/// Compares the sorted views lexicographically. `Less` means `u` is
/// leximin-worse than `v`.
pub fn leximin_compare(u: &UtilityVector, v: &UtilityVector) -> Result<LeximinOrdering> {
    if u.len() != v.len() {
        return Err(contract(format!(
            "cannot compare utility vectors of lengths {} and {}",
            u.len(),
            v.len()
        )));
    }
    Ok(u.sorted().cmp(&v.sorted()).into())
}

/// First envious pair in row-major agent order, if any.
pub fn is_envy_free(instance: &Instance, alloc: &Allocation) -> Result<EnvyVerdict> {
    alloc.check(instance)?;
    let n = instance.num_agents();
    let bundles = alloc.bundles(n);
    for i in 0..n {
        let own = bundle_utility_unchecked(instance, i, &bundles[i]);
        for (j, other) in bundles.iter().enumerate() {
            if i != j && bundle_utility_unchecked(instance, i, other) > own {
                return Ok(EnvyVerdict::Envies {
                    envious: i,
                    envied: j,
                });
            }
        }
    }
    Ok(EnvyVerdict::EnvyFree)
}

/// True iff nobody is worse off in `candidate` and somebody is better off.
pub fn dominates(
    instance: &Instance,
    candidate: &Allocation,
    baseline: &Allocation,
) -> Result<bool> {
    let cand = utility_vector(instance, candidate)?;
    let base = utility_vector(instance, baseline)?;
    Ok(pareto_dominates(&cand, &base))
}

pub(crate) fn pareto_dominates(candidate: &UtilityVector, baseline: &UtilityVector) -> bool {
    let mut strict = false;
    for (c, b) in candidate.values().iter().zip(baseline.values()) {
        match c.cmp(b) {
            Ordering::Less => return false,
            Ordering::Greater => strict = true,
            Ordering::Equal => {}
        }
    }
    strict
}

#[cfg(test)]
mod tests {
    use super::*;

    fn additive(rows: &[&[i64]]) -> Instance {
        Instance::from_matrix(
            UtilityKind::Additive,
            rows.iter()
                .map(|r| r.iter().map(|v| rat(*v)).collect())
                .collect(),
        )
        .unwrap()
    }

    fn max_atomic(rows: &[&[i64]]) -> Instance {
        Instance::from_matrix(
            UtilityKind::MaxAtomic,
            rows.iter()
                .map(|r| r.iter().map(|v| rat(*v)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn additive_bundle_is_sum() {
        let inst = additive(&[&[1, 2, 3]]);
        assert_eq!(bundle_utility(&inst, 0, &[0, 2]).unwrap(), rat(4));
    }

    #[test]
    fn max_atomic_bundles() {
        let inst = max_atomic(&[&[5, 3]]);
        assert_eq!(bundle_utility(&inst, 0, &[]).unwrap(), rat(0));
        assert_eq!(bundle_utility(&inst, 0, &[0, 1]).unwrap(), rat(5));
    }

    #[test]
    fn out_of_range_indices_are_contract_errors() {
        let inst = additive(&[&[1, 2]]);
        assert!(matches!(
            bundle_utility(&inst, 1, &[0]),
            Err(Error::Contract(_))
        ));
        assert!(matches!(
            bundle_utility(&inst, 0, &[2]),
            Err(Error::Contract(_))
        ));
        let bad = Allocation::from_owners(vec![Some(3), None]);
        assert!(matches!(
            utility_vector(&inst, &bad),
            Err(Error::Contract(_))
        ));
        let short = Allocation::unallocated(1);
        assert!(matches!(
            utility_vector(&inst, &short),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn utility_vectors() {
        let inst = additive(&[&[1], &[1]]);
        let v = utility_vector(&inst, &Allocation::unallocated(1)).unwrap();
        assert_eq!(v, UtilityVector::from_integers(&[0, 0]));

        let inst = max_atomic(&[&[5, 3], &[4, 1]]);
        let alloc = Allocation::from_owners(vec![Some(1), Some(0)]);
        let v = utility_vector(&inst, &alloc).unwrap();
        assert_eq!(v, UtilityVector::from_integers(&[3, 4]));
    }

    #[test]
    fn leximin_examples() {
        let cmp = |a: &[i64], b: &[i64]| {
            leximin_compare(
                &UtilityVector::from_integers(a),
                &UtilityVector::from_integers(b),
            )
            .unwrap()
        };
        assert_eq!(cmp(&[1, 5], &[3, 4]), LeximinOrdering::Less);
        assert_eq!(cmp(&[2, 7], &[7, 2]), LeximinOrdering::Equal);
        assert_eq!(cmp(&[1, 3, 3], &[1, 2, 9]), LeximinOrdering::Greater);
        assert!(leximin_compare(
            &UtilityVector::from_integers(&[1]),
            &UtilityVector::from_integers(&[1, 2])
        )
        .is_err());
    }

    #[test]
    fn envy_examples() {
        let single = additive(&[&[4, 1]]);
        for owners in [
            vec![None, None],
            vec![Some(0), None],
            vec![Some(0), Some(0)],
        ] {
            let verdict = is_envy_free(&single, &Allocation::from_owners(owners)).unwrap();
            assert_eq!(verdict, EnvyVerdict::EnvyFree);
        }

        let shared = additive(&[&[1], &[1]]);
        let verdict = is_envy_free(&shared, &Allocation::from_owners(vec![Some(0)])).unwrap();
        assert_eq!(
            verdict,
            EnvyVerdict::Envies {
                envious: 1,
                envied: 0
            }
        );
    }

    #[test]
    fn dominance_examples() {
        let inst = additive(&[&[1]]);
        let given = Allocation::from_owners(vec![Some(0)]);
        let empty = Allocation::unallocated(1);
        assert!(!dominates(&inst, &given, &given).unwrap());
        assert!(dominates(&inst, &given, &empty).unwrap());
        assert!(!dominates(&inst, &empty, &given).unwrap());
    }

    #[test]
    fn rejects_malformed_instances() {
        assert!(Instance::from_matrix(UtilityKind::Additive, vec![]).is_err());
        let neg = Instance::from_matrix(UtilityKind::MaxAtomic, vec![vec![rat(-1)]]);
        assert!(matches!(neg, Err(Error::InvalidInstance(_))));
        let ragged = Instance::from_matrix(UtilityKind::Additive, vec![vec![rat(1)], vec![]]);
        assert!(ragged.is_err());
        let dup = Instance::new(
            vec!["a".into(), "a".into()],
            vec![],
            UtilitySpec::Additive(vec![vec![], vec![]]),
        );
        assert!(dup.is_err());
        // negative additive coefficients are fine
        assert!(Instance::from_matrix(UtilityKind::Additive, vec![vec![rat(-1)]]).is_ok());
    }

    #[test]
    fn zero_resources_is_valid() {
        let inst = Instance::from_matrix(UtilityKind::Additive, vec![vec![], vec![]]).unwrap();
        assert_eq!(inst.num_resources(), 0);
        let v = utility_vector(&inst, &Allocation::unallocated(0)).unwrap();
        assert_eq!(v.len(), 2);
    }
}
