#![allow(dead_code)]

use fairdiv::formula::{AeFormula, Clause, CnfFormula, Literal};
use fairdiv::{rat, ratio, Allocation, Instance, Rational, UtilityKind};
use rand::Rng;

pub fn max_atomic(rows: Vec<Vec<i64>>) -> Instance {
    Instance::from_matrix(
        UtilityKind::MaxAtomic,
        rows.into_iter()
            .map(|r| r.into_iter().map(rat).collect())
            .collect(),
    )
    .unwrap()
}

pub fn additive(rows: Vec<Vec<Rational>>) -> Instance {
    Instance::from_matrix(UtilityKind::Additive, rows).unwrap()
}

pub fn random_demands<R: Rng>(rng: &mut R, n: usize, m: usize, max: i64) -> Instance {
    max_atomic(
        (0..n)
            .map(|_| (0..m).map(|_| rng.gen_range(0..=max)).collect())
            .collect(),
    )
}

/// Small additive coefficients, mostly non-negative integers with the odd
/// negative value or half.
pub fn random_coefficient<R: Rng>(rng: &mut R) -> Rational {
    match rng.gen_range(0..10) {
        0 => rat(0),
        1 => rat(-rng.gen_range(1..=2)),
        2 => ratio(rng.gen_range(1..=5), 2),
        _ => rat(rng.gen_range(0..=4)),
    }
}

pub fn random_additive<R: Rng>(rng: &mut R, n: usize, m: usize) -> Instance {
    additive(
        (0..n)
            .map(|_| (0..m).map(|_| random_coefficient(rng)).collect())
            .collect(),
    )
}

pub fn random_allocation<R: Rng>(rng: &mut R, n: usize, m: usize) -> Allocation {
    Allocation::from_owners(
        (0..m)
            .map(|_| {
                let k = rng.gen_range(0..=n);
                (k < n).then_some(k)
            })
            .collect(),
    )
}

/// Each resource to its first highest-valuing agent when that value is positive.
pub fn greedy_allocation(instance: &Instance) -> Allocation {
    let owners = (0..instance.num_resources())
        .map(|j| {
            let mut best: Option<usize> = None;
            for i in 0..instance.num_agents() {
                if *instance.value(i, j) > rat(0)
                    && best.is_none_or(|b| instance.value(i, j) > instance.value(b, j))
                {
                    best = Some(i);
                }
            }
            best
        })
        .collect();
    Allocation::from_owners(owners)
}

pub fn random_clause<R: Rng>(rng: &mut R, num_vars: usize) -> Clause {
    let k = rng.gen_range(1..=3);
    (0..k)
        .map(|_| Literal {
            var: rng.gen_range(0..num_vars),
            positive: rng.gen(),
        })
        .collect()
}

pub fn random_cnf<R: Rng>(rng: &mut R, max_vars: usize, max_clauses: usize) -> CnfFormula {
    let nv = rng.gen_range(1..=max_vars);
    let nc = rng.gen_range(0..=max_clauses);
    CnfFormula::new(nv, (0..nc).map(|_| random_clause(rng, nv)).collect()).unwrap()
}

/// Forall block first, then exists block, each of size 0..=2 (not both empty).
pub fn random_ae<R: Rng>(rng: &mut R) -> AeFormula {
    let (na, ne) = loop {
        let na = rng.gen_range(0..=2);
        let ne = rng.gen_range(0..=2);
        if na + ne > 0 {
            break (na, ne);
        }
    };
    let nv = na + ne;
    let nc = rng.gen_range(0..=3);
    let matrix = CnfFormula::new(nv, (0..nc).map(|_| random_clause(rng, nv)).collect()).unwrap();
    AeFormula::new((0..na).collect(), (na..nv).collect(), matrix).unwrap()
}

/// Every clause over `num_vars` variables as a set of 1..=3 distinct literals.
pub fn all_clauses(num_vars: usize) -> Vec<Clause> {
    let lits: Vec<Literal> = (0..num_vars)
        .flat_map(|v| [Literal::pos(v), Literal::neg(v)])
        .collect();
    let mut out = Vec::new();
    for a in 0..lits.len() {
        out.push(vec![lits[a]]);
        for b in a + 1..lits.len() {
            out.push(vec![lits[a], lits[b]]);
            for c in b + 1..lits.len() {
                out.push(vec![lits[a], lits[b], lits[c]]);
            }
        }
    }
    out
}

/// Canonical formulas: unordered sets of at most two distinct clauses over
/// 1..=`max_vars` variables.
pub fn canonical_formulas(max_vars: usize) -> Vec<CnfFormula> {
    let mut out = Vec::new();
    for nv in 1..=max_vars {
        let clauses = all_clauses(nv);
        out.push(CnfFormula::new(nv, vec![]).unwrap());
        for i in 0..clauses.len() {
            out.push(CnfFormula::new(nv, vec![clauses[i].clone()]).unwrap());
            for j in i + 1..clauses.len() {
                out.push(
                    CnfFormula::new(nv, vec![clauses[i].clone(), clauses[j].clone()]).unwrap(),
                );
            }
        }
    }
    out
}
