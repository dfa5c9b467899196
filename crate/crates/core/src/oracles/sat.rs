use crate::error::{Error, Result};
use crate::formula::{AeFormula, CnfFormula, PartialAssignment};

use super::TriVerdict;

/// Largest number of variables any truth-table enumeration here will touch.
pub const MAX_ENUMERATED_VARS: usize = 30;

/// Whether `s` extends to a full satisfying assignment. Extensions are tried
/// in binary counting order over the unassigned variables (lowest variable
/// is the lowest bit), so the all-false extension comes first.
pub fn sat_on_partial(
    formula: &CnfFormula,
    s: &PartialAssignment,
) -> Result<TriVerdict<PartialAssignment>> {
    if s.len() != formula.num_vars() {
        return Err(Error::Contract(format!(
            "assignment covers {} variables, formula has {}",
            s.len(),
            formula.num_vars()
        )));
    }
    let free = s.unassigned();
    if free.len() > MAX_ENUMERATED_VARS {
        return Err(Error::TooLarge(format!(
            "{} unassigned variables (limit {MAX_ENUMERATED_VARS})",
            free.len()
        )));
    }
    let mut values: Vec<bool> = s.values().iter().map(|v| v.unwrap_or(false)).collect();
    for mask in 0u64..(1u64 << free.len()) {
        for (k, &v) in free.iter().enumerate() {
            values[v] = mask >> k & 1 == 1;
        }
        if formula.evaluate(&values) {
            return Ok(TriVerdict::Yes(PartialAssignment::full(&values)));
        }
    }
    Ok(TriVerdict::No(()))
}

/// Value of the forall-exists formula by nested enumeration.
pub fn ae3cnf_eval(formula: &AeFormula) -> Result<bool> {
    let total = formula.num_vars();
    if total > MAX_ENUMERATED_VARS {
        return Err(Error::TooLarge(format!(
            "{total} variables (limit {MAX_ENUMERATED_VARS})"
        )));
    }
    let forall = formula.forall_vars();
    let exists = formula.exists_vars();
    let mut values = vec![false; total];
    for outer in 0u64..(1u64 << forall.len()) {
        for (k, &v) in forall.iter().enumerate() {
            values[v] = outer >> k & 1 == 1;
        }
        let mut extendable = false;
        for inner in 0u64..(1u64 << exists.len()) {
            for (k, &v) in exists.iter().enumerate() {
                values[v] = inner >> k & 1 == 1;
            }
            if formula.matrix().evaluate(&values) {
                extendable = true;
                break;
            }
        }
        if !extendable {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_example_is_satisfiable_all_false() {
        let f = CnfFormula::from_dimacs_clauses(3, &[&[1, 2, -3], &[-1, -2, -3]]).unwrap();
        let verdict = sat_on_partial(&f, &PartialAssignment::empty(3)).unwrap();
        let witness = verdict.yes().unwrap();
        assert_eq!(witness.to_full().unwrap(), vec![false, false, false]);
    }

    #[test]
    fn contradiction_is_unsat() {
        let f = CnfFormula::from_dimacs_clauses(1, &[&[1], &[-1]]).unwrap();
        assert!(sat_on_partial(&f, &PartialAssignment::empty(1))
            .unwrap()
            .is_no());
    }

    #[test]
    fn respects_fixed_values() {
        let f = CnfFormula::from_dimacs_clauses(2, &[&[1, 2], &[-1, -2]]).unwrap();
        let s = PartialAssignment::from_values(vec![Some(true), None]);
        let w = sat_on_partial(&f, &s).unwrap().yes().unwrap();
        assert_eq!(w.to_full().unwrap(), vec![true, false]);

        let g = CnfFormula::from_dimacs_clauses(2, &[&[1, 2], &[1, -2]]).unwrap();
        let s = PartialAssignment::from_values(vec![Some(false), None]);
        assert!(sat_on_partial(&g, &s).unwrap().is_no());
    }

    #[test]
    fn forall_exists_examples() {
        let f = CnfFormula::from_dimacs_clauses(2, &[&[1, 2], &[-1, -2]]).unwrap();
        assert!(ae3cnf_eval(&AeFormula::new(vec![0], vec![1], f).unwrap()).unwrap());

        let g = CnfFormula::from_dimacs_clauses(2, &[&[1, 2], &[1, -2]]).unwrap();
        assert!(!ae3cnf_eval(&AeFormula::new(vec![0], vec![1], g).unwrap()).unwrap());

        let empty = CnfFormula::new(2, vec![]).unwrap();
        assert!(ae3cnf_eval(&AeFormula::new(vec![0], vec![1], empty).unwrap()).unwrap());
    }

    #[test]
    fn size_guards() {
        let f = CnfFormula::new(40, vec![]).unwrap();
        assert!(matches!(
            sat_on_partial(&f, &PartialAssignment::empty(40)),
            Err(Error::TooLarge(_))
        ));
        assert!(sat_on_partial(&f, &PartialAssignment::empty(3)).is_err());
    }
}
