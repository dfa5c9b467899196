//! Propositional formulas in CNF, the two-block forall/exists variant, and
//! partial truth assignments.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A variable (0-based) with polarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Literal {
    pub var: usize,
    pub positive: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Literal {
            var,
            positive: true,
        }
    }

    pub fn neg(var: usize) -> Self {
        Literal {
            var,
            positive: false,
        }
    }

    pub fn negated(self) -> Self {
        Literal {
            var: self.var,
            positive: !self.positive,
        }
    }

    /// Signed, 1-based DIMACS form.
    pub fn to_dimacs(self) -> i64 {
        let v = self.var as i64 + 1;
        if self.positive {
            v
        } else {
            -v
        }
    }

    pub fn from_dimacs(value: i64) -> Option<Self> {
        if value == 0 {
            return None;
        }
        let var = (value.unsigned_abs() - 1) as usize;
        Some(Literal {
            var,
            positive: value > 0,
        })
    }

    pub fn is_true_under(self, value: bool) -> bool {
        value == self.positive
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "x{}", self.var + 1)
        } else {
            write!(f, "-x{}", self.var + 1)
        }
    }
}

pub type Clause = Vec<Literal>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<Clause>,
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<Clause>) -> Result<Self> {
        for (ci, clause) in clauses.iter().enumerate() {
            if let Some(l) = clause.iter().find(|l| l.var >= num_vars) {
                return Err(Error::Format(format!(
                    "clause {} mentions {l} but the formula has {num_vars} variables",
                    ci + 1
                )));
            }
        }
        Ok(CnfFormula { num_vars, clauses })
    }

    /// Builds from DIMACS-style signed integers.
    pub fn from_dimacs_clauses(num_vars: usize, clauses: &[&[i64]]) -> Result<Self> {
        CnfFormula::new(
            num_vars,
            clauses
                .iter()
                .map(|c| {
                    c.iter()
                        .map(|v| {
                            Literal::from_dimacs(*v)
                                .ok_or_else(|| Error::Format("literal 0".into()))
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?,
        )
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn num_literal_occurrences(&self) -> usize {
        self.clauses.iter().map(Vec::len).sum()
    }

    /// True iff every clause holds under the full assignment `values`.
    pub fn evaluate(&self, values: &[bool]) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().any(|l| l.is_true_under(values[l.var])))
    }

    /// Clauses (by index) containing `literal`.
    pub fn clauses_with(&self, literal: Literal) -> Vec<usize> {
        self.clauses
            .iter()
            .enumerate()
            .filter(|(_, c)| c.contains(&literal))
            .map(|(i, _)| i)
            .collect()
    }

    pub(crate) fn push_clause(&mut self, clause: Clause) {
        self.clauses.push(clause);
    }
}

impl fmt::Display for CnfFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.clauses.is_empty() {
            return f.write_str("T");
        }
        for (i, clause) in self.clauses.iter().enumerate() {
            if i > 0 {
                f.write_str(" & ")?;
            }
            f.write_str("(")?;
            for (k, l) in clause.iter().enumerate() {
                if k > 0 {
                    f.write_str(" | ")?;
                }
                write!(f, "{l}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// A CNF formula whose variables are split into a universal block and an
/// existential block. The value asks whether every universal assignment
/// extends to a satisfying one.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AeFormula {
    forall_vars: Vec<usize>,
    exists_vars: Vec<usize>,
    matrix: CnfFormula,
}

impl AeFormula {
    /// The two blocks must partition `0..matrix.num_vars()`.
    pub fn new(
        forall_vars: Vec<usize>,
        exists_vars: Vec<usize>,
        matrix: CnfFormula,
    ) -> Result<Self> {
        let n = matrix.num_vars();
        let mut seen = vec![false; n];
        for &v in forall_vars.iter().chain(&exists_vars) {
            if v >= n {
                return Err(Error::Format(format!(
                    "quantified variable {} exceeds the declared {n} variables",
                    v + 1
                )));
            }
            if seen[v] {
                return Err(Error::Format(format!(
                    "variable {} is quantified twice",
                    v + 1
                )));
            }
            seen[v] = true;
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(Error::Format(format!(
                "variable {} is not quantified",
                v + 1
            )));
        }
        Ok(AeFormula {
            forall_vars,
            exists_vars,
            matrix,
        })
    }

    pub fn forall_vars(&self) -> &[usize] {
        &self.forall_vars
    }

    pub fn exists_vars(&self) -> &[usize] {
        &self.exists_vars
    }

    pub fn matrix(&self) -> &CnfFormula {
        &self.matrix
    }

    pub fn clauses(&self) -> &[Clause] {
        self.matrix.clauses()
    }

    pub fn num_vars(&self) -> usize {
        self.matrix.num_vars()
    }

    pub fn is_universal(&self, var: usize) -> bool {
        self.forall_vars.contains(&var)
    }

    pub(crate) fn matrix_mut(&mut self) -> &mut CnfFormula {
        &mut self.matrix
    }
}

impl fmt::Display for AeFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.forall_vars {
            write!(f, "A x{} ", v + 1)?;
        }
        for v in &self.exists_vars {
            write!(f, "E x{} ", v + 1)?;
        }
        write!(f, ": {}", self.matrix)
    }
}

/// Truth values for some variables; `None` means unassigned.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PartialAssignment {
    values: Vec<Option<bool>>,
}

impl PartialAssignment {
    pub fn empty(num_vars: usize) -> Self {
        PartialAssignment {
            values: vec![None; num_vars],
        }
    }

    pub fn from_values(values: Vec<Option<bool>>) -> Self {
        PartialAssignment { values }
    }

    pub fn full(values: &[bool]) -> Self {
        PartialAssignment {
            values: values.iter().map(|v| Some(*v)).collect(),
        }
    }

    /// Assignment of the universal block taken from the bits of `mask`
    /// (bit k is the k-th universal variable), existential block unassigned.
    pub fn forall_from_mask(formula: &AeFormula, mask: u64) -> Self {
        let mut s = PartialAssignment::empty(formula.num_vars());
        for (k, &v) in formula.forall_vars().iter().enumerate() {
            s.set(v, Some(mask >> k & 1 == 1));
        }
        s
    }

    pub fn values(&self) -> &[Option<bool>] {
        &self.values
    }

    pub fn get(&self, var: usize) -> Option<bool> {
        self.values.get(var).copied().flatten()
    }

    pub fn set(&mut self, var: usize, value: Option<bool>) {
        self.values[var] = value;
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn unassigned(&self) -> Vec<usize> {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| v.is_none())
            .map(|(i, _)| i)
            .collect()
    }

    /// Full assignment, if every variable has a value.
    pub fn to_full(&self) -> Option<Vec<bool>> {
        self.values.iter().copied().collect()
    }

    pub fn literal_value(&self, literal: Literal) -> Option<bool> {
        self.get(literal.var).map(|v| literal.is_true_under(v))
    }

    /// All universal variables assigned, all existential ones unassigned.
    pub fn is_forall_assignment(&self, formula: &AeFormula) -> bool {
        self.values.len() == formula.num_vars()
            && formula
                .forall_vars()
                .iter()
                .all(|v| self.values[*v].is_some())
            && formula
                .exists_vars()
                .iter()
                .all(|v| self.values[*v].is_none())
    }

    /// True iff `self` agrees with `base` on every variable `base` assigns.
    pub fn extends(&self, base: &PartialAssignment) -> bool {
        self.values.len() == base.values.len()
            && base
                .values
                .iter()
                .zip(&self.values)
                .all(|(b, s)| b.is_none() || b == s)
    }
}

impl fmt::Display for PartialAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        let mut first = true;
        for (v, val) in self.values.iter().enumerate() {
            if let Some(b) = val {
                if !first {
                    f.write_str(", ")?;
                }
                first = false;
                write!(f, "x{}={}", v + 1, if *b { "T" } else { "F" })?;
            }
        }
        f.write_str("}")
    }
}
