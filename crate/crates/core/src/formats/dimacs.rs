//! DIMACS CNF, plus a forall-exists variant with one `a <vars> 0` line
//! followed by one `e <vars> 0` line before the clauses.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::formula::{AeFormula, Clause, CnfFormula, Literal};

struct Parsed {
    num_vars: usize,
    clauses: Vec<Clause>,
    forall: Option<Vec<usize>>,
    exists: Option<Vec<usize>>,
}

fn err(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Format(format!("line {line}: {msg}"))
}

fn parse(text: &str, quantified: bool) -> Result<Parsed> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<Clause> = Vec::new();
    let mut current: Clause = Vec::new();
    let mut forall = None;
    let mut exists = None;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        if let Some(rest) = line.strip_prefix('p') {
            if header.is_some() {
                return Err(err(line_no, "second problem line"));
            }
            let parts: Vec<&str> = rest.split_whitespace().collect();
            match parts.as_slice() {
                ["cnf", v, c] => {
                    let v = v
                        .parse()
                        .map_err(|_| err(line_no, format!("bad variable count {v:?}")))?;
                    let c = c
                        .parse()
                        .map_err(|_| err(line_no, format!("bad clause count {c:?}")))?;
                    header = Some((v, c));
                }
                _ => return Err(err(line_no, "expected \"p cnf <vars> <clauses>\"")),
            }
            continue;
        }
        let Some((num_vars, _)) = header else {
            return Err(err(line_no, "data before the \"p cnf\" line"));
        };
        if line.starts_with('a') || line.starts_with('e') {
            if !quantified {
                return Err(err(line_no, "quantifier line in a plain CNF file"));
            }
            let universal = line.starts_with('a');
            if !clauses.is_empty() || !current.is_empty() {
                return Err(err(line_no, "quantifier line after clauses"));
            }
            if universal && (forall.is_some() || exists.is_some()) {
                return Err(err(line_no, "the single \"a\" line must come first"));
            }
            if !universal && (forall.is_none() || exists.is_some()) {
                return Err(err(
                    line_no,
                    "the single \"e\" line must follow the \"a\" line",
                ));
            }
            let vars = quantifier_block(&line[1..], num_vars, line_no)?;
            if universal {
                forall = Some(vars);
            } else {
                exists = Some(vars);
            }
            continue;
        }
        for tok in line.split_whitespace() {
            let v: i64 = tok
                .parse()
                .map_err(|_| err(line_no, format!("unexpected token {tok:?}")))?;
            if v == 0 {
                clauses.push(std::mem::take(&mut current));
                continue;
            }
            let lit = Literal::from_dimacs(v)
                .filter(|l| l.var < num_vars)
                .ok_or_else(|| err(line_no, format!("literal {v} out of range 1..={num_vars}")))?;
            current.push(lit);
        }
    }

    let Some((num_vars, num_clauses)) = header else {
        return Err(Error::Format("missing \"p cnf\" line".into()));
    };
    if !current.is_empty() {
        return Err(err(last_line, "last clause is missing its terminating 0"));
    }
    if clauses.len() != num_clauses {
        return Err(Error::Format(format!(
            "header declares {num_clauses} clauses, found {}",
            clauses.len()
        )));
    }
    Ok(Parsed {
        num_vars,
        clauses,
        forall,
        exists,
    })
}

fn quantifier_block(rest: &str, num_vars: usize, line_no: usize) -> Result<Vec<usize>> {
    let toks: Vec<&str> = rest.split_whitespace().collect();
    if toks.last() != Some(&"0") {
        return Err(err(line_no, "quantifier line must end with 0"));
    }
    toks[..toks.len() - 1]
        .iter()
        .map(|t| match t.parse::<usize>() {
            Ok(v) if (1..=num_vars).contains(&v) => Ok(v - 1),
            _ => Err(err(line_no, format!("bad quantified variable {t:?}"))),
        })
        .collect()
}

pub fn parse_dimacs(text: &str) -> Result<CnfFormula> {
    let p = parse(text, false)?;
    CnfFormula::new(p.num_vars, p.clauses)
}

pub fn parse_ae_dimacs(text: &str) -> Result<AeFormula> {
    let p = parse(text, true)?;
    let forall = p
        .forall
        .ok_or_else(|| Error::Format("missing \"a\" quantifier line".into()))?;
    let exists = p
        .exists
        .ok_or_else(|| Error::Format("missing \"e\" quantifier line".into()))?;
    let mut seen = vec![false; p.num_vars];
    for &v in forall.iter().chain(&exists) {
        if std::mem::replace(&mut seen[v], true) {
            return Err(Error::Format(format!(
                "variable {} is quantified twice",
                v + 1
            )));
        }
    }
    if let Some(v) = seen.iter().position(|s| !s) {
        return Err(Error::Format(format!(
            "variable {} is not quantified",
            v + 1
        )));
    }
    let matrix = CnfFormula::new(p.num_vars, p.clauses)?;
    AeFormula::new(forall, exists, matrix)
}

pub fn write_dimacs(formula: &CnfFormula) -> String {
    let mut out = format!("p cnf {} {}\n", formula.num_vars(), formula.clauses().len());
    write_clauses(&mut out, formula.clauses());
    out
}

pub fn write_ae_dimacs(formula: &AeFormula) -> String {
    let mut out = format!("p cnf {} {}\n", formula.num_vars(), formula.clauses().len());
    for (tag, vars) in [("a", formula.forall_vars()), ("e", formula.exists_vars())] {
        out.push_str(tag);
        for v in vars {
            write!(out, " {}", v + 1).unwrap();
        }
        out.push_str(" 0\n");
    }
    write_clauses(&mut out, formula.clauses());
    out
}

fn write_clauses(out: &mut String, clauses: &[Clause]) {
    for c in clauses {
        for l in c {
            write!(out, "{} ", l.to_dimacs()).unwrap();
        }
        out.push_str("0\n");
    }
}
