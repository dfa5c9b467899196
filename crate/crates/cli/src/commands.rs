use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use fairdiv::formats::{
    allocation_to_value, parse_ae_dimacs, parse_dimacs, parse_instance, parse_rational_str,
    rational_to_value, InputDigest, InstanceDocument, Report, Verdict,
};
use fairdiv::oracles::{
    ae3cnf_eval, brute_force_eef, find_dominating_allocation, is_pareto_optimal, sat_on_partial,
    search_x_forall_family, ChoiceScope,
};
use fairdiv::reductions::{
    augment_both_polarities, build_x_forall_allocation, construct_improvement_eef,
    construct_improvement_po, reduce_3cnf_to_po, reduce_ae3cnf_to_eef, x_forall_choice_space,
    XForallChoices,
};
use fairdiv::{
    decide_lmmuab, dominates, is_envy_free, utility_vector, Clause, EnvyVerdict, PartialAssignment,
    SearchBudget, TriVerdict, UtilityVector,
};

fn read_input(path: &Path) -> Result<(String, InputDigest)> {
    let bytes = fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
    let digest = InputDigest {
        path: path.display().to_string(),
        sha256: hex::encode(Sha256::digest(&bytes)),
    };
    let text =
        String::from_utf8(bytes).with_context(|| format!("{} is not UTF-8", path.display()))?;
    Ok((text, digest))
}

fn load_document(path: &Path) -> Result<(InstanceDocument, InputDigest)> {
    let (text, digest) = read_input(path)?;
    let doc = parse_instance(&text).with_context(|| format!("in {}", path.display()))?;
    Ok((doc, digest))
}

fn vector_value(v: &UtilityVector) -> Value {
    Value::Array(v.values().iter().map(rational_to_value).collect())
}

fn assignment_value(s: &PartialAssignment) -> Value {
    let map: Map<String, Value> = s
        .values()
        .iter()
        .enumerate()
        .map(|(v, b)| (format!("x{}", v + 1), b.map_or(Value::Null, Value::Bool)))
        .collect();
    Value::Object(map)
}

fn clauses_value(clauses: &[Clause]) -> Value {
    clauses
        .iter()
        .map(|c| c.iter().map(|l| l.to_dimacs()).collect::<Vec<_>>())
        .collect::<Vec<_>>()
        .into()
}

fn budget(nodes: u64) -> Result<SearchBudget> {
    Ok(SearchBudget::new(nodes)?)
}

fn require_allocation(doc: &InstanceDocument) -> Result<&fairdiv::Allocation> {
    match &doc.allocation {
        Some(a) => Ok(a),
        None => bail!("the instance document has no allocation"),
    }
}

pub fn solve_leximin(path: &Path, k: Option<&[String]>) -> Result<Report> {
    let (doc, digest) = load_document(path)?;
    let inst = &doc.instance;
    let alloc = fairdiv::solve_leximin(inst)?;
    let u = utility_vector(inst, &alloc)?;
    let sorted = UtilityVector::new(u.sorted());
    let mut result = json!({
        "utility_vector": vector_value(&u),
        "sorted": vector_value(&sorted),
    });
    let verdict = match k {
        None => Verdict::Yes,
        Some(values) => {
            let parsed: Vec<_> = values
                .iter()
                .map(|v| parse_rational_str(v).with_context(|| format!("--K: bad number {v:?}")))
                .collect::<Result<_>>()?;
            let target = UtilityVector::new(parsed);
            let reachable = decide_lmmuab(inst, &target)?;
            result["K"] = vector_value(&target);
            result["leximin_better_than_K"] = reachable.into();
            if reachable {
                Verdict::Yes
            } else {
                Verdict::No
            }
        }
    };
    let mut report = Report::new("solve-leximin", verdict);
    report.result = result;
    report.witness = Some(allocation_to_value(inst, &alloc));
    report.provenance.push(digest);
    Ok(report)
}

pub fn check_pareto(path: &Path, nodes: u64) -> Result<Report> {
    let (doc, digest) = load_document(path)?;
    let alloc = require_allocation(&doc)?;
    let found = is_pareto_optimal(&doc.instance, alloc, budget(nodes)?)?;
    let mut report = Report::new("check-pareto", Verdict::from(&found.verdict));
    report.stats.nodes = Some(found.nodes);
    report.result = json!({ "pareto_optimal": found.verdict.label() });
    if let TriVerdict::No(witness) = &found.verdict {
        report.witness = Some(json!({
            "dominating_allocation": allocation_to_value(&doc.instance, witness),
            "utility_vector": vector_value(&utility_vector(&doc.instance, witness)?),
        }));
    }
    report.provenance.push(digest);
    Ok(report)
}

pub fn check_envy(path: &Path) -> Result<Report> {
    let (doc, digest) = load_document(path)?;
    let alloc = require_allocation(&doc)?;
    let inst = &doc.instance;
    let verdict = is_envy_free(inst, alloc)?;
    let mut report = Report::new(
        "check-envy",
        if verdict.is_envy_free() {
            Verdict::Yes
        } else {
            Verdict::No
        },
    );
    report.result = json!({ "utility_vector": vector_value(&utility_vector(inst, alloc)?) });
    if let EnvyVerdict::Envies { envious, envied } = verdict {
        report.witness = Some(json!({
            "envious": inst.agents()[envious],
            "envied": inst.agents()[envied],
        }));
    }
    report.provenance.push(digest);
    Ok(report)
}

pub fn find_eef(path: &Path, nodes: u64) -> Result<Report> {
    let (doc, digest) = load_document(path)?;
    let inst = &doc.instance;
    let found = brute_force_eef(inst, budget(nodes)?)?;
    let mut report = Report::new("find-eef", Verdict::from(&found.verdict));
    report.stats.nodes = Some(found.nodes);
    if let TriVerdict::Yes(alloc) = &found.verdict {
        report.witness = Some(allocation_to_value(inst, alloc));
    }
    report.provenance.push(digest);
    Ok(report)
}

fn emit_document(
    doc: &InstanceDocument,
    out: Option<&Path>,
    mut report: Report,
) -> Result<Option<Report>> {
    let text = doc.to_json();
    match out {
        None => {
            println!("{text}");
            Ok(None)
        }
        Some(path) => {
            fs::write(path, text + "\n")
                .with_context(|| format!("cannot write {}", path.display()))?;
            report.result["out"] = path.display().to_string().into();
            Ok(Some(report))
        }
    }
}

pub fn reduce_po(path: &Path, out: Option<&Path>) -> Result<Option<Report>> {
    let (text, digest) = read_input(path)?;
    let formula = parse_dimacs(&text).with_context(|| format!("in {}", path.display()))?;
    let red = reduce_3cnf_to_po(&formula)?;
    let doc = InstanceDocument::new(red.instance.clone())
        .with_allocation(red.baseline.clone())
        .with_roles(red.roles.clone());
    let mut report = Report::new("reduce-po", Verdict::Yes);
    report.result = json!({
        "agents": red.instance.num_agents(),
        "resources": red.instance.num_resources(),
    });
    report.provenance.push(digest);
    emit_document(&doc, out, report)
}

pub fn reduce_eef(path: &Path, out: Option<&Path>) -> Result<Option<Report>> {
    let (text, digest) = read_input(path)?;
    let formula = parse_ae_dimacs(&text).with_context(|| format!("in {}", path.display()))?;
    let (formula, added) = augment_both_polarities(&formula);
    if !added.is_empty() && out.is_none() {
        eprintln!(
            "fairdiv reduce-eef: added {} tautological clause(s) {}",
            added.len(),
            clauses_value(&added)
        );
    }
    let red = reduce_ae3cnf_to_eef(&formula)?;
    let doc = InstanceDocument::new(red.instance.clone()).with_roles(red.roles.clone());
    let mut report = Report::new("reduce-eef", Verdict::Yes);
    report.result = json!({
        "agents": red.instance.num_agents(),
        "resources": red.instance.num_resources(),
        "big_m": rational_to_value(red.big_m.value()),
        "added_clauses": clauses_value(&added),
    });
    report.provenance.push(digest);
    emit_document(&doc, out, report)
}

pub fn verify_po(path: &Path, nodes: u64) -> Result<Report> {
    let (text, digest) = read_input(path)?;
    let formula = parse_dimacs(&text).with_context(|| format!("in {}", path.display()))?;
    let red = reduce_3cnf_to_po(&formula)?;
    let empty = PartialAssignment::empty(red.formula.num_vars());
    let sat = sat_on_partial(&red.formula, &empty)?;
    let found = find_dominating_allocation(&red.instance, &red.baseline, budget(nodes)?)?;

    let mut witness = Map::new();
    let mut improvement = Value::Null;
    if let TriVerdict::Yes(assignment) = &sat {
        let values = assignment.to_full().expect("witness is full");
        let better = construct_improvement_po(&red, &values)?;
        improvement = dominates(&red.instance, &better, &red.baseline)?.into();
        witness.insert("satisfying_assignment".into(), assignment_value(assignment));
        witness.insert(
            "constructed_improvement".into(),
            allocation_to_value(&red.instance, &better),
        );
    }
    if let TriVerdict::Yes(dom) = &found.verdict {
        witness.insert(
            "dominating_allocation".into(),
            allocation_to_value(&red.instance, dom),
        );
    }
    let agreement = !found.verdict.is_unknown() && sat.is_yes() == found.verdict.is_yes();
    let verdict = if found.verdict.is_unknown() {
        Verdict::Unknown
    } else if agreement && improvement != Value::Bool(false) {
        Verdict::Yes
    } else {
        Verdict::No
    };
    let mut report = Report::new("verify-reduction", verdict);
    report.result = json!({
        "reduction": "po",
        "agents": red.instance.num_agents(),
        "resources": red.instance.num_resources(),
        "satisfiable": sat.is_yes(),
        "dominated": found.verdict.label(),
        "relation": "satisfiable ⇔ dominated",
        "agreement": agreement,
        "improvement_dominates": improvement,
    });
    if !witness.is_empty() {
        report.witness = Some(Value::Object(witness));
    }
    report.stats.nodes = Some(found.nodes);
    report.provenance.push(digest);
    Ok(report)
}

pub fn verify_eef(path: &Path, nodes: u64, all_flags: bool) -> Result<Report> {
    let (text, digest) = read_input(path)?;
    let formula = parse_ae_dimacs(&text).with_context(|| format!("in {}", path.display()))?;
    let (formula, added) = augment_both_polarities(&formula);
    let red = reduce_ae3cnf_to_eef(&formula)?;
    let value = ae3cnf_eval(&red.formula)?;
    let budget = budget(nodes)?;
    let forall = red.formula.forall_vars().len();
    if forall >= 20 {
        bail!("{forall} universal variables is too many to enumerate");
    }

    let mut rows = Vec::new();
    let mut all_hold = true;
    let mut unknown = false;
    let mut total_nodes = 0u64;
    for mask in 0u64..(1 << forall) {
        let s = PartialAssignment::forall_from_mask(&red.formula, mask);
        let sat = sat_on_partial(red.formula.matrix(), &s)?;
        let settings = if all_flags {
            x_forall_choice_space(&red, &s)?
        } else {
            vec![XForallChoices::defaults(&red)]
        };
        for choices in settings {
            let alloc = build_x_forall_allocation(&red, &s, &choices)?;
            let envy_free = is_envy_free(&red.instance, &alloc)?.is_envy_free();
            let found = find_dominating_allocation(&red.instance, &alloc, budget)?;
            total_nodes += found.nodes;
            let improvement = match &sat {
                TriVerdict::Yes(ext) => {
                    let better = construct_improvement_eef(&red, &alloc, &s, ext)?;
                    Value::Bool(dominates(&red.instance, &better, &alloc)?)
                }
                _ => Value::Null,
            };
            unknown |= found.verdict.is_unknown();
            let holds = envy_free
                && improvement != Value::Bool(false)
                && (found.verdict.is_unknown() || found.verdict.is_yes() == sat.is_yes());
            all_hold &= holds;
            let mut row = json!({
                "assignment": assignment_value(&s),
                "envy_free": envy_free,
                "satisfiable_on_assignment": sat.is_yes(),
                "dominated": found.verdict.label(),
                "improvement_dominates": improvement,
                "holds": holds,
            });
            if all_flags {
                row["choices"] = serde_json::to_value(&choices)?;
            }
            rows.push(row);
        }
    }

    let scope = if all_flags {
        ChoiceScope::All
    } else {
        ChoiceScope::Default
    };
    let family = search_x_forall_family(&red, scope, budget)?;
    total_nodes += family.nodes;
    unknown |= family.verdict.is_unknown();
    let end_to_end = family.verdict.is_unknown() || value == family.verdict.is_no();
    all_hold &= end_to_end;

    let verdict = if !all_hold {
        Verdict::No
    } else if unknown {
        Verdict::Unknown
    } else {
        Verdict::Yes
    };
    let mut report = Report::new("verify-reduction", verdict);
    report.result = json!({
        "reduction": "eef",
        "agents": red.instance.num_agents(),
        "resources": red.instance.num_resources(),
        "big_m": rational_to_value(red.big_m.value()),
        "added_clauses": clauses_value(&added),
        "formula_value": value,
        "eef_allocation_exists": family.verdict.label(),
        "relation": "formula true ⇔ no EEF X∀-allocation",
        "agreement": end_to_end,
        "assignments": rows,
    });
    if let TriVerdict::Yes(hit) = &family.verdict {
        report.witness = Some(json!({
            "eef_allocation": allocation_to_value(&red.instance, &hit.allocation),
            "assignment": assignment_value(&hit.assignment),
        }));
    }
    report.stats.nodes = Some(total_nodes);
    report.provenance.push(digest);
    Ok(report)
}
