mod common;

use fairdiv::formula::{CnfFormula, Literal};
use fairdiv::reductions::{
    augment_both_polarities, reduce_3cnf_to_po, reduce_ae3cnf_to_eef, unbalanced_vars, AgentRole,
    ResourceRole,
};
use fairdiv::{utility_vector, Error};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn po_sizes_follow_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..200 {
        let f = common::random_cnf(&mut rng, 6, 6);
        let red = reduce_3cnf_to_po(&f).unwrap();
        let (w, c, l) = (
            red.formula.num_vars(),
            red.formula.clauses().len(),
            red.formula.num_literal_occurrences(),
        );
        assert_eq!(red.instance.num_agents(), 2 * w + c + 2, "{f}");
        assert_eq!(red.instance.num_resources(), w + c + l + 1, "{f}");
        assert_eq!(red.roles.agent_ids(), red.instance.agents());
        assert_eq!(red.roles.resource_ids(), red.instance.resources());
    }
}

#[test]
fn eef_sizes_follow_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for _ in 0..200 {
        let (ae, _) = augment_both_polarities(&common::random_ae(&mut rng));
        let red = reduce_ae3cnf_to_eef(&ae).unwrap();
        let f = &red.formula;
        let (ua, ea, c, l) = (
            f.forall_vars().len(),
            f.exists_vars().len(),
            f.clauses().len(),
            f.matrix().num_literal_occurrences(),
        );
        let lu = f
            .clauses()
            .iter()
            .flatten()
            .filter(|lit| f.is_universal(lit.var))
            .count();
        assert_eq!(
            red.instance.num_agents(),
            4 * ua + 2 * ea + c + lu + 3,
            "{ae}"
        );
        assert_eq!(
            red.instance.num_resources(),
            4 * ua + ea + 2 * c + l + lu + 3,
            "{ae}"
        );
        assert_eq!(
            red.roles
                .count_agents(|r| matches!(r, AgentRole::LiteralEnvyProtection { .. })),
            lu
        );
        assert_eq!(
            red.roles
                .count_resources(|r| matches!(r, ResourceRole::UniversalLiteral { .. })),
            lu
        );
        assert!(red.big_m_invariant_holds());
        assert_eq!(red.roles.agent_ids(), red.instance.agents());
    }
}

#[test]
fn augmentation_balances_every_variable() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for _ in 0..200 {
        let ae = common::random_ae(&mut rng);
        let (augmented, added) = augment_both_polarities(&ae);
        assert!(unbalanced_vars(augmented.matrix()).is_empty());
        assert_eq!(augmented.clauses().len(), ae.clauses().len() + added.len());
        for clause in &added {
            assert_eq!(clause.len(), 2);
            assert_eq!(clause[0], clause[1].negated());
        }
        let tautologies_only_added = added.is_empty() || !unbalanced_vars(ae.matrix()).is_empty();
        assert!(tautologies_only_added);
    }
}

#[test]
fn unbalanced_formula_is_rejected() {
    let f = CnfFormula::new(2, vec![vec![Literal::pos(0), Literal::pos(1)]]).unwrap();
    let ae = fairdiv::AeFormula::new(vec![0], vec![1], f).unwrap();
    assert!(matches!(
        reduce_ae3cnf_to_eef(&ae),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn po_baseline_utilities() {
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    for _ in 0..100 {
        let f = common::random_cnf(&mut rng, 4, 4);
        let red = reduce_3cnf_to_po(&f).unwrap();
        let u = utility_vector(&red.instance, &red.baseline).unwrap();
        let roles = &red.roles;
        let w = red.formula.num_vars() as i64;
        let c = red.formula.clauses().len() as i64;
        assert_eq!(
            u.values()[roles.agent(AgentRole::Unassigned).unwrap()],
            fairdiv::rat(w)
        );
        assert_eq!(
            u.values()[roles.agent(AgentRole::Satisfied).unwrap()],
            fairdiv::rat(c)
        );
        for k in 0..red.formula.clauses().len() {
            assert_eq!(
                u.values()[roles.agent(AgentRole::Clause { clause: k }).unwrap()],
                fairdiv::rat(1)
            );
        }
    }
}
