mod common;

use common::{apply, mutations, MIXED, P_IMPLIES_P};
use gcpdl::audit::{check_consequence_prop, DEFAULT_VALUATION_BUDGET};
use gcpdl::proofcheck::{check_derivation, CheckOptions, Derivation, ProofSystem, ReasonCode, Step};
use gcpdl::{parse_formula, ChainContext};

fn check(text: &str) -> gcpdl::proofcheck::ProofVerdict {
    let d = Derivation::parse(text).unwrap();
    check_derivation(&d, ProofSystem::Pl, CheckOptions::default())
}

#[test]
fn fixtures_are_accepted() {
    let v = check(P_IMPLIES_P);
    assert!(v.accepted, "{:?}", v.rejection);
    assert_eq!(v.steps, 9);
    let v = check(MIXED);
    assert!(v.accepted, "{:?}", v.rejection);
    assert_eq!(v.steps, 20);
    let used: Vec<_> = v.schemata.iter().flatten().map(String::as_str).collect();
    for id in ["A1", "A2", "A3", "A4", "A5"] {
        assert!(used.contains(&id), "{id} unused");
    }
}

#[test]
fn mutations_fail_at_the_expected_step() {
    for m in mutations() {
        let text = apply(&m);
        assert_ne!(text.trim(), m.base.trim(), "{} changed nothing", m.name);
        let v = check(&text);
        assert!(!v.accepted, "{} accepted", m.name);
        assert_eq!(v.rejection.unwrap().step, m.fails_at, "{}", m.name);
    }
}

#[test]
fn swapped_indices_report_mp_mismatch() {
    let m = &mutations()[0];
    let r = check(&apply(m)).rejection.unwrap();
    assert_eq!(r.code, ReasonCode::MpMismatch);
}

#[test]
fn schema_search_recovers_a_misnamed_axiom() {
    let m = &mutations()[3];
    let d = Derivation::parse(&apply(m)).unwrap();
    let opts = CheckOptions {
        search_schemata: true,
        ..CheckOptions::default()
    };
    let v = check_derivation(&d, ProofSystem::Pl, opts);
    assert!(v.accepted);
    assert_eq!(v.schemata[0].as_deref(), Some("A1"));
}

#[test]
fn display_round_trips() {
    for text in [P_IMPLIES_P, MIXED] {
        let d = Derivation::parse(text).unwrap();
        assert_eq!(Derivation::parse(&d.to_string()).unwrap(), d);
    }
}

#[test]
fn accepted_lines_are_consequences_of_the_premises() {
    for text in [P_IMPLIES_P, MIXED] {
        let d = Derivation::parse(text).unwrap();
        let ctx = d.ctx;
        for step in &d.steps {
            let r = check_consequence_prop(&d.premises, step.formula(), ctx, DEFAULT_VALUATION_BUDGET).unwrap();
            assert!(r.holds, "{} fails: {:?}", step.formula(), r.witness);
        }
    }
}

#[test]
fn constant_free_lines_are_tautologies_for_other_orders() {
    let d = Derivation::parse(P_IMPLIES_P).unwrap();
    for n in 2..=6 {
        let ctx = ChainContext::new(n).unwrap();
        for step in &d.steps {
            let f = parse_formula(&step.formula().to_string(), ctx).unwrap();
            assert!(check_consequence_prop(&[], &f, ctx, DEFAULT_VALUATION_BUDGET).unwrap().holds);
        }
        if let Step::Mp { formula, .. } = d.steps.last().unwrap() {
            assert_eq!(formula.to_string(), "p -> p");
        }
    }
}

#[test]
fn dynamic_axioms_need_the_dynamic_system() {
    let text = "n: 3\n1 axiom D2 [a]p & [a]q -> [a](p & q)\n";
    let d = Derivation::parse(text).unwrap();
    let pl = check_derivation(&d, ProofSystem::Pl, CheckOptions::default());
    assert_eq!(pl.rejection.unwrap().code, ReasonCode::WrongSystem);
    assert!(check_derivation(&d, ProofSystem::Dl, CheckOptions::default()).accepted);
}
