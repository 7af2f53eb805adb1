mod common;

use common::pl_corpus;
use gcpdl::audit::sampler::{sample_model_with, trial_rng};
use gcpdl::audit::{
    all_schemata, check_consequence_prop, lookup, Auditor, SamplerConfig, Verdict, Witness, DEFAULT_VALUATION_BUDGET,
};
use gcpdl::semantics::{eval_formula, valid_in_model};
use gcpdl::{parse_formula, ChainContext, ChainValue, Execution};

fn cfg(n: u32, samples: usize, seed: u64) -> SamplerConfig {
    SamplerConfig {
        n,
        samples,
        seed,
        ..SamplerConfig::default()
    }
}

fn replay(w: &Witness, n: u32) -> ChainValue {
    let ctx = ChainContext::new(n).unwrap();
    let model = w.model.to_model().unwrap();
    let f = parse_formula(&w.instance, ctx).unwrap();
    let s = model.state_names().iter().position(|x| *x == w.state).unwrap();
    eval_formula(&model, &f, s).unwrap()
}

#[test]
fn runs_are_reproducible() {
    let schemata: Vec<_> = ["A1", "D4", "D13", "D16"].iter().map(|k| lookup(k).unwrap()).collect();
    let run = |exec| {
        Auditor::new(cfg(3, 400, 42))
            .unwrap()
            .with_execution(exec)
            .audit(&schemata, &[])
            .to_json()
    };
    let first = run(Execution::Sequential);
    assert_eq!(first, run(Execution::Sequential));
    assert_eq!(first, run(Execution::Parallel));
}

#[test]
fn witnesses_replay_below_one() {
    for n in [2, 3] {
        let auditor = Auditor::new(cfg(n, 2000, 1)).unwrap();
        for schema in all_schemata() {
            let r = auditor.find_counterexample(&schema);
            if let Some(w) = &r.witness {
                let v = replay(w, n);
                assert!(!v.is_one(), "{}", r.schema);
                assert_eq!(v.to_string(), w.value);
            } else {
                assert_eq!(r.verdict, Verdict::NoCounterexampleFound);
            }
        }
    }
}

#[test]
fn sound_schemata_survive() {
    let auditor = Auditor::new(cfg(3, 1500, 9)).unwrap();
    for key in ["A1", "A2", "A3", "A4", "A5", "D1", "D2", "D3", "D6", "D8", "D10", "D12"] {
        let r = auditor.find_counterexample(&lookup(key).unwrap());
        assert_eq!(r.verdict, Verdict::NoCounterexampleFound, "{key}: {:?}", r.witness);
    }
}

#[test]
fn consequence_matches_one_state_validity() {
    // A modality-free formula is a tautology iff it holds at every
    // valuation, i.e. in every one-state model.
    for n in [2, 3, 4] {
        let ctx = ChainContext::new(n).unwrap();
        for trial in 0..200 {
            let mut rng = trial_rng(17, n as u64, trial);
            let f = common::prop_formula(ctx, 3, &mut rng);
            let r = check_consequence_prop(&[], &f, ctx, DEFAULT_VALUATION_BUDGET).unwrap();
            let vars: Vec<String> = f.propvars().into_iter().collect();
            let mut all_valid = true;
            let combos = (n as usize).pow(vars.len() as u32);
            for code in 0..combos {
                let mut m = sample_model_with(ctx, 1, 0.0, &common::vocab(), &mut rng).unwrap();
                let mut rest = code;
                for v in &vars {
                    m.declare_var(v);
                    m.set_value(v, 0, ctx.value((rest % n as usize) as u32).unwrap()).unwrap();
                    rest /= n as usize;
                }
                all_valid &= valid_in_model(&m, &f).unwrap().valid;
            }
            assert_eq!(r.holds, all_valid, "{f}");
        }
    }
}

#[test]
fn propositional_corpus_is_tautological() {
    for n in 2..=5 {
        let ctx = ChainContext::new(n).unwrap();
        for f in pl_corpus(ctx, 3) {
            assert!(check_consequence_prop(&[], &f, ctx, DEFAULT_VALUATION_BUDGET).unwrap().holds, "{f}");
        }
    }
}

#[test]
fn excluded_middle_fails_at_three() {
    let ctx = ChainContext::new(3).unwrap();
    let f = parse_formula("p | ~p", ctx).unwrap();
    let r = check_consequence_prop(&[], &f, ctx, DEFAULT_VALUATION_BUDGET).unwrap();
    assert!(!r.holds);
    assert_eq!(r.witness.unwrap()["p"].to_string(), "1/2");
}

#[test]
fn modal_goals_are_rejected() {
    let ctx = ChainContext::new(3).unwrap();
    let f = parse_formula("[a]p", ctx).unwrap();
    assert!(check_consequence_prop(&[], &f, ctx, DEFAULT_VALUATION_BUDGET).is_err());
}
