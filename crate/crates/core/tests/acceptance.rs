//! One line per criterion: `criterion k: PASS|FAIL <detail>`.
//!
//! Criteria 3 and 4 are expected to fail: the residuation schema against a
//! constant and the composition-diamond schema have counterexamples already
//! in the Boolean chain. Their lines are printed as they come out; the test
//! then checks that these are the only failures and that the failing schemata
//! are exactly the known ones.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use gcpdl::audit::sampler::{random_formula, trial_rng};
use gcpdl::audit::{
    check_consequence_prop, dynamic_schemata, lookup, Auditor, SamplerConfig, Variant,
    DEFAULT_VALUATION_BUDGET,
};
use gcpdl::filtration::{check_lemma4, check_preservation, quotient};
use gcpdl::proofcheck::{check_derivation, CheckOptions, Derivation, ProofSystem};
use gcpdl::relations::{ReachRelation, StateSpace};
use gcpdl::semantics::{eval_formula, Evaluator};
use gcpdl::syntax::{fl_closure, fl_closure_of_set, is_fl_closed, DEFAULT_CLOSURE_CAP};
use gcpdl::{parse_formula, ChainContext, ChainValue};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
    /// Schemata with counterexamples, for the audit criteria.
    failing: BTreeSet<String>,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome {
        pass,
        detail,
        failing: BTreeSet::new(),
    }
}

fn timed(budget: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut out = f();
    let took = start.elapsed();
    if took > budget {
        out.pass = false;
    }
    out.detail = format!("{} [{:.2?} of {:?}]", out.detail, took, budget);
    out
}

fn criterion_1() -> Outcome {
    let mut checked = 0u64;
    let mut bad = Vec::new();
    for n in 2..=12u32 {
        let ctx = ChainContext::new(n).unwrap();
        let top = ctx.top_num();
        let one = ctx.one();
        for a in ctx.values() {
            if a.neg().neg() != a {
                bad.push(format!("n={n} involution at {a}"));
            }
            if a.conj(one).unwrap() != a {
                bad.push(format!("n={n} unit at {a}"));
            }
            for b in ctx.values() {
                let (x, y) = (a.numerator(), b.numerator());
                let conj = a.conj(b).unwrap();
                if conj.numerator() != (x + y).saturating_sub(top)
                    || a.implies(b).unwrap().numerator() != (top + y - x.min(top + y)).min(top)
                {
                    bad.push(format!("n={n} arithmetic at {a},{b}"));
                }
                if conj != b.conj(a).unwrap() {
                    bad.push(format!("n={n} commutativity at {a},{b}"));
                }
                let pre = a.implies(b).unwrap().join(b.implies(a).unwrap()).unwrap();
                if !pre.is_one() {
                    bad.push(format!("n={n} prelinearity at {a},{b}"));
                }
                if a.meet(b).unwrap() != a.conj(a.implies(b).unwrap()).unwrap() {
                    bad.push(format!("n={n} divisibility at {a},{b}"));
                }
                for c in ctx.values() {
                    checked += 1;
                    let left = conj.leq(c).unwrap();
                    let right = a.leq(b.implies(c).unwrap()).unwrap();
                    if left != right {
                        bad.push(format!("n={n} residuation at {a},{b},{c}"));
                    }
                    if conj.conj(c).unwrap() != a.conj(b.conj(c).unwrap()).unwrap() {
                        bad.push(format!("n={n} associativity at {a},{b},{c}"));
                    }
                }
            }
        }
    }
    let pass = bad.is_empty();
    let detail = match bad.first() {
        None => format!("{checked} triples over n=2..12"),
        Some(first) => format!("{} violations, first: {first}", bad.len()),
    };
    outcome(pass, detail)
}

fn criterion_2() -> Outcome {
    let mut tuples = 0;
    let mut bad = Vec::new();
    for n in [2u32, 3, 5] {
        let ctx = ChainContext::new(n).unwrap();
        for trial in 0..400u64 {
            let space = StateSpace::new(1 + (trial % 3) as usize).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(trial * 31 + n as u64);
            let density = [0.2, 0.5, 0.9][(trial % 3) as usize];
            let r = ReachRelation::random(space, ctx, density, &mut rng);
            let r2 = ReachRelation::random(space, ctx, density, &mut rng);
            let q = ReachRelation::random(space, ctx, density, &mut rng);
            let extra = ReachRelation::random(space, ctx, density, &mut rng);
            let q_big = q.union(&extra).unwrap();
            tuples += 1;
            let iota = ReachRelation::iota(space, ctx);
            let star = r.star();
            let checks = [
                ("monotone", r.compose(&q).unwrap().leq(&r.compose(&q_big).unwrap()).unwrap()),
                (
                    "distribution",
                    r.union(&r2).unwrap().compose(&q).unwrap()
                        == r.compose(&q).unwrap().union(&r2.compose(&q).unwrap()).unwrap(),
                ),
                ("powers", (0..4).all(|k| r.power(k).leq(&r.power(k + 1)).unwrap())),
                ("left unit", iota.compose(&r).unwrap() == r),
                ("right unit", r.compose(&iota).unwrap() == r),
                ("star fixpoint", iota.union(&r.compose(&star).unwrap()).unwrap() == star),
            ];
            for (name, ok) in checks {
                if !ok {
                    bad.push(format!("{name} n={n} trial={trial}"));
                }
            }
        }
    }
    let pass = bad.is_empty() && tuples >= 1000;
    let detail = match bad.first() {
        None => format!("{tuples} tuples, n in {{2,3,5}}, |S| <= 3"),
        Some(first) => format!("{} violations, first: {first}", bad.len()),
    };
    outcome(pass, detail)
}

fn sampler(n: u32, samples: usize, seed: u64) -> SamplerConfig {
    SamplerConfig {
        n,
        max_states: 3,
        samples,
        seed,
        ..SamplerConfig::default()
    }
}

fn criterion_3() -> Outcome {
    let keys = ["D1", "D2", "D3", "D4", "D10"];
    let schemata: Vec<_> = keys.iter().map(|k| lookup(k).unwrap()).collect();
    let mut failing = BTreeSet::new();
    let mut notes = Vec::new();
    let mut models = 0;
    for n in [2u32, 3, 4] {
        let auditor = Auditor::new(sampler(n, 5000, 3)).unwrap();
        for s in &schemata {
            let r = auditor.find_counterexample(s);
            models += r.models_tested;
            if let Some(w) = r.witness {
                failing.insert(r.schema.clone());
                notes.push(format!("{} at n={n}: {} = {} at {}", r.schema, w.instance, w.value, w.state));
            }
        }
    }
    let detail = if notes.is_empty() {
        format!("zero counterexamples over {models} model samples")
    } else {
        format!("counterexamples: {}", notes.join("; "))
    };
    Outcome {
        pass: notes.is_empty(),
        detail,
        failing,
    }
}

fn criterion_4() -> Outcome {
    let schemata: Vec<_> = dynamic_schemata()
        .into_iter()
        .filter(|s| s.variant != Some(Variant::AsPrinted))
        .collect();
    let auditor = Auditor::new(sampler(2, 10_000, 1)).unwrap();
    let report = auditor.audit(&schemata, &[]);
    let failing: BTreeSet<String> = report.counterexamples().map(str::to_string).collect();
    let detail = if failing.is_empty() {
        format!("{} schemata, zero counterexamples", schemata.len())
    } else {
        let notes: Vec<String> = report
            .schemata
            .iter()
            .filter_map(|r| r.witness.as_ref().map(|w| format!("{}: {} = {}", r.schema, w.instance, w.value)))
            .collect();
        format!("{} schemata, counterexamples: {}", schemata.len(), notes.join("; "))
    };
    Outcome {
        pass: failing.is_empty() && schemata.len() == 17,
        detail,
        failing,
    }
}

fn criterion_5() -> Outcome {
    let ctx = ChainContext::new(3).unwrap();
    let half = ctx.value(1).unwrap();
    let auditor = Auditor::new(sampler(3, 10_000, 1)).unwrap();
    let mut notes = Vec::new();
    let mut pass = true;
    for key in ["D16", "D17"] {
        let r = auditor.find_counterexample(&lookup(key).unwrap());
        let Some(w) = r.witness else {
            pass = false;
            notes.push(format!("{key}: none within {}", r.models_tested));
            continue;
        };
        let model = w.model.to_model().unwrap();
        let s = model.state_names().iter().position(|x| *x == w.state).unwrap();
        let replayed = eval_formula(&model, &parse_formula(&w.instance, ctx).unwrap(), s).unwrap();
        let exact = replayed == half && w.value == "1/2";
        let shape = if key == "D16" {
            model.value("p", s) == half
        } else {
            let single = model.space().set_of([s]).unwrap();
            model.relation("a").map(|r| r.get(s, single)) == Some(half)
        };
        pass &= exact && shape;
        notes.push(format!("{key} trial {}: {} = {replayed} at {}", w.trial, w.instance, w.state));
    }
    outcome(pass, notes.join("; "))
}

fn criterion_6() -> Outcome {
    let ctx = ChainContext::new(2).unwrap();
    let a = parse_formula("<a>p", ctx).unwrap();
    let b = parse_formula("~[a]~p", ctx).unwrap();
    let auditor = Auditor::new(sampler(2, 1000, 1)).unwrap();
    let r = auditor.find_difference(&a, &b, |l: ChainValue, r: ChainValue| l.is_zero() && r.is_one());
    match r.witness {
        Some(w) => {
            let model = w.model.to_model().unwrap();
            let s = model.state_names().iter().position(|x| *x == w.state).unwrap();
            let mut ev = Evaluator::new(&model);
            let ok = ev.eval_all(&a).unwrap()[s].is_zero()
                && ev.eval_all(&b).unwrap()[s].is_one()
                && model.space().size() <= 3;
            outcome(
                ok,
                format!("trial {} with {} states: <a>p = 0, ~[a]~p = 1", w.trial, model.space().size()),
            )
        }
        None => outcome(false, format!("no witness in {} samples", r.models_tested)),
    }
}

fn criterion_7() -> Outcome {
    let mut bad = Vec::new();
    let mut total = 0;
    for n in 2..=5u32 {
        let ctx = ChainContext::new(n).unwrap();
        let corpus = common::pl_corpus(ctx, 3);
        total = corpus.len();
        for f in corpus {
            if !check_consequence_prop(&[], &f, ctx, DEFAULT_VALUATION_BUDGET).unwrap().holds {
                bad.push(format!("n={n}: {f}"));
            }
        }
    }
    let ctx = ChainContext::new(3).unwrap();
    let lem = check_consequence_prop(&[], &parse_formula("p | ~p", ctx).unwrap(), ctx, DEFAULT_VALUATION_BUDGET)
        .unwrap();
    let refuted = !lem.holds && lem.witness.as_ref().map(|w| w["p"].to_string()) == Some("1/2".into());
    outcome(
        bad.is_empty() && refuted && total == 50,
        format!(
            "{total} instances tautological for n=2..5 ({} failures); p | ~p refuted at n=3: {refuted}",
            bad.len()
        ),
    )
}

fn criterion_8() -> Outcome {
    let check = |text: &str| {
        let d = Derivation::parse(text).unwrap();
        check_derivation(&d, ProofSystem::Pl, CheckOptions::default())
    };
    let fixtures = check(common::P_IMPLIES_P).accepted && check(common::MIXED).accepted;
    let mut wrong = Vec::new();
    let muts = common::mutations();
    for m in &muts {
        let v = check(&common::apply(m));
        let at = v.rejection.map(|r| r.step);
        if v.accepted || at != Some(m.fails_at) {
            wrong.push(format!("{} (rejected at {at:?})", m.name));
        }
    }
    outcome(
        fixtures && wrong.is_empty() && muts.len() == 10,
        format!(
            "fixtures accepted: {fixtures}; {} of {} mutations rejected at the right step",
            muts.len() - wrong.len(),
            muts.len()
        ),
    )
}

fn criterion_9() -> Outcome {
    let ctx = ChainContext::new(3).unwrap();
    let vocab = common::vocab();
    let mut sizes = Vec::new();
    let mut bad = Vec::new();
    let mut trial = 0;
    while sizes.len() < 100 {
        let f = random_formula(ctx, &vocab, 4, &mut trial_rng(21, 9, trial));
        trial += 1;
        if f.size() > 25 {
            continue;
        }
        let cl = fl_closure(&f, ctx).unwrap();
        let again = fl_closure_of_set(cl.iter(), ctx, DEFAULT_CLOSURE_CAP).unwrap();
        let sub_closed = cl.iter().all(|g| g.children().iter().all(|c| cl.contains(*c)));
        if again != cl || !sub_closed || !is_fl_closed(&cl, ctx) || !cl.contains(&f) {
            bad.push(f.to_string());
        }
        sizes.push((f.size(), cl.len()));
    }
    let max = sizes.iter().map(|s| s.1).max().unwrap();
    let mean = sizes.iter().map(|s| s.1).sum::<usize>() as f64 / sizes.len() as f64;
    let recorded: Vec<String> = sizes.iter().map(|(f, c)| format!("{f}->{c}")).collect();
    outcome(
        bad.is_empty(),
        format!(
            "100 formulas, closure size mean {mean:.1} max {max}; formula->closure sizes: {}",
            recorded.join(" ")
        ),
    )
}

fn criterion_10() -> Outcome {
    let mut bad = Vec::new();
    let mut agree = (0usize, 0usize);
    for trial in 0..500u64 {
        let n = [2u32, 3, 4][(trial % 3) as usize];
        let ctx = ChainContext::new(n).unwrap();
        let (m, gamma) = common::filtration_pair(ctx, 13, trial);
        let res = quotient(&m, &gamma).unwrap();
        let size = m.space().size();
        let bound = (n as f64).powi(gamma.len() as i32).min(size as f64) as usize;
        if res.quotient.space().size() > bound {
            bad.push(format!("trial {trial}: size bound"));
        }
        let mut ev = Evaluator::new(&m);
        let values: Vec<_> = gamma.iter().map(|f| ev.eval_all(f).unwrap()).collect();
        let related = |s: usize, t: usize| values.iter().all(|v| v[s] == v[t]);
        for s in 0..size {
            for t in 0..size {
                let by_class = res.class_of[s] == res.class_of[t];
                let transitive = (0..size).all(|u| !(related(s, u) && related(u, t)) || related(s, t));
                if by_class != related(s, t) || related(s, t) != related(t, s) || !transitive {
                    bad.push(format!("trial {trial}: equivalence at {s},{t}"));
                }
            }
        }
        let corpus: Vec<_> = gamma.iter().cloned().collect();
        let lemma = check_lemma4(&m, &gamma, "a", &corpus).unwrap();
        if !lemma.holds() {
            bad.push(format!("trial {trial}: lemma4 {:?}", lemma.violations[0]));
        }
        let pres = check_preservation(&m, &gamma).unwrap();
        for row in &pres.rows {
            agree.0 += row.agreeing_states;
            agree.1 += row.states;
        }
    }
    let rate = agree.0 as f64 / agree.1.max(1) as f64;
    println!("preservation: {} of {} (formula, state) pairs agree, rate {rate:.4}", agree.0, agree.1);
    let detail = match bad.first() {
        None => format!("500 pairs; preservation agreement {rate:.4} (report only)"),
        Some(first) => format!("{} problems, first: {first}", bad.len()),
    };
    outcome(bad.is_empty(), detail)
}

fn acceptance() {
    let secs = Duration::from_secs;
    let results = [
        timed(secs(5), criterion_1),
        timed(secs(60), criterion_2),
        timed(secs(300), criterion_3),
        timed(secs(600), criterion_4),
        timed(secs(600), criterion_5),
        timed(secs(600), criterion_6),
        timed(secs(600), criterion_7),
        timed(secs(600), criterion_8),
        timed(secs(600), criterion_9),
        timed(secs(600), criterion_10),
    ];
    for (k, r) in results.iter().enumerate() {
        println!("criterion {}: {} {}", k + 1, if r.pass { "PASS" } else { "FAIL" }, r.detail);
    }

    let known: [(usize, &[&str]); 2] = [(3, &["D4"]), (4, &["D4", "D5"])];
    for (k, r) in results.iter().enumerate() {
        let k = k + 1;
        match known.iter().find(|(c, _)| *c == k) {
            Some((_, schemata)) => {
                let expected: BTreeSet<String> = schemata.iter().map(|s| s.to_string()).collect();
                assert_eq!(r.failing, expected, "criterion {k}: failing schemata changed");
            }
            None => assert!(r.pass, "criterion {k} failed: {}", r.detail),
        }
    }
}

fn known_failures_are_genuine() {
    // The two schemata that break criteria 3 and 4, refuted by hand-built
    // two- and three-state Boolean models.
    let ctx = ChainContext::new(2).unwrap();
    let text = r#"{"n":2,"states":["s0","s1","s2"],"valuation":{"p":{"s1":"1"}},
        "programs":{"a":[{"from":"s0","to":["s1","s2"],"value":"1"}]}}"#;
    let m = gcpdl::ModelFile::from_json(text).unwrap().to_model().unwrap();
    let d4 = parse_formula("[a](p -> #0) <-> (<a>p -> #0)", ctx).unwrap();
    assert!(eval_formula(&m, &d4, 0).unwrap().is_zero());

    let text = r#"{"n":2,"states":["s0","s1"],"valuation":{},
        "programs":{"a":[{"from":"s1","to":["s0","s1"],"value":"1"}],
                    "b":[{"from":"s1","to":["s1"],"value":"1"}]}}"#;
    let m = gcpdl::ModelFile::from_json(text).unwrap().to_model().unwrap();
    let d5 = parse_formula("[a; b]#0 <-> [a][b]#0", ctx).unwrap();
    // s0 has no b-successor, so no branch of a;b survives, but [a][b]#0
    // sees the b-step from s1 fail.
    assert!(!eval_formula(&m, &d5, 1).unwrap().is_one());
}

fn main() {
    known_failures_are_genuine();
    println!("known counterexamples for criteria 3 and 4 replay");
    acceptance();
}
