#![allow(dead_code)]

use gcpdl::audit::sampler::trial_rng;
use gcpdl::audit::schema::{propositional_schemata, Bindings, ConstMeta};
use gcpdl::{BinOp, ChainContext, Formula};
use rand::seq::SliceRandom;
use rand::Rng;

pub const P_IMPLIES_P: &str = include_str!("../fixtures/p_implies_p.proof");
pub const MIXED: &str = include_str!("../fixtures/mixed.proof");

pub struct Mutation {
    pub name: &'static str,
    pub base: &'static str,
    /// Step whose line is replaced, and the replacement body.
    pub step: usize,
    pub line: &'static str,
    pub fails_at: usize,
}

pub fn mutations() -> Vec<Mutation> {
    let m = |name, base, step, line, fails_at| Mutation {
        name,
        base,
        step,
        line,
        fails_at,
    };
    vec![
        m("swapped mp at 3", P_IMPLIES_P, 3, "mp 2 1 (p -> (p -> (p -> p))) -> (p -> (p -> p))", 3),
        m("swapped mp at 9", P_IMPLIES_P, 9, "mp 8 5 p -> p", 9),
        m("swapped mp with premises", MIXED, 3, "mp 2 1 q", 3),
        m("A2 named for an A1 line", P_IMPLIES_P, 1, "axiom A2 p -> (p -> p)", 1),
        m("A1 named for an A3 line", P_IMPLIES_P, 4, "axiom A1 ((p -> (p -> (p -> p))) -> (p -> (p -> p))) -> (((p -> (p -> p)) -> p) -> p)", 4),
        m("A5 named for an A4 line", MIXED, 8, "axiom A5 (~q -> ~p) -> (p -> q)", 8),
        m("A3 named for an A2 line", MIXED, 17, "axiom A3 (q -> ((q -> (q -> q)) -> q)) -> ((((q -> (q -> q)) -> q) -> q) -> (q -> q))", 17),
        m("altered conclusion", P_IMPLIES_P, 9, "mp 5 8 p -> q", 9),
        m("wrong constant arithmetic", MIXED, 9, "axiom A5 #1/2 <-> (#1/2 -> #1/2)", 9),
        m("altered subformula after mp", MIXED, 5, "mp 3 4 q -> q", 5),
    ]
}

pub fn apply(mutation: &Mutation) -> String {
    let prefix = format!("{} ", mutation.step);
    mutation
        .base
        .lines()
        .map(|l| {
            if l.starts_with(&prefix) {
                format!("{prefix}{}", mutation.line)
            } else {
                l.to_string()
            }
        })
        .collect::<Vec<_>>()
        .join("\n")
}

/// Random modality-free formula over `p, q, r`.
pub fn prop_formula<R: Rng>(ctx: ChainContext, depth: usize, rng: &mut R) -> Formula {
    if depth == 0 || rng.gen_bool(0.3) {
        return if rng.gen_bool(0.2) {
            Formula::Const(ctx.value(rng.gen_range(0..=ctx.top_num())).unwrap())
        } else {
            Formula::var(*["p", "q", "r"].choose(rng).unwrap())
        };
    }
    let a = prop_formula(ctx, depth - 1, rng);
    let b = prop_formula(ctx, depth - 1, rng);
    match rng.gen_range(0..4) {
        0 => Formula::and(a, b),
        1 => Formula::or(a, b),
        2 => Formula::implies(a, b),
        _ => Formula::neg(a, ctx),
    }
}

/// Ten instances of each propositional schema.
pub fn pl_corpus(ctx: ChainContext, seed: u64) -> Vec<Formula> {
    let mut out = Vec::new();
    for (k, schema) in propositional_schemata().iter().enumerate() {
        for i in 0..10 {
            let mut rng = trial_rng(seed, k as u64, i);
            let mut b = Bindings::default();
            for m in schema.formula_metas() {
                b.formulas.insert(m, prop_formula(ctx, 2, &mut rng));
            }
            for m in schema.const_metas() {
                let c = ctx.value(rng.gen_range(0..=ctx.top_num())).unwrap();
                b.constants.insert(m, c);
            }
            if schema.uses_op() {
                b.op = Some(*[BinOp::And, BinOp::Or, BinOp::Implies].choose(&mut rng).unwrap());
            }
            let _ = ConstMeta::C;
            out.push(schema.instantiate(&b, ctx).unwrap());
        }
    }
    out
}

pub fn vocab() -> gcpdl::audit::sampler::Vocabulary {
    gcpdl::audit::sampler::Vocabulary {
        programs: vec!["a".into(), "b".into()],
        vars: vec!["p".into(), "q".into()],
    }
}

/// A random model with 1..=4 states and an FL-closed Γ that contains both
/// `[a]φ` and `<a>φ` for some φ.
pub fn filtration_pair(
    ctx: ChainContext,
    seed: u64,
    trial: u64,
) -> (gcpdl::Model, std::collections::BTreeSet<Formula>) {
    use gcpdl::audit::sampler::{random_formula, sample_model_with};
    use gcpdl::syntax::{fl_closure_of_set, DEFAULT_CLOSURE_CAP};
    use gcpdl::Program;
    let mut rng = trial_rng(seed, 7, trial);
    let size = 1 + (trial % 4) as usize;
    let model = sample_model_with(ctx, size, 0.3, &vocab(), &mut rng).unwrap();
    let f = random_formula(ctx, &vocab(), 2, &mut rng);
    let g = random_formula(ctx, &vocab(), 1, &mut rng);
    let a = Program::atomic("a");
    let seeds = [
        f,
        Formula::necessity(a.clone(), g.clone()),
        Formula::possibility(a, g),
    ];
    let gamma = fl_closure_of_set(seeds.iter(), ctx, DEFAULT_CLOSURE_CAP).unwrap();
    (model, gamma)
}
