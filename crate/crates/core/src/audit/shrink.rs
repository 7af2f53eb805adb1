//! Greedy shrinking of counterexamples.
//!
//! A candidate is a model plus schema bindings. Each step proposes smaller
//! neighbours and keeps the first one that still fails; "smaller" is the
//! lexicographic order on [`measure`], so the loop terminates.

use std::collections::{BTreeMap, BTreeSet};

use super::schema::Bindings;
use crate::chain::ChainValue;
use crate::semantics::Model;
use crate::syntax::{Formula, Program};

const MAX_ROUNDS: usize = 1000;
const VAR_NAMES: [&str; 6] = ["p", "q", "r", "s", "t", "u"];
const PROGRAM_NAMES: [&str; 6] = ["a", "b", "c", "d", "e", "f"];

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Candidate {
    pub model: Model,
    pub bindings: Bindings,
}

type Measure = (usize, usize, usize, usize, usize);

fn measure(c: &Candidate) -> Measure {
    let b = &c.bindings;
    let size: usize = b.formulas.values().map(Formula::size).sum::<usize>()
        + b.programs.values().map(Program::size).sum::<usize>();
    let consts = b.formulas.values().filter(|f| matches!(f, Formula::Const(_))).count();
    let vars: BTreeSet<String> = b.formulas.values().flat_map(Formula::propvars).collect();
    let entries = c.model.atomics().map(|(_, r)| r.entries().count()).sum::<usize>()
        + c.model
            .propvars()
            .map(|v| c.model.space().states().filter(|&s| !c.model.value(v, s).is_zero()).count())
            .sum::<usize>();
    (c.model.space().size(), size, consts, vars.len(), entries)
}

/// Shrinks `start`, which must satisfy `fails`. With `rename`, variables and
/// programs are finally renamed to `p, q, ...` and `a, b, ...` and unused
/// ones dropped.
pub(crate) fn shrink<F>(start: Candidate, rename: bool, fails: F) -> Candidate
where
    F: Fn(&Candidate) -> bool,
{
    let mut cur = start;
    for _ in 0..MAX_ROUNDS {
        let m = measure(&cur);
        let next = neighbours(&cur, rename)
            .into_iter()
            .find(|c| measure(c) < m && fails(c));
        match next {
            Some(c) => cur = c,
            None => break,
        }
    }
    if rename {
        let tidy = canonical(&cur);
        if fails(&tidy) {
            cur = tidy;
        }
    }
    cur
}

fn neighbours(c: &Candidate, touch_bindings: bool) -> Vec<Candidate> {
    let mut out = Vec::new();
    let model = &c.model;
    let size = model.space().size();
    let with_model = |m: Model| Candidate {
        model: m,
        bindings: c.bindings.clone(),
    };

    if size > 1 {
        for s in 0..size {
            let keep: Vec<usize> = (0..size).filter(|&t| t != s).collect();
            out.extend(model.restrict(&keep).ok().map(with_model));
        }
        for keep in 0..size {
            for drop in 0..size {
                if keep != drop {
                    out.extend(model.merge_states(keep, drop).ok().map(with_model));
                }
            }
        }
    }

    if touch_bindings {
        binding_neighbours(c, &mut out);
    }

    for (name, rel) in model.atomics() {
        for (s, t, _) in rel.entries() {
            let mut m = model.clone();
            m.relation_mut(name)
                .unwrap()
                .set(s, t, model.context().zero())
                .expect("in range");
            out.push(with_model(m));
        }
    }
    for var in model.propvars() {
        for s in model.space().states() {
            if !model.value(var, s).is_zero() {
                let mut m = model.clone();
                m.set_raw_value(var, s, 0).expect("in range");
                out.push(with_model(m));
            }
        }
    }
    out
}

fn binding_neighbours(c: &Candidate, out: &mut Vec<Candidate>) {
    let model = &c.model;
    let ctx = model.context();
    let vars: Vec<String> = model.propvars().map(str::to_string).collect();
    let programs: Vec<String> = model.atomics().map(|(n, _)| n.to_string()).collect();
    let with_bindings = |b: Bindings| Candidate {
        model: model.clone(),
        bindings: b,
    };

    if c.bindings.formulas.len() > 1 {
        for v in &vars {
            let mut b = c.bindings.clone();
            for f in b.formulas.values_mut() {
                *f = Formula::var(v.clone());
            }
            out.push(with_bindings(b));
        }
    }

    for (meta, f) in &c.bindings.formulas {
        let mut options: Vec<Formula> = f.children().into_iter().cloned().collect();
        if let Formula::Necessity(p, _) | Formula::Possibility(p, _) = f {
            if let Program::Test(g) = p.as_ref() {
                options.push((**g).clone());
            }
        }
        options.extend(vars.iter().map(|v| Formula::var(v.clone())));
        options.push(Formula::Const(ctx.zero()));
        options.push(Formula::Const(ctx.one()));
        for g in options {
            if &g != f {
                let mut b = c.bindings.clone();
                b.formulas.insert(*meta, g);
                out.push(with_bindings(b));
            }
        }
        if let Formula::Const(value) = f {
            out.push(constant_to_var(c, *meta, *value));
        }
    }

    for (meta, p) in &c.bindings.programs {
        let mut options: Vec<Program> = match p {
            Program::Atomic(_) | Program::Test(_) => vec![],
            Program::Union(x, y) | Program::Inter(x, y) | Program::Seq(x, y) => {
                vec![(**x).clone(), (**y).clone()]
            }
            Program::Star(x) => vec![(**x).clone()],
        };
        options.extend(programs.iter().map(|a| Program::atomic(a.clone())));
        for q in options {
            if &q != p {
                let mut b = c.bindings.clone();
                b.programs.insert(*meta, q);
                out.push(with_bindings(b));
            }
        }
    }
}

/// Replaces a constant binding by a fresh variable holding that constant
/// everywhere; the instance keeps its value at every state.
fn constant_to_var(c: &Candidate, meta: super::schema::FormulaMeta, value: ChainValue) -> Candidate {
    let model = &c.model;
    let taken: BTreeSet<&str> = model.propvars().collect();
    let fresh = VAR_NAMES
        .iter()
        .map(|s| s.to_string())
        .chain((0..).map(|i| format!("v{i}")))
        .find(|v| !taken.contains(v.as_str()))
        .unwrap();
    let mut m = model.clone();
    m.declare_var(fresh.clone());
    for s in m.space().states() {
        m.set_value(&fresh, s, value).expect("same chain");
    }
    let mut b = c.bindings.clone();
    b.formulas.insert(meta, Formula::var(fresh));
    Candidate { model: m, bindings: b }
}

/// Drops names the bindings do not mention and renames the rest.
fn canonical(c: &Candidate) -> Candidate {
    let mut vars: Vec<String> = Vec::new();
    let mut programs: Vec<String> = Vec::new();
    let mut note = |f: &Formula| {
        for v in f.propvars() {
            if !vars.contains(&v) {
                vars.push(v);
            }
        }
        for a in f.atomic_programs() {
            if !programs.contains(&a) {
                programs.push(a);
            }
        }
    };
    for f in c.bindings.formulas.values() {
        note(f);
    }
    for p in c.bindings.programs.values() {
        note(&Formula::necessity(p.clone(), Formula::Const(c.model.context().one())));
    }

    let mut model = c.model.clone();
    let present_vars: Vec<String> = model.propvars().map(str::to_string).collect();
    for v in present_vars.iter().filter(|v| !vars.contains(v)) {
        model.remove_var(v);
    }
    let present_programs: Vec<String> = model.atomics().map(|(n, _)| n.to_string()).collect();
    for a in present_programs.iter().filter(|a| !programs.contains(a)) {
        model.remove_relation(a);
    }

    if vars.len() > VAR_NAMES.len() || programs.len() > PROGRAM_NAMES.len() {
        return Candidate {
            model,
            bindings: c.bindings.clone(),
        };
    }
    let var_map: BTreeMap<String, String> = vars
        .iter()
        .zip(VAR_NAMES)
        .map(|(v, n)| (v.clone(), n.to_string()))
        .collect();
    let program_map: BTreeMap<String, String> = programs
        .iter()
        .zip(PROGRAM_NAMES)
        .map(|(a, n)| (a.clone(), n.to_string()))
        .collect();
    let mut bindings = c.bindings.clone();
    for f in bindings.formulas.values_mut() {
        *f = f.rename(&var_map, &program_map);
    }
    for p in bindings.programs.values_mut() {
        *p = p.rename(&var_map, &program_map);
    }
    Candidate {
        model: model.rename(&var_map, &program_map),
        bindings,
    }
}

/// Nonzero relation entries as `(program, state, targets)`, for tests.
#[cfg(test)]
pub(crate) fn support(model: &Model) -> Vec<(String, usize, crate::relations::StateSet)> {
    model
        .atomics()
        .flat_map(|(n, r)| r.entries().map(move |(s, t, _)| (n.to_string(), s, t)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::super::schema::FormulaMeta;
    use super::*;
    use crate::chain::ChainContext;
    use crate::relations::{ReachRelation, StateSet, StateSpace};
    use crate::semantics::Evaluator;

    fn fails_at_zero(c: &Candidate) -> bool {
        // "phi is not 1 somewhere", with phi the bound formula.
        let f = &c.bindings.formulas[&FormulaMeta::Phi];
        let vals = Evaluator::new(&c.model).eval_all(f).unwrap();
        vals.iter().any(|v| !v.is_one())
    }

    #[test]
    fn shrinks_to_a_single_state_and_variable() {
        let ctx = ChainContext::new(3).unwrap();
        let space = StateSpace::new(3).unwrap();
        let mut m = Model::new(ctx, space);
        m.declare_var("x");
        m.declare_var("y");
        for s in 0..3 {
            m.set_raw_value("x", s, 1).unwrap();
            m.set_raw_value("y", s, 2).unwrap();
        }
        let mut r = ReachRelation::zero(space, ctx);
        r.set(0, StateSet::singleton(1), ctx.one()).unwrap();
        m.set_relation("k", r).unwrap();
        let mut b = Bindings::default();
        b.formulas.insert(
            FormulaMeta::Phi,
            Formula::and(Formula::var("y"), Formula::possibility(Program::atomic("k"), Formula::var("x"))),
        );
        let start = Candidate { model: m, bindings: b };
        assert!(fails_at_zero(&start));
        let out = shrink(start, true, fails_at_zero);
        assert_eq!(out.model.space().size(), 1);
        assert_eq!(out.bindings.formulas[&FormulaMeta::Phi], Formula::var("p"));
        assert!(support(&out.model).is_empty());
        assert_eq!(out.model.propvars().collect::<Vec<_>>(), vec!["p"]);
        assert!(!out.model.value("p", 0).is_one());
    }

    #[test]
    fn constants_become_variables() {
        let ctx = ChainContext::new(3).unwrap();
        let m = Model::new(ctx, StateSpace::new(1).unwrap());
        let mut b = Bindings::default();
        b.formulas.insert(FormulaMeta::Phi, Formula::Const(ctx.value(1).unwrap()));
        let start = Candidate { model: m, bindings: b };
        let out = shrink(start, true, fails_at_zero);
        assert_eq!(out.bindings.formulas[&FormulaMeta::Phi], Formula::var("p"));
        assert_eq!(out.model.value("p", 0), ctx.value(0).unwrap());
    }
}
