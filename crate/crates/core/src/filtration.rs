//! Filtration of an explicit finite model through a Fischer–Ladner closed
//! set Γ.
//!
//! States are identified when every member of Γ takes the same value on
//! them. For an atomic program `a` the quotient relation at `(|s|, X)` is
//! the meet, over every φ with both `[a]φ` and `<a>φ` in Γ, of
//!
//! ```text
//! ([a]φ(s) -> ⋀_{t∈T} φ(t)) ∧ (⋀_{t∈T} φ(t) -> <a>φ(s))
//! ```
//!
//! where `s` and `T` are the minimal-index representatives of `|s|` and of
//! the classes in `X`. The empty meet is `1̄`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chain::ChainContext;
use crate::model_file::ModelFile;
use crate::relations::{ReachRelation, RelationError, StateSet, StateSpace};
use crate::semantics::{EvalError, EvalOptions, Evaluator, Model};
use crate::syntax::{is_fl_closed, Formula, Program};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FiltrationError {
    #[error("the formula set is not Fischer-Ladner closed")]
    NotClosed,
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Relation(#[from] RelationError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiltrationResult {
    pub quotient: Model,
    /// Quotient state of each original state.
    pub class_of: Vec<usize>,
    /// Members of each quotient state, ascending.
    pub classes: Vec<Vec<usize>>,
    pub gamma: Vec<Formula>,
    /// Representative-dependence notes; empty when the relation does not
    /// depend on the choice of representatives.
    pub warnings: Vec<String>,
}

impl FiltrationResult {
    /// The quotient in the model format, with its `classes` table.
    pub fn to_model_file(&self, original: &Model) -> ModelFile {
        let mut file = ModelFile::from_model(&self.quotient);
        let names = original.state_names();
        file.classes = Some(
            self.classes
                .iter()
                .enumerate()
                .map(|(q, members)| {
                    (
                        self.quotient.state_names()[q].clone(),
                        members.iter().map(|&s| names[s].clone()).collect(),
                    )
                })
                .collect(),
        );
        file
    }

    /// Graphviz rendering of the quotient. Edges to a single state are drawn
    /// directly; edges to larger or empty target sets go through a point node.
    pub fn to_dot(&self, original: &Model) -> String {
        let names = original.state_names();
        let qnames = self.quotient.state_names();
        let mut out = String::from("digraph quotient {\n  rankdir=LR;\n");
        for (q, members) in self.classes.iter().enumerate() {
            let label: Vec<&str> = members.iter().map(|&s| names[s].as_str()).collect();
            let _ = writeln!(out, "  \"{}\" [label=\"{}\\n{{{}}}\"];", qnames[q], qnames[q], label.join(","));
        }
        let mut hub = 0;
        for (name, rel) in self.quotient.atomics() {
            for (s, t, v) in rel.entries() {
                if t.len() == 1 {
                    let target = t.iter().next().unwrap();
                    let _ = writeln!(out, "  \"{}\" -> \"{}\" [label=\"{name}:{v}\"];", qnames[s], qnames[target]);
                } else {
                    let h = format!("h{hub}");
                    hub += 1;
                    let _ = writeln!(out, "  \"{h}\" [shape=point];");
                    let _ = writeln!(out, "  \"{}\" -> \"{h}\" [label=\"{name}:{v}\"];", qnames[s]);
                    for target in t.iter() {
                        let _ = writeln!(out, "  \"{h}\" -> \"{}\";", qnames[target]);
                    }
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Formulas φ with both `[a]φ` and `<a>φ` in Γ.
pub fn filter_formulas(gamma: &BTreeSet<Formula>, program: &str) -> Vec<Formula> {
    let atom = Program::atomic(program);
    gamma
        .iter()
        .filter_map(|f| match f {
            Formula::Necessity(p, body) if **p == atom => {
                let dia = Formula::possibility(atom.clone(), (**body).clone());
                gamma.contains(&dia).then(|| (**body).clone())
            }
            _ => None,
        })
        .collect()
}

struct Table {
    ctx: ChainContext,
    /// `values[i][s]` is the value of the i-th formula at state `s`.
    values: Vec<Vec<u32>>,
}

fn table(model: &Model, formulas: &[Formula], options: EvalOptions) -> Result<Table, EvalError> {
    let mut ev = Evaluator::with_options(model, options);
    let values = formulas
        .iter()
        .map(|f| ev.eval_all(f).map(|v| v.into_iter().map(|c| c.numerator()).collect()))
        .collect::<Result<_, _>>()?;
    Ok(Table {
        ctx: model.context(),
        values,
    })
}

/// The meet of the filtration terms for `phis` at state `s` and target set
/// `targets`, with the term values read from `values` (per formula: box,
/// diamond, body).
fn restricted_meet(ctx: ChainContext, terms: &[[&[u32]; 3]], s: usize, targets: &[usize]) -> u32 {
    let mut acc = ctx.top_num();
    for [boxed, dia, body] in terms {
        let inf = targets.iter().map(|&t| body[t]).min().unwrap_or(ctx.top_num());
        let left = ctx.implies_raw(boxed[s], inf);
        let right = ctx.implies_raw(inf, dia[s]);
        acc = acc.min(left).min(right);
    }
    acc
}

pub fn quotient(model: &Model, gamma: &BTreeSet<Formula>) -> Result<FiltrationResult, FiltrationError> {
    quotient_with(model, gamma, EvalOptions::default())
}

pub fn quotient_with(
    model: &Model,
    gamma: &BTreeSet<Formula>,
    options: EvalOptions,
) -> Result<FiltrationResult, FiltrationError> {
    let ctx = model.context();
    if !is_fl_closed(gamma, ctx) {
        return Err(FiltrationError::NotClosed);
    }
    let members: Vec<Formula> = gamma.iter().cloned().collect();
    let tab = table(model, &members, options)?;
    let size = model.space().size();

    let mut class_of = vec![0; size];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut seen: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
    for s in 0..size {
        let signature: Vec<u32> = tab.values.iter().map(|v| v[s]).collect();
        let next = classes.len();
        let c = *seen.entry(signature).or_insert(next);
        if c == next {
            classes.push(Vec::new());
        }
        classes[c].push(s);
        class_of[s] = c;
    }

    let qspace = StateSpace::new(classes.len())?;
    let names = (0..classes.len()).map(|q| format!("q{q}")).collect();
    let mut quotient = Model::new(ctx, qspace).with_state_names(names).expect("distinct names");
    let min_rep: Vec<usize> = classes.iter().map(|c| c[0]).collect();
    let max_rep: Vec<usize> = classes.iter().map(|c| *c.last().unwrap()).collect();

    for f in gamma {
        if let Formula::Var(p) = f {
            quotient.declare_var(p.clone());
            for (q, &rep) in min_rep.iter().enumerate() {
                quotient.set_value(p, q, model.value(p, rep)).expect("same chain");
            }
        }
    }

    let mut warnings = Vec::new();
    let programs: Vec<String> = model.atomics().map(|(n, _)| n.to_string()).collect();
    for name in &programs {
        let phis = filter_formulas(gamma, name);
        let mut probe = Vec::new();
        for phi in &phis {
            probe.push(Formula::necessity(Program::atomic(name.clone()), phi.clone()));
            probe.push(Formula::possibility(Program::atomic(name.clone()), phi.clone()));
            probe.push(phi.clone());
        }
        let ptab = table(model, &probe, options)?;
        let terms: Vec<[&[u32]; 3]> = ptab
            .values
            .chunks(3)
            .map(|c| [c[0].as_slice(), c[1].as_slice(), c[2].as_slice()])
            .collect();
        let build = |reps: &[usize]| {
            let mut rel = ReachRelation::zero(qspace, ctx);
            for q in qspace.states() {
                for x in qspace.subsets() {
                    let targets: Vec<usize> = x.iter().map(|c| reps[c]).collect();
                    let v = restricted_meet(ptab.ctx, &terms, reps[q], &targets);
                    rel.set(q, x, ctx.value(v).expect("in range")).expect("in range");
                }
            }
            rel
        };
        let rel = build(&min_rep);
        if min_rep != max_rep && build(&max_rep) != rel {
            warnings.push(format!(
                "relation {name} depends on the choice of class representatives"
            ));
        }
        quotient.set_relation(name.clone(), rel).expect("same space");
    }

    Ok(FiltrationResult {
        quotient,
        class_of,
        classes,
        gamma: members,
        warnings,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Lemma4Kind {
    /// `R(s,T)` exceeds the quotient relation at `(|s|, |T|)`.
    Relation,
    /// The Γ-restricted meet is below the meet over the corpus.
    Corpus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma4Violation {
    pub kind: Lemma4Kind,
    pub state: String,
    pub targets: Vec<String>,
    /// Formula attaining the smaller meet, when there is one.
    pub formula: Option<String>,
    pub restricted: String,
    pub other: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma4Report {
    pub program: String,
    pub points_checked: usize,
    pub violations: Vec<Lemma4Violation>,
}

impl Lemma4Report {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks, for every state `s` and target set `T` of `model`, that
/// `R_a(s,T)` is at most the quotient relation at `(|s|, |T|)`, and that the
/// Γ-restricted meet at `(|s|, |T|)` dominates the meet of the same terms
/// over `corpus` together with the Γ filter formulas, evaluated at `(s, T)`.
pub fn check_lemma4(
    model: &Model,
    gamma: &BTreeSet<Formula>,
    program: &str,
    corpus: &[Formula],
) -> Result<Lemma4Report, FiltrationError> {
    let ctx = model.context();
    let res = quotient(model, gamma)?;
    let names = model.state_names();
    let rel = model
        .relation(program)
        .cloned()
        .unwrap_or_else(|| ReachRelation::zero(model.space(), ctx));
    let qrel = res
        .quotient
        .relation(program)
        .cloned()
        .unwrap_or_else(|| ReachRelation::zero(res.quotient.space(), ctx));

    let mut all: Vec<Formula> = filter_formulas(gamma, program);
    for f in corpus {
        if !all.contains(f) {
            all.push(f.clone());
        }
    }
    let mut probe = Vec::new();
    for phi in &all {
        probe.push(Formula::necessity(Program::atomic(program), phi.clone()));
        probe.push(Formula::possibility(Program::atomic(program), phi.clone()));
        probe.push(phi.clone());
    }
    let ptab = table(model, &probe, EvalOptions::default())?;
    let terms: Vec<[&[u32]; 3]> = ptab
        .values
        .chunks(3)
        .map(|c| [c[0].as_slice(), c[1].as_slice(), c[2].as_slice()])
        .collect();

    let mut violations = Vec::new();
    let mut points = 0;
    for s in model.space().states() {
        for t in model.space().subsets() {
            points += 1;
            let qx = StateSet::from_bits(t.iter().fold(0, |acc, u| acc | 1 << res.class_of[u]));
            let restricted = qrel.get(res.class_of[s], qx);
            let label = |set: StateSet| set.iter().map(|u| names[u].clone()).collect::<Vec<_>>();
            let r = rel.get(s, t);
            if !r.leq(restricted).expect("same chain") {
                violations.push(Lemma4Violation {
                    kind: Lemma4Kind::Relation,
                    state: names[s].clone(),
                    targets: label(t),
                    formula: None,
                    restricted: restricted.to_string(),
                    other: r.to_string(),
                });
            }
            let targets: Vec<usize> = t.iter().collect();
            let (unrestricted, argmin) = terms
                .iter()
                .enumerate()
                .map(|(i, term)| (restricted_meet(ctx, std::slice::from_ref(term), s, &targets), i))
                .min()
                .unwrap_or((ctx.top_num(), usize::MAX));
            if restricted.numerator() < unrestricted {
                violations.push(Lemma4Violation {
                    kind: Lemma4Kind::Corpus,
                    state: names[s].clone(),
                    targets: label(t),
                    formula: all.get(argmin).map(|f| f.to_string()),
                    restricted: restricted.to_string(),
                    other: ctx.value(unrestricted).unwrap().to_string(),
                });
            }
        }
    }
    Ok(Lemma4Report {
        program: program.to_string(),
        points_checked: points,
        violations,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreservationRow {
    pub formula: String,
    pub agreeing_states: usize,
    pub states: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreservationReport {
    pub rows: Vec<PreservationRow>,
}

impl PreservationReport {
    pub fn agreement_rate(&self) -> f64 {
        let (a, n) = self
            .rows
            .iter()
            .fold((0, 0), |(a, n), r| (a + r.agreeing_states, n + r.states));
        if n == 0 {
            1.0
        } else {
            a as f64 / n as f64
        }
    }
}

/// Compares the value of each member of Γ at `s` with its value in the
/// quotient at `|s|`. Report only.
pub fn check_preservation(model: &Model, gamma: &BTreeSet<Formula>) -> Result<PreservationReport, FiltrationError> {
    let res = quotient(model, gamma)?;
    let mut ev = Evaluator::new(model);
    let mut qev = Evaluator::new(&res.quotient);
    let mut rows = Vec::new();
    for f in gamma {
        let here = ev.eval_all(f)?;
        let there = qev.eval_all(f)?;
        let agreeing = (0..here.len()).filter(|&s| here[s] == there[res.class_of[s]]).count();
        rows.push(PreservationRow {
            formula: f.to_string(),
            agreeing_states: agreeing,
            states: here.len(),
        });
    }
    Ok(PreservationReport { rows })
}
