//! Łn-models and their interpretation of formulas and programs.

use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use thiserror::Error;

use crate::chain::{ChainContext, ChainError, ChainValue};
use crate::relations::{ParallelReading, ReachRelation, RelationError, StateSet, StateSpace, UnionReading};
use crate::syntax::{Formula, Program};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error(transparent)]
    Relation(#[from] RelationError),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error("expected {expected} state names, got {got}")]
    StateNames { expected: usize, got: usize },
    #[error("duplicate state name {0:?}")]
    DuplicateState(String),
}

/// A finite Łn-model: a state space, one reachable relation per atomic
/// program and a graded valuation of propositional variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    ctx: ChainContext,
    space: StateSpace,
    state_names: Vec<String>,
    atomics: BTreeMap<String, ReachRelation>,
    valuation: BTreeMap<String, Vec<u32>>,
}

impl Model {
    /// An empty model with states named `s0, s1, ...`.
    pub fn new(ctx: ChainContext, space: StateSpace) -> Model {
        Model {
            ctx,
            space,
            state_names: space.states().map(|s| format!("s{s}")).collect(),
            atomics: BTreeMap::new(),
            valuation: BTreeMap::new(),
        }
    }

    pub fn with_state_names(mut self, names: Vec<String>) -> Result<Model, ModelError> {
        if names.len() != self.space.size() {
            return Err(ModelError::StateNames {
                expected: self.space.size(),
                got: names.len(),
            });
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(ModelError::DuplicateState(n.clone()));
            }
        }
        self.state_names = names;
        Ok(self)
    }

    pub fn context(&self) -> ChainContext {
        self.ctx
    }

    pub fn space(&self) -> StateSpace {
        self.space
    }

    pub fn state_names(&self) -> &[String] {
        &self.state_names
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.state_names.iter().position(|n| n == name)
    }

    pub fn set_relation(&mut self, name: impl Into<String>, rel: ReachRelation) -> Result<(), ModelError> {
        if rel.space() != self.space {
            return Err(RelationError::SpaceMismatch {
                left: self.space.size(),
                right: rel.space().size(),
            }
            .into());
        }
        if rel.context() != self.ctx {
            return Err(ChainError::ContextMismatch {
                left: self.ctx.order(),
                right: rel.context().order(),
            }
            .into());
        }
        self.atomics.insert(name.into(), rel);
        Ok(())
    }

    pub fn relation(&self, name: &str) -> Option<&ReachRelation> {
        self.atomics.get(name)
    }

    pub fn relation_mut(&mut self, name: &str) -> Option<&mut ReachRelation> {
        self.atomics.get_mut(name)
    }

    pub fn atomics(&self) -> impl Iterator<Item = (&str, &ReachRelation)> {
        self.atomics.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Declares `var` (all zero) if it is not yet present.
    pub fn declare_var(&mut self, var: impl Into<String>) {
        let size = self.space.size();
        self.valuation.entry(var.into()).or_insert_with(|| vec![0; size]);
    }

    pub fn set_value(&mut self, var: &str, state: usize, value: ChainValue) -> Result<(), ModelError> {
        self.space.check_state(state)?;
        if value.context() != self.ctx {
            return Err(ChainError::ContextMismatch {
                left: self.ctx.order(),
                right: value.context().order(),
            }
            .into());
        }
        self.declare_var(var);
        self.valuation.get_mut(var).expect("declared")[state] = value.numerator();
        Ok(())
    }

    /// `V(p)(s)`, defaulting to `0̄` for undeclared variables.
    pub fn value(&self, var: &str, state: usize) -> ChainValue {
        let num = self.valuation.get(var).map_or(0, |vals| vals[state]);
        ChainValue::from_ctx_raw(self.ctx, num)
    }

    pub fn propvars(&self) -> impl Iterator<Item = &str> {
        self.valuation.keys().map(String::as_str)
    }

    fn raw_values(&self, var: &str) -> Option<&[u32]> {
        self.valuation.get(var).map(Vec::as_slice)
    }

    /// The submodel on `keep` (in the given order); relations keep only
    /// target sets inside `keep`.
    pub fn restrict(&self, keep: &[usize]) -> Result<Model, ModelError> {
        let space = StateSpace::new(keep.len())?;
        for &s in keep {
            self.space.check_state(s)?;
        }
        let names = keep.iter().map(|&s| self.state_names[s].clone()).collect();
        let mut out = Model::new(self.ctx, space).with_state_names(names)?;
        for (name, rel) in &self.atomics {
            let mut r = ReachRelation::zero(space, self.ctx);
            for (new_s, &old_s) in keep.iter().enumerate() {
                for t in space.subsets() {
                    let old_t = self.space.set_of(t.iter().map(|i| keep[i]))?;
                    r.set(new_s, t, rel.get(old_s, old_t))?;
                }
            }
            out.atomics.insert(name.clone(), r);
        }
        for (var, vals) in &self.valuation {
            out.valuation
                .insert(var.clone(), keep.iter().map(|&s| vals[s]).collect());
        }
        Ok(out)
    }

    /// Identifies state `drop` with `keep`: every entry `(s,T)` moves to the
    /// image of `s` and `T`, joining collisions; `drop`'s valuation is discarded.
    pub fn merge_states(&self, keep: usize, drop: usize) -> Result<Model, ModelError> {
        self.space.check_state(keep)?;
        self.space.check_state(drop)?;
        let n = self.space.size();
        let old_to_new: Vec<usize> = (0..n)
            .map(|s| {
                let s = if s == drop { keep } else { s };
                if s > drop {
                    s - 1
                } else {
                    s
                }
            })
            .collect();
        let kept: Vec<usize> = (0..n).filter(|&s| s != drop).collect();
        let space = StateSpace::new(n - 1)?;
        let names = kept.iter().map(|&s| self.state_names[s].clone()).collect();
        let mut out = Model::new(self.ctx, space).with_state_names(names)?;
        for (name, rel) in &self.atomics {
            let mut r = ReachRelation::zero(space, self.ctx);
            for (s, t, v) in rel.entries() {
                let ns = old_to_new[s];
                let nt = space.set_of(t.iter().map(|i| old_to_new[i]))?;
                let joined = r.get(ns, nt).join(v)?;
                r.set(ns, nt, joined)?;
            }
            out.atomics.insert(name.clone(), r);
        }
        for (var, vals) in &self.valuation {
            out.valuation
                .insert(var.clone(), kept.iter().map(|&s| vals[s]).collect());
        }
        Ok(out)
    }

    /// Renames propositional variables and atomic programs. Names absent from
    /// the maps are kept.
    pub fn rename(&self, vars: &BTreeMap<String, String>, programs: &BTreeMap<String, String>) -> Model {
        let mut out = self.clone();
        out.valuation = self
            .valuation
            .iter()
            .map(|(k, v)| (vars.get(k).unwrap_or(k).clone(), v.clone()))
            .collect();
        out.atomics = self
            .atomics
            .iter()
            .map(|(k, v)| (programs.get(k).unwrap_or(k).clone(), v.clone()))
            .collect();
        out
    }

    pub fn set_raw_value(&mut self, var: &str, state: usize, num: u32) -> Result<(), ModelError> {
        let v = self.ctx.value(num)?;
        self.set_value(var, state, v)
    }

    pub fn remove_var(&mut self, var: &str) {
        self.valuation.remove(var);
    }

    pub fn remove_relation(&mut self, name: &str) {
        self.atomics.remove(name);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("constant {value} does not belong to {expected}")]
    ForeignConstant { value: ChainValue, expected: ChainContext },
    #[error("state {state} out of range for a model of {size} states")]
    StateOutOfRange { state: usize, size: usize },
}

/// Readings of the relation operations that the printed definitions leave
/// open.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct EvalOptions {
    pub union: UnionReading,
    pub parallel: ParallelReading,
}

/// An evaluation session over one model, memoising formula values (as a
/// vector over states) and program relations.
pub struct Evaluator<'m> {
    model: &'m Model,
    options: EvalOptions,
    formulas: HashMap<Formula, Rc<Vec<u32>>>,
    programs: HashMap<Program, Rc<ReachRelation>>,
}

impl<'m> Evaluator<'m> {
    pub fn new(model: &'m Model) -> Self {
        Self::with_options(model, EvalOptions::default())
    }

    pub fn with_options(model: &'m Model, options: EvalOptions) -> Self {
        Evaluator {
            model,
            options,
            formulas: HashMap::new(),
            programs: HashMap::new(),
        }
    }

    pub fn model(&self) -> &'m Model {
        self.model
    }

    fn check_state(&self, s: usize) -> Result<(), EvalError> {
        let size = self.model.space.size();
        if s < size {
            Ok(())
        } else {
            Err(EvalError::StateOutOfRange { state: s, size })
        }
    }

    pub fn eval(&mut self, f: &Formula, s: usize) -> Result<ChainValue, EvalError> {
        self.check_state(s)?;
        let vals = self.values(f)?;
        Ok(ChainValue::from_ctx_raw(self.model.ctx, vals[s]))
    }

    /// `I_M(φ, s)` for every state.
    pub fn eval_all(&mut self, f: &Formula) -> Result<Vec<ChainValue>, EvalError> {
        let ctx = self.model.ctx;
        Ok(self.values(f)?.iter().map(|&v| ChainValue::from_ctx_raw(ctx, v)).collect())
    }

    pub fn eval_program(&mut self, p: &Program, s: usize, t: StateSet) -> Result<ChainValue, EvalError> {
        self.check_state(s)?;
        let rel = self.relation(p)?;
        Ok(rel.get(s, t))
    }

    pub(crate) fn values(&mut self, f: &Formula) -> Result<Rc<Vec<u32>>, EvalError> {
        if let Some(v) = self.formulas.get(f) {
            return Ok(v.clone());
        }
        let ctx = self.model.ctx;
        let size = self.model.space.size();
        let vals: Vec<u32> = match f {
            Formula::Var(v) => self
                .model
                .raw_values(v)
                .map_or_else(|| vec![0; size], <[u32]>::to_vec),
            Formula::Const(c) => {
                if c.context() != ctx {
                    return Err(EvalError::ForeignConstant {
                        value: *c,
                        expected: ctx,
                    });
                }
                vec![c.numerator(); size]
            }
            Formula::And(a, b) => zip_with(&self.values(a)?, &self.values(b)?, u32::min),
            Formula::Or(a, b) => zip_with(&self.values(a)?, &self.values(b)?, u32::max),
            Formula::Implies(a, b) => zip_with(&self.values(a)?, &self.values(b)?, |x, y| ctx.implies_raw(x, y)),
            Formula::Necessity(p, g) | Formula::Possibility(p, g) => {
                let body = self.values(g)?;
                let rel = self.relation(p)?;
                let inf = meets_over_subsets(ctx, self.model.space, &body);
                let necessity = matches!(f, Formula::Necessity(..));
                (0..size)
                    .map(|s| {
                        let row = rel.row(s);
                        if necessity {
                            row.iter()
                                .zip(&inf)
                                .map(|(&r, &m)| ctx.implies_raw(r, m))
                                .min()
                                .unwrap_or(ctx.top_num())
                        } else {
                            row.iter()
                                .zip(&inf)
                                .map(|(&r, &m)| ctx.conj_raw(r, m))
                                .max()
                                .unwrap_or(0)
                        }
                    })
                    .collect()
            }
        };
        let vals = Rc::new(vals);
        self.formulas.insert(f.clone(), vals.clone());
        Ok(vals)
    }

    /// `R_π`, materialised bottom-up and memoised.
    pub fn relation(&mut self, p: &Program) -> Result<Rc<ReachRelation>, EvalError> {
        if let Some(r) = self.programs.get(p) {
            return Ok(r.clone());
        }
        let model = self.model;
        let same = "relations of one model share space and chain";
        let rel = match p {
            Program::Atomic(name) => match model.atomics.get(name) {
                Some(r) => r.clone(),
                None => {
                    log::warn!("atomic program {name:?} is not in the model; using the zero relation");
                    ReachRelation::zero(model.space, model.ctx)
                }
            },
            Program::Union(a, b) => self
                .relation(a)?
                .union_with(&*self.relation(b)?, self.options.union)
                .expect(same),
            Program::Seq(a, b) => self.relation(a)?.compose(&*self.relation(b)?).expect(same),
            Program::Inter(a, b) => self
                .relation(a)?
                .parallel_with(&*self.relation(b)?, self.options.parallel)
                .expect(same),
            Program::Star(a) => self.relation(a)?.star(),
            Program::Test(g) => {
                let vals = self.values(g)?;
                let mut r = ReachRelation::zero(model.space, model.ctx);
                for s in model.space.states() {
                    r.set(s, StateSet::singleton(s), ChainValue::from_ctx_raw(model.ctx, vals[s]))
                        .expect(same);
                }
                r
            }
        };
        let rel = Rc::new(rel);
        self.programs.insert(p.clone(), rel.clone());
        Ok(rel)
    }
}

fn zip_with(a: &[u32], b: &[u32], f: impl Fn(u32, u32) -> u32) -> Vec<u32> {
    a.iter().zip(b).map(|(&x, &y)| f(x, y)).collect()
}

/// `⋀_{t∈T} body(t)` for every `T`, with `1̄` for the empty set.
pub(crate) fn meets_over_subsets(ctx: ChainContext, space: StateSpace, body: &[u32]) -> Vec<u32> {
    let w = space.subset_count();
    let mut inf = vec![ctx.top_num(); w];
    for t in 1..w {
        let low = t.trailing_zeros() as usize;
        inf[t] = inf[t & (t - 1)].min(body[low]);
    }
    inf
}

/// `I_M(φ, s)` with a fresh cache.
pub fn eval_formula(model: &Model, f: &Formula, s: usize) -> Result<ChainValue, EvalError> {
    Evaluator::new(model).eval(f, s)
}

/// `I_M(π, s, T)` with a fresh cache.
pub fn eval_program(model: &Model, p: &Program, s: usize, t: StateSet) -> Result<ChainValue, EvalError> {
    Evaluator::new(model).eval_program(p, s, t)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Validity {
    pub valid: bool,
    /// Smallest state whose value is below `1̄`, with that value.
    pub witness: Option<(usize, ChainValue)>,
}

pub fn valid_in_model(model: &Model, f: &Formula) -> Result<Validity, EvalError> {
    let values = Evaluator::new(model).eval_all(f)?;
    let witness = values.into_iter().enumerate().find(|(_, v)| !v.is_one());
    Ok(Validity {
        valid: witness.is_none(),
        witness,
    })
}
