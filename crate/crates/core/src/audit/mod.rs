//! Randomized soundness audit: search sampled finite models for states where
//! an axiom instance falls below `1̄`, or where a rule maps a valid premise
//! to an invalid conclusion.
//!
//! A search finding nothing is reported as "no counterexample found", never
//! as "valid". Every trial is reproducible from the seed, the schema key and
//! the trial index, so sequential and parallel runs agree byte for byte.

mod consequence;
pub mod sampler;
pub mod schema;
mod shrink;

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

pub use consequence::{check_consequence_prop, ConsequenceError, ConsequenceResult, DEFAULT_VALUATION_BUDGET};
pub use sampler::{sample_model, ConfigError, SamplerConfig, Vocabulary};
pub use schema::{
    all_schemata, dynamic_schemata, lookup, monotonicity_rules, propositional_schemata, AxiomSchema, Bindings,
    RuleSchema, SchemaError, System, Variant,
};

use crate::chain::{ChainContext, ChainValue};
use crate::exec::{self, Execution};
use crate::model_file::ModelFile;
use crate::relations::{ParallelReading, UnionReading};
use crate::semantics::{EvalOptions, Evaluator, Model};
use crate::syntax::Formula;
use sampler::{sample_bindings, sample_formula, sample_model_with, sample_program, stream_id, trial_rng, BindingMode};
use schema::{instantiate_template, FormulaMeta, ProgramMeta};
use shrink::{shrink, Candidate};

/// `instantiate_schema(S, bindings)` as a free function.
pub fn instantiate_schema(s: &AxiomSchema, b: &Bindings, ctx: ChainContext) -> Result<Formula, SchemaError> {
    s.instantiate(b, ctx)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    NoCounterexampleFound,
    Counterexample,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub trial: usize,
    pub model: ModelFile,
    pub bindings: BTreeMap<String, String>,
    pub instance: String,
    pub state: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemaReport {
    pub schema: String,
    pub statement: String,
    pub verdict: Verdict,
    pub models_tested: usize,
    pub instantiations_tested: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleWitness {
    pub trial: usize,
    pub model: ModelFile,
    pub bindings: BTreeMap<String, String>,
    pub premise: String,
    pub conclusion: String,
    pub state: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleReport {
    pub rule: String,
    pub statement: String,
    pub verdict: Verdict,
    pub trials: usize,
    /// Trials whose premise instance was valid in the sampled model.
    pub premise_valid_trials: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<RuleWitness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Readings {
    pub union: UnionReading,
    pub parallel: ParallelReading,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub config: SamplerConfig,
    pub readings: Readings,
    pub schemata: Vec<SchemaReport>,
    pub rules: Vec<RuleReport>,
}

impl AuditReport {
    pub fn counterexamples(&self) -> impl Iterator<Item = &str> {
        self.schemata
            .iter()
            .filter(|r| r.verdict == Verdict::Counterexample)
            .map(|r| r.schema.as_str())
            .chain(
                self.rules
                    .iter()
                    .filter(|r| r.verdict == Verdict::Counterexample)
                    .map(|r| r.rule.as_str()),
            )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelWitness {
    pub trial: usize,
    pub model: ModelFile,
    pub state: String,
    /// Value of the (left) formula at `state`.
    pub left: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub right: Option<String>,
}

/// Result of a randomized search over sampled models.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub verdict: Verdict,
    pub models_tested: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<ModelWitness>,
}

/// Runs searches for one sampler configuration.
#[derive(Debug, Clone)]
pub struct Auditor {
    cfg: SamplerConfig,
    ctx: ChainContext,
    options: EvalOptions,
    exec: Execution,
    shrink: bool,
}

impl Auditor {
    pub fn new(cfg: SamplerConfig) -> Result<Auditor, ConfigError> {
        let ctx = cfg.validate()?;
        Ok(Auditor {
            cfg,
            ctx,
            options: EvalOptions::default(),
            exec: Execution::default(),
            shrink: true,
        })
    }

    pub fn with_options(mut self, options: EvalOptions) -> Self {
        self.options = options;
        self
    }

    pub fn with_execution(mut self, exec: Execution) -> Self {
        self.exec = exec;
        self
    }

    /// Report counterexamples as sampled, without shrinking.
    pub fn without_shrinking(mut self) -> Self {
        self.shrink = false;
        self
    }

    pub fn config(&self) -> &SamplerConfig {
        &self.cfg
    }

    pub fn context(&self) -> ChainContext {
        self.ctx
    }

    fn first_failure(&self, model: &Model, f: &Formula) -> Option<(usize, ChainValue)> {
        let values = Evaluator::with_options(model, self.options).eval_all(f).ok()?;
        values.into_iter().enumerate().find(|(_, v)| !v.is_one())
    }

    fn is_valid(&self, model: &Model, f: &Formula) -> bool {
        self.first_failure(model, f).is_none()
    }

    fn sample(&self, stream: u64, trial: usize, vocab: &Vocabulary) -> (Model, rand_chacha::ChaCha8Rng) {
        let mut rng = trial_rng(self.cfg.seed, stream, trial as u64);
        let size = self.cfg.states_for_trial(trial);
        let model = sample_model_with(self.ctx, size, self.cfg.density, vocab, &mut rng).expect("validated");
        (model, rng)
    }

    fn witness_model(&self, model: &Model) -> ModelFile {
        ModelFile::from_model(model)
    }

    /// Searches `cfg.samples` trials for a state where an instance of
    /// `schema` is below `1̄`.
    pub fn find_counterexample(&self, schema: &AxiomSchema) -> SchemaReport {
        let key = schema.key();
        let stream = stream_id(&key);
        let vocab = self.cfg.vocabulary();
        let trial = |t: usize| {
            let (model, mut rng) = self.sample(stream, t, &vocab);
            let mode = BindingMode::for_trial(t, self.cfg.max_states);
            let bindings = sample_bindings(schema, self.ctx, &vocab, self.cfg.max_depth, mode, &mut rng);
            let inst = schema.instantiate(&bindings, self.ctx).ok()?;
            self.first_failure(&model, &inst)?;
            Some(Candidate { model, bindings })
        };
        let found = exec::find_first(self.exec, self.cfg.samples, trial);
        let tested = found.as_ref().map_or(self.cfg.samples, |(t, _)| t + 1);
        let witness = found.map(|(t, start)| {
            let fails = |c: &Candidate| {
                schema
                    .instantiate(&c.bindings, self.ctx)
                    .ok()
                    .and_then(|f| self.first_failure(&c.model, &f))
                    .is_some()
            };
            let c = if self.shrink { shrink(start, true, fails) } else { start };
            let inst = schema.instantiate(&c.bindings, self.ctx).expect("bound");
            let (state, value) = self.first_failure(&c.model, &inst).expect("still fails");
            Witness {
                trial: t,
                model: self.witness_model(&c.model),
                bindings: c.bindings.describe(),
                instance: inst.to_string(),
                state: c.model.state_names()[state].clone(),
                value: value.to_string(),
            }
        });
        SchemaReport {
            schema: key,
            statement: schema.statement.to_string(),
            verdict: if witness.is_some() {
                Verdict::Counterexample
            } else {
                Verdict::NoCounterexampleFound
            },
            models_tested: tested,
            instantiations_tested: tested,
            witness,
        }
    }

    fn rule_bindings<R: Rng + ?Sized>(&self, trial: usize, vocab: &Vocabulary, rng: &mut R) -> Bindings {
        let mode = BindingMode::for_trial(trial, self.cfg.max_states);
        let depth = self.cfg.max_depth.saturating_sub(1);
        let draw = |rng: &mut R| sample_formula(self.ctx, vocab, depth, mode, rng);
        let phi = draw(rng);
        let chi = draw(rng);
        // Bias towards premises that are valid in every model.
        let (phi, psi) = match rng.gen_range(0..4) {
            0 => (phi.clone(), Formula::or(phi, chi)),
            1 => (Formula::and(phi.clone(), chi), phi),
            2 => (phi.clone(), Formula::implies(chi, phi)),
            _ => (phi, chi),
        };
        let mut b = Bindings::default();
        b.formulas.insert(FormulaMeta::Phi, phi);
        b.formulas.insert(FormulaMeta::Psi, psi);
        b.programs.insert(
            ProgramMeta::Pi,
            sample_program(self.ctx, vocab, self.cfg.max_depth, mode, rng),
        );
        b
    }

    /// Searches for a model in which the premise of `rule` is valid and its
    /// conclusion is not.
    pub fn check_rule(&self, rule: &RuleSchema) -> RuleReport {
        let stream = stream_id(rule.id);
        let vocab = self.cfg.vocabulary();
        let outcome = |c: &Candidate| -> (bool, Option<(usize, ChainValue)>) {
            let premise = instantiate_template(&rule.premise, &c.bindings, self.ctx).expect("bound");
            if !self.is_valid(&c.model, &premise) {
                return (false, None);
            }
            let conclusion = instantiate_template(&rule.conclusion, &c.bindings, self.ctx).expect("bound");
            (true, self.first_failure(&c.model, &conclusion))
        };
        let results = exec::map_indexed(self.exec, self.cfg.samples, |t| {
            let (model, mut rng) = self.sample(stream, t, &vocab);
            let bindings = self.rule_bindings(t, &vocab, &mut rng);
            let c = Candidate { model, bindings };
            let (premise_valid, failure) = outcome(&c);
            (premise_valid, failure.map(|_| c))
        });
        let premise_valid_trials = results.iter().filter(|(v, _)| *v).count();
        let found = results
            .into_iter()
            .enumerate()
            .find_map(|(t, (_, c))| c.map(|c| (t, c)));
        let witness = found.map(|(t, start)| {
            let fails = |c: &Candidate| outcome(c).1.is_some();
            let c = if self.shrink { shrink(start, true, fails) } else { start };
            let (_, failure) = outcome(&c);
            let (state, value) = failure.expect("still fails");
            RuleWitness {
                trial: t,
                model: self.witness_model(&c.model),
                bindings: c.bindings.describe(),
                premise: instantiate_template(&rule.premise, &c.bindings, self.ctx)
                    .expect("bound")
                    .to_string(),
                conclusion: instantiate_template(&rule.conclusion, &c.bindings, self.ctx)
                    .expect("bound")
                    .to_string(),
                state: c.model.state_names()[state].clone(),
                value: value.to_string(),
            }
        });
        RuleReport {
            rule: rule.id.to_string(),
            statement: rule.statement.to_string(),
            verdict: if witness.is_some() {
                Verdict::Counterexample
            } else {
                Verdict::NoCounterexampleFound
            },
            trials: self.cfg.samples,
            premise_valid_trials,
            witness,
        }
    }

    /// Audits the given schemata and rules. Results are in input order.
    pub fn audit(&self, schemata: &[AxiomSchema], rules: &[RuleSchema]) -> AuditReport {
        let schema_reports = exec::map_indexed(self.exec, schemata.len(), |i| self.find_counterexample(&schemata[i]));
        let rule_reports = rules.iter().map(|r| self.check_rule(r)).collect();
        AuditReport {
            config: self.cfg.clone(),
            readings: Readings {
                union: self.options.union,
                parallel: self.options.parallel,
            },
            schemata: schema_reports,
            rules: rule_reports,
        }
    }

    fn search_vocabulary(&self, formulas: &[&Formula]) -> Vocabulary {
        let mut vocab = self.cfg.vocabulary();
        for f in formulas {
            vocab.extend_with(f);
        }
        vocab
    }

    /// Searches for a state where `f` is below `1̄`.
    pub fn validity_search(&self, f: &Formula) -> SearchReport {
        let vocab = self.search_vocabulary(&[f]);
        let stream = stream_id(&format!("valid {f}"));
        let fails = |m: &Model| self.first_failure(m, f);
        self.model_search(stream, &vocab, |c| fails(&c.model).is_some(), |t, c| {
            let (state, value) = fails(&c.model).expect("fails");
            ModelWitness {
                trial: t,
                model: self.witness_model(&c.model),
                state: c.model.state_names()[state].clone(),
                left: value.to_string(),
                right: None,
            }
        })
    }

    /// Searches for a state where `a` and `b` take different values.
    pub fn equiv_check(&self, a: &Formula, b: &Formula) -> SearchReport {
        self.find_difference(a, b, |x, y| x != y)
    }

    /// Searches for a state where the values of `a` and `b` satisfy `accept`.
    pub fn find_difference<P>(&self, a: &Formula, b: &Formula, accept: P) -> SearchReport
    where
        P: Fn(ChainValue, ChainValue) -> bool + Sync,
    {
        let vocab = self.search_vocabulary(&[a, b]);
        let stream = stream_id(&format!("equiv {a} {b}"));
        let differs = |m: &Model| -> Option<(usize, ChainValue, ChainValue)> {
            let mut ev = Evaluator::with_options(m, self.options);
            let left = ev.eval_all(a).ok()?;
            let right = ev.eval_all(b).ok()?;
            left.into_iter()
                .zip(right)
                .enumerate()
                .find(|(_, (x, y))| accept(*x, *y))
                .map(|(s, (x, y))| (s, x, y))
        };
        self.model_search(stream, &vocab, |c| differs(&c.model).is_some(), |t, c| {
            let (state, left, right) = differs(&c.model).expect("differs");
            ModelWitness {
                trial: t,
                model: self.witness_model(&c.model),
                state: c.model.state_names()[state].clone(),
                left: left.to_string(),
                right: Some(right.to_string()),
            }
        })
    }

    fn model_search<F, W>(&self, stream: u64, vocab: &Vocabulary, fails: F, witness: W) -> SearchReport
    where
        F: Fn(&Candidate) -> bool + Sync,
        W: Fn(usize, &Candidate) -> ModelWitness,
    {
        let found = exec::find_first(self.exec, self.cfg.samples, |t| {
            let (model, _) = self.sample(stream, t, vocab);
            let c = Candidate {
                model,
                bindings: Bindings::default(),
            };
            fails(&c).then_some(c)
        });
        let tested = found.as_ref().map_or(self.cfg.samples, |(t, _)| t + 1);
        let witness = found.map(|(t, start)| {
            let c = if self.shrink { shrink(start, false, &fails) } else { start };
            witness(t, &c)
        });
        SearchReport {
            verdict: if witness.is_some() {
                Verdict::Counterexample
            } else {
                Verdict::NoCounterexampleFound
            },
            models_tested: tested,
            witness,
        }
    }
}

/// Audits every schema and both monotonicity rules.
pub fn audit_all(cfg: SamplerConfig, options: EvalOptions, exec: Execution) -> Result<AuditReport, ConfigError> {
    let auditor = Auditor::new(cfg)?.with_options(options).with_execution(exec);
    Ok(auditor.audit(&all_schemata(), &monotonicity_rules()))
}

/// One-schema convenience wrapper.
pub fn find_counterexample(schema: &AxiomSchema, cfg: SamplerConfig) -> Result<SchemaReport, ConfigError> {
    Ok(Auditor::new(cfg)?.find_counterexample(schema))
}

/// Randomized equivalence check of two formulas over sampled models.
pub fn equiv_check(a: &Formula, b: &Formula, cfg: SamplerConfig) -> Result<SearchReport, ConfigError> {
    Ok(Auditor::new(cfg)?.equiv_check(a, b))
}
