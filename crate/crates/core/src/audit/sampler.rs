//! Reproducible random models, formulas, programs and schema bindings.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::schema::{AxiomSchema, Bindings};
use crate::chain::{BinOp, ChainContext, ChainError, ChainValue};
use crate::relations::{ReachRelation, RelationError, StateSpace};
use crate::semantics::Model;
use crate::syntax::{Formula, Program};

/// State-count cap for sampled models.
pub const STATE_CAP: usize = 4;
/// Hard cap, reachable only with `force_states`.
pub const FORCED_STATE_CAP: usize = 6;

const PROGRAM_NAMES: [&str; 6] = ["a", "b", "c", "d", "e", "f"];
const VAR_NAMES: [&str; 6] = ["p", "q", "r", "s", "t", "u"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub n: u32,
    pub max_states: usize,
    /// Probability that a relation entry is nonzero.
    pub density: f64,
    pub atomic_programs: usize,
    pub propvars: usize,
    pub samples: usize,
    pub seed: u64,
    pub max_depth: usize,
    #[serde(default)]
    pub force_states: bool,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            n: 3,
            max_states: 3,
            density: 0.3,
            atomic_programs: 2,
            propvars: 2,
            samples: 1000,
            seed: 0,
            max_depth: 3,
            force_states: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Relation(#[from] RelationError),
    #[error("at most {cap} states (asked for {asked}); {hint}")]
    TooManyStates { asked: usize, cap: usize, hint: &'static str },
    #[error("max_states must be at least 1")]
    NoStates,
    #[error("density {0} is not in [0, 1]")]
    Density(f64),
    #[error("{what} must be between 1 and {max}, got {got}")]
    Vocabulary { what: &'static str, got: usize, max: usize },
}

impl SamplerConfig {
    pub fn context(&self) -> Result<ChainContext, ConfigError> {
        Ok(ChainContext::new(self.n)?)
    }

    pub fn validate(&self) -> Result<ChainContext, ConfigError> {
        let ctx = self.context()?;
        if self.max_states == 0 {
            return Err(ConfigError::NoStates);
        }
        let cap = if self.force_states { FORCED_STATE_CAP } else { STATE_CAP };
        if self.max_states > cap {
            let hint = if self.force_states {
                "this is a hard limit"
            } else {
                "force_states raises the cap to 6"
            };
            return Err(ConfigError::TooManyStates {
                asked: self.max_states,
                cap,
                hint,
            });
        }
        if !(0.0..=1.0).contains(&self.density) {
            return Err(ConfigError::Density(self.density));
        }
        for (what, got, max) in [
            ("atomic_programs", self.atomic_programs, PROGRAM_NAMES.len()),
            ("propvars", self.propvars, VAR_NAMES.len()),
        ] {
            if got == 0 || got > max {
                return Err(ConfigError::Vocabulary { what, got, max });
            }
        }
        Ok(ctx)
    }

    pub fn vocabulary(&self) -> Vocabulary {
        Vocabulary {
            programs: PROGRAM_NAMES[..self.atomic_programs].iter().map(|s| s.to_string()).collect(),
            vars: VAR_NAMES[..self.propvars].iter().map(|s| s.to_string()).collect(),
        }
    }

    /// Model size used by `trial`: cycles `1, 2, ..., max_states`.
    pub fn states_for_trial(&self, trial: usize) -> usize {
        1 + trial % self.max_states.max(1)
    }
}

/// Names a sampled model interprets.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Vocabulary {
    pub programs: Vec<String>,
    pub vars: Vec<String>,
}

impl Vocabulary {
    /// Adds the names occurring in `f`.
    pub fn extend_with(&mut self, f: &Formula) {
        for v in f.propvars() {
            if !self.vars.contains(&v) {
                self.vars.push(v);
            }
        }
        for a in f.atomic_programs() {
            if !self.programs.contains(&a) {
                self.programs.push(a);
            }
        }
    }
}

/// A generator stream that depends only on `(seed, stream, index)`.
pub fn trial_rng(seed: u64, stream: u64, index: u64) -> ChaCha8Rng {
    let mut x = seed ^ stream.rotate_left(17);
    x = splitmix(x ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    ChaCha8Rng::seed_from_u64(splitmix(x))
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// FNV-1a, used to give each schema its own stream.
pub fn stream_id(name: &str) -> u64 {
    name.bytes()
        .fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

/// A model of `cfg.max_states` states reproducible from `cfg.seed`.
pub fn sample_model(cfg: &SamplerConfig) -> Result<Model, ConfigError> {
    let ctx = cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    sample_model_with(ctx, cfg.max_states, cfg.density, &cfg.vocabulary(), &mut rng)
}

pub fn sample_model_with<R: Rng + ?Sized>(
    ctx: ChainContext,
    states: usize,
    density: f64,
    vocab: &Vocabulary,
    rng: &mut R,
) -> Result<Model, ConfigError> {
    let space = StateSpace::new(states)?;
    let mut model = Model::new(ctx, space);
    for name in &vocab.programs {
        let rel = ReachRelation::random(space, ctx, density, rng);
        model.set_relation(name.clone(), rel).expect("same space");
    }
    for var in &vocab.vars {
        model.declare_var(var.clone());
        for s in space.states() {
            let num = rng.gen_range(0..=ctx.top_num());
            model.set_raw_value(var, s, num).expect("in range");
        }
    }
    Ok(model)
}

/// A uniformly random chain element.
pub fn random_constant<R: Rng + ?Sized>(ctx: ChainContext, rng: &mut R) -> ChainValue {
    ctx.value(rng.gen_range(0..=ctx.top_num())).expect("in range")
}

/// The two middle elements of the chain (equal when n is odd).
pub fn middle_constants(ctx: ChainContext) -> [ChainValue; 2] {
    let top = ctx.top_num();
    [ctx.value(top / 2).unwrap(), ctx.value(top.div_ceil(2)).unwrap()]
}

/// Random formula of depth at most `depth` over `vocab`.
pub fn random_formula<R: Rng + ?Sized>(ctx: ChainContext, vocab: &Vocabulary, depth: usize, rng: &mut R) -> Formula {
    if depth == 0 || rng.gen_bool(0.3) {
        return if vocab.vars.is_empty() || rng.gen_bool(0.25) {
            Formula::Const(random_constant(ctx, rng))
        } else {
            Formula::var(vocab.vars.choose(rng).unwrap().clone())
        };
    }
    let sub = |rng: &mut R| random_formula(ctx, vocab, depth - 1, rng);
    match rng.gen_range(0..6) {
        0 => Formula::and(sub(rng), sub(rng)),
        1 => Formula::or(sub(rng), sub(rng)),
        2 => Formula::implies(sub(rng), sub(rng)),
        3 => Formula::neg(sub(rng), ctx),
        4 => Formula::necessity(random_program(ctx, vocab, depth - 1, rng), sub(rng)),
        _ => Formula::possibility(random_program(ctx, vocab, depth - 1, rng), sub(rng)),
    }
}

/// Random program of depth at most `depth` over `vocab`.
pub fn random_program<R: Rng + ?Sized>(ctx: ChainContext, vocab: &Vocabulary, depth: usize, rng: &mut R) -> Program {
    let atom = |rng: &mut R| Program::atomic(vocab.programs.choose(rng).expect("some program").clone());
    if depth == 0 || rng.gen_bool(0.4) {
        return atom(rng);
    }
    let sub = |rng: &mut R| random_program(ctx, vocab, depth - 1, rng);
    match rng.gen_range(0..5) {
        0 => Program::union(sub(rng), sub(rng)),
        1 => Program::inter(sub(rng), sub(rng)),
        2 => Program::seq(sub(rng), sub(rng)),
        3 => Program::star(sub(rng)),
        _ => Program::test(random_formula(ctx, vocab, depth - 1, rng)),
    }
}

/// Small hand-picked formulas that tend to expose failures.
pub fn adversarial_formulas(ctx: ChainContext, vocab: &Vocabulary) -> Vec<Formula> {
    let p = Formula::var(vocab.vars[0].clone());
    let q = Formula::var(vocab.vars.get(1).unwrap_or(&vocab.vars[0]).clone());
    let a = Program::atomic(vocab.programs[0].clone());
    let [lo, hi] = middle_constants(ctx);
    vec![
        p.clone(),
        q.clone(),
        Formula::Const(lo),
        Formula::Const(hi),
        Formula::Const(ctx.one()),
        Formula::Const(ctx.zero()),
        Formula::neg(p.clone(), ctx),
        Formula::and(p.clone(), q.clone()),
        Formula::implies(p.clone(), q),
        Formula::necessity(a.clone(), p.clone()),
        Formula::possibility(a.clone(), p.clone()),
        Formula::possibility(Program::star(a), p),
    ]
}

/// Small hand-picked programs that tend to expose failures.
pub fn adversarial_programs(ctx: ChainContext, vocab: &Vocabulary) -> Vec<Program> {
    let a = Program::atomic(vocab.programs[0].clone());
    let b = Program::atomic(vocab.programs.get(1).unwrap_or(&vocab.programs[0]).clone());
    let p = Formula::var(vocab.vars[0].clone());
    let [lo, _] = middle_constants(ctx);
    vec![
        a.clone(),
        b.clone(),
        Program::star(a.clone()),
        Program::test(p),
        Program::test(Formula::Const(lo)),
        Program::seq(a.clone(), b.clone()),
        Program::union(a.clone(), b.clone()),
        Program::inter(a, b),
    ]
}

/// How a trial picks bindings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BindingMode {
    /// Variables for formulas, atomic programs for programs.
    Atoms,
    /// Draws from the adversarial pools.
    Pool,
    /// Random terms up to the configured depth.
    Random,
}

impl BindingMode {
    /// The mode changes every `max_states` trials so that each mode meets
    /// every model size.
    pub fn for_trial(trial: usize, max_states: usize) -> BindingMode {
        match (trial / max_states.max(1)) % 4 {
            0 => BindingMode::Atoms,
            1 => BindingMode::Pool,
            _ => BindingMode::Random,
        }
    }
}

pub fn sample_bindings<R: Rng + ?Sized>(
    schema: &AxiomSchema,
    ctx: ChainContext,
    vocab: &Vocabulary,
    max_depth: usize,
    mode: BindingMode,
    rng: &mut R,
) -> Bindings {
    let mut b = Bindings::default();
    for m in schema.formula_metas() {
        b.formulas.insert(m, sample_formula(ctx, vocab, max_depth, mode, rng));
    }
    for m in schema.program_metas() {
        b.programs.insert(m, sample_program(ctx, vocab, max_depth, mode, rng));
    }
    for m in schema.const_metas() {
        b.constants.insert(m, sample_constant(ctx, mode, rng));
    }
    if schema.uses_op() {
        b.op = Some(*[BinOp::And, BinOp::Or, BinOp::Implies].choose(rng).unwrap());
    }
    b
}

pub fn sample_formula<R: Rng + ?Sized>(
    ctx: ChainContext,
    vocab: &Vocabulary,
    max_depth: usize,
    mode: BindingMode,
    rng: &mut R,
) -> Formula {
    match mode {
        BindingMode::Atoms => Formula::var(vocab.vars.choose(rng).unwrap().clone()),
        BindingMode::Pool => adversarial_formulas(ctx, vocab).choose(rng).unwrap().clone(),
        BindingMode::Random => random_formula(ctx, vocab, max_depth, rng),
    }
}

pub fn sample_program<R: Rng + ?Sized>(
    ctx: ChainContext,
    vocab: &Vocabulary,
    max_depth: usize,
    mode: BindingMode,
    rng: &mut R,
) -> Program {
    match mode {
        BindingMode::Atoms => Program::atomic(vocab.programs.choose(rng).unwrap().clone()),
        BindingMode::Pool => adversarial_programs(ctx, vocab).choose(rng).unwrap().clone(),
        BindingMode::Random => random_program(ctx, vocab, max_depth.min(2), rng),
    }
}

fn sample_constant<R: Rng + ?Sized>(ctx: ChainContext, mode: BindingMode, rng: &mut R) -> ChainValue {
    match mode {
        BindingMode::Random => random_constant(ctx, rng),
        _ => {
            let [lo, hi] = middle_constants(ctx);
            let pool = [lo, hi, ctx.zero(), ctx.one(), random_constant(ctx, rng)];
            *pool.choose(rng).unwrap()
        }
    }
}
