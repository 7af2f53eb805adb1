use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use gcpdl::audit::{all_schemata, lookup, monotonicity_rules, Auditor, SamplerConfig, SearchReport, Variant, Verdict};
use gcpdl::filtration::{check_lemma4, check_preservation, quotient_with};
use gcpdl::proofcheck::{check_derivation, CheckOptions, Derivation, ProofSystem};
use gcpdl::syntax::{fl_closure_of_set, DEFAULT_CLOSURE_CAP};
use gcpdl::{
    parse_formula, ChainContext, EvalOptions, Evaluator, Execution, Formula, Model, ModelFile, ParallelReading,
    UnionReading,
};
use log::warn;

const STATE_CAP: usize = 4;
const FORCED_STATE_CAP: usize = 6;

#[derive(Parser)]
#[command(name = "gcpdl", version, about = "Graded concurrent PDL over finite Lukasiewicz chains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Value of a formula at every state of a model.
    Eval {
        #[arg(long)]
        model: PathBuf,
        formula: String,
        #[command(flatten)]
        readings: ReadingArgs,
        #[arg(long)]
        force_states: bool,
    },
    /// Search sampled models for a state where a formula is below 1.
    Valid {
        formula: String,
        #[command(flatten)]
        sampler: SamplerArgs,
        #[command(flatten)]
        readings: ReadingArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Soundness audit of the axiom schemata and monotonicity rules.
    Audit {
        #[command(flatten)]
        sampler: SamplerArgs,
        #[command(flatten)]
        readings: ReadingArgs,
        /// Which reading(s) of the intersection-box schema to audit.
        #[arg(long, value_enum, default_value_t = D7Choice::Both)]
        d7: D7Choice,
        /// Audit only these schemata or rules (repeatable), e.g. D4, D7/corrected, MonBox.
        #[arg(long = "schema")]
        schemata: Vec<String>,
        #[arg(long)]
        no_rules: bool,
        #[arg(long)]
        no_shrink: bool,
        /// Run trials on one thread.
        #[arg(long)]
        sequential: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fischer-Ladner closure of a formula.
    Closure {
        formula: String,
        #[arg(long, default_value_t = 3)]
        n: u32,
    },
    /// Check a derivation file.
    CheckProof {
        path: PathBuf,
        /// Use the dynamic system (propositional plus dynamic schemata).
        #[arg(long)]
        dl: bool,
        /// Try every schema when the named one does not match.
        #[arg(long)]
        search_schemata: bool,
        /// Accept monotonicity steps (dynamic system only).
        #[arg(long)]
        allow_mon: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Quotient a model by agreement on the closure of the given formulas.
    Filtrate {
        #[arg(long)]
        model: PathBuf,
        #[arg(required = true)]
        formulas: Vec<String>,
        #[arg(long)]
        force_states: bool,
        /// Quotient model JSON, with its classes table.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Graphviz rendering of the quotient.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Search sampled models for a state where two formulas differ.
    Equiv {
        left: String,
        right: String,
        #[command(flatten)]
        sampler: SamplerArgs,
        #[command(flatten)]
        readings: ReadingArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Clone)]
struct SamplerArgs {
    #[arg(long, default_value_t = 3)]
    n: u32,
    /// Largest sampled model; sizes cycle from 1 up to this.
    #[arg(long, default_value_t = 3)]
    states: usize,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.3)]
    density: f64,
    #[arg(long, default_value_t = 2)]
    programs: usize,
    #[arg(long, default_value_t = 2)]
    vars: usize,
    #[arg(long, default_value_t = 3)]
    depth: usize,
    /// Allow up to 6 states.
    #[arg(long)]
    force_states: bool,
}

impl SamplerArgs {
    fn config(&self) -> SamplerConfig {
        if self.force_states && self.states > STATE_CAP {
            warn!(
                "{} states: relation tables have {} entries per program and composition cost grows doubly exponentially",
                self.states,
                self.states << self.states
            );
        }
        SamplerConfig {
            n: self.n,
            max_states: self.states,
            density: self.density,
            atomic_programs: self.programs,
            propvars: self.vars,
            samples: self.samples,
            seed: self.seed,
            max_depth: self.depth,
            force_states: self.force_states,
        }
    }
}

#[derive(Args, Clone, Copy)]
struct ReadingArgs {
    /// Union as the literal sum of the two relations, not the pointwise join.
    #[arg(long)]
    literal_union: bool,
    /// Parallel execution only over disjoint result sets.
    #[arg(long)]
    disjoint_parallel: bool,
}

impl ReadingArgs {
    fn options(self) -> EvalOptions {
        EvalOptions {
            union: if self.literal_union {
                UnionReading::Literal
            } else {
                UnionReading::Pointwise
            },
            parallel: if self.disjoint_parallel {
                ParallelReading::Disjoint
            } else {
                ParallelReading::Overlapping
            },
        }
    }
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum D7Choice {
    Both,
    AsPrinted,
    Corrected,
}

enum Outcome {
    Holds,
    Refuted,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(Outcome::Holds) => ExitCode::SUCCESS,
        Ok(Outcome::Refuted) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {}", describe(&e));
            ExitCode::from(2)
        }
    }
}

/// The error chain, skipping causes already spelled out by their parent.
fn describe(e: &anyhow::Error) -> String {
    let mut out = String::new();
    for cause in e.chain() {
        let text = cause.to_string();
        if out.ends_with(&text) {
            continue;
        }
        if !out.is_empty() {
            out.push_str(": ");
        }
        out.push_str(&text);
    }
    out
}

fn run(command: Command) -> Result<Outcome> {
    match command {
        Command::Eval {
            model,
            formula,
            readings,
            force_states,
        } => eval(&model, &formula, readings, force_states),
        Command::Valid {
            formula,
            sampler,
            readings,
            out,
        } => {
            let auditor = auditor(&sampler, readings)?;
            let f = parse(&formula, auditor.context())?;
            let report = auditor.validity_search(&f);
            print_search(&report, "no state below 1 found");
            write_json(out.as_deref(), &report)?;
            Ok(verdict(report.verdict))
        }
        Command::Audit {
            sampler,
            readings,
            d7,
            schemata,
            no_rules,
            no_shrink,
            sequential,
            out,
        } => audit(&sampler, readings, d7, &schemata, no_rules, no_shrink, sequential, out.as_deref()),
        Command::Closure { formula, n } => {
            let ctx = ChainContext::new(n)?;
            let f = parse(&formula, ctx)?;
            let cl = fl_closure_of_set([&f], ctx, DEFAULT_CLOSURE_CAP)?;
            for g in &cl {
                println!("{g}");
            }
            eprintln!("{} formulas", cl.len());
            Ok(Outcome::Holds)
        }
        Command::CheckProof {
            path,
            dl,
            search_schemata,
            allow_mon,
            out,
        } => {
            let text = fs::read_to_string(&path).with_context(|| format!("cannot read {}", path.display()))?;
            let d = Derivation::parse(&text)?;
            let system = if dl { ProofSystem::Dl } else { ProofSystem::Pl };
            let verdict = check_derivation(
                &d,
                system,
                CheckOptions {
                    search_schemata,
                    allow_mon,
                },
            );
            match &verdict.rejection {
                None => println!("accepted: {} steps", verdict.steps),
                Some(r) => println!("rejected at step {}: {}", r.step, r.message),
            }
            write_json(out.as_deref(), &verdict)?;
            Ok(if verdict.accepted { Outcome::Holds } else { Outcome::Refuted })
        }
        Command::Filtrate {
            model,
            formulas,
            force_states,
            out,
            dot,
        } => filtrate(&model, &formulas, force_states, out.as_deref(), dot.as_deref()),
        Command::Equiv {
            left,
            right,
            sampler,
            readings,
            out,
        } => {
            let auditor = auditor(&sampler, readings)?;
            let a = parse(&left, auditor.context())?;
            let b = parse(&right, auditor.context())?;
            let report = auditor.equiv_check(&a, &b);
            print_search(&report, "no difference found");
            write_json(out.as_deref(), &report)?;
            Ok(verdict(report.verdict))
        }
    }
}

fn parse(text: &str, ctx: ChainContext) -> Result<Formula> {
    parse_formula(text, ctx).with_context(|| format!("cannot parse {text:?}"))
}

fn verdict(v: Verdict) -> Outcome {
    match v {
        Verdict::NoCounterexampleFound => Outcome::Holds,
        Verdict::Counterexample => Outcome::Refuted,
    }
}

fn auditor(sampler: &SamplerArgs, readings: ReadingArgs) -> Result<Auditor> {
    Ok(Auditor::new(sampler.config())?.with_options(readings.options()))
}

fn load_model(path: &Path, force_states: bool) -> Result<Model> {
    let model = ModelFile::load(path)?.to_model()?;
    let size = model.space().size();
    let cap = if force_states { FORCED_STATE_CAP } else { STATE_CAP };
    if size > cap {
        bail!("{} has {size} states; the cap is {cap} (--force-states raises it to {FORCED_STATE_CAP})", path.display());
    }
    if size > STATE_CAP {
        warn!("{size} states: composition and star enumerate target-set decompositions and get slow");
    }
    Ok(model)
}

fn write_json<T: serde::Serialize>(out: Option<&Path>, value: &T) -> Result<()> {
    if let Some(path) = out {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(())
}

fn print_search(report: &SearchReport, clean: &str) {
    match &report.witness {
        None => println!("{clean} in {} sampled models", report.models_tested),
        Some(w) => {
            let right = w.right.as_ref().map(|r| format!(" vs {r}")).unwrap_or_default();
            println!(
                "counterexample at trial {}: state {} value {}{right}",
                w.trial, w.state, w.left
            );
            println!("{}", w.model.to_json());
        }
    }
}

fn eval(path: &Path, formula: &str, readings: ReadingArgs, force_states: bool) -> Result<Outcome> {
    let model = load_model(path, force_states)?;
    let f = parse(formula, model.context())?;
    let values = Evaluator::with_options(&model, readings.options()).eval_all(&f)?;
    for (name, v) in model.state_names().iter().zip(&values) {
        println!("{name}: {v}");
    }
    Ok(if values.iter().all(|v| v.is_one()) {
        Outcome::Holds
    } else {
        Outcome::Refuted
    })
}

#[allow(clippy::too_many_arguments)]
fn audit(
    sampler: &SamplerArgs,
    readings: ReadingArgs,
    d7: D7Choice,
    only: &[String],
    no_rules: bool,
    no_shrink: bool,
    sequential: bool,
    out: Option<&Path>,
) -> Result<Outcome> {
    let mut auditor = auditor(sampler, readings)?;
    if no_shrink {
        auditor = auditor.without_shrinking();
    }
    if sequential {
        auditor = auditor.with_execution(Execution::Sequential);
    }
    let keep_d7 = |v: Option<Variant>| match (d7, v) {
        (_, None) | (D7Choice::Both, _) => true,
        (D7Choice::AsPrinted, Some(v)) => v == Variant::AsPrinted,
        (D7Choice::Corrected, Some(v)) => v == Variant::Corrected,
    };
    let (schemata, rules) = if only.is_empty() {
        let schemata = all_schemata().into_iter().filter(|s| keep_d7(s.variant)).collect();
        let rules = if no_rules { Vec::new() } else { monotonicity_rules() };
        (schemata, rules)
    } else {
        let mut schemata = Vec::new();
        let mut rules = Vec::new();
        for key in only {
            if let Some(rule) = monotonicity_rules().into_iter().find(|r| r.id == key.as_str()) {
                rules.push(rule);
            } else {
                schemata.push(lookup(key)?);
            }
        }
        (schemata, rules)
    };

    let report = auditor.audit(&schemata, &rules);
    for r in &report.schemata {
        match &r.witness {
            None => println!("{:<14} no counterexample found ({} models)", r.schema, r.models_tested),
            Some(w) => println!(
                "{:<14} COUNTEREXAMPLE trial {}: {} = {} at {}",
                r.schema, w.trial, w.instance, w.value, w.state
            ),
        }
    }
    for r in &report.rules {
        match &r.witness {
            None => println!(
                "{:<14} no counterexample found ({} trials, {} with a valid premise)",
                r.rule, r.trials, r.premise_valid_trials
            ),
            Some(w) => println!(
                "{:<14} COUNTEREXAMPLE trial {}: {} valid, {} = {} at {}",
                r.rule, w.trial, w.premise, w.conclusion, w.value, w.state
            ),
        }
    }
    let failing: Vec<&str> = report.counterexamples().collect();
    println!("{} counterexample(s)", failing.len());
    if let Some(path) = out {
        fs::write(path, report.to_json() + "\n").with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(if failing.is_empty() { Outcome::Holds } else { Outcome::Refuted })
}

fn filtrate(
    path: &Path,
    formulas: &[String],
    force_states: bool,
    out: Option<&Path>,
    dot: Option<&Path>,
) -> Result<Outcome> {
    let model = load_model(path, force_states)?;
    let ctx = model.context();
    let seeds = formulas.iter().map(|t| parse(t, ctx)).collect::<Result<Vec<_>>>()?;
    let gamma: BTreeSet<Formula> = fl_closure_of_set(seeds.iter(), ctx, DEFAULT_CLOSURE_CAP)?;
    let res = quotient_with(&model, &gamma, EvalOptions::default())?;
    let names = model.state_names();
    println!("|Gamma| = {}, {} states -> {} classes", gamma.len(), names.len(), res.classes.len());
    for (q, members) in res.classes.iter().enumerate() {
        let members: Vec<&str> = members.iter().map(|&s| names[s].as_str()).collect();
        println!("  {} = {{{}}}", res.quotient.state_names()[q], members.join(", "));
    }
    for w in &res.warnings {
        warn!("{w}");
    }
    let corpus: Vec<Formula> = gamma.iter().cloned().collect();
    let mut violations = 0;
    for (program, _) in model.atomics() {
        let report = check_lemma4(&model, &gamma, program, &corpus)?;
        println!(
            "relation bound for {program}: {} points, {} violations",
            report.points_checked,
            report.violations.len()
        );
        violations += report.violations.len();
    }
    let pres = check_preservation(&model, &gamma)?;
    println!("preservation (report only): agreement {:.3}", pres.agreement_rate());
    for row in &pres.rows {
        println!("  {}/{}  {}", row.agreeing_states, row.states, row.formula);
    }
    write_json(out, &res.to_model_file(&model))?;
    if let Some(path) = dot {
        fs::write(path, res.to_dot(&model)).with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(if violations == 0 { Outcome::Holds } else { Outcome::Refuted })
}
