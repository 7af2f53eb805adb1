//! Hilbert-style derivations in PŁn and DŁn.
//!
//! Text format, one item per line (`%` starts a comment):
//!
//! ```text
//! n: 3
//! premise: p
//! premise: p -> q
//! 1 premise p
//! 2 premise p -> q
//! 3 mp 1 2 q
//! 4 axiom A1 q -> (p -> q)
//! ```
//!
//! `mp i j φ` requires step `j` to be exactly `step_i -> φ`. With
//! [`CheckOptions::allow_mon`], DŁn derivations may also use
//! `mon i φ`, inferring `[π]α -> [π]β` or `<π>α -> <π>β` from `α -> β`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::audit::schema::{all_schemata, lookup, match_template, monotonicity_rules, AxiomSchema, System};
use crate::chain::{ChainContext, ChainError};
use crate::syntax::{parse_formula, Formula, SyntaxError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    Axiom { schema: String, formula: Formula },
    Premise { formula: Formula },
    Mp { minor: usize, major: usize, formula: Formula },
    Mon { from: usize, formula: Formula },
}

impl Step {
    pub fn formula(&self) -> &Formula {
        match self {
            Step::Axiom { formula, .. }
            | Step::Premise { formula }
            | Step::Mp { formula, .. }
            | Step::Mon { formula, .. } => formula,
        }
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Axiom { schema, formula } => write!(f, "axiom {schema} {formula}"),
            Step::Premise { formula } => write!(f, "premise {formula}"),
            Step::Mp { minor, major, formula } => write!(f, "mp {minor} {major} {formula}"),
            Step::Mon { from, formula } => write!(f, "mon {from} {formula}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub ctx: ChainContext,
    pub premises: Vec<Formula>,
    /// Step `k` of the text is `steps[k - 1]`.
    pub steps: Vec<Step>,
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n: {}", self.ctx.order())?;
        for p in &self.premises {
            writeln!(f, "premise: {p}")?;
        }
        for (i, s) in self.steps.iter().enumerate() {
            writeln!(f, "{} {}", i + 1, s)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DerivationParseError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: {source}")]
    Formula {
        line: usize,
        #[source]
        source: SyntaxError,
    },
    #[error("line {line}: {source}")]
    Chain {
        line: usize,
        #[source]
        source: ChainError,
    },
    #[error("missing `n:` header")]
    MissingHeader,
}

impl Derivation {
    pub fn parse(text: &str) -> Result<Derivation, DerivationParseError> {
        let mut ctx = None;
        let mut premises = Vec::new();
        let mut steps = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.split('%').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let bad = |message: String| DerivationParseError::Malformed { line, message };
            if let Some(rest) = body.strip_prefix("n:") {
                if ctx.is_some() {
                    return Err(bad("second `n:` header".into()));
                }
                let n: u32 = rest.trim().parse().map_err(|_| bad(format!("bad chain order {:?}", rest.trim())))?;
                ctx = Some(ChainContext::new(n).map_err(|source| DerivationParseError::Chain { line, source })?);
                continue;
            }
            let c = ctx.ok_or(DerivationParseError::MissingHeader)?;
            let formula = |text: &str| {
                parse_formula(text, c).map_err(|source| DerivationParseError::Formula { line, source })
            };
            if let Some(rest) = body.strip_prefix("premise:") {
                premises.push(formula(rest)?);
                continue;
            }
            let mut words = body.splitn(2, char::is_whitespace);
            let k: usize = words
                .next()
                .and_then(|w| w.parse().ok())
                .ok_or_else(|| bad(format!("expected a step number, got {body:?}")))?;
            if k != steps.len() + 1 {
                return Err(bad(format!("step {k} out of sequence; expected {}", steps.len() + 1)));
            }
            let rest = words.next().unwrap_or("").trim_start();
            let (kind, rest) = split_word(rest);
            let index = |w: &str| w.parse::<usize>().map_err(|_| bad(format!("bad step reference {w:?}")));
            let step = match kind {
                "axiom" => {
                    let (id, f) = split_word(rest);
                    if id.is_empty() {
                        return Err(bad("axiom step without a schema id".into()));
                    }
                    Step::Axiom {
                        schema: id.to_string(),
                        formula: formula(f)?,
                    }
                }
                "premise" => Step::Premise { formula: formula(rest)? },
                "mp" => {
                    let (i, rest) = split_word(rest);
                    let (j, f) = split_word(rest);
                    Step::Mp {
                        minor: index(i)?,
                        major: index(j)?,
                        formula: formula(f)?,
                    }
                }
                "mon" => {
                    let (i, f) = split_word(rest);
                    Step::Mon {
                        from: index(i)?,
                        formula: formula(f)?,
                    }
                }
                other => return Err(bad(format!("unknown step kind {other:?}"))),
            };
            steps.push(step);
        }
        Ok(Derivation {
            ctx: ctx.ok_or(DerivationParseError::MissingHeader)?,
            premises,
            steps,
        })
    }
}

fn split_word(s: &str) -> (&str, &str) {
    let s = s.trim_start();
    match s.find(char::is_whitespace) {
        Some(i) => (&s[..i], s[i..].trim_start()),
        None => (s, ""),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProofSystem {
    /// Propositional: A1–A5 and MP.
    Pl,
    /// Dynamic: A1–A5, D1–D17 and MP.
    Dl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CheckOptions {
    /// Try every schema of the system when the named one does not match;
    /// the id `*` names no schema in particular.
    pub search_schemata: bool,
    /// Accept `mon` steps (DŁn only).
    pub allow_mon: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReasonCode {
    UnknownSchema,
    WrongSystem,
    NotAnInstance,
    NotAPremise,
    BadReference,
    MpMismatch,
    MonDisabled,
    MonMismatch,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rejection {
    /// 1-based step number.
    pub step: usize,
    pub code: ReasonCode,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofVerdict {
    pub accepted: bool,
    pub steps: usize,
    /// Schema used by each axiom step (`None` for other steps).
    pub schemata: Vec<Option<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rejection: Option<Rejection>,
}

/// Whether `f` is an instance of `schema`, with the witnessing bindings.
pub fn match_axiom_instance(
    schema: &AxiomSchema,
    f: &Formula,
    ctx: ChainContext,
) -> Option<crate::audit::schema::Bindings> {
    schema.matches(f, ctx)
}

fn in_system(schema: &AxiomSchema, system: ProofSystem) -> bool {
    system == ProofSystem::Dl || schema.system == System::Propositional
}

pub fn check_derivation(d: &Derivation, system: ProofSystem, options: CheckOptions) -> ProofVerdict {
    let mut schemata = Vec::with_capacity(d.steps.len());
    for (idx, step) in d.steps.iter().enumerate() {
        let k = idx + 1;
        match check_step(d, k, step, system, options) {
            Ok(used) => schemata.push(used),
            Err((code, message)) => {
                return ProofVerdict {
                    accepted: false,
                    steps: d.steps.len(),
                    schemata,
                    rejection: Some(Rejection { step: k, code, message }),
                }
            }
        }
    }
    ProofVerdict {
        accepted: true,
        steps: d.steps.len(),
        schemata,
        rejection: None,
    }
}

type StepResult = Result<Option<String>, (ReasonCode, String)>;

fn check_step(d: &Derivation, k: usize, step: &Step, system: ProofSystem, options: CheckOptions) -> StepResult {
    let earlier = |i: usize| -> Result<&Formula, (ReasonCode, String)> {
        if i == 0 || i >= k {
            Err((
                ReasonCode::BadReference,
                format!("step {k} refers to step {i}, which is not an earlier step"),
            ))
        } else {
            Ok(d.steps[i - 1].formula())
        }
    };
    match step {
        Step::Axiom { schema, formula } => check_axiom(d.ctx, schema, formula, system, options).map(Some),
        Step::Premise { formula } => {
            if d.premises.contains(formula) {
                Ok(None)
            } else {
                Err((ReasonCode::NotAPremise, format!("{formula} is not among the premises")))
            }
        }
        Step::Mp { minor, major, formula } => {
            let a = earlier(*minor)?;
            let b = earlier(*major)?;
            match b {
                Formula::Implies(x, y) if x.as_ref() == a && y.as_ref() == formula => Ok(None),
                _ => Err((
                    ReasonCode::MpMismatch,
                    format!("step {major} is not an implication with antecedent {a} and consequent {formula}"),
                )),
            }
        }
        Step::Mon { from, formula } => {
            if !(options.allow_mon && system == ProofSystem::Dl) {
                return Err((
                    ReasonCode::MonDisabled,
                    "the monotonicity rule is not enabled for this check".to_string(),
                ));
            }
            let premise = earlier(*from)?;
            for rule in monotonicity_rules() {
                if let Some(b) = match_template(&rule.conclusion, formula, d.ctx) {
                    let expected = crate::audit::schema::instantiate_template(&rule.premise, &b, d.ctx);
                    if expected.as_ref() == Ok(premise) {
                        return Ok(Some(rule.id.to_string()));
                    }
                }
            }
            Err((
                ReasonCode::MonMismatch,
                format!("{formula} does not follow from step {from} by monotonicity"),
            ))
        }
    }
}

fn check_axiom(
    ctx: ChainContext,
    id: &str,
    formula: &Formula,
    system: ProofSystem,
    options: CheckOptions,
) -> Result<String, (ReasonCode, String)> {
    let named = if id == "*" { None } else { Some(lookup(id)) };
    if let Some(Ok(schema)) = &named {
        if !in_system(schema, system) {
            return Err((
                ReasonCode::WrongSystem,
                format!("{} is not a schema of the propositional system", schema.key()),
            ));
        }
        if schema.matches(formula, ctx).is_some() {
            return Ok(schema.key());
        }
    }
    if options.search_schemata {
        if let Some(s) = all_schemata()
            .into_iter()
            .filter(|s| in_system(s, system))
            .find(|s| s.matches(formula, ctx).is_some())
        {
            return Ok(s.key());
        }
    }
    match named {
        Some(Ok(schema)) => Err((
            ReasonCode::NotAnInstance,
            format!("{formula} is not an instance of {}", schema.key()),
        )),
        Some(Err(_)) => Err((ReasonCode::UnknownSchema, format!("no schema named {id:?}"))),
        None if options.search_schemata => Err((
            ReasonCode::NotAnInstance,
            format!("{formula} is not an instance of any schema"),
        )),
        None => Err((
            ReasonCode::UnknownSchema,
            "`*` needs schema search to be enabled".to_string(),
        )),
    }
}
