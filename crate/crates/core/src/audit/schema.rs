//! Axiom schemata as templates over formula, program and constant
//! metavariables, with instantiation and syntactic matching.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chain::{BinOp, ChainContext, ChainValue};
use crate::syntax::{Formula, Program};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FormulaMeta {
    Phi,
    Psi,
    Chi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ProgramMeta {
    Pi,
    Pi0,
    Pi1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ConstMeta {
    C,
    D,
}

impl fmt::Display for FormulaMeta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FormulaMeta::Phi => "phi",
            FormulaMeta::Psi => "psi",
            FormulaMeta::Chi => "chi",
        })
    }
}

impl fmt::Display for ProgramMeta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProgramMeta::Pi => "pi",
            ProgramMeta::Pi0 => "pi0",
            ProgramMeta::Pi1 => "pi1",
        })
    }
}

impl fmt::Display for ConstMeta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConstMeta::C => "c",
            ConstMeta::D => "d",
        })
    }
}

/// Formula template.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FPat {
    Meta(FormulaMeta),
    Top,
    Bottom,
    Const(ConstMeta),
    /// The constant denoting `c ∗ d` for the bound connective `∗`.
    Computed,
    Bin(BinOp, Box<FPat>, Box<FPat>),
    /// `c̄ ⋆ d̄` with the bound connective.
    BoundOp(Box<FPat>, Box<FPat>),
    Nec(Box<PPat>, Box<FPat>),
    Pos(Box<PPat>, Box<FPat>),
}

/// Program template.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PPat {
    Meta(ProgramMeta),
    Union(Box<PPat>, Box<PPat>),
    Inter(Box<PPat>, Box<PPat>),
    Seq(Box<PPat>, Box<PPat>),
    Star(Box<PPat>),
    Test(Box<FPat>),
}

/// Metavariable assignment.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Bindings {
    pub formulas: BTreeMap<FormulaMeta, Formula>,
    pub programs: BTreeMap<ProgramMeta, Program>,
    pub constants: BTreeMap<ConstMeta, ChainValue>,
    pub op: Option<BinOp>,
}

impl Bindings {
    /// Printable `name -> text` view, used in reports.
    pub fn describe(&self) -> BTreeMap<String, String> {
        let mut out = BTreeMap::new();
        for (k, v) in &self.formulas {
            out.insert(k.to_string(), v.to_string());
        }
        for (k, v) in &self.programs {
            out.insert(k.to_string(), v.to_string());
        }
        for (k, v) in &self.constants {
            out.insert(k.to_string(), v.to_string());
        }
        if let Some(op) = self.op {
            out.insert("op".to_string(), op.symbol().to_string());
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemaError {
    #[error("no binding for metavariable {0}")]
    MissingBinding(String),
    #[error("constant {0} is not from {1}")]
    ForeignConstant(ChainValue, ChainContext),
    #[error("no schema named {0:?}")]
    UnknownSchema(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    AsPrinted,
    Corrected,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::AsPrinted => "as-printed",
            Variant::Corrected => "corrected",
        })
    }
}

/// Which calculus a schema belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum System {
    /// Propositional Łukasiewicz logic PŁn.
    Propositional,
    /// The dynamic extension DŁn (which contains every PŁn schema).
    Dynamic,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomSchema {
    pub id: &'static str,
    pub variant: Option<Variant>,
    pub system: System,
    pub statement: &'static str,
    pub template: FPat,
}

impl AxiomSchema {
    /// `id` or `id/variant`.
    pub fn key(&self) -> String {
        match self.variant {
            Some(v) => format!("{}/{}", self.id, v),
            None => self.id.to_string(),
        }
    }

    pub fn instantiate(&self, b: &Bindings, ctx: ChainContext) -> Result<Formula, SchemaError> {
        instantiate(&self.template, b, ctx)
    }

    /// Whether `f` is an instance of this schema; returns the bindings that
    /// witness it.
    pub fn matches(&self, f: &Formula, ctx: ChainContext) -> Option<Bindings> {
        match_pattern(&self.template, f, ctx)
    }

    pub fn formula_metas(&self) -> Vec<FormulaMeta> {
        let mut m = Metas::default();
        m.formula(&self.template);
        m.formulas
    }

    pub fn program_metas(&self) -> Vec<ProgramMeta> {
        let mut m = Metas::default();
        m.formula(&self.template);
        m.programs
    }

    pub fn const_metas(&self) -> Vec<ConstMeta> {
        let mut m = Metas::default();
        m.formula(&self.template);
        m.constants
    }

    pub fn uses_op(&self) -> bool {
        let mut m = Metas::default();
        m.formula(&self.template);
        m.op
    }
}

/// A rule "from `premise` infer `conclusion`".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleSchema {
    pub id: &'static str,
    pub statement: &'static str,
    pub premise: FPat,
    pub conclusion: FPat,
}

impl RuleSchema {
    pub fn program_metas(&self) -> Vec<ProgramMeta> {
        let mut m = Metas::default();
        m.formula(&self.premise);
        m.formula(&self.conclusion);
        m.programs
    }
}

#[derive(Default)]
struct Metas {
    formulas: Vec<FormulaMeta>,
    programs: Vec<ProgramMeta>,
    constants: Vec<ConstMeta>,
    op: bool,
}

impl Metas {
    fn formula(&mut self, p: &FPat) {
        match p {
            FPat::Meta(m) => push_unique(&mut self.formulas, *m),
            FPat::Const(c) => push_unique(&mut self.constants, *c),
            FPat::Computed => {
                self.op = true;
                push_unique(&mut self.constants, ConstMeta::C);
                push_unique(&mut self.constants, ConstMeta::D);
            }
            FPat::Top | FPat::Bottom => {}
            FPat::Bin(_, a, b) => {
                self.formula(a);
                self.formula(b);
            }
            FPat::BoundOp(a, b) => {
                self.op = true;
                self.formula(a);
                self.formula(b);
            }
            FPat::Nec(q, a) | FPat::Pos(q, a) => {
                self.program(q);
                self.formula(a);
            }
        }
    }

    fn program(&mut self, p: &PPat) {
        match p {
            PPat::Meta(m) => push_unique(&mut self.programs, *m),
            PPat::Union(a, b) | PPat::Inter(a, b) | PPat::Seq(a, b) => {
                self.program(a);
                self.program(b);
            }
            PPat::Star(a) => self.program(a),
            PPat::Test(f) => self.formula(f),
        }
    }
}

fn push_unique<T: PartialEq + Ord>(v: &mut Vec<T>, x: T) {
    if !v.contains(&x) {
        v.push(x);
        v.sort();
    }
}

fn instantiate(p: &FPat, b: &Bindings, ctx: ChainContext) -> Result<Formula, SchemaError> {
    let missing = |name: String| SchemaError::MissingBinding(name);
    let constant = |m: ConstMeta| -> Result<ChainValue, SchemaError> {
        let c = *b.constants.get(&m).ok_or_else(|| missing(m.to_string()))?;
        if c.context() != ctx {
            return Err(SchemaError::ForeignConstant(c, ctx));
        }
        Ok(c)
    };
    Ok(match p {
        FPat::Meta(m) => b.formulas.get(m).cloned().ok_or_else(|| missing(m.to_string()))?,
        FPat::Top => Formula::Const(ctx.one()),
        FPat::Bottom => Formula::Const(ctx.zero()),
        FPat::Const(m) => Formula::Const(constant(*m)?),
        FPat::Computed => {
            let op = b.op.ok_or_else(|| missing("op".into()))?;
            let (c, d) = (constant(ConstMeta::C)?, constant(ConstMeta::D)?);
            Formula::Const(op.apply(c, d).expect("same chain"))
        }
        FPat::Bin(op, x, y) => Formula::binary(*op, instantiate(x, b, ctx)?, instantiate(y, b, ctx)?),
        FPat::BoundOp(x, y) => {
            let op = b.op.ok_or_else(|| missing("op".into()))?;
            Formula::binary(op, instantiate(x, b, ctx)?, instantiate(y, b, ctx)?)
        }
        FPat::Nec(q, x) => Formula::necessity(instantiate_program(q, b, ctx)?, instantiate(x, b, ctx)?),
        FPat::Pos(q, x) => Formula::possibility(instantiate_program(q, b, ctx)?, instantiate(x, b, ctx)?),
    })
}

fn instantiate_program(p: &PPat, b: &Bindings, ctx: ChainContext) -> Result<Program, SchemaError> {
    Ok(match p {
        PPat::Meta(m) => b
            .programs
            .get(m)
            .cloned()
            .ok_or_else(|| SchemaError::MissingBinding(m.to_string()))?,
        PPat::Union(x, y) => Program::union(instantiate_program(x, b, ctx)?, instantiate_program(y, b, ctx)?),
        PPat::Inter(x, y) => Program::inter(instantiate_program(x, b, ctx)?, instantiate_program(y, b, ctx)?),
        PPat::Seq(x, y) => Program::seq(instantiate_program(x, b, ctx)?, instantiate_program(y, b, ctx)?),
        PPat::Star(x) => Program::star(instantiate_program(x, b, ctx)?),
        PPat::Test(f) => Program::test(instantiate(f, b, ctx)?),
    })
}

/// Instantiates a schema or rule template.
pub fn instantiate_template(p: &FPat, b: &Bindings, ctx: ChainContext) -> Result<Formula, SchemaError> {
    instantiate(p, b, ctx)
}

struct Matcher {
    ctx: ChainContext,
    b: Bindings,
    computed: Vec<ChainValue>,
}

impl Matcher {
    fn bind<K: Ord + Copy, V: PartialEq + Clone>(map: &mut BTreeMap<K, V>, k: K, v: &V) -> bool {
        match map.get(&k) {
            Some(prev) => prev == v,
            None => {
                map.insert(k, v.clone());
                true
            }
        }
    }

    fn bind_op(&mut self, op: BinOp) -> bool {
        match self.b.op {
            Some(prev) => prev == op,
            None => {
                self.b.op = Some(op);
                true
            }
        }
    }

    fn formula(&mut self, p: &FPat, f: &Formula) -> bool {
        match (p, f) {
            (FPat::Meta(m), _) => Self::bind(&mut self.b.formulas, *m, f),
            (FPat::Top, Formula::Const(c)) => c.context() == self.ctx && c.is_one(),
            (FPat::Bottom, Formula::Const(c)) => c.context() == self.ctx && c.is_zero(),
            (FPat::Const(m), Formula::Const(c)) => c.context() == self.ctx && Self::bind(&mut self.b.constants, *m, c),
            (FPat::Computed, Formula::Const(c)) => {
                self.computed.push(*c);
                true
            }
            (FPat::Bin(op, x, y), _) => match f.as_binary() {
                Some((fop, a, b)) => fop == *op && self.formula(x, a) && self.formula(y, b),
                None => false,
            },
            (FPat::BoundOp(x, y), _) => match f.as_binary() {
                Some((fop, a, b)) => self.bind_op(fop) && self.formula(x, a) && self.formula(y, b),
                None => false,
            },
            (FPat::Nec(q, x), Formula::Necessity(prog, a)) | (FPat::Pos(q, x), Formula::Possibility(prog, a)) => {
                self.program(q, prog) && self.formula(x, a)
            }
            _ => false,
        }
    }

    fn program(&mut self, p: &PPat, prog: &Program) -> bool {
        match (p, prog) {
            (PPat::Meta(m), _) => Self::bind(&mut self.b.programs, *m, prog),
            (PPat::Union(x, y), Program::Union(a, b))
            | (PPat::Inter(x, y), Program::Inter(a, b))
            | (PPat::Seq(x, y), Program::Seq(a, b)) => self.program(x, a) && self.program(y, b),
            (PPat::Star(x), Program::Star(a)) => self.program(x, a),
            (PPat::Test(x), Program::Test(a)) => self.formula(x, a),
            _ => false,
        }
    }
}

fn match_pattern(p: &FPat, f: &Formula, ctx: ChainContext) -> Option<Bindings> {
    let mut m = Matcher {
        ctx,
        b: Bindings::default(),
        computed: Vec::new(),
    };
    if !m.formula(p, f) {
        return None;
    }
    if !m.computed.is_empty() {
        let op = m.b.op?;
        let c = *m.b.constants.get(&ConstMeta::C)?;
        let d = *m.b.constants.get(&ConstMeta::D)?;
        let expected = op.apply(c, d).ok()?;
        if m.computed.iter().any(|&v| v != expected) {
            return None;
        }
    }
    Some(m.b)
}

/// Matches a rule or schema template.
pub fn match_template(p: &FPat, f: &Formula, ctx: ChainContext) -> Option<Bindings> {
    match_pattern(p, f, ctx)
}

// Template builders.

fn meta(m: FormulaMeta) -> FPat {
    FPat::Meta(m)
}

fn imp(a: FPat, b: FPat) -> FPat {
    FPat::Bin(BinOp::Implies, Box::new(a), Box::new(b))
}

fn and(a: FPat, b: FPat) -> FPat {
    FPat::Bin(BinOp::And, Box::new(a), Box::new(b))
}

fn or(a: FPat, b: FPat) -> FPat {
    FPat::Bin(BinOp::Or, Box::new(a), Box::new(b))
}

fn iff(a: FPat, b: FPat) -> FPat {
    and(imp(a.clone(), b.clone()), imp(b, a))
}

fn neg(a: FPat) -> FPat {
    imp(a, FPat::Bottom)
}

fn nec(p: PPat, f: FPat) -> FPat {
    FPat::Nec(Box::new(p), Box::new(f))
}

fn pos(p: PPat, f: FPat) -> FPat {
    FPat::Pos(Box::new(p), Box::new(f))
}

fn pm(m: ProgramMeta) -> PPat {
    PPat::Meta(m)
}

fn seq(a: PPat, b: PPat) -> PPat {
    PPat::Seq(Box::new(a), Box::new(b))
}

fn union(a: PPat, b: PPat) -> PPat {
    PPat::Union(Box::new(a), Box::new(b))
}

fn inter(a: PPat, b: PPat) -> PPat {
    PPat::Inter(Box::new(a), Box::new(b))
}

fn star(a: PPat) -> PPat {
    PPat::Star(Box::new(a))
}

fn test(f: FPat) -> PPat {
    PPat::Test(Box::new(f))
}

/// A1–A5 of PŁn.
pub fn propositional_schemata() -> Vec<AxiomSchema> {
    use FormulaMeta::*;
    let (phi, psi, chi) = (meta(Phi), meta(Psi), meta(Chi));
    let s = |id, statement, template| AxiomSchema {
        id,
        variant: None,
        system: System::Propositional,
        statement,
        template,
    };
    vec![
        s("A1", "phi -> (psi -> phi)", imp(phi.clone(), imp(psi.clone(), phi.clone()))),
        s(
            "A2",
            "(phi -> psi) -> ((psi -> chi) -> (phi -> chi))",
            imp(
                imp(phi.clone(), psi.clone()),
                imp(imp(psi.clone(), chi.clone()), imp(phi.clone(), chi)),
            ),
        ),
        s(
            "A3",
            "((phi -> psi) -> psi) -> ((psi -> phi) -> phi)",
            imp(
                imp(imp(phi.clone(), psi.clone()), psi.clone()),
                imp(imp(psi.clone(), phi.clone()), phi.clone()),
            ),
        ),
        s(
            "A4",
            "(~psi -> ~phi) -> (phi -> psi)",
            imp(imp(neg(psi.clone()), neg(phi.clone())), imp(phi, psi)),
        ),
        s(
            "A5",
            "#(c op d) <-> (#c op #d)",
            iff(
                FPat::Computed,
                FPat::BoundOp(Box::new(FPat::Const(ConstMeta::C)), Box::new(FPat::Const(ConstMeta::D))),
            ),
        ),
    ]
}

/// D1–D17 of DŁn, in listing order. D7 appears twice: as printed (both
/// conjuncts end in `[pi1]phi`) and corrected (second conjunct `[pi0]phi`).
pub fn dynamic_schemata() -> Vec<AxiomSchema> {
    use FormulaMeta::*;
    use ProgramMeta::*;
    let (phi, psi) = (meta(Phi), meta(Psi));
    let (pi, pi0, pi1) = (pm(Pi), pm(Pi0), pm(Pi1));
    let c = FPat::Const(ConstMeta::C);
    let s = |id, variant, statement, template| AxiomSchema {
        id,
        variant,
        system: System::Dynamic,
        statement,
        template,
    };
    let inter_box = |second: PPat| {
        iff(
            nec(inter(pi0.clone(), pi1.clone()), phi.clone()),
            and(
                imp(pos(pi0.clone(), FPat::Top), nec(pi1.clone(), phi.clone())),
                imp(pos(pi1.clone(), FPat::Top), nec(second, phi.clone())),
            ),
        )
    };
    vec![
        s("D1", None, "[pi]#1", nec(pi.clone(), FPat::Top)),
        s(
            "D2",
            None,
            "[pi]phi & [pi]psi -> [pi](phi & psi)",
            imp(
                and(nec(pi.clone(), phi.clone()), nec(pi.clone(), psi.clone())),
                nec(pi.clone(), and(phi.clone(), psi.clone())),
            ),
        ),
        s(
            "D3",
            None,
            "[pi](#c -> phi) <-> (#c -> [pi]phi)",
            iff(
                nec(pi.clone(), imp(c.clone(), phi.clone())),
                imp(c.clone(), nec(pi.clone(), phi.clone())),
            ),
        ),
        s(
            "D4",
            None,
            "[pi](phi -> #c) <-> (<pi>phi -> #c)",
            iff(
                nec(pi.clone(), imp(phi.clone(), c.clone())),
                imp(pos(pi.clone(), phi.clone()), c.clone()),
            ),
        ),
        s(
            "D5",
            None,
            "[pi0; pi1]phi <-> [pi0][pi1]phi",
            iff(
                nec(seq(pi0.clone(), pi1.clone()), phi.clone()),
                nec(pi0.clone(), nec(pi1.clone(), phi.clone())),
            ),
        ),
        s(
            "D6",
            None,
            "[pi0 + pi1]phi <-> [pi0]phi & [pi1]phi",
            iff(
                nec(union(pi0.clone(), pi1.clone()), phi.clone()),
                and(nec(pi0.clone(), phi.clone()), nec(pi1.clone(), phi.clone())),
            ),
        ),
        s(
            "D7",
            Some(Variant::AsPrinted),
            "[pi0 ^ pi1]phi <-> (<pi0>#1 -> [pi1]phi) & (<pi1>#1 -> [pi1]phi)",
            inter_box(pi1.clone()),
        ),
        s(
            "D7",
            Some(Variant::Corrected),
            "[pi0 ^ pi1]phi <-> (<pi0>#1 -> [pi1]phi) & (<pi1>#1 -> [pi0]phi)",
            inter_box(pi0.clone()),
        ),
        s(
            "D8",
            None,
            "[pi*]phi -> phi & [pi][pi*]phi",
            imp(
                nec(star(pi.clone()), phi.clone()),
                and(phi.clone(), nec(pi.clone(), nec(star(pi.clone()), phi.clone()))),
            ),
        ),
        s(
            "D9",
            None,
            "[pi*](phi -> [pi]phi) -> (phi -> [pi*]phi)",
            imp(
                nec(star(pi.clone()), imp(phi.clone(), nec(pi.clone(), phi.clone()))),
                imp(phi.clone(), nec(star(pi.clone()), phi.clone())),
            ),
        ),
        s(
            "D10",
            None,
            "[?(phi)]psi <-> (phi -> psi)",
            iff(nec(test(phi.clone()), psi.clone()), imp(phi.clone(), psi.clone())),
        ),
        s(
            "D11",
            None,
            "<pi0; pi1>phi <-> <pi0><pi1>phi",
            iff(
                pos(seq(pi0.clone(), pi1.clone()), phi.clone()),
                pos(pi0.clone(), pos(pi1.clone(), phi.clone())),
            ),
        ),
        s(
            "D12",
            None,
            "<pi0 + pi1>phi <-> <pi0>phi | <pi1>phi",
            iff(
                pos(union(pi0.clone(), pi1.clone()), phi.clone()),
                or(pos(pi0.clone(), phi.clone()), pos(pi1.clone(), phi.clone())),
            ),
        ),
        s(
            "D13",
            None,
            "<pi0 ^ pi1>phi <-> <pi0>phi & <pi1>phi",
            iff(
                pos(inter(pi0.clone(), pi1.clone()), phi.clone()),
                and(pos(pi0.clone(), phi.clone()), pos(pi1.clone(), phi.clone())),
            ),
        ),
        s(
            "D14",
            None,
            "phi | <pi><pi*>phi -> <pi*>phi",
            imp(
                or(phi.clone(), pos(pi.clone(), pos(star(pi.clone()), phi.clone()))),
                pos(star(pi.clone()), phi.clone()),
            ),
        ),
        s(
            "D15",
            None,
            "[pi*](<pi>phi -> phi) -> (<pi*>phi -> phi)",
            imp(
                nec(star(pi.clone()), imp(pos(pi.clone(), phi.clone()), phi.clone())),
                imp(pos(star(pi.clone()), phi.clone()), phi.clone()),
            ),
        ),
        s(
            "D16",
            None,
            "<?(phi)>psi <-> phi & psi",
            iff(pos(test(phi.clone()), psi.clone()), and(phi.clone(), psi.clone())),
        ),
        s(
            "D17",
            None,
            "[pi]#0 | <pi>#1",
            or(nec(pi.clone(), FPat::Bottom), pos(pi, FPat::Top)),
        ),
    ]
}

/// Every schema of DŁn, PŁn first.
pub fn all_schemata() -> Vec<AxiomSchema> {
    let mut v = propositional_schemata();
    v.extend(dynamic_schemata());
    v
}

/// Candidate monotonicity rules.
pub fn monotonicity_rules() -> Vec<RuleSchema> {
    use FormulaMeta::*;
    use ProgramMeta::*;
    let premise = imp(meta(Phi), meta(Psi));
    vec![
        RuleSchema {
            id: "MonBox",
            statement: "from phi -> psi infer [pi]phi -> [pi]psi",
            premise: premise.clone(),
            conclusion: imp(nec(pm(Pi), meta(Phi)), nec(pm(Pi), meta(Psi))),
        },
        RuleSchema {
            id: "MonDia",
            statement: "from phi -> psi infer <pi>phi -> <pi>psi",
            premise,
            conclusion: imp(pos(pm(Pi), meta(Phi)), pos(pm(Pi), meta(Psi))),
        },
    ]
}

/// Looks up `id` or `id/variant`. A bare `D7` means the as-printed variant.
pub fn lookup(key: &str) -> Result<AxiomSchema, SchemaError> {
    let (id, variant) = match key.split_once('/') {
        Some((id, v)) => {
            let v = match v {
                "as-printed" => Variant::AsPrinted,
                "corrected" => Variant::Corrected,
                _ => return Err(SchemaError::UnknownSchema(key.to_string())),
            };
            (id, Some(v))
        }
        None => (key, None),
    };
    let candidates: Vec<AxiomSchema> = all_schemata().into_iter().filter(|s| s.id == id).collect();
    let found = match variant {
        Some(v) => candidates.into_iter().find(|s| s.variant == Some(v)),
        None => candidates
            .into_iter()
            .find(|s| s.variant.is_none() || s.variant == Some(Variant::AsPrinted)),
    };
    found.ok_or_else(|| SchemaError::UnknownSchema(key.to_string()))
}
