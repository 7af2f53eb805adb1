//! Two-sorted abstract syntax: formulas and programs, mutually recursive
//! through tests and modalities.

mod closure;
mod parse;
mod print;

use std::collections::{BTreeMap, BTreeSet};

use crate::chain::{BinOp, ChainContext, ChainValue};

pub use closure::{fl_closure, fl_closure_of_set, is_fl_closed, ClosureError, DEFAULT_CLOSURE_CAP};
pub use parse::{parse_formula, parse_program, SyntaxError};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Var(String),
    Const(ChainValue),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    /// `[π]φ`
    Necessity(Box<Program>, Box<Formula>),
    /// `<π>φ`
    Possibility(Box<Program>, Box<Formula>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Program {
    Atomic(String),
    Union(Box<Program>, Box<Program>),
    Inter(Box<Program>, Box<Program>),
    Seq(Box<Program>, Box<Program>),
    Star(Box<Program>),
    Test(Box<Formula>),
}

impl Formula {
    pub fn var(name: impl Into<String>) -> Formula {
        Formula::Var(name.into())
    }

    pub fn constant(value: ChainValue) -> Formula {
        Formula::Const(value)
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn binary(op: BinOp, a: Formula, b: Formula) -> Formula {
        match op {
            BinOp::And => Formula::and(a, b),
            BinOp::Or => Formula::or(a, b),
            BinOp::Implies => Formula::implies(a, b),
        }
    }

    /// `¬φ`, i.e. `φ → 0̄`.
    pub fn neg(a: Formula, ctx: ChainContext) -> Formula {
        Formula::implies(a, Formula::Const(ctx.zero()))
    }

    /// `φ ↔ ψ`, i.e. `(φ → ψ) ∧ (ψ → φ)`.
    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(Formula::implies(a.clone(), b.clone()), Formula::implies(b, a))
    }

    pub fn necessity(p: Program, f: Formula) -> Formula {
        Formula::Necessity(Box::new(p), Box::new(f))
    }

    pub fn possibility(p: Program, f: Formula) -> Formula {
        Formula::Possibility(Box::new(p), Box::new(f))
    }

    /// Split a binary connective into its operator and operands.
    pub fn as_binary(&self) -> Option<(BinOp, &Formula, &Formula)> {
        match self {
            Formula::And(a, b) => Some((BinOp::And, a, b)),
            Formula::Or(a, b) => Some((BinOp::Or, a, b)),
            Formula::Implies(a, b) => Some((BinOp::Implies, a, b)),
            _ => None,
        }
    }

    /// Number of formula and program nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::Var(_) | Formula::Const(_) => 1,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => 1 + a.size() + b.size(),
            Formula::Necessity(p, f) | Formula::Possibility(p, f) => 1 + p.size() + f.size(),
        }
    }

    pub fn is_modality_free(&self) -> bool {
        match self {
            Formula::Var(_) | Formula::Const(_) => true,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.is_modality_free() && b.is_modality_free()
            }
            Formula::Necessity(..) | Formula::Possibility(..) => false,
        }
    }

    /// Propositional variables, including those inside tests.
    pub fn propvars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_names(&mut out, &mut BTreeSet::new());
        out
    }

    pub fn atomic_programs(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_names(&mut BTreeSet::new(), &mut out);
        out
    }

    fn collect_names(&self, vars: &mut BTreeSet<String>, atoms: &mut BTreeSet<String>) {
        match self {
            Formula::Var(v) => {
                vars.insert(v.clone());
            }
            Formula::Const(_) => {}
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_names(vars, atoms);
                b.collect_names(vars, atoms);
            }
            Formula::Necessity(p, f) | Formula::Possibility(p, f) => {
                p.collect_names(vars, atoms);
                f.collect_names(vars, atoms);
            }
        }
    }

    /// Every constant, including those inside tests.
    pub fn constants(&self) -> Vec<ChainValue> {
        let mut out = Vec::new();
        self.visit_constants(&mut |c| out.push(c));
        out
    }

    fn visit_constants(&self, f: &mut dyn FnMut(ChainValue)) {
        match self {
            Formula::Var(_) => {}
            Formula::Const(c) => f(*c),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.visit_constants(f);
                b.visit_constants(f);
            }
            Formula::Necessity(p, g) | Formula::Possibility(p, g) => {
                p.visit_constants(f);
                g.visit_constants(f);
            }
        }
    }

    /// Renames propositional variables and atomic programs (including inside
    /// tests). Names absent from the maps are kept.
    pub fn rename(&self, vars: &BTreeMap<String, String>, programs: &BTreeMap<String, String>) -> Formula {
        let r = |f: &Formula| Box::new(f.rename(vars, programs));
        match self {
            Formula::Var(v) => Formula::Var(vars.get(v).unwrap_or(v).clone()),
            Formula::Const(c) => Formula::Const(*c),
            Formula::And(a, b) => Formula::And(r(a), r(b)),
            Formula::Or(a, b) => Formula::Or(r(a), r(b)),
            Formula::Implies(a, b) => Formula::Implies(r(a), r(b)),
            Formula::Necessity(p, f) => Formula::Necessity(Box::new(p.rename(vars, programs)), r(f)),
            Formula::Possibility(p, f) => Formula::Possibility(Box::new(p.rename(vars, programs)), r(f)),
        }
    }

    /// Immediate subformulas, not looking inside programs.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Var(_) | Formula::Const(_) => vec![],
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => vec![a, b],
            Formula::Necessity(_, f) | Formula::Possibility(_, f) => vec![f],
        }
    }
}

impl Program {
    pub fn atomic(name: impl Into<String>) -> Program {
        Program::Atomic(name.into())
    }

    pub fn union(a: Program, b: Program) -> Program {
        Program::Union(Box::new(a), Box::new(b))
    }

    pub fn inter(a: Program, b: Program) -> Program {
        Program::Inter(Box::new(a), Box::new(b))
    }

    pub fn seq(a: Program, b: Program) -> Program {
        Program::Seq(Box::new(a), Box::new(b))
    }

    pub fn star(a: Program) -> Program {
        Program::Star(Box::new(a))
    }

    pub fn test(f: Formula) -> Program {
        Program::Test(Box::new(f))
    }

    pub fn size(&self) -> usize {
        match self {
            Program::Atomic(_) => 1,
            Program::Union(a, b) | Program::Inter(a, b) | Program::Seq(a, b) => 1 + a.size() + b.size(),
            Program::Star(a) => 1 + a.size(),
            Program::Test(f) => 1 + f.size(),
        }
    }

    pub fn rename(&self, vars: &BTreeMap<String, String>, programs: &BTreeMap<String, String>) -> Program {
        let r = |p: &Program| Box::new(p.rename(vars, programs));
        match self {
            Program::Atomic(a) => Program::Atomic(programs.get(a).unwrap_or(a).clone()),
            Program::Union(a, b) => Program::Union(r(a), r(b)),
            Program::Inter(a, b) => Program::Inter(r(a), r(b)),
            Program::Seq(a, b) => Program::Seq(r(a), r(b)),
            Program::Star(a) => Program::Star(r(a)),
            Program::Test(f) => Program::Test(Box::new(f.rename(vars, programs))),
        }
    }

    fn collect_names(&self, vars: &mut BTreeSet<String>, atoms: &mut BTreeSet<String>) {
        match self {
            Program::Atomic(a) => {
                atoms.insert(a.clone());
            }
            Program::Union(a, b) | Program::Inter(a, b) | Program::Seq(a, b) => {
                a.collect_names(vars, atoms);
                b.collect_names(vars, atoms);
            }
            Program::Star(a) => a.collect_names(vars, atoms),
            Program::Test(f) => f.collect_names(vars, atoms),
        }
    }

    fn visit_constants(&self, f: &mut dyn FnMut(ChainValue)) {
        match self {
            Program::Atomic(_) => {}
            Program::Union(a, b) | Program::Inter(a, b) | Program::Seq(a, b) => {
                a.visit_constants(f);
                b.visit_constants(f);
            }
            Program::Star(a) => a.visit_constants(f),
            Program::Test(g) => g.visit_constants(f),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_and_size() {
        let ctx = ChainContext::new(3).unwrap();
        let f = parse_formula("[a + ?(q)]p & <b*>#1/2", ctx).unwrap();
        assert_eq!(f.propvars().into_iter().collect::<Vec<_>>(), ["p", "q"]);
        assert_eq!(f.atomic_programs().into_iter().collect::<Vec<_>>(), ["a", "b"]);
        assert_eq!(f.constants(), vec![ctx.value(1).unwrap()]);
        assert_eq!(f.size(), 11);
        assert!(!f.is_modality_free());
        assert!(parse_formula("p -> ~q", ctx).unwrap().is_modality_free());
    }
}
