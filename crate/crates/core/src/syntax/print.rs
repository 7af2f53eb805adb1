//! Concrete syntax printer. Output reparses to the identical tree: `φ → 0̄`
//! is printed as `~φ`, `(φ → ψ) ∧ (ψ → φ)` as `φ <-> ψ`, and any binary
//! operand of another operator is parenthesised unless it continues a
//! left-associated chain of the same operator.

use std::fmt::{self, Display, Formatter, Write};

use super::{Formula, Program};

#[derive(Clone, Copy, PartialEq, Eq)]
enum FKind {
    Leaf,
    Unary,
    And,
    Or,
    Implies,
    Iff,
}

enum View<'a> {
    Leaf,
    Neg(&'a Formula),
    Necessity(&'a Program, &'a Formula),
    Possibility(&'a Program, &'a Formula),
    Binary(FKind, &'a Formula, &'a Formula),
}

fn view(f: &Formula) -> View<'_> {
    match f {
        Formula::Var(_) | Formula::Const(_) => View::Leaf,
        Formula::Implies(a, b) if matches!(**b, Formula::Const(c) if c.is_zero()) => View::Neg(a),
        Formula::Implies(a, b) => View::Binary(FKind::Implies, a, b),
        Formula::Or(a, b) => View::Binary(FKind::Or, a, b),
        Formula::And(l, r) => match (&**l, &**r) {
            (Formula::Implies(a, b), Formula::Implies(b2, a2)) if a == a2 && b == b2 => {
                View::Binary(FKind::Iff, a, b)
            }
            _ => View::Binary(FKind::And, l, r),
        },
        Formula::Necessity(p, g) => View::Necessity(p, g),
        Formula::Possibility(p, g) => View::Possibility(p, g),
    }
}

fn kind(f: &Formula) -> FKind {
    match view(f) {
        View::Leaf => FKind::Leaf,
        View::Neg(_) | View::Necessity(..) | View::Possibility(..) => FKind::Unary,
        View::Binary(k, ..) => k,
    }
}

fn is_binary(k: FKind) -> bool {
    !matches!(k, FKind::Leaf | FKind::Unary)
}

fn write_operand(out: &mut Formatter<'_>, child: &Formula, parent: FKind, left: bool) -> fmt::Result {
    let k = kind(child);
    let chain = k == parent && left && matches!(k, FKind::And | FKind::Or);
    if is_binary(k) && !chain {
        write!(out, "({child})")
    } else {
        write!(out, "{child}")
    }
}

fn write_unary_body(out: &mut Formatter<'_>, child: &Formula) -> fmt::Result {
    if is_binary(kind(child)) {
        write!(out, "({child})")
    } else {
        write!(out, "{child}")
    }
}

impl Display for Formula {
    fn fmt(&self, out: &mut Formatter<'_>) -> fmt::Result {
        match view(self) {
            View::Leaf => match self {
                Formula::Var(v) => out.write_str(v),
                Formula::Const(c) => write!(out, "#{c}"),
                _ => unreachable!(),
            },
            View::Neg(a) => {
                out.write_char('~')?;
                write_unary_body(out, a)
            }
            View::Necessity(p, g) => {
                write!(out, "[{p}]")?;
                write_unary_body(out, g)
            }
            View::Possibility(p, g) => {
                write!(out, "<{p}>")?;
                write_unary_body(out, g)
            }
            View::Binary(k, a, b) => {
                let op = match k {
                    FKind::And => " & ",
                    FKind::Or => " | ",
                    FKind::Implies => " -> ",
                    FKind::Iff => " <-> ",
                    _ => unreachable!(),
                };
                write_operand(out, a, k, true)?;
                out.write_str(op)?;
                write_operand(out, b, k, false)
            }
        }
    }
}

fn pkind(p: &Program) -> Option<&'static str> {
    match p {
        Program::Union(..) => Some(" + "),
        Program::Inter(..) => Some(" ^ "),
        Program::Seq(..) => Some("; "),
        _ => None,
    }
}

fn write_program_operand(out: &mut Formatter<'_>, child: &Program, parent: &'static str, left: bool) -> fmt::Result {
    match pkind(child) {
        Some(k) if !(left && k == parent) => write!(out, "({child})"),
        _ => write!(out, "{child}"),
    }
}

impl Display for Program {
    fn fmt(&self, out: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Program::Atomic(a) => out.write_str(a),
            Program::Test(f) => write!(out, "?({f})"),
            Program::Star(a) => {
                if pkind(a).is_some() {
                    write!(out, "({a})*")
                } else {
                    write!(out, "{a}*")
                }
            }
            Program::Union(a, b) | Program::Inter(a, b) | Program::Seq(a, b) => {
                let op = pkind(self).unwrap();
                write_program_operand(out, a, op, true)?;
                out.write_str(op)?;
                write_program_operand(out, b, op, false)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use crate::chain::ChainContext;
    use crate::syntax::{parse_formula, parse_program};

    fn round(text: &str) -> String {
        let ctx = ChainContext::new(3).unwrap();
        let f = parse_formula(text, ctx).unwrap();
        let printed = f.to_string();
        assert_eq!(parse_formula(&printed, ctx).unwrap(), f, "{text} printed as {printed}");
        printed
    }

    #[test]
    fn printed_forms() {
        assert_eq!(round("p -> (q -> p)"), "p -> (q -> p)");
        assert_eq!(round("p->q->p"), "p -> (q -> p)");
        assert_eq!(round("[a;b]p <-> [a][b]p"), "[a; b]p <-> [a][b]p");
        assert_eq!(round("#1 <-> (#1/2 -> #1/2)"), "#1 <-> (#1/2 -> #1/2)");
        assert_eq!(round("~~p"), "~~p");
        assert_eq!(round("~(p -> q)"), "~(p -> q)");
        assert_eq!(round("p & q & r"), "p & q & r");
        assert_eq!(round("p & (q & r)"), "p & (q & r)");
        assert_eq!(round("(p | q) & r"), "(p | q) & r");
        assert_eq!(round("[(a + b)*]p"), "[(a + b)*]p");
        assert_eq!(round("<?(p -> q)>#0"), "<?(p -> q)>#0");
        assert_eq!(round("(p <-> q) <-> r"), "(p <-> q) <-> r");
        assert_eq!(round("p -> #0"), "~p");
    }

    #[test]
    fn program_printing() {
        let ctx = ChainContext::new(3).unwrap();
        for text in ["a + b + c", "a + (b + c)", "a; b ^ c", "(a + b); c", "a**", "?(p)*", "(a; b)*"] {
            let p = parse_program(text, ctx).unwrap();
            assert_eq!(parse_program(&p.to_string(), ctx).unwrap(), p, "{text}");
        }
    }
}
