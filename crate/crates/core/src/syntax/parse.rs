use thiserror::Error;

use super::{Formula, Program};
use crate::chain::{ChainContext, ChainError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("syntax error at byte {pos}: {message}")]
    Parse { pos: usize, message: String },
    #[error("bad constant at byte {pos}: {source}")]
    Constant {
        pos: usize,
        #[source]
        source: ChainError,
    },
}

impl SyntaxError {
    pub fn position(&self) -> usize {
        match self {
            SyntaxError::Parse { pos, .. } | SyntaxError::Constant { pos, .. } => *pos,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(u64),
    Tilde,
    LBrack,
    RBrack,
    Lt,
    Gt,
    LParen,
    RParen,
    Hash,
    Slash,
    Amp,
    Bar,
    Arrow,
    DArrow,
    Plus,
    Caret,
    Semi,
    Star,
    Question,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier {s:?}"),
            Tok::Int(i) => format!("integer {i}"),
            Tok::Eof => "end of input".to_string(),
            other => {
                let s = match other {
                    Tok::Tilde => "~",
                    Tok::LBrack => "[",
                    Tok::RBrack => "]",
                    Tok::Lt => "<",
                    Tok::Gt => ">",
                    Tok::LParen => "(",
                    Tok::RParen => ")",
                    Tok::Hash => "#",
                    Tok::Slash => "/",
                    Tok::Amp => "&",
                    Tok::Bar => "|",
                    Tok::Arrow => "->",
                    Tok::DArrow => "<->",
                    Tok::Plus => "+",
                    Tok::Caret => "^",
                    Tok::Semi => ";",
                    Tok::Star => "*",
                    Tok::Question => "?",
                    _ => unreachable!(),
                };
                format!("{s:?}")
            }
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, SyntaxError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            b'~' => Tok::Tilde,
            b'[' => Tok::LBrack,
            b']' => Tok::RBrack,
            b'>' => Tok::Gt,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'#' => Tok::Hash,
            b'/' => Tok::Slash,
            b'&' => Tok::Amp,
            b'|' => Tok::Bar,
            b'+' => Tok::Plus,
            b'^' => Tok::Caret,
            b';' => Tok::Semi,
            b'*' => Tok::Star,
            b'?' => Tok::Question,
            b'<' if bytes[i..].starts_with(b"<->") => {
                i += 2;
                Tok::DArrow
            }
            b'<' => Tok::Lt,
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Arrow
            }
            b'0'..=b'9' => {
                while i + 1 < bytes.len() && bytes[i + 1].is_ascii_digit() {
                    i += 1;
                }
                let digits = &text[start..=i];
                let value = digits.parse().map_err(|_| SyntaxError::Parse {
                    pos: start,
                    message: format!("integer {digits} too large"),
                })?;
                Tok::Int(value)
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i + 1 < bytes.len() && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_') {
                    i += 1;
                }
                Tok::Ident(text[start..=i].to_string())
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(SyntaxError::Parse {
                    pos: start,
                    message: format!("unexpected character {ch:?}"),
                });
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::Eof, text.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
    ctx: ChainContext,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if t != Tok::Eof {
            self.at += 1;
        }
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn error<T>(&self, expected: &str) -> Result<T, SyntaxError> {
        Err(SyntaxError::Parse {
            pos: self.pos(),
            message: format!("expected {expected}, found {}", self.peek().describe()),
        })
    }

    fn expect(&mut self, t: Tok) -> Result<(), SyntaxError> {
        if self.eat(&t) {
            Ok(())
        } else {
            self.error(&t.describe())
        }
    }

    fn finish(&self) -> Result<(), SyntaxError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            self.error("end of input")
        }
    }

    fn formula(&mut self) -> Result<Formula, SyntaxError> {
        let mut acc = self.imp()?;
        while self.eat(&Tok::DArrow) {
            let rhs = self.imp()?;
            acc = Formula::iff(acc, rhs);
        }
        Ok(acc)
    }

    fn imp(&mut self) -> Result<Formula, SyntaxError> {
        let lhs = self.or()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.imp()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, SyntaxError> {
        let mut acc = self.and()?;
        while self.eat(&Tok::Bar) {
            acc = Formula::or(acc, self.and()?);
        }
        Ok(acc)
    }

    fn and(&mut self) -> Result<Formula, SyntaxError> {
        let mut acc = self.unary()?;
        while self.eat(&Tok::Amp) {
            acc = Formula::and(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, SyntaxError> {
        match self.peek() {
            Tok::Tilde => {
                self.bump();
                Ok(Formula::neg(self.unary()?, self.ctx))
            }
            Tok::LBrack => {
                self.bump();
                let p = self.program()?;
                self.expect(Tok::RBrack)?;
                Ok(Formula::necessity(p, self.unary()?))
            }
            Tok::Lt => {
                self.bump();
                let p = self.program()?;
                self.expect(Tok::Gt)?;
                Ok(Formula::possibility(p, self.unary()?))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, SyntaxError> {
        let pos = self.pos();
        let start = self.at;
        match self.bump() {
            Tok::Ident(name) => Ok(Formula::Var(name)),
            Tok::LParen => {
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Hash => {
                let p = match self.peek() {
                    Tok::Int(p) => *p,
                    _ => return self.error("integer after '#'"),
                };
                self.bump();
                let value = if self.eat(&Tok::Slash) {
                    let q = match self.peek() {
                        Tok::Int(q) => *q,
                        _ => return self.error("denominator"),
                    };
                    self.bump();
                    self.ctx.from_rational(p, q)
                } else if p <= 1 {
                    self.ctx.from_rational(p, 1)
                } else {
                    return Err(SyntaxError::Parse {
                        pos,
                        message: format!("constant #{p} needs a denominator"),
                    });
                };
                value
                    .map(Formula::Const)
                    .map_err(|source| SyntaxError::Constant { pos, source })
            }
            _ => {
                self.at = start;
                self.error("a formula")
            }
        }
    }

    fn program(&mut self) -> Result<Program, SyntaxError> {
        let mut acc = self.par()?;
        while self.eat(&Tok::Plus) {
            acc = Program::union(acc, self.par()?);
        }
        Ok(acc)
    }

    fn par(&mut self) -> Result<Program, SyntaxError> {
        let mut acc = self.seq()?;
        while self.eat(&Tok::Caret) {
            acc = Program::inter(acc, self.seq()?);
        }
        Ok(acc)
    }

    fn seq(&mut self) -> Result<Program, SyntaxError> {
        let mut acc = self.post()?;
        while self.eat(&Tok::Semi) {
            acc = Program::seq(acc, self.post()?);
        }
        Ok(acc)
    }

    fn post(&mut self) -> Result<Program, SyntaxError> {
        let mut acc = self.prim()?;
        while self.eat(&Tok::Star) {
            acc = Program::star(acc);
        }
        Ok(acc)
    }

    fn prim(&mut self) -> Result<Program, SyntaxError> {
        let start = self.at;
        match self.bump() {
            Tok::Ident(name) => Ok(Program::Atomic(name)),
            Tok::Question => {
                self.expect(Tok::LParen)?;
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(Program::test(f))
            }
            Tok::LParen => {
                let p = self.program()?;
                self.expect(Tok::RParen)?;
                Ok(p)
            }
            _ => {
                self.at = start;
                self.error("a program")
            }
        }
    }
}

fn parser(text: &str, ctx: ChainContext) -> Result<Parser, SyntaxError> {
    Ok(Parser {
        toks: lex(text)?,
        at: 0,
        ctx,
    })
}

pub fn parse_formula(text: &str, ctx: ChainContext) -> Result<Formula, SyntaxError> {
    let mut p = parser(text, ctx)?;
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

pub fn parse_program(text: &str, ctx: ChainContext) -> Result<Program, SyntaxError> {
    let mut p = parser(text, ctx)?;
    let prog = p.program()?;
    p.finish()?;
    Ok(prog)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(n: u32) -> ChainContext {
        ChainContext::new(n).unwrap()
    }

    fn f(text: &str) -> Formula {
        parse_formula(text, ctx(3)).unwrap()
    }

    #[test]
    fn grammar_examples() {
        assert_eq!(
            f("[a + b]p"),
            Formula::necessity(Program::union(Program::atomic("a"), Program::atomic("b")), Formula::var("p"))
        );
        assert_eq!(
            f("<?(p) >p"),
            Formula::possibility(Program::test(Formula::var("p")), Formula::var("p"))
        );
        let err = parse_formula("#1/2 -> p", ctx(4)).unwrap_err();
        assert!(matches!(
            err,
            SyntaxError::Constant {
                pos: 0,
                source: ChainError::NotAChainElement { .. }
            }
        ));
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(f("p -> q -> r"), Formula::implies(f("p"), Formula::implies(f("q"), f("r"))));
        assert_eq!(f("p | q & r"), Formula::or(f("p"), Formula::and(f("q"), f("r"))));
        assert_eq!(f("p & q & r"), Formula::and(Formula::and(f("p"), f("q")), f("r")));
        assert_eq!(f("~p & q"), Formula::and(Formula::neg(f("p"), ctx(3)), f("q")));
        assert_eq!(f("[a]p -> q"), Formula::implies(f("[a]p"), f("q")));
        assert_eq!(f("p <-> q"), Formula::iff(f("p"), f("q")));
        assert_eq!(f("p <-> q -> r"), Formula::iff(f("p"), f("q -> r")));
        let prog = parse_program("a + b ^ c ; d*", ctx(3)).unwrap();
        assert_eq!(
            prog,
            Program::union(
                Program::atomic("a"),
                Program::inter(
                    Program::atomic("b"),
                    Program::seq(Program::atomic("c"), Program::star(Program::atomic("d")))
                )
            )
        );
        assert_eq!(
            parse_program("a**", ctx(3)).unwrap(),
            Program::star(Program::star(Program::atomic("a")))
        );
    }

    #[test]
    fn constants() {
        assert_eq!(f("#0"), Formula::Const(ctx(3).zero()));
        assert_eq!(f("#1"), Formula::Const(ctx(3).one()));
        assert_eq!(f("#2/4"), Formula::Const(ctx(3).value(1).unwrap()));
        assert!(parse_formula("#2", ctx(3)).is_err());
        assert!(parse_formula("#", ctx(3)).is_err());
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse_formula("p & ", ctx(3)).unwrap_err();
        assert_eq!(err.position(), 4);
        let err = parse_formula("[a p", ctx(3)).unwrap_err();
        assert_eq!(err.position(), 3);
        let err = parse_formula("p $ q", ctx(3)).unwrap_err();
        assert_eq!(err.position(), 2);
        assert!(parse_formula("p q", ctx(3)).is_err());
        assert!(parse_formula("p - q", ctx(3)).is_err());
        assert!(parse_program("?p", ctx(3)).is_err());
    }
}
