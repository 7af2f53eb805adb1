//! Exact arithmetic on the finite Łukasiewicz chain Łn.
//!
//! An element `k/(n-1)` is stored as its integer numerator `k` together with
//! the chain order `n`, so every law can be checked bit-exactly.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Largest chain order accepted by [`ChainContext::new`].
pub const MAX_ORDER: u32 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChainError {
    #[error("chain order must satisfy 2 <= n <= {MAX_ORDER}, got {0}")]
    InvalidOrder(u32),
    #[error("values from different chains: L{left} vs L{right}")]
    ContextMismatch { left: u32, right: u32 },
    #[error("{p}/{q} is not an element of L{n}")]
    NotAChainElement { p: u64, q: u64, n: u32 },
    #[error("numerator {num} out of range for L{n}")]
    NumeratorOutOfRange { num: u32, n: u32 },
    #[error("malformed chain value literal {0:?}")]
    BadLiteral(String),
}

/// The chain Łn, identified by its number of elements `n >= 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChainContext {
    n: u32,
}

impl ChainContext {
    pub fn new(n: u32) -> Result<Self, ChainError> {
        if (2..=MAX_ORDER).contains(&n) {
            Ok(ChainContext { n })
        } else {
            Err(ChainError::InvalidOrder(n))
        }
    }

    /// Number of elements.
    pub fn order(self) -> u32 {
        self.n
    }

    /// The common denominator `n - 1`, also the numerator of 1̄.
    pub fn top_num(self) -> u32 {
        self.n - 1
    }

    pub fn zero(self) -> ChainValue {
        ChainValue { num: 0, n: self.n }
    }

    pub fn one(self) -> ChainValue {
        ChainValue {
            num: self.n - 1,
            n: self.n,
        }
    }

    pub fn value(self, num: u32) -> Result<ChainValue, ChainError> {
        if num < self.n {
            Ok(ChainValue { num, n: self.n })
        } else {
            Err(ChainError::NumeratorOutOfRange { num, n: self.n })
        }
    }

    /// All elements in ascending order.
    pub fn values(self) -> impl DoubleEndedIterator<Item = ChainValue> + Clone {
        let n = self.n;
        (0..n).map(move |num| ChainValue { num, n })
    }

    /// The element equal to `p/q`, if `p/q` lies on the chain.
    pub fn from_rational(self, p: u64, q: u64) -> Result<ChainValue, ChainError> {
        let n = self.n;
        if q == 0 || p > q {
            return Err(ChainError::NotAChainElement { p, q, n });
        }
        let scaled = p * u64::from(n - 1);
        if !scaled.is_multiple_of(q) {
            return Err(ChainError::NotAChainElement { p, q, n });
        }
        Ok(ChainValue {
            num: (scaled / q) as u32,
            n,
        })
    }

    /// Parses `"p/q"`, `"0"` or `"1"`.
    pub fn parse_value(self, text: &str) -> Result<ChainValue, ChainError> {
        let text = text.trim();
        let bad = || ChainError::BadLiteral(text.to_string());
        let (p, q) = match text.split_once('/') {
            Some((p, q)) => (
                p.trim().parse::<u64>().map_err(|_| bad())?,
                q.trim().parse::<u64>().map_err(|_| bad())?,
            ),
            None => match text {
                "0" => (0, 1),
                "1" => (1, 1),
                _ => return Err(bad()),
            },
        };
        self.from_rational(p, q)
    }

    // Raw numerator arithmetic shared by the relation and evaluation kernels,
    // which check contexts once per structure rather than once per entry.

    #[inline]
    pub(crate) fn conj_raw(self, a: u32, b: u32) -> u32 {
        (a + b).saturating_sub(self.n - 1)
    }

    #[inline]
    pub(crate) fn implies_raw(self, a: u32, b: u32) -> u32 {
        (self.n - 1 - a + b).min(self.n - 1)
    }
}

impl fmt::Display for ChainContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L{}", self.n)
    }
}

/// An element `num/(n-1)` of Łn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChainValue {
    num: u32,
    n: u32,
}

impl ChainValue {
    pub fn numerator(self) -> u32 {
        self.num
    }

    pub fn context(self) -> ChainContext {
        ChainContext { n: self.n }
    }

    pub fn is_one(self) -> bool {
        self.num == self.n - 1
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    fn same_chain(self, other: ChainValue) -> Result<(), ChainError> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(ChainError::ContextMismatch {
                left: self.n,
                right: other.n,
            })
        }
    }

    /// Łukasiewicz t-norm `max(0, a + b - 1)`.
    pub fn conj(self, other: ChainValue) -> Result<ChainValue, ChainError> {
        self.same_chain(other)?;
        Ok(ChainValue {
            num: self.context().conj_raw(self.num, other.num),
            n: self.n,
        })
    }

    /// Residuum `min(1, 1 - a + b)`.
    pub fn implies(self, other: ChainValue) -> Result<ChainValue, ChainError> {
        self.same_chain(other)?;
        Ok(ChainValue {
            num: self.context().implies_raw(self.num, other.num),
            n: self.n,
        })
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(self) -> ChainValue {
        ChainValue {
            num: self.n - 1 - self.num,
            n: self.n,
        }
    }

    pub fn join(self, other: ChainValue) -> Result<ChainValue, ChainError> {
        self.same_chain(other)?;
        Ok(ChainValue {
            num: self.num.max(other.num),
            n: self.n,
        })
    }

    pub fn meet(self, other: ChainValue) -> Result<ChainValue, ChainError> {
        self.same_chain(other)?;
        Ok(ChainValue {
            num: self.num.min(other.num),
            n: self.n,
        })
    }

    /// Chain order; fails on values from different chains.
    pub fn leq(self, other: ChainValue) -> Result<bool, ChainError> {
        self.same_chain(other)?;
        Ok(self.num <= other.num)
    }

    /// The value as `(p, q)` in lowest terms.
    pub fn as_fraction(self) -> (u32, u32) {
        let d = self.n - 1;
        let g = gcd(self.num, d);
        (self.num / g, d / g)
    }
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl fmt::Display for ChainValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_fraction() {
            (0, _) => f.write_str("0"),
            (p, q) if p == q => f.write_str("1"),
            (p, q) => write!(f, "{p}/{q}"),
        }
    }
}

/// Ascii connective name used by the constant axiom and by valuations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BinOp {
    And,
    Or,
    Implies,
}

impl BinOp {
    pub const ALL: [BinOp; 3] = [BinOp::And, BinOp::Or, BinOp::Implies];

    pub fn apply(self, a: ChainValue, b: ChainValue) -> Result<ChainValue, ChainError> {
        match self {
            BinOp::And => a.meet(b),
            BinOp::Or => a.join(b),
            BinOp::Implies => a.implies(b),
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::And => "&",
            BinOp::Or => "|",
            BinOp::Implies => "->",
        }
    }
}

impl FromStr for BinOp {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "&" | "and" => Ok(BinOp::And),
            "|" | "or" => Ok(BinOp::Or),
            "->" | "imp" | "implies" => Ok(BinOp::Implies),
            _ => Err(format!("unknown connective {s:?}")),
        }
    }
}
