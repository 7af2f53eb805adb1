//! Fischer–Ladner closure.

use std::collections::{BTreeSet, HashSet};

use thiserror::Error;

use super::{Formula, Program};
use crate::chain::ChainContext;

pub const DEFAULT_CLOSURE_CAP: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClosureError {
    #[error("closure exceeded the budget of {0} formulas")]
    ClosureBudgetExceeded(usize),
}

/// Formulas that membership of `f` forces into a closed set.
fn forced(f: &Formula, ctx: ChainContext) -> Vec<Formula> {
    let mut out: Vec<Formula> = f.children().into_iter().cloned().collect();
    match f {
        Formula::Necessity(p, body) => match &**p {
            Program::Union(a, b) => {
                out.push(Formula::necessity((**a).clone(), (**body).clone()));
                out.push(Formula::necessity((**b).clone(), (**body).clone()));
            }
            Program::Inter(a, b) => {
                out.push(Formula::necessity((**a).clone(), (**body).clone()));
                out.push(Formula::necessity((**b).clone(), (**body).clone()));
                out.push(Formula::necessity((**a).clone(), Formula::Const(ctx.one())));
                out.push(Formula::necessity((**b).clone(), Formula::Const(ctx.one())));
            }
            Program::Seq(a, b) => {
                let inner = Formula::necessity((**b).clone(), (**body).clone());
                out.push(Formula::necessity((**a).clone(), inner));
            }
            Program::Star(a) => {
                out.push(Formula::necessity((**a).clone(), f.clone()));
            }
            Program::Test(t) => {
                out.push(Formula::implies((**t).clone(), (**body).clone()));
            }
            Program::Atomic(_) => {}
        },
        Formula::Possibility(p, body) => match &**p {
            Program::Union(a, b) | Program::Inter(a, b) => {
                out.push(Formula::possibility((**a).clone(), (**body).clone()));
                out.push(Formula::possibility((**b).clone(), (**body).clone()));
            }
            Program::Seq(a, b) => {
                let inner = Formula::possibility((**b).clone(), (**body).clone());
                out.push(Formula::possibility((**a).clone(), inner));
            }
            Program::Star(a) => {
                out.push(Formula::possibility((**a).clone(), f.clone()));
            }
            Program::Test(t) => {
                out.push(Formula::and((**t).clone(), (**body).clone()));
            }
            Program::Atomic(_) => {}
        },
        _ => {}
    }
    out
}

/// The smallest Fischer–Ladner closed set containing every formula in `seeds`.
pub fn fl_closure_of_set<'a, I>(seeds: I, ctx: ChainContext, cap: usize) -> Result<BTreeSet<Formula>, ClosureError>
where
    I: IntoIterator<Item = &'a Formula>,
{
    let mut seen: HashSet<Formula> = HashSet::new();
    let mut work: Vec<Formula> = Vec::new();
    for f in seeds {
        if seen.insert(f.clone()) {
            work.push(f.clone());
        }
    }
    while let Some(f) = work.pop() {
        if seen.len() > cap {
            return Err(ClosureError::ClosureBudgetExceeded(cap));
        }
        for g in forced(&f, ctx) {
            if !seen.contains(&g) {
                seen.insert(g.clone());
                work.push(g);
            }
        }
    }
    if seen.len() > cap {
        return Err(ClosureError::ClosureBudgetExceeded(cap));
    }
    Ok(seen.into_iter().collect())
}

/// `FL(φ)` under the default budget.
pub fn fl_closure(f: &Formula, ctx: ChainContext) -> Result<BTreeSet<Formula>, ClosureError> {
    fl_closure_of_set([f], ctx, DEFAULT_CLOSURE_CAP)
}

pub fn is_fl_closed(set: &BTreeSet<Formula>, ctx: ChainContext) -> bool {
    set.iter().all(|f| forced(f, ctx).iter().all(|g| set.contains(g)))
}
