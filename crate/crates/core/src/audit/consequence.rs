//! Semantic consequence for modality-free formulas by exhaustive valuation.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::chain::{ChainContext, ChainValue};
use crate::syntax::Formula;

pub const DEFAULT_VALUATION_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConsequenceError {
    #[error("formula {0} contains a modality")]
    ModalFormulaRejected(String),
    #[error("{vars} variables over a {n}-element chain need {needed} valuations; the limit is {limit}")]
    BudgetExceeded { vars: usize, n: u32, needed: u128, limit: u64 },
    #[error("constant {value} does not belong to {expected}")]
    ForeignConstant { value: ChainValue, expected: ChainContext },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsequenceResult {
    pub holds: bool,
    pub valuations_checked: u64,
    /// A valuation making every premise `1` and the conclusion less than `1`.
    pub witness: Option<BTreeMap<String, ChainValue>>,
}

/// Whether every valuation sending all of `premises` to `1` sends `goal` to
/// `1`, by enumerating all `n^v` valuations of the variables involved.
pub fn check_consequence_prop(
    premises: &[Formula],
    goal: &Formula,
    ctx: ChainContext,
    limit: u64,
) -> Result<ConsequenceResult, ConsequenceError> {
    let mut vars = BTreeSet::new();
    for f in premises.iter().chain(std::iter::once(goal)) {
        if !f.is_modality_free() {
            return Err(ConsequenceError::ModalFormulaRejected(f.to_string()));
        }
        if let Some(value) = f.constants().into_iter().find(|c| c.context() != ctx) {
            return Err(ConsequenceError::ForeignConstant { value, expected: ctx });
        }
        vars.extend(f.propvars());
    }
    let vars: Vec<String> = vars.into_iter().collect();
    let n = ctx.order();
    let needed = (n as u128).checked_pow(vars.len() as u32).unwrap_or(u128::MAX);
    if needed > limit as u128 {
        return Err(ConsequenceError::BudgetExceeded {
            vars: vars.len(),
            n,
            needed,
            limit,
        });
    }

    let top = ctx.top_num();
    let mut nu = vec![0u32; vars.len()];
    let mut checked = 0u64;
    loop {
        checked += 1;
        let val = |f: &Formula| eval(f, &vars, &nu, ctx);
        if premises.iter().all(|p| val(p) == top) && val(goal) != top {
            let witness = vars
                .iter()
                .zip(&nu)
                .map(|(v, &k)| (v.clone(), ctx.value(k).expect("in range")))
                .collect();
            return Ok(ConsequenceResult {
                holds: false,
                valuations_checked: checked,
                witness: Some(witness),
            });
        }
        // Odometer step; the first variable varies fastest.
        let mut i = 0;
        loop {
            if i == nu.len() {
                return Ok(ConsequenceResult {
                    holds: true,
                    valuations_checked: checked,
                    witness: None,
                });
            }
            if nu[i] < top {
                nu[i] += 1;
                break;
            }
            nu[i] = 0;
            i += 1;
        }
    }
}

fn eval(f: &Formula, vars: &[String], nu: &[u32], ctx: ChainContext) -> u32 {
    match f {
        Formula::Var(v) => nu[vars.binary_search(v).expect("collected")],
        Formula::Const(c) => c.numerator(),
        Formula::And(a, b) => eval(a, vars, nu, ctx).min(eval(b, vars, nu, ctx)),
        Formula::Or(a, b) => eval(a, vars, nu, ctx).max(eval(b, vars, nu, ctx)),
        Formula::Implies(a, b) => ctx.implies_raw(eval(a, vars, nu, ctx), eval(b, vars, nu, ctx)),
        Formula::Necessity(..) | Formula::Possibility(..) => unreachable!("rejected above"),
    }
}
