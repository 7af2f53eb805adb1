//! JSON model format.
//!
//! ```json
//! {
//!   "n": 3,
//!   "states": ["s0", "s1"],
//!   "valuation": { "p": { "s0": "1/2", "s1": "1" } },
//!   "programs": { "a": [ { "from": "s0", "to": ["s0", "s1"], "value": "1/2" } ] }
//! }
//! ```
//!
//! Absent valuation and relation entries are `0`. Quotients add a
//! `classes` table mapping each quotient state to the states it merges.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chain::{ChainContext, ChainError};
use crate::relations::{ReachRelation, RelationError, StateSpace};
use crate::semantics::{Model, ModelError};

#[derive(Debug, Error)]
pub enum ModelFileError {
    #[error("invalid model JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("unknown state {0:?}")]
    UnknownState(String),
    #[error("program {program:?} lists ({from}, {to:?}) twice")]
    DuplicateEntry {
        program: String,
        from: String,
        to: Vec<String>,
    },
    #[error("value {value:?}: {source}")]
    Value {
        value: String,
        #[source]
        source: ChainError,
    },
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Relation(#[from] RelationError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub from: String,
    pub to: Vec<String>,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelFile {
    pub n: u32,
    pub states: Vec<String>,
    #[serde(default)]
    pub valuation: BTreeMap<String, BTreeMap<String, String>>,
    #[serde(default)]
    pub programs: BTreeMap<String, Vec<Edge>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classes: Option<BTreeMap<String, Vec<String>>>,
}

impl ModelFile {
    pub fn from_model(model: &Model) -> ModelFile {
        let names = model.state_names();
        let valuation = model
            .propvars()
            .map(|var| {
                let per_state = names
                    .iter()
                    .enumerate()
                    .map(|(s, name)| (name.clone(), model.value(var, s).to_string()))
                    .collect();
                (var.to_string(), per_state)
            })
            .collect();
        let programs = model
            .atomics()
            .map(|(name, rel)| {
                let edges = rel
                    .entries()
                    .map(|(s, t, v)| Edge {
                        from: names[s].clone(),
                        to: t.iter().map(|i| names[i].clone()).collect(),
                        value: v.to_string(),
                    })
                    .collect();
                (name.to_string(), edges)
            })
            .collect();
        ModelFile {
            n: model.context().order(),
            states: names.to_vec(),
            valuation,
            programs,
            classes: None,
        }
    }

    pub fn to_model(&self) -> Result<Model, ModelFileError> {
        let ctx = ChainContext::new(self.n)?;
        let space = StateSpace::new(self.states.len())?;
        let mut model = Model::new(ctx, space).with_state_names(self.states.clone())?;
        let index = |name: &str| {
            model_index(&self.states, name).ok_or_else(|| ModelFileError::UnknownState(name.to_string()))
        };
        let parse = |text: &str| {
            ctx.parse_value(text).map_err(|source| ModelFileError::Value {
                value: text.to_string(),
                source,
            })
        };
        for (var, per_state) in &self.valuation {
            model.declare_var(var.clone());
            for (state, value) in per_state {
                model.set_value(var, index(state)?, parse(value)?)?;
            }
        }
        for (name, edges) in &self.programs {
            let mut rel = ReachRelation::zero(space, ctx);
            let mut seen = std::collections::HashSet::new();
            for e in edges {
                let from = index(&e.from)?;
                let targets = e.to.iter().map(|t| index(t)).collect::<Result<Vec<_>, _>>()?;
                let set = space.set_of(targets)?;
                if !seen.insert((from, set)) {
                    return Err(ModelFileError::DuplicateEntry {
                        program: name.clone(),
                        from: e.from.clone(),
                        to: e.to.clone(),
                    });
                }
                rel.set(from, set, parse(&e.value)?)?;
            }
            model.set_relation(name.clone(), rel)?;
        }
        Ok(model)
    }

    pub fn from_json(text: &str) -> Result<ModelFile, ModelFileError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<ModelFile, ModelFileError> {
        let text = std::fs::read_to_string(path).map_err(|source| ModelFileError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model files serialize")
    }
}

fn model_index(states: &[String], name: &str) -> Option<usize> {
    states.iter().position(|s| s == name)
}
