//! A workbench for graded concurrent propositional dynamic logic over the
//! finite Łukasiewicz chains Łn.
//!
//! * [`chain`]: exact Łn arithmetic.
//! * [`syntax`]: formulas, programs, parser, printer and Fischer–Ladner closure.
//! * [`relations`]: reachable Łn-relations and their operations.
//! * [`semantics`]: models and the model checker.
//! * [`audit`]: axiom schemata and randomized counterexample search.
//! * [`proofcheck`]: Hilbert-style derivation checking.
//! * [`filtration`]: quotients of explicit models through closed sets.
//! * [`model_file`]: the JSON model format.

pub mod audit;
pub mod chain;
pub mod exec;
pub mod filtration;
pub mod model_file;
pub mod proofcheck;
pub mod relations;
pub mod semantics;
pub mod syntax;

pub use chain::{BinOp, ChainContext, ChainError, ChainValue};
pub use relations::{ParallelReading, ReachRelation, StateSet, StateSpace, UnionReading};
pub use semantics::{eval_formula, eval_program, valid_in_model, EvalOptions, Evaluator, Model};
pub use syntax::{fl_closure, parse_formula, parse_program, Formula, Program};
pub use exec::Execution;
pub use model_file::ModelFile;
