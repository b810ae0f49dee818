//! Predicate decision diagrams synthesized from tabular controller policies.
//!
//! The flow is: load a [`Policy`], learn a decision tree with
//! [`learn_dt`], then [`run_pipeline`] compiles the tree into a reduced
//! ordered diagram over predicate variables and shrinks it by reordering,
//! consistency pruning and care-set restriction. [`build_bbbdd`] gives the
//! bit-blasted baseline the result is compared against.

pub mod bitblast;
pub mod careset;
pub mod consistency;
pub mod dd;
pub mod dt;
pub mod error;
pub mod gen;
pub mod pdd;
pub mod pipeline;
pub mod policy;
pub mod reorder;
pub mod report;
pub mod theory;

pub use bitblast::{build_bbbdd, encode_state, BbBdd, BitEncoding};
pub use careset::{build_care_set, restrict};
pub use consistency::{check_consistent, pconsistency, ConsistencyReport, InconsistentPath};
pub use dd::{DdManager, NodeRef, NodeView, SizeReport, TerminalLabel};
pub use dt::{dt_decision_count, evaluate_dt, learn_dt, DtNode, LearnOptions};
pub use error::{Error, Result};
pub use pdd::{compile, lift, mine_predicates, pdd2bdd, PredicateBijection};
pub use pipeline::{run_pipeline, PipelineOptions, PipelineResult, Stage, StageReport};
pub use policy::{load_policy, load_policy_path, ActionSet, Evaluation, Format, Policy, Predicate, Rel, Value, VarDecl, VarKind};
pub use reorder::{reorder_to_convergence, ReorderMode, ReorderOptions};
pub use report::{dd_to_dot, dt_to_dot, geometric_mean, r_gap, ComparisonReport, ComparisonRow};
pub use theory::{sat_with, Context, SatResult};
