//! Hardness-reduction pipelines as executable generators, each paired with a
//! brute-force oracle.
//!
//! * [`mcc_to_act`]: multicolored clique to incomparable assignment.
//! * [`act_to_nc`]: restricted incomparable assignment to transfer-minimizing
//!   consistency with a fixed network.
//! * [`fas_to_tmstc`] and [`fas_witness`]: feedback arc set to consistency
//!   over a species tree with unknown highways.

mod act;
mod fas;
mod mcc;
mod tree;

use thiserror::Error;

pub use act::{act_to_nc, solve_act_bruteforce, solve_act_bruteforce_with, ActInstance, DEFAULT_ACT_BOUND};
pub use fas::{
    fas_to_tmstc, fas_witness, is_acyclic_without, solve_fas_bruteforce, FasInstance, FasReduction, FAS_ARC_BOUND,
};
pub use mcc::{find_multicolored_clique, mcc_to_act, MccInstance};
pub use tree::RootedTree;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("{what} has size {size}, above the brute-force bound {max}")]
    BoundExceeded { what: &'static str, size: usize, max: usize },
    #[error("invalid instance: {0}")]
    Invalid(String),
    #[error("instance is not in restricted form: {0}")]
    NotRestricted(String),
    #[error("removing the given arcs leaves a cycle")]
    NotAFeedbackArcSet,
    #[error("malformed JSON: {0}")]
    Json(String),
}

fn invalid(msg: impl Into<String>) -> ReductionError {
    ReductionError::Invalid(msg.into())
}
