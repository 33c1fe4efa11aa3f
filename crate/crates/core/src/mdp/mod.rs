//! Markov decision processes and their SSAT encodings.

mod encode;
mod model;

use thiserror::Error;

pub use encode::{
    build_backstep_query, build_kernel_avoid, build_pbmc, build_upper_bound, encode_step, exactly_one, predicate_states,
    state_set_predicate, state_var, unroll, BackstepQuery, ChanceVar, QueryMode, Slot, SlotLit, StepEncoding, Unrolling,
};
pub use model::{parse_mdp, write_mdp, ActionId, Distribution, Mdp, StateId, StateSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MdpError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("distribution of state {state} under action {action} sums to {sum}, not 1")]
    DistributionSum { state: String, action: String, sum: String },
    #[error("transition probability {prob} of state {state} under action {action} is not in (0,1]")]
    BadProbability { state: String, action: String, prob: String },
    #[error("transition {state} --{action}--> {successor} declared twice")]
    DuplicateTransition { state: String, action: String, successor: String },
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("unknown action `{0}`")]
    UnknownAction(String),
    #[error("state {0} has no actions")]
    NoActions(String),
    #[error("the model declares no target states")]
    MissingTarget,
    #[error("the model declares no region")]
    MissingRegion,
}

#[cfg(test)]
pub(crate) const FIG3: &str = include_str!("../../../cli/examples/fig3.mdp");
