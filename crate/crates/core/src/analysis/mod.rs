//! Interpolation-based verification of MDP reachability and region stability.
//!
//! Both pipelines first run a fixpoint over state-set predicates built from
//! interpolants (the back-reach set for reachability, an invariance kernel
//! for stability), then solve one unrolled formula per depth `k` to get
//! monotone bound sequences and compare them against a threshold.

mod bounds;
mod csv;
mod fixpoint;
mod verify;

use std::time::Duration;

use thiserror::Error;

use crate::logic::FormulaAst;
use crate::mdp::{MdpError, StateSet};
use crate::solver::{DcChoice, SolveError};
use crate::Rational;

pub use bounds::{lower_bounds_reach, lower_bounds_stability, upper_bounds_reach, KernelCheck};
pub use csv::{read_csv, write_csv, CsvError, CSV_HEADER};
pub use fixpoint::{backward_fixpoint, kernel_fixpoint, run_backward, run_kernel};
pub use verify::{
    verify_kernel, verify_safety, verify_stability, verify_stability_with, SafetyReport, StabilityReport,
};

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("fixpoint did not stabilize within {0} iterations")]
    NotStabilized(usize),
    #[error("the kernel is not an invariant subset of the region")]
    KernelNotInvariant,
    #[error("lower bound {lower} at k={k_lower} exceeds upper bound {upper} at k={k_upper}")]
    Inconsistent { k_lower: usize, lower: String, k_upper: usize, upper: String },
    #[error(transparent)]
    Mdp(#[from] MdpError),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FixpointConfig {
    /// Depth of the backward query, at least 1.
    pub j: usize,
    /// Iteration budget; `None` means one more than the number of states.
    pub max_iter: Option<usize>,
    pub dc: DcChoice,
}

impl FixpointConfig {
    pub fn new(j: usize) -> FixpointConfig {
        FixpointConfig { j, max_iter: None, dc: DcChoice::ConstTrue }
    }
}

impl Default for FixpointConfig {
    fn default() -> Self {
        FixpointConfig::new(3)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Iteration {
    pub k: usize,
    /// The new interpolant, over canonical state variables. For `k = 0`
    /// this is the starting predicate.
    pub interpolant: FormulaAst,
    pub cumulative: FormulaAst,
    pub state_set: StateSet,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FixpointMode {
    Reach,
    Stability,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixpointTrace {
    pub mode: FixpointMode,
    pub j: usize,
    pub iterations: Vec<Iteration>,
    /// The `k` whose cumulative predicate passed the implication test.
    pub stabilized_at: Option<usize>,
}

impl FixpointTrace {
    /// Cumulative predicate at the fixpoint.
    pub fn result(&self) -> Option<&Iteration> {
        self.stabilized_at.map(|k| &self.iterations[k])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoundKind {
    LowerReach,
    UpperReach,
    LowerStability,
}

impl BoundKind {
    pub fn name(self) -> &'static str {
        match self {
            BoundKind::LowerReach => "lb_reach",
            BoundKind::UpperReach => "ub_reach",
            BoundKind::LowerStability => "lb_stability",
        }
    }

    pub fn is_lower(self) -> bool {
        self != BoundKind::UpperReach
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundEntry {
    pub k: usize,
    pub value: Rational,
    pub solve_time: Duration,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundSequence {
    pub kind: BoundKind,
    pub entries: Vec<BoundEntry>,
}

impl BoundSequence {
    pub fn new(kind: BoundKind) -> BoundSequence {
        BoundSequence { kind, entries: Vec::new() }
    }

    pub fn values(&self) -> impl Iterator<Item = &Rational> {
        self.entries.iter().map(|e| &e.value)
    }

    pub fn get(&self, k: usize) -> Option<&Rational> {
        self.entries.iter().find(|e| e.k == k).map(|e| &e.value)
    }

    /// Non-decreasing for lower bounds, non-increasing for upper bounds.
    pub fn is_monotone(&self) -> bool {
        self.entries.windows(2).all(|w| {
            if self.kind.is_lower() {
                w[0].value <= w[1].value
            } else {
                w[0].value >= w[1].value
            }
        })
    }
}

/// Every lower bound is at most every upper bound.
pub fn check_sandwich(lower: &BoundSequence, upper: &BoundSequence) -> Result<(), AnalysisError> {
    let (Some(lo), Some(hi)) = (
        lower.entries.iter().max_by(|a, b| a.value.cmp(&b.value)),
        upper.entries.iter().min_by(|a, b| a.value.cmp(&b.value)),
    ) else {
        return Ok(());
    };
    if lo.value > hi.value {
        use crate::logic::rational::format_exact;
        return Err(AnalysisError::Inconsistent {
            k_lower: lo.k,
            lower: format_exact(&lo.value),
            k_upper: hi.k,
            upper: format_exact(&hi.value),
        });
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerdictKind {
    Verified,
    Falsified,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub outcome: VerdictKind,
    pub witness_k: Option<usize>,
    pub theta: Rational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub fixpoint: FixpointConfig,
    pub k_max: usize,
}

impl Budget {
    pub fn new(j: usize, k_max: usize) -> Budget {
        Budget { fixpoint: FixpointConfig::new(j), k_max }
    }
}
