use rayon::prelude::*;

use crate::logic::FormulaAst;
use crate::mdp::{predicate_states, Mdp, MdpError, StateSet};
use crate::oracle::mdp_is_invariant;
use crate::Rational;

use super::bounds::{lower_reach_at, stability_at, upper_reach_at};
use super::fixpoint::{run_backward, run_kernel};
use super::{
    check_sandwich, AnalysisError, BoundKind, BoundSequence, Budget, FixpointTrace, Verdict, VerdictKind,
};

/// The kernel's states lie in the region (if declared) and no transition leaves them.
pub fn verify_kernel(m: &Mdp, kernel: &FormulaAst) -> bool {
    let set = predicate_states(kernel, m.num_states());
    m.region().is_none_or(|r| set.is_subset(r)) && mdp_is_invariant(m, &set)
}

#[derive(Clone, Debug)]
pub struct SafetyReport {
    pub fixpoint: FixpointTrace,
    /// Back-reach predicate; `None` if the fixpoint did not stabilize.
    pub breach: Option<FormulaAst>,
    pub lower: BoundSequence,
    pub upper: BoundSequence,
    pub verdict: Verdict,
}

#[derive(Clone, Debug)]
pub struct StabilityReport {
    /// `None` when the kernel was supplied by the caller.
    pub fixpoint: Option<FixpointTrace>,
    pub kernel: FormulaAst,
    pub kernel_states: StateSet,
    pub lower: BoundSequence,
    pub verdict: Verdict,
}

// Depths are solved in parallel batches, scanned in order.
fn batches(k_max: usize) -> impl Iterator<Item = std::ops::RangeInclusive<usize>> {
    let width = rayon::current_num_threads().max(1);
    (0..=k_max).step_by(width).map(move |s| s..=(s + width - 1).min(k_max))
}

/// Decides `MaxReach(Target) ≤ θ`, computing `lb_k` and `ub_k` side by side
/// and stopping at the first `k` that settles it.
pub fn verify_safety(m: &Mdp, theta: &Rational, budget: Budget) -> Result<SafetyReport, AnalysisError> {
    m.target().ok_or(MdpError::MissingTarget)?;
    let fixpoint = run_backward(m, budget.fixpoint)?;
    let breach = fixpoint.result().map(|it| it.cumulative.clone());
    let mut lower = BoundSequence::new(BoundKind::LowerReach);
    let mut upper = BoundSequence::new(BoundKind::UpperReach);
    let mut verdict = Verdict { outcome: VerdictKind::Unknown, witness_k: None, theta: theta.clone() };
    'scan: for ks in batches(budget.k_max) {
        let rows = ks
            .into_par_iter()
            .map(|k| Ok((lower_reach_at(m, k)?, breach.as_ref().map(|b| upper_reach_at(m, b, k)).transpose()?)))
            .collect::<Result<Vec<_>, AnalysisError>>()?;
        for (lb, ub) in rows {
            let k = lb.k;
            let falsified = lb.value > *theta;
            lower.entries.push(lb);
            let verified = ub.as_ref().is_some_and(|e| e.value <= *theta);
            upper.entries.extend(ub);
            check_sandwich(&lower, &upper)?;
            if falsified || verified {
                let outcome = if falsified { VerdictKind::Falsified } else { VerdictKind::Verified };
                verdict = Verdict { outcome, witness_k: Some(k), theta: theta.clone() };
                break 'scan;
            }
        }
    }
    Ok(SafetyReport { fixpoint, breach, lower, upper, verdict })
}

/// Decides `MinStable(Region) ≥ θ` with a computed kernel. A kernel that does
/// not stabilize within budget is replaced by the empty one.
pub fn verify_stability(m: &Mdp, theta: &Rational, budget: Budget) -> Result<StabilityReport, AnalysisError> {
    m.region().ok_or(MdpError::MissingRegion)?;
    let fixpoint = run_kernel(m, budget.fixpoint)?;
    let kernel = fixpoint.result().map_or(FormulaAst::False, |it| it.cumulative.clone());
    let mut report = verify_stability_with(m, theta, &kernel, budget.k_max)?;
    report.fixpoint = Some(fixpoint);
    Ok(report)
}

/// Decides `MinStable(Region) ≥ θ` for a given kernel, which must be invariant.
/// Can only verify: an unmet threshold yields `Unknown`.
pub fn verify_stability_with(
    m: &Mdp,
    theta: &Rational,
    kernel: &FormulaAst,
    k_max: usize,
) -> Result<StabilityReport, AnalysisError> {
    if !verify_kernel(m, kernel) {
        return Err(AnalysisError::KernelNotInvariant);
    }
    let mut lower = BoundSequence::new(BoundKind::LowerStability);
    let mut verdict = Verdict { outcome: VerdictKind::Unknown, witness_k: None, theta: theta.clone() };
    'scan: for ks in batches(k_max) {
        let rows = ks.into_par_iter().map(|k| stability_at(m, kernel, k)).collect::<Result<Vec<_>, _>>()?;
        for lb in rows {
            let k = lb.k;
            let reached = lb.value >= *theta;
            lower.entries.push(lb);
            if reached {
                verdict = Verdict { outcome: VerdictKind::Verified, witness_k: Some(k), theta: theta.clone() };
                break 'scan;
            }
        }
    }
    Ok(StabilityReport {
        fixpoint: None,
        kernel: kernel.clone(),
        kernel_states: predicate_states(kernel, m.num_states()),
        lower,
        verdict,
    })
}
