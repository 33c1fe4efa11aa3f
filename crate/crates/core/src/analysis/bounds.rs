use std::time::Instant;

use num_traits::One;
use rayon::prelude::*;

use crate::logic::FormulaAst;
use crate::mdp::{build_kernel_avoid, build_pbmc, build_upper_bound, Mdp};
use crate::solver::{solve, SolveOptions};
use crate::Rational;

use super::verify::verify_kernel;
use super::{AnalysisError, BoundEntry, BoundKind, BoundSequence};

/// Whether [`lower_bounds_stability`] checks the kernel first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelCheck {
    Verify,
    Trust,
}

fn timed(k: usize, f: impl FnOnce() -> Result<Rational, AnalysisError>) -> Result<BoundEntry, AnalysisError> {
    let start = Instant::now();
    let value = f()?;
    Ok(BoundEntry { k, value, solve_time: start.elapsed() })
}

fn value(f: &crate::logic::SsatFormula) -> Result<Rational, AnalysisError> {
    Ok(solve(f, &SolveOptions::value())?.prob)
}

pub(crate) fn lower_reach_at(m: &Mdp, k: usize) -> Result<BoundEntry, AnalysisError> {
    timed(k, || value(&build_pbmc(m, k)?))
}

pub(crate) fn upper_reach_at(m: &Mdp, breach: &FormulaAst, k: usize) -> Result<BoundEntry, AnalysisError> {
    timed(k, || value(&build_upper_bound(m, breach, k)))
}

pub(crate) fn stability_at(m: &Mdp, kernel: &FormulaAst, k: usize) -> Result<BoundEntry, AnalysisError> {
    timed(k, || Ok(Rational::one() - value(&build_kernel_avoid(m, kernel, k))?))
}

fn sequence(
    kind: BoundKind,
    k_max: usize,
    entry: impl Fn(usize) -> Result<BoundEntry, AnalysisError> + Sync + Send,
) -> Result<BoundSequence, AnalysisError> {
    let entries = (0..=k_max).into_par_iter().map(entry).collect::<Result<Vec<_>, _>>()?;
    Ok(BoundSequence { kind, entries })
}

/// `lb_k` for `k = 0..=k_max`: the maximal probability of reaching the target within `k` steps.
pub fn lower_bounds_reach(m: &Mdp, k_max: usize) -> Result<BoundSequence, AnalysisError> {
    sequence(BoundKind::LowerReach, k_max, |k| lower_reach_at(m, k))
}

/// `ub_k` for `k = 0..=k_max`: the maximal probability of staying in `breach` for `k` steps.
pub fn upper_bounds_reach(m: &Mdp, breach: &FormulaAst, k_max: usize) -> Result<BoundSequence, AnalysisError> {
    sequence(BoundKind::UpperReach, k_max, |k| upper_reach_at(m, breach, k))
}

/// `lb_k = 1 − Pr(avoid kernel for k steps)` for `k = 0..=k_max`.
pub fn lower_bounds_stability(
    m: &Mdp,
    kernel: &FormulaAst,
    k_max: usize,
    check: KernelCheck,
) -> Result<BoundSequence, AnalysisError> {
    if check == KernelCheck::Verify && !verify_kernel(m, kernel) {
        return Err(AnalysisError::KernelNotInvariant);
    }
    sequence(BoundKind::LowerStability, k_max, |k| stability_at(m, kernel, k))
}
