//! Exact SSAT solving by prefix-ordered search.
//!
//! Two engines share the assignment state in [`search`]. The proof engine
//! records an S-resolution derivation (and, given a partition, a generalized
//! interpolant) for the value it computes. The value engine records nothing,
//! caches subproblems, and can stop early once the value is known to lie
//! below or above given thresholds.

mod proof;
mod search;
mod value;

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::logic::{
    negate_to_cnf, partitioned_formula, to_cnf, Clause, FormulaAst, LogicError, Partition, Prefix, Quantifier, SsatFormula,
    Var, VarAllocator,
};
use crate::sresolution::ProofTrace;
use crate::Rational;
use proof::ProofEngine;
use search::Search;
use value::ValueEngine;

/// Interpolant of every satisfied leaf.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DcChoice {
    #[default]
    ConstTrue,
    ConstFalse,
}

impl DcChoice {
    pub fn formula(self) -> FormulaAst {
        FormulaAst::constant(self == DcChoice::ConstTrue)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum Pruning {
    #[default]
    None,
    /// Stop once the value is known to be `≤ lo` or `≥ hi`.
    Thresholding { lo: Rational, hi: Rational },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SolveOptions {
    pub emit_proof: bool,
    pub emit_interpolant: bool,
    pub dc_policy: DcChoice,
    pub pruning: Pruning,
}

impl SolveOptions {
    pub fn value() -> SolveOptions {
        SolveOptions::default()
    }

    pub fn proof() -> SolveOptions {
        SolveOptions { emit_proof: true, ..SolveOptions::default() }
    }

    pub fn interpolant(dc_policy: DcChoice) -> SolveOptions {
        SolveOptions { emit_proof: true, emit_interpolant: true, dc_policy, pruning: Pruning::None }
    }

    pub fn threshold(lo: Rational, hi: Rational) -> SolveOptions {
        SolveOptions { pruning: Pruning::Thresholding { lo, hi }, ..SolveOptions::default() }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub decisions: u64,
    /// Branches closed immediately because the assignment falsified a clause.
    pub propagations: u64,
    pub leaves: u64,
    pub memo_hits: u64,
    pub peak_depth: usize,
}

/// What `prob` means.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Exact,
    /// `Pr ≤ prob ≤ lo`.
    AtMost,
    /// `Pr ≥ prob ≥ hi`.
    AtLeast,
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    pub prob: Rational,
    pub outcome: Outcome,
    pub trace: Option<ProofTrace>,
    pub interpolant: Option<FormulaAst>,
    pub stats: SolveStats,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("interpolants are only produced together with a proof")]
    InterpolantWithoutProof,
    #[error("threshold pruning cannot be combined with proof output")]
    PruningWithProof,
    #[error("an interpolant needs a clause partition")]
    MissingPartition,
    #[error("variable {0} of the partition is not bound by the prefix")]
    PartitionNotCovering(Var),
    #[error(transparent)]
    Logic(#[from] LogicError),
}

// Deep prefixes recurse deeply; give them a thread with room to do so.
const INLINE_DEPTH: usize = 256;

fn with_stack<T: Send>(depth: usize, f: impl FnOnce() -> T + Send) -> T {
    if depth <= INLINE_DEPTH {
        return f();
    }
    let bytes = (depth * 4096).max(16 << 20);
    std::thread::scope(|s| {
        std::thread::Builder::new().stack_size(bytes).spawn_scoped(s, f).expect("spawn solver thread").join().unwrap()
    })
}

/// `Pr(Φ)` and whatever `opts` asks for.
pub fn solve(f: &SsatFormula, opts: &SolveOptions) -> Result<SolveResult, SolveError> {
    run(f, None, opts)
}

/// Like [`solve`], with interpolants over the given clause partition.
pub fn solve_interpolating(f: &SsatFormula, part: &Partition, opts: &SolveOptions) -> Result<SolveResult, SolveError> {
    run(f, Some(part), opts)
}

fn run(f: &SsatFormula, part: Option<&Partition>, opts: &SolveOptions) -> Result<SolveResult, SolveError> {
    if opts.emit_interpolant && !opts.emit_proof {
        return Err(SolveError::InterpolantWithoutProof);
    }
    if opts.emit_proof && opts.pruning != Pruning::None {
        return Err(SolveError::PruningWithProof);
    }
    if opts.emit_interpolant && part.is_none() {
        return Err(SolveError::MissingPartition);
    }
    let depth = f.prefix().len();
    Ok(with_stack(depth, || {
        let search = Search::new(f);
        if opts.emit_proof {
            let part = if opts.emit_interpolant { part } else { None };
            let engine = ProofEngine::new(search, true, part, opts.dc_policy.formula());
            let (root, trace, stats) = engine.run();
            SolveResult {
                prob: root.prob,
                outcome: Outcome::Exact,
                trace,
                interpolant: root.interpolant.map(|i| i.simplify()),
                stats,
            }
        } else {
            let (lo, hi) = match &opts.pruning {
                Pruning::None => (None, None),
                Pruning::Thresholding { lo, hi } => (Some(lo.clone()), Some(hi.clone())),
            };
            let ((l, u), stats) = ValueEngine::new(search).run(lo.clone(), hi.clone());
            let (prob, outcome) = if l == u {
                (l, Outcome::Exact)
            } else if lo.is_some_and(|x| u <= x) {
                (u, Outcome::AtMost)
            } else {
                (l, Outcome::AtLeast)
            };
            SolveResult { prob, outcome, trace: None, interpolant: None, stats }
        }
    }))
}

/// Interpolant of `Q : (A ∧ B)` without keeping the derivation.
pub(crate) fn interpolate(f: &SsatFormula, part: &Partition, dc: DcChoice) -> (Rational, FormulaAst, SolveStats) {
    with_stack(f.prefix().len(), || {
        let engine = ProofEngine::new(Search::new(f), false, Some(part), dc.formula());
        let (root, _, stats) = engine.run();
        (root.prob, root.interpolant.expect("partition given").simplify(), stats)
    })
}

/// `(Pr(Q : (A ∧ B)), I)` for a generalized interpolant `I` of `(A, B)`.
pub fn solve_partitioned(
    a: &[Clause],
    b: &[Clause],
    prefix: &Prefix,
    dc: DcChoice,
) -> Result<(Rational, FormulaAst), SolveError> {
    for c in a.iter().chain(b) {
        if let Some(v) = c.vars().find(|&v| !prefix.contains(v)) {
            return Err(SolveError::PartitionNotCovering(v));
        }
    }
    let num_vars = prefix.vars().map(Var::index).max().unwrap_or(0);
    let (f, part) = partitioned_formula(num_vars, prefix.clone(), a.to_vec(), b.to_vec())?;
    let (p, i, _) = interpolate(&f, &part, dc);
    Ok((p, i))
}

/// Whether `P ∧ ¬Q` is unsatisfiable; `vars` must cover both formulas.
pub fn check_implication(p: &FormulaAst, q: &FormulaAst, vars: &[Var]) -> bool {
    let mut all: BTreeSet<Var> = vars.iter().copied().collect();
    all.extend(p.vars());
    all.extend(q.vars());
    let top = all.iter().map(|v| v.index()).max().unwrap_or(0);
    let mut alloc = VarAllocator::after(top);
    let mut matrix = to_cnf(p, &mut alloc);
    let neg = negate_to_cnf(q, &mut alloc);
    matrix.clauses.extend(neg.clauses);
    matrix.aux_vars.extend(neg.aux_vars);
    let prefix = Prefix::from_bindings(all.iter().chain(matrix.aux_vars.iter()).map(|&v| (v, Quantifier::Exists)))
        .expect("distinct variables");
    let f = SsatFormula::new(alloc.last(), prefix, matrix.clauses).expect("closed by construction");
    let r = solve(&f, &SolveOptions::threshold(Rational::zero(), Rational::one())).expect("valid options");
    r.prob.is_zero() && r.outcome != Outcome::AtLeast
}
