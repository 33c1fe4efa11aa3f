//! S-resolution: probability-annotated clauses, the three derivation rules,
//! their interpolating variants, derivation traces and an independent checker.

mod check;
mod rules;
mod text;

use std::fmt;

use thiserror::Error;

use crate::logic::{Assignment, Clause, FormulaAst, Partition, SsatFormula, Var};
use crate::Rational;

pub use check::{check_proof, CheckReport, StepReport, Violation};
pub use rules::{apply_r1, apply_r2, apply_r2_1, apply_r2_2, apply_r2_3, apply_r3};
pub use text::{parse_trace, write_trace, TraceParseError};

/// A clause `c^p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AnnotatedClause {
    pub clause: Clause,
    pub prob: Rational,
}

impl AnnotatedClause {
    pub fn new(clause: Clause, prob: Rational) -> AnnotatedClause {
        AnnotatedClause { clause, prob }
    }
}

impl fmt::Display for AnnotatedClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.clause, crate::logic::rational::format_exact(&self.prob))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    R1,
    R2,
    R3,
    R2_1,
    R2_2,
    R2_3,
}

impl Rule {
    pub fn is_interpolating(self) -> bool {
        matches!(self, Rule::R2_1 | Rule::R2_2 | Rule::R2_3)
    }

    /// The plain rule underneath an interpolating one.
    pub fn base(self) -> Rule {
        match self {
            Rule::R1 | Rule::R2_1 => Rule::R1,
            Rule::R2 | Rule::R2_2 => Rule::R2,
            Rule::R3 | Rule::R2_3 => Rule::R3,
        }
    }

    pub fn with_interpolant(self) -> Rule {
        match self.base() {
            Rule::R1 => Rule::R2_1,
            Rule::R2 => Rule::R2_2,
            _ => Rule::R2_3,
        }
    }
}

/// What the interpolant of an `R.2` leaf is set to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DcPolicy {
    ConstTrue,
    ConstFalse,
    Custom(FormulaAst),
}

impl DcPolicy {
    pub fn formula(&self) -> FormulaAst {
        match self {
            DcPolicy::ConstTrue => FormulaAst::True,
            DcPolicy::ConstFalse => FormulaAst::False,
            DcPolicy::Custom(f) => f.clone(),
        }
    }
}

pub type StepId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationStep {
    pub rule: Rule,
    /// `[left, right]` for resolution, empty otherwise.
    pub premises: Vec<StepId>,
    pub conclusion: AnnotatedClause,
    pub interpolant: Option<FormulaAst>,
    pub pivot: Option<Var>,
    pub witness: Option<Assignment>,
}

/// A derivation; step `i` may only use steps `< i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofTrace {
    pub formula: SsatFormula,
    pub partition: Option<Partition>,
    pub steps: Vec<DerivationStep>,
}

impl ProofTrace {
    pub fn new(formula: SsatFormula, partition: Option<Partition>) -> ProofTrace {
        ProofTrace { formula, partition, steps: Vec::new() }
    }

    pub fn push(&mut self, step: DerivationStep) -> StepId {
        self.steps.push(step);
        self.steps.len() - 1
    }

    pub fn last(&self) -> Option<&DerivationStep> {
        self.steps.last()
    }

    /// The final annotation if the trace ends in the empty clause.
    pub fn refutation_value(&self) -> Option<&Rational> {
        self.last().filter(|s| s.conclusion.clause.is_empty()).map(|s| &s.conclusion.prob)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("clause {0} is not in the matrix")]
    NotAMatrixClause(Clause),
    #[error("clause {0} does not certify a satisfied matrix")]
    PremiseViolated(Clause),
    #[error("pivot {0} does not occur with the required polarity")]
    PivotMissing(Var),
    #[error("resolvent {0} is tautological")]
    TautologicalResolvent(Clause),
    #[error("pivot {0} is not bound after every variable of the resolvent")]
    PrefixOrderViolated(Var),
    #[error("variable {0} is not bound in the prefix")]
    UnboundVariable(Var),
    #[error("clause {0} is tautological")]
    TautologicalClause(Clause),
    #[error("don't-care interpolant mentions {0}, which is not a common variable")]
    DcPolicyVariablesOutsideCommon(Var),
}
