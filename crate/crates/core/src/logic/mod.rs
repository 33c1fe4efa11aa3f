//! Variables, literals, clauses, quantifier prefixes, SSAT formulas, formula
//! trees and CNF conversion.

mod ast;
mod clause;
mod cnf;
mod formula;
mod prefix;
pub mod rational;
pub mod sdimacs;

use thiserror::Error;

pub use ast::{FormulaAst, SexprError};
pub use clause::{eval_clause, falsifying_assignment, Assignment, Clause, Literal, Truth, Var};
pub use cnf::{negate_to_cnf, to_cnf, CnfEncoding, VarAllocator};
pub use formula::{clause_index, partitioned_formula, Partition, Side, SsatFormula, VarClass};
pub use prefix::{prefix_append, Prefix, Quantifier};
pub use rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error("clause {0} is tautological")]
    TautologicalClause(Clause),
    #[error("variable {0} is bound twice")]
    DuplicateBinding(Var),
    #[error("variable {0} occurs free")]
    UnboundVariable(Var),
    #[error("variable {0} exceeds the declared count {1}")]
    VarOutOfRange(Var, u32),
    #[error("randomized probability {0} is not strictly between 0 and 1")]
    ProbabilityOutOfRange(Rational),
    #[error("partition refers to clause index {0} outside the matrix")]
    PartitionIndex(usize),
}
