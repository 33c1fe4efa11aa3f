//! Step-by-step re-derivation of a trace. Shares nothing with the rule
//! functions the solver and library users call.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};

use super::{ProofTrace, Rule, StepId};
use crate::logic::{Clause, FormulaAst, Literal, Quantifier, Var};
use crate::Rational;

// interpolant equivalence is decided by truth table up to this many variables
const TABLE_LIMIT: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    ForwardReference(StepId),
    InvalidPremise(StepId),
    WrongPremiseCount,
    NotMatrixClause,
    TautologicalClause,
    UnboundVariable(Var),
    WrongProbability { expected: Box<Rational>, found: Box<Rational> },
    MissingWitness,
    WitnessMismatch(Var),
    WitnessTooDeep(Var),
    /// Index of a matrix clause not satisfied by `ff_c`.
    NotCertified(usize),
    MissingPivot,
    PivotMissing(Var),
    ResolventMismatch { expected: Clause },
    PrefixOrderViolated(Var),
    MissingPartition,
    MissingInterpolant,
    UnexpectedInterpolant,
    InterpolantOutsideCommon(Var),
    InterpolantMismatch,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use crate::logic::rational::format_exact;
        match self {
            Violation::ForwardReference(id) => write!(f, "premise {id} is not an earlier step"),
            Violation::InvalidPremise(id) => write!(f, "premise {id} is invalid"),
            Violation::WrongPremiseCount => write!(f, "wrong number of premises"),
            Violation::NotMatrixClause => write!(f, "clause is not in the matrix"),
            Violation::TautologicalClause => write!(f, "clause is tautological"),
            Violation::UnboundVariable(v) => write!(f, "variable {v} is unbound"),
            Violation::WrongProbability { expected, found } => {
                write!(f, "annotation {} should be {}", format_exact(found), format_exact(expected))
            }
            Violation::MissingWitness => write!(f, "satisfaction step without witness"),
            Violation::WitnessMismatch(v) => write!(f, "witness disagrees with the falsifying assignment on {v}"),
            Violation::WitnessTooDeep(v) => write!(f, "witness assigns {v}, bound after the clause"),
            Violation::NotCertified(i) => write!(f, "matrix clause {} is not satisfied", i + 1),
            Violation::MissingPivot => write!(f, "resolution step without pivot"),
            Violation::PivotMissing(v) => write!(f, "pivot {v} missing from a premise"),
            Violation::ResolventMismatch { expected } => write!(f, "resolvent should be {expected}"),
            Violation::PrefixOrderViolated(v) => write!(f, "pivot {v} is bound before a resolvent variable"),
            Violation::MissingPartition => write!(f, "interpolant without partition"),
            Violation::MissingInterpolant => write!(f, "interpolant missing"),
            Violation::UnexpectedInterpolant => write!(f, "interpolant on a plain step"),
            Violation::InterpolantOutsideCommon(v) => write!(f, "interpolant mentions non-common {v}"),
            Violation::InterpolantMismatch => write!(f, "interpolant does not follow the rule"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepReport {
    pub id: StepId,
    pub violation: Option<Violation>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub steps: Vec<StepReport>,
    /// `p` when the accepted trace ends in `∅^p`.
    pub certified: Option<Rational>,
    pub interpolant: Option<FormulaAst>,
}

impl CheckReport {
    pub fn accepted(&self) -> bool {
        self.steps.iter().all(|s| s.violation.is_none())
    }

    pub fn first_failure(&self) -> Option<(StepId, &Violation)> {
        self.steps.iter().find_map(|s| s.violation.as_ref().map(|v| (s.id, v)))
    }
}

struct Ctx<'a> {
    trace: &'a ProofTrace,
    pos: BTreeMap<Var, (usize, &'a Quantifier)>,
    matrix: BTreeMap<Vec<Literal>, Vec<usize>>,
    interpolating: bool,
}

pub fn check_proof(t: &ProofTrace) -> CheckReport {
    let pos = t.formula.prefix().bindings().iter().enumerate().map(|(i, (v, q))| (*v, (i, q))).collect();
    let mut matrix: BTreeMap<Vec<Literal>, Vec<usize>> = BTreeMap::new();
    for (i, c) in t.formula.matrix().iter().enumerate() {
        let mut lits = c.literals().to_vec();
        lits.sort();
        lits.dedup();
        matrix.entry(lits).or_default().push(i);
    }
    let interpolating = t.steps.iter().any(|s| s.interpolant.is_some() || s.rule.is_interpolating());
    let ctx = Ctx { trace: t, pos, matrix, interpolating };

    let mut valid = Vec::with_capacity(t.steps.len());
    let mut steps = Vec::with_capacity(t.steps.len());
    for id in 0..t.steps.len() {
        let violation = ctx.check_step(id, &valid).err();
        valid.push(violation.is_none());
        steps.push(StepReport { id, violation });
    }
    let accepted = valid.iter().all(|&b| b);
    let last = t.steps.last().filter(|s| accepted && s.conclusion.clause.is_empty());
    CheckReport {
        steps,
        certified: last.map(|s| s.conclusion.prob.clone()),
        interpolant: last.and_then(|s| s.interpolant.clone()),
    }
}

impl Ctx<'_> {
    fn position(&self, v: Var) -> Result<usize, Violation> {
        self.pos.get(&v).map(|p| p.0).ok_or(Violation::UnboundVariable(v))
    }

    fn check_step(&self, id: StepId, valid: &[bool]) -> Result<(), Violation> {
        let step = &self.trace.steps[id];
        let lits = step.conclusion.clause.literals();
        for w in lits.windows(2) {
            if w[0].var() == w[1].var() {
                return Err(Violation::TautologicalClause);
            }
        }
        for l in lits {
            self.position(l.var())?;
        }
        let p = &step.conclusion.prob;
        if *p < Rational::zero() || *p > Rational::one() {
            return Err(Violation::WrongProbability {
                expected: Box::new(p.clone().clamp(Rational::zero(), Rational::one())),
                found: Box::new(p.clone()),
            });
        }
        for &q in &step.premises {
            if q >= id {
                return Err(Violation::ForwardReference(q));
            }
            if !valid[q] {
                return Err(Violation::InvalidPremise(q));
            }
        }
        if self.interpolating {
            if self.trace.partition.is_none() {
                return Err(Violation::MissingPartition);
            }
            if step.interpolant.is_none() || !step.rule.is_interpolating() {
                return Err(Violation::MissingInterpolant);
            }
        } else if step.interpolant.is_some() {
            return Err(Violation::UnexpectedInterpolant);
        }
        match step.rule {
            Rule::R1 | Rule::R2_1 => self.check_axiom(id),
            Rule::R2 | Rule::R2_2 => self.check_leaf(id),
            Rule::R3 | Rule::R2_3 => self.check_resolution(id),
        }
    }

    fn expect_prob(found: &Rational, expected: Rational) -> Result<(), Violation> {
        if *found == expected {
            Ok(())
        } else {
            Err(Violation::WrongProbability { expected: Box::new(expected), found: Box::new(found.clone()) })
        }
    }

    fn check_axiom(&self, id: StepId) -> Result<(), Violation> {
        let step = &self.trace.steps[id];
        if !step.premises.is_empty() {
            return Err(Violation::WrongPremiseCount);
        }
        let indices = self.matrix.get(step.conclusion.clause.literals()).ok_or(Violation::NotMatrixClause)?;
        Self::expect_prob(&step.conclusion.prob, Rational::zero())?;
        if let Some(i) = &step.interpolant {
            let part = self.trace.partition.as_ref().unwrap();
            // a clause listed on both sides may take either constant
            let ok = indices.iter().any(|&k| {
                let in_a = part.a_clauses().contains(&k);
                *i == FormulaAst::constant(!in_a)
            });
            if !ok {
                return Err(Violation::InterpolantMismatch);
            }
        }
        Ok(())
    }

    fn check_leaf(&self, id: StepId) -> Result<(), Violation> {
        let step = &self.trace.steps[id];
        if !step.premises.is_empty() {
            return Err(Violation::WrongPremiseCount);
        }
        let c = &step.conclusion.clause;
        Self::expect_prob(&step.conclusion.prob, Rational::one())?;
        // ff_c: x ↦ true iff ¬x ∈ c
        let ff: BTreeMap<Var, bool> = c.literals().iter().map(|l| (l.var(), !l.is_positive())).collect();
        let depth = ff.keys().map(|&v| self.pos[&v].0).max();
        let witness = step.witness.as_ref().ok_or(Violation::MissingWitness)?;
        for (v, b) in witness.iter() {
            let at = self.position(v)?;
            if depth.is_none_or(|d| at > d) {
                return Err(Violation::WitnessTooDeep(v));
            }
            if ff.get(&v).is_some_and(|&f| f != b) {
                return Err(Violation::WitnessMismatch(v));
            }
        }
        for &v in ff.keys() {
            if witness.get(v).is_none() {
                return Err(Violation::WitnessMismatch(v));
            }
        }
        for (k, m) in self.trace.formula.matrix().iter().enumerate() {
            let sat = m.literals().iter().any(|l| ff.get(&l.var()).is_some_and(|&b| b == l.is_positive()));
            if !sat {
                return Err(Violation::NotCertified(k));
            }
        }
        if let Some(i) = &step.interpolant {
            let part = self.trace.partition.as_ref().unwrap();
            if let Some(v) = i.vars().into_iter().find(|v| !part.v_ab().contains(v)) {
                return Err(Violation::InterpolantOutsideCommon(v));
            }
        }
        Ok(())
    }

    fn check_resolution(&self, id: StepId) -> Result<(), Violation> {
        let step = &self.trace.steps[id];
        let [l, r] = step.premises[..] else {
            return Err(Violation::WrongPremiseCount);
        };
        let x = step.pivot.ok_or(Violation::MissingPivot)?;
        let (left, right) = (&self.trace.steps[l], &self.trace.steps[r]);
        let (neg, pos) = (Literal::new(x, false), Literal::new(x, true));
        if !left.conclusion.clause.literals().contains(&neg) || !right.conclusion.clause.literals().contains(&pos) {
            return Err(Violation::PivotMissing(x));
        }
        let mut expected: BTreeSet<Literal> = left.conclusion.clause.literals().iter().copied().filter(|&m| m != neg).collect();
        expected.extend(right.conclusion.clause.literals().iter().copied().filter(|&m| m != pos));
        let expected: Vec<Literal> = expected.into_iter().collect();
        if expected != step.conclusion.clause.literals() {
            return Err(Violation::ResolventMismatch { expected: Clause::new(expected) });
        }
        let (at, q) = *self.pos.get(&x).ok_or(Violation::UnboundVariable(x))?;
        if expected.iter().any(|m| self.pos[&m.var()].0 >= at) {
            return Err(Violation::PrefixOrderViolated(x));
        }
        let (p1, p2) = (&left.conclusion.prob, &right.conclusion.prob);
        let value = match q {
            Quantifier::Exists => if p1 >= p2 { p1.clone() } else { p2.clone() },
            Quantifier::Random(px) => px * p1 + (Rational::one() - px) * p2,
        };
        Self::expect_prob(&step.conclusion.prob, value)?;
        if let Some(i) = &step.interpolant {
            let part = self.trace.partition.as_ref().unwrap();
            let i1 = left.interpolant.clone().ok_or(Violation::MissingInterpolant)?;
            let i2 = right.interpolant.clone().ok_or(Violation::MissingInterpolant)?;
            let in_a = part.v_a().contains(&x);
            let in_b = part.v_b().contains(&x);
            let want = if part.v_ab().contains(&x) {
                FormulaAst::And(vec![
                    FormulaAst::Or(vec![FormulaAst::Lit(neg), i1]),
                    FormulaAst::Or(vec![FormulaAst::Lit(pos), i2]),
                ])
            } else if in_b && !in_a {
                FormulaAst::And(vec![i1, i2])
            } else {
                FormulaAst::Or(vec![i1, i2])
            };
            if !same_function(i, &want) {
                return Err(Violation::InterpolantMismatch);
            }
        }
        Ok(())
    }
}

fn same_function(f: &FormulaAst, g: &FormulaAst) -> bool {
    let vars: Vec<Var> = f.vars().union(&g.vars()).copied().collect();
    if vars.len() > TABLE_LIMIT {
        return f.simplify() == g.simplify();
    }
    (0..1u64 << vars.len()).all(|bits| {
        let value = |v: Var| bits >> vars.binary_search(&v).unwrap() & 1 == 1;
        f.eval(&value) == g.eval(&value)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::rational::ratio;
    use crate::logic::{Assignment, Prefix, SsatFormula};
    use crate::sresolution::{AnnotatedClause, DerivationStep};

    fn v(i: u32) -> Var {
        Var::new(i)
    }

    fn cl(lits: &[i64]) -> Clause {
        Clause::from_dimacs(lits)
    }

    fn step(rule: Rule, premises: Vec<usize>, c: &[i64], p: Rational, pivot: Option<u32>) -> DerivationStep {
        let clause = cl(c);
        let witness = (rule == Rule::R2).then(|| Assignment::from_literals(clause.literals().iter().map(|l| l.negate())));
        DerivationStep {
            rule,
            premises,
            conclusion: AnnotatedClause::new(clause, p),
            interpolant: None,
            pivot: pivot.map(v),
            witness,
        }
    }

    pub(crate) fn ex31_trace() -> ProofTrace {
        let prefix = Prefix::from_bindings([
            (v(1), Quantifier::Random(ratio(4, 5))),
            (v(2), Quantifier::Exists),
            (v(3), Quantifier::Random(ratio(3, 10))),
        ])
        .unwrap();
        let f = SsatFormula::new(3, prefix, vec![cl(&[1, 2]), cl(&[-2]), cl(&[2, 3])]).unwrap();
        let mut t = ProofTrace::new(f, None);
        t.push(step(Rule::R2, vec![], &[-1, 2, -3], Rational::one(), None));
        t.push(step(Rule::R1, vec![], &[2, 3], Rational::zero(), None));
        t.push(step(Rule::R3, vec![0, 1], &[-1, 2], ratio(3, 10), Some(3)));
        t.push(step(Rule::R1, vec![], &[-2], Rational::zero(), None));
        t.push(step(Rule::R3, vec![3, 2], &[-1], ratio(3, 10), Some(2)));
        t.push(step(Rule::R1, vec![], &[1, 2], Rational::zero(), None));
        t.push(step(Rule::R3, vec![3, 5], &[1], Rational::zero(), Some(2)));
        t.push(step(Rule::R3, vec![4, 6], &[], ratio(6, 25), Some(1)));
        t
    }

    #[test]
    fn accepts_example() {
        let r = check_proof(&ex31_trace());
        assert!(r.accepted(), "{:?}", r.first_failure());
        assert_eq!(r.certified, Some(ratio(6, 25)));
    }

    #[test]
    fn rejects_altered_annotation() {
        let mut t = ex31_trace();
        t.steps[7].conclusion.prob = ratio(1, 4);
        let r = check_proof(&t);
        assert!(!r.accepted());
        assert_eq!(r.first_failure().map(|(id, _)| id), Some(7));
        assert!(matches!(r.first_failure().unwrap().1, Violation::WrongProbability { .. }));
        assert_eq!(r.certified, None);
    }

    #[test]
    fn rejects_prefix_order_violation() {
        // ∃x1 ∃x2 R^1/2 x3 : (x1 ∨ x3) ∧ (¬x1 ∨ x3); resolving on x1 while x3
        // remains gives (x3)^1, yet Pr of the residual R^1/2 x3 : (x3) is 1/2
        let prefix = Prefix::from_bindings([
            (v(1), Quantifier::Exists),
            (v(2), Quantifier::Exists),
            (v(3), Quantifier::Random(ratio(1, 2))),
        ])
        .unwrap();
        let f = SsatFormula::new(3, prefix, vec![cl(&[1, 3]), cl(&[-1, 3])]).unwrap();
        let mut t = ProofTrace::new(f, None);
        t.push(step(Rule::R2, vec![], &[-1, -3], Rational::one(), None));
        t.push(step(Rule::R2, vec![], &[1, -3], Rational::one(), None));
        t.push(step(Rule::R3, vec![0, 1], &[-3], Rational::one(), Some(1)));
        let r = check_proof(&t);
        assert_eq!(r.first_failure(), Some((2, &Violation::PrefixOrderViolated(v(1)))));
    }

    #[test]
    fn rejects_bad_leaf_and_references() {
        let mut t = ex31_trace();
        t.steps[0].conclusion.clause = cl(&[-1, 2]);
        t.steps[0].witness = Some(Assignment::from_literals([Literal::new(v(1), true), Literal::new(v(2), false)]));
        let r = check_proof(&t);
        assert!(matches!(r.steps[0].violation, Some(Violation::NotCertified(2))));
        assert_eq!(r.steps[2].violation, Some(Violation::InvalidPremise(0)));

        let mut t = ex31_trace();
        t.steps[2].premises = vec![0, 5];
        assert_eq!(check_proof(&t).steps[2].violation, Some(Violation::ForwardReference(5)));
    }
}
