//! The certifying engine.
//!
//! Branches in prefix order, true first. Every node returns a clause falsified
//! by the current assignment together with its annotation (and interpolant):
//! an `R.1` axiom when an assignment falsifies a matrix clause, an `R.2` leaf
//! when all clauses are satisfied, and otherwise the `R.3` resolvent of both
//! branch results on the decision variable. A branch result that does not
//! mention the decision variable is returned as is, without exploring the
//! other branch. All variables of a returned clause are assigned before the
//! decision variable, so the `R.3` side condition always holds.

use num_traits::{One, Zero};

use super::search::Search;
use super::SolveStats;
use crate::logic::{Assignment, Clause, FormulaAst, Literal, Partition, Quantifier, Side, VarClass};
use crate::sresolution::{AnnotatedClause, DerivationStep, ProofTrace, Rule, StepId};
use crate::Rational;

pub(crate) struct Node {
    pub clause: Clause,
    pub prob: Rational,
    pub interpolant: Option<FormulaAst>,
    pub step: Option<StepId>,
}

pub(crate) struct ProofEngine<'a, 'p> {
    search: Search<'a>,
    trace: Option<ProofTrace>,
    partition: Option<&'p Partition>,
    dc: FormulaAst,
    axiom_steps: Vec<Option<StepId>>,
    pub stats: SolveStats,
    depth: usize,
}

impl<'a, 'p> ProofEngine<'a, 'p> {
    pub fn new(search: Search<'a>, record: bool, partition: Option<&'p Partition>, dc: FormulaAst) -> Self {
        let m = search.clauses.len();
        let trace = record.then(|| ProofTrace::new(search.formula.clone(), partition.cloned()));
        ProofEngine { search, trace, partition, dc, axiom_steps: vec![None; m], stats: SolveStats::default(), depth: 0 }
    }

    pub fn run(mut self) -> (Node, Option<ProofTrace>, SolveStats) {
        let root = match self.search.initial_conflict() {
            Some(ci) => self.axiom(ci),
            None => self.node(0),
        };
        debug_assert!(root.clause.is_empty());
        (root, self.trace, self.stats)
    }

    fn record(&mut self, step: DerivationStep) -> Option<StepId> {
        self.trace.as_mut().map(|t| t.push(step))
    }

    fn axiom(&mut self, ci: usize) -> Node {
        let clause = self.search.matrix_clause(ci).clone();
        let interpolant = self.partition.map(|p| match p.side(ci) {
            Side::A => FormulaAst::False,
            Side::B => FormulaAst::True,
        });
        let step = match self.axiom_steps[ci] {
            Some(id) => Some(id),
            None => {
                let rule = if interpolant.is_some() { Rule::R2_1 } else { Rule::R1 };
                let id = self.record(DerivationStep {
                    rule,
                    premises: vec![],
                    conclusion: AnnotatedClause::new(clause.clone(), Rational::zero()),
                    interpolant: interpolant.clone(),
                    pivot: None,
                    witness: None,
                });
                self.axiom_steps[ci] = id;
                id
            }
        };
        Node { clause, prob: Rational::zero(), interpolant, step }
    }

    fn leaf(&mut self) -> Node {
        self.stats.leaves += 1;
        let clause = self.search.satisfied_core();
        let interpolant = self.partition.map(|_| self.dc.clone());
        let step = if self.trace.is_some() {
            let depth = clause.vars().map(|v| self.search.formula.position(v)).max();
            let upto = depth.map_or(0, |d| d + 1);
            let witness: Assignment = (0..upto)
                .filter_map(|p| self.search.value[p].map(|b| (self.search.vars[p], b)))
                .collect();
            let rule = if interpolant.is_some() { Rule::R2_2 } else { Rule::R2 };
            self.record(DerivationStep {
                rule,
                premises: vec![],
                conclusion: AnnotatedClause::new(clause.clone(), Rational::one()),
                interpolant: interpolant.clone(),
                pivot: None,
                witness: Some(witness),
            })
        } else {
            None
        };
        Node { clause, prob: Rational::one(), interpolant, step }
    }

    fn branch(&mut self, pos: usize, b: bool) -> Node {
        let result = match self.search.assign(pos, b) {
            Some(ci) => {
                self.stats.propagations += 1;
                self.axiom(ci)
            }
            None => self.node(pos + 1),
        };
        self.search.unassign(pos);
        result
    }

    fn node(&mut self, pos: usize) -> Node {
        if self.search.open == 0 {
            return self.leaf();
        }
        let q = self.search.next_relevant(pos);
        let x = self.search.vars[q];
        self.stats.decisions += 1;
        self.depth += 1;
        self.stats.peak_depth = self.stats.peak_depth.max(self.depth);
        let on_true = self.branch(q, true);
        if !on_true.clause.contains(Literal::new(x, false)) {
            self.depth -= 1;
            return on_true;
        }
        let on_false = self.branch(q, false);
        self.depth -= 1;
        if !on_false.clause.contains(Literal::new(x, true)) {
            return on_false;
        }
        self.resolve(on_true, on_false, q)
    }

    fn resolve(&mut self, left: Node, right: Node, q: usize) -> Node {
        let x = self.search.vars[q];
        let clause = left.clause.without(x.negative()).union(&right.clause.without(x.positive()));
        let prob = match self.search.quants[q] {
            Quantifier::Exists => left.prob.clone().max(right.prob.clone()),
            Quantifier::Random(p) => p * &left.prob + (Rational::one() - p) * &right.prob,
        };
        let interpolant = match (self.partition, left.interpolant, right.interpolant) {
            (Some(part), Some(i1), Some(i2)) => Some(match part.class(x) {
                VarClass::B => FormulaAst::and2(i1, i2),
                VarClass::Common => FormulaAst::and2(
                    FormulaAst::or2(FormulaAst::lit(x.negative()), i1),
                    FormulaAst::or2(FormulaAst::lit(x.positive()), i2),
                ),
                VarClass::A | VarClass::Unused => FormulaAst::or2(i1, i2),
            }),
            _ => None,
        };
        let step = match (left.step, right.step) {
            (Some(l), Some(r)) => {
                let rule = if interpolant.is_some() { Rule::R2_3 } else { Rule::R3 };
                self.record(DerivationStep {
                    rule,
                    premises: vec![l, r],
                    conclusion: AnnotatedClause::new(clause.clone(), prob.clone()),
                    interpolant: interpolant.clone(),
                    pivot: Some(x),
                    witness: None,
                })
            }
            _ => None,
        };
        Node { clause, prob, interpolant, step }
    }
}
