//! Assignment state with incremental clause counters, indexed by prefix position.

use crate::logic::{Clause, Literal, Quantifier, SsatFormula, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct PosLit {
    pub pos: usize,
    pub positive: bool,
}

pub(crate) struct Search<'a> {
    pub formula: &'a SsatFormula,
    pub vars: Vec<Var>,
    pub quants: Vec<&'a Quantifier>,
    pub clauses: Vec<Vec<PosLit>>,
    occ: Vec<Vec<(usize, bool)>>,
    pub value: Vec<Option<bool>>,
    n_true: Vec<u32>,
    n_false: Vec<u32>,
    /// Per position: open clauses (no true literal) mentioning it.
    active: Vec<u32>,
    /// Number of open clauses.
    pub open: usize,
    /// Bitset of open clauses.
    pub open_bits: Vec<u64>,
}

impl<'a> Search<'a> {
    pub fn new(formula: &'a SsatFormula) -> Search<'a> {
        let bindings = formula.prefix().bindings();
        let n = bindings.len();
        let clauses: Vec<Vec<PosLit>> = formula
            .matrix()
            .iter()
            .map(|c| c.literals().iter().map(|l| PosLit { pos: formula.position(l.var()), positive: l.is_positive() }).collect())
            .collect();
        let mut occ = vec![Vec::new(); n];
        let mut active = vec![0; n];
        for (ci, c) in clauses.iter().enumerate() {
            for l in c {
                occ[l.pos].push((ci, l.positive));
                active[l.pos] += 1;
            }
        }
        let m = clauses.len();
        let mut open_bits = vec![0u64; m.div_ceil(64)];
        for ci in 0..m {
            open_bits[ci / 64] |= 1 << (ci % 64);
        }
        Search {
            formula,
            vars: bindings.iter().map(|(v, _)| *v).collect(),
            quants: bindings.iter().map(|(_, q)| q).collect(),
            occ,
            value: vec![None; n],
            n_true: vec![0; m],
            n_false: vec![0; m],
            active,
            open: m,
            open_bits,
            clauses,
        }
    }

    /// Index of a matrix clause that is already empty.
    pub fn initial_conflict(&self) -> Option<usize> {
        self.clauses.iter().position(Vec::is_empty)
    }

    /// Sets a variable; returns the first clause this falsifies, if any.
    pub fn assign(&mut self, pos: usize, b: bool) -> Option<usize> {
        debug_assert!(self.value[pos].is_none());
        self.value[pos] = Some(b);
        let mut conflict = None;
        for k in 0..self.occ[pos].len() {
            let (ci, positive) = self.occ[pos][k];
            if positive == b {
                self.n_true[ci] += 1;
                if self.n_true[ci] == 1 {
                    self.open -= 1;
                    self.open_bits[ci / 64] &= !(1 << (ci % 64));
                    for l in &self.clauses[ci] {
                        self.active[l.pos] -= 1;
                    }
                }
            } else {
                self.n_false[ci] += 1;
                if conflict.is_none() && self.n_true[ci] == 0 && self.n_false[ci] as usize == self.clauses[ci].len() {
                    conflict = Some(ci);
                }
            }
        }
        conflict
    }

    pub fn unassign(&mut self, pos: usize) {
        let b = self.value[pos].take().expect("assigned");
        for k in 0..self.occ[pos].len() {
            let (ci, positive) = self.occ[pos][k];
            if positive == b {
                self.n_true[ci] -= 1;
                if self.n_true[ci] == 0 {
                    self.open += 1;
                    self.open_bits[ci / 64] |= 1 << (ci % 64);
                    for l in &self.clauses[ci] {
                        self.active[l.pos] += 1;
                    }
                }
            } else {
                self.n_false[ci] -= 1;
            }
        }
    }

    /// First position at or after `pos` that still occurs in an open clause.
    /// Skipped variables can take either value without changing the result.
    pub fn next_relevant(&self, mut pos: usize) -> usize {
        while self.value[pos].is_some() || self.active[pos] == 0 {
            pos += 1;
        }
        pos
    }

    pub fn literal(&self, l: PosLit) -> Literal {
        Literal::new(self.vars[l.pos], l.positive)
    }

    /// The matrix clause as stored in the formula.
    pub fn matrix_clause(&self, ci: usize) -> &'a Clause {
        &self.formula.matrix()[ci]
    }

    /// With every clause satisfied: the negation of each clause's earliest
    /// true literal. Its falsifying assignment alone satisfies the matrix.
    pub fn satisfied_core(&self) -> Clause {
        Clause::new(self.clauses.iter().map(|c| {
            let l = c
                .iter()
                .filter(|l| self.value[l.pos] == Some(l.positive))
                .min_by_key(|l| l.pos)
                .expect("clause satisfied");
            self.literal(*l).negate()
        }))
    }
}
