//! The value engine: no trace, memoized on the residual formula, optional
//! threshold pruning.
//!
//! A node returns an interval `[l, u]` containing its value such that either
//! `l = u`, or `u ≤ lo`, or `l ≥ hi` for the thresholds it was called with.
//! An absent threshold never prunes. Existential nodes always pass the value
//! of their first branch as the lower threshold of the second.

use std::collections::HashMap;

use num_traits::{One, Zero};

use super::search::Search;
use super::SolveStats;
use crate::logic::Quantifier;
use crate::Rational;

type Bound = Option<Rational>;

pub(crate) struct ValueEngine<'a> {
    search: Search<'a>,
    // (decision position, open clauses) -> exact value
    memo: HashMap<(usize, Vec<u64>), Rational>,
    pub stats: SolveStats,
    depth: usize,
}

fn point(v: Rational) -> (Rational, Rational) {
    (v.clone(), v)
}

impl<'a> ValueEngine<'a> {
    pub fn new(search: Search<'a>) -> Self {
        ValueEngine { search, memo: HashMap::new(), stats: SolveStats::default(), depth: 0 }
    }

    pub fn run(mut self, lo: Bound, hi: Bound) -> ((Rational, Rational), SolveStats) {
        let r = if self.search.initial_conflict().is_some() { point(Rational::zero()) } else { self.eval(0, &lo, &hi) };
        (r, self.stats)
    }

    fn branch(&mut self, pos: usize, b: bool, lo: &Bound, hi: &Bound) -> (Rational, Rational) {
        let r = match self.search.assign(pos, b) {
            Some(_) => {
                self.stats.propagations += 1;
                point(Rational::zero())
            }
            None => self.eval(pos + 1, lo, hi),
        };
        self.search.unassign(pos);
        r
    }

    fn eval(&mut self, pos: usize, lo: &Bound, hi: &Bound) -> (Rational, Rational) {
        if self.search.open == 0 {
            self.stats.leaves += 1;
            return point(Rational::one());
        }
        let q = self.search.next_relevant(pos);
        let key = (q, self.search.open_bits.clone());
        if let Some(v) = self.memo.get(&key) {
            self.stats.memo_hits += 1;
            return point(v.clone());
        }
        self.stats.decisions += 1;
        self.depth += 1;
        self.stats.peak_depth = self.stats.peak_depth.max(self.depth);
        let one = Rational::one();
        let (l, u) = match self.search.quants[q] {
            Quantifier::Exists => {
                let (l1, u1) = self.branch(q, true, lo, hi);
                if hi.as_ref().is_some_and(|h| l1 >= *h) {
                    self.depth -= 1;
                    return (l1, one);
                }
                let lo2 = Some(match lo {
                    Some(x) if *x > l1 => x.clone(),
                    _ => l1.clone(),
                });
                let (l2, u2) = self.branch(q, false, &lo2, hi);
                (l1.max(l2), u1.max(u2))
            }
            Quantifier::Random(p) => {
                let p = (*p).clone();
                let qn = &one - &p;
                // the true branch decides alone if p·u1 + (1−p) ≤ lo or p·l1 ≥ hi
                let lo_t = lo.as_ref().map(|x| (x - &qn) / &p).filter(|x| *x >= Rational::zero());
                let hi_t = hi.as_ref().map(|x| x / &p).filter(|x| *x <= one);
                let (l1, u1) = self.branch(q, true, &lo_t, &hi_t);
                let best = &p * &u1 + &qn;
                let worst = &p * &l1;
                if lo.as_ref().is_some_and(|x| best <= *x) || hi.as_ref().is_some_and(|x| worst >= *x) {
                    self.depth -= 1;
                    return (worst, best);
                }
                let lo_f = lo.as_ref().map(|x| (x - &p * &u1) / &qn).filter(|x| *x >= Rational::zero());
                let hi_f = hi.as_ref().map(|x| (x - &p * &l1) / &qn).filter(|x| *x <= one);
                let (l2, u2) = self.branch(q, false, &lo_f, &hi_f);
                (&p * l1 + &qn * l2, &p * u1 + &qn * u2)
            }
        };
        self.depth -= 1;
        if l == u {
            self.memo.insert(key, l.clone());
        }
        (l, u)
    }
}
