//! Ground truth by brute force.
//!
//! Everything here is deliberately naive: SSAT values come straight from the
//! quantifier recursion, projections and interpolant checks from enumerating
//! assignments, and MDP quantities from explicit-state recursions. The other
//! modules are tested against these functions.

pub mod mdp;

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::logic::{Clause, FormulaAst, Partition, Quantifier, SsatFormula, Var};
use crate::Rational;

pub use mdp::{
    mdp_backward_set, mdp_is_invariant, mdp_max_avoid_bounded, mdp_max_kernel, mdp_max_reach_bounded, mdp_max_reach_sequence,
    mdp_min_reach_bounded, mdp_min_reach_sequence,
};

pub const DEFAULT_CAP: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{vars} variables exceed the oracle cap of {cap}")]
    TooLarge { vars: usize, cap: usize },
}

/// Variable cap, overridable through `SSATC_ORACLE_CAP`.
pub fn oracle_cap() -> usize {
    std::env::var("SSATC_ORACLE_CAP").ok().and_then(|s| s.parse().ok()).unwrap_or(DEFAULT_CAP)
}

/// `Pr(Φ)` with the default cap.
pub fn exact_pr(f: &SsatFormula) -> Result<Rational, OracleError> {
    exact_pr_capped(f, oracle_cap())
}

/// `Pr(Φ)` by the quantifier recursion: max over the branches of `∃`,
/// `p·left + (1−p)·right` for `R^p`.
///
/// A subtree is cut short when the partial assignment already decides the
/// matrix, and a variable that occurs in no undecided clause is expanded once
/// since both of its branches have the same value.
pub fn exact_pr_capped(f: &SsatFormula, cap: usize) -> Result<Rational, OracleError> {
    let n = f.prefix().len();
    if n > cap {
        return Err(OracleError::TooLarge { vars: n, cap });
    }
    let mut tau = vec![None; f.num_vars() as usize + 1];
    Ok(recurse(f, 0, &mut tau))
}

#[derive(PartialEq)]
enum Status {
    Sat,
    Unsat,
    Open,
}

fn clause_status(c: &Clause, tau: &[Option<bool>]) -> Status {
    let mut open = false;
    for l in c.literals() {
        match tau[l.var().index() as usize] {
            Some(v) if l.eval(v) => return Status::Sat,
            Some(_) => {}
            None => open = true,
        }
    }
    if open {
        Status::Open
    } else {
        Status::Unsat
    }
}

fn recurse(f: &SsatFormula, pos: usize, tau: &mut Vec<Option<bool>>) -> Rational {
    let mut open: Vec<&Clause> = Vec::new();
    for c in f.matrix() {
        match clause_status(c, tau) {
            Status::Unsat => return Rational::zero(),
            Status::Open => open.push(c),
            Status::Sat => {}
        }
    }
    if open.is_empty() {
        return Rational::one();
    }
    let bindings = f.prefix().bindings();
    let mut pos = pos;
    loop {
        let (x, _) = &bindings[pos];
        let relevant = open.iter().any(|c| c.vars().any(|v| v == *x));
        if relevant {
            break;
        }
        pos += 1;
    }
    let (x, q) = &bindings[pos];
    let idx = x.index() as usize;
    tau[idx] = Some(true);
    let hi = recurse(f, pos + 1, tau);
    tau[idx] = Some(false);
    let lo = recurse(f, pos + 1, tau);
    tau[idx] = None;
    combine(q, hi, lo)
}

fn combine(q: &Quantifier, on_true: Rational, on_false: Rational) -> Rational {
    match q {
        Quantifier::Exists => on_true.max(on_false),
        Quantifier::Random(p) => p * on_true + (Rational::one() - p) * on_false,
    }
}

/// `Pr(Φ)` by evaluating the matrix on all `2^n` total assignments and folding
/// the leaf values up the quantifier tree. Independent of [`exact_pr`].
pub fn exact_pr_enumerate(f: &SsatFormula) -> Result<Rational, OracleError> {
    let b = f.prefix().bindings();
    let n = b.len();
    let cap = 20.min(oracle_cap());
    if n > cap {
        return Err(OracleError::TooLarge { vars: n, cap });
    }
    // leaf index: bit (n-1-i) holds the value of binding i, 1 = true
    let mut level: Vec<Rational> = (0..1usize << n)
        .map(|leaf| {
            let val = |v: Var| {
                let i = f.position(v);
                leaf >> (n - 1 - i) & 1 == 1
            };
            let sat = f.matrix().iter().all(|c| c.literals().iter().any(|l| l.eval(val(l.var()))));
            if sat {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
        .collect();
    for i in (0..n).rev() {
        // pairs (2j, 2j+1) differ in binding i: odd index has it true
        level = level.chunks(2).map(|pair| combine(&b[i].1, pair[1].clone(), pair[0].clone())).collect();
    }
    Ok(level.pop().unwrap())
}

/// A Boolean function tabulated over an ordered variable list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruthTable {
    vars: Vec<Var>,
    bits: Vec<bool>,
}

impl TruthTable {
    /// Bit `k` of `index` is the value of `vars[k]`.
    pub fn from_fn(vars: Vec<Var>, mut f: impl FnMut(&dyn Fn(Var) -> bool) -> bool) -> TruthTable {
        let n = vars.len();
        let bits = (0..1usize << n)
            .map(|idx| {
                let lookup = |v: Var| {
                    let k = vars.iter().position(|&w| w == v).expect("variable of the table");
                    idx >> k & 1 == 1
                };
                f(&lookup)
            })
            .collect();
        TruthTable { vars, bits }
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Value under an assignment that covers the table's variables.
    pub fn eval(&self, value: &impl Fn(Var) -> bool) -> bool {
        let idx = self.vars.iter().enumerate().fold(0usize, |acc, (k, &v)| acc | (value(v) as usize) << k);
        self.bits[idx]
    }

    pub fn is_const(&self, b: bool) -> bool {
        self.bits.iter().all(|&x| x == b)
    }
}

fn satisfies(clauses: &[&Clause], value: &impl Fn(Var) -> bool) -> bool {
    clauses.iter().all(|c| c.literals().iter().any(|l| l.eval(value(l.var()))))
}

fn check_size(n: usize) -> Result<(), OracleError> {
    let cap = oracle_cap();
    if n > cap {
        Err(OracleError::TooLarge { vars: n, cap })
    } else {
        Ok(())
    }
}

/// Existential projection of `A ∧ B` onto the common variables.
pub fn project_common(a: &[Clause], b: &[Clause], part: &Partition) -> Result<TruthTable, OracleError> {
    let common: Vec<Var> = part.v_ab().iter().copied().collect();
    let local: Vec<Var> = part.v_a().iter().chain(part.v_b().iter()).copied().collect();
    check_size(common.len() + local.len())?;
    let all: Vec<&Clause> = a.iter().chain(b.iter()).collect();
    Ok(TruthTable::from_fn(common, |shared| {
        (0..1usize << local.len()).any(|ext| {
            let value = |v: Var| match local.iter().position(|&w| w == v) {
                Some(k) => ext >> k & 1 == 1,
                None => shared(v),
            };
            satisfies(&all, &value)
        })
    }))
}

/// Checks that `I` mentions only common variables and that both
/// `A ∧ ¬S ∧ ¬I` and `I ∧ B ∧ ¬S` are unsatisfiable, where `S` is the
/// projection of `A ∧ B` onto the common variables.
pub fn is_generalized_interpolant(i: &FormulaAst, f: &SsatFormula, part: &Partition) -> Result<bool, OracleError> {
    if !i.vars().is_subset(part.v_ab()) {
        return Ok(false);
    }
    let a: Vec<Clause> = part.a_clauses().iter().map(|&k| f.matrix()[k].clone()).collect();
    let b: Vec<Clause> = part.b_clauses().iter().map(|&k| f.matrix()[k].clone()).collect();
    let s = project_common(&a, &b, part)?;
    let a_refs: Vec<&Clause> = a.iter().collect();
    let b_refs: Vec<&Clause> = b.iter().collect();
    let vars: Vec<Var> = part.v_ab().iter().chain(part.v_a()).chain(part.v_b()).copied().collect::<BTreeSet<_>>().into_iter().collect();
    check_size(vars.len())?;
    for idx in 0..1usize << vars.len() {
        let value = |v: Var| {
            let k = vars.iter().position(|&w| w == v).expect("variable of A or B");
            idx >> k & 1 == 1
        };
        if s.eval(&value) {
            continue;
        }
        let iv = i.eval(&value);
        if !iv && satisfies(&a_refs, &value) {
            return Ok(false);
        }
        if iv && satisfies(&b_refs, &value) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `P ∧ ¬Q` unsatisfiable over all assignments of `vars`.
pub fn implies_by_enumeration(p: &FormulaAst, q: &FormulaAst, vars: &[Var]) -> Result<bool, OracleError> {
    check_size(vars.len())?;
    Ok((0..1usize << vars.len()).all(|idx| {
        let value = |v: Var| {
            let k = vars.iter().position(|&w| w == v).expect("variable listed");
            idx >> k & 1 == 1
        };
        !p.eval(&value) || q.eval(&value)
    }))
}

/// Truth-table equivalence over the union of both formulas' variables.
pub fn equivalent(p: &FormulaAst, q: &FormulaAst) -> Result<bool, OracleError> {
    let vars: Vec<Var> = p.vars().union(&q.vars()).copied().collect();
    Ok(implies_by_enumeration(p, q, &vars)? && implies_by_enumeration(q, p, &vars)?)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::logic::rational::ratio;
    use crate::logic::{partitioned_formula, Literal, Prefix};

    fn v(i: u32) -> Var {
        Var::new(i)
    }

    pub(crate) fn ex31() -> SsatFormula {
        let prefix = Prefix::from_bindings([
            (v(1), Quantifier::Random(ratio(4, 5))),
            (v(2), Quantifier::Exists),
            (v(3), Quantifier::Random(ratio(3, 10))),
        ])
        .unwrap();
        SsatFormula::new(3, prefix, vec![Clause::from_dimacs(&[1, 2]), Clause::from_dimacs(&[-2]), Clause::from_dimacs(&[2, 3])]).unwrap()
    }

    pub(crate) fn ex32() -> (SsatFormula, Partition) {
        // a=1 x=2 y=3 b=4
        let prefix = Prefix::from_bindings([
            (v(1), Quantifier::Random(ratio(4, 5))),
            (v(2), Quantifier::Exists),
            (v(3), Quantifier::Random(ratio(1, 2))),
            (v(4), Quantifier::Random(ratio(3, 10))),
        ])
        .unwrap();
        partitioned_formula(
            4,
            prefix,
            vec![Clause::from_dimacs(&[3]), Clause::from_dimacs(&[1, -2])],
            vec![Clause::from_dimacs(&[2]), Clause::from_dimacs(&[-3, 4])],
        )
        .unwrap()
    }

    #[test]
    fn exact_pr_examples() {
        assert_eq!(exact_pr(&ex31()).unwrap(), ratio(6, 25));
        assert_eq!(exact_pr_enumerate(&ex31()).unwrap(), ratio(6, 25));
        let (f, _) = ex32();
        assert_eq!(exact_pr(&f).unwrap(), ratio(3, 25));
        assert_eq!(exact_pr_enumerate(&f).unwrap(), ratio(3, 25));
        let empty = SsatFormula::new(1, Prefix::from_bindings([(v(1), Quantifier::Exists)]).unwrap(), vec![]).unwrap();
        assert_eq!(exact_pr(&empty).unwrap(), Rational::one());
    }

    #[test]
    fn cap_is_enforced() {
        assert_eq!(exact_pr_capped(&ex31(), 2), Err(OracleError::TooLarge { vars: 3, cap: 2 }));
    }

    #[test]
    fn projection_examples() {
        // A=(a), B=(b): nothing shared, A ∧ B satisfiable
        let m = vec![Clause::from_dimacs(&[1]), Clause::from_dimacs(&[2])];
        let part = Partition::new(&m, [0]).unwrap();
        let s = project_common(&m[..1], &m[1..], &part).unwrap();
        assert!(s.vars().is_empty() && s.is_const(true));

        let (f, part) = ex32();
        let s = project_common(&f.matrix()[..2], &f.matrix()[2..], &part).unwrap();
        assert_eq!(s.vars(), &[v(2), v(3)]);
        // only x = y = true
        assert_eq!(s.bits(), &[false, false, false, true]);

        let m = vec![Clause::from_dimacs(&[1]), Clause::from_dimacs(&[-1]), Clause::from_dimacs(&[1, 2])];
        let part = Partition::new(&m, [0, 1]).unwrap();
        assert!(project_common(&m[..2], &m[2..], &part).unwrap().is_const(false));
    }

    #[test]
    fn interpolant_validity_examples() {
        let (f, part) = ex32();
        let not_x = FormulaAst::lit(Literal::new(v(2), false));
        let i1 = FormulaAst::or([not_x.clone(), FormulaAst::var(v(3))]);
        assert!(is_generalized_interpolant(&i1, &f, &part).unwrap());
        assert!(is_generalized_interpolant(&not_x, &f, &part).unwrap());
        assert!(!is_generalized_interpolant(&FormulaAst::var(v(1)), &f, &part).unwrap());
        // too strong: A ∧ ¬S ∧ ¬I has the model a, ¬x, y
        assert!(!is_generalized_interpolant(&FormulaAst::False, &f, &part).unwrap());
    }
}
