use num_traits::{One, Zero};

use super::{AnnotatedClause, DcPolicy, RuleError};
use crate::logic::{Clause, FormulaAst, Literal, Partition, Quantifier, Side, SsatFormula, Var, VarClass};
use crate::Rational;

fn matrix_index(c: &Clause, f: &SsatFormula) -> Result<usize, RuleError> {
    f.matrix().iter().position(|m| m == c).ok_or_else(|| RuleError::NotAMatrixClause(c.clone()))
}

fn check_bound(c: &Clause, f: &SsatFormula) -> Result<(), RuleError> {
    match c.vars().find(|&v| f.quantifier(v).is_none()) {
        Some(v) => Err(RuleError::UnboundVariable(v)),
        None => Ok(()),
    }
}

/// `c^0` for a matrix clause.
pub fn apply_r1(c: &Clause, f: &SsatFormula) -> Result<AnnotatedClause, RuleError> {
    matrix_index(c, f)?;
    Ok(AnnotatedClause::new(c.clone(), Rational::zero()))
}

/// `c^1` when every extension of `ff_c` over the prefix up to `c`'s innermost
/// variable satisfies the matrix by assigned literals alone. That holds iff
/// every matrix clause contains a literal made true by `ff_c`.
pub fn apply_r2(c: &Clause, f: &SsatFormula) -> Result<AnnotatedClause, RuleError> {
    if c.is_tautological() {
        return Err(RuleError::TautologicalClause(c.clone()));
    }
    check_bound(c, f)?;
    let covered = f.matrix().iter().all(|m| m.literals().iter().any(|&l| c.contains(l.negate())));
    if !covered {
        return Err(RuleError::PremiseViolated(c.clone()));
    }
    Ok(AnnotatedClause::new(c.clone(), Rational::one()))
}

/// Resolves `left = (c1 ∨ ¬x)^{p1}` with `right = (c2 ∨ x)^{p2}` on `x`.
pub fn apply_r3(
    left: &AnnotatedClause,
    right: &AnnotatedClause,
    pivot: Var,
    f: &SsatFormula,
) -> Result<AnnotatedClause, RuleError> {
    let neg = pivot.negative();
    let pos = pivot.positive();
    if !left.clause.contains(neg) || !right.clause.contains(pos) {
        return Err(RuleError::PivotMissing(pivot));
    }
    let resolvent = left.clause.without(neg).union(&right.clause.without(pos));
    if resolvent.is_tautological() {
        return Err(RuleError::TautologicalResolvent(resolvent));
    }
    check_bound(&resolvent, f)?;
    let q = f.quantifier(pivot).ok_or(RuleError::UnboundVariable(pivot))?;
    let at = f.position(pivot);
    if resolvent.vars().any(|v| f.position(v) >= at) {
        return Err(RuleError::PrefixOrderViolated(pivot));
    }
    let prob = match q {
        Quantifier::Exists => left.prob.clone().max(right.prob.clone()),
        Quantifier::Random(p) => p * &left.prob + (Rational::one() - p) * &right.prob,
    };
    Ok(AnnotatedClause::new(resolvent, prob))
}

/// `R.1` with interpolant `false` for an A-clause and `true` for a B-clause.
pub fn apply_r2_1(c: &Clause, f: &SsatFormula, part: &Partition) -> Result<(AnnotatedClause, FormulaAst), RuleError> {
    let idx = matrix_index(c, f)?;
    let ac = apply_r1(c, f)?;
    let i = match part.side(idx) {
        Side::A => FormulaAst::False,
        Side::B => FormulaAst::True,
    };
    Ok((ac, i))
}

/// `R.2` with the don't-care interpolant.
pub fn apply_r2_2(
    c: &Clause,
    f: &SsatFormula,
    part: &Partition,
    dc: &DcPolicy,
) -> Result<(AnnotatedClause, FormulaAst), RuleError> {
    let i = dc.formula();
    if let Some(v) = i.vars().into_iter().find(|v| !part.v_ab().contains(v)) {
        return Err(RuleError::DcPolicyVariablesOutsideCommon(v));
    }
    Ok((apply_r2(c, f)?, i))
}

/// `R.3` combining the premise interpolants by the pivot's partition class.
pub fn apply_r2_3(
    left: (&AnnotatedClause, &FormulaAst),
    right: (&AnnotatedClause, &FormulaAst),
    pivot: Var,
    f: &SsatFormula,
    part: &Partition,
) -> Result<(AnnotatedClause, FormulaAst), RuleError> {
    let ac = apply_r3(left.0, right.0, pivot, f)?;
    let (i1, i2) = (left.1.clone(), right.1.clone());
    let i = match part.class(pivot) {
        VarClass::A => FormulaAst::or2(i1, i2),
        VarClass::B => FormulaAst::and2(i1, i2),
        VarClass::Common => FormulaAst::and2(
            FormulaAst::or2(FormulaAst::lit(Literal::new(pivot, false)), i1),
            FormulaAst::or2(FormulaAst::var(pivot), i2),
        ),
        // a pivot that occurs in no clause: both premises are derived without it
        VarClass::Unused => FormulaAst::or2(i1, i2),
    };
    Ok((ac, i))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::rational::ratio;
    use crate::logic::{partitioned_formula, Prefix};

    fn v(i: u32) -> Var {
        Var::new(i)
    }

    fn cl(lits: &[i64]) -> Clause {
        Clause::from_dimacs(lits)
    }

    fn ex31() -> SsatFormula {
        let prefix = Prefix::from_bindings([
            (v(1), Quantifier::Random(ratio(4, 5))),
            (v(2), Quantifier::Exists),
            (v(3), Quantifier::Random(ratio(3, 10))),
        ])
        .unwrap();
        SsatFormula::new(3, prefix, vec![cl(&[1, 2]), cl(&[-2]), cl(&[2, 3])]).unwrap()
    }

    #[test]
    fn example_derivation() {
        let f = ex31();
        let a = apply_r1(&cl(&[1, 2]), &f).unwrap();
        let b = apply_r1(&cl(&[-2]), &f).unwrap();
        let c = apply_r1(&cl(&[2, 3]), &f).unwrap();
        assert_eq!(a.prob, Rational::zero());
        let d = apply_r2(&cl(&[-1, 2, -3]), &f).unwrap();
        assert_eq!(d.prob, Rational::one());
        let e = apply_r3(&d, &c, v(3), &f).unwrap();
        assert_eq!(e, AnnotatedClause::new(cl(&[-1, 2]), ratio(3, 10)));
        let g = apply_r3(&b, &e, v(2), &f).unwrap();
        assert_eq!(g, AnnotatedClause::new(cl(&[-1]), ratio(3, 10)));
        let h = apply_r3(&b, &a, v(2), &f).unwrap();
        assert_eq!(h, AnnotatedClause::new(cl(&[1]), Rational::zero()));
        let root = apply_r3(&g, &h, v(1), &f).unwrap();
        assert_eq!(root, AnnotatedClause::new(Clause::empty(), ratio(6, 25)));
    }

    #[test]
    fn rule_errors() {
        let f = ex31();
        assert_eq!(apply_r1(&cl(&[1, 3]), &f), Err(RuleError::NotAMatrixClause(cl(&[1, 3]))));
        let g = SsatFormula::new(1, Prefix::from_bindings([(v(1), Quantifier::Exists)]).unwrap(), vec![cl(&[1])]).unwrap();
        assert_eq!(apply_r2(&cl(&[1]), &g), Err(RuleError::PremiseViolated(cl(&[1]))));
        let a = AnnotatedClause::new(cl(&[-2]), Rational::zero());
        let b = AnnotatedClause::new(cl(&[1, 3]), Rational::zero());
        assert_eq!(apply_r3(&a, &b, v(2), &f), Err(RuleError::PivotMissing(v(2))));
        // x1 resolved while x3, bound later, stays in the resolvent
        let l = AnnotatedClause::new(cl(&[-1, 3]), Rational::one());
        let r = AnnotatedClause::new(cl(&[1, 3]), Rational::zero());
        assert_eq!(apply_r3(&l, &r, v(1), &f), Err(RuleError::PrefixOrderViolated(v(1))));
        let l = AnnotatedClause::new(cl(&[-1, 2]), Rational::one());
        let r = AnnotatedClause::new(cl(&[1, -2]), Rational::zero());
        assert!(matches!(apply_r3(&l, &r, v(1), &f), Err(RuleError::TautologicalResolvent(_))));
    }

    #[test]
    fn interpolating_rules() {
        // a=1 x=2 y=3 b=4
        let prefix = Prefix::from_bindings([
            (v(1), Quantifier::Random(ratio(4, 5))),
            (v(2), Quantifier::Exists),
            (v(3), Quantifier::Random(ratio(1, 2))),
            (v(4), Quantifier::Random(ratio(3, 10))),
        ])
        .unwrap();
        let (f, part) = partitioned_formula(4, prefix, vec![cl(&[3]), cl(&[1, -2])], vec![cl(&[2]), cl(&[-3, 4])]).unwrap();
        assert_eq!(apply_r2_1(&cl(&[3]), &f, &part).unwrap().1, FormulaAst::False);
        assert_eq!(apply_r2_1(&cl(&[2]), &f, &part).unwrap().1, FormulaAst::True);
        let (leaf, dc) = apply_r2_2(&cl(&[-1, -2, -3, -4]), &f, &part, &DcPolicy::ConstTrue).unwrap();
        assert_eq!((leaf.prob.clone(), dc), (Rational::one(), FormulaAst::True));
        assert_eq!(
            apply_r2_2(&cl(&[-1, -2, -3, -4]), &f, &part, &DcPolicy::Custom(FormulaAst::var(v(1)))),
            Err(RuleError::DcPolicyVariablesOutsideCommon(v(1)))
        );
        // y ∈ V_AB: (¬y ∨ I1) ∧ (y ∨ I2)
        let (yb, ib) = apply_r2_1(&cl(&[-3, 4]), &f, &part).unwrap();
        let (b_leaf, _) = apply_r2_2(&cl(&[-1, -2, -3, -4]), &f, &part, &DcPolicy::ConstTrue).unwrap();
        let (res, i) = apply_r2_3((&b_leaf, &FormulaAst::True), (&yb, &ib), v(4), &f, &part).unwrap();
        assert_eq!(res, AnnotatedClause::new(cl(&[-1, -2, -3]), ratio(3, 10)));
        assert_eq!(i, FormulaAst::True);
        let (ya, ia) = apply_r2_1(&cl(&[3]), &f, &part).unwrap();
        let (res, i) = apply_r2_3((&res, &i), (&ya, &ia), v(3), &f, &part).unwrap();
        assert_eq!(res.clause, cl(&[-1, -2]));
        assert_eq!(i, FormulaAst::var(v(3)));
    }
}
