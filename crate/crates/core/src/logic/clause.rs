use std::collections::BTreeMap;
use std::fmt;

use super::LogicError;

/// A propositional variable, 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(u32);

impl Var {
    pub fn new(index: u32) -> Var {
        assert!(index > 0, "variables are 1-based");
        Var(index)
    }

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn positive(self) -> Literal {
        Literal::new(self, true)
    }

    pub fn negative(self) -> Literal {
        Literal::new(self, false)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

/// `x` or `¬x`. Ordered by variable first, then `¬x` before `x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    var: Var,
    positive: bool,
}

impl Literal {
    pub fn new(var: Var, positive: bool) -> Literal {
        Literal { var, positive }
    }

    /// DIMACS style: `3` is `x3`, `-3` is `¬x3`.
    pub fn from_dimacs(code: i64) -> Literal {
        assert!(code != 0);
        Literal::new(Var::new(code.unsigned_abs() as u32), code > 0)
    }

    pub fn to_dimacs(self) -> i64 {
        let v = self.var.0 as i64;
        if self.positive {
            v
        } else {
            -v
        }
    }

    pub fn var(self) -> Var {
        self.var
    }

    pub fn is_positive(self) -> bool {
        self.positive
    }

    pub fn negate(self) -> Literal {
        Literal { var: self.var, positive: !self.positive }
    }

    /// Truth value of the literal when its variable has value `value`.
    pub fn eval(self, value: bool) -> bool {
        value == self.positive
    }
}

impl std::ops::Not for Literal {
    type Output = Literal;
    fn not(self) -> Literal {
        self.negate()
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "{}", self.var)
        } else {
            write!(f, "¬{}", self.var)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Truth {
    True,
    False,
    Undetermined,
}

/// A disjunction of literals, stored sorted and without duplicates.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Clause(Vec<Literal>);

impl Clause {
    pub fn new(literals: impl IntoIterator<Item = Literal>) -> Clause {
        let mut lits: Vec<Literal> = literals.into_iter().collect();
        lits.sort_unstable();
        lits.dedup();
        Clause(lits)
    }

    pub fn empty() -> Clause {
        Clause(Vec::new())
    }

    pub fn from_dimacs(codes: &[i64]) -> Clause {
        Clause::new(codes.iter().map(|&c| Literal::from_dimacs(c)))
    }

    pub fn literals(&self) -> &[Literal] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, lit: Literal) -> bool {
        self.0.binary_search(&lit).is_ok()
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.0.iter().map(|l| l.var())
    }

    pub fn is_tautological(&self) -> bool {
        // sorted by variable, so complementary literals are adjacent
        self.0.windows(2).any(|w| w[0].var() == w[1].var())
    }

    /// The clause without `lit`.
    pub fn without(&self, lit: Literal) -> Clause {
        Clause(self.0.iter().copied().filter(|&l| l != lit).collect())
    }

    /// Union of the literal sets.
    pub fn union(&self, other: &Clause) -> Clause {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Clause(out)
    }

    pub fn to_dimacs(&self) -> Vec<i64> {
        self.0.iter().map(|l| l.to_dimacs()).collect()
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "∅");
        }
        write!(f, "(")?;
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ∨ ")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, ")")
    }
}

/// A partial map from variables to truth values.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment(BTreeMap<Var, bool>);

impl Assignment {
    pub fn new() -> Assignment {
        Assignment(BTreeMap::new())
    }

    pub fn get(&self, var: Var) -> Option<bool> {
        self.0.get(&var).copied()
    }

    pub fn set(&mut self, var: Var, value: bool) {
        self.0.insert(var, value);
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, bool)> + '_ {
        self.0.iter().map(|(&v, &b)| (v, b))
    }

    /// The literals made true by this assignment.
    pub fn literals(&self) -> Vec<Literal> {
        self.iter().map(|(v, b)| Literal::new(v, b)).collect()
    }

    pub fn from_literals(lits: impl IntoIterator<Item = Literal>) -> Assignment {
        Assignment(lits.into_iter().map(|l| (l.var(), l.is_positive())).collect())
    }
}

impl FromIterator<(Var, bool)> for Assignment {
    fn from_iter<I: IntoIterator<Item = (Var, bool)>>(iter: I) -> Self {
        Assignment(iter.into_iter().collect())
    }
}

/// The unique assignment to `Var(c)` that makes `c` false.
pub fn falsifying_assignment(c: &Clause) -> Result<Assignment, LogicError> {
    if c.is_tautological() {
        return Err(LogicError::TautologicalClause(c.clone()));
    }
    Ok(c.literals().iter().map(|l| (l.var(), !l.is_positive())).collect())
}

pub fn eval_clause(c: &Clause, tau: &Assignment) -> Truth {
    let mut open = false;
    for &lit in c.literals() {
        match tau.get(lit.var()) {
            Some(v) if lit.eval(v) => return Truth::True,
            Some(_) => {}
            None => open = true,
        }
    }
    if open {
        Truth::Undetermined
    } else {
        Truth::False
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn x(i: u32) -> Var {
        Var::new(i)
    }

    #[test]
    fn falsifying_assignment_examples() {
        let c = Clause::from_dimacs(&[-1, 2]);
        let ff = falsifying_assignment(&c).unwrap();
        assert_eq!(ff.get(x(1)), Some(true));
        assert_eq!(ff.get(x(2)), Some(false));
        let ff = falsifying_assignment(&Clause::from_dimacs(&[1])).unwrap();
        assert_eq!(ff.get(x(1)), Some(false));
        assert!(matches!(
            falsifying_assignment(&Clause::from_dimacs(&[1, -1])),
            Err(LogicError::TautologicalClause(_))
        ));
    }

    #[test]
    fn eval_clause_examples() {
        let xy = Clause::from_dimacs(&[1, 2]);
        assert_eq!(eval_clause(&xy, &Assignment::from_literals([x(1).positive()])), Truth::True);
        assert_eq!(eval_clause(&xy, &Assignment::from_literals([x(1).negative()])), Truth::Undetermined);
        assert_eq!(eval_clause(&Clause::from_dimacs(&[1]), &Assignment::from_literals([x(1).negative()])), Truth::False);
    }

    #[test]
    fn clause_is_canonical() {
        let a = Clause::from_dimacs(&[3, -1, 3, 2]);
        assert_eq!(a.to_dimacs(), vec![-1, 2, 3]);
        assert!(!a.is_tautological());
        assert!(Clause::from_dimacs(&[2, 1, -2]).is_tautological());
        assert_eq!(a.union(&Clause::from_dimacs(&[4, -1])).to_dimacs(), vec![-1, 2, 3, 4]);
    }

    proptest! {
        #[test]
        fn falsifying_assignment_falsifies(codes in proptest::collection::btree_map(1i64..12, any::<bool>(), 0..8)) {
            let c = Clause::new(codes.iter().map(|(&v, &s)| Literal::from_dimacs(if s { v } else { -v })));
            let ff = falsifying_assignment(&c).unwrap();
            prop_assert_eq!(eval_clause(&c, &ff), Truth::False);
        }
    }
}
