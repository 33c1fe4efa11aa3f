use std::collections::{BTreeSet, HashMap};
use std::fmt;

use super::{Clause, LogicError, Prefix, Quantifier, Var};

/// A closed SSAT formula `Q1 x1 ... Qn xn : φ` with `φ` in CNF.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SsatFormula {
    num_vars: u32,
    prefix: Prefix,
    matrix: Vec<Clause>,
}

impl SsatFormula {
    /// Checks closedness and that no matrix clause is tautological.
    pub fn new(num_vars: u32, prefix: Prefix, matrix: Vec<Clause>) -> Result<SsatFormula, LogicError> {
        for v in prefix.vars() {
            if v.index() > num_vars {
                return Err(LogicError::VarOutOfRange(v, num_vars));
            }
        }
        for c in &matrix {
            if c.is_tautological() {
                return Err(LogicError::TautologicalClause(c.clone()));
            }
            for v in c.vars() {
                if !prefix.contains(v) {
                    return Err(LogicError::UnboundVariable(v));
                }
            }
        }
        Ok(SsatFormula { num_vars, prefix, matrix })
    }

    /// Declared variable count: the largest usable variable index.
    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn prefix(&self) -> &Prefix {
        &self.prefix
    }

    pub fn matrix(&self) -> &[Clause] {
        &self.matrix
    }

    pub fn quantifier(&self, var: Var) -> Option<&Quantifier> {
        self.prefix.quantifier(var)
    }

    /// Variables occurring in the matrix.
    pub fn matrix_vars(&self) -> BTreeSet<Var> {
        self.matrix.iter().flat_map(|c| c.vars()).collect()
    }

    /// Index of the prefix binding of `var`; callers only pass bound variables.
    pub fn position(&self, var: Var) -> usize {
        self.prefix.position(var).expect("variable bound in prefix")
    }
}

impl fmt::Display for SsatFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} :", self.prefix)?;
        for c in &self.matrix {
            write!(f, " {c}")?;
        }
        Ok(())
    }
}

/// Membership of a variable in the (A, B) split.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarClass {
    /// Occurs in A only.
    A,
    /// Occurs in B only.
    B,
    /// Occurs in both.
    Common,
    /// Occurs in neither.
    Unused,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

/// A split of a formula's matrix into clause sets A and B.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    a_clauses: BTreeSet<usize>,
    b_clauses: BTreeSet<usize>,
    v_a: BTreeSet<Var>,
    v_b: BTreeSet<Var>,
    v_ab: BTreeSet<Var>,
}

impl Partition {
    /// Clauses whose index is in `a_clauses` form A, the rest form B.
    pub fn new(matrix: &[Clause], a_clauses: impl IntoIterator<Item = usize>) -> Result<Partition, LogicError> {
        let a_clauses: BTreeSet<usize> = a_clauses.into_iter().collect();
        if let Some(&bad) = a_clauses.iter().find(|&&i| i >= matrix.len()) {
            return Err(LogicError::PartitionIndex(bad));
        }
        let b_clauses: BTreeSet<usize> = (0..matrix.len()).filter(|i| !a_clauses.contains(i)).collect();
        let vars_of = |idx: &BTreeSet<usize>| -> BTreeSet<Var> { idx.iter().flat_map(|&i| matrix[i].vars()).collect() };
        let va_all = vars_of(&a_clauses);
        let vb_all = vars_of(&b_clauses);
        Ok(Partition {
            v_a: va_all.difference(&vb_all).copied().collect(),
            v_b: vb_all.difference(&va_all).copied().collect(),
            v_ab: va_all.intersection(&vb_all).copied().collect(),
            a_clauses,
            b_clauses,
        })
    }

    pub fn a_clauses(&self) -> &BTreeSet<usize> {
        &self.a_clauses
    }

    pub fn b_clauses(&self) -> &BTreeSet<usize> {
        &self.b_clauses
    }

    pub fn v_a(&self) -> &BTreeSet<Var> {
        &self.v_a
    }

    pub fn v_b(&self) -> &BTreeSet<Var> {
        &self.v_b
    }

    pub fn v_ab(&self) -> &BTreeSet<Var> {
        &self.v_ab
    }

    pub fn side(&self, clause_index: usize) -> Side {
        if self.a_clauses.contains(&clause_index) {
            Side::A
        } else {
            Side::B
        }
    }

    pub fn class(&self, var: Var) -> VarClass {
        if self.v_ab.contains(&var) {
            VarClass::Common
        } else if self.v_a.contains(&var) {
            VarClass::A
        } else if self.v_b.contains(&var) {
            VarClass::B
        } else {
            VarClass::Unused
        }
    }
}

/// Builds `Q : (A ∧ B)` with A's clauses first, and the matching partition.
pub fn partitioned_formula(
    num_vars: u32,
    prefix: Prefix,
    a: Vec<Clause>,
    b: Vec<Clause>,
) -> Result<(SsatFormula, Partition), LogicError> {
    let na = a.len();
    let mut matrix = a;
    matrix.extend(b);
    let part = Partition::new(&matrix, 0..na)?;
    Ok((SsatFormula::new(num_vars, prefix, matrix)?, part))
}

/// Clause-identity index used to look up matrix clauses.
pub fn clause_index(matrix: &[Clause]) -> HashMap<&Clause, Vec<usize>> {
    let mut idx: HashMap<&Clause, Vec<usize>> = HashMap::new();
    for (i, c) in matrix.iter().enumerate() {
        idx.entry(c).or_default().push(i);
    }
    idx
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::rational::ratio;

    #[test]
    fn rejects_open_formulas() {
        let p = Prefix::from_bindings([(Var::new(1), Quantifier::Exists)]).unwrap();
        let err = SsatFormula::new(2, p, vec![Clause::from_dimacs(&[1, 2])]).unwrap_err();
        assert_eq!(err, LogicError::UnboundVariable(Var::new(2)));
    }

    #[test]
    fn partition_classes_for_interpolation_example() {
        // a=1 x=2 y=3 b=4; A = (y)(a ∨ ¬x), B = (x)(¬y ∨ b)
        let prefix = Prefix::from_bindings([
            (Var::new(1), Quantifier::Random(ratio(4, 5))),
            (Var::new(2), Quantifier::Exists),
            (Var::new(3), Quantifier::Random(ratio(1, 2))),
            (Var::new(4), Quantifier::Random(ratio(3, 10))),
        ])
        .unwrap();
        let a = vec![Clause::from_dimacs(&[3]), Clause::from_dimacs(&[1, -2])];
        let b = vec![Clause::from_dimacs(&[2]), Clause::from_dimacs(&[-3, 4])];
        let (_, part) = partitioned_formula(4, prefix, a, b).unwrap();
        assert_eq!(part.class(Var::new(1)), VarClass::A);
        assert_eq!(part.class(Var::new(4)), VarClass::B);
        assert_eq!(part.class(Var::new(2)), VarClass::Common);
        assert_eq!(part.class(Var::new(3)), VarClass::Common);
        assert_eq!(part.side(1), Side::A);
        assert_eq!(part.side(2), Side::B);
    }
}
