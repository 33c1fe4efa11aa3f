use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Zero};

use super::rational::{format_decimal, Rational};
use super::{LogicError, Var};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Quantifier {
    Exists,
    /// True with probability `p`, `0 < p < 1`.
    Random(Rational),
}

impl Quantifier {
    pub fn random(p: Rational) -> Result<Quantifier, LogicError> {
        if p <= Rational::zero() || p >= Rational::one() {
            return Err(LogicError::ProbabilityOutOfRange(p));
        }
        Ok(Quantifier::Random(p))
    }

    pub fn is_exists(&self) -> bool {
        matches!(self, Quantifier::Exists)
    }
}

impl fmt::Display for Quantifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantifier::Exists => write!(f, "∃"),
            Quantifier::Random(p) => write!(f, "R^{}", format_decimal(p, 20)),
        }
    }
}

/// Ordered quantifier bindings, outermost first.
#[derive(Clone, Debug, Default)]
pub struct Prefix {
    bindings: Vec<(Var, Quantifier)>,
    position: HashMap<Var, usize>,
}

impl PartialEq for Prefix {
    fn eq(&self, other: &Self) -> bool {
        self.bindings == other.bindings
    }
}

impl Eq for Prefix {}

impl Prefix {
    pub fn new() -> Prefix {
        Prefix::default()
    }

    pub fn from_bindings(bindings: impl IntoIterator<Item = (Var, Quantifier)>) -> Result<Prefix, LogicError> {
        let mut p = Prefix::new();
        for (v, q) in bindings {
            p.push(v, q)?;
        }
        Ok(p)
    }

    pub fn push(&mut self, var: Var, q: Quantifier) -> Result<(), LogicError> {
        if self.position.contains_key(&var) {
            return Err(LogicError::DuplicateBinding(var));
        }
        if let Quantifier::Random(p) = &q {
            if *p <= Rational::zero() || *p >= Rational::one() {
                return Err(LogicError::ProbabilityOutOfRange(p.clone()));
            }
        }
        self.position.insert(var, self.bindings.len());
        self.bindings.push((var, q));
        Ok(())
    }

    pub fn bindings(&self) -> &[(Var, Quantifier)] {
        &self.bindings
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    /// 0-based position of `var` in quantification order.
    pub fn position(&self, var: Var) -> Option<usize> {
        self.position.get(&var).copied()
    }

    pub fn quantifier(&self, var: Var) -> Option<&Quantifier> {
        self.position(var).map(|i| &self.bindings[i].1)
    }

    pub fn contains(&self, var: Var) -> bool {
        self.position.contains_key(&var)
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.bindings.iter().map(|(v, _)| *v)
    }
}

/// Appends `vars` innermost with quantifier `kind`.
pub fn prefix_append(p: &Prefix, vars: &[Var], kind: Quantifier) -> Result<Prefix, LogicError> {
    let mut out = p.clone();
    for &v in vars {
        out.push(v, kind.clone())?;
    }
    Ok(out)
}

impl fmt::Display for Prefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (v, q)) in self.bindings.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{q} {v}")?;
        }
        Ok(())
    }
}
