//! Propositional formula trees used for interpolants and state-set predicates.
//!
//! The smart constructors [`FormulaAst::and`], [`FormulaAst::or`] and
//! [`FormulaAst::not`] fold constants, flatten nested connectives of the same
//! kind and drop duplicate children. No canonical form is claimed.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use super::{Literal, Var};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FormulaAst {
    True,
    False,
    Lit(Literal),
    Not(Box<FormulaAst>),
    And(Vec<FormulaAst>),
    Or(Vec<FormulaAst>),
}

impl FormulaAst {
    pub fn lit(l: Literal) -> FormulaAst {
        FormulaAst::Lit(l)
    }

    pub fn var(v: Var) -> FormulaAst {
        FormulaAst::Lit(v.positive())
    }

    pub fn constant(b: bool) -> FormulaAst {
        if b {
            FormulaAst::True
        } else {
            FormulaAst::False
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: FormulaAst) -> FormulaAst {
        match f {
            FormulaAst::True => FormulaAst::False,
            FormulaAst::False => FormulaAst::True,
            FormulaAst::Lit(l) => FormulaAst::Lit(l.negate()),
            FormulaAst::Not(inner) => *inner,
            other => FormulaAst::Not(Box::new(other)),
        }
    }

    pub fn and(children: impl IntoIterator<Item = FormulaAst>) -> FormulaAst {
        Self::junction(children, true)
    }

    pub fn or(children: impl IntoIterator<Item = FormulaAst>) -> FormulaAst {
        Self::junction(children, false)
    }

    pub fn and2(a: FormulaAst, b: FormulaAst) -> FormulaAst {
        Self::and([a, b])
    }

    pub fn or2(a: FormulaAst, b: FormulaAst) -> FormulaAst {
        Self::or([a, b])
    }

    fn junction(children: impl IntoIterator<Item = FormulaAst>, is_and: bool) -> FormulaAst {
        // neutral element for the connective and its absorbing element
        let (unit, zero) = if is_and { (FormulaAst::True, FormulaAst::False) } else { (FormulaAst::False, FormulaAst::True) };
        let mut flat: Vec<FormulaAst> = Vec::new();
        let mut stack: Vec<FormulaAst> = children.into_iter().collect();
        stack.reverse();
        while let Some(c) = stack.pop() {
            match c {
                c if c == unit => {}
                c if c == zero => return zero,
                FormulaAst::And(gs) if is_and => stack.extend(gs.into_iter().rev()),
                FormulaAst::Or(gs) if !is_and => stack.extend(gs.into_iter().rev()),
                other => {
                    if !flat.contains(&other) {
                        flat.push(other);
                    }
                }
            }
        }
        // x and ¬x side by side
        let lits: BTreeSet<Literal> =
            flat.iter().filter_map(|c| if let FormulaAst::Lit(l) = c { Some(*l) } else { None }).collect();
        if lits.iter().any(|l| lits.contains(&l.negate())) {
            return zero;
        }
        match flat.len() {
            0 => unit,
            1 => flat.pop().unwrap(),
            _ if is_and => FormulaAst::And(flat),
            _ => FormulaAst::Or(flat),
        }
    }

    /// Rebuilds the tree through the smart constructors.
    pub fn simplify(&self) -> FormulaAst {
        match self {
            FormulaAst::True | FormulaAst::False | FormulaAst::Lit(_) => self.clone(),
            FormulaAst::Not(g) => FormulaAst::not(g.simplify()),
            FormulaAst::And(gs) => FormulaAst::and(gs.iter().map(|g| g.simplify())),
            FormulaAst::Or(gs) => FormulaAst::or(gs.iter().map(|g| g.simplify())),
        }
    }

    pub fn eval(&self, value: &impl Fn(Var) -> bool) -> bool {
        match self {
            FormulaAst::True => true,
            FormulaAst::False => false,
            FormulaAst::Lit(l) => l.eval(value(l.var())),
            FormulaAst::Not(g) => !g.eval(value),
            FormulaAst::And(gs) => gs.iter().all(|g| g.eval(value)),
            FormulaAst::Or(gs) => gs.iter().any(|g| g.eval(value)),
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            FormulaAst::True | FormulaAst::False => {}
            FormulaAst::Lit(l) => {
                out.insert(l.var());
            }
            FormulaAst::Not(g) => g.collect_vars(out),
            FormulaAst::And(gs) | FormulaAst::Or(gs) => gs.iter().for_each(|g| g.collect_vars(out)),
        }
    }

    /// Substitutes variables; `map` must be total on `self.vars()`.
    pub fn rename(&self, map: &impl Fn(Var) -> Var) -> FormulaAst {
        match self {
            FormulaAst::True | FormulaAst::False => self.clone(),
            FormulaAst::Lit(l) => FormulaAst::Lit(Literal::new(map(l.var()), l.is_positive())),
            FormulaAst::Not(g) => FormulaAst::not(g.rename(map)),
            FormulaAst::And(gs) => FormulaAst::and(gs.iter().map(|g| g.rename(map))),
            FormulaAst::Or(gs) => FormulaAst::or(gs.iter().map(|g| g.rename(map))),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            FormulaAst::True | FormulaAst::False | FormulaAst::Lit(_) => 1,
            FormulaAst::Not(g) => 1 + g.size(),
            FormulaAst::And(gs) | FormulaAst::Or(gs) => 1 + gs.iter().map(|g| g.size()).sum::<usize>(),
        }
    }

    /// S-expression over `and`, `or`, `not`, `var`, `true`, `false`.
    pub fn to_sexpr(&self) -> String {
        let mut s = String::new();
        self.write_sexpr(&mut s);
        s
    }

    fn write_sexpr(&self, s: &mut String) {
        match self {
            FormulaAst::True => s.push_str("true"),
            FormulaAst::False => s.push_str("false"),
            FormulaAst::Lit(l) if l.is_positive() => s.push_str(&format!("(var {})", l.var().index())),
            FormulaAst::Lit(l) => s.push_str(&format!("(not (var {}))", l.var().index())),
            FormulaAst::Not(g) => {
                s.push_str("(not ");
                g.write_sexpr(s);
                s.push(')');
            }
            FormulaAst::And(gs) | FormulaAst::Or(gs) => {
                s.push_str(if matches!(self, FormulaAst::And(_)) { "(and" } else { "(or" });
                for g in gs {
                    s.push(' ');
                    g.write_sexpr(s);
                }
                s.push(')');
            }
        }
    }

    pub fn parse_sexpr(text: &str) -> Result<FormulaAst, SexprError> {
        let tokens = tokenize(text);
        let mut pos = 0;
        let f = parse_node(&tokens, &mut pos)?;
        if pos != tokens.len() {
            return Err(SexprError(format!("trailing input after position {pos}")));
        }
        Ok(f)
    }

    /// Renders with `¬ ∧ ∨` using `name` for variables.
    pub fn display_with<'a>(&'a self, name: &'a dyn Fn(Var) -> String) -> impl fmt::Display + 'a {
        Pretty { f: self, name }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed s-expression: {0}")]
pub struct SexprError(pub String);

fn tokenize(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for ch in text.chars() {
        match ch {
            '(' | ')' => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
                out.push(ch.to_string());
            }
            c if c.is_whitespace() => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
            }
            c => cur.push(c),
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

fn parse_node(tokens: &[String], pos: &mut usize) -> Result<FormulaAst, SexprError> {
    let tok = tokens.get(*pos).ok_or_else(|| SexprError("unexpected end".into()))?;
    *pos += 1;
    match tok.as_str() {
        "true" => Ok(FormulaAst::True),
        "false" => Ok(FormulaAst::False),
        "(" => {
            let head = tokens.get(*pos).ok_or_else(|| SexprError("unexpected end".into()))?.clone();
            *pos += 1;
            let node = match head.as_str() {
                "var" => {
                    let v = tokens.get(*pos).ok_or_else(|| SexprError("missing variable".into()))?;
                    *pos += 1;
                    let idx: u32 = v.parse().map_err(|_| SexprError(format!("bad variable `{v}`")))?;
                    if idx == 0 {
                        return Err(SexprError("variable 0".into()));
                    }
                    FormulaAst::var(Var::new(idx))
                }
                "not" => FormulaAst::not(parse_node(tokens, pos)?),
                "and" | "or" => {
                    let mut kids = Vec::new();
                    while tokens.get(*pos).map(|t| t.as_str()) != Some(")") {
                        if *pos >= tokens.len() {
                            return Err(SexprError("unexpected end".into()));
                        }
                        kids.push(parse_node(tokens, pos)?);
                    }
                    if kids.is_empty() {
                        return Err(SexprError(format!("empty `{head}`")));
                    }
                    if head == "and" {
                        FormulaAst::and(kids)
                    } else {
                        FormulaAst::or(kids)
                    }
                }
                other => return Err(SexprError(format!("unknown operator `{other}`"))),
            };
            if tokens.get(*pos).map(|t| t.as_str()) != Some(")") {
                return Err(SexprError("expected `)`".into()));
            }
            *pos += 1;
            Ok(node)
        }
        other => Err(SexprError(format!("unexpected token `{other}`"))),
    }
}

struct Pretty<'a> {
    f: &'a FormulaAst,
    name: &'a dyn Fn(Var) -> String,
}

impl Pretty<'_> {
    fn go(&self, f: &FormulaAst, out: &mut fmt::Formatter<'_>, parent_binds: bool) -> fmt::Result {
        match f {
            FormulaAst::True => write!(out, "true"),
            FormulaAst::False => write!(out, "false"),
            FormulaAst::Lit(l) if l.is_positive() => write!(out, "{}", (self.name)(l.var())),
            FormulaAst::Lit(l) => write!(out, "¬{}", (self.name)(l.var())),
            FormulaAst::Not(g) => {
                write!(out, "¬(")?;
                self.go(g, out, false)?;
                write!(out, ")")
            }
            FormulaAst::And(gs) | FormulaAst::Or(gs) => {
                let is_and = matches!(f, FormulaAst::And(_));
                let paren = parent_binds;
                if paren {
                    write!(out, "(")?;
                }
                for (i, g) in gs.iter().enumerate() {
                    if i > 0 {
                        write!(out, "{}", if is_and { " ∧ " } else { " ∨ " })?;
                    }
                    self.go(g, out, true)?;
                }
                if paren {
                    write!(out, ")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Pretty<'_> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.go(self.f, out, false)
    }
}

impl fmt::Display for FormulaAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = |v: Var| v.to_string();
        let shown = self.display_with(&name);
        write!(f, "{shown}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(i: u32) -> FormulaAst {
        FormulaAst::var(Var::new(i))
    }

    #[test]
    fn constant_folding() {
        assert_eq!(FormulaAst::and([v(1), FormulaAst::True]), v(1));
        assert_eq!(FormulaAst::and([v(1), FormulaAst::False]), FormulaAst::False);
        assert_eq!(FormulaAst::or([v(1), FormulaAst::True]), FormulaAst::True);
        assert_eq!(FormulaAst::or(Vec::<FormulaAst>::new()), FormulaAst::False);
        assert_eq!(FormulaAst::or([v(1), FormulaAst::not(v(1))]), FormulaAst::True);
        assert_eq!(FormulaAst::and([v(1), v(1), v(2)]), FormulaAst::And(vec![v(1), v(2)]));
        assert_eq!(FormulaAst::or([FormulaAst::or([v(1), v(2)]), v(3)]), FormulaAst::Or(vec![v(1), v(2), v(3)]));
        assert_eq!(FormulaAst::not(FormulaAst::not(FormulaAst::and([v(1), v(2)]))), FormulaAst::and([v(1), v(2)]));
    }

    #[test]
    fn sexpr_round_trip_example() {
        let f = FormulaAst::or([FormulaAst::not(v(2)), FormulaAst::and([v(3), FormulaAst::True])]);
        assert_eq!(f.to_sexpr(), "(or (not (var 2)) (var 3))");
        assert_eq!(FormulaAst::parse_sexpr(&f.to_sexpr()).unwrap(), f);
        assert!(FormulaAst::parse_sexpr("(and (var 1)").is_err());
        assert!(FormulaAst::parse_sexpr("(xor (var 1))").is_err());
    }

    #[test]
    fn pretty_printing() {
        let f = FormulaAst::or([FormulaAst::not(v(2)), FormulaAst::and([v(3), v(4)])]);
        assert_eq!(f.to_string(), "¬x2 ∨ (x3 ∧ x4)");
    }

    pub(crate) fn arb_ast(nvars: u32) -> impl Strategy<Value = FormulaAst> {
        let leaf = prop_oneof![
            Just(FormulaAst::True),
            Just(FormulaAst::False),
            (1..=nvars, any::<bool>()).prop_map(|(i, s)| FormulaAst::Lit(Literal::new(Var::new(i), s))),
        ];
        leaf.prop_recursive(4, 24, 4, |inner| {
            prop_oneof![
                inner.clone().prop_map(|g| FormulaAst::Not(Box::new(g))),
                proptest::collection::vec(inner.clone(), 1..4).prop_map(FormulaAst::And),
                proptest::collection::vec(inner, 1..4).prop_map(FormulaAst::Or),
            ]
        })
    }

    proptest! {
        #[test]
        fn simplify_preserves_semantics(f in arb_ast(4), bits in 0u32..16) {
            let val = |x: Var| bits >> (x.index() - 1) & 1 == 1;
            prop_assert_eq!(f.eval(&val), f.simplify().eval(&val));
        }

        #[test]
        fn sexpr_preserves_semantics(f in arb_ast(4), bits in 0u32..16) {
            let val = |x: Var| bits >> (x.index() - 1) & 1 == 1;
            let g = FormulaAst::parse_sexpr(&f.to_sexpr()).unwrap();
            prop_assert_eq!(f.eval(&val), g.eval(&val));
        }
    }
}
