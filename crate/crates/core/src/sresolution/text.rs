//! Trace files: the SDIMACS formula followed by one line per step.
//!
//! ```text
//! a <clause-index> ... 0                          A-side clauses, 1-based (optional)
//! s <id> R1 <lits> 0 p <prob>
//! s <id> R2 <lits> 0 p <prob> w <lits> 0
//! s <id> R3 <left> <right> x <pivot> <lits> 0 p <prob>
//! i <id> <s-expression>                           interpolant of step <id>
//! ```
//!
//! Step ids are dense and start at 0.

use std::fmt::Write as _;

use thiserror::Error;

use super::{AnnotatedClause, DerivationStep, ProofTrace, Rule};
use crate::logic::rational::{format_exact, parse_rational};
use crate::logic::sdimacs::{parse_with, write_sdimacs, ParseError};
use crate::logic::{Assignment, Clause, FormulaAst, Literal, Partition, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {msg}")]
pub struct TraceParseError {
    pub line: usize,
    pub msg: String,
}

impl From<ParseError> for TraceParseError {
    fn from(e: ParseError) -> TraceParseError {
        TraceParseError { line: e.line, msg: e.msg }
    }
}

fn lits_str(c: &[Literal]) -> String {
    let mut s = String::new();
    for l in c {
        write!(s, "{} ", l.to_dimacs()).unwrap();
    }
    s.push('0');
    s
}

pub fn write_trace(t: &ProofTrace) -> String {
    let mut out = write_sdimacs(&t.formula);
    if let Some(part) = &t.partition {
        out.push('a');
        for i in part.a_clauses() {
            write!(out, " {}", i + 1).unwrap();
        }
        out.push_str(" 0\n");
    }
    for (id, s) in t.steps.iter().enumerate() {
        let c = lits_str(s.conclusion.clause.literals());
        let p = format_exact(&s.conclusion.prob);
        match s.rule.base() {
            Rule::R1 => writeln!(out, "s {id} R1 {c} p {p}"),
            Rule::R2 => {
                let w = s.witness.as_ref().map(|w| lits_str(&w.literals())).unwrap_or_else(|| "0".into());
                writeln!(out, "s {id} R2 {c} p {p} w {w}")
            }
            _ => {
                let pivot = s.pivot.map(|v| v.index()).unwrap_or(0);
                writeln!(out, "s {id} R3 {} {} x {pivot} {c} p {p}", s.premises[0], s.premises[1])
            }
        }
        .unwrap();
        if let Some(i) = &s.interpolant {
            writeln!(out, "i {id} {}", i.to_sexpr()).unwrap();
        }
    }
    out
}

struct Cursor<'a> {
    toks: std::iter::Peekable<std::str::SplitWhitespace<'a>>,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn err(&self, msg: impl Into<String>) -> TraceParseError {
        TraceParseError { line: self.line, msg: msg.into() }
    }

    fn word(&mut self) -> Result<&'a str, TraceParseError> {
        self.toks.next().ok_or_else(|| self.err("unexpected end of line"))
    }

    fn keyword(&mut self, k: &str) -> Result<(), TraceParseError> {
        let w = self.word()?;
        if w == k {
            Ok(())
        } else {
            Err(self.err(format!("expected `{k}`, found `{w}`")))
        }
    }

    fn number<T: std::str::FromStr>(&mut self) -> Result<T, TraceParseError> {
        let w = self.word()?;
        w.parse().map_err(|_| self.err(format!("bad number `{w}`")))
    }

    fn literals(&mut self) -> Result<Vec<Literal>, TraceParseError> {
        let mut out = Vec::new();
        loop {
            let code: i64 = self.number()?;
            if code == 0 {
                return Ok(out);
            }
            if code.unsigned_abs() > u32::MAX as u64 {
                return Err(self.err("literal out of range"));
            }
            out.push(Literal::from_dimacs(code));
        }
    }

    fn done(&mut self) -> Result<(), TraceParseError> {
        match self.toks.next() {
            None => Ok(()),
            Some(t) => Err(self.err(format!("trailing token `{t}`"))),
        }
    }
}

enum Item {
    Step(usize, DerivationStep),
    Interpolant(usize, usize, FormulaAst),
    ASide(usize, Vec<usize>),
}

fn parse_line(line_no: usize, line: &str) -> Result<Item, TraceParseError> {
    let mut cur = Cursor { toks: line.split_whitespace().peekable(), line: line_no };
    match cur.word()? {
        "a" => {
            let mut idx = Vec::new();
            loop {
                let i: usize = cur.number()?;
                if i == 0 {
                    break;
                }
                idx.push(i - 1);
            }
            cur.done()?;
            Ok(Item::ASide(line_no, idx))
        }
        "i" => {
            let id: usize = cur.number()?;
            let rest = line.trim_start()[1..].trim_start();
            let sexpr = rest.split_once(char::is_whitespace).map(|x| x.1).ok_or_else(|| cur.err("missing interpolant"))?;
            let f = FormulaAst::parse_sexpr(sexpr).map_err(|e| cur.err(e.to_string()))?;
            Ok(Item::Interpolant(line_no, id, f))
        }
        "s" => {
            let id: usize = cur.number()?;
            let rule = cur.word()?;
            let (rule, premises, pivot) = match rule {
                "R1" => (Rule::R1, vec![], None),
                "R2" => (Rule::R2, vec![], None),
                "R3" => {
                    let l: usize = cur.number()?;
                    let r: usize = cur.number()?;
                    cur.keyword("x")?;
                    let x: u32 = cur.number()?;
                    if x == 0 {
                        return Err(cur.err("pivot must be a variable"));
                    }
                    (Rule::R3, vec![l, r], Some(Var::new(x)))
                }
                other => return Err(cur.err(format!("unknown rule `{other}`"))),
            };
            let clause = Clause::new(cur.literals()?);
            cur.keyword("p")?;
            let p = cur.word()?;
            let prob = parse_rational(p).map_err(|e| cur.err(e.to_string()))?;
            let witness = if rule == Rule::R2 {
                cur.keyword("w")?;
                Some(Assignment::from_literals(cur.literals()?))
            } else {
                None
            };
            cur.done()?;
            Ok(Item::Step(
                id,
                DerivationStep { rule, premises, conclusion: AnnotatedClause::new(clause, prob), interpolant: None, pivot, witness },
            ))
        }
        other => Err(cur.err(format!("unexpected line start `{other}`"))),
    }
}

pub fn parse_trace(text: &str) -> Result<ProofTrace, TraceParseError> {
    let mut items: Vec<Item> = Vec::new();
    let mut step_lines: Vec<usize> = Vec::new();
    let formula = parse_with(text, |line_no, line| {
        let item = parse_line(line_no, line).map_err(|e| ParseError { line: e.line, msg: e.msg })?;
        if let Item::Step(..) = item {
            step_lines.push(line_no);
        }
        items.push(item);
        Ok(true)
    })?;
    let mut trace = ProofTrace::new(formula, None);
    let mut step_no = 0;
    for item in items {
        match item {
            Item::ASide(line, idx) => {
                if trace.partition.is_some() {
                    return Err(TraceParseError { line, msg: "duplicate partition line".into() });
                }
                let part = Partition::new(trace.formula.matrix(), idx).map_err(|e| TraceParseError { line, msg: e.to_string() })?;
                trace.partition = Some(part);
            }
            Item::Step(id, step) => {
                if id != trace.steps.len() {
                    return Err(TraceParseError { line: step_lines[step_no], msg: format!("expected step id {}", trace.steps.len()) });
                }
                step_no += 1;
                trace.push(step);
            }
            Item::Interpolant(line, id, f) => {
                let step = trace.steps.get_mut(id).ok_or_else(|| TraceParseError { line, msg: format!("no step {id} yet") })?;
                if step.interpolant.is_some() {
                    return Err(TraceParseError { line, msg: format!("step {id} already has an interpolant") });
                }
                step.rule = step.rule.with_interpolant();
                step.interpolant = Some(f);
            }
        }
    }
    match trace.last() {
        None => Err(TraceParseError { line: 0, msg: "trace has no steps".into() }),
        Some(s) if !s.conclusion.clause.is_empty() => {
            Err(TraceParseError { line: 0, msg: "trace ends before deriving the empty clause".into() })
        }
        Some(_) => Ok(trace),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::rational::ratio;
    use crate::logic::{Prefix, Quantifier, SsatFormula};

    fn sample() -> ProofTrace {
        let v = Var::new;
        let prefix = Prefix::from_bindings([(v(1), Quantifier::Random(ratio(1, 2))), (v(2), Quantifier::Exists)]).unwrap();
        let f = SsatFormula::new(2, prefix, vec![Clause::from_dimacs(&[1]), Clause::from_dimacs(&[2])]).unwrap();
        let part = Partition::new(f.matrix(), [0]).unwrap();
        let mut t = ProofTrace::new(f, Some(part));
        t.push(DerivationStep {
            rule: Rule::R2_1,
            premises: vec![],
            conclusion: AnnotatedClause::new(Clause::from_dimacs(&[1]), ratio(0, 1)),
            interpolant: Some(FormulaAst::False),
            pivot: None,
            witness: None,
        });
        t.push(DerivationStep {
            rule: Rule::R2_2,
            premises: vec![],
            conclusion: AnnotatedClause::new(Clause::from_dimacs(&[-1, -2]), ratio(1, 1)),
            interpolant: Some(FormulaAst::True),
            pivot: None,
            witness: Some(Assignment::from_literals([v(1).positive(), v(2).positive()])),
        });
        t.push(DerivationStep {
            rule: Rule::R2_3,
            premises: vec![1, 0],
            conclusion: AnnotatedClause::new(Clause::from_dimacs(&[-2]), ratio(1, 2)),
            interpolant: Some(FormulaAst::or([FormulaAst::var(v(1)), FormulaAst::var(v(2))])),
            pivot: Some(v(1)),
            witness: None,
        });
        t.push(DerivationStep {
            rule: Rule::R2_1,
            premises: vec![],
            conclusion: AnnotatedClause::new(Clause::from_dimacs(&[2]), ratio(0, 1)),
            interpolant: Some(FormulaAst::True),
            pivot: None,
            witness: None,
        });
        t.push(DerivationStep {
            rule: Rule::R2_3,
            premises: vec![2, 3],
            conclusion: AnnotatedClause::new(Clause::new(Vec::<Literal>::new()), ratio(1, 2)),
            interpolant: Some(FormulaAst::var(v(1))),
            pivot: Some(v(2)),
            witness: None,
        });
        t
    }

    #[test]
    fn round_trip() {
        let t = sample();
        let text = write_trace(&t);
        assert!(text.contains("a 1 0\n"));
        assert!(text.contains("s 2 R3 1 0 x 1 -2 0 p 1/2\n"));
        assert_eq!(parse_trace(&text).unwrap(), t);
    }

    #[test]
    fn parse_errors() {
        let text = write_trace(&sample());
        let cut = &text[..text.find("s 4 R3").unwrap() + 9];
        assert!(parse_trace(cut).is_err());
        let bad = text.replace("s 2 R3", "s 7 R3");
        assert!(parse_trace(&bad).unwrap_err().msg.contains("expected step id 2"));
        assert!(parse_trace("p cnf 1 0\ne 1 0\n").is_err());
        assert!(parse_trace("p cnf 1 0\ne 1 0\ns 0 R9 0 p 0\n").is_err());
        // whole lines missing at the end
        let head: String = text.lines().take_while(|l| !l.starts_with("s 2 ")).map(|l| format!("{l}\n")).collect();
        assert!(parse_trace(&head).unwrap_err().msg.contains("empty clause"));
    }
}
