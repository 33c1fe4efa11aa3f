//! SDIMACS: DIMACS CNF extended with quantifier lines.
//!
//! ```text
//! c comment
//! p cnf <nvars> <nclauses>
//! e <v> ... 0            existential block
//! r <prob> <v> ... 0     randomized block, prob decimal or a/b
//! <lit> ... 0            clauses
//! ```

use std::fmt::Write as _;

use thiserror::Error;

use super::rational::{format_exact, parse_rational};
use super::{Clause, LogicError, Partition, Prefix, Quantifier, SsatFormula, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

fn perr(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError { line, msg: msg.into() }
}

/// Parses one SDIMACS document. Lines whose first token is not recognised are
/// handed to `extra`; returning `false` from it rejects the line.
pub fn parse_with(
    text: &str,
    mut extra: impl FnMut(usize, &str) -> Result<bool, ParseError>,
) -> Result<SsatFormula, ParseError> {
    let mut header: Option<(u32, usize)> = None;
    let mut prefix = Prefix::new();
    let mut clauses: Vec<Clause> = Vec::new();
    let mut header_line = 0;
    for (no, raw) in text.lines().enumerate() {
        let line_no = no + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let mut toks = line.split_whitespace();
        let first = toks.next().unwrap();
        match first {
            "p" => {
                if header.is_some() {
                    return Err(perr(line_no, "duplicate header"));
                }
                if toks.next() != Some("cnf") {
                    return Err(perr(line_no, "expected `p cnf <nvars> <nclauses>`"));
                }
                let nv: u32 = toks.next().and_then(|t| t.parse().ok()).ok_or_else(|| perr(line_no, "bad variable count"))?;
                let nc: usize = toks.next().and_then(|t| t.parse().ok()).ok_or_else(|| perr(line_no, "bad clause count"))?;
                if toks.next().is_some() {
                    return Err(perr(line_no, "trailing tokens in header"));
                }
                header = Some((nv, nc));
                header_line = line_no;
            }
            "e" | "r" => {
                let (nv, _) = header.ok_or_else(|| perr(line_no, "quantifier before header"))?;
                let q = if first == "r" {
                    let p = toks.next().ok_or_else(|| perr(line_no, "missing probability"))?;
                    let p = parse_rational(p).map_err(|e| perr(line_no, e.to_string()))?;
                    Quantifier::random(p).map_err(|e| perr(line_no, e.to_string()))?
                } else {
                    Quantifier::Exists
                };
                let vars = parse_zero_terminated(&mut toks, line_no)?;
                for code in vars {
                    if code <= 0 || code as u64 > nv as u64 {
                        return Err(perr(line_no, format!("variable {code} out of range")));
                    }
                    prefix.push(Var::new(code as u32), q.clone()).map_err(|e| perr(line_no, e.to_string()))?;
                }
            }
            tok if tok == "0" || tok.starts_with('-') || tok.chars().all(|ch| ch.is_ascii_digit()) => {
                let (nv, _) = header.ok_or_else(|| perr(line_no, "clause before header"))?;
                let mut all = std::iter::once(first).chain(toks);
                let lits = parse_zero_terminated(&mut all, line_no)?;
                for &l in &lits {
                    if l.unsigned_abs() > nv as u64 {
                        return Err(perr(line_no, format!("literal {l} out of range")));
                    }
                    if !prefix.contains(Var::new(l.unsigned_abs() as u32)) {
                        return Err(perr(line_no, format!("variable {} is not bound", l.abs())));
                    }
                }
                let c = Clause::from_dimacs(&lits);
                if c.is_tautological() {
                    return Err(perr(line_no, "tautological clause"));
                }
                clauses.push(c);
            }
            _ => {
                if !extra(line_no, line)? {
                    return Err(perr(line_no, format!("unexpected line `{line}`")));
                }
            }
        }
    }
    let (nv, nc) = header.ok_or_else(|| perr(0, "missing `p cnf` header"))?;
    if clauses.len() != nc {
        return Err(perr(header_line, format!("header declares {nc} clauses, found {}", clauses.len())));
    }
    SsatFormula::new(nv, prefix, clauses).map_err(|e: LogicError| perr(0, e.to_string()))
}

pub fn parse_sdimacs(text: &str) -> Result<SsatFormula, ParseError> {
    parse_with(text, |_, _| Ok(false))
}

/// Like [`parse_sdimacs`], also accepting one `a <clause> ... 0` line that
/// lists the 1-based indices of the A-side clauses.
pub fn parse_partitioned(text: &str) -> Result<(SsatFormula, Option<Partition>), ParseError> {
    let mut a_side: Option<(usize, Vec<i64>)> = None;
    let f = parse_with(text, |line_no, line| {
        let mut toks = line.split_whitespace();
        if toks.next() != Some("a") {
            return Ok(false);
        }
        if a_side.is_some() {
            return Err(perr(line_no, "duplicate partition line"));
        }
        a_side = Some((line_no, parse_zero_terminated(&mut toks, line_no)?));
        Ok(true)
    })?;
    let Some((line_no, idx)) = a_side else {
        return Ok((f, None));
    };
    let mut a = Vec::with_capacity(idx.len());
    for i in idx {
        if i < 1 || i as usize > f.matrix().len() {
            return Err(perr(line_no, format!("no clause {i}")));
        }
        a.push(i as usize - 1);
    }
    let part = Partition::new(f.matrix(), a).map_err(|e| perr(line_no, e.to_string()))?;
    Ok((f, Some(part)))
}

/// [`write_sdimacs`] followed by the partition line.
pub fn write_partitioned(f: &SsatFormula, part: &Partition) -> String {
    let mut s = write_sdimacs(f);
    s.push('a');
    for i in part.a_clauses() {
        write!(s, " {}", i + 1).unwrap();
    }
    s.push_str(" 0\n");
    s
}

fn parse_zero_terminated<'a>(toks: &mut impl Iterator<Item = &'a str>, line: usize) -> Result<Vec<i64>, ParseError> {
    let mut out = Vec::new();
    for t in toks.by_ref() {
        let v: i64 = t.parse().map_err(|_| perr(line, format!("bad integer `{t}`")))?;
        if v == 0 {
            if let Some(extra) = toks.next() {
                return Err(perr(line, format!("tokens after terminating 0: `{extra}`")));
            }
            return Ok(out);
        }
        out.push(v);
    }
    Err(perr(line, "missing terminating 0"))
}

/// Serializes a formula; consecutive bindings with the same quantifier share a line.
pub fn write_sdimacs(f: &SsatFormula) -> String {
    let mut s = String::new();
    writeln!(s, "p cnf {} {}", f.num_vars(), f.matrix().len()).unwrap();
    let b = f.prefix().bindings();
    let mut i = 0;
    while i < b.len() {
        let mut j = i;
        while j < b.len() && b[j].1 == b[i].1 {
            j += 1;
        }
        match &b[i].1 {
            Quantifier::Exists => s.push('e'),
            Quantifier::Random(p) => write!(s, "r {}", format_exact(p)).unwrap(),
        }
        for (v, _) in &b[i..j] {
            write!(s, " {}", v.index()).unwrap();
        }
        s.push_str(" 0\n");
        i = j;
    }
    for c in f.matrix() {
        for l in c.literals() {
            write!(s, "{} ", l.to_dimacs()).unwrap();
        }
        s.push_str("0\n");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::rational::ratio;

    const EX31: &str = "c example\np cnf 3 3\nr 0.8 1 0\ne 2 0\nr 3/10 3 0\n1 2 0\n-2 0\n2 3 0\n";

    #[test]
    fn partition_line() {
        let text = "p cnf 4 4\nr 4/5 1 0\ne 2 0\nr 1/2 3 0\nr 3/10 4 0\n3 0\n1 -2 0\n2 0\n-3 4 0\na 1 2 0\n";
        let (f, part) = parse_partitioned(text).unwrap();
        let part = part.unwrap();
        assert_eq!(part.a_clauses().iter().copied().collect::<Vec<_>>(), vec![0, 1]);
        let (g, again) = parse_partitioned(&write_partitioned(&f, &part)).unwrap();
        assert_eq!((g, again), (f, Some(part)));
        assert!(parse_partitioned(EX31).unwrap().1.is_none());
        assert_eq!(parse_partitioned(&format!("{EX31}a 4 0\n")).unwrap_err().line, 9);
        assert!(parse_partitioned(&format!("{EX31}a 1 0\na 2 0\n")).is_err());
    }

    #[test]
    fn parses_example() {
        let f = parse_sdimacs(EX31).unwrap();
        assert_eq!(f.num_vars(), 3);
        assert_eq!(f.prefix().quantifier(Var::new(1)), Some(&Quantifier::Random(ratio(4, 5))));
        assert_eq!(f.prefix().quantifier(Var::new(3)), Some(&Quantifier::Random(ratio(3, 10))));
        assert_eq!(f.matrix().len(), 3);
        let again = parse_sdimacs(&write_sdimacs(&f)).unwrap();
        assert_eq!(again, f);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_sdimacs("p cnf 2 1\ne 1 0\n1 2 0\n").unwrap_err().msg.contains("not bound"));
        assert_eq!(parse_sdimacs("p cnf 2 2\ne 1 2 0\n1 2 0\n").unwrap_err().line, 1);
        assert!(parse_sdimacs("p cnf 2 1\ne 1 2 0\n1 2\n").is_err());
        assert!(parse_sdimacs("p cnf 1 0\nr 1.5 1 0\n").is_err());
        assert!(parse_sdimacs("p cnf 1 0\ne 1 0\ne 1 0\n").is_err());
        assert!(parse_sdimacs("e 1 0\n").is_err());
    }

    #[test]
    fn empty_matrix() {
        let f = parse_sdimacs("p cnf 1 0\ne 1 0\n").unwrap();
        assert!(f.matrix().is_empty());
    }
}
