use serde_json::{json, Value};
use ssatc::analysis::{write_csv, BoundEntry, BoundSequence, FixpointTrace, Verdict, VerdictKind};
use ssatc::logic::rational::{format_decimal, format_exact};
use ssatc::logic::{FormulaAst, Var};
use ssatc::mdp::Mdp;
use ssatc::Rational;

pub const DIGITS: usize = 20;

/// `6/25 = 0.24`, or just `1` when both forms coincide.
pub fn value(v: &Rational) -> String {
    let (e, d) = (format_exact(v), format_decimal(v, DIGITS));
    if e == d {
        e
    } else {
        format!("{e} = {d}")
    }
}

pub fn value_json(v: &Rational) -> Value {
    json!({ "exact": format_exact(v), "decimal": format_decimal(v, DIGITS) })
}

pub fn state_formula(m: &Mdp, f: &FormulaAst) -> String {
    let name = |v: Var| m.state_name(v.index() as usize - 1).to_string();
    let shown = f.display_with(&name).to_string();
    shown
}

pub fn entry_json(kind: &str, e: &BoundEntry) -> Value {
    json!({
        "kind": kind,
        "k": e.k,
        "value_exact": format_exact(&e.value),
        "value_decimal": format_decimal(&e.value, DIGITS),
        "solve_ms": e.solve_time.as_secs_f64() * 1e3,
    })
}

pub fn fixpoint_json(m: &Mdp, name: &str, t: &FixpointTrace) -> Value {
    let result = t.result();
    json!({
        "fixpoint": name,
        "j": t.j,
        "iterations": t.iterations.len() - 1,
        "stabilized_at": t.stabilized_at,
        "states": result.map(|it| it.state_set.iter().map(|&z| m.state_name(z)).collect::<Vec<_>>()),
        "formula": result.map(|it| state_formula(m, &it.cumulative)),
    })
}

pub fn verdict_word(v: &Verdict) -> &'static str {
    match v.outcome {
        VerdictKind::Verified => "VERIFIED",
        VerdictKind::Falsified => "FALSIFIED",
        VerdictKind::Unknown => "UNKNOWN",
    }
}

pub fn verdict_json(v: &Verdict, bound: Option<&Rational>) -> Value {
    json!({
        "verdict": verdict_word(v),
        "k": v.witness_k,
        "theta": format_exact(&v.theta),
        "bound": bound.map(format_exact),
    })
}

/// Exit status of a verdict: 0 verified, 1 falsified, 4 undecided.
pub fn verdict_code(v: &Verdict) -> u8 {
    match v.outcome {
        VerdictKind::Verified => 0,
        VerdictKind::Falsified => 1,
        VerdictKind::Unknown => 4,
    }
}

/// Several sequences on stdout: each block starts with `# <kind>`.
pub fn csv_blocks(seqs: &[&BoundSequence]) -> String {
    seqs.iter().map(|s| format!("# {}\n{}", s.kind.name(), write_csv(s))).collect::<Vec<_>>().join("\n")
}

pub fn fixpoint_summary(t: &FixpointTrace) -> String {
    match t.stabilized_at {
        Some(k) => format!("j={}, stable after {} iteration{}", t.j, k + 1, if k == 0 { "" } else { "s" }),
        None => format!("j={}, not stable after {} iterations", t.j, t.iterations.len() - 1),
    }
}
