use std::path::{Path, PathBuf};

use ssatc::analysis::{
    read_csv, verify_kernel, verify_safety, verify_stability, verify_stability_with, write_csv, AnalysisError,
    BoundSequence, Budget, FixpointConfig,
};
use ssatc::logic::rational::{format_exact, parse_rational};
use ssatc::mdp::{parse_mdp, state_set_predicate, Mdp, MdpError};
use ssatc::solver::DcChoice;
use ssatc::Rational;

use crate::args::{Common, Format, ReachArgs, StabilityArgs};
use crate::error::{read, write, CliError};
use crate::render::{
    csv_blocks, entry_json, fixpoint_json, fixpoint_summary, state_formula, value, verdict_code, verdict_json,
    verdict_word,
};

pub fn load(path: &Path) -> Result<Mdp, CliError> {
    parse_mdp(&read(path)?).map_err(|e| CliError::input(path, e))
}

fn theta(text: &str) -> Result<Rational, CliError> {
    let t = parse_rational(text).map_err(|e| CliError::Usage(format!("--theta: {e}")))?;
    if t < Rational::from_integer(0.into()) || t > Rational::from_integer(1.into()) {
        return Err(CliError::Usage("--theta must lie in [0, 1]".into()));
    }
    Ok(t)
}

fn budget(c: &Common) -> Result<Budget, CliError> {
    if c.j == 0 {
        return Err(CliError::Usage("--j must be at least 1".into()));
    }
    Ok(Budget { fixpoint: FixpointConfig { j: c.j, max_iter: c.max_iter, dc: DcChoice::ConstTrue }, k_max: c.kmax })
}

fn analysis_error(path: &Path, e: AnalysisError) -> CliError {
    match e {
        AnalysisError::Mdp(e) => CliError::input(path, e),
        other => CliError::Internal(other.to_string()),
    }
}

/// `out.csv` → `out-ub.csv`.
pub fn sibling(path: &Path, tag: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}-{tag}.{}", ext.to_string_lossy()),
        None => format!("{stem}-{tag}"),
    };
    path.with_file_name(name)
}

// Writes a sequence and checks that reading it back gives the same sequence.
fn save(path: &Path, seq: &BoundSequence) -> Result<(), CliError> {
    let text = write_csv(seq);
    match read_csv(&text, seq.kind) {
        Ok(back) if back == *seq => write(path, &text),
        _ => Err(CliError::Internal(format!("CSV for {} does not round-trip", seq.kind.name()))),
    }
}

fn check_monotone(seqs: &[&BoundSequence]) -> Result<(), CliError> {
    match seqs.iter().find(|s| !s.is_monotone()) {
        Some(s) => Err(CliError::Internal(format!("{} is not monotone", s.kind.name()))),
        None => Ok(()),
    }
}

fn table(rows: &[(usize, Vec<Option<&Rational>>)], heads: &[&str]) {
    let cells: Vec<Vec<String>> =
        rows.iter().map(|(_, r)| r.iter().map(|c| c.map_or_else(|| "-".into(), value)).collect()).collect();
    let widths: Vec<usize> = (0..heads.len())
        .map(|i| cells.iter().map(|r| r[i].chars().count()).chain([heads[i].len()]).max().unwrap_or(0))
        .collect();
    let line = |k: &str, r: &[String]| {
        let padded: Vec<String> = r.iter().zip(&widths).map(|(c, &w)| format!("{c:<w$}")).collect();
        println!("{k:>4}  {}", padded.join("  ").trim_end());
    };
    line("k", &heads.iter().map(|h| h.to_string()).collect::<Vec<_>>());
    for ((k, _), r) in rows.iter().zip(&cells) {
        line(&k.to_string(), r);
    }
}

pub fn reach(args: &ReachArgs, format: Format) -> Result<u8, CliError> {
    let c = &args.common;
    let m = load(&c.model)?;
    let theta = theta(&c.theta)?;
    if m.target().is_none() {
        return Err(CliError::input(&c.model, MdpError::MissingTarget));
    }
    let r = verify_safety(&m, &theta, budget(c)?).map_err(|e| analysis_error(&c.model, e))?;
    check_monotone(&[&r.lower, &r.upper])?;
    if let Some(path) = &c.csv {
        save(path, &r.lower)?;
        if r.breach.is_some() {
            save(&sibling(path, "ub"), &r.upper)?;
        }
    }
    let bound = |k: usize| match r.verdict.outcome {
        ssatc::analysis::VerdictKind::Verified => r.upper.get(k),
        _ => r.lower.get(k),
    };
    match format {
        Format::Human => {
            match r.fixpoint.result() {
                Some(it) => println!(
                    "BReach = {}  [{}] ({})",
                    m.format_set(&it.state_set),
                    state_formula(&m, &it.cumulative),
                    fixpoint_summary(&r.fixpoint)
                ),
                None => println!("BReach not found ({}); upper bounds skipped", fixpoint_summary(&r.fixpoint)),
            }
            let rows: Vec<_> =
                r.lower.entries.iter().map(|e| (e.k, vec![Some(&e.value), r.upper.get(e.k)])).collect();
            table(&rows, &["lb", "ub"]);
            match r.verdict.witness_k {
                Some(k) => {
                    let which = if r.verdict.outcome == ssatc::analysis::VerdictKind::Verified { "ub" } else { "lb" };
                    println!("{} at k={k} ({which}={})", verdict_word(&r.verdict), format_exact(bound(k).unwrap()));
                }
                None => println!("UNKNOWN up to k={}", c.kmax),
            }
        }
        Format::Csv => print!("{}", csv_blocks(&[&r.lower, &r.upper])),
        Format::JsonLines => {
            println!("{}", fixpoint_json(&m, "breach", &r.fixpoint));
            for seq in [&r.lower, &r.upper] {
                for e in &seq.entries {
                    println!("{}", entry_json(seq.kind.name(), e));
                }
            }
            println!("{}", verdict_json(&r.verdict, r.verdict.witness_k.and_then(bound)));
        }
    }
    Ok(verdict_code(&r.verdict))
}

pub fn stability(args: &StabilityArgs, format: Format) -> Result<u8, CliError> {
    let c = &args.common;
    let m = load(&c.model)?;
    let theta = theta(&c.theta)?;
    if m.region().is_none() {
        return Err(CliError::input(&c.model, MdpError::MissingRegion));
    }
    let r = match &args.kernel {
        Some(list) => {
            let set = m.parse_state_list(list).map_err(|e| CliError::Usage(format!("--kernel: {e}")))?;
            let kernel = state_set_predicate(set.iter().copied());
            if !verify_kernel(&m, &kernel) {
                return Err(CliError::Usage(format!(
                    "--kernel {} is not an invariant subset of the region",
                    m.format_set(&set)
                )));
            }
            verify_stability_with(&m, &theta, &kernel, c.kmax)
        }
        None => verify_stability(&m, &theta, budget(c)?),
    }
    .map_err(|e| analysis_error(&c.model, e))?;
    check_monotone(&[&r.lower])?;
    if let Some(path) = &c.csv {
        save(path, &r.lower)?;
    }
    let empty = r.kernel_states.is_empty();
    match format {
        Format::Human => {
            let origin = r.fixpoint.as_ref().map_or_else(|| "given".to_string(), fixpoint_summary);
            println!("Kernel = {}  [{}] ({origin})", m.format_set(&r.kernel_states), state_formula(&m, &r.kernel));
            println!("kernel invariant: yes");
            let rows: Vec<_> = r.lower.entries.iter().map(|e| (e.k, vec![Some(&e.value)])).collect();
            table(&rows, &["lb"]);
            match r.verdict.witness_k {
                Some(k) => println!("VERIFIED at k={k} (lb={})", format_exact(r.lower.get(k).unwrap())),
                None if empty => println!("kernel empty; UNKNOWN"),
                None => println!("UNKNOWN up to k={}", c.kmax),
            }
        }
        Format::Csv => print!("{}", write_csv(&r.lower)),
        Format::JsonLines => {
            if let Some(t) = &r.fixpoint {
                println!("{}", fixpoint_json(&m, "kernel", t));
            }
            for e in &r.lower.entries {
                println!("{}", entry_json(r.lower.kind.name(), e));
            }
            let mut v = verdict_json(&r.verdict, r.verdict.witness_k.and_then(|k| r.lower.get(k)));
            v["kernel_empty"] = empty.into();
            println!("{v}");
        }
    }
    Ok(verdict_code(&r.verdict))
}
