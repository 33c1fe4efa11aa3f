use serde_json::json;
use ssatc::logic::rational::{format_decimal, format_exact};
use ssatc::logic::sdimacs::parse_partitioned;
use ssatc::solver::{solve, solve_interpolating, DcChoice, SolveOptions};
use ssatc::sresolution::{check_proof, parse_trace, write_trace};

use crate::args::{Dc, Format, SolveArgs};
use crate::error::{read, write, CliError};
use crate::render::{value, DIGITS};

pub fn run(args: &SolveArgs, format: Format) -> Result<u8, CliError> {
    let (f, part) = parse_partitioned(&read(&args.input)?).map_err(|e| CliError::input(&args.input, e))?;
    if args.interpolant && part.is_none() {
        return Err(CliError::Usage("--interpolant needs an `a` partition line in the input".into()));
    }
    let dc_policy = match args.dc {
        Dc::True => DcChoice::ConstTrue,
        Dc::False => DcChoice::ConstFalse,
    };
    let internal = |e: ssatc::solver::SolveError| CliError::Internal(e.to_string());
    let r = if args.proof.is_some() || args.interpolant || args.certify {
        let opts = SolveOptions { emit_proof: true, emit_interpolant: args.interpolant, dc_policy, ..SolveOptions::default() };
        match &part {
            Some(p) if args.interpolant => solve_interpolating(&f, p, &opts),
            _ => solve(&f, &opts),
        }
        .map_err(internal)?
    } else {
        solve(&f, &SolveOptions::value()).map_err(internal)?
    };
    if let Some(trace) = &r.trace {
        let report = check_proof(trace);
        if let Some((id, why)) = report.first_failure() {
            return Err(CliError::Internal(format!("emitted trace rejected at step {id}: {why}")));
        }
        if report.certified.as_ref() != Some(&r.prob) {
            return Err(CliError::Internal("trace does not certify the computed value".into()));
        }
    }
    if args.certify {
        let plain = solve(&f, &SolveOptions::value()).map_err(internal)?;
        if plain.prob != r.prob {
            return Err(CliError::Internal(format!(
                "engines disagree: {} vs {}",
                format_exact(&plain.prob),
                format_exact(&r.prob)
            )));
        }
    }
    if let (Some(path), Some(trace)) = (&args.proof, &r.trace) {
        let text = write_trace(trace);
        if parse_trace(&text).as_ref().ok() != Some(trace) {
            return Err(CliError::Internal("trace does not survive a write/read round trip".into()));
        }
        write(path, &text)?;
    }
    match format {
        Format::Human => {
            println!("Pr = {}", value(&r.prob));
            if let Some(i) = &r.interpolant {
                println!("I = {i}");
            }
            if let (Some(path), Some(trace)) = (&args.proof, &r.trace) {
                println!("proof: {} steps written to {}", trace.steps.len(), path.display());
            }
        }
        Format::Csv => {
            println!("value_exact,value_decimal");
            println!("{},{}", format_exact(&r.prob), format_decimal(&r.prob, DIGITS));
        }
        Format::JsonLines => {
            let rec = json!({
                "pr_exact": format_exact(&r.prob),
                "pr_decimal": format_decimal(&r.prob, DIGITS),
                "interpolant": r.interpolant.as_ref().map(|i| i.to_sexpr()),
                "proof_steps": r.trace.as_ref().map(|t| t.steps.len()),
                "decisions": r.stats.decisions,
                "leaves": r.stats.leaves,
            });
            println!("{rec}");
        }
    }
    Ok(0)
}
