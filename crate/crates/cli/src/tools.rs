use serde_json::json;
use ssatc::gen::{random_mdp, random_partitioned, random_ssat, rng, SsatShape};
use ssatc::logic::rational::format_exact;
use ssatc::logic::sdimacs::{parse_partitioned, write_partitioned, write_sdimacs};
use ssatc::mdp::write_mdp;
use ssatc::oracle::{exact_pr, mdp_backward_set, mdp_max_kernel, mdp_max_reach_sequence, mdp_min_reach_sequence, OracleError};
use ssatc::sresolution::{check_proof, parse_trace};

use crate::args::{Format, GenArgs, OracleArgs};
use crate::error::{read, CliError};
use crate::mdp::load;
use crate::render::{value, value_json};

pub fn check(path: &std::path::Path, format: Format) -> Result<u8, CliError> {
    let trace = parse_trace(&read(path)?).map_err(|e| CliError::input(path, e))?;
    let report = check_proof(&trace);
    let failure = report.first_failure().map(|(id, why)| (id, why.to_string()));
    if format == Format::JsonLines {
        let rec = json!({
            "accepted": failure.is_none(),
            "failed_step": failure.as_ref().map(|f| f.0),
            "reason": failure.as_ref().map(|f| f.1.clone()),
            "certified": report.certified.as_ref().map(format_exact),
            "interpolant": report.interpolant.as_ref().map(|i| i.to_sexpr()),
        });
        println!("{rec}");
    } else {
        match &failure {
            Some((id, why)) => println!("rejected at step {id}: {why}"),
            None => {
                if let Some(p) = &report.certified {
                    println!("certified {}", format_exact(p));
                }
                if let Some(i) = &report.interpolant {
                    println!("interpolant {}", i.simplify());
                }
            }
        }
    }
    Ok(if failure.is_some() { 1 } else { 0 })
}

pub fn oracle(args: &OracleArgs, format: Format) -> Result<u8, CliError> {
    if args.input.extension().is_some_and(|e| e == "mdp") {
        return oracle_mdp(args, format);
    }
    let (f, _) = parse_partitioned(&read(&args.input)?).map_err(|e| CliError::input(&args.input, e))?;
    let p = exact_pr(&f).map_err(|e: OracleError| CliError::Usage(format!("{e} (raise it with SSATC_ORACLE_CAP)")))?;
    match format {
        Format::JsonLines => println!("{}", json!({ "pr": value_json(&p) })),
        _ => println!("Pr = {}", value(&p)),
    }
    Ok(0)
}

fn oracle_mdp(args: &OracleArgs, format: Format) -> Result<u8, CliError> {
    let m = load(&args.input)?;
    let names = |set: &ssatc::mdp::StateSet| set.iter().map(|&z| m.state_name(z).to_string()).collect::<Vec<_>>();
    if let Some(target) = m.target() {
        let back = mdp_backward_set(&m, target);
        let seq = mdp_max_reach_sequence(&m, target, args.kmax);
        match format {
            Format::JsonLines => {
                println!("{}", json!({ "backward_set": names(&back) }));
                for (k, v) in seq.iter().enumerate() {
                    println!("{}", json!({ "kind": "max_reach", "k": k, "value": value_json(v) }));
                }
            }
            _ => {
                println!("backward set = {}", m.format_set(&back));
                for (k, v) in seq.iter().enumerate() {
                    println!("MaxReach^{k} = {}", value(v));
                }
            }
        }
    }
    if let Some(region) = m.region() {
        let kernel = mdp_max_kernel(&m, region);
        let seq = mdp_min_reach_sequence(&m, &kernel, args.kmax);
        match format {
            Format::JsonLines => {
                println!("{}", json!({ "max_kernel": names(&kernel) }));
                for (k, v) in seq.iter().enumerate() {
                    println!("{}", json!({ "kind": "min_reach_kernel", "k": k, "value": value_json(v) }));
                }
            }
            _ => {
                println!("maximal kernel = {}", m.format_set(&kernel));
                for (k, v) in seq.iter().enumerate() {
                    println!("MinReach^{k} = {}", value(v));
                }
            }
        }
    }
    Ok(0)
}

pub fn generate(what: &GenArgs) -> Result<u8, CliError> {
    match *what {
        GenArgs::Ssat { seed, vars, clauses, width, partition } => {
            if vars == 0 || width == 0 {
                return Err(CliError::Usage("--vars and --width must be positive".into()));
            }
            let shape = SsatShape { vars, clauses, width, random_share: 0.5 };
            if partition {
                let (f, part) = random_partitioned(&mut rng(seed), shape);
                print!("{}", write_partitioned(&f, &part));
            } else {
                print!("{}", write_sdimacs(&random_ssat(&mut rng(seed), shape)));
            }
        }
        GenArgs::Mdp { seed, states, actions } => {
            if states == 0 || actions == 0 {
                return Err(CliError::Usage("--states and --actions must be positive".into()));
            }
            print!("{}", write_mdp(&random_mdp(&mut rng(seed), states, actions)));
        }
    }
    Ok(0)
}
