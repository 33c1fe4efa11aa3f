//! One PASS/FAIL line per acceptance criterion. Exits non-zero if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use ssatc::analysis::{
    backward_fixpoint, check_sandwich, kernel_fixpoint, lower_bounds_reach, lower_bounds_stability, upper_bounds_reach,
    verify_kernel, verify_stability, verify_stability_with, Budget, FixpointConfig, KernelCheck, VerdictKind,
};
use ssatc::gen::{random_mdp, random_partitioned, random_ssat, rng, SsatShape};
use ssatc::logic::rational::{format_decimal, format_exact, ratio};
use ssatc::logic::sdimacs::{parse_partitioned, parse_sdimacs};
use ssatc::logic::{FormulaAst, Var};
use ssatc::mdp::{build_pbmc, build_upper_bound, parse_mdp, state_set_predicate, Mdp, StateSet};
use ssatc::oracle::{equivalent, exact_pr, exact_pr_capped, is_generalized_interpolant, mdp_max_reach_bounded};
use ssatc::solver::{solve, solve_interpolating, DcChoice, SolveOptions};
use ssatc::sresolution::check_proof;
use ssatc::Rational;

type Outcome = Result<String, String>;

fn example(name: &str) -> String {
    let path = format!("{}/../cli/examples/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

fn fig3() -> Mdp {
    parse_mdp(&example("fig3.mdp")).unwrap()
}

fn states(m: &Mdp, names: &str) -> StateSet {
    m.parse_state_list(names).unwrap()
}

fn pred(m: &Mdp, names: &str) -> FormulaAst {
    state_set_predicate(states(m, names))
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<Duration, String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("took {took:?}, limit {limit:?}"))?;
    Ok(took)
}

fn exact(values: impl IntoIterator<Item = Rational>) -> String {
    values.into_iter().map(|v| format_exact(&v)).collect::<Vec<_>>().join(", ")
}

fn value(f: &ssatc::logic::SsatFormula) -> Rational {
    solve(f, &SolveOptions::value()).unwrap().prob
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let f = parse_sdimacs(&example("ex31.sdimacs")).map_err(|e| e.to_string())?;
    let r = solve(&f, &SolveOptions::proof()).map_err(|e| e.to_string())?;
    let trace = r.trace.unwrap();
    let report = check_proof(&trace);
    let last = trace.last().unwrap();
    let took = within(start, Duration::from_secs(1))?;
    ensure(r.prob == ratio(6, 25), || format!("Pr = {}", format_exact(&r.prob)))?;
    ensure(report.accepted(), || format!("checker rejected: {:?}", report.first_failure()))?;
    ensure(last.conclusion.clause.is_empty() && last.conclusion.prob == ratio(6, 25), || "trace does not end in the empty clause".into())?;
    Ok(format!("Pr = 6/25 = {}, {} proof steps accepted, {took:?}", format_decimal(&r.prob, 20), trace.steps.len()))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let (f, part) = parse_partitioned(&example("ex32.sdimacs")).map_err(|e| e.to_string())?;
    let part = part.ok_or("no partition line")?;
    let x = FormulaAst::var(Var::new(2));
    let y = FormulaAst::var(Var::new(3));
    let want_true = FormulaAst::or2(FormulaAst::not(x.clone()), y);
    let want_false = FormulaAst::not(x);
    let mut shown = Vec::new();
    for (dc, want) in [(DcChoice::ConstTrue, want_true), (DcChoice::ConstFalse, want_false)] {
        let r = solve_interpolating(&f, &part, &SolveOptions::interpolant(dc)).map_err(|e| e.to_string())?;
        ensure(r.prob == ratio(3, 25), || format!("Pr = {}", format_exact(&r.prob)))?;
        let i = r.interpolant.unwrap();
        ensure(equivalent(&i, &want).unwrap(), || format!("{dc:?}: interpolant {i} not equivalent to {want}"))?;
        ensure(check_proof(r.trace.as_ref().unwrap()).accepted(), || format!("{dc:?}: trace rejected"))?;
        shown.push(format!("{dc:?}: {i}"));
    }
    let took = within(start, Duration::from_secs(1))?;
    Ok(format!("Pr = 3/25, {}, {took:?}", shown.join(", ")))
}

fn criterion_3() -> Outcome {
    let m = fig3();
    let start = Instant::now();
    let lb = lower_bounds_reach(&m, 20).map_err(|e| e.to_string())?;
    let took = within(start, Duration::from_secs(10))?;
    let head: Vec<Rational> = lb.values().take(6).cloned().collect();
    let want = vec![ratio(0, 1), ratio(0, 1), ratio(27, 50), ratio(27, 50), ratio(693, 1000), ratio(693, 1000)];
    ensure(head == want, || format!("lb_0..5 = [{}]", exact(head.clone())))?;
    let lb20 = format_decimal(lb.get(20).unwrap(), 20);
    ensure(lb20.starts_with("0.817971"), || format!("lb_20 = {lb20}"))?;
    Ok(format!("lb_0..5 = [{}], lb_20 = {lb20}, k <= 20 in {took:?}", exact(head)))
}

fn criterion_4() -> Outcome {
    let m = fig3();
    let breach = FormulaAst::or2(FormulaAst::not(pred(&m, "f")), pred(&m, "s"));
    let ub = upper_bounds_reach(&m, &breach, 20).map_err(|e| e.to_string())?;
    let head: Vec<Rational> = ub.values().take(7).cloned().collect();
    let want = vec![ratio(1, 1), ratio(9, 10), ratio(9, 10), ratio(171, 200), ratio(171, 200), ratio(3339, 4000), ratio(3339, 4000)];
    ensure(head == want, || format!("ub_0..6 = [{}]", exact(head.clone())))?;
    let ub20 = format_decimal(ub.get(20).unwrap(), 20);
    ensure(ub20.starts_with("0.818243"), || format!("ub_20 = {ub20}"))?;

    let start = Instant::now();
    let lb100 = value(&build_pbmc(&m, 100).unwrap());
    let ub100 = value(&build_upper_bound(&m, &breach, 100));
    let took = within(start, Duration::from_secs(180))?;
    let gap = &ub100 - &lb100;
    ensure(gap >= Rational::zero() && gap < ratio(1, 1_000_000_000_000_000), || format!("ub_100 - lb_100 = {}", format_decimal(&gap, 6)))?;
    let (lb_s, ub_s) = (format_decimal(&lb100, 20), format_decimal(&ub100, 20));
    let summary = format!(
        "ub_0..6 = [{}], ub_20 = {ub20}, k = 100 in {took:?}, gap = {}",
        exact(head),
        format_decimal(&gap, 3)
    );
    ensure(lb_s == "0.81818181818181803208" && ub_s == "0.81818181818181821948", || {
        format!("{summary}; 20-digit values differ: lb_100 = {lb_s} (paper 0.81818181818181803208), ub_100 = {ub_s} (paper 0.81818181818181821948)")
    })?;
    Ok(summary)
}

fn criterion_5() -> Outcome {
    let m = fig3();
    let mut shown = Vec::new();
    for j in 1..=3 {
        let t = backward_fixpoint(&m, FixpointConfig::new(j)).map_err(|e| e.to_string())?;
        let set = &t.result().unwrap().state_set;
        let ok = match j {
            1 => set.is_superset(&states(&m, "i e s")),
            _ => *set == states(&m, "i e s"),
        };
        ensure(ok, || format!("j={j}: BReach = {}", m.format_set(set)))?;
        shown.push(format!("j={j} {}", m.format_set(set)));
    }
    Ok(format!("BReach {}", shown.join(", ")))
}

fn criterion_6() -> Outcome {
    let m = fig3();
    let mut shown = Vec::new();
    for j in 1..=4 {
        let t = kernel_fixpoint(&m, FixpointConfig::new(j)).map_err(|e| e.to_string())?;
        let it = t.result().unwrap();
        ensure(verify_kernel(&m, &it.cumulative), || format!("j={j}: kernel {} is not invariant", m.format_set(&it.state_set)))?;
        let ok = if j >= 3 { it.state_set == states(&m, "s") } else { it.state_set.is_subset(&states(&m, "s")) };
        ensure(ok, || format!("j={j}: kernel {}", m.format_set(&it.state_set)))?;
        shown.push(format!("j={j} {}", m.format_set(&it.state_set)));
    }
    Ok(format!("Kernel {}", shown.join(", ")))
}

fn criterion_7() -> Outcome {
    let m = fig3();
    let kernel = pred(&m, "s");
    let start = Instant::now();
    let lb = lower_bounds_stability(&m, &kernel, 100, KernelCheck::Verify).map_err(|e| e.to_string())?;
    let head: Vec<Rational> = lb.values().take(6).cloned().collect();
    let want = vec![ratio(0, 1), ratio(0, 1), ratio(9, 20), ratio(9, 20), ratio(27, 50), ratio(27, 50)];
    ensure(head == want, || format!("lb_0..5 = [{}]", exact(head.clone())))?;
    ensure(lb.get(100) == Some(&ratio(27, 50)), || format!("lb_100 = {}", format_exact(lb.get(100).unwrap())))?;
    let verified = verify_stability(&m, &ratio(54, 100), Budget::new(3, 100)).map_err(|e| e.to_string())?;
    ensure(verified.verdict.outcome == VerdictKind::Verified, || format!("theta 0.54: {:?}", verified.verdict))?;
    let unknown = verify_stability_with(&m, &ratio(55, 100), &kernel, 100).map_err(|e| e.to_string())?;
    ensure(unknown.verdict.outcome == VerdictKind::Unknown, || format!("theta 0.55: {:?}", unknown.verdict))?;
    let took = within(start, Duration::from_secs(60))?;
    Ok(format!(
        "lb_0..5 = [{}], lb_100 = 27/50, 0.54 verified at k={}, 0.55 unknown, {took:?}",
        exact(head),
        verified.verdict.witness_k.unwrap()
    ))
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let mut r = rng(8);
    let mut traces = 0;
    for n in 0..1000 {
        let vars = 1 + n % 12;
        let shape = SsatShape { vars, clauses: (n as usize * 7) % (3 * vars as usize + 2), width: 1 + n as usize % 4, random_share: (n % 5) as f64 / 4.0 };
        let f = random_ssat(&mut r, shape);
        let want = exact_pr(&f).unwrap();
        ensure(value(&f) == want, || format!("(a) instance {n}: value engine differs from the oracle"))?;
        let p = solve(&f, &SolveOptions::proof()).unwrap();
        ensure(p.prob == want, || format!("(a) instance {n}: proof engine differs from the oracle"))?;
        let report = check_proof(p.trace.as_ref().unwrap());
        ensure(report.accepted() && report.certified == Some(want), || format!("(b) instance {n}: trace rejected"))?;
        traces += 1;
    }
    for n in 0..200u32 {
        let vars = 1 + n % 10;
        let (f, part) = random_partitioned(&mut r, SsatShape { vars, clauses: 1 + (n as usize * 3) % (2 * vars as usize + 2), width: 1 + n as usize % 3, random_share: 0.5 });
        let dc = if n % 2 == 0 { DcChoice::ConstTrue } else { DcChoice::ConstFalse };
        let res = solve_interpolating(&f, &part, &SolveOptions::interpolant(dc)).unwrap();
        let i = res.interpolant.unwrap();
        ensure(is_generalized_interpolant(&i, &f, &part).unwrap(), || format!("(c) instance {n}: invalid interpolant {i}"))?;
        ensure(check_proof(res.trace.as_ref().unwrap()).accepted(), || format!("(b) partitioned instance {n}: trace rejected"))?;
        traces += 1;
    }
    let mut mdps = vec![fig3()];
    for seed in 0..24u64 {
        let m = random_mdp(&mut r, 1 + seed as usize % 5, 1 + seed as usize / 5 % 3);
        for k in 0..=5 {
            let got = exact_pr_capped(&build_pbmc(&m, k).unwrap(), usize::MAX).unwrap();
            ensure(got == mdp_max_reach_bounded(&m, m.target().unwrap(), k), || format!("(d) mdp {seed}, k={k}: PBMC value differs"))?;
        }
        mdps.push(m);
    }
    for (n, m) in mdps.iter().enumerate() {
        let breach = backward_fixpoint(m, FixpointConfig::default()).map_err(|e| e.to_string())?;
        let lb = lower_bounds_reach(m, 6).map_err(|e| e.to_string())?;
        let ub = upper_bounds_reach(m, &breach.result().unwrap().cumulative, 6).map_err(|e| e.to_string())?;
        let kernel = kernel_fixpoint(m, FixpointConfig::default()).map_err(|e| e.to_string())?;
        let st = lower_bounds_stability(m, &kernel.result().unwrap().cumulative, 6, KernelCheck::Verify).map_err(|e| e.to_string())?;
        ensure(lb.is_monotone() && ub.is_monotone() && st.is_monotone(), || format!("(e) mdp {n}: non-monotone sequence"))?;
        ensure(check_sandwich(&lb, &ub).is_ok(), || format!("(e) mdp {n}: lower bound above upper bound"))?;
        ensure(ub.values().all(|u| *u <= Rational::one()), || format!("(e) mdp {n}: bound above 1"))?;
    }
    let took = within(start, Duration::from_secs(600))?;
    Ok(format!("1000 solver/oracle instances, {traces} traces accepted, 200 interpolants valid, 24 PBMC encodings faithful, {} MDPs monotone and sandwiched, {took:?}", mdps.len()))
}

fn main() -> ExitCode {
    let criteria: [(u32, fn() -> Outcome); 8] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
    ];
    let mut failed = 0;
    for (n, run) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        match outcome {
            Ok(detail) => println!("criterion {n}: PASS  {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {n}: FAIL  {detail}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
