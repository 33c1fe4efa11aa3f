use crate::logic::FormulaAst;
use crate::mdp::{build_backstep_query, exactly_one, predicate_states, state_set_predicate, state_var, Mdp, MdpError, QueryMode};
use crate::solver::{check_implication, solve_partitioned};

use super::{AnalysisError, FixpointConfig, FixpointMode, FixpointTrace, Iteration};

/// Grows `Target` by backward interpolants until `B^{k+1} ⟹ B^k`.
pub fn backward_fixpoint(m: &Mdp, cfg: FixpointConfig) -> Result<FixpointTrace, AnalysisError> {
    stabilized(run_backward(m, cfg)?, m, cfg)
}

/// Shrinks `Region` by backward interpolants until `Reg^k ⟹ Reg^{k+1}`.
pub fn kernel_fixpoint(m: &Mdp, cfg: FixpointConfig) -> Result<FixpointTrace, AnalysisError> {
    stabilized(run_kernel(m, cfg)?, m, cfg)
}

/// Like [`backward_fixpoint`], returning the trace even when the budget runs out.
pub fn run_backward(m: &Mdp, cfg: FixpointConfig) -> Result<FixpointTrace, AnalysisError> {
    let target = m.target().ok_or(MdpError::MissingTarget)?;
    iterate(m, state_set_predicate(target.iter().copied()), cfg, FixpointMode::Reach)
}

/// Like [`kernel_fixpoint`], returning the trace even when the budget runs out.
pub fn run_kernel(m: &Mdp, cfg: FixpointConfig) -> Result<FixpointTrace, AnalysisError> {
    let region = m.region().ok_or(MdpError::MissingRegion)?;
    iterate(m, state_set_predicate(region.iter().copied()), cfg, FixpointMode::Stability)
}

fn budget(m: &Mdp, cfg: FixpointConfig) -> usize {
    cfg.max_iter.unwrap_or(m.num_states() + 1)
}

fn stabilized(trace: FixpointTrace, m: &Mdp, cfg: FixpointConfig) -> Result<FixpointTrace, AnalysisError> {
    match trace.stabilized_at {
        Some(_) => Ok(trace),
        None => Err(AnalysisError::NotStabilized(budget(m, cfg))),
    }
}

fn iterate(m: &Mdp, start: FormulaAst, cfg: FixpointConfig, mode: FixpointMode) -> Result<FixpointTrace, AnalysisError> {
    assert!(cfg.j >= 1, "backward query depth starts at 1");
    let n = m.num_states();
    let vars: Vec<_> = (0..n).map(state_var).collect();
    // predicates are compared on one-hot valuations only
    let one_hot = exactly_one(n);
    let query_mode = match mode {
        FixpointMode::Reach => QueryMode::Reach,
        FixpointMode::Stability => QueryMode::Stability,
    };
    let mut current = start.simplify();
    let mut trace = FixpointTrace {
        mode,
        j: cfg.j,
        iterations: vec![Iteration {
            k: 0,
            interpolant: start,
            cumulative: current.clone(),
            state_set: predicate_states(&current, n),
        }],
        stabilized_at: None,
    };
    for k in 0..budget(m, cfg) {
        let q = build_backstep_query(m, &current, cfg.j, query_mode);
        let (_, i) = solve_partitioned(&q.a, &q.b, &q.prefix, cfg.dc)?;
        let i = q.to_canonical(&i).simplify();
        let (next, stable) = match mode {
            FixpointMode::Reach => {
                let next = FormulaAst::or2(current.clone(), i.clone()).simplify();
                let stable = check_implication(&FormulaAst::and2(next.clone(), one_hot.clone()), &current, &vars);
                (next, stable)
            }
            FixpointMode::Stability => {
                let next = FormulaAst::and2(current.clone(), FormulaAst::not(i.clone())).simplify();
                let stable = check_implication(&FormulaAst::and2(current.clone(), one_hot.clone()), &next, &vars);
                (next, stable)
            }
        };
        trace.iterations.push(Iteration { k: k + 1, interpolant: i, state_set: predicate_states(&next, n), cumulative: next.clone() });
        if stable {
            trace.stabilized_at = Some(k);
            break;
        }
        current = next;
    }
    Ok(trace)
}
