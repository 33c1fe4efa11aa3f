//! Explicit-state MDP recursions.

use num_traits::{One, Zero};

use crate::mdp::{Mdp, StateSet};
use crate::Rational;

#[derive(Clone, Copy)]
enum Opt {
    Max,
    Min,
}

fn expect(values: &[Rational], dist: &[(usize, Rational)]) -> Rational {
    dist.iter().map(|(t, p)| p * &values[*t]).sum()
}

fn best(m: &Mdp, s: usize, values: &[Rational], opt: Opt) -> Rational {
    let mut it = m.choices(s).map(|(_, d)| expect(values, d));
    let first = it.next().expect("every state has an action");
    it.fold(first, |acc, v| match opt {
        Opt::Max => acc.max(v),
        Opt::Min => acc.min(v),
    })
}

// value_{k+1}(s) = 1 on `absorb`, else opt over actions of the expectation
fn reach_values(m: &Mdp, absorb: &StateSet, k_max: usize, opt: Opt) -> Vec<Rational> {
    let n = m.num_states();
    let mut v: Vec<Rational> =
        (0..n).map(|s| if absorb.contains(&s) { Rational::one() } else { Rational::zero() }).collect();
    let mut out = vec![v[m.init()].clone()];
    for _ in 0..k_max {
        v = (0..n).map(|s| if absorb.contains(&s) { Rational::one() } else { best(m, s, &v, opt) }).collect();
        out.push(v[m.init()].clone());
    }
    out
}

/// `MaxReach^k(ι)` for `k = 0..=k_max`.
pub fn mdp_max_reach_sequence(m: &Mdp, target: &StateSet, k_max: usize) -> Vec<Rational> {
    reach_values(m, target, k_max, Opt::Max)
}

pub fn mdp_max_reach_bounded(m: &Mdp, target: &StateSet, k: usize) -> Rational {
    mdp_max_reach_sequence(m, target, k).pop().unwrap()
}

/// `MinReach^k(ι)` for `k = 0..=k_max`.
pub fn mdp_min_reach_sequence(m: &Mdp, kernel: &StateSet, k_max: usize) -> Vec<Rational> {
    reach_values(m, kernel, k_max, Opt::Min)
}

pub fn mdp_min_reach_bounded(m: &Mdp, kernel: &StateSet, k: usize) -> Rational {
    mdp_min_reach_sequence(m, kernel, k).pop().unwrap()
}

/// Maximal probability that `s_0 … s_k` all lie outside `avoid`.
pub fn mdp_max_avoid_bounded(m: &Mdp, avoid: &StateSet, k: usize) -> Rational {
    let n = m.num_states();
    let outside = |s: usize| !avoid.contains(&s);
    let mut v: Vec<Rational> = (0..n).map(|s| if outside(s) { Rational::one() } else { Rational::zero() }).collect();
    for _ in 0..k {
        v = (0..n).map(|s| if outside(s) { best(m, s, &v, Opt::Max) } else { Rational::zero() }).collect();
    }
    v[m.init()].clone()
}

/// States from which `target` is reachable along positive-probability edges.
pub fn mdp_backward_set(m: &Mdp, target: &StateSet) -> StateSet {
    let mut set = target.clone();
    loop {
        let grown: StateSet = (0..m.num_states())
            .filter(|s| !set.contains(s))
            .filter(|&s| m.choices(s).any(|(_, d)| d.iter().any(|(t, _)| set.contains(t))))
            .collect();
        if grown.is_empty() {
            return set;
        }
        set.extend(grown);
    }
}

/// No positive-probability transition leaves `set`, under any action.
pub fn mdp_is_invariant(m: &Mdp, set: &StateSet) -> bool {
    set.iter().all(|&s| m.choices(s).all(|(_, d)| d.iter().all(|(t, _)| set.contains(t))))
}

/// Largest invariant subset of `region`.
pub fn mdp_max_kernel(m: &Mdp, region: &StateSet) -> StateSet {
    let mut k = region.clone();
    loop {
        let leaking: Vec<usize> =
            k.iter().copied().filter(|&s| m.choices(s).any(|(_, d)| d.iter().any(|(t, _)| !k.contains(t)))).collect();
        if leaking.is_empty() {
            return k;
        }
        for s in leaking {
            k.remove(&s);
        }
    }
}
