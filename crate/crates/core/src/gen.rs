//! Seeded random instances for tests, benchmarks and the CLI.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::logic::rational::ratio;
use crate::logic::{Clause, Literal, Partition, Prefix, Quantifier, SsatFormula, Var};
use crate::mdp::{Mdp, StateSet};
use crate::Rational;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Copy, Debug)]
pub struct SsatShape {
    pub vars: u32,
    pub clauses: usize,
    /// Literals per clause, at most.
    pub width: usize,
    /// Chance of a variable being randomized.
    pub random_share: f64,
}

impl SsatShape {
    pub fn new(vars: u32, clauses: usize) -> SsatShape {
        SsatShape { vars, clauses, width: 3, random_share: 0.5 }
    }
}

fn random_prob(rng: &mut impl Rng) -> Rational {
    let den = *[2i64, 3, 4, 5, 10].choose(rng).unwrap();
    ratio(rng.gen_range(1..den), den)
}

/// Shuffled prefix over `1..=vars`, clauses of 1..=width distinct variables.
pub fn random_ssat(rng: &mut impl Rng, shape: SsatShape) -> SsatFormula {
    let mut order: Vec<u32> = (1..=shape.vars).collect();
    order.shuffle(rng);
    let prefix = Prefix::from_bindings(order.iter().map(|&i| {
        let q = if rng.gen_bool(shape.random_share) { Quantifier::Random(random_prob(rng)) } else { Quantifier::Exists };
        (Var::new(i), q)
    }))
    .unwrap();
    let all: Vec<u32> = (1..=shape.vars).collect();
    let matrix = (0..shape.clauses)
        .map(|_| {
            let w = rng.gen_range(1..=shape.width.min(all.len()));
            Clause::new(all.choose_multiple(rng, w).map(|&i| Literal::new(Var::new(i), rng.gen_bool(0.5))).collect::<Vec<_>>())
        })
        .collect();
    SsatFormula::new(shape.vars, prefix, matrix).unwrap()
}

/// A random formula with a random split of its clauses into A and B.
pub fn random_partitioned(rng: &mut impl Rng, shape: SsatShape) -> (SsatFormula, Partition) {
    let f = random_ssat(rng, shape);
    let a: Vec<usize> = (0..f.matrix().len()).filter(|_| rng.gen_bool(0.5)).collect();
    let part = Partition::new(f.matrix(), a).unwrap();
    (f, part)
}

/// Random MDP with `states` states and up to `actions` actions per state,
/// each distribution over up to three successors. Target and region are
/// non-empty random subsets.
pub fn random_mdp(rng: &mut impl Rng, states: usize, actions: usize) -> Mdp {
    let names: Vec<String> = (0..states).map(|i| format!("q{i}")).collect();
    let acts: Vec<String> = (0..actions).map(|i| format!("a{i}")).collect();
    let mut trans = Vec::new();
    for s in 0..states {
        let count = rng.gen_range(1..=actions);
        let mut chosen: Vec<usize> = (0..actions).collect();
        chosen.shuffle(rng);
        for &a in &chosen[..count] {
            let k = rng.gen_range(1..=states.min(3));
            let succ: Vec<usize> = (0..states).collect::<Vec<_>>().choose_multiple(rng, k).copied().collect();
            let den = *[2i64, 4, 5, 10].choose(rng).unwrap();
            // split den units among k successors, each at least one
            let den = den.max(k as i64);
            let mut cuts: Vec<i64> = (1..den).collect::<Vec<_>>().choose_multiple(rng, k - 1).copied().collect();
            cuts.sort();
            let mut last = 0;
            for (j, &t) in succ.iter().enumerate() {
                let end = if j + 1 == k { den } else { cuts[j] };
                trans.push((s, a, t, ratio(end - last, den)));
                last = end;
            }
        }
    }
    let subset = |rng: &mut dyn rand::RngCore| -> StateSet {
        let mut set: StateSet = (0..states).filter(|_| rng.gen_bool(0.4)).collect();
        if set.is_empty() {
            set.insert(rng.gen_range(0..states));
        }
        set
    };
    let target = subset(rng);
    let region = subset(rng);
    Mdp::new(names, acts, 0, trans, Some(target), Some(region)).expect("generated model is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_per_seed() {
        let a = random_ssat(&mut rng(7), SsatShape::new(8, 10));
        let b = random_ssat(&mut rng(7), SsatShape::new(8, 10));
        assert_eq!(a, b);
        let m1 = random_mdp(&mut rng(3), 5, 3);
        let m2 = random_mdp(&mut rng(3), 5, 3);
        assert_eq!(m1, m2);
    }

    #[test]
    fn mdps_are_valid() {
        for seed in 0..50 {
            let m = random_mdp(&mut rng(seed), 1 + seed as usize % 5, 1 + seed as usize % 3);
            assert!(m.num_states() >= 1);
        }
    }
}
