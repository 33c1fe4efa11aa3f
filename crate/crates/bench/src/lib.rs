//! Shared inputs for the benchmarks.

use ssatc::gen::{random_partitioned, random_ssat, rng, SsatShape};
use ssatc::logic::{Partition, SsatFormula};
use ssatc::mdp::{parse_mdp, Mdp};

pub const FIG3: &str = include_str!("../../cli/examples/fig3.mdp");

pub fn fig3() -> Mdp {
    parse_mdp(FIG3).expect("bundled model parses")
}

/// Random formulas of `vars` variables at a clause/variable ratio of 2.
pub fn random_formulas(vars: u32, count: usize) -> Vec<SsatFormula> {
    let mut r = rng(u64::from(vars));
    (0..count).map(|_| random_ssat(&mut r, SsatShape { vars, clauses: 2 * vars as usize, width: 3, random_share: 0.5 })).collect()
}

pub fn random_split_formulas(vars: u32, count: usize) -> Vec<(SsatFormula, Partition)> {
    let mut r = rng(1000 + u64::from(vars));
    (0..count)
        .map(|_| random_partitioned(&mut r, SsatShape { vars, clauses: 2 * vars as usize, width: 3, random_share: 0.5 }))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inputs_build() {
        assert_eq!(fig3().num_states(), 4);
        assert_eq!(random_formulas(6, 3).len(), 3);
        assert_eq!(random_split_formulas(6, 2).len(), 2);
    }
}
