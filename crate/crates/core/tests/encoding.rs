use ssatc::gen::{random_mdp, rng};
use ssatc::mdp::build_pbmc;
use ssatc::oracle::{exact_pr_capped, mdp_max_reach_bounded};

#[test]
fn pbmc_matches_value_iteration() {
    for seed in 0..24u64 {
        let states = 1 + (seed as usize % 5);
        let actions = 1 + (seed as usize / 5 % 3);
        let m = random_mdp(&mut rng(seed), states, actions);
        for k in 0..=5 {
            let f = build_pbmc(&m, k).unwrap();
            let got = exact_pr_capped(&f, usize::MAX).unwrap();
            assert_eq!(got, mdp_max_reach_bounded(&m, m.target().unwrap(), k), "seed {seed} k {k}");
        }
    }
}
