//! SSAT encodings of bounded MDP runs.
//!
//! States are one-hot: every unrolling depth `i` has one existential variable
//! per state. A transition step quantifies `⌈log2 m⌉` existential action bits
//! followed by randomized chain variables, one chain per distinct
//! distribution. The chain for `(t1,p1) … (tm,pm)` has `m − 1` variables with
//! conditional probabilities `p_j / (1 − p_1 − … − p_{j−1})`; variable `j`
//! true selects `t_j`, all false selects `t_m`.
//!
//! State predicates are [`FormulaAst`]s over canonical variables: state `z`
//! is `Var(z + 1)`.

use num_traits::One;

use super::model::{Mdp, StateId};
use super::MdpError;
use crate::logic::{negate_to_cnf, to_cnf, Clause, FormulaAst, Literal, Prefix, Quantifier, SsatFormula, Var, VarAllocator};
use crate::Rational;

/// Position of a variable inside one transition step template.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    /// State variable of the source copy.
    Current(StateId),
    /// State variable of the successor copy.
    Next(StateId),
    /// Action selector bit.
    Choice(usize),
    /// Randomized chain variable.
    Chance(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SlotLit {
    pub slot: Slot,
    pub positive: bool,
}

impl SlotLit {
    fn pos(slot: Slot) -> SlotLit {
        SlotLit { slot, positive: true }
    }

    fn neg(slot: Slot) -> SlotLit {
        SlotLit { slot, positive: false }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChanceVar {
    pub name: String,
    pub prob: Rational,
}

/// Clause templates for one step, instantiated by [`Unrolling`].
#[derive(Clone, Debug)]
pub struct StepEncoding {
    pub state_names: Vec<String>,
    pub choice_bits: usize,
    pub chance_vars: Vec<ChanceVar>,
    /// Unit clauses over `Current` fixing the initial state.
    pub init_clauses: Vec<Vec<SlotLit>>,
    /// Transition clauses plus exactly-one over `Next`.
    pub trans_clauses: Vec<Vec<SlotLit>>,
}

fn bits_for(m: usize) -> usize {
    let mut b = 0;
    while (1usize << b) < m {
        b += 1;
    }
    b
}

pub fn encode_step(m: &Mdp) -> StepEncoding {
    let n = m.num_states();
    let needs_choice = |s: StateId| {
        let dists: Vec<_> = m.choices(s).map(|(_, d)| d).collect();
        dists.windows(2).any(|w| w[0] != w[1])
    };
    let widest = (0..n).filter(|&s| needs_choice(s)).map(|s| m.available(s).len()).max().unwrap_or(1);
    let choice_bits = bits_for(widest);

    let mut enc = StepEncoding {
        state_names: m.states().to_vec(),
        choice_bits,
        chance_vars: Vec::new(),
        init_clauses: (0..n).map(|z| vec![SlotLit { slot: Slot::Current(z), positive: z == m.init() }]).collect(),
        trans_clauses: Vec::new(),
    };

    for s in 0..n {
        let choices: Vec<_> = m.choices(s).collect();
        if !needs_choice(s) {
            let base = format!("p{}", m.state_name(s));
            push_chain(&mut enc, s, &[], choices[0].1, &base);
            continue;
        }
        for (idx, (a, dist)) in choices.iter().enumerate() {
            let base = format!("p{}{}", m.state_name(s), m.actions()[*a]);
            // codewords past the last action decode to it
            let words: Vec<usize> =
                (0..1usize << choice_bits).filter(|&c| c.min(choices.len() - 1) == idx).collect();
            let first = enc.chance_vars.len();
            for (w, c) in words.iter().enumerate() {
                // a set bit in the codeword means the selector is false
                let not_selected: Vec<SlotLit> =
                    (0..choice_bits).map(|b| SlotLit { slot: Slot::Choice(b), positive: c >> b & 1 == 1 }).collect();
                if w == 0 {
                    push_chain(&mut enc, s, &not_selected, dist, &base);
                } else {
                    chain_clauses(&mut enc, s, &not_selected, dist, first);
                }
            }
        }
    }

    for z in 0..n {
        for w in z + 1..n {
            enc.trans_clauses.push(vec![SlotLit::neg(Slot::Next(z)), SlotLit::neg(Slot::Next(w))]);
        }
    }
    enc.trans_clauses.push((0..n).map(|z| SlotLit::pos(Slot::Next(z))).collect());
    enc
}

fn push_chain(enc: &mut StepEncoding, s: StateId, not_selected: &[SlotLit], dist: &[(StateId, Rational)], base: &str) {
    let first = enc.chance_vars.len();
    let len = dist.len() - 1;
    let mut rest = Rational::one();
    for (j, (_, p)) in dist.iter().take(len).enumerate() {
        let name = if len == 1 { base.to_string() } else { format!("{base}{}", j + 1) };
        enc.chance_vars.push(ChanceVar { name, prob: p / &rest });
        rest -= p;
    }
    chain_clauses(enc, s, not_selected, dist, first);
}

fn chain_clauses(enc: &mut StepEncoding, s: StateId, not_selected: &[SlotLit], dist: &[(StateId, Rational)], first: usize) {
    let last = dist.len() - 1;
    for (j, (t, _)) in dist.iter().enumerate() {
        let mut c = vec![SlotLit::neg(Slot::Current(s))];
        c.extend_from_slice(not_selected);
        c.extend((0..j).map(|l| SlotLit::pos(Slot::Chance(first + l))));
        if j < last {
            c.push(SlotLit::neg(Slot::Chance(first + j)));
        }
        c.push(SlotLit::pos(Slot::Next(*t)));
        enc.trans_clauses.push(c);
    }
}

/// Canonical variable of state `z`.
pub fn state_var(z: StateId) -> Var {
    Var::new(z as u32 + 1)
}

/// The predicate true exactly on the given states.
pub fn state_set_predicate(states: impl IntoIterator<Item = StateId>) -> FormulaAst {
    FormulaAst::or(states.into_iter().map(|z| FormulaAst::var(state_var(z))))
}

/// Exactly one of `n` canonical state variables is true.
pub fn exactly_one(n: usize) -> FormulaAst {
    let mut parts = vec![FormulaAst::or((0..n).map(|z| FormulaAst::var(state_var(z))))];
    for z in 0..n {
        for w in z + 1..n {
            parts.push(FormulaAst::or([
                FormulaAst::lit(state_var(z).negative()),
                FormulaAst::lit(state_var(w).negative()),
            ]));
        }
    }
    FormulaAst::and(parts)
}

/// The states `z` whose one-hot valuation satisfies a canonical predicate.
pub fn predicate_states(f: &FormulaAst, num_states: usize) -> super::StateSet {
    (0..num_states).filter(|&z| f.eval(&|v: Var| v == state_var(z))).collect()
}

/// Variable layout of a `k`-step unrolling `s_0 t_1 s_1 … t_k s_k`.
#[derive(Clone, Debug)]
pub struct Unrolling {
    enc: StepEncoding,
    state_vars: Vec<Vec<Var>>,
    choice_vars: Vec<Vec<Var>>,
    chance_vars: Vec<Vec<Var>>,
    aux: Vec<Vec<Var>>,
    names: Vec<String>,
}

impl Unrolling {
    pub fn new(enc: StepEncoding, steps: usize) -> Unrolling {
        let mut names: Vec<String> = Vec::new();
        let mut fresh = |name: String| {
            names.push(name);
            Var::new(names.len() as u32)
        };
        let mut state_vars = Vec::with_capacity(steps + 1);
        let mut choice_vars = Vec::with_capacity(steps);
        let mut chance_vars = Vec::with_capacity(steps);
        for i in 0..=steps {
            if i > 0 {
                choice_vars.push((0..enc.choice_bits).map(|b| fresh(choice_name(b, enc.choice_bits, i))).collect());
                chance_vars.push(enc.chance_vars.iter().map(|c| fresh(format!("{}@{i}", c.name))).collect());
            }
            state_vars.push(enc.state_names.iter().map(|s| fresh(format!("{s}@{i}"))).collect());
        }
        Unrolling { enc, state_vars, choice_vars, chance_vars, aux: vec![Vec::new(); steps + 1], names }
    }

    pub fn steps(&self) -> usize {
        self.state_vars.len() - 1
    }

    pub fn num_vars(&self) -> u32 {
        self.names.len() as u32
    }

    pub fn state_block(&self, step: usize) -> &[Var] {
        &self.state_vars[step]
    }

    pub fn var_name(&self, v: Var) -> &str {
        &self.names[v.index() as usize - 1]
    }

    fn resolve(&self, l: SlotLit, step: usize) -> Literal {
        let v = match l.slot {
            Slot::Current(z) => self.state_vars[step - 1][z],
            Slot::Next(z) => self.state_vars[step][z],
            Slot::Choice(b) => self.choice_vars[step - 1][b],
            Slot::Chance(r) => self.chance_vars[step - 1][r],
        };
        Literal::new(v, l.positive)
    }

    pub fn init_clauses(&self) -> Vec<Clause> {
        let s0 = &self.state_vars[0];
        self.enc
            .init_clauses
            .iter()
            .map(|c| {
                Clause::new(c.iter().map(|l| match l.slot {
                    Slot::Current(z) => Literal::new(s0[z], l.positive),
                    _ => unreachable!("initial clauses mention only states"),
                }))
            })
            .collect()
    }

    /// Clauses of `Trans(s_{step−1}, t_step, s_step)`.
    pub fn trans_clauses(&self, step: usize) -> Vec<Clause> {
        assert!(step >= 1 && step <= self.steps());
        self.enc.trans_clauses.iter().map(|c| Clause::new(c.iter().map(|&l| self.resolve(l, step)))).collect()
    }

    /// A canonical predicate moved onto the state copy of `step`.
    pub fn at_step(&self, f: &FormulaAst, step: usize) -> FormulaAst {
        let block = &self.state_vars[step];
        f.rename(&|v: Var| block[v.index() as usize - 1])
    }

    /// Inverse of [`Unrolling::at_step`]; the formula must mention only that copy.
    pub fn to_canonical(&self, f: &FormulaAst, step: usize) -> FormulaAst {
        let block = &self.state_vars[step];
        f.rename(&|v: Var| {
            let z = block.iter().position(|&w| w == v).expect("variable of the state copy");
            state_var(z)
        })
    }

    /// CNF of a canonical predicate (or its negation) at `step`. Auxiliaries
    /// are quantified existentially right after that step's state block.
    pub fn predicate_clauses(&mut self, f: &FormulaAst, step: usize, negate: bool) -> Vec<Clause> {
        let g = self.at_step(f, step);
        let mut alloc = VarAllocator::after(self.num_vars());
        let enc = if negate { negate_to_cnf(&g, &mut alloc) } else { to_cnf(&g, &mut alloc) };
        for v in &enc.aux_vars {
            debug_assert_eq!(v.index(), self.num_vars() + 1);
            self.names.push(format!("aux{}@{step}", self.aux[step].len() + 1));
            self.aux[step].push(*v);
        }
        enc.clauses
    }

    pub fn prefix(&self) -> Prefix {
        let mut b: Vec<(Var, Quantifier)> = Vec::with_capacity(self.names.len());
        for i in 0..=self.steps() {
            if i > 0 {
                b.extend(self.choice_vars[i - 1].iter().map(|&v| (v, Quantifier::Exists)));
                b.extend(
                    self.chance_vars[i - 1]
                        .iter()
                        .zip(&self.enc.chance_vars)
                        .map(|(&v, c)| (v, Quantifier::Random(c.prob.clone()))),
                );
            }
            b.extend(self.state_vars[i].iter().map(|&v| (v, Quantifier::Exists)));
            b.extend(self.aux[i].iter().map(|&v| (v, Quantifier::Exists)));
        }
        Prefix::from_bindings(b).expect("unrolling binds each variable once")
    }

    pub fn formula(&self, matrix: Vec<Clause>) -> SsatFormula {
        SsatFormula::new(self.num_vars(), self.prefix(), matrix).expect("unrolling is closed")
    }
}

fn choice_name(bit: usize, bits: usize, step: usize) -> String {
    if bits == 1 {
        format!("act@{step}")
    } else {
        format!("act{}@{step}", bit + 1)
    }
}

/// `Q(k) : Init ∧ Trans_1 ∧ … ∧ Trans_k`, before any property clauses.
pub fn unroll(m: &Mdp, k: usize) -> (Unrolling, Vec<Clause>) {
    let u = Unrolling::new(encode_step(m), k);
    let mut clauses = u.init_clauses();
    for i in 1..=k {
        clauses.extend(u.trans_clauses(i));
    }
    (u, clauses)
}

/// Probability equals the maximal probability of hitting the target within `k` steps.
pub fn build_pbmc(m: &Mdp, k: usize) -> Result<SsatFormula, MdpError> {
    let target = m.target().ok_or(MdpError::MissingTarget)?;
    let (u, mut clauses) = unroll(m, k);
    let hit = (0..=k).flat_map(|i| target.iter().map(move |&z| (i, z)));
    clauses.push(Clause::new(hit.map(|(i, z)| u.state_block(i)[z].positive()).collect::<Vec<_>>()));
    Ok(u.formula(clauses))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QueryMode {
    Reach,
    Stability,
}

/// The partitioned query `Q(j) : A ∧ B` of one backward interpolation step.
#[derive(Clone, Debug)]
pub struct BackstepQuery {
    pub a: Vec<Clause>,
    pub b: Vec<Clause>,
    pub prefix: Prefix,
    pub num_vars: u32,
    pub unrolling: Unrolling,
}

impl BackstepQuery {
    /// Variables shared by both sides: the state copy `s_{j−1}`.
    pub fn common(&self) -> &[Var] {
        self.unrolling.state_block(self.unrolling.steps() - 1)
    }

    /// An interpolant over the shared copy, expressed canonically.
    pub fn to_canonical(&self, f: &FormulaAst) -> FormulaAst {
        self.unrolling.to_canonical(f, self.unrolling.steps() - 1)
    }
}

/// `A = Trans_j ∧ P(s_j)` with `P = pred` in reach mode and `P = ¬pred` in
/// stability mode; `B = Init ∧ Trans_1 ∧ … ∧ Trans_{j−1}`.
pub fn build_backstep_query(m: &Mdp, pred: &FormulaAst, j: usize, mode: QueryMode) -> BackstepQuery {
    assert!(j >= 1, "backward step depth starts at 1");
    let mut u = Unrolling::new(encode_step(m), j);
    let mut a = u.trans_clauses(j);
    a.extend(u.predicate_clauses(pred, j, mode == QueryMode::Stability));
    let mut b = u.init_clauses();
    for i in 1..j {
        b.extend(u.trans_clauses(i));
    }
    BackstepQuery { a, b, prefix: u.prefix(), num_vars: u.num_vars(), unrolling: u }
}

/// Runs must stay inside `breach` at every depth until they have visited the
/// target. With an absorbing target this is plain `⋀_i breach(s_i)`.
pub fn build_upper_bound(m: &Mdp, breach: &FormulaAst, k: usize) -> SsatFormula {
    let (mut u, mut clauses) = unroll(m, k);
    let target: Vec<StateId> = m.target().map(|t| t.iter().copied().collect()).unwrap_or_default();
    let mut visited: Vec<Literal> = Vec::new();
    for i in 0..=k {
        let stay = u.predicate_clauses(breach, i, false);
        // ∃aux ⋀(c ∨ L) ≡ L ∨ ∃aux ⋀c, so the escape extends every clause
        clauses.extend(stay.into_iter().map(|c| Clause::new(c.literals().iter().copied().chain(visited.iter().copied()))));
        visited.extend(target.iter().map(|&z| u.state_block(i)[z].positive()));
    }
    u.formula(clauses)
}

/// Runs must avoid `kernel` at every depth.
pub fn build_kernel_avoid(m: &Mdp, kernel: &FormulaAst, k: usize) -> SsatFormula {
    let (mut u, mut clauses) = unroll(m, k);
    for i in 0..=k {
        clauses.extend(u.predicate_clauses(kernel, i, true));
    }
    u.formula(clauses)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::rational::ratio;
    use crate::mdp::{parse_mdp, FIG3};
    use std::collections::BTreeSet;

    fn fig3() -> Mdp {
        parse_mdp(FIG3).unwrap()
    }

    fn named(u: &Unrolling, c: &Clause) -> BTreeSet<String> {
        c.literals()
            .iter()
            .map(|l| format!("{}{}", if l.is_positive() { "" } else { "¬" }, u.var_name(l.var())))
            .collect()
    }

    fn set(items: &[&str]) -> BTreeSet<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn fig3_transition_clauses() {
        let u = Unrolling::new(encode_step(&fig3()), 1);
        let clauses: Vec<_> = u.trans_clauses(1).iter().map(|c| named(&u, c)).collect();
        assert!(clauses.contains(&set(&["¬i@0", "pi@1", "f@1"])));
        assert!(clauses.contains(&set(&["¬i@0", "¬pi@1", "e@1"])));
        assert!(clauses.contains(&set(&["¬f@0", "f@1"])));
        assert!(clauses.contains(&set(&["¬s@0", "s@1"])));
        assert!(clauses.contains(&set(&["¬e@0", "¬act@1", "¬pea@1", "s@1"])));
        assert!(clauses.contains(&set(&["¬e@0", "act@1", "¬peb@1", "i@1"])));
        assert!(clauses.contains(&set(&["i@1", "f@1", "e@1", "s@1"])));
    }

    #[test]
    fn fig3_prefix_blocks() {
        let u = Unrolling::new(encode_step(&fig3()), 1);
        let rendered: Vec<String> = u
            .prefix()
            .bindings()
            .iter()
            .map(|(v, q)| match q {
                Quantifier::Exists => format!("E {}", u.var_name(*v)),
                Quantifier::Random(p) => format!("R{} {}", crate::logic::rational::format_exact(p), u.var_name(*v)),
            })
            .collect();
        assert_eq!(
            rendered,
            ["E i@0", "E f@0", "E e@0", "E s@0", "E act@1", "R9/10 pi@1", "R3/5 pea@1", "R1/2 peb@1", "E i@1", "E f@1", "E e@1", "E s@1"]
        );
    }

    #[test]
    fn chain_probabilities_multiply_out() {
        let m = parse_mdp("states x y z\ninit x\nactions a\ntrans x a x 1/2\ntrans x a y 1/3\ntrans x a z 1/6\ntrans y a y 1\ntrans z a z 1\n").unwrap();
        let enc = encode_step(&m);
        let probs: Vec<_> = enc.chance_vars.iter().map(|c| c.prob.clone()).collect();
        assert_eq!(probs, vec![ratio(1, 2), ratio(2, 3)]);
        let leaf = [probs[0].clone(), (Rational::one() - &probs[0]) * &probs[1], (Rational::one() - &probs[0]) * (Rational::one() - &probs[1])];
        assert_eq!(leaf, [ratio(1, 2), ratio(1, 3), ratio(1, 6)]);
    }

    #[test]
    fn backstep_query_sides() {
        let target = state_set_predicate([3]);
        let q = build_backstep_query(&fig3(), &target, 1, QueryMode::Reach);
        assert_eq!(q.b, q.unrolling.init_clauses());
        let common: BTreeSet<Var> = q.common().iter().copied().collect();
        let va: BTreeSet<Var> = q.a.iter().flat_map(|c| c.vars().collect::<Vec<_>>()).collect();
        let vb: BTreeSet<Var> = q.b.iter().flat_map(|c| c.vars().collect::<Vec<_>>()).collect();
        assert_eq!(va.intersection(&vb).copied().collect::<BTreeSet<_>>(), common);

        let q = build_backstep_query(&fig3(), &target, 3, QueryMode::Reach);
        let va: BTreeSet<Var> = q.a.iter().flat_map(|c| c.vars().collect::<Vec<_>>()).collect();
        let vb: BTreeSet<Var> = q.b.iter().flat_map(|c| c.vars().collect::<Vec<_>>()).collect();
        assert_eq!(va.intersection(&vb).copied().collect::<Vec<_>>(), q.common().to_vec());
    }

    #[test]
    fn predicates_round_trip_through_steps() {
        let u = Unrolling::new(encode_step(&fig3()), 2);
        let f = FormulaAst::or([FormulaAst::lit(state_var(1).negative()), FormulaAst::var(state_var(3))]);
        assert_eq!(u.to_canonical(&u.at_step(&f, 2), 2), f);
        assert_eq!(predicate_states(&f, 4), BTreeSet::from([0, 2, 3]));
        assert_eq!(predicate_states(&exactly_one(4), 4), BTreeSet::from([0, 1, 2, 3]));
    }

    #[test]
    fn aux_placed_after_owning_state_block() {
        let f = FormulaAst::and([FormulaAst::lit(state_var(1).negative()), FormulaAst::var(state_var(3))]);
        let g = FormulaAst::or([f.clone(), FormulaAst::var(state_var(0))]);
        let (mut u, _) = unroll(&fig3(), 1);
        let clauses = u.predicate_clauses(&g, 0, false);
        assert!(!clauses.is_empty());
        let names: Vec<&str> = u.prefix().bindings().iter().map(|(v, _)| u.var_name(*v)).collect();
        assert_eq!(&names[..6], &["i@0", "f@0", "e@0", "s@0", "aux1@0", "act@1"]);
    }
}
