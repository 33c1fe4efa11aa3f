//! Finite MDPs with exact transition probabilities and their text format.
//!
//! ```text
//! # comment
//! states i f e s
//! init i
//! actions a b
//! target s            optional
//! region i e s        optional
//! trans i a e 0.9     state action successor probability
//! ```

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_traits::{One, Zero};

use super::MdpError;
use crate::logic::rational::{format_exact, parse_rational};
use crate::Rational;

pub type StateId = usize;
pub type ActionId = usize;
pub type StateSet = BTreeSet<StateId>;

/// One `(successor, probability)` list, in declaration order.
pub type Distribution = Vec<(StateId, Rational)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mdp {
    states: Vec<String>,
    actions: Vec<String>,
    init: StateId,
    // [state][action]
    trans: Vec<Vec<Option<Distribution>>>,
    target: Option<StateSet>,
    region: Option<StateSet>,
}

impl Mdp {
    /// Validates distributions (positive weights summing to one, no repeated
    /// successor) and that every state has an action.
    pub fn new(
        states: Vec<String>,
        actions: Vec<String>,
        init: StateId,
        transitions: impl IntoIterator<Item = (StateId, ActionId, StateId, Rational)>,
        target: Option<StateSet>,
        region: Option<StateSet>,
    ) -> Result<Mdp, MdpError> {
        let n = states.len();
        if init >= n {
            return Err(MdpError::UnknownState(format!("#{init}")));
        }
        let mut trans: Vec<Vec<Option<Distribution>>> = vec![vec![None; actions.len()]; n];
        for (s, a, t, p) in transitions {
            if s >= n || t >= n {
                return Err(MdpError::UnknownState(format!("#{}", s.max(t))));
            }
            if a >= actions.len() {
                return Err(MdpError::UnknownAction(format!("#{a}")));
            }
            if p <= Rational::zero() || p > Rational::one() {
                return Err(MdpError::BadProbability { state: states[s].clone(), action: actions[a].clone(), prob: format_exact(&p) });
            }
            let dist = trans[s][a].get_or_insert_with(Vec::new);
            if dist.iter().any(|(u, _)| *u == t) {
                return Err(MdpError::DuplicateTransition { state: states[s].clone(), action: actions[a].clone(), successor: states[t].clone() });
            }
            dist.push((t, p));
        }
        for (s, row) in trans.iter().enumerate() {
            if row.iter().all(Option::is_none) {
                return Err(MdpError::NoActions(states[s].clone()));
            }
            for (a, dist) in row.iter().enumerate() {
                if let Some(dist) = dist {
                    let sum: Rational = dist.iter().map(|(_, p)| p).sum();
                    if !sum.is_one() {
                        return Err(MdpError::DistributionSum {
                            state: states[s].clone(),
                            action: actions[a].clone(),
                            sum: format_exact(&sum),
                        });
                    }
                }
            }
        }
        for set in target.iter().chain(region.iter()) {
            if let Some(&bad) = set.iter().find(|&&z| z >= n) {
                return Err(MdpError::UnknownState(format!("#{bad}")));
            }
        }
        Ok(Mdp { states, actions, init, trans, target, region })
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn actions(&self) -> &[String] {
        &self.actions
    }

    pub fn state_name(&self, s: StateId) -> &str {
        &self.states[s]
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|n| n == name)
    }

    pub fn init(&self) -> StateId {
        self.init
    }

    pub fn target(&self) -> Option<&StateSet> {
        self.target.as_ref()
    }

    pub fn region(&self) -> Option<&StateSet> {
        self.region.as_ref()
    }

    pub fn with_target(mut self, target: StateSet) -> Mdp {
        self.target = Some(target);
        self
    }

    pub fn with_region(mut self, region: StateSet) -> Mdp {
        self.region = Some(region);
        self
    }

    pub fn all_states(&self) -> StateSet {
        (0..self.states.len()).collect()
    }

    pub fn distribution(&self, s: StateId, a: ActionId) -> Option<&[(StateId, Rational)]> {
        self.trans[s][a].as_deref()
    }

    /// Actions with a distribution at `s`, in declaration order.
    pub fn available(&self, s: StateId) -> Vec<ActionId> {
        (0..self.actions.len()).filter(|&a| self.trans[s][a].is_some()).collect()
    }

    /// Every `(action, distribution)` pair at `s`.
    pub fn choices(&self, s: StateId) -> impl Iterator<Item = (ActionId, &[(StateId, Rational)])> + '_ {
        self.trans[s].iter().enumerate().filter_map(|(a, d)| d.as_deref().map(|d| (a, d)))
    }

    /// `{a,b}` style rendering using state names.
    pub fn format_set(&self, set: &StateSet) -> String {
        let names: Vec<&str> = set.iter().map(|&z| self.state_name(z)).collect();
        format!("{{{}}}", names.join(","))
    }

    /// Parses a whitespace or comma separated list of state names.
    pub fn parse_state_list(&self, text: &str) -> Result<StateSet, MdpError> {
        text.split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| self.state_id(t).ok_or_else(|| MdpError::UnknownState(t.to_string())))
            .collect()
    }
}

fn perr(line: usize, msg: impl Into<String>) -> MdpError {
    MdpError::Parse { line, msg: msg.into() }
}

pub fn parse_mdp(text: &str) -> Result<Mdp, MdpError> {
    let mut states: Option<Vec<String>> = None;
    let mut actions: Option<Vec<String>> = None;
    let mut init: Option<String> = None;
    let mut target: Option<Vec<String>> = None;
    let mut region: Option<Vec<String>> = None;
    let mut rows: Vec<(usize, String, String, String, Rational)> = Vec::new();

    for (no, raw) in text.lines().enumerate() {
        let line_no = no + 1;
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let mut toks = line.split_whitespace();
        let key = toks.next().unwrap();
        let rest: Vec<String> = toks.map(str::to_string).collect();
        let once = |seen: bool| if seen { Err(perr(line_no, format!("duplicate `{key}` line"))) } else { Ok(()) };
        match key {
            "states" => {
                once(states.is_some())?;
                if rest.is_empty() {
                    return Err(perr(line_no, "no states declared"));
                }
                let unique: BTreeSet<&String> = rest.iter().collect();
                if unique.len() != rest.len() {
                    return Err(perr(line_no, "repeated state name"));
                }
                states = Some(rest);
            }
            "actions" => {
                once(actions.is_some())?;
                if rest.is_empty() {
                    return Err(perr(line_no, "no actions declared"));
                }
                let unique: BTreeSet<&String> = rest.iter().collect();
                if unique.len() != rest.len() {
                    return Err(perr(line_no, "repeated action name"));
                }
                actions = Some(rest);
            }
            "init" => {
                once(init.is_some())?;
                if rest.len() != 1 {
                    return Err(perr(line_no, "expected `init <state>`"));
                }
                init = rest.into_iter().next();
            }
            "target" => {
                once(target.is_some())?;
                target = Some(rest);
            }
            "region" => {
                once(region.is_some())?;
                region = Some(rest);
            }
            "trans" => {
                let [s, a, t, p] = <[String; 4]>::try_from(rest).map_err(|_| perr(line_no, "expected `trans <state> <action> <successor> <prob>`"))?;
                let p = parse_rational(&p).map_err(|e| perr(line_no, e.to_string()))?;
                rows.push((line_no, s, a, t, p));
            }
            other => return Err(perr(line_no, format!("unknown keyword `{other}`"))),
        }
    }

    let states = states.ok_or_else(|| perr(0, "missing `states` line"))?;
    let actions = actions.ok_or_else(|| perr(0, "missing `actions` line"))?;
    let state = |name: &str| states.iter().position(|n| n == name).ok_or_else(|| MdpError::UnknownState(name.to_string()));
    let init = state(&init.ok_or_else(|| perr(0, "missing `init` line"))?)?;
    let set = |names: Option<Vec<String>>| -> Result<Option<StateSet>, MdpError> {
        names.map(|ns| ns.iter().map(|n| state(n)).collect()).transpose()
    };
    let target = set(target)?;
    let region = set(region)?;
    let mut transitions = Vec::with_capacity(rows.len());
    for (line_no, s, a, t, p) in rows {
        let a = actions.iter().position(|n| *n == a).ok_or_else(|| perr(line_no, format!("unknown action `{a}`")))?;
        transitions.push((state(&s)?, a, state(&t)?, p));
    }
    Mdp::new(states.clone(), actions.clone(), init, transitions, target, region)
}

pub fn write_mdp(m: &Mdp) -> String {
    let mut out = String::new();
    writeln!(out, "states {}", m.states.join(" ")).unwrap();
    writeln!(out, "init {}", m.state_name(m.init)).unwrap();
    writeln!(out, "actions {}", m.actions.join(" ")).unwrap();
    let names = |set: &StateSet| set.iter().map(|&z| m.state_name(z)).collect::<Vec<_>>().join(" ");
    if let Some(t) = &m.target {
        writeln!(out, "target {}", names(t)).unwrap();
    }
    if let Some(r) = &m.region {
        writeln!(out, "region {}", names(r)).unwrap();
    }
    for s in 0..m.num_states() {
        for (a, dist) in m.choices(s) {
            for (t, p) in dist {
                writeln!(out, "trans {} {} {} {}", m.states[s], m.actions[a], m.states[*t], format_exact(p)).unwrap();
            }
        }
    }
    out
}
