//! Structural CNF conversion with definition-introducing auxiliaries.
//!
//! Auxiliaries are only constrained in one direction (`aux → subformula`),
//! which keeps the projection of the models onto the original variables exact.

use super::{Clause, FormulaAst, Literal, Var};

/// Hands out fresh variable indices above a starting point.
#[derive(Clone, Debug)]
pub struct VarAllocator {
    next: u32,
}

impl VarAllocator {
    /// The first variable handed out is `last_used + 1`.
    pub fn after(last_used: u32) -> VarAllocator {
        VarAllocator { next: last_used + 1 }
    }

    pub fn fresh(&mut self) -> Var {
        let v = Var::new(self.next);
        self.next += 1;
        v
    }

    /// Largest index handed out so far (or the starting bound).
    pub fn last(&self) -> u32 {
        self.next - 1
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CnfEncoding {
    pub clauses: Vec<Clause>,
    pub aux_vars: Vec<Var>,
}

/// CNF of `¬f`.
pub fn negate_to_cnf(f: &FormulaAst, alloc: &mut VarAllocator) -> CnfEncoding {
    let mut enc = CnfEncoding::default();
    let nnf = to_nnf(f, false);
    implied_by(None, &nnf, alloc, &mut enc);
    enc
}

/// CNF of `f` itself.
pub fn to_cnf(f: &FormulaAst, alloc: &mut VarAllocator) -> CnfEncoding {
    negate_to_cnf(&FormulaAst::not(f.clone()), alloc)
}

// Negation normal form, constants folded.
#[derive(Clone, Debug)]
enum Nnf {
    True,
    False,
    Lit(Literal),
    And(Vec<Nnf>),
    Or(Vec<Nnf>),
}

fn to_nnf(f: &FormulaAst, positive: bool) -> Nnf {
    match f {
        FormulaAst::True => {
            if positive {
                Nnf::True
            } else {
                Nnf::False
            }
        }
        FormulaAst::False => {
            if positive {
                Nnf::False
            } else {
                Nnf::True
            }
        }
        FormulaAst::Lit(l) => Nnf::Lit(if positive { *l } else { l.negate() }),
        FormulaAst::Not(g) => to_nnf(g, !positive),
        FormulaAst::And(gs) | FormulaAst::Or(gs) => {
            let kids: Vec<Nnf> = gs.iter().map(|g| to_nnf(g, positive)).collect();
            let conj = matches!(f, FormulaAst::And(_)) == positive;
            if conj {
                if kids.iter().any(|k| matches!(k, Nnf::False)) {
                    return Nnf::False;
                }
                let kids: Vec<Nnf> = kids.into_iter().filter(|k| !matches!(k, Nnf::True)).collect();
                if kids.is_empty() {
                    Nnf::True
                } else {
                    Nnf::And(kids)
                }
            } else {
                if kids.iter().any(|k| matches!(k, Nnf::True)) {
                    return Nnf::True;
                }
                let kids: Vec<Nnf> = kids.into_iter().filter(|k| !matches!(k, Nnf::False)).collect();
                if kids.is_empty() {
                    Nnf::False
                } else {
                    Nnf::Or(kids)
                }
            }
        }
    }
}

fn push_clause(lits: Vec<Literal>, enc: &mut CnfEncoding) {
    let c = Clause::new(lits);
    if !c.is_tautological() {
        enc.clauses.push(c);
    }
}

// Adds clauses for `guard → g` (or `g` when unguarded).
fn implied_by(guard: Option<Literal>, g: &Nnf, alloc: &mut VarAllocator, enc: &mut CnfEncoding) {
    let head: Vec<Literal> = guard.map(|a| vec![a.negate()]).unwrap_or_default();
    match g {
        Nnf::True => {}
        Nnf::False => push_clause(head, enc),
        Nnf::Lit(l) => {
            let mut c = head;
            c.push(*l);
            push_clause(c, enc);
        }
        Nnf::And(gs) => gs.iter().for_each(|h| implied_by(guard, h, alloc, enc)),
        Nnf::Or(gs) => {
            let mut c = head;
            let mut pending = Vec::new();
            collect_disjuncts(gs, &mut c, &mut pending, alloc, enc);
            push_clause(c, enc);
            for (aux, h) in pending {
                implied_by(Some(aux), h, alloc, enc);
            }
        }
    }
}

fn collect_disjuncts<'a>(
    gs: &'a [Nnf],
    clause: &mut Vec<Literal>,
    pending: &mut Vec<(Literal, &'a Nnf)>,
    alloc: &mut VarAllocator,
    enc: &mut CnfEncoding,
) {
    for h in gs {
        match h {
            Nnf::Lit(l) => clause.push(*l),
            Nnf::Or(inner) => collect_disjuncts(inner, clause, pending, alloc, enc),
            // constants are folded by to_nnf
            Nnf::True | Nnf::False => unreachable!("constant inside disjunction"),
            Nnf::And(_) => {
                let aux = alloc.fresh();
                enc.aux_vars.push(aux);
                clause.push(aux.positive());
                pending.push((aux.positive(), h));
            }
        }
    }
}
