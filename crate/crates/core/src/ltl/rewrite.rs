use super::{AtomId, Ltl, NetFacts, Verdict3};
use crate::petri::AtomicProp;

/// Pushes negations down to atoms.
pub fn to_nnf(f: &Ltl) -> Ltl {
    nnf(f, false)
}

fn nnf(f: &Ltl, neg: bool) -> Ltl {
    match (f, neg) {
        (Ltl::True, false) | (Ltl::False, true) => Ltl::True,
        (Ltl::True, true) | (Ltl::False, false) => Ltl::False,
        (Ltl::Atom(a), false) => Ltl::Atom(*a),
        (Ltl::Atom(a), true) => Ltl::not(Ltl::Atom(*a)),
        (Ltl::Not(x), _) => nnf(x, !neg),
        (Ltl::And(a, b), false) => Ltl::and(nnf(a, false), nnf(b, false)),
        (Ltl::And(a, b), true) => Ltl::or(nnf(a, true), nnf(b, true)),
        (Ltl::Or(a, b), false) => Ltl::or(nnf(a, false), nnf(b, false)),
        (Ltl::Or(a, b), true) => Ltl::and(nnf(a, true), nnf(b, true)),
        (Ltl::Next(x), _) => Ltl::next(nnf(x, neg)),
        (Ltl::Finally(x), false) => Ltl::finally(nnf(x, false)),
        (Ltl::Finally(x), true) => Ltl::globally(nnf(x, true)),
        (Ltl::Globally(x), false) => Ltl::globally(nnf(x, false)),
        (Ltl::Globally(x), true) => Ltl::finally(nnf(x, true)),
        (Ltl::Until(a, b), false) => Ltl::until(nnf(a, false), nnf(b, false)),
        (Ltl::Until(a, b), true) => Ltl::release(nnf(a, true), nnf(b, true)),
        (Ltl::Release(a, b), false) => Ltl::release(nnf(a, false), nnf(b, false)),
        (Ltl::Release(a, b), true) => Ltl::until(nnf(a, true), nnf(b, true)),
    }
}

/// Simplifies an NNF formula: atoms decided structurally on `net` become
/// constants, then constants are propagated.
pub fn simplify(f: &Ltl, atoms: &[AtomicProp], facts: &NetFacts) -> Ltl {
    simplify_with(f, |a| super::eval_atom_structurally(facts, &atoms[a]))
}

/// Same as [`simplify`] with an arbitrary atom oracle.
pub fn simplify_with(f: &Ltl, verdict: impl Fn(AtomId) -> Verdict3) -> Ltl {
    let mut cur = f.clone();
    loop {
        let next = step(&cur, &verdict);
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

fn constant(v: Verdict3, positive: bool) -> Option<Ltl> {
    match (v, positive) {
        (Verdict3::AlwaysTrue, true) | (Verdict3::AlwaysFalse, false) => Some(Ltl::True),
        (Verdict3::AlwaysFalse, true) | (Verdict3::AlwaysTrue, false) => Some(Ltl::False),
        (Verdict3::Unknown, _) => None,
    }
}

fn step(f: &Ltl, verdict: &impl Fn(AtomId) -> Verdict3) -> Ltl {
    use Ltl::*;
    match f {
        True | False => f.clone(),
        Atom(a) => constant(verdict(*a), true).unwrap_or_else(|| f.clone()),
        Not(x) => match &**x {
            Atom(a) => constant(verdict(*a), false).unwrap_or_else(|| f.clone()),
            True => False,
            False => True,
            _ => Ltl::not(step(x, verdict)),
        },
        And(a, b) => match (step(a, verdict), step(b, verdict)) {
            (False, _) | (_, False) => False,
            (True, x) | (x, True) => x,
            (x, y) => Ltl::and(x, y),
        },
        Or(a, b) => match (step(a, verdict), step(b, verdict)) {
            (True, _) | (_, True) => True,
            (False, x) | (x, False) => x,
            (x, y) => Ltl::or(x, y),
        },
        Next(x) => match step(x, verdict) {
            c @ (True | False) => c,
            x => Ltl::next(x),
        },
        Finally(x) => match step(x, verdict) {
            c @ (True | False) => c,
            x => Ltl::finally(x),
        },
        Globally(x) => match step(x, verdict) {
            c @ (True | False) => c,
            x => Ltl::globally(x),
        },
        Until(a, b) => match (step(a, verdict), step(b, verdict)) {
            (_, c @ (True | False)) => c,
            (x, y) => Ltl::until(x, y),
        },
        Release(a, b) => match (step(a, verdict), step(b, verdict)) {
            (_, c @ (True | False)) => c,
            (x, y) => Ltl::release(x, y),
        },
    }
}
