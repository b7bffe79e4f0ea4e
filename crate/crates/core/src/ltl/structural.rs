//! Deciding atoms from net structure alone.
//!
//! The rules cover `tokens-count` comparisons against constants on 1-safe
//! nets and on NUPNs (where each unit holds at most one token). Strict
//! comparisons against constants are normalized to `<=` first.

use crate::codec::{compute_invariant_bounds, is_one_safe};
use crate::petri::{AtomicProp, IntTerm, PetriNet};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict3 {
    AlwaysTrue,
    AlwaysFalse,
    Unknown,
}

/// Structural facts about a net used by [`eval_atom_structurally`].
#[derive(Debug, Clone)]
pub struct NetFacts {
    pub one_safe: bool,
    /// Unit of each place, for NUPNs.
    pub unit_of: Option<Vec<usize>>,
}

impl NetFacts {
    pub fn of(net: &PetriNet) -> Self {
        let inv = compute_invariant_bounds(net);
        NetFacts {
            one_safe: is_one_safe(net, &inv),
            unit_of: net
                .units()
                .map(|_| net.places().iter().map(|p| p.unit.unwrap()).collect()),
        }
    }

    /// Facts that decide nothing.
    pub fn none() -> Self {
        NetFacts {
            one_safe: false,
            unit_of: None,
        }
    }

    /// Upper bound on `tokens-count(places)` on a NUPN: every unit
    /// contributes at most the largest multiplicity among its listed places.
    fn nupn_cap(&self, places: &[usize]) -> Option<i64> {
        let unit_of = self.unit_of.as_ref()?;
        let mut per_unit: Vec<(usize, usize, i64)> = Vec::new();
        for &p in places {
            let u = unit_of[p];
            match per_unit.iter_mut().find(|(uu, pp, _)| *uu == u && *pp == p) {
                Some(e) => e.2 += 1,
                None => per_unit.push((u, p, 1)),
            }
        }
        let mut best: Vec<(usize, i64)> = Vec::new();
        for (u, _, mult) in per_unit {
            match best.iter_mut().find(|(uu, _)| *uu == u) {
                Some(e) => e.1 = e.1.max(mult),
                None => best.push((u, mult)),
            }
        }
        Some(best.iter().map(|(_, m)| m).sum())
    }

    /// Upper bound on `tokens-count(places)` from the rules that apply.
    fn cap(&self, places: &[usize]) -> Option<i64> {
        let safe = self.one_safe.then_some(places.len() as i64);
        match (safe, self.nupn_cap(places)) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }
}

/// Decides `atom` on every reachable marking when structure allows it.
///
/// - `k <= tokens-count(..)` with `k <= 0`: always true
/// - `tokens-count(p1..pn) <= k`: always true when the net is 1-safe and
///   `k >= n`, or a NUPN and `k` is at least the number of units involved
/// - `k <= tokens-count(p1..pn)`: always false under the same conditions
///   with `k` above the cap
pub fn eval_atom_structurally(facts: &NetFacts, atom: &AtomicProp) -> Verdict3 {
    let AtomicProp::Compare { lhs, strict, rhs } = atom else {
        return Verdict3::Unknown;
    };
    let decide = |b: bool| if b { Verdict3::AlwaysTrue } else { Verdict3::AlwaysFalse };
    match (lhs, rhs) {
        (IntTerm::Const(a), IntTerm::Const(b)) => decide(if *strict { a < b } else { a <= b }),
        (IntTerm::Const(k), IntTerm::TokensCount(ps)) => {
            // k < e  <=>  k+1 <= e
            let k = if *strict { k.saturating_add(1) } else { *k };
            if k <= 0 {
                Verdict3::AlwaysTrue
            } else if facts.cap(ps).is_some_and(|cap| k > cap) {
                Verdict3::AlwaysFalse
            } else {
                Verdict3::Unknown
            }
        }
        (IntTerm::TokensCount(ps), IntTerm::Const(k)) => {
            let k = if *strict { k.saturating_sub(1) } else { *k };
            if k < 0 {
                Verdict3::AlwaysFalse
            } else if facts.cap(ps).is_some_and(|cap| k >= cap) {
                Verdict3::AlwaysTrue
            } else {
                Verdict3::Unknown
            }
        }
        (IntTerm::TokensCount(_), IntTerm::TokensCount(_)) => Verdict3::Unknown,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn le(lhs: IntTerm, rhs: IntTerm) -> AtomicProp {
        AtomicProp::Compare { lhs, strict: false, rhs }
    }
    fn tc(ps: &[usize]) -> IntTerm {
        IntTerm::TokensCount(ps.to_vec())
    }

    #[test]
    fn zero_le_anything() {
        let f = NetFacts::none();
        assert_eq!(eval_atom_structurally(&f, &le(IntTerm::Const(0), tc(&[0, 1]))), Verdict3::AlwaysTrue);
        assert_eq!(eval_atom_structurally(&f, &le(tc(&[0]), IntTerm::Const(5))), Verdict3::Unknown);
        assert_eq!(
            eval_atom_structurally(&f, &AtomicProp::Fireable(vec![0])),
            Verdict3::Unknown
        );
    }

    #[test]
    fn one_safe_rows() {
        let f = NetFacts { one_safe: true, unit_of: None };
        assert_eq!(eval_atom_structurally(&f, &le(tc(&[0, 1, 2]), IntTerm::Const(3))), Verdict3::AlwaysTrue);
        assert_eq!(eval_atom_structurally(&f, &le(tc(&[0, 1, 2]), IntTerm::Const(2))), Verdict3::Unknown);
        // 3 < tokens-count(p1,p2) with n = 2
        let strict = AtomicProp::Compare { lhs: IntTerm::Const(3), strict: true, rhs: tc(&[0, 1]) };
        assert_eq!(eval_atom_structurally(&f, &strict), Verdict3::AlwaysFalse);
        assert_eq!(eval_atom_structurally(&f, &le(IntTerm::Const(2), tc(&[0, 1]))), Verdict3::Unknown);
        // multiplicity counts
        assert_eq!(eval_atom_structurally(&f, &le(tc(&[0, 0]), IntTerm::Const(1))), Verdict3::Unknown);
    }

    #[test]
    fn nupn_rows() {
        // places 0 and 1 share unit 0, place 2 is alone in unit 1
        let f = NetFacts { one_safe: false, unit_of: Some(vec![0, 0, 1]) };
        // 1 < tokens-count(p0, p1): same unit, so at most one token
        let strict = AtomicProp::Compare { lhs: IntTerm::Const(1), strict: true, rhs: tc(&[0, 1]) };
        assert_eq!(eval_atom_structurally(&f, &strict), Verdict3::AlwaysFalse);
        assert_eq!(eval_atom_structurally(&f, &le(tc(&[0, 1, 2]), IntTerm::Const(2))), Verdict3::AlwaysTrue);
        assert_eq!(eval_atom_structurally(&f, &le(tc(&[0, 1, 2]), IntTerm::Const(1))), Verdict3::Unknown);
        assert_eq!(eval_atom_structurally(&f, &le(IntTerm::Const(3), tc(&[0, 1, 2]))), Verdict3::AlwaysFalse);
        // a place listed twice can contribute two
        assert_eq!(eval_atom_structurally(&f, &le(tc(&[0, 0]), IntTerm::Const(1))), Verdict3::Unknown);
    }
}
