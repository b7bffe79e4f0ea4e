use super::{is_enabled, PetriNet, TokenRead};

/// Integer-valued term of a comparison atom, resolved against a net.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum IntTerm {
    Const(i64),
    /// Sum of the token counts of the listed places. A place listed twice
    /// counts twice.
    TokensCount(Vec<usize>),
}

/// An atomic proposition with names resolved to net indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AtomicProp {
    /// At least one listed transition is enabled.
    Fireable(Vec<usize>),
    /// `lhs <= rhs`, or `lhs < rhs` when `strict`.
    Compare {
        lhs: IntTerm,
        strict: bool,
        rhs: IntTerm,
    },
}

impl IntTerm {
    pub fn value<M: TokenRead + ?Sized>(&self, marking: &M) -> i64 {
        match self {
            IntTerm::Const(k) => *k,
            IntTerm::TokensCount(places) => places.iter().map(|&p| marking.tokens(p) as i64).sum(),
        }
    }
}

/// Truth of `atom` under `marking`.
pub fn eval_atom<M: TokenRead + ?Sized>(net: &PetriNet, marking: &M, atom: &AtomicProp) -> bool {
    match atom {
        AtomicProp::Fireable(ts) => ts.iter().any(|&t| is_enabled(net, marking, t)),
        AtomicProp::Compare { lhs, strict, rhs } => {
            let (a, b) = (lhs.value(marking), rhs.value(marking));
            if *strict {
                a < b
            } else {
                a <= b
            }
        }
    }
}
