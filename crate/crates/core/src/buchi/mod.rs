//! Büchi automata for negated properties: translation from LTL,
//! simplification and the distance/toughness heuristic used to order
//! product successors.

mod automaton;
mod simplify;
mod translate;

pub use automaton::{BuchiAutomaton, BuchiState, Edge, Label, DEFAULT_TOUGHNESS_COEFF};
pub use simplify::simplify_buchi;
pub use translate::ltl_to_buchi;

/// Returns a copy of `a` with `distance` and `toughness` filled in.
pub fn annotate_heuristic(a: &BuchiAutomaton, coeff: f64) -> BuchiAutomaton {
    let mut out = a.clone();
    out.annotate(coeff);
    out
}

/// Translation, simplification and annotation in one step.
pub fn build_automaton(f: &crate::ltl::Ltl, coeff: f64) -> BuchiAutomaton {
    annotate_heuristic(&simplify_buchi(&ltl_to_buchi(f)), coeff)
}
