//! Translate a negated property to a Büchi automaton and show the
//! distance and toughness values that order successors during search.

use std::error::Error;

use ptltl::buchi::{build_automaton, ltl_to_buchi, DEFAULT_TOUGHNESS_COEFF};
use ptltl::ltl::{parse_ltl, to_nnf, Ltl};

pub fn run() -> Result<(), Box<dyn Error>> {
    let f = parse_ltl("G (is-fireable(a) || F is-fireable(b)) && F G !is-fireable(c)")?;
    let negated = to_nnf(&Ltl::not(f.root.clone()));
    let raw = ltl_to_buchi(&negated);
    let aut = build_automaton(&negated, DEFAULT_TOUGHNESS_COEFF);
    println!("raw: {} states, simplified: {} states", raw.len(), aut.len());
    print!("{}", aut.dump());
    for s in 0..aut.len() {
        let by_heuristic: Vec<usize> = aut.ordered_successors(s).iter().map(|e| e.dst).collect();
        let by_index: Vec<usize> = aut.index_ordered_successors(s).iter().map(|e| e.dst).collect();
        println!("state {s}: heuristic {by_heuristic:?}, index {by_index:?}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
