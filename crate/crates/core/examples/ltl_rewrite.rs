//! Parse formulas, push negations inward and simplify with atoms that
//! structural facts about the net already decide.

use std::error::Error;

use ptltl::ltl::{parse_ltl, simplify, to_nnf, Ltl, NetFacts};
use ptltl::models;

pub fn run() -> Result<(), Box<dyn Error>> {
    let net = models::philosophers(3, true);
    let facts = NetFacts::of(&net);
    for text in [
        "!G F is-fireable(takeL_0)",
        "G (tokens-count(eat_0) <= 1)",
        "F (2 <= tokens-count(think_0)) || X is-fireable(release_1)",
        "!(tokens-count(hasL_0) <= 0 U is-fireable(takeR_0))",
    ] {
        let f = parse_ltl(text)?;
        let atoms = f.bind(&net)?;
        let nnf = to_nnf(&f.root);
        let small = simplify(&nnf, &atoms, &facts);
        println!("{text}");
        println!("  nnf:        {nnf:?}");
        println!("  simplified: {small:?}");
        if small == Ltl::True {
            println!("  decided without search");
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
