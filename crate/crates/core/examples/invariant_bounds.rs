//! Compute place invariants and the token bounds they imply, then use
//! them to size a packed encoding.

use std::error::Error;

use ptltl::codec::{compute_invariant_bounds, plan_encoding, Scheme};
use ptltl::models;

pub fn run() -> Result<(), Box<dyn Error>> {
    let net = models::producer_consumer(6);
    let inv = compute_invariant_bounds(&net);
    let name = |p: usize| net.places()[p].name.as_str();
    for y in &inv.semipositive {
        let terms: Vec<String> = y
            .iter()
            .enumerate()
            .filter(|(_, &w)| w != 0)
            .map(|(p, &w)| if w == 1 { name(p).to_string() } else { format!("{w}*{}", name(p)) })
            .collect();
        let c: i64 = y.iter().zip(net.initial_marking()).map(|(&w, &m)| w * i64::from(m)).sum();
        println!("{} = {c}", terms.join(" + "));
    }
    for (p, b) in inv.bounds.iter().enumerate() {
        match b {
            Some(b) => println!("  {:<8} <= {b}", name(p)),
            None => println!("  {:<8} unbounded by invariants", name(p)),
        }
    }
    let plan = plan_encoding(&net, Some(Scheme::PInvariant))?;
    let default = plan_encoding(&net, Some(Scheme::Default16))?;
    println!("p-invariant layout: {} bits (default: {})", plan.total_bits(), default.total_bits());
    print!("{}", plan.layout_tsv(&net));

    // an unbounded net has no p-invariant encoding
    let grow = {
        let mut b = ptltl::petri::NetBuilder::new();
        let p = b.place("p", 0);
        let t = b.transition("t");
        b.output(t, p, 1);
        b.build()?
    };
    if let Err(e) = plan_encoding(&grow, Some(Scheme::PInvariant)) {
        println!("unbounded net: {e}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
