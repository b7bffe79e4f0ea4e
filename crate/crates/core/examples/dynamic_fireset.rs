//! Enumerate enabled transitions lazily, resuming after the last one fired,
//! and compare with the full fireset.

use std::error::Error;

use ptltl::models;
use ptltl::petri::{fire, fireset, next_enabled};

pub fn run() -> Result<(), Box<dyn Error>> {
    let net = models::philosophers(4, false);
    let mut m = net.initial_marking().to_vec();
    // walk a few steps, always taking the second enabled transition if any
    for step in 0..6 {
        let mut lazy = Vec::new();
        let mut last = None;
        while let Some(t) = next_enabled(&net, &m[..], last) {
            lazy.push(t);
            last = Some(t);
        }
        let full = fireset(&net, &m[..]);
        assert_eq!(lazy, full);
        let names: Vec<&str> = full.iter().map(|&t| net.transitions()[t].name.as_str()).collect();
        println!("step {step}: enabled [{}]", names.join(", "));
        let Some(&t) = full.get(1).or(full.first()) else {
            println!("deadlock");
            break;
        };
        m = fire(&net, &m, t).ok_or("token overflow")?;
    }

    // first enabled transition only: what a depth-first search needs
    // before descending
    let first = next_enabled(&net, net.initial_marking(), None);
    println!("first enabled at m0: {:?}", first.map(|t| &net.transitions()[t].name));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
