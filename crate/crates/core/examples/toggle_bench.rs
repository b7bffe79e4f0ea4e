//! Run one property with each optimization switched on alone and compare
//! time, memory and expansions against the baseline.

use std::error::Error;

use ptltl::explore::{check, CheckOptions};
use ptltl::ltl::parse_ltl;
use ptltl::models;

pub fn run() -> Result<(), Box<dyn Error>> {
    let net = models::counter_grid(60);
    let f = parse_ltl("F G (!is-fireable(t_dead) || tokens-count(y) <= 3) && F !(tokens-count(x) <= 1000)")?;
    let base = CheckOptions::baseline();
    let configs = [
        ("ORI", base.clone()),
        ("DYN", CheckOptions { dynamic_fireset: true, ..base.clone() }),
        ("DRW", CheckOptions { direct_rw: true, ..base.clone() }),
        ("HBA", CheckOptions { heuristic: true, ..base.clone() }),
        ("ALL", CheckOptions::default()),
    ];
    println!("config  verdict    seconds   peak_bytes  metadata  expansions");
    for (name, opts) in configs {
        let out = check(&net, &f, &opts)?;
        let s = &out.stats;
        println!(
            "{name:<6}  {:<9} {:>8.4} {:>12} {:>9} {:>11}",
            out.verdict.name(),
            s.wall_seconds,
            s.peak_bytes,
            s.metadata_bytes,
            s.product_states
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
