//! Plan a packed encoding for each scheme and read or write single places
//! in the packed words without decoding the marking.

use std::error::Error;

use ptltl::codec::{decode, drw_read, drw_write, encode, plan_encoding, Scheme};
use ptltl::models;

pub fn run() -> Result<(), Box<dyn Error>> {
    let net = models::philosophers(3, true);
    for scheme in [None, Some(Scheme::Default16), Some(Scheme::OneSafe), Some(Scheme::Nupn), Some(Scheme::PInvariant)] {
        let plan = plan_encoding(&net, scheme)?;
        let label = match scheme {
            None => format!("auto={}", plan.scheme()),
            Some(_) => plan.scheme().to_string(),
        };
        println!(
            "{label:<17} {:>3} bits in {} word(s)",
            plan.total_bits(),
            plan.words()
        );
    }

    let plan = plan_encoding(&net, Some(Scheme::Nupn))?;
    print!("{}", plan.layout_tsv(&net));
    let mut words = encode(&plan, net.initial_marking())?.0;
    let (think0, has_l0, fork0) = (
        net.place_by_name("think_0").ok_or("think_0")?,
        net.place_by_name("hasL_0").ok_or("hasL_0")?,
        net.place_by_name("fork_0").ok_or("fork_0")?,
    );
    // fire takeL_0 by hand: decrements first, then the increment
    drw_write(&plan, &mut words, think0, 0)?;
    drw_write(&plan, &mut words, fork0, 0)?;
    drw_write(&plan, &mut words, has_l0, 1)?;
    println!("hasL_0 = {}, words = {:08x?}", drw_read(&plan, &words, has_l0), words);
    println!("decoded: {:?}", decode(&plan, &words));

    // a second token in a unit does not fit
    let think1 = net.place_by_name("think_1").ok_or("think_1")?;
    let eat1 = net.place_by_name("eat_1").ok_or("eat_1")?;
    match drw_write(&plan, &mut words, eat1, 1) {
        Ok(()) => println!("unexpected: eat_1 written next to think_1 = {}", drw_read(&plan, &words, think1)),
        Err(e) => println!("rejected: {e}"),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
