//! Check a formula file against a PNML model and print verdicts with
//! counterexamples.
//!
//! ```text
//! cargo run --example model_check [model.pnml formulas.ltl]
//! ```

use std::error::Error;
use std::path::{Path, PathBuf};

use ptltl::cli::load_net;
use ptltl::explore::{check, CheckOptions, Verdict};
use ptltl::ltl::parse_formula_file;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/data").join(name)
}

pub fn run() -> Result<(), Box<dyn Error>> {
    check_file(&data("philosophers-3.pnml"), &data("philosophers.ltl"))
}

fn check_file(net_path: &Path, ltl_path: &Path) -> Result<(), Box<dyn Error>> {
    let net = load_net(net_path)?;
    let formulas = parse_formula_file(&std::fs::read_to_string(ltl_path)?)?;
    for (i, f) in formulas.iter().enumerate() {
        let out = check(&net, f, &CheckOptions::default())?;
        println!(
            "{}: {:<9} {} markings, {} expansions  {}",
            i + 1,
            out.verdict.name(),
            out.stats.states,
            out.stats.product_states,
            f.render()
        );
        if let Verdict::Violated(run) = &out.verdict {
            println!("   {}", run.display(&net));
            println!("   replays: {}", out.replay(&net) == Some(true));
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    let args: Vec<PathBuf> = std::env::args_os().skip(1).map(PathBuf::from).collect();
    match &args[..] {
        [n, f] => check_file(n, f),
        _ => run(),
    }
}
