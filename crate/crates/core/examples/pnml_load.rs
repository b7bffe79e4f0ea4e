//! Load a PNML file and print its places, transitions and NUPN units.
//!
//! ```text
//! cargo run --example pnml_load [path/to/model.pnml]
//! ```

use std::error::Error;
use std::path::{Path, PathBuf};

use ptltl::petri::parse_pnml;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/data").join(name)
}

pub fn run() -> Result<(), Box<dyn Error>> {
    show(&data("philosophers-3.pnml"))
}

fn show(path: &Path) -> Result<(), Box<dyn Error>> {
    let doc = parse_pnml(&std::fs::read(path)?)?;
    let net = &doc.net;
    println!("{}: {} places, {} transitions", path.display(), net.num_places(), net.num_transitions());
    for w in &doc.warnings {
        println!("warning: {w}");
    }
    for (p, info) in net.places().iter().enumerate() {
        println!("  place {p:>3} {:<10} m0={}", info.name, net.initial_marking()[p]);
    }
    for t in net.transitions() {
        let pre: Vec<String> = t.pre.iter().map(|a| format!("{}*{}", a.weight, net.places()[a.place].name)).collect();
        let post: Vec<String> = t.post.iter().map(|a| format!("{}*{}", a.weight, net.places()[a.place].name)).collect();
        println!("  {:<10} {} -> {}", t.name, pre.join(" + "), post.join(" + "));
    }
    if let Some(units) = net.units() {
        println!("{} NUPN units (safe: {})", units.len(), net.declared_safe());
        for u in units {
            let names: Vec<&str> = u.places.iter().map(|&p| net.places()[p].name.as_str()).collect();
            println!("  {:<8} {}", u.name, names.join(" "));
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    match std::env::args_os().nth(1) {
        Some(p) => show(Path::new(&p)),
        None => run(),
    }
}
