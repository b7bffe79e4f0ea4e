//! Explicit-state LTL model checking for place/transition nets.
//!
//! A net is read from PNML ([`petri`]), its markings are packed into `u32`
//! words ([`codec`]), the negated property becomes a Büchi automaton
//! ([`ltl`], [`buchi`]) and a bounded nested depth-first search looks for
//! an accepting lasso in the product ([`explore`]).
//!
//! ```
//! use ptltl::explore::{check, CheckOptions, Verdict};
//! use ptltl::ltl::parse_ltl;
//!
//! let net = ptltl::models::philosophers(3, false);
//! let f = parse_ltl("G (tokens-count(eat_0, eat_1) <= 1)").unwrap();
//! let out = check(&net, &f, &CheckOptions::default()).unwrap();
//! assert_eq!(out.verdict, Verdict::Holds);
//! ```

pub mod buchi;
pub mod cli;
pub mod codec;
pub mod explore;
pub mod ltl;
pub mod models;
pub mod petri;
