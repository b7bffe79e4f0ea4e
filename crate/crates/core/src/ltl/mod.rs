//! LTL formulas over Petri net atoms: parsing, negation normal form,
//! rewrite simplification and structural atom evaluation.

mod lasso;
mod parser;
mod rewrite;
mod structural;

use std::fmt;

use thiserror::Error;

use crate::petri::{AtomicProp, IntTerm, PetriNet};

pub use lasso::Lasso;
pub use parser::{parse_formula_file, parse_ltl, ParseError};
pub use rewrite::{simplify, simplify_with, to_nnf};
pub use structural::{eval_atom_structurally, NetFacts, Verdict3};

pub type AtomId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Ltl {
    True,
    False,
    Atom(AtomId),
    Not(Box<Ltl>),
    And(Box<Ltl>, Box<Ltl>),
    Or(Box<Ltl>, Box<Ltl>),
    Next(Box<Ltl>),
    Finally(Box<Ltl>),
    Globally(Box<Ltl>),
    Until(Box<Ltl>, Box<Ltl>),
    Release(Box<Ltl>, Box<Ltl>),
}

impl Ltl {
    pub fn not(f: Ltl) -> Ltl {
        Ltl::Not(Box::new(f))
    }
    pub fn and(a: Ltl, b: Ltl) -> Ltl {
        Ltl::And(Box::new(a), Box::new(b))
    }
    pub fn or(a: Ltl, b: Ltl) -> Ltl {
        Ltl::Or(Box::new(a), Box::new(b))
    }
    pub fn next(f: Ltl) -> Ltl {
        Ltl::Next(Box::new(f))
    }
    pub fn finally(f: Ltl) -> Ltl {
        Ltl::Finally(Box::new(f))
    }
    pub fn globally(f: Ltl) -> Ltl {
        Ltl::Globally(Box::new(f))
    }
    pub fn until(a: Ltl, b: Ltl) -> Ltl {
        Ltl::Until(Box::new(a), Box::new(b))
    }
    pub fn release(a: Ltl, b: Ltl) -> Ltl {
        Ltl::Release(Box::new(a), Box::new(b))
    }

    /// Negations sit only directly above atoms.
    pub fn is_nnf(&self) -> bool {
        match self {
            Ltl::True | Ltl::False | Ltl::Atom(_) => true,
            Ltl::Not(f) => matches!(**f, Ltl::Atom(_)),
            Ltl::Next(f) | Ltl::Finally(f) | Ltl::Globally(f) => f.is_nnf(),
            Ltl::And(a, b) | Ltl::Or(a, b) | Ltl::Until(a, b) | Ltl::Release(a, b) => {
                a.is_nnf() && b.is_nnf()
            }
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Ltl::True | Ltl::False | Ltl::Atom(_) => 1,
            Ltl::Not(f) | Ltl::Next(f) | Ltl::Finally(f) | Ltl::Globally(f) => 1 + f.size(),
            Ltl::And(a, b) | Ltl::Or(a, b) | Ltl::Until(a, b) | Ltl::Release(a, b) => {
                1 + a.size() + b.size()
            }
        }
    }

    /// Atom ids occurring in the formula.
    pub fn atoms(&self, out: &mut Vec<AtomId>) {
        match self {
            Ltl::True | Ltl::False => {}
            Ltl::Atom(a) => {
                if !out.contains(a) {
                    out.push(*a)
                }
            }
            Ltl::Not(f) | Ltl::Next(f) | Ltl::Finally(f) | Ltl::Globally(f) => f.atoms(out),
            Ltl::And(a, b) | Ltl::Or(a, b) | Ltl::Until(a, b) | Ltl::Release(a, b) => {
                a.atoms(out);
                b.atoms(out);
            }
        }
    }
}

impl fmt::Display for Ltl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ltl::True => write!(f, "true"),
            Ltl::False => write!(f, "false"),
            Ltl::Atom(a) => write!(f, "a{a}"),
            Ltl::Not(x) => write!(f, "!{x}"),
            Ltl::And(a, b) => write!(f, "({a} && {b})"),
            Ltl::Or(a, b) => write!(f, "({a} || {b})"),
            Ltl::Next(x) => write!(f, "X {x}"),
            Ltl::Finally(x) => write!(f, "F {x}"),
            Ltl::Globally(x) => write!(f, "G {x}"),
            Ltl::Until(a, b) => write!(f, "({a} U {b})"),
            Ltl::Release(a, b) => write!(f, "({a} R {b})"),
        }
    }
}

/// Integer term with unresolved place names.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Const(i64),
    TokensCount(Vec<String>),
}

fn name_list(names: &[String]) -> String {
    let plain = |n: &str| {
        !n.is_empty()
            && n.chars().all(|c| c.is_alphanumeric() || "_-.'$@".contains(c))
            && !n.starts_with('-')
    };
    names
        .iter()
        .map(|n| if plain(n) { n.clone() } else { format!("\"{n}\"") })
        .collect::<Vec<_>>()
        .join(", ")
}

/// Atomic proposition with unresolved names.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Atom {
    Fireable(Vec<String>),
    Compare { lhs: Expr, strict: bool, rhs: Expr },
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(k) => write!(f, "{k}"),
            Expr::TokensCount(ps) => write!(f, "tokens-count({})", name_list(ps)),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Fireable(ts) => write!(f, "is-fireable({})", name_list(ts)),
            Atom::Compare { lhs, strict, rhs } => {
                write!(f, "{lhs} {} {rhs}", if *strict { "<" } else { "<=" })
            }
        }
    }
}

/// A parsed formula: syntax tree plus its atom table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Formula {
    pub root: Ltl,
    pub atoms: Vec<Atom>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BindError {
    #[error("unknown place '{0}'")]
    UnknownPlace(String),
    #[error("unknown transition '{0}'")]
    UnknownTransition(String),
}

impl Formula {
    /// Resolves every atom's names against `net`.
    pub fn bind(&self, net: &PetriNet) -> Result<Vec<AtomicProp>, BindError> {
        let places = |names: &[String]| -> Result<Vec<usize>, BindError> {
            names
                .iter()
                .map(|n| net.place_by_name(n).ok_or_else(|| BindError::UnknownPlace(n.clone())))
                .collect()
        };
        let term = |e: &Expr| -> Result<IntTerm, BindError> {
            Ok(match e {
                Expr::Const(k) => IntTerm::Const(*k),
                Expr::TokensCount(ps) => IntTerm::TokensCount(places(ps)?),
            })
        };
        self.atoms
            .iter()
            .map(|a| {
                Ok(match a {
                    Atom::Fireable(ts) => AtomicProp::Fireable(
                        ts.iter()
                            .map(|n| {
                                net.transition_by_name(n)
                                    .ok_or_else(|| BindError::UnknownTransition(n.clone()))
                            })
                            .collect::<Result<_, _>>()?,
                    ),
                    Atom::Compare { lhs, strict, rhs } => AtomicProp::Compare {
                        lhs: term(lhs)?,
                        strict: *strict,
                        rhs: term(rhs)?,
                    },
                })
            })
            .collect()
    }

    /// The formula text with atoms written out.
    pub fn render(&self) -> String {
        let mut out = String::new();
        render_into(&self.root, &self.atoms, &mut out);
        out
    }
}

fn render_into(f: &Ltl, atoms: &[Atom], out: &mut String) {
    use std::fmt::Write;
    let bin = |a: &Ltl, op: &str, b: &Ltl, out: &mut String| {
        out.push('(');
        render_into(a, atoms, out);
        let _ = write!(out, " {op} ");
        render_into(b, atoms, out);
        out.push(')');
    };
    match f {
        Ltl::True => out.push_str("true"),
        Ltl::False => out.push_str("false"),
        Ltl::Atom(a) => {
            let _ = write!(out, "({})", atoms[*a]);
        }
        Ltl::Not(x) | Ltl::Next(x) | Ltl::Finally(x) | Ltl::Globally(x) => {
            out.push_str(match f {
                Ltl::Not(_) => "!",
                Ltl::Next(_) => "X ",
                Ltl::Finally(_) => "F ",
                _ => "G ",
            });
            render_into(x, atoms, out);
        }
        Ltl::And(a, b) => bin(a, "&&", b, out),
        Ltl::Or(a, b) => bin(a, "||", b, out),
        Ltl::Until(a, b) => bin(a, "U", b, out),
        Ltl::Release(a, b) => bin(a, "R", b, out),
    }
}
