//! On-the-fly LTL model checking: product construction, nested
//! depth-first search with restarting depth bounds, and counterexample
//! replay.

mod ndfs;
mod product;
mod replay;

use std::fmt;
use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::buchi::{build_automaton, BuchiAutomaton, DEFAULT_TOUGHNESS_COEFF};
use crate::codec::{plan_encoding, PlanError, Scheme};
use crate::ltl::{simplify, to_nnf, BindError, Formula, Ltl, NetFacts};
use crate::petri::{AtomicProp, PetriNet};

pub use product::{Cursor, PathCounters, ProductGraph, ProductState};
pub use replay::verify_counterexample;

use ndfs::{RoundResult, Search};

/// Largest number of distinct atoms a formula may use.
pub const MAX_ATOMS: usize = 64;

/// Knobs of one check.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckOptions {
    /// Marking encoding; `None` picks the most compact applicable one.
    pub scheme: Option<Scheme>,
    /// Enumerate enabled transitions lazily instead of computing and
    /// caching full firesets.
    pub dynamic_fireset: bool,
    /// Read and write packed markings directly instead of decoding them.
    pub direct_rw: bool,
    /// Order Büchi successors by distance plus toughness.
    pub heuristic: bool,
    pub heuristic_coeff: f64,
    /// First depth bound; 0 searches without a bound.
    pub bound: u64,
    /// Factor applied to the bound between rounds.
    pub growth: u64,
    pub timeout: Option<Duration>,
    /// Cap on accounted bytes of the state store and search structures.
    pub memory_cap: Option<usize>,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            scheme: None,
            dynamic_fireset: true,
            direct_rw: true,
            heuristic: true,
            heuristic_coeff: DEFAULT_TOUGHNESS_COEFF,
            bound: 10_000,
            growth: 10,
            timeout: None,
            memory_cap: None,
        }
    }
}

impl CheckOptions {
    /// All three optimizations switched off.
    pub fn baseline() -> Self {
        CheckOptions {
            dynamic_fireset: false,
            direct_rw: false,
            heuristic: false,
            ..CheckOptions::default()
        }
    }
}

/// Depth bounds of successive rounds: `k0, k0*g, k0*g^2, ...` ending with
/// an unbounded round once the bound no longer fits. `k0 = 0` yields a
/// single unbounded round.
pub fn bound_schedule(k0: u64, growth: u64) -> impl Iterator<Item = Option<u64>> {
    let growth = growth.max(2);
    let mut next = if k0 == 0 { None } else { Some(Some(k0)) };
    let mut done = false;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let cur = next.unwrap_or(None);
        match cur {
            None => done = true,
            Some(k) => next = Some(k.checked_mul(growth)),
        }
        Some(cur)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Move {
    Fire(usize),
    /// Repeat a deadlocked marking.
    Stutter,
}

/// One product step: the net move and the Büchi edge taken with it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Step {
    pub mv: Move,
    /// Index into the source Büchi state's edge list.
    pub edge: usize,
    /// Destination Büchi state.
    pub dst: usize,
}

/// An accepting lasso: from the initial marking and `initial_buchi`, take
/// `prefix`, then `cycle` forever.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CounterexampleRun {
    pub initial_buchi: usize,
    pub prefix: Vec<Step>,
    pub cycle: Vec<Step>,
    /// Accepting Büchi state visited on the cycle.
    pub accepting: usize,
}

impl CounterexampleRun {
    /// Renders the run with transition names, e.g. `t1 t2 (t3 t4)^w`.
    pub fn display<'a>(&'a self, net: &'a PetriNet) -> impl fmt::Display + 'a {
        struct Show<'a>(&'a CounterexampleRun, &'a PetriNet);
        impl fmt::Display for Show<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let name = |s: &Step| match s.mv {
                    Move::Fire(t) => self.1.transitions()[t].name.clone(),
                    Move::Stutter => "-".to_string(),
                };
                let prefix: Vec<String> = self.0.prefix.iter().map(name).collect();
                let cycle: Vec<String> = self.0.cycle.iter().map(name).collect();
                if !prefix.is_empty() {
                    write!(f, "{} ", prefix.join(" "))?;
                }
                write!(f, "({})^w", cycle.join(" "))
            }
        }
        Show(self, net)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Limit {
    Time,
    Memory,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Violated(CounterexampleRun),
    /// A token count does not fit the chosen encoding.
    CannotHandle(String),
    ResourceLimit(Limit),
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Violated(_) => "violated",
            Verdict::CannotHandle(_) => "cannot-handle",
            Verdict::ResourceLimit(Limit::Time) => "timeout",
            Verdict::ResourceLimit(Limit::Memory) => "memory-limit",
        }
    }

    /// Holds or Violated.
    pub fn is_decided(&self) -> bool {
        matches!(self, Verdict::Holds | Verdict::Violated(_))
    }

    /// `Some(true)` for Holds, `Some(false)` for Violated.
    pub fn holds(&self) -> Option<bool> {
        match self {
            Verdict::Holds => Some(true),
            Verdict::Violated(_) => Some(false),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Stats {
    /// Distinct markings interned.
    pub states: usize,
    /// Product states pushed by the outer and inner searches.
    pub product_states: u64,
    pub rounds: u32,
    /// Bound of the last round; `None` when it was unbounded.
    pub peak_bound: Option<u64>,
    pub wall_seconds: f64,
    /// Accounted bytes of the store and search structures (approximate).
    pub peak_bytes: usize,
    /// Per-marking search bookkeeping bytes.
    pub metadata_bytes: usize,
    pub fireset_precomputes: u64,
    pub full_decodes: u64,
    pub scheme: Option<String>,
    pub buchi_states: usize,
}

/// Result of a check together with what is needed to replay it.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub verdict: Verdict,
    pub stats: Stats,
    /// Automaton of the negated property used by the search.
    pub automaton: BuchiAutomaton,
    pub atoms: Vec<AtomicProp>,
}

impl CheckOutcome {
    /// Replays a Violated verdict; `None` for other verdicts.
    pub fn replay(&self, net: &PetriNet) -> Option<bool> {
        match &self.verdict {
            Verdict::Violated(run) => {
                Some(verify_counterexample(net, &self.atoms, &self.automaton, run))
            }
            _ => None,
        }
    }
}

#[derive(Debug, Error)]
pub enum CheckError {
    #[error(transparent)]
    Bind(#[from] BindError),
    #[error("formula uses {0} atoms; at most 64 are supported")]
    TooManyAtoms(usize),
    #[error(transparent)]
    Plan(#[from] PlanError),
}

/// Checks whether every run of `net` satisfies `formula`.
pub fn check(net: &PetriNet, formula: &Formula, options: &CheckOptions) -> Result<CheckOutcome, CheckError> {
    let atoms = formula.bind(net)?;
    check_ltl(net, &formula.root, atoms, options)
}

/// Same as [`check`] for a formula over already bound atoms; atom `i` of
/// `f` is `atoms[i]`.
pub fn check_ltl(
    net: &PetriNet,
    f: &Ltl,
    atoms: Vec<AtomicProp>,
    options: &CheckOptions,
) -> Result<CheckOutcome, CheckError> {
    let started = Instant::now();
    if atoms.len() > MAX_ATOMS {
        return Err(CheckError::TooManyAtoms(atoms.len()));
    }
    let negated = simplify(&to_nnf(&Ltl::not(f.clone())), &atoms, &NetFacts::of(net));
    let automaton = build_automaton(&negated, options.heuristic_coeff);
    let mut stats = Stats {
        buchi_states: automaton.states.len(),
        ..Stats::default()
    };
    if automaton.is_empty() {
        stats.wall_seconds = started.elapsed().as_secs_f64();
        return Ok(CheckOutcome {
            verdict: Verdict::Holds,
            stats,
            automaton,
            atoms,
        });
    }

    let plan = plan_encoding(net, options.scheme)?;
    stats.scheme = Some(plan.scheme().to_string());
    let verdict = {
        let graph = ProductGraph::new(
            net,
            &atoms,
            &automaton,
            plan,
            options.dynamic_fireset,
            options.direct_rw,
            options.heuristic,
        );
        match graph {
            Err(o) => Verdict::CannotHandle(o.to_string()),
            Ok(mut graph) => {
                let verdict = run_rounds(&mut graph, options, started, &mut stats);
                let counters = graph.counters();
                stats.states = graph.num_markings();
                stats.fireset_precomputes = counters.fireset_precomputes;
                stats.full_decodes = counters.full_decodes;
                verdict
            }
        }
    };
    stats.wall_seconds = started.elapsed().as_secs_f64();
    Ok(CheckOutcome {
        verdict,
        stats,
        automaton,
        atoms,
    })
}

fn run_rounds(
    graph: &mut ProductGraph<'_>,
    options: &CheckOptions,
    started: Instant,
    stats: &mut Stats,
) -> Verdict {
    let mut search = Search::new(graph, started, options.timeout, options.memory_cap);
    let mut verdict = Verdict::Holds;
    for bound in bound_schedule(options.bound, options.growth) {
        stats.rounds += 1;
        stats.peak_bound = bound;
        let result = search.run_round(bound);
        verdict = match result {
            RoundResult::Found(run) => Verdict::Violated(run),
            RoundResult::Exhausted { truncated: false } => Verdict::Holds,
            RoundResult::Exhausted { truncated: true } => continue,
            RoundResult::Limit(l) => Verdict::ResourceLimit(l),
            RoundResult::Overflow(o) => Verdict::CannotHandle(o.to_string()),
        };
        break;
    }
    stats.product_states = search.expanded;
    stats.peak_bytes = search.peak_bytes.max(search.graph.accounted_bytes());
    stats.metadata_bytes = search.peak_metadata.max(search.graph.metadata_bytes());
    verdict
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::parse_ltl;
    use crate::petri::NetBuilder;

    fn run(net: &PetriNet, text: &str, opts: &CheckOptions) -> CheckOutcome {
        check(net, &parse_ltl(text).unwrap(), opts).unwrap()
    }

    fn all_options() -> Vec<CheckOptions> {
        let mut v = Vec::new();
        for bits in 0..8 {
            v.push(CheckOptions {
                dynamic_fireset: bits & 1 != 0,
                direct_rw: bits & 2 != 0,
                heuristic: bits & 4 != 0,
                ..CheckOptions::default()
            });
        }
        v
    }

    #[test]
    fn schedule() {
        let v: Vec<_> = bound_schedule(10_000, 10).take(3).collect();
        assert_eq!(v, vec![Some(10_000), Some(100_000), Some(1_000_000)]);
        assert_eq!(bound_schedule(0, 10).collect::<Vec<_>>(), vec![None]);
        let tail: Vec<_> = bound_schedule(u64::MAX / 2, 10).collect();
        assert_eq!(tail, vec![Some(u64::MAX / 2), None]);
    }

    #[test]
    fn single_state_holds() {
        let mut b = NetBuilder::new();
        b.place("p1", 1);
        let net = b.build().unwrap();
        for o in all_options() {
            let out = run(&net, "G (tokens-count(p1) <= 1)", &o);
            assert_eq!(out.verdict, Verdict::Holds);
        }
    }

    #[test]
    fn draining_violates_with_stutter_cycle() {
        let mut b = NetBuilder::new();
        let p = b.place("p1", 1);
        let t = b.transition("t");
        b.input(p, t, 1);
        let net = b.build().unwrap();
        for o in all_options() {
            let out = run(&net, "G (1 <= tokens-count(p1))", &o);
            let Verdict::Violated(run) = &out.verdict else {
                panic!("expected violation, got {:?}", out.verdict)
            };
            assert!(out.replay(&net).unwrap());
            assert!(run.cycle.iter().all(|s| s.mv == Move::Stutter));
            assert!(run.prefix.iter().chain(&run.cycle).any(|s| s.mv == Move::Fire(t)));
        }
    }

    #[test]
    fn trivially_true_formula_expands_nothing() {
        let mut b = NetBuilder::new();
        b.place("p1", 0);
        let net = b.build().unwrap();
        let out = run(&net, "F (0 <= tokens-count(p1))", &CheckOptions::default());
        assert_eq!(out.verdict, Verdict::Holds);
        assert_eq!(out.stats.product_states, 0);
    }

    #[test]
    fn baseline_paths_are_exercised() {
        let mut b = NetBuilder::new();
        let p = b.place("p", 1);
        let q = b.place("q", 0);
        let t = b.transition("t");
        let u = b.transition("u");
        b.input(p, t, 1).output(t, q, 1).input(q, u, 1).output(u, p, 1);
        let net = b.build().unwrap();
        let out = run(&net, "G F is-fireable(t)", &CheckOptions::baseline());
        assert_eq!(out.verdict, Verdict::Holds);
        assert!(out.stats.fireset_precomputes > 0 && out.stats.full_decodes > 0);
        let out = run(&net, "G F is-fireable(t)", &CheckOptions::default());
        assert_eq!(out.stats.fireset_precomputes + out.stats.full_decodes, 0);
    }

    #[test]
    fn tiny_bound_restarts() {
        // a chain of 30 markings ending in a deadlock
        let mut b = NetBuilder::new();
        let p = b.place("p", 30);
        let t = b.transition("t");
        b.input(p, t, 1);
        let net = b.build().unwrap();
        let opts = CheckOptions { bound: 4, growth: 2, ..CheckOptions::default() };
        let out = run(&net, "F (tokens-count(p) <= 0)", &opts);
        assert_eq!(out.verdict, Verdict::Holds);
        assert!(out.stats.rounds > 1);
        let out = run(&net, "G (1 <= tokens-count(p))", &opts);
        assert!(matches!(out.verdict, Verdict::Violated(_)));
        assert!(out.replay(&net).unwrap());
    }

    #[test]
    fn overflow_is_reported() {
        let mut b = NetBuilder::new();
        let p = b.place("p", 0);
        let t = b.transition("t");
        b.output(t, p, 40_000);
        let net = b.build().unwrap();
        let opts = CheckOptions { scheme: Some(Scheme::Default16), bound: 0, ..CheckOptions::default() };
        // a violation needs 120000 tokens; 16-bit fields give up at 80000
        let out = run(&net, "G (tokens-count(p) <= 100000)", &opts);
        assert!(matches!(out.verdict, Verdict::CannotHandle(_)), "{:?}", out.verdict);
    }
}
