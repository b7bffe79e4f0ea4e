mod common;

use std::collections::{HashMap, HashSet, VecDeque};
use std::time::Duration;

use common::{brute_force_product, corpus, corpus_formulas, rng};
use ptltl::buchi::{build_automaton, DEFAULT_TOUGHNESS_COEFF};
use ptltl::codec::plan_encoding;
use ptltl::explore::{check, CheckOptions, Limit, Move, ProductGraph, Verdict};
use ptltl::ltl::{parse_ltl, to_nnf, Ltl};
use ptltl::models;
use ptltl::petri::PetriNet;

type Dense = (Vec<u32>, usize);

fn explored_product(
    net: &PetriNet,
    atoms: &[ptltl::petri::AtomicProp],
    aut: &ptltl::buchi::BuchiAutomaton,
    dynamic: bool,
    direct: bool,
    heuristic: bool,
) -> HashMap<Dense, HashSet<Dense>> {
    let plan = plan_encoding(net, None).unwrap();
    let mut g = ProductGraph::new(net, atoms, aut, plan, dynamic, direct, heuristic).unwrap();
    let mut out = HashMap::new();
    let mut queue: VecDeque<_> = g.initial_states().iter().copied().collect();
    let mut seen: HashSet<_> = queue.iter().copied().collect();
    while let Some(ps) = queue.pop_front() {
        let mut succ = HashSet::new();
        for (next, step) in g.successors(ps).unwrap() {
            assert_eq!(step.dst, next.buchi);
            assert_eq!(aut.states[ps.buchi].edges[step.edge].dst, step.dst);
            if step.mv == Move::Stutter {
                assert_eq!(next.marking, ps.marking);
            }
            succ.insert((g.marking(next.marking), next.buchi));
            if seen.insert(next) {
                queue.push_back(next);
            }
        }
        out.insert((g.marking(ps.marking), ps.buchi), succ);
    }
    out
}

#[test]
fn product_successors_match_explicit_product() {
    let mut r = rng(8);
    let mut nets = corpus();
    nets.push(("counter-grid-30".into(), models::counter_grid(30)));
    for (name, net) in nets.iter().step_by(2) {
        for f in corpus_formulas(name, net, &mut r, 0).iter().take(3) {
            let atoms = f.bind(net).unwrap();
            let aut = build_automaton(&to_nnf(&Ltl::not(f.root.clone())), DEFAULT_TOUGHNESS_COEFF);
            if aut.is_empty() {
                continue;
            }
            let want = brute_force_product(net, &atoms, &aut);
            for bits in 0..8 {
                let got = explored_product(net, &atoms, &aut, bits & 1 != 0, bits & 2 != 0, bits & 4 != 0);
                assert_eq!(got, want, "{name} `{}` toggles {bits}", f.render());
            }
        }
    }
}

#[test]
fn checks_are_deterministic() {
    let mut r = rng(21);
    for (name, net) in corpus().iter().take(12) {
        for f in corpus_formulas(name, net, &mut r, 1) {
            let a = check(net, &f, &CheckOptions::default()).unwrap();
            let b = check(net, &f, &CheckOptions::default()).unwrap();
            assert_eq!(a.verdict, b.verdict, "{name}");
            assert_eq!(a.stats.product_states, b.stats.product_states);
            assert_eq!(a.stats.states, b.stats.states);
        }
    }
}

#[test]
fn counterexamples_replay_and_serialize() {
    let net = models::philosophers(4, false);
    // the deadlock violates "some philosopher eats infinitely often"
    let f = parse_ltl("G F 1 <= tokens-count(eat_0, eat_1, eat_2, eat_3)").unwrap();
    for opts in [CheckOptions::default(), CheckOptions::baseline()] {
        let out = check(&net, &f, &opts).unwrap();
        let Verdict::Violated(run) = &out.verdict else {
            panic!("expected a violation, got {:?}", out.verdict)
        };
        assert_eq!(out.replay(&net), Some(true));
        assert!(run.cycle.iter().all(|s| s.mv == Move::Stutter));
        let json = serde_json::to_value(run).unwrap();
        assert!(json["prefix"].is_array() && json["cycle"].is_array());
        let text = run.display(&net).to_string();
        assert!(text.contains("takeL_"), "{text}");
    }
}

#[test]
fn limits_are_reported() {
    let net = models::toggles(40);
    let f = parse_ltl("F G is-fireable(up_0, down_0)").unwrap();
    let opts = CheckOptions { timeout: Some(Duration::ZERO), bound: 0, ..CheckOptions::default() };
    let out = check(&net, &f, &opts).unwrap();
    assert_eq!(out.verdict, Verdict::ResourceLimit(Limit::Time));
    assert_eq!(out.verdict.name(), "timeout");
    let opts = CheckOptions { memory_cap: Some(1 << 20), bound: 0, ..CheckOptions::default() };
    let out = check(&net, &f, &opts).unwrap();
    assert_eq!(out.verdict, Verdict::ResourceLimit(Limit::Memory));
    assert!(!out.verdict.is_decided());
}

#[test]
fn bounded_rounds_agree_with_unbounded_search() {
    let mut r = rng(4);
    for (name, net) in corpus().iter().skip(6).take(10) {
        for f in corpus_formulas(name, net, &mut r, 1) {
            let unbounded = check(net, &f, &CheckOptions { bound: 0, ..CheckOptions::default() }).unwrap();
            let tight = check(net, &f, &CheckOptions { bound: 1, growth: 2, ..CheckOptions::default() }).unwrap();
            assert_eq!(unbounded.verdict.holds(), tight.verdict.holds(), "{name} `{}`", f.render());
            if tight.verdict.holds() == Some(false) {
                assert_eq!(tight.replay(net), Some(true));
            }
        }
    }
}
