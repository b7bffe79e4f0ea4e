//! Independent oracles and seeded generators shared by the integration
//! tests.

#![allow(dead_code)]

use std::collections::{HashMap, HashSet, VecDeque};

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use ptltl::buchi::{ltl_to_buchi, BuchiAutomaton};
use ptltl::ltl::{to_nnf, Atom, Expr, Formula, Lasso, Ltl};
use ptltl::models;
use ptltl::petri::{eval_atom, fire, fireset, AtomicProp, NetBuilder, PetriNet};

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Explicit reachability graph on dense markings. Deadlocks get a single
/// stuttering self-loop.
pub struct StateGraph {
    pub markings: Vec<Vec<u32>>,
    pub succ: Vec<Vec<usize>>,
    pub index: HashMap<Vec<u32>, usize>,
}

pub fn reachability(net: &PetriNet, limit: usize) -> StateGraph {
    let m0 = net.initial_marking().to_vec();
    let mut g = StateGraph {
        markings: vec![m0.clone()],
        succ: vec![],
        index: HashMap::from([(m0, 0)]),
    };
    let mut i = 0;
    while i < g.markings.len() {
        assert!(g.markings.len() <= limit, "state space above {limit}");
        let m = g.markings[i].clone();
        let fs = fireset(net, &m[..]);
        let mut out = Vec::new();
        if fs.is_empty() {
            out.push(i);
        }
        for t in fs {
            let m2 = fire(net, &m, t).expect("token count fits u32");
            let next = g.markings.len();
            let j = *g.index.entry(m2.clone()).or_insert(next);
            if j == next {
                g.markings.push(m2);
            }
            out.push(j);
        }
        g.succ.push(out);
        i += 1;
    }
    g
}

fn valuation(net: &PetriNet, atoms: &[AtomicProp], m: &[u32]) -> u64 {
    atoms
        .iter()
        .enumerate()
        .fold(0, |v, (i, a)| v | u64::from(eval_atom(net, m, a)) << i)
}

/// Does some graph node reachable from `roots` lie in a strongly connected
/// component with a cycle and an accepting node?
fn has_accepting_cycle(
    roots: &[usize],
    succ: &dyn Fn(usize) -> Vec<usize>,
    accepting: &dyn Fn(usize) -> bool,
) -> bool {
    let mut ids: HashMap<usize, petgraph::graph::NodeIndex> = HashMap::new();
    let mut g: DiGraph<usize, ()> = DiGraph::new();
    let mut queue: VecDeque<usize> = VecDeque::new();
    for &r in roots {
        if let std::collections::hash_map::Entry::Vacant(e) = ids.entry(r) {
            e.insert(g.add_node(r));
            queue.push_back(r);
        }
    }
    while let Some(x) = queue.pop_front() {
        for y in succ(x) {
            let ny = *ids.entry(y).or_insert_with(|| {
                queue.push_back(y);
                g.add_node(y)
            });
            g.add_edge(ids[&x], ny, ());
        }
    }
    tarjan_scc(&g).into_iter().any(|scc| {
        let cyclic = scc.len() > 1 || g.contains_edge(scc[0], scc[0]);
        cyclic && scc.iter().any(|&v| accepting(g[v]))
    })
}

/// Brute-force model check: the full product of the reachability graph
/// with the unsimplified automaton of the negation, decided by SCCs.
pub fn brute_force_holds(net: &PetriNet, f: &Ltl, atoms: &[AtomicProp]) -> bool {
    let graph = reachability(net, 200_000);
    let aut = ltl_to_buchi(&to_nnf(&Ltl::not(f.clone())));
    let vals: Vec<u64> = graph
        .markings
        .iter()
        .map(|m| valuation(net, atoms, m))
        .collect();
    let nb = aut.states.len();
    let roots: Vec<usize> = aut.initial.clone();
    let succ = |x: usize| -> Vec<usize> {
        let (m, q) = (x / nb, x % nb);
        let mut out = Vec::new();
        for e in &aut.states[q].edges {
            if e.label.holds(vals[m]) {
                for &m2 in &graph.succ[m] {
                    out.push(m2 * nb + e.dst);
                }
            }
        }
        out
    };
    let acc = |x: usize| aut.states[x % nb].accepting;
    !has_accepting_cycle(&roots, &succ, &acc)
}

/// Lasso membership: product of lasso positions and automaton states.
pub fn lasso_accepted(a: &BuchiAutomaton, l: &Lasso) -> bool {
    let nb = a.states.len().max(1);
    let roots: Vec<usize> = a.initial.clone();
    let succ = |x: usize| -> Vec<usize> {
        let (i, q) = (x / nb, x % nb);
        a.states[q]
            .edges
            .iter()
            .filter(|e| e.label.holds(l.valuations[i]))
            .map(|e| l.succ(i) * nb + e.dst)
            .collect()
    };
    let acc = |x: usize| a.states[x % nb].accepting;
    has_accepting_cycle(&roots, &succ, &acc)
}

/// Truth of `f` at every position of `l`, following each position's
/// future step by step: along a lasso of length `n` every position
/// reachable from `i` is met within `n` steps.
pub fn eval_unrolled(f: &Ltl, l: &Lasso) -> Vec<bool> {
    let n = l.len();
    let path = |i: usize| {
        let mut v = Vec::with_capacity(n);
        let mut p = i;
        for _ in 0..n {
            v.push(p);
            p = l.succ(p);
        }
        v
    };
    match f {
        Ltl::True => vec![true; n],
        Ltl::False => vec![false; n],
        Ltl::Atom(a) => l.valuations.iter().map(|v| v >> a & 1 == 1).collect(),
        Ltl::Not(x) => eval_unrolled(x, l).iter().map(|b| !b).collect(),
        Ltl::And(a, b) => {
            let (x, y) = (eval_unrolled(a, l), eval_unrolled(b, l));
            (0..n).map(|i| x[i] && y[i]).collect()
        }
        Ltl::Or(a, b) => {
            let (x, y) = (eval_unrolled(a, l), eval_unrolled(b, l));
            (0..n).map(|i| x[i] || y[i]).collect()
        }
        Ltl::Next(x) => {
            let v = eval_unrolled(x, l);
            (0..n).map(|i| v[l.succ(i)]).collect()
        }
        Ltl::Finally(x) => {
            let v = eval_unrolled(x, l);
            (0..n).map(|i| path(i).iter().any(|&p| v[p])).collect()
        }
        Ltl::Globally(x) => {
            let v = eval_unrolled(x, l);
            (0..n).map(|i| path(i).iter().all(|&p| v[p])).collect()
        }
        Ltl::Until(a, b) => {
            let (x, y) = (eval_unrolled(a, l), eval_unrolled(b, l));
            (0..n)
                .map(|i| {
                    for p in path(i) {
                        if y[p] {
                            return true;
                        }
                        if !x[p] {
                            return false;
                        }
                    }
                    false
                })
                .collect()
        }
        Ltl::Release(a, b) => {
            // a R b  ==  !(!a U !b)
            let (x, y) = (eval_unrolled(a, l), eval_unrolled(b, l));
            (0..n)
                .map(|i| {
                    for p in path(i) {
                        if !y[p] {
                            return false;
                        }
                        if x[p] {
                            return true;
                        }
                    }
                    true
                })
                .collect()
        }
    }
}

/// Random LTL formula over atoms `0..atoms` with nesting depth at most
/// `depth`.
pub fn random_ltl(r: &mut impl Rng, atoms: usize, depth: u32) -> Ltl {
    if depth == 0 || r.gen_ratio(1, 4) {
        return match r.gen_range(0..10) {
            0 => Ltl::True,
            1 => Ltl::False,
            _ => Ltl::Atom(r.gen_range(0..atoms)),
        };
    }
    let sub = |r: &mut _| random_ltl(r, atoms, depth - 1);
    match r.gen_range(0..10) {
        0 => Ltl::not(sub(r)),
        1 => Ltl::and(sub(r), sub(r)),
        2 => Ltl::or(sub(r), sub(r)),
        3 => Ltl::next(sub(r)),
        4 => Ltl::finally(sub(r)),
        5 => Ltl::globally(sub(r)),
        6 | 7 => Ltl::until(sub(r), sub(r)),
        _ => Ltl::release(sub(r), sub(r)),
    }
}

/// Random lasso of length 1..=max_len over `atoms` atoms.
pub fn random_lasso(r: &mut impl Rng, atoms: usize, max_len: usize) -> Lasso {
    let len = r.gen_range(1..=max_len);
    let vals = (0..len).map(|_| r.gen_range(0..1u64 << atoms)).collect();
    let start = r.gen_range(0..len);
    Lasso::new(vals, start)
}

/// Random atom mentioning places and transitions of `net`.
pub fn random_atom(r: &mut impl Rng, net: &PetriNet) -> Atom {
    let place = |r: &mut ChaCha8Rng| net.places()[r.gen_range(0..net.num_places())].name.clone();
    let mut r2 = ChaCha8Rng::seed_from_u64(r.gen());
    match r.gen_range(0..6) {
        0 | 1 if net.num_transitions() > 0 => {
            let k = r.gen_range(1..=2.min(net.num_transitions()));
            let mut ts: Vec<String> = net.transitions().iter().map(|t| t.name.clone()).collect();
            ts.shuffle(&mut r2);
            ts.truncate(k);
            Atom::Fireable(ts)
        }
        2 | 3 => {
            let k = r.gen_range(1..=2);
            Atom::Compare {
                lhs: Expr::TokensCount((0..k).map(|_| place(&mut r2)).collect()),
                strict: r.gen_bool(0.3),
                rhs: Expr::Const(r.gen_range(0..3)),
            }
        }
        4 => Atom::Compare {
            lhs: Expr::Const(r.gen_range(0..3)),
            strict: r.gen_bool(0.3),
            rhs: Expr::TokensCount(vec![place(&mut r2)]),
        },
        _ => Atom::Compare {
            lhs: Expr::TokensCount(vec![place(&mut r2)]),
            strict: false,
            rhs: Expr::TokensCount(vec![place(&mut r2)]),
        },
    }
}

/// Random formula with up to three atoms drawn from `net`.
pub fn random_formula(r: &mut ChaCha8Rng, net: &PetriNet, depth: u32) -> Formula {
    let n_atoms = r.gen_range(1..=3);
    let atoms: Vec<Atom> = (0..n_atoms).map(|_| random_atom(r, net)).collect();
    let root = random_ltl(r, n_atoms, depth);
    Formula { root, atoms }
}

/// A conservative random net: every transition moves its input tokens to
/// its outputs without changing the total, so the state space is finite.
pub fn random_conservative_net(r: &mut impl Rng) -> PetriNet {
    let places = r.gen_range(3..=6);
    let tokens = r.gen_range(1..=3);
    let mut b = NetBuilder::new();
    let mut m0 = vec![0u32; places];
    for _ in 0..tokens {
        m0[r.gen_range(0..places)] += 1;
    }
    let ps: Vec<usize> = (0..places).map(|i| b.place(format!("q{i}"), m0[i])).collect();
    for j in 0..r.gen_range(2..=6) {
        let t = b.transition(format!("u{j}"));
        let w = r.gen_range(1..=2);
        for _ in 0..w {
            b.input(ps[r.gen_range(0..places)], t, 1);
        }
        for _ in 0..w {
            b.output(t, ps[r.gen_range(0..places)], 1);
        }
    }
    b.build().unwrap()
}

/// The hand-built corpus: named nets with bounded state spaces.
pub fn corpus() -> Vec<(String, PetriNet)> {
    let mut v: Vec<(String, PetriNet)> = Vec::new();
    for n in 3..=5 {
        v.push((format!("philosophers-{n}"), models::philosophers(n, false)));
        v.push((format!("philosophers-nupn-{n}"), models::philosophers(n, true)));
    }
    for n in 2..=5 {
        v.push((format!("token-ring-{n}"), models::token_ring(n)));
    }
    for c in 1..=4 {
        v.push((format!("producer-consumer-{c}"), models::producer_consumer(c)));
    }
    for (len, k) in [(1, 1), (3, 1), (4, 2), (2, 3)] {
        v.push((format!("drain-{len}-{k}"), models::drain(len, k)));
    }
    v.push(("toggles-3".into(), models::toggles(3)));
    v.push(("counter-grid-3".into(), models::counter_grid(3)));
    let mut r = rng(7);
    for i in 0..10 {
        v.push((format!("random-{i}"), random_conservative_net(&mut r)));
    }
    v
}

/// Hand-written formulas for named corpus nets, plus random ones.
pub fn corpus_formulas(name: &str, net: &PetriNet, r: &mut ChaCha8Rng, random: usize) -> Vec<Formula> {
    let fixed: &[&str] = if name.starts_with("philosophers") {
        &[
            "G F is-fireable(takeL_0, takeL_1, takeR_0, takeR_1, release_0, release_1, release_2)",
            "G (tokens-count(eat_0, eat_1) <= 1)",
            "G (tokens-count(fork_0, hasL_0, eat_0, eat_2) <= 1)",
            "F G (tokens-count(hasL_0, hasL_1, hasL_2) <= 0)",
            "G (!(1 <= tokens-count(eat_0)) || F 1 <= tokens-count(think_0))",
        ]
    } else if name.starts_with("token-ring") {
        &[
            "G (tokens-count(crit_0, crit_1) <= 1)",
            "G F 1 <= tokens-count(tok_0)",
            "G (!(1 <= tokens-count(crit_0)) || X tokens-count(crit_0) <= 0)",
            "F 1 <= tokens-count(crit_1)",
            "G (1 <= tokens-count(idle_0) || 1 <= tokens-count(crit_0))",
        ]
    } else if name.starts_with("producer-consumer") {
        &[
            "G (tokens-count(buffer, free) <= 4)",
            "F G !is-fireable(produce)",
            "G (!is-fireable(consume) || F 1 <= tokens-count(free))",
            "G F is-fireable(produce, consume)",
            "(tokens-count(buffer) <= 0) U is-fireable(consume)",
        ]
    } else if name.starts_with("drain") {
        &[
            "F G !is-fireable(t_0)",
            "G (1 <= tokens-count(p_0))",
            "F (tokens-count(p_0) <= 0)",
            "X X is-fireable(t_0)",
            "G F 1 <= tokens-count(p_1)",
        ]
    } else {
        &[]
    };
    let mut out: Vec<Formula> = fixed
        .iter()
        .map(|t| ptltl::ltl::parse_ltl(t).unwrap_or_else(|e| panic!("{t}: {e}")))
        .filter(|f| f.bind(net).is_ok())
        .collect();
    let want = out.len().max(5) + random;
    while out.len() < want {
        out.push(random_formula(r, net, 4));
    }
    out
}

/// Every product state reachable in the explicit construction, with its
/// successor set, using the checker's conventions. Markings are dense.
pub fn brute_force_product(
    net: &PetriNet,
    atoms: &[AtomicProp],
    aut: &BuchiAutomaton,
) -> HashMap<(Vec<u32>, usize), HashSet<(Vec<u32>, usize)>> {
    let graph = reachability(net, 200_000);
    let mut out = HashMap::new();
    let mut queue: VecDeque<(usize, usize)> = aut.initial.iter().map(|&q| (0, q)).collect();
    let mut seen: HashSet<(usize, usize)> = queue.iter().copied().collect();
    while let Some((m, q)) = queue.pop_front() {
        let val = valuation(net, atoms, &graph.markings[m]);
        let mut succ = HashSet::new();
        for e in &aut.states[q].edges {
            if e.label.holds(val) {
                for &m2 in &graph.succ[m] {
                    succ.insert((graph.markings[m2].clone(), e.dst));
                    if seen.insert((m2, e.dst)) {
                        queue.push_back((m2, e.dst));
                    }
                }
            }
        }
        out.insert((graph.markings[m].clone(), q), succ);
    }
    out
}
