//! Formula to Büchi automaton via a very weak alternating automaton and a
//! transition-based generalized Büchi automaton.

use std::collections::{BTreeMap, HashMap, VecDeque};

use super::automaton::{BuchiAutomaton, BuchiState, Edge, Label};
use crate::ltl::{to_nnf, Ltl};

type NodeId = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Node {
    True,
    False,
    Lit(usize, bool),
    And(NodeId, NodeId),
    Or(NodeId, NodeId),
    Next(NodeId),
    Until(NodeId, NodeId),
    Release(NodeId, NodeId),
}

/// Sorted set of alternating-automaton states, read as a conjunction.
type Conj = Vec<NodeId>;

/// Alternating transition: a label and the conjunction of targets.
type Trans = (Label, Conj);

fn union(a: &[NodeId], b: &[NodeId]) -> Conj {
    let mut v: Conj = a.iter().chain(b).copied().collect();
    v.sort_unstable();
    v.dedup();
    v
}

fn subset(a: &[NodeId], b: &[NodeId]) -> bool {
    let mut j = 0;
    for x in a {
        while j < b.len() && b[j] < *x {
            j += 1;
        }
        if j == b.len() || b[j] != *x {
            return false;
        }
    }
    true
}

/// Pairwise conjunction of two transition sets.
fn product(a: &[Trans], b: &[Trans]) -> Vec<Trans> {
    prune(product_raw(a, b))
}

fn product_raw(a: &[Trans], b: &[Trans]) -> Vec<Trans> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for (la, ea) in a {
        for (lb, eb) in b {
            if let Some(l) = la.and(*lb) {
                out.push((l, union(ea, eb)));
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Drops a transition when another one is enabled at least as often and
/// requires a subset of its targets.
fn prune(mut v: Vec<Trans>) -> Vec<Trans> {
    v.sort();
    v.dedup();
    let keep: Vec<bool> = (0..v.len())
        .map(|i| {
            !(0..v.len()).any(|j| {
                j != i && v[i].0.implies(v[j].0) && subset(&v[j].1, &v[i].1)
            })
        })
        .collect();
    v.into_iter()
        .zip(keep)
        .filter_map(|(t, k)| k.then_some(t))
        .collect()
}

struct Vwaa {
    nodes: Vec<Node>,
    ids: HashMap<Node, NodeId>,
    delta: HashMap<NodeId, Vec<Trans>>,
}

impl Vwaa {
    fn new() -> Self {
        Vwaa {
            nodes: Vec::new(),
            ids: HashMap::new(),
            delta: HashMap::new(),
        }
    }

    fn intern(&mut self, n: Node) -> NodeId {
        if let Some(&id) = self.ids.get(&n) {
            return id;
        }
        let id = self.nodes.len() as NodeId;
        self.nodes.push(n);
        self.ids.insert(n, id);
        id
    }

    fn build(&mut self, f: &Ltl) -> NodeId {
        let n = match f {
            Ltl::True => Node::True,
            Ltl::False => Node::False,
            Ltl::Atom(a) => Node::Lit(*a, true),
            Ltl::Not(x) => match **x {
                Ltl::Atom(a) => Node::Lit(a, false),
                _ => unreachable!("formula is in negation normal form"),
            },
            Ltl::And(a, b) => Node::And(self.build(a), self.build(b)),
            Ltl::Or(a, b) => Node::Or(self.build(a), self.build(b)),
            Ltl::Next(x) => Node::Next(self.build(x)),
            Ltl::Finally(x) => {
                let t = self.intern(Node::True);
                Node::Until(t, self.build(x))
            }
            Ltl::Globally(x) => {
                let f = self.intern(Node::False);
                Node::Release(f, self.build(x))
            }
            Ltl::Until(a, b) => Node::Until(self.build(a), self.build(b)),
            Ltl::Release(a, b) => Node::Release(self.build(a), self.build(b)),
        };
        self.intern(n)
    }

    /// Initial configurations of a formula: the disjunctive normal form over
    /// its temporal subformulas.
    fn bar(&self, id: NodeId) -> Vec<Conj> {
        match self.nodes[id as usize] {
            Node::True => vec![vec![]],
            Node::False => vec![],
            Node::And(a, b) => {
                let (ea, eb) = (self.bar(a), self.bar(b));
                let mut out = Vec::new();
                for x in &ea {
                    for y in &eb {
                        out.push(union(x, y));
                    }
                }
                minimal_sets(out)
            }
            Node::Or(a, b) => {
                let mut out = self.bar(a);
                out.extend(self.bar(b));
                minimal_sets(out)
            }
            _ => vec![vec![id]],
        }
    }

    fn delta(&mut self, id: NodeId) -> Vec<Trans> {
        if let Some(d) = self.delta.get(&id) {
            return d.clone();
        }
        let d = match self.nodes[id as usize] {
            Node::True => vec![(Label::TRUE, vec![])],
            Node::False => vec![],
            Node::Lit(a, pos) => vec![(Label::literal(a, pos), vec![])],
            Node::And(a, b) => {
                let (da, db) = (self.delta(a), self.delta(b));
                product(&da, &db)
            }
            Node::Or(a, b) => {
                let mut v = self.delta(a);
                v.extend(self.delta(b));
                prune(v)
            }
            Node::Next(x) => self.bar(x).into_iter().map(|e| (Label::TRUE, e)).collect(),
            Node::Until(a, b) => {
                let mut v = self.delta(b);
                let da = self.delta(a);
                v.extend(product(&da, &[(Label::TRUE, vec![id])]));
                prune(v)
            }
            Node::Release(a, b) => {
                let (da, db) = (self.delta(a), self.delta(b));
                let mut v = product(&da, &db);
                v.extend(product(&db, &[(Label::TRUE, vec![id])]));
                prune(v)
            }
        };
        self.delta.insert(id, d.clone());
        d
    }
}

fn minimal_sets(mut v: Vec<Conj>) -> Vec<Conj> {
    v.sort();
    v.dedup();
    let keep: Vec<bool> = (0..v.len())
        .map(|i| !(0..v.len()).any(|j| j != i && subset(&v[j], &v[i])))
        .collect();
    v.into_iter()
        .zip(keep)
        .filter_map(|(e, k)| k.then_some(e))
        .collect()
}

/// Generalized transition: label, target configuration, and the acceptance
/// sets (one per until-subformula) it belongs to.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct GTrans {
    label: Label,
    dst: usize,
    acc: Vec<bool>,
}

/// Translates an LTL formula (converted to negation normal form if needed)
/// into a state-based Büchi automaton accepting exactly its models.
///
/// # Panics
///
/// If the formula mentions an atom id of 64 or above.
pub fn ltl_to_buchi(f: &Ltl) -> BuchiAutomaton {
    let f = if f.is_nnf() { f.clone() } else { to_nnf(f) };
    let mut vwaa = Vwaa::new();
    let root = vwaa.build(&f);

    // generalized automaton over configurations
    let mut configs: Vec<Conj> = Vec::new();
    let mut config_ids: HashMap<Conj, usize> = HashMap::new();
    let mut raw: Vec<Vec<Trans>> = Vec::new();
    let mut queue = VecDeque::new();
    let mut initial = Vec::new();
    for e in vwaa.bar(root) {
        let id = intern_config(&mut configs, &mut config_ids, &mut queue, e);
        initial.push(id);
    }
    while let Some(c) = queue.pop_front() {
        let mut ts: Vec<Trans> = vec![(Label::TRUE, vec![])];
        for q in configs[c].clone() {
            let d = vwaa.delta(q);
            ts = product_raw(&ts, &d);
        }
        for (_, e) in &ts {
            intern_config(&mut configs, &mut config_ids, &mut queue, e.clone());
        }
        if raw.len() <= c {
            raw.resize(c + 1, Vec::new());
        }
        raw[c] = ts;
    }
    raw.resize(configs.len(), Vec::new());

    // acceptance sets, one per until-node occurring in a configuration
    let mut untils: Vec<NodeId> = configs
        .iter()
        .flatten()
        .copied()
        .filter(|&q| matches!(vwaa.nodes[q as usize], Node::Until(..)))
        .collect();
    untils.sort_unstable();
    untils.dedup();
    let until_delta: Vec<Vec<Trans>> = untils.iter().map(|&u| vwaa.delta(u)).collect();

    let gba: Vec<Vec<GTrans>> = raw
        .iter()
        .map(|ts| {
            let gts: Vec<GTrans> = ts
                .iter()
                .map(|(label, e)| GTrans {
                    label: *label,
                    dst: config_ids[e],
                    acc: untils
                        .iter()
                        .zip(&until_delta)
                        .map(|(u, du)| {
                            e.binary_search(u).is_err()
                                || du.iter().any(|(beta, e2)| {
                                    label.implies(*beta)
                                        && e2.binary_search(u).is_err()
                                        && subset(e2, e)
                                })
                        })
                        .collect(),
                })
                .collect();
            prune_generalized(gts, &configs)
        })
        .collect();

    degeneralize(&gba, &initial, untils.len())
}

fn intern_config(
    configs: &mut Vec<Conj>,
    ids: &mut HashMap<Conj, usize>,
    queue: &mut VecDeque<usize>,
    e: Conj,
) -> usize {
    if let Some(&id) = ids.get(&e) {
        return id;
    }
    let id = configs.len();
    configs.push(e.clone());
    ids.insert(e, id);
    queue.push_back(id);
    id
}

/// Drops a transition dominated by another: weaker label, smaller target
/// configuration and a superset of acceptance sets.
fn prune_generalized(mut v: Vec<GTrans>, configs: &[Conj]) -> Vec<GTrans> {
    v.sort();
    v.dedup();
    let dominated = |t: &GTrans, by: &GTrans| {
        t.label.implies(by.label)
            && subset(&configs[by.dst], &configs[t.dst])
            && t.acc.iter().zip(&by.acc).all(|(a, b)| !a || *b)
    };
    let keep: Vec<bool> = (0..v.len())
        .map(|i| !(0..v.len()).any(|j| j != i && dominated(&v[i], &v[j])))
        .collect();
    v.into_iter()
        .zip(keep)
        .filter_map(|(t, k)| k.then_some(t))
        .collect()
}

/// Counter construction: level `n` marks a completed round through all
/// acceptance sets and is the accepting level.
fn degeneralize(gba: &[Vec<GTrans>], initial: &[usize], n: usize) -> BuchiAutomaton {
    let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
    let mut keys: Vec<(usize, usize)> = Vec::new();
    let mut queue = VecDeque::new();
    let mut get = |key: (usize, usize), keys: &mut Vec<(usize, usize)>, queue: &mut VecDeque<usize>| {
        *ids.entry(key).or_insert_with(|| {
            keys.push(key);
            queue.push_back(keys.len() - 1);
            keys.len() - 1
        })
    };
    let init: Vec<usize> = initial
        .iter()
        .map(|&g| get((g, 0), &mut keys, &mut queue))
        .collect();
    let mut edges: BTreeMap<usize, Vec<Edge>> = BTreeMap::new();
    while let Some(s) = queue.pop_front() {
        let (g, level) = keys[s];
        let mut out = Vec::new();
        for t in &gba[g] {
            let mut j = if level == n { 0 } else { level };
            while j < n && t.acc[j] {
                j += 1;
            }
            let dst = get((t.dst, j), &mut keys, &mut queue);
            out.push(Edge { label: t.label, dst });
        }
        out.sort();
        out.dedup();
        edges.insert(s, out);
    }
    let states = keys
        .iter()
        .enumerate()
        .map(|(s, &(_, level))| BuchiState::new(level == n, edges.remove(&s).unwrap_or_default()))
        .collect();
    let mut initial = init;
    initial.sort_unstable();
    initial.dedup();
    BuchiAutomaton { states, initial }
}
