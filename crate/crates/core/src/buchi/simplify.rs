use std::collections::{HashMap, VecDeque};

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use super::automaton::{BuchiAutomaton, BuchiState, Edge};

/// Language-preserving cleanup: removes unreachable states and states that
/// cannot reach an accepting cycle, drops edges whose label implies another
/// edge's label to the same state, and merges states with equal acceptance
/// and out-edges. Annotations are reset.
pub fn simplify_buchi(a: &BuchiAutomaton) -> BuchiAutomaton {
    let mut cur = a.clone();
    for st in &mut cur.states {
        st.distance = None;
        st.toughness = 0.0;
    }
    loop {
        let before = (cur.states.len(), edge_count(&cur));
        cur = prune_useless(&cur);
        for st in &mut cur.states {
            st.edges = reduce_edges(&st.edges);
        }
        cur = merge_equal(&cur);
        if (cur.states.len(), edge_count(&cur)) == before {
            return cur;
        }
    }
}

fn edge_count(a: &BuchiAutomaton) -> usize {
    a.states.iter().map(|s| s.edges.len()).sum()
}

fn reduce_edges(edges: &[Edge]) -> Vec<Edge> {
    let mut v = edges.to_vec();
    v.sort();
    v.dedup();
    let keep: Vec<bool> = v
        .iter()
        .enumerate()
        .map(|(i, e)| {
            !v.iter()
                .enumerate()
                .any(|(j, f)| j != i && f.dst == e.dst && e.label.implies(f.label))
        })
        .collect();
    v.into_iter()
        .zip(keep)
        .filter_map(|(e, k)| k.then_some(e))
        .collect()
}

/// Strongly connected component index of every state.
fn scc_ids(a: &BuchiAutomaton) -> Vec<usize> {
    let mut g: DiGraph<(), ()> = DiGraph::with_capacity(a.states.len(), 0);
    let nodes: Vec<NodeIndex> = (0..a.states.len()).map(|_| g.add_node(())).collect();
    for (s, st) in a.states.iter().enumerate() {
        for e in &st.edges {
            g.add_edge(nodes[s], nodes[e.dst], ());
        }
    }
    let mut comp = vec![0; a.states.len()];
    for (c, scc) in tarjan_scc(&g).into_iter().enumerate() {
        for n in scc {
            comp[n.index()] = c;
        }
    }
    comp
}

fn prune_useless(a: &BuchiAutomaton) -> BuchiAutomaton {
    let n = a.states.len();
    let mut reach = vec![false; n];
    let mut queue: VecDeque<usize> = a.initial.iter().copied().collect();
    for &s in &a.initial {
        reach[s] = true;
    }
    while let Some(s) = queue.pop_front() {
        for e in &a.states[s].edges {
            if !reach[e.dst] {
                reach[e.dst] = true;
                queue.push_back(e.dst);
            }
        }
    }

    // states on a cycle through an accepting state
    let comp = scc_ids(a);
    let mut comp_size: HashMap<usize, usize> = HashMap::new();
    for &c in &comp {
        *comp_size.entry(c).or_default() += 1;
    }
    let mut good_comp = vec![false; n];
    for (s, st) in a.states.iter().enumerate() {
        let cyclic = comp_size[&comp[s]] > 1 || st.edges.iter().any(|e| e.dst == s);
        if st.accepting && cyclic {
            good_comp[comp[s]] = true;
        }
    }
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (s, st) in a.states.iter().enumerate() {
        for e in &st.edges {
            preds[e.dst].push(s);
        }
    }
    let mut live = vec![false; n];
    let mut queue: VecDeque<usize> = (0..n).filter(|&s| good_comp[comp[s]]).collect();
    for &s in &queue {
        live[s] = true;
    }
    while let Some(s) = queue.pop_front() {
        for &p in &preds[s] {
            if !live[p] {
                live[p] = true;
                queue.push_back(p);
            }
        }
    }
    let keep: Vec<bool> = (0..n).map(|s| reach[s] && live[s]).collect();
    let map = |s: usize| keep[s].then_some(s);
    rebuild(a, &keep, map)
}

/// Keeps the states flagged in `keep`, renumbering in order, and redirects
/// edges and initial states through `map` (edges mapped to `None` vanish).
fn rebuild(a: &BuchiAutomaton, keep: &[bool], map: impl Fn(usize) -> Option<usize>) -> BuchiAutomaton {
    let mut new_id = vec![usize::MAX; keep.len()];
    let mut next = 0;
    for (s, &k) in keep.iter().enumerate() {
        if k {
            new_id[s] = next;
            next += 1;
        }
    }
    let tr = |s: usize| map(s).map(|t| new_id[t]);
    let states = a
        .states
        .iter()
        .enumerate()
        .filter(|(s, _)| keep[*s])
        .map(|(_, st)| {
            let mut edges: Vec<Edge> = st
                .edges
                .iter()
                .filter_map(|e| tr(e.dst).map(|dst| Edge { label: e.label, dst }))
                .collect();
            edges.sort();
            edges.dedup();
            BuchiState::new(st.accepting, edges)
        })
        .collect();
    let mut initial: Vec<usize> = a.initial.iter().filter_map(|&s| tr(s)).collect();
    initial.sort_unstable();
    initial.dedup();
    BuchiAutomaton { states, initial }
}

fn merge_equal(a: &BuchiAutomaton) -> BuchiAutomaton {
    let n = a.states.len();
    let mut rep: Vec<usize> = (0..n).collect();
    let mut seen: HashMap<(bool, Vec<Edge>), usize> = HashMap::new();
    for (s, st) in a.states.iter().enumerate() {
        let mut edges = st.edges.clone();
        edges.sort();
        edges.dedup();
        match seen.get(&(st.accepting, edges.clone())) {
            Some(&r) => rep[s] = r,
            None => {
                seen.insert((st.accepting, edges), s);
            }
        }
    }
    let keep: Vec<bool> = (0..n).map(|s| rep[s] == s).collect();
    rebuild(a, &keep, |s| Some(rep[s]))
}
