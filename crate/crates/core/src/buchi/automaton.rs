use std::cmp::Ordering;
use std::collections::VecDeque;
use std::fmt::{self, Write as _};

/// Conjunction of atom literals. Bit `a` of `pos` requires atom `a` true,
/// bit `a` of `neg` requires it false. The empty conjunction is `true`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Label {
    pub pos: u64,
    pub neg: u64,
}

impl Label {
    pub const TRUE: Label = Label { pos: 0, neg: 0 };

    pub fn literal(atom: usize, positive: bool) -> Label {
        assert!(atom < 64, "at most 64 atoms per formula");
        let bit = 1u64 << atom;
        if positive {
            Label { pos: bit, neg: 0 }
        } else {
            Label { pos: 0, neg: bit }
        }
    }

    /// Conjunction, or `None` when contradictory.
    pub fn and(self, other: Label) -> Option<Label> {
        let l = Label {
            pos: self.pos | other.pos,
            neg: self.neg | other.neg,
        };
        (l.pos & l.neg == 0).then_some(l)
    }

    /// `self ⇒ other`: every literal of `other` occurs in `self`.
    pub fn implies(self, other: Label) -> bool {
        other.pos & !self.pos == 0 && other.neg & !self.neg == 0
    }

    /// Truth under a valuation (bit `a` = atom `a`).
    #[inline]
    pub fn holds(self, valuation: u64) -> bool {
        self.pos & !valuation == 0 && self.neg & valuation == 0
    }

    /// Atoms mentioned by the label.
    pub fn atoms(self) -> u64 {
        self.pos | self.neg
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self == Label::TRUE {
            return f.write_str("true");
        }
        let mut first = true;
        for a in 0..64 {
            let lit = if self.pos >> a & 1 == 1 {
                ""
            } else if self.neg >> a & 1 == 1 {
                "!"
            } else {
                continue;
            };
            if !first {
                f.write_str(" & ")?;
            }
            first = false;
            write!(f, "{lit}a{a}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub label: Label,
    pub dst: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BuchiState {
    pub accepting: bool,
    pub edges: Vec<Edge>,
    /// Shortest edge count to an accepting state; `None` when unreachable.
    pub distance: Option<u32>,
    /// Weighted number of distinct atoms on the out-edges.
    pub toughness: f64,
}

impl BuchiState {
    pub fn new(accepting: bool, edges: Vec<Edge>) -> Self {
        BuchiState {
            accepting,
            edges,
            distance: None,
            toughness: 0.0,
        }
    }

    /// `D + T`, infinite when no accepting state is reachable.
    pub fn priority(&self) -> f64 {
        match self.distance {
            Some(d) => f64::from(d) + self.toughness,
            None => f64::INFINITY,
        }
    }
}

/// State-based Büchi automaton over atom valuations.
#[derive(Debug, Clone, PartialEq)]
pub struct BuchiAutomaton {
    pub states: Vec<BuchiState>,
    pub initial: Vec<usize>,
}

/// Default weight of one atom in the toughness term.
pub const DEFAULT_TOUGHNESS_COEFF: f64 = 0.1;

impl BuchiAutomaton {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.initial.is_empty()
    }

    /// Fills `distance` by breadth-first search backwards from the accepting
    /// states and `toughness` as `coeff` times the number of distinct atoms
    /// on each state's out-edges.
    pub fn annotate(&mut self, coeff: f64) {
        let n = self.states.len();
        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (s, st) in self.states.iter().enumerate() {
            for e in &st.edges {
                preds[e.dst].push(s);
            }
        }
        let mut dist: Vec<Option<u32>> = vec![None; n];
        let mut queue = VecDeque::new();
        for (s, st) in self.states.iter().enumerate() {
            if st.accepting {
                dist[s] = Some(0);
                queue.push_back(s);
            }
        }
        while let Some(s) = queue.pop_front() {
            let d = dist[s].unwrap();
            for &p in &preds[s] {
                if dist[p].is_none() {
                    dist[p] = Some(d + 1);
                    queue.push_back(p);
                }
            }
        }
        for (st, d) in self.states.iter_mut().zip(dist) {
            st.distance = d;
            let atoms = st.edges.iter().fold(0u64, |acc, e| acc | e.label.atoms());
            st.toughness = coeff * f64::from(atoms.count_ones());
        }
    }

    /// Compares two states by `D + T`, infinity last, then by index.
    pub fn priority_cmp(&self, a: usize, b: usize) -> Ordering {
        self.states[a]
            .priority()
            .total_cmp(&self.states[b].priority())
            .then(a.cmp(&b))
    }

    /// Out-edges of `state`, most promising destination first.
    pub fn ordered_successors(&self, state: usize) -> Vec<Edge> {
        let mut edges = self.states[state].edges.clone();
        edges.sort_by(|x, y| self.priority_cmp(x.dst, y.dst).then(x.label.cmp(&y.label)));
        edges
    }

    /// Out-edges of `state` ordered by destination index only.
    pub fn index_ordered_successors(&self, state: usize) -> Vec<Edge> {
        let mut edges = self.states[state].edges.clone();
        edges.sort();
        edges.sort_by_key(|e| e.dst);
        edges
    }

    /// Line-oriented dump: header, initial states, then one line per state
    /// followed by its edges.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "states {}", self.states.len());
        let init: Vec<String> = self.initial.iter().map(|s| s.to_string()).collect();
        let _ = writeln!(out, "initial {}", init.join(" "));
        for (i, st) in self.states.iter().enumerate() {
            let d = st.distance.map_or("inf".to_string(), |d| d.to_string());
            let _ = writeln!(
                out,
                "state {i} accepting={} D={d} T={:.1}",
                u8::from(st.accepting),
                st.toughness
            );
            for e in &st.edges {
                let _ = writeln!(out, "  -> {} [{}]", e.dst, e.label);
            }
        }
        out
    }
}
