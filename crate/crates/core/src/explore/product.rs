//! Lazily expanded product of the reachability graph and a Büchi automaton.

use crate::buchi::{BuchiAutomaton, Label};
use crate::codec::{
    decode, decode_into, drw_read, drw_write, encode, EncodingPlan, Overflow, PackedView, Slot,
    StateId, StateStore,
};
use crate::petri::{eval_atom, fireset, next_enabled, AtomicProp, PetriNet};

use super::{Move, Step};

/// A pair of an interned marking and a Büchi state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProductState {
    pub marking: StateId,
    pub buchi: usize,
}

/// Per-marking data kept in the state store.
#[derive(Debug, Default, Clone)]
pub(crate) struct MarkMeta {
    valuation: u64,
    valuation_known: bool,
    /// Cached full fireset, only filled by the full-fireset baseline.
    fireset: Option<Box<[u32]>>,
}

/// Counters proving which code paths ran.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct PathCounters {
    /// Full firesets computed and cached.
    pub fireset_precomputes: u64,
    /// Complete decodes of a packed marking.
    pub full_decodes: u64,
}

/// Successors of one Büchi state leading to the same destination.
#[derive(Debug, Clone)]
struct Group {
    dst: usize,
    /// Label and index of each edge in the source state's edge list.
    labels: Vec<(Label, usize)>,
}

/// Enumeration position inside one product state's successors.
#[derive(Debug, Default, Clone, Copy)]
pub struct Cursor {
    group: usize,
    /// Edge chosen for the current group, `None` before the group starts.
    edge: Option<usize>,
    /// Last fired transition (dynamic fireset).
    last: Option<usize>,
    /// Position in the cached fireset (baseline).
    pos: usize,
}

/// Product graph with optimizations selected by flags.
///
/// - `dynamic`: enabled transitions are found one at a time from the last
///   fired index; otherwise the full fireset is computed once per marking
///   and cached in the store.
/// - `direct`: token counts are read and written in the packed words;
///   otherwise markings are decoded, modified and re-encoded.
pub struct ProductGraph<'a> {
    net: &'a PetriNet,
    atoms: &'a [AtomicProp],
    buchi: &'a BuchiAutomaton,
    plan: EncodingPlan,
    dynamic: bool,
    direct: bool,
    store: StateStore<MarkMeta>,
    groups: Vec<Vec<Group>>,
    initial: Vec<ProductState>,
    dense: Vec<u32>,
    words: Vec<u32>,
    fireset_bytes: usize,
    counters: PathCounters,
}

impl<'a> ProductGraph<'a> {
    /// Builds the graph and interns the initial marking. With `heuristic`,
    /// Büchi successors and initial states are taken in `D + T` order,
    /// otherwise in index order.
    pub fn new(
        net: &'a PetriNet,
        atoms: &'a [AtomicProp],
        buchi: &'a BuchiAutomaton,
        plan: EncodingPlan,
        dynamic: bool,
        direct: bool,
        heuristic: bool,
    ) -> Result<Self, Overflow> {
        let m0 = encode(&plan, net.initial_marking())?;
        let mut store = StateStore::new(plan.words());
        let (m0, _) = store.intern(m0.words());

        let groups = (0..buchi.states.len())
            .map(|b| {
                let edges = if heuristic {
                    buchi.ordered_successors(b)
                } else {
                    buchi.index_ordered_successors(b)
                };
                let mut groups: Vec<Group> = Vec::new();
                for e in edges {
                    let idx = buchi.states[b]
                        .edges
                        .iter()
                        .position(|x| *x == e)
                        .expect("edge comes from this state");
                    match groups.iter_mut().find(|g| g.dst == e.dst) {
                        Some(g) => g.labels.push((e.label, idx)),
                        None => groups.push(Group {
                            dst: e.dst,
                            labels: vec![(e.label, idx)],
                        }),
                    }
                }
                groups
            })
            .collect();

        let mut init = buchi.initial.clone();
        if heuristic {
            init.sort_by(|&x, &y| buchi.priority_cmp(x, y));
        }
        let initial = init
            .into_iter()
            .map(|b| ProductState { marking: m0, buchi: b })
            .collect();

        Ok(ProductGraph {
            net,
            atoms,
            buchi,
            dense: vec![0; net.num_places()],
            words: Vec::with_capacity(plan.words()),
            plan,
            dynamic,
            direct,
            store,
            groups,
            initial,
            fireset_bytes: 0,
            counters: PathCounters::default(),
        })
    }

    pub fn initial_states(&self) -> &[ProductState] {
        &self.initial
    }

    pub fn automaton(&self) -> &BuchiAutomaton {
        self.buchi
    }

    pub fn plan(&self) -> &EncodingPlan {
        &self.plan
    }

    pub fn is_accepting(&self, ps: ProductState) -> bool {
        self.buchi.states[ps.buchi].accepting
    }

    /// Number of distinct markings interned so far.
    pub fn num_markings(&self) -> usize {
        self.store.len()
    }

    /// The dense token vector of an interned marking.
    pub fn marking(&self, m: StateId) -> Vec<u32> {
        decode(&self.plan, self.store.get(m))
    }

    pub fn counters(&self) -> PathCounters {
        self.counters
    }

    /// Per-marking search bookkeeping: the metadata slots plus cached
    /// firesets.
    pub fn metadata_bytes(&self) -> usize {
        self.store.len() * std::mem::size_of::<MarkMeta>() + self.fireset_bytes
    }

    /// Bytes held by the state store including metadata.
    pub fn accounted_bytes(&self) -> usize {
        self.store.table_bytes() + self.fireset_bytes
    }

    /// Truth of every atom under marking `m`, bit `a` for atom `a`.
    pub fn valuation(&mut self, m: StateId) -> u64 {
        let meta = self.store.meta(m);
        if meta.valuation_known {
            return meta.valuation;
        }
        let words = self.store.get(m);
        let mut v = 0u64;
        if self.direct {
            let view = PackedView { plan: &self.plan, words };
            for (i, a) in self.atoms.iter().enumerate() {
                v |= u64::from(eval_atom(self.net, &view, a)) << i;
            }
        } else {
            decode_into(&self.plan, words, &mut self.dense);
            self.counters.full_decodes += 1;
            for (i, a) in self.atoms.iter().enumerate() {
                v |= u64::from(eval_atom(self.net, &self.dense[..], a)) << i;
            }
        }
        let meta = self.store.meta_mut(m);
        meta.valuation = v;
        meta.valuation_known = true;
        v
    }

    fn next_enabled_after(&mut self, m: StateId, after: Option<usize>) -> Option<usize> {
        let words = self.store.get(m);
        if self.direct {
            next_enabled(self.net, &PackedView { plan: &self.plan, words }, after)
        } else {
            decode_into(&self.plan, words, &mut self.dense);
            self.counters.full_decodes += 1;
            next_enabled(self.net, &self.dense[..], after)
        }
    }

    fn cached_fireset_at(&mut self, m: StateId, pos: usize) -> Option<usize> {
        if self.store.meta(m).fireset.is_none() {
            let words = self.store.get(m);
            let fs = if self.direct {
                fireset(self.net, &PackedView { plan: &self.plan, words })
            } else {
                decode_into(&self.plan, words, &mut self.dense);
                self.counters.full_decodes += 1;
                fireset(self.net, &self.dense[..])
            };
            let fs: Box<[u32]> = fs.into_iter().map(|t| t as u32).collect();
            self.fireset_bytes += fs.len() * std::mem::size_of::<u32>();
            self.counters.fireset_precomputes += 1;
            self.store.meta_mut(m).fireset = Some(fs);
        }
        let fs = self.store.meta(m).fireset.as_ref().unwrap();
        fs.get(pos).map(|&t| t as usize)
    }

    /// Fires `t` from marking `m` and interns the result.
    fn fire_from(&mut self, m: StateId, t: usize) -> Result<StateId, Overflow> {
        let effect = &self.net.transitions()[t].effect;
        self.words.clear();
        self.words.extend_from_slice(self.store.get(m));
        if self.direct {
            // decrements first so a unit is free before its next place is set
            for pass_inc in [false, true] {
                for &(p, d) in effect {
                    if (d > 0) != pass_inc || matches!(self.plan.slot(p), Slot::Derived(_)) {
                        continue;
                    }
                    let v = drw_read(&self.plan, &self.words, p) as i64 + d;
                    drw_write(&self.plan, &mut self.words, p, v as u64)?;
                }
            }
        } else {
            decode_into(&self.plan, &self.words, &mut self.dense);
            self.counters.full_decodes += 1;
            for &(p, d) in effect {
                let v = i64::from(self.dense[p]) + d;
                self.dense[p] = u32::try_from(v).map_err(|_| Overflow {
                    place: p,
                    value: v as u64,
                    scheme: self.plan.scheme(),
                })?;
            }
            let enc = encode(&self.plan, &self.dense)?;
            self.words.clear();
            self.words.extend_from_slice(enc.words());
        }
        Ok(self.store.intern(&self.words).0)
    }

    /// Advances `cursor` to the next successor of `ps`.
    ///
    /// Büchi edge groups are visited in order; a group contributes when one
    /// of its labels holds under the marking of `ps`, and then yields one
    /// successor per enabled transition in index order, or a single
    /// stuttering successor when none is enabled.
    pub fn next_successor(
        &mut self,
        ps: ProductState,
        cursor: &mut Cursor,
    ) -> Result<Option<(ProductState, Step)>, Overflow> {
        loop {
            let Some(group) = self.groups[ps.buchi].get(cursor.group) else {
                return Ok(None);
            };
            let dst = group.dst;
            let edge = match cursor.edge {
                Some(e) => e,
                None => {
                    let val = self.valuation(ps.marking);
                    let group = &self.groups[ps.buchi][cursor.group];
                    match group.labels.iter().find(|(l, _)| l.holds(val)) {
                        Some(&(_, e)) => {
                            cursor.edge = Some(e);
                            cursor.last = None;
                            cursor.pos = 0;
                            e
                        }
                        None => {
                            cursor.group += 1;
                            continue;
                        }
                    }
                }
            };
            let first = if self.dynamic {
                cursor.last.is_none()
            } else {
                cursor.pos == 0
            };
            let t = if self.dynamic {
                let t = self.next_enabled_after(ps.marking, cursor.last);
                cursor.last = t.or(cursor.last);
                t
            } else {
                let t = self.cached_fireset_at(ps.marking, cursor.pos);
                cursor.pos += 1;
                t
            };
            match t {
                Some(t) => {
                    let m2 = self.fire_from(ps.marking, t)?;
                    let step = Step { mv: Move::Fire(t), edge, dst };
                    return Ok(Some((ProductState { marking: m2, buchi: dst }, step)));
                }
                None => {
                    cursor.group += 1;
                    cursor.edge = None;
                    if first {
                        let step = Step { mv: Move::Stutter, edge, dst };
                        return Ok(Some((ProductState { marking: ps.marking, buchi: dst }, step)));
                    }
                }
            }
        }
    }

    /// All successors of `ps` in enumeration order.
    pub fn successors(&mut self, ps: ProductState) -> Result<Vec<(ProductState, Step)>, Overflow> {
        let mut cursor = Cursor::default();
        let mut out = Vec::new();
        while let Some(s) = self.next_successor(ps, &mut cursor)? {
            out.push(s);
        }
        Ok(out)
    }
}
