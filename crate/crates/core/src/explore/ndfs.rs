//! Nested depth-first search for accepting cycles with a depth bound on
//! the outer search.

use std::time::{Duration, Instant};

use super::product::{Cursor, ProductGraph, ProductState};
use super::{CounterexampleRun, Limit, Step};
use crate::codec::Overflow;

const WHITE: u8 = 0;
/// On the outer stack.
const CYAN: u8 = 1;
/// Outer search finished.
const BLUE: u8 = 2;
/// Visited by an inner search, or an accepting state whose inner search
/// is done.
const RED: u8 = 3;

/// How often (in expansions) time and memory limits are checked.
const CHECK_INTERVAL: u64 = 1024;

pub(crate) enum RoundResult {
    Found(CounterexampleRun),
    Exhausted { truncated: bool },
    Limit(Limit),
    Overflow(Overflow),
}

struct Frame {
    ps: ProductState,
    cursor: Cursor,
    entry: Option<Step>,
    depth: u64,
}

impl Frame {
    fn new(ps: ProductState, entry: Option<Step>, depth: u64) -> Self {
        Frame {
            ps,
            cursor: Cursor::default(),
            entry,
            depth,
        }
    }
}

pub(crate) struct Search<'g, 'a> {
    pub graph: &'g mut ProductGraph<'a>,
    colors: Vec<u8>,
    nb: usize,
    pub expanded: u64,
    pub peak_bytes: usize,
    pub peak_metadata: usize,
    started: Instant,
    timeout: Option<Duration>,
    memory_cap: Option<usize>,
}

impl<'g, 'a> Search<'g, 'a> {
    pub fn new(
        graph: &'g mut ProductGraph<'a>,
        started: Instant,
        timeout: Option<Duration>,
        memory_cap: Option<usize>,
    ) -> Self {
        let nb = graph.automaton().states.len();
        Search {
            graph,
            colors: Vec::new(),
            nb,
            expanded: 0,
            peak_bytes: 0,
            peak_metadata: 0,
            started,
            timeout,
            memory_cap,
        }
    }

    fn idx(&self, ps: ProductState) -> usize {
        ps.marking as usize * self.nb + ps.buchi
    }

    fn color(&mut self, ps: ProductState) -> u8 {
        let i = self.idx(ps);
        if i >= self.colors.len() {
            self.colors.resize((self.graph.num_markings() * self.nb).max(i + 1), WHITE);
        }
        self.colors[i]
    }

    fn set_color(&mut self, ps: ProductState, c: u8) {
        self.color(ps);
        let i = self.idx(ps);
        self.colors[i] = c;
    }

    fn bytes(&self, frames: usize) -> usize {
        self.graph.accounted_bytes()
            + self.colors.capacity()
            + frames * std::mem::size_of::<Frame>()
    }

    /// Counts one expansion and checks the limits every so often.
    fn tick(&mut self, frames: usize) -> Option<Limit> {
        self.expanded += 1;
        if !self.expanded.is_multiple_of(CHECK_INTERVAL) {
            return None;
        }
        self.sample(frames)
    }

    fn sample(&mut self, frames: usize) -> Option<Limit> {
        let bytes = self.bytes(frames);
        self.peak_bytes = self.peak_bytes.max(bytes);
        self.peak_metadata = self.peak_metadata.max(self.graph.metadata_bytes());
        if self.timeout.is_some_and(|t| self.started.elapsed() >= t) {
            return Some(Limit::Time);
        }
        if self.memory_cap.is_some_and(|cap| bytes > cap) {
            return Some(Limit::Memory);
        }
        None
    }

    /// One search round from scratch. Outer-search frames deeper than
    /// `bound` are not pushed; the result then reports truncation.
    pub fn run_round(&mut self, bound: Option<u64>) -> RoundResult {
        self.colors.clear();
        let mut truncated = false;
        let initial = self.graph.initial_states().to_vec();
        for init in initial {
            if self.color(init) != WHITE {
                continue;
            }
            let mut blue = vec![Frame::new(init, None, 0)];
            self.set_color(init, CYAN);
            if let Some(l) = self.tick(1) {
                return RoundResult::Limit(l);
            }
            while let Some(top) = blue.last_mut() {
                let (ps, depth) = (top.ps, top.depth);
                let next = match self.graph.next_successor(ps, &mut top.cursor) {
                    Ok(n) => n,
                    Err(o) => return RoundResult::Overflow(o),
                };
                match next {
                    Some((t, step)) => {
                        let c = self.color(t);
                        if c == CYAN && (self.graph.is_accepting(ps) || self.graph.is_accepting(t)) {
                            let acc = if self.graph.is_accepting(ps) { ps } else { t };
                            return RoundResult::Found(cycle_from_stack(&blue, &[], t, step, acc));
                        }
                        if c != WHITE {
                            continue;
                        }
                        if bound.is_some_and(|k| depth + 1 > k) {
                            truncated = true;
                            continue;
                        }
                        blue.push(Frame::new(t, Some(step), depth + 1));
                        self.set_color(t, CYAN);
                        if let Some(l) = self.tick(blue.len()) {
                            return RoundResult::Limit(l);
                        }
                    }
                    None => {
                        if self.graph.is_accepting(ps) {
                            match self.red(&blue) {
                                Ok(Some(run)) => return RoundResult::Found(run),
                                Ok(None) => {}
                                Err(r) => return r,
                            }
                            self.set_color(ps, RED);
                        } else {
                            self.set_color(ps, BLUE);
                        }
                        blue.pop();
                    }
                }
            }
        }
        if let Some(l) = self.sample(0) {
            return RoundResult::Limit(l);
        }
        RoundResult::Exhausted { truncated }
    }

    /// Inner search from the accepting state on top of `blue`, looking for
    /// a path back to any state on the outer stack.
    fn red(&mut self, blue: &[Frame]) -> Result<Option<CounterexampleRun>, RoundResult> {
        let seed = blue.last().unwrap().ps;
        let mut red = vec![Frame::new(seed, None, 0)];
        while let Some(top) = red.last_mut() {
            let ps = top.ps;
            let next = self
                .graph
                .next_successor(ps, &mut top.cursor)
                .map_err(RoundResult::Overflow)?;
            match next {
                Some((t, step)) => match self.color(t) {
                    CYAN => return Ok(Some(cycle_from_stack(blue, &red, t, step, seed))),
                    BLUE => {
                        self.set_color(t, RED);
                        red.push(Frame::new(t, Some(step), 0));
                        if let Some(l) = self.tick(blue.len() + red.len()) {
                            return Err(RoundResult::Limit(l));
                        }
                    }
                    _ => {}
                },
                None => {
                    red.pop();
                }
            }
        }
        Ok(None)
    }
}

/// Builds the lasso closing at `target`, which lies on the outer stack:
/// the prefix runs along the outer stack up to `target`, the cycle along
/// the rest of the outer stack, then the inner stack, then `last`.
fn cycle_from_stack(
    blue: &[Frame],
    red: &[Frame],
    target: ProductState,
    last: Step,
    accepting: ProductState,
) -> CounterexampleRun {
    let i = blue
        .iter()
        .position(|f| f.ps == target)
        .expect("cyan state is on the outer stack");
    let prefix = blue[1..=i].iter().map(|f| f.entry.unwrap()).collect();
    let mut cycle: Vec<Step> = blue[i + 1..].iter().map(|f| f.entry.unwrap()).collect();
    cycle.extend(red.iter().skip(1).map(|f| f.entry.unwrap()));
    cycle.push(last);
    CounterexampleRun {
        initial_buchi: blue[0].ps.buchi,
        prefix,
        cycle,
        accepting: accepting.buchi,
    }
}
