use crate::buchi::BuchiAutomaton;
use crate::petri::{eval_atom, fire, fireset, is_enabled, AtomicProp, PetriNet};

use super::{CounterexampleRun, Move, Step};

/// Replays `run` on dense markings from the initial marking and checks it
/// is a genuine accepting lasso of the product.
///
/// Every fired transition must be enabled, stuttering happens only at
/// deadlocks, every Büchi edge exists and its label holds under the
/// marking the step leaves, the cycle is non-empty, returns to the product
/// state it started from and passes through the accepting Büchi state it
/// names.
pub fn verify_counterexample(
    net: &PetriNet,
    atoms: &[AtomicProp],
    buchi: &BuchiAutomaton,
    run: &CounterexampleRun,
) -> bool {
    if !buchi.initial.contains(&run.initial_buchi) || run.cycle.is_empty() {
        return false;
    }
    if !buchi.states.get(run.accepting).is_some_and(|s| s.accepting) {
        return false;
    }
    let mut marking = net.initial_marking().to_vec();
    let mut b = run.initial_buchi;
    for step in &run.prefix {
        if !advance(net, atoms, buchi, &mut marking, &mut b, step) {
            return false;
        }
    }
    let start = (marking.clone(), b);
    let mut seen_accepting = false;
    for step in &run.cycle {
        seen_accepting |= b == run.accepting;
        if !advance(net, atoms, buchi, &mut marking, &mut b, step) {
            return false;
        }
    }
    seen_accepting && (marking, b) == start
}

fn advance(
    net: &PetriNet,
    atoms: &[AtomicProp],
    buchi: &BuchiAutomaton,
    marking: &mut Vec<u32>,
    b: &mut usize,
    step: &Step,
) -> bool {
    let Some(edge) = buchi.states[*b].edges.get(step.edge) else {
        return false;
    };
    if edge.dst != step.dst {
        return false;
    }
    let valuation = atoms
        .iter()
        .enumerate()
        .fold(0u64, |v, (i, a)| v | u64::from(eval_atom(net, &marking[..], a)) << i);
    if !edge.label.holds(valuation) {
        return false;
    }
    match step.mv {
        Move::Stutter => {
            if !fireset(net, &marking[..]).is_empty() {
                return false;
            }
        }
        Move::Fire(t) => {
            if t >= net.num_transitions() || !is_enabled(net, &marking[..], t) {
                return false;
            }
            match fire(net, marking, t) {
                Some(m) => *marking = m,
                None => return false,
            }
        }
    }
    *b = edge.dst;
    true
}
