//! Parameterized net families used by the examples, tests and benchmarks.

use crate::petri::{NetBuilder, PetriNet};

/// `n` dining philosophers. Philosopher `i` takes fork `i` then fork
/// `i+1`, eats, and returns both. The net deadlocks when every philosopher
/// holds a left fork. With `units`, each philosopher and each fork forms a
/// NUPN unit.
///
/// Places `think_i`, `hasL_i`, `eat_i`, `fork_i`; transitions `takeL_i`,
/// `takeR_i`, `release_i`.
pub fn philosophers(n: usize, units: bool) -> PetriNet {
    assert!(n >= 2);
    let mut b = NetBuilder::new();
    let think: Vec<usize> = (0..n).map(|i| b.place(format!("think_{i}"), 1)).collect();
    let has_l: Vec<usize> = (0..n).map(|i| b.place(format!("hasL_{i}"), 0)).collect();
    let eat: Vec<usize> = (0..n).map(|i| b.place(format!("eat_{i}"), 0)).collect();
    let fork: Vec<usize> = (0..n).map(|i| b.place(format!("fork_{i}"), 1)).collect();
    for i in 0..n {
        let right = fork[(i + 1) % n];
        let tl = b.transition(format!("takeL_{i}"));
        b.input(think[i], tl, 1).input(fork[i], tl, 1).output(tl, has_l[i], 1);
        let tr = b.transition(format!("takeR_{i}"));
        b.input(has_l[i], tr, 1).input(right, tr, 1).output(tr, eat[i], 1);
        let rel = b.transition(format!("release_{i}"));
        b.input(eat[i], rel, 1)
            .output(rel, think[i], 1)
            .output(rel, fork[i], 1)
            .output(rel, right, 1);
    }
    if units {
        for i in 0..n {
            b.unit(format!("phil_{i}"), vec![think[i], has_l[i], eat[i]]);
            b.unit(format!("forku_{i}"), vec![fork[i]]);
        }
        b.declare_safe(true);
    }
    b.build().expect("well-formed net")
}

/// Token ring with `n` stations. A station holding the token may enter its
/// critical section (`enter_i`), leave passing the token on (`leave_i`), or
/// pass the token without entering (`pass_i`).
///
/// Places `idle_i`, `crit_i`, `tok_i`.
pub fn token_ring(n: usize) -> PetriNet {
    assert!(n >= 2);
    let mut b = NetBuilder::new();
    let idle: Vec<usize> = (0..n).map(|i| b.place(format!("idle_{i}"), 1)).collect();
    let crit: Vec<usize> = (0..n).map(|i| b.place(format!("crit_{i}"), 0)).collect();
    let tok: Vec<usize> = (0..n)
        .map(|i| b.place(format!("tok_{i}"), u32::from(i == 0)))
        .collect();
    for i in 0..n {
        let next = tok[(i + 1) % n];
        let enter = b.transition(format!("enter_{i}"));
        b.input(idle[i], enter, 1).input(tok[i], enter, 1).output(enter, crit[i], 1);
        let leave = b.transition(format!("leave_{i}"));
        b.input(crit[i], leave, 1).output(leave, idle[i], 1).output(leave, next, 1);
        let pass = b.transition(format!("pass_{i}"));
        b.input(tok[i], pass, 1).output(pass, next, 1);
    }
    b.build().expect("well-formed net")
}

/// A producer and a consumer around a buffer of `capacity` slots.
/// `produce` needs a free slot, `consume` a full one; the producer may
/// also `stop` for good.
///
/// Places `prod`, `stopped`, `free`, `buffer`, `cons`.
pub fn producer_consumer(capacity: u32) -> PetriNet {
    let mut b = NetBuilder::new();
    let prod = b.place("prod", 1);
    let stopped = b.place("stopped", 0);
    let free = b.place("free", capacity);
    let buffer = b.place("buffer", 0);
    let cons = b.place("cons", 1);
    let produce = b.transition("produce");
    b.input(prod, produce, 1)
        .input(free, produce, 1)
        .output(produce, prod, 1)
        .output(produce, buffer, 1);
    let consume = b.transition("consume");
    b.input(cons, consume, 1)
        .input(buffer, consume, 1)
        .output(consume, cons, 1)
        .output(consume, free, 1);
    let stop = b.transition("stop");
    b.input(prod, stop, 1).output(stop, stopped, 1);
    b.build().expect("well-formed net")
}

/// A chain `p_0 -> t_0 -> p_1 -> ... -> p_len` with `tokens` tokens
/// starting in `p_0`. Every run ends in the deadlock with all tokens in
/// `p_len`.
pub fn drain(len: usize, tokens: u32) -> PetriNet {
    let mut b = NetBuilder::new();
    let places: Vec<usize> = (0..=len)
        .map(|i| b.place(format!("p_{i}"), if i == 0 { tokens } else { 0 }))
        .collect();
    for i in 0..len {
        let t = b.transition(format!("t_{i}"));
        b.input(places[i], t, 1).output(t, places[i + 1], 1);
    }
    b.build().expect("well-formed net")
}

/// `n` independent switches. Switch `i` moves between `off_i` (initially
/// marked) and `on_i` through `up_i` and `down_i`; transitions are indexed
/// `up_0, down_0, up_1, ...`.
pub fn toggles(n: usize) -> PetriNet {
    let mut b = NetBuilder::new();
    for i in 0..n {
        let off = b.place(format!("off_{i}"), 1);
        let on = b.place(format!("on_{i}"), 0);
        let up = b.transition(format!("up_{i}"));
        b.input(off, up, 1).output(up, on, 1);
        let down = b.transition(format!("down_{i}"));
        b.input(on, down, 1).output(down, off, 1);
    }
    b.build().expect("well-formed net")
}

/// Two counters `x` and `y` filled one token at a time from `xcap` and
/// `ycap` (each starting with `limit` tokens), giving `(limit+1)^2`
/// markings and a final deadlock. Transition `t_dead` waits on the empty
/// place `never` and is never enabled.
pub fn counter_grid(limit: u32) -> PetriNet {
    let mut b = NetBuilder::new();
    let x = b.place("x", 0);
    let xcap = b.place("xcap", limit);
    let y = b.place("y", 0);
    let ycap = b.place("ycap", limit);
    let never = b.place("never", 0);
    let tx = b.transition("tx");
    b.input(xcap, tx, 1).output(tx, x, 1);
    let ty = b.transition("ty");
    b.input(ycap, ty, 1).output(ty, y, 1);
    let td = b.transition("t_dead");
    b.input(never, td, 1).output(td, never, 1);
    b.build().expect("well-formed net")
}
