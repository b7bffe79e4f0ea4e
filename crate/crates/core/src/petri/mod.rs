//! Place/transition nets: structure, PNML ingestion, enabledness, firing and
//! the dynamic fireset enumerator.

mod atoms;
mod net;
mod pnml;

pub use atoms::{eval_atom, AtomicProp, IntTerm};
pub use net::{
    Arc, NetBuilder, NetError, PetriNet, PlaceInfo, TransitionInfo, UnitInfo,
};
pub use pnml::{parse_pnml, write_pnml, PnmlDocument, PnmlError};

/// Read access to the token counts of one marking.
///
/// Implemented for dense vectors and for encoded markings (through a codec
/// view), so enabledness and atom evaluation work on either representation.
pub trait TokenRead {
    fn tokens(&self, place: usize) -> u64;
}

impl TokenRead for [u32] {
    #[inline]
    fn tokens(&self, place: usize) -> u64 {
        u64::from(self[place])
    }
}

impl TokenRead for Vec<u32> {
    #[inline]
    fn tokens(&self, place: usize) -> u64 {
        u64::from(self[place])
    }
}

/// True iff every input place of `t` holds at least the arc weight.
#[inline]
pub fn is_enabled<M: TokenRead + ?Sized>(net: &PetriNet, marking: &M, t: usize) -> bool {
    net.transitions[t]
        .pre
        .iter()
        .all(|arc| u64::from(arc.weight) <= marking.tokens(arc.place))
}

/// Fire `t` on a dense marking, returning the successor.
///
/// Returns `None` when a token count would exceed `u32::MAX`. Firing a
/// disabled transition is a contract violation caught in debug builds.
pub fn fire(net: &PetriNet, marking: &[u32], t: usize) -> Option<Vec<u32>> {
    debug_assert!(is_enabled(net, marking, t), "firing disabled transition {t}");
    let mut next = marking.to_vec();
    for &(place, delta) in &net.transitions[t].effect {
        let v = i64::from(next[place]) + delta;
        next[place] = u32::try_from(v).ok()?;
    }
    Some(next)
}

/// The smallest enabled transition with index strictly greater than `after`
/// (or any index when `after` is `None`).
///
/// Threading the result back in enumerates the fireset in index order
/// without ever materializing it.
#[inline]
pub fn next_enabled<M: TokenRead + ?Sized>(
    net: &PetriNet,
    marking: &M,
    after: Option<usize>,
) -> Option<usize> {
    let start = after.map_or(0, |t| t + 1);
    (start..net.transitions.len()).find(|&t| is_enabled(net, marking, t))
}

/// All transitions enabled under `marking`, in index order.
pub fn fireset<M: TokenRead + ?Sized>(net: &PetriNet, marking: &M) -> Vec<usize> {
    (0..net.transitions.len())
        .filter(|&t| is_enabled(net, marking, t))
        .collect()
}
