//! Packed marking encodings, direct field access and state interning.

mod bits;
mod invariants;
mod plan;
mod store;

pub use bits::{bits_for, words_for, BitField, WORD_BITS};
pub use invariants::{compute_invariant_bounds, InvariantAnalysis};
pub use plan::{
    decode, decode_into, drw_read, drw_write, encode, is_one_safe, overflow_check, plan_encoding,
    DerivedPlace, EncodedMarking, EncodingPlan, Overflow, PackedView, PlanError, Scheme, Slot,
    DEFAULT16_MAX,
};
pub use store::{StateId, StateStore};
