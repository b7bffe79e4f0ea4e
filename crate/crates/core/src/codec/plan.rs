use std::fmt::{self, Write as _};

use thiserror::Error;

use super::bits::{bits_for, words_for, BitField};
use super::invariants::{compute_invariant_bounds, InvariantAnalysis};
use crate::petri::{PetriNet, TokenRead};

/// Largest token count representable under [`Scheme::Default16`].
pub const DEFAULT16_MAX: u64 = 65_535;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// 16 bits per place.
    Default16,
    /// 32 bits per place, used when the initial marking exceeds 16 bits.
    Default32,
    /// One bit per place.
    OneSafe,
    /// One field per NUPN unit holding the 1-based code of its marked place.
    Nupn,
    /// Bound-sized fields for significant places; redundant places are
    /// recomputed from invariant equations.
    PInvariant,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Default16 => "default16",
            Scheme::Default32 => "default32",
            Scheme::OneSafe => "one-safe",
            Scheme::Nupn => "nupn",
            Scheme::PInvariant => "p-invariant",
        })
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PlanError {
    #[error("NUPN encoding requested but the net has no units")]
    NoUnits,
    #[error("one-safe encoding requested but place '{0}' starts with more than one token")]
    NotSafe(String),
    #[error("p-invariant encoding requested but place '{0}' has no invariant bound")]
    Unbounded(String),
}

/// Token count of a place that is not a stored field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivedPlace {
    pub constant: i64,
    pub divisor: i64,
    /// `(significant place, coefficient)` pairs.
    pub terms: Vec<(usize, i64)>,
}

impl DerivedPlace {
    /// `(constant - Σ coeff·m(q)) / divisor`.
    #[inline]
    pub fn value(&self, read: impl Fn(usize) -> u64) -> u64 {
        let s: i64 = self.terms.iter().map(|&(q, c)| c * read(q) as i64).sum();
        let v = (self.constant - s) / self.divisor;
        debug_assert!(v >= 0 && (self.constant - s) % self.divisor == 0);
        v as u64
    }
}

/// Where a place's token count lives in an encoded marking.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Slot {
    Field(BitField),
    /// Marked iff the unit field holds `code`.
    Unit { unit: usize, code: u32 },
    Derived(DerivedPlace),
}

/// Per-net bit layout of encoded markings.
#[derive(Debug, Clone)]
pub struct EncodingPlan {
    pub(crate) scheme: Scheme,
    pub(crate) slots: Vec<Slot>,
    pub(crate) unit_fields: Vec<BitField>,
    pub(crate) total_bits: u32,
    pub(crate) words: usize,
    pub(crate) bounds: Option<Vec<Option<u64>>>,
}

impl EncodingPlan {
    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn total_bits(&self) -> u32 {
        self.total_bits
    }

    /// Length of an encoded marking in 32-bit words.
    pub fn words(&self) -> usize {
        self.words
    }

    pub fn slot(&self, place: usize) -> &Slot {
        &self.slots[place]
    }

    pub fn unit_field(&self, unit: usize) -> BitField {
        self.unit_fields[unit]
    }

    /// Invariant bounds, for [`Scheme::PInvariant`] plans.
    pub fn bounds(&self) -> Option<&[Option<u64>]> {
        self.bounds.as_deref()
    }

    /// `(start_pos, bit_len)` of the bits backing `place`: its own field, its
    /// unit's field, or `None` for derived places.
    pub fn place_range(&self, place: usize) -> Option<(u32, u32)> {
        match &self.slots[place] {
            Slot::Field(f) => Some((f.start(), f.len())),
            Slot::Unit { unit, .. } => {
                let f = self.unit_fields[*unit];
                Some((f.start(), f.len()))
            }
            Slot::Derived(_) => None,
        }
    }

    /// Layout table as TSV: `place  start_pos  bit_len  kind`.
    pub fn layout_tsv(&self, net: &PetriNet) -> String {
        let mut out = String::from("place\tstart_pos\tbit_len\tkind\n");
        for (p, slot) in self.slots.iter().enumerate() {
            let name = &net.places()[p].name;
            let _ = match slot {
                Slot::Field(f) => writeln!(out, "{name}\t{}\t{}\tfield", f.start(), f.len()),
                Slot::Unit { unit, code } => {
                    let f = self.unit_fields[*unit];
                    writeln!(out, "{name}\t{}\t{}\tunit={unit},code={code}", f.start(), f.len())
                }
                Slot::Derived(_) => writeln!(out, "{name}\t-\t0\tderived"),
            };
        }
        out
    }
}

/// True when the net is declared 1-safe or invariant bounds prove it.
pub fn is_one_safe(net: &PetriNet, invariants: &InvariantAnalysis) -> bool {
    net.declared_safe() || invariants.bounds.iter().all(|b| matches!(b, Some(x) if *x <= 1))
}

fn fixed_width(net: &PetriNet, scheme: Scheme, width: u32) -> EncodingPlan {
    let slots: Vec<Slot> = (0..net.num_places() as u32)
        .map(|p| Slot::Field(BitField::new(p * width, width)))
        .collect();
    let total_bits = width * net.num_places() as u32;
    EncodingPlan {
        scheme,
        slots,
        unit_fields: Vec::new(),
        total_bits,
        words: words_for(total_bits),
        bounds: None,
    }
}

fn default_plan(net: &PetriNet) -> EncodingPlan {
    if net.initial_marking().iter().any(|&m| u64::from(m) > DEFAULT16_MAX) {
        fixed_width(net, Scheme::Default32, 32)
    } else {
        fixed_width(net, Scheme::Default16, 16)
    }
}

fn nupn_plan(net: &PetriNet) -> Option<EncodingPlan> {
    let units = net.units()?;
    let mut start = 0;
    let mut unit_fields = Vec::with_capacity(units.len());
    for u in units {
        let len = bits_for(u.places.len() as u64);
        unit_fields.push(BitField::new(start, len));
        start += len;
    }
    let slots = net
        .places()
        .iter()
        .map(|p| Slot::Unit {
            unit: p.unit.expect("validated unit partition"),
            code: p.unit_code,
        })
        .collect();
    Some(EncodingPlan {
        scheme: Scheme::Nupn,
        slots,
        unit_fields,
        total_bits: start,
        words: words_for(start),
        bounds: None,
    })
}

fn pinvariant_plan(net: &PetriNet, inv: &InvariantAnalysis) -> Result<EncodingPlan, PlanError> {
    if let Some(p) = inv.bounds.iter().position(|b| b.is_none_or(|b| bits_for(b) > 32)) {
        return Err(PlanError::Unbounded(net.places()[p].name.clone()));
    }
    let m0 = net.initial_marking();
    let mut slots: Vec<Option<Slot>> = vec![None; net.num_places()];
    for (y, &f) in inv.basis.iter().zip(&inv.free) {
        let constant: i64 = y.iter().zip(m0).map(|(&w, &m)| w * i64::from(m)).sum();
        let terms = (0..y.len())
            .filter(|&q| q != f && y[q] != 0)
            .map(|q| (q, y[q]))
            .collect();
        slots[f] = Some(Slot::Derived(DerivedPlace {
            constant,
            divisor: y[f],
            terms,
        }));
    }
    let mut start = 0;
    let slots = slots
        .into_iter()
        .enumerate()
        .map(|(p, slot)| {
            slot.unwrap_or_else(|| {
                let len = bits_for(inv.bounds[p].unwrap());
                let field = BitField::new(start, len);
                start += len;
                Slot::Field(field)
            })
        })
        .collect();
    Ok(EncodingPlan {
        scheme: Scheme::PInvariant,
        slots,
        unit_fields: Vec::new(),
        total_bits: start,
        words: words_for(start),
        bounds: Some(inv.bounds.clone()),
    })
}

/// Plans the encoding for `net`.
///
/// With no request, picks the first applicable of one-safe, NUPN,
/// p-invariant and default. A `Default16` request is widened to 32 bits when
/// the initial marking needs it.
pub fn plan_encoding(net: &PetriNet, requested: Option<Scheme>) -> Result<EncodingPlan, PlanError> {
    match requested {
        Some(Scheme::Default16) => Ok(default_plan(net)),
        Some(Scheme::Default32) => Ok(fixed_width(net, Scheme::Default32, 32)),
        Some(Scheme::OneSafe) => {
            if let Some(p) = net.initial_marking().iter().position(|&m| m > 1) {
                return Err(PlanError::NotSafe(net.places()[p].name.clone()));
            }
            Ok(fixed_width(net, Scheme::OneSafe, 1))
        }
        Some(Scheme::Nupn) => nupn_plan(net).ok_or(PlanError::NoUnits),
        Some(Scheme::PInvariant) => pinvariant_plan(net, &compute_invariant_bounds(net)),
        None => {
            let inv = compute_invariant_bounds(net);
            if is_one_safe(net, &inv) && net.initial_marking().iter().all(|&m| m <= 1) {
                Ok(fixed_width(net, Scheme::OneSafe, 1))
            } else if let Some(plan) = nupn_plan(net) {
                Ok(plan)
            } else if let Ok(plan) = pinvariant_plan(net, &inv) {
                Ok(plan)
            } else {
                Ok(default_plan(net))
            }
        }
    }
}

/// Reads the token count of `place` straight from the packed words.
#[inline]
pub fn drw_read(plan: &EncodingPlan, words: &[u32], place: usize) -> u64 {
    match &plan.slots[place] {
        Slot::Field(f) => u64::from(f.read(words)),
        Slot::Unit { unit, code } => u64::from(plan.unit_fields[*unit].read(words) == *code),
        Slot::Derived(d) => d.value(|q| drw_read(plan, words, q)),
    }
}

/// A token count that does not fit the plan: the run cannot go on.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("cannot handle the model: place {place} would hold {value} tokens under {scheme} encoding")]
pub struct Overflow {
    pub place: usize,
    pub value: u64,
    pub scheme: Scheme,
}

/// Checks that `value` tokens can be stored for `place`.
///
/// Under p-invariant encoding the bounds are proven, so a violation is an
/// internal error and panics.
pub fn overflow_check(plan: &EncodingPlan, place: usize, value: u64) -> Result<(), Overflow> {
    let fits = match &plan.slots[place] {
        Slot::Field(f) => value <= f.max_value(),
        Slot::Unit { .. } => value <= 1,
        Slot::Derived(_) => true,
    };
    if fits {
        return Ok(());
    }
    assert!(
        plan.scheme != Scheme::PInvariant,
        "invariant bound violated: place {place} reached {value}"
    );
    Err(Overflow {
        place,
        value,
        scheme: plan.scheme,
    })
}

/// Writes the token count of `place` in place, touching only its bits.
///
/// Derived places are not stored; writing them is a no-op.
#[inline]
pub fn drw_write(
    plan: &EncodingPlan,
    words: &mut [u32],
    place: usize,
    value: u64,
) -> Result<(), Overflow> {
    match &plan.slots[place] {
        Slot::Field(f) => {
            overflow_check(plan, place, value)?;
            f.write(words, value as u32);
        }
        Slot::Unit { unit, code } => {
            overflow_check(plan, place, value)?;
            let field = plan.unit_fields[*unit];
            let current = field.read(words);
            match (value, current == *code) {
                (0, true) => field.write(words, 0),
                (1, false) if current == 0 => field.write(words, *code),
                (1, false) => {
                    // another place of the unit is already marked
                    return Err(Overflow {
                        place,
                        value,
                        scheme: plan.scheme,
                    });
                }
                _ => {}
            }
        }
        Slot::Derived(_) => {}
    }
    Ok(())
}

/// A packed marking: `plan.words()` words, unused trailing bits zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EncodedMarking(pub Vec<u32>);

impl EncodedMarking {
    pub fn words(&self) -> &[u32] {
        &self.0
    }
}

/// Packs a dense marking.
pub fn encode(plan: &EncodingPlan, dense: &[u32]) -> Result<EncodedMarking, Overflow> {
    let mut words = vec![0u32; plan.words];
    for (p, &v) in dense.iter().enumerate() {
        if v != 0 {
            drw_write(plan, &mut words, p, u64::from(v))?;
        }
    }
    Ok(EncodedMarking(words))
}

/// Unpacks every place.
pub fn decode(plan: &EncodingPlan, words: &[u32]) -> Vec<u32> {
    let mut dense = vec![0u32; plan.slots.len()];
    decode_into(plan, words, &mut dense);
    dense
}

/// Unpacks every place into `out`, which must hold one entry per place.
pub fn decode_into(plan: &EncodingPlan, words: &[u32], out: &mut [u32]) {
    let mut derived = Vec::new();
    for (p, slot) in plan.slots.iter().enumerate() {
        out[p] = match slot {
            Slot::Field(f) => f.read(words),
            Slot::Unit { unit, code } => u32::from(plan.unit_fields[*unit].read(words) == *code),
            Slot::Derived(_) => {
                derived.push(p);
                0
            }
        };
    }
    for p in derived {
        if let Slot::Derived(d) = &plan.slots[p] {
            out[p] = d.value(|q| u64::from(out[q])) as u32;
        }
    }
}

/// Token access to a packed marking through direct reads.
#[derive(Clone, Copy)]
pub struct PackedView<'a> {
    pub plan: &'a EncodingPlan,
    pub words: &'a [u32],
}

impl TokenRead for PackedView<'_> {
    #[inline]
    fn tokens(&self, place: usize) -> u64 {
        drw_read(self.plan, self.words, place)
    }
}
