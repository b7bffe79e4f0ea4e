//! Chained hash table interning packed markings.
//!
//! Markings live back to back in one `u32` arena; state `i` occupies words
//! `i*width .. (i+1)*width`. Buckets hold the head state of each chain and
//! `next` links states within a chain.

/// Dense identifier of an interned marking.
pub type StateId = u32;

const NIL: u32 = u32::MAX;
const INITIAL_BUCKET_BITS: u32 = 16;
const SEED: u64 = 0x9E37_79B9_7F4A_7C15;
const MIX: u64 = 0xFF51_AFD7_ED55_8CCD;

#[inline]
fn hash_words(words: &[u32]) -> u64 {
    let mut h = SEED;
    for &w in words {
        h = (h ^ u64::from(w)).wrapping_mul(MIX);
        h ^= h >> 32;
    }
    h
}

/// Interning table with one metadata slot of type `M` per state.
#[derive(Debug, Clone)]
pub struct StateStore<M> {
    width: usize,
    data: Vec<u32>,
    next: Vec<u32>,
    buckets: Vec<u32>,
    bucket_bits: u32,
    meta: Vec<M>,
}

impl<M: Default> StateStore<M> {
    pub fn new(width: usize) -> Self {
        StateStore {
            width,
            data: Vec::new(),
            next: Vec::new(),
            buckets: vec![NIL; 1 << INITIAL_BUCKET_BITS],
            bucket_bits: INITIAL_BUCKET_BITS,
            meta: Vec::new(),
        }
    }

    #[inline]
    fn bucket_of(&self, h: u64) -> usize {
        (h.wrapping_mul(SEED) >> (64 - self.bucket_bits)) as usize
    }

    /// Returns the id of `words`, inserting it if new. The flag is `true`
    /// exactly on first insertion.
    pub fn intern(&mut self, words: &[u32]) -> (StateId, bool) {
        debug_assert_eq!(words.len(), self.width);
        let b = self.bucket_of(hash_words(words));
        let mut cur = self.buckets[b];
        while cur != NIL {
            if self.get(cur) == words {
                return (cur, false);
            }
            cur = self.next[cur as usize];
        }
        let id = self.next.len() as StateId;
        assert!(id != NIL, "state store full");
        self.data.extend_from_slice(words);
        self.next.push(self.buckets[b]);
        self.buckets[b] = id;
        self.meta.push(M::default());
        if self.next.len() * 4 > self.buckets.len() * 3 {
            self.grow();
        }
        (id, true)
    }

    /// Looks up `words` without inserting.
    pub fn find(&self, words: &[u32]) -> Option<StateId> {
        let mut cur = self.buckets[self.bucket_of(hash_words(words))];
        while cur != NIL {
            if self.get(cur) == words {
                return Some(cur);
            }
            cur = self.next[cur as usize];
        }
        None
    }

    fn grow(&mut self) {
        self.bucket_bits += 1;
        self.buckets = vec![NIL; 1 << self.bucket_bits];
        for id in 0..self.next.len() {
            let b = self.bucket_of(hash_words(self.get(id as StateId)));
            self.next[id] = self.buckets[b];
            self.buckets[b] = id as StateId;
        }
    }
}

impl<M> StateStore<M> {
    #[inline]
    pub fn get(&self, id: StateId) -> &[u32] {
        let start = id as usize * self.width;
        &self.data[start..start + self.width]
    }

    pub fn len(&self) -> usize {
        self.next.len()
    }

    pub fn is_empty(&self) -> bool {
        self.next.is_empty()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn num_buckets(&self) -> usize {
        self.buckets.len()
    }

    #[inline]
    pub fn meta(&self, id: StateId) -> &M {
        &self.meta[id as usize]
    }

    #[inline]
    pub fn meta_mut(&mut self, id: StateId) -> &mut M {
        &mut self.meta[id as usize]
    }

    /// Bytes held by the table itself: marking arena, chain links, buckets
    /// and the fixed-size part of the metadata slots.
    pub fn table_bytes(&self) -> usize {
        4 * (self.data.len() + self.next.len() + self.buckets.len())
            + std::mem::size_of::<M>() * self.meta.len()
    }

    /// `hist[k]` = number of buckets whose chain has length `k`.
    pub fn chain_histogram(&self) -> Vec<usize> {
        let mut hist = Vec::new();
        for &head in &self.buckets {
            let mut len = 0;
            let mut cur = head;
            while cur != NIL {
                len += 1;
                cur = self.next[cur as usize];
            }
            if hist.len() <= len {
                hist.resize(len + 1, 0);
            }
            hist[len] += 1;
        }
        hist
    }
}
