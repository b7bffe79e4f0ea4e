//! Direct read/write of fixed-width fields inside a packed `u32` sequence.
//!
//! Bits are numbered LSB-first within each word; bit `i` of the sequence is
//! bit `i % 32` of word `i / 32`. A field either lies inside one word or
//! spans two neighbouring words, and each case has its own read and write
//! patterns precomputed once per field.

pub const WORD_BITS: u32 = 32;

/// A `len`-bit field starting at bit `start`, with its access patterns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BitField {
    start: u32,
    len: u32,
    index: u32,
    offset: u32,
    read_low: u32,
    read_high: u32,
}

#[inline]
fn low_mask(len: u32) -> u32 {
    if len >= WORD_BITS {
        u32::MAX
    } else {
        (1u32 << len) - 1
    }
}

impl BitField {
    pub fn new(start: u32, len: u32) -> Self {
        assert!(len <= WORD_BITS, "field wider than a word");
        let index = start / WORD_BITS;
        let offset = start % WORD_BITS;
        let mask = low_mask(len);
        let read_low = if len == 0 { 0 } else { mask << offset };
        // offset == 0 never crosses, so `32 - offset` below stays in 1..=31.
        let read_high = if len > 0 && offset + len > WORD_BITS {
            mask >> (WORD_BITS - offset)
        } else {
            0
        };
        BitField {
            start,
            len,
            index,
            offset,
            read_low,
            read_high,
        }
    }

    pub fn start(&self) -> u32 {
        self.start
    }

    pub fn len(&self) -> u32 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Largest value the field can hold.
    pub fn max_value(&self) -> u64 {
        if self.len == 0 {
            0
        } else {
            u64::from(low_mask(self.len))
        }
    }

    /// Whether the field spans two words.
    pub fn crosses_word(&self) -> bool {
        self.read_high != 0
    }

    /// The zeroing masks `(low word, high word)` used by [`BitField::write`].
    pub fn zero_patterns(&self) -> (u32, u32) {
        (!self.read_low, !self.read_high)
    }

    #[inline]
    pub fn read(&self, words: &[u32]) -> u32 {
        if self.read_low == 0 {
            return 0;
        }
        let i = self.index as usize;
        let low = (words[i] & self.read_low) >> self.offset;
        if self.read_high == 0 {
            low
        } else {
            low | ((words[i + 1] & self.read_high) << (WORD_BITS - self.offset))
        }
    }

    /// Overwrites the field with `value`, which must fit in `len` bits.
    #[inline]
    pub fn write(&self, words: &mut [u32], value: u32) {
        debug_assert!(u64::from(value) <= self.max_value());
        if self.read_low == 0 {
            return;
        }
        let i = self.index as usize;
        words[i] = (words[i] & !self.read_low) | (value << self.offset);
        if self.read_high != 0 {
            words[i + 1] =
                (words[i + 1] & !self.read_high) | (value >> (WORD_BITS - self.offset));
        }
    }
}

/// Number of bits needed to store every value in `0..=max`.
pub fn bits_for(max: u64) -> u32 {
    64 - max.leading_zeros()
}

/// Number of 32-bit words holding `bits` bits.
pub fn words_for(bits: u32) -> usize {
    bits.div_ceil(WORD_BITS) as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Naive oracle: read bit by bit.
    fn read_bits(words: &[u32], start: u32, len: u32) -> u32 {
        (0..len).fold(0, |acc, k| {
            let bit = start + k;
            acc | (((words[(bit / 32) as usize] >> (bit % 32)) & 1) << k)
        })
    }

    #[test]
    fn within_word() {
        let f = BitField::new(4, 3);
        assert!(!f.crosses_word());
        let words = [0b101 << 4];
        assert_eq!(f.read(&words), 5);
    }

    #[test]
    fn across_words() {
        let f = BitField::new(30, 4);
        assert!(f.crosses_word());
        let mut words = [0u32; 2];
        f.write(&mut words, 0b1011);
        assert_eq!(words[0] >> 30, 0b11);
        assert_eq!(words[1] & 0b11, 0b10);
        assert_eq!(f.read(&words), 11);
    }

    #[test]
    fn cross_word_masks_by_hand() {
        // Four bits starting at 30: two low bits in word 0, two in word 1.
        let f = BitField::new(30, 4);
        assert_eq!(f.zero_patterns(), (0x3FFF_FFFF, 0xFFFF_FFFC));
        let mut words = [u32::MAX, u32::MAX];
        f.write(&mut words, 15);
        assert_eq!(words, [u32::MAX, u32::MAX]);
        f.write(&mut words, 0);
        assert_eq!(words, [0x3FFF_FFFF, 0xFFFF_FFFC]);
    }

    #[test]
    fn zeroing_leaves_neighbours() {
        let a = BitField::new(0, 4);
        let b = BitField::new(4, 3);
        let c = BitField::new(7, 5);
        let mut w = [0u32];
        a.write(&mut w, 9);
        b.write(&mut w, 5);
        c.write(&mut w, 17);
        b.write(&mut w, 0);
        assert_eq!((a.read(&w), b.read(&w), c.read(&w)), (9, 0, 17));
    }

    #[test]
    fn full_width_and_empty_fields() {
        let f = BitField::new(32, 32);
        let mut w = [0u32, 0];
        f.write(&mut w, u32::MAX);
        assert_eq!(w, [0, u32::MAX]);
        assert_eq!(f.read(&w), u32::MAX);

        let g = BitField::new(17, 32);
        let mut w = [0u32, 0];
        g.write(&mut w, 0xDEAD_BEEF);
        assert_eq!(g.read(&w), 0xDEAD_BEEF);
        assert_eq!(read_bits(&w, 17, 32), 0xDEAD_BEEF);

        let e = BitField::new(0, 0);
        assert_eq!(e.read(&[]), 0);
        e.write(&mut [], 0);
    }

    #[test]
    fn exhaustive_small_widths_against_bit_oracle() {
        for len in 1..=8u32 {
            for start in 0..32u32 {
                let f = BitField::new(start, len);
                for value in 0..(1u32 << len) {
                    let mut w = [0xA5A5_A5A5u32, 0x5A5A_5A5A];
                    let before = w;
                    f.write(&mut w, value);
                    assert_eq!(f.read(&w), value);
                    assert_eq!(read_bits(&w, start, len), value);
                    // nothing outside the field moved
                    for bit in (0..64).filter(|b| *b < start || *b >= start + len) {
                        assert_eq!(read_bits(&w, bit, 1), read_bits(&before, bit, 1));
                    }
                }
            }
        }
    }

    #[test]
    fn bit_counts() {
        assert_eq!(bits_for(0), 0);
        assert_eq!(bits_for(1), 1);
        assert_eq!(bits_for(3), 2);
        assert_eq!(bits_for(4), 3);
        assert_eq!(bits_for(65535), 16);
        assert_eq!(words_for(0), 0);
        assert_eq!(words_for(33), 2);
    }
}
