use super::RankSelect;
use crate::error::{format_err, Result};
use crate::persist::{ByteSink, ByteSource, Persist};

const WORDS_PER_SUPER: usize = 8;
const SUPER_BITS: usize = 64 * WORDS_PER_SUPER;
const SELECT_SAMPLE: usize = 512;

/// Plain bitvector with a two-level rank directory and sampled select.
///
/// Only the bits are serialized; the directories are rebuilt on load.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DenseBitvector {
    words: Vec<u64>,
    len: usize,
    ones: usize,
    supers: Vec<u64>,
    blocks: Vec<u16>,
    select1_hints: Vec<u32>,
    select0_hints: Vec<u32>,
}

impl DenseBitvector {
    pub fn from_words(mut words: Vec<u64>, len: usize) -> Self {
        words.resize(len.div_ceil(64), 0);
        if !len.is_multiple_of(64) {
            let last = words.len() - 1;
            words[last] &= (1u64 << (len % 64)) - 1;
        }
        let mut bv = Self {
            words,
            len,
            ..Default::default()
        };
        bv.build_directory();
        bv
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut words = Vec::new();
        let mut len = 0;
        for b in bits {
            if len % 64 == 0 {
                words.push(0);
            }
            if b {
                *words.last_mut().unwrap() |= 1 << (len % 64);
            }
            len += 1;
        }
        Self::from_words(words, len)
    }

    /// Bitvector of length `len` with ones at `positions` (any order).
    pub fn from_positions(len: usize, positions: &[usize]) -> Self {
        let mut words = vec![0u64; len.div_ceil(64)];
        for &p in positions {
            assert!(p < len, "position {p} outside bitvector of length {len}");
            words[p / 64] |= 1 << (p % 64);
        }
        Self::from_words(words, len)
    }

    fn build_directory(&mut self) {
        let nsupers = self.words.len().div_ceil(WORDS_PER_SUPER);
        self.supers = Vec::with_capacity(nsupers + 1);
        self.blocks = Vec::with_capacity(self.words.len());
        self.select1_hints.clear();
        self.select0_hints.clear();
        let mut total = 0u64;
        for (wi, &w) in self.words.iter().enumerate() {
            if wi % WORDS_PER_SUPER == 0 {
                self.supers.push(total);
            }
            let in_super = total - self.supers[wi / WORDS_PER_SUPER];
            self.blocks.push(in_super as u16);
            total += w.count_ones() as u64;
        }
        self.supers.push(total);
        self.ones = total as usize;

        // Superblock holding each SELECT_SAMPLE-th one (and zero).
        let mut next1 = 0usize;
        let mut next0 = 0usize;
        for sb in 0..nsupers {
            let ones_end = self.supers[sb + 1] as usize;
            let bits_end = ((sb + 1) * SUPER_BITS).min(self.len);
            let zeros_end = bits_end - ones_end;
            while next1 < ones_end {
                self.select1_hints.push(sb as u32);
                next1 += SELECT_SAMPLE;
            }
            while next0 < zeros_end {
                self.select0_hints.push(sb as u32);
                next0 += SELECT_SAMPLE;
            }
        }
    }

    pub fn count_zeros(&self) -> usize {
        self.len - self.ones
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    fn zeros_before_super(&self, sb: usize) -> usize {
        (sb * SUPER_BITS).min(self.len) - self.supers[sb] as usize
    }

    /// Position of the zero with 0-based rank `k`.
    pub fn select0(&self, k: usize) -> Option<usize> {
        if k >= self.count_zeros() {
            return None;
        }
        let nsupers = self.supers.len() - 1;
        let mut lo = self.select0_hints[k / SELECT_SAMPLE] as usize;
        let mut hi = self
            .select0_hints
            .get(k / SELECT_SAMPLE + 1)
            .map_or(nsupers - 1, |&h| h as usize);
        // Last superblock with zeros_before <= k.
        while lo < hi {
            let mid = (lo + hi).div_ceil(2);
            if self.zeros_before_super(mid) <= k {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        let mut remaining = k - self.zeros_before_super(lo);
        let first = lo * WORDS_PER_SUPER;
        for wi in first..(first + WORDS_PER_SUPER).min(self.words.len()) {
            let inv = !self.words[wi];
            let z = inv.count_ones() as usize;
            if remaining < z {
                return Some(wi * 64 + select_in_word(inv, remaining));
            }
            remaining -= z;
        }
        unreachable!("select0 directory inconsistent")
    }

    /// Rightmost one strictly before `i`.
    #[inline]
    pub fn prev_one(&self, i: usize) -> Option<usize> {
        if i == 0 {
            return None;
        }
        let mut wi = (i - 1) / 64;
        let mut w = self.words[wi] & (u64::MAX >> (63 - (i - 1) % 64));
        // A short scan back, then the directory.
        for _ in 0..4 {
            if w != 0 {
                return Some(wi * 64 + 63 - w.leading_zeros() as usize);
            }
            if wi == 0 {
                return None;
            }
            wi -= 1;
            w = self.words[wi];
        }
        let r = self.rank1((wi + 1) * 64);
        r.checked_sub(1).and_then(|k| self.select1(k))
    }

    /// Leftmost one at or after `i`.
    #[inline]
    pub fn next_one(&self, i: usize) -> Option<usize> {
        if i >= self.len {
            return None;
        }
        let mut wi = i / 64;
        let mut w = self.words[wi] & (u64::MAX << (i % 64));
        for _ in 0..4 {
            if w != 0 {
                return Some(wi * 64 + w.trailing_zeros() as usize);
            }
            wi += 1;
            if wi == self.words.len() {
                return None;
            }
            w = self.words[wi];
        }
        self.select1(self.rank1(wi * 64))
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }
}

/// `SELECT_IN_BYTE[b][k]`: position of the one with rank `k` in byte `b`.
const SELECT_IN_BYTE: [[u8; 8]; 256] = {
    let mut table = [[0u8; 8]; 256];
    let mut b = 0;
    while b < 256 {
        let mut k = 0;
        let mut bit = 0;
        while bit < 8 {
            if b >> bit & 1 == 1 {
                table[b][k] = bit as u8;
                k += 1;
            }
            bit += 1;
        }
        b += 1;
    }
    table
};

/// Position of the one with rank `k` inside `w`; narrows by halves down to
/// a byte, then looks the byte up.
#[inline]
fn select_in_word(w: u64, k: usize) -> usize {
    let mut k = k as u32;
    let mut shift = 0u32;
    for width in [32u32, 16, 8] {
        let c = ((w >> shift) & ((1u64 << width) - 1)).count_ones();
        if k >= c {
            k -= c;
            shift += width;
        }
    }
    let byte = ((w >> shift) & 0xff) as usize;
    shift as usize + SELECT_IN_BYTE[byte][k as usize & 7] as usize
}

impl RankSelect for DenseBitvector {
    fn len(&self) -> usize {
        self.len
    }

    fn count_ones(&self) -> usize {
        self.ones
    }

    #[inline]
    fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    fn rank1(&self, i: usize) -> usize {
        assert!(i <= self.len, "rank position {i} out of range {}", self.len);
        if i == self.len {
            return self.ones;
        }
        let wi = i / 64;
        let base = self.supers[wi / WORDS_PER_SUPER] + self.blocks[wi] as u64;
        let partial = self.words[wi] & ((1u64 << (i % 64)) - 1);
        base as usize + partial.count_ones() as usize
    }

    fn select1(&self, k: usize) -> Option<usize> {
        if k >= self.ones {
            return None;
        }
        let nsupers = self.supers.len() - 1;
        let mut lo = self.select1_hints[k / SELECT_SAMPLE] as usize;
        let mut hi = self
            .select1_hints
            .get(k / SELECT_SAMPLE + 1)
            .map_or(nsupers - 1, |&h| h as usize);
        while lo < hi {
            let mid = (lo + hi).div_ceil(2);
            if self.supers[mid] as usize <= k {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        let mut remaining = k - self.supers[lo] as usize;
        let first = lo * WORDS_PER_SUPER;
        for wi in first..(first + WORDS_PER_SUPER).min(self.words.len()) {
            let c = self.words[wi].count_ones() as usize;
            if remaining < c {
                return Some(wi * 64 + select_in_word(self.words[wi], remaining));
            }
            remaining -= c;
        }
        unreachable!("select1 directory inconsistent")
    }
}

impl Persist for DenseBitvector {
    fn write_to(&self, out: &mut ByteSink) {
        out.put_usize(self.len);
        out.put_words(&self.words);
    }

    fn read_from(src: &mut ByteSource<'_>) -> Result<Self> {
        let len = src.get_usize()?;
        let words = src.get_words()?;
        if words.len() != len.div_ceil(64) {
            return format_err("bitvector word count does not match its length");
        }
        if len % 64 != 0 && words[words.len() - 1] >> (len % 64) != 0 {
            return format_err("bitvector has bits set past its length");
        }
        Ok(Self::from_words(words, len))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(s: &str) -> DenseBitvector {
        DenseBitvector::from_bits(s.bytes().map(|b| b == b'1'))
    }

    #[test]
    fn small_examples() {
        let b = bv("1101110");
        assert_eq!(b.rank1(4), 3);
        assert_eq!(b.rank1(0), 0);
        // 1-based j=3 -> position 4, j=5 -> position 6.
        assert_eq!(b.select1(2), Some(3));
        assert_eq!(b.select1(4), Some(5));
        assert_eq!(b.select1(5), None);
        assert!(b.try_select1(5).is_err());
        assert!(b.try_rank1(8).is_err());
        assert_eq!(b.try_rank1(7).unwrap(), 5);

        let z = DenseBitvector::from_bits(std::iter::repeat_n(false, 10));
        assert_eq!(z.rank1(10), 0);
        assert_eq!(z.select1(0), None);

        let lead = bv("1000000");
        assert_eq!(lead.select1(0), Some(0));
    }

    #[test]
    fn predecessor_successor() {
        let b = bv("0100100");
        assert_eq!(b.predecessor1(4), Some(4));
        assert_eq!(b.successor1(4), Some(4));
        assert_eq!(b.predecessor1(0), None);
        assert_eq!(b.successor1(5), None);
        assert_eq!(b.successor1(2), Some(4));
    }

    #[test]
    fn select0_across_superblocks() {
        let bits: Vec<bool> = (0..5000).map(|i| i % 3 == 0).collect();
        let b = DenseBitvector::from_bits(bits.iter().copied());
        let zeros: Vec<usize> = (0..5000).filter(|i| i % 3 != 0).collect();
        for (k, &p) in zeros.iter().enumerate() {
            assert_eq!(b.select0(k), Some(p));
        }
        assert_eq!(b.select0(zeros.len()), None);
    }

    #[test]
    fn persist_rebuilds_directory() {
        let bits: Vec<bool> = (0..3000).map(|i| (i * i) % 7 < 2).collect();
        let b = DenseBitvector::from_bits(bits);
        let back = DenseBitvector::from_bytes(&b.to_bytes()).unwrap();
        assert_eq!(back, b);
    }
}
