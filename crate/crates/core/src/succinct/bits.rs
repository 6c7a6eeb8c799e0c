//! Packed integer arrays and a word-backed bit stream.

use crate::error::{format_err, Result};
use crate::persist::{ByteSink, ByteSource, Persist};

/// Number of bits needed to write `max` in binary (at least 1).
pub fn width_for(max: u64) -> u32 {
    (64 - max.leading_zeros()).max(1)
}

#[inline]
fn mask(width: u32) -> u64 {
    if width == 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

#[inline]
fn read_field(words: &[u64], bit: usize, width: u32) -> u64 {
    if width == 0 {
        return 0;
    }
    let w = bit / 64;
    let off = (bit % 64) as u32;
    let lo = words[w] >> off;
    let v = if off + width > 64 {
        lo | (words[w + 1] << (64 - off))
    } else {
        lo
    };
    v & mask(width)
}

#[inline]
fn write_field(words: &mut [u64], bit: usize, width: u32, value: u64) {
    if width == 0 {
        return;
    }
    let value = value & mask(width);
    let w = bit / 64;
    let off = (bit % 64) as u32;
    words[w] &= !(mask(width) << off);
    words[w] |= value << off;
    if off + width > 64 {
        let spill = off + width - 64;
        words[w + 1] &= !mask(spill);
        words[w + 1] |= value >> (64 - off);
    }
}

/// Fixed-width packed integer array.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntVector {
    words: Vec<u64>,
    len: usize,
    width: u32,
}

impl IntVector {
    pub fn with_width(len: usize, width: u32) -> Self {
        assert!((1..=64).contains(&width), "width must be in 1..=64");
        let nwords = (len * width as usize).div_ceil(64);
        Self {
            words: vec![0; nwords],
            len,
            width,
        }
    }

    /// Packs `values` using the smallest width that holds the maximum.
    pub fn from_slice(values: &[u64]) -> Self {
        let max = values.iter().copied().max().unwrap_or(0);
        Self::from_slice_width(values, width_for(max))
    }

    pub fn from_slice_width(values: &[u64], width: u32) -> Self {
        let mut iv = Self::with_width(values.len(), width);
        for (i, &v) in values.iter().enumerate() {
            debug_assert!(v <= mask(width));
            iv.set(i, v);
        }
        iv
    }

    #[inline]
    pub fn get(&self, i: usize) -> u64 {
        assert!(i < self.len, "IntVector index {i} out of range {}", self.len);
        read_field(&self.words, i * self.width as usize, self.width)
    }

    #[inline]
    pub fn set(&mut self, i: usize, v: u64) {
        assert!(i < self.len);
        write_field(&mut self.words, i * self.width as usize, self.width, v);
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn to_vec(&self) -> Vec<u64> {
        self.iter().collect()
    }
}

impl Persist for IntVector {
    fn write_to(&self, out: &mut ByteSink) {
        out.put_usize(self.len);
        out.put_u64(self.width as u64);
        out.put_words(&self.words);
    }

    fn read_from(src: &mut ByteSource<'_>) -> Result<Self> {
        let len = src.get_usize()?;
        let width = src.get_u64()?;
        if !(1..=64).contains(&width) {
            return format_err(format!("invalid integer width {width}"));
        }
        let width = width as u32;
        let words = src.get_words()?;
        if words.len() != (len.saturating_mul(width as usize)).div_ceil(64) {
            return format_err("packed integer array has wrong word count");
        }
        Ok(Self { words, len, width })
    }
}

/// Append-only bit stream, least significant bit first within each word.
#[derive(Debug, Clone, Default)]
pub struct BitWriter {
    words: Vec<u64>,
    len: usize,
}

impl BitWriter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn write_bits(&mut self, value: u64, width: u32) {
        if width == 0 {
            return;
        }
        let need = (self.len + width as usize).div_ceil(64);
        if self.words.len() < need {
            self.words.resize(need, 0);
        }
        write_field(&mut self.words, self.len, width, value);
        self.len += width as usize;
    }

    pub fn write_bit(&mut self, bit: bool) {
        self.write_bits(bit as u64, 1);
    }

    /// Elias-gamma code of `x >= 1`.
    pub fn write_gamma(&mut self, x: u64) {
        assert!(x >= 1, "gamma codes start at 1");
        let nbits = 63 - x.leading_zeros();
        for _ in 0..nbits {
            self.write_bit(false);
        }
        self.write_bit(true);
        self.write_bits(x, nbits);
    }

    /// Elias-delta code of `x >= 1`.
    pub fn write_delta(&mut self, x: u64) {
        assert!(x >= 1, "delta codes start at 1");
        let nbits = 63 - x.leading_zeros();
        self.write_gamma(nbits as u64 + 1);
        self.write_bits(x, nbits);
    }

    pub fn into_words(self) -> (Vec<u64>, usize) {
        (self.words, self.len)
    }
}

const SHORT_BITS: u32 = 12;
const SHORT_MASK: u64 = (1 << SHORT_BITS) - 1;

/// Delta codes of at most `SHORT_BITS` bits, keyed by the next bits of the
/// stream: value in the low byte, code length above it, 0 if none fits.
fn short_deltas() -> &'static [u16] {
    static TABLE: std::sync::OnceLock<Vec<u16>> = std::sync::OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = vec![0u16; 1 << SHORT_BITS];
        for x in 1u64..256 {
            let mut w = BitWriter::new();
            w.write_delta(x);
            let len = w.len() as u32;
            if len > SHORT_BITS {
                continue;
            }
            let code = w.words[0];
            for rest in 0..1u64 << (SHORT_BITS - len) {
                table[(code | rest << len) as usize] = (len << 8) as u16 | x as u16;
            }
        }
        table
    })
}

/// Cursor over a bit stream produced by [`BitWriter`].
#[derive(Debug, Clone)]
pub struct BitReader<'a> {
    words: &'a [u64],
    pos: usize,
}

impl<'a> BitReader<'a> {
    pub fn new(words: &'a [u64], pos: usize) -> Self {
        Self { words, pos }
    }

    #[inline]
    pub fn read_bits(&mut self, width: u32) -> u64 {
        let v = read_field(self.words, self.pos, width);
        self.pos += width as usize;
        v
    }

    #[inline]
    fn read_unary_zeros(&mut self) -> u32 {
        let mut count = 0u32;
        loop {
            let w = self.pos / 64;
            let off = self.pos % 64;
            let chunk = self.words[w] >> off;
            if chunk != 0 {
                let tz = chunk.trailing_zeros();
                count += tz;
                self.pos += tz as usize + 1;
                return count;
            }
            let skipped = 64 - off;
            count += skipped as u32;
            self.pos += skipped;
        }
    }

    #[inline]
    pub fn read_gamma(&mut self) -> u64 {
        let nbits = self.read_unary_zeros();
        (1u64 << nbits) | self.read_bits(nbits)
    }

    /// Next 64 bits of the stream, zero padded past the end.
    #[inline]
    fn peek(&self) -> u64 {
        let w = self.pos / 64;
        let off = self.pos % 64;
        let lo = self.words.get(w).map_or(0, |&x| x >> off);
        if off == 0 {
            lo
        } else {
            lo | self.words.get(w + 1).map_or(0, |&x| x << (64 - off))
        }
    }

    #[inline]
    pub fn read_delta(&mut self) -> u64 {
        // Whole code inside one peeked word: the usual case.
        let p = self.peek();
        let lz = p.trailing_zeros();
        if lz < 32 {
            let nbits = (((p >> (lz + 1)) & mask(lz)) | (1u64 << lz)) as u32 - 1;
            let head = 2 * lz + 1;
            if head + nbits <= 64 {
                self.pos += (head + nbits) as usize;
                return (1u64 << nbits) | ((p >> head) & mask(nbits));
            }
        }
        let nbits = (self.read_gamma() - 1) as u32;
        (1u64 << nbits) | self.read_bits(nbits)
    }

    /// Sum of the next `count` delta codes.
    pub fn sum_deltas(&mut self, count: usize) -> u64 {
        let table = short_deltas();
        let mut sum = 0u64;
        let mut left = count;
        while left > 0 {
            // Decode from one window while whole codes remain inside it.
            let mut p = self.peek();
            let mut used = 0u32;
            while left > 0 {
                let e = table[(p & SHORT_MASK) as usize];
                let (value, total) = if e != 0 {
                    ((e & 0xff) as u64, (e >> 8) as u32)
                } else {
                    let lz = p.trailing_zeros();
                    if lz >= 32 {
                        break;
                    }
                    let nbits = (((p >> (lz + 1)) & ((1u64 << lz) - 1)) as u32) + (1u32 << lz) - 1;
                    let head = 2 * lz + 1;
                    ((1u64 << nbits) | ((p >> head) & ((1u64 << nbits) - 1)), head + nbits)
                };
                if used + total > 64 {
                    break;
                }
                sum += value;
                used += total;
                p = (p >> (total - 1)) >> 1;
                left -= 1;
            }
            self.pos += used as usize;
            if left > 0 && used == 0 {
                sum += self.read_delta();
                left -= 1;
            }
        }
        sum
    }

    pub fn position(&self) -> usize {
        self.pos
    }
}
