use super::{BitReader, BitWriter, IntVector};
use crate::error::{format_err, Result};
use crate::persist::{ByteSink, ByteSource, Persist};

/// Strictly increasing sequence stored as Elias-delta gaps, with every
/// `block`-th value kept verbatim together with the bit offset of the gaps
/// that follow it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockedDeltaSeq {
    len: usize,
    block: usize,
    samples: IntVector,
    offsets: IntVector,
    stream: Vec<u64>,
    stream_bits: usize,
}

impl BlockedDeltaSeq {
    pub fn new(values: &[u64], block: usize) -> Self {
        assert!(block >= 1, "block size must be positive");
        assert!(
            values.windows(2).all(|w| w[0] < w[1]),
            "values must be strictly increasing"
        );
        let mut writer = BitWriter::new();
        let mut samples = Vec::with_capacity(values.len().div_ceil(block));
        let mut offsets = Vec::with_capacity(samples.capacity());
        for chunk in values.chunks(block) {
            samples.push(chunk[0]);
            offsets.push(writer.len() as u64);
            for w in chunk.windows(2) {
                writer.write_delta(w[1] - w[0]);
            }
        }
        let (stream, stream_bits) = writer.into_words();
        Self {
            len: values.len(),
            block,
            samples: IntVector::from_slice(&samples),
            offsets: IntVector::from_slice(&offsets),
            stream,
            stream_bits,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn block_size(&self) -> usize {
        self.block
    }

    fn block_len(&self, b: usize) -> usize {
        self.block.min(self.len - b * self.block)
    }

    /// The `i`-th value (0-based).
    pub fn get(&self, i: usize) -> u64 {
        assert!(i < self.len, "delta sequence index {i} out of range {}", self.len);
        let b = i / self.block;
        let mut v = self.samples.get(b);
        let skip = i % self.block;
        if skip > 0 {
            let mut r = BitReader::new(&self.stream, self.offsets.get(b) as usize);
            v += r.sum_deltas(skip);
        }
        v
    }

    /// Largest stored value `<= x` together with its 0-based index.
    pub fn predecessor(&self, x: u64) -> Option<(u64, usize)> {
        let nblocks = self.samples.len();
        // Number of blocks whose first value is <= x.
        let (mut lo, mut hi) = (0usize, nblocks);
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.samples.get(mid) <= x {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        if lo == 0 {
            return None;
        }
        let b = lo - 1;
        let mut v = self.samples.get(b);
        let mut idx = b * self.block;
        let n = self.block_len(b);
        if n > 1 {
            let mut r = BitReader::new(&self.stream, self.offsets.get(b) as usize);
            for _ in 1..n {
                let next = v + r.read_delta();
                if next > x {
                    break;
                }
                v = next;
                idx += 1;
            }
        }
        Some((v, idx))
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.samples.len()).flat_map(move |b| {
            let mut r = BitReader::new(&self.stream, self.offsets.get(b) as usize);
            let mut v = self.samples.get(b);
            let n = self.block_len(b);
            (0..n).map(move |k| {
                if k > 0 {
                    v += r.read_delta();
                }
                v
            })
        })
    }
}

impl Persist for BlockedDeltaSeq {
    fn write_to(&self, out: &mut ByteSink) {
        out.put_usize(self.len);
        out.put_usize(self.block);
        out.put_usize(self.stream_bits);
        self.samples.write_to(out);
        self.offsets.write_to(out);
        out.put_words(&self.stream);
    }

    fn read_from(src: &mut ByteSource<'_>) -> Result<Self> {
        let len = src.get_usize()?;
        let block = src.get_usize()?;
        let stream_bits = src.get_usize()?;
        let samples = IntVector::read_from(src)?;
        let offsets = IntVector::read_from(src)?;
        let stream = src.get_words()?;
        if block == 0
            || samples.len() != len.div_ceil(block)
            || offsets.len() != samples.len()
            || stream.len() != stream_bits.div_ceil(64)
            || offsets.iter().any(|o| o as usize > stream_bits)
        {
            return format_err("delta sequence header is inconsistent");
        }
        let seq = Self {
            len,
            block,
            samples,
            offsets,
            stream,
            stream_bits,
        };
        seq.validate_stream()?;
        Ok(seq)
    }
}

impl BlockedDeltaSeq {
    /// Walks every code once so that a damaged stream is rejected at load
    /// time instead of producing garbage during queries.
    fn validate_stream(&self) -> Result<()> {
        let mut expected = 0usize;
        for b in 0..self.samples.len() {
            if self.offsets.get(b) as usize != expected {
                return format_err("delta block offsets out of order");
            }
            let mut pos = expected;
            for _ in 1..self.block_len(b) {
                pos = skip_delta(&self.stream, pos, self.stream_bits)
                    .ok_or_else(|| crate::Error::Format("truncated delta code".into()))?;
            }
            expected = pos;
        }
        if expected != self.stream_bits {
            return format_err("delta stream length mismatch");
        }
        Ok(())
    }
}

fn skip_delta(words: &[u64], mut pos: usize, end: usize) -> Option<usize> {
    let unary = |pos: &mut usize| -> Option<u32> {
        let mut z = 0u32;
        loop {
            if *pos >= end || z > 64 {
                return None;
            }
            let bit = (words[*pos / 64] >> (*pos % 64)) & 1;
            *pos += 1;
            if bit == 1 {
                return Some(z);
            }
            z += 1;
        }
    };
    let n = unary(&mut pos)?;
    pos = pos.checked_add(n as usize)?;
    if pos > end || n > 7 {
        return None;
    }
    let mut r = BitReader::new(words, pos - n as usize);
    let l = ((1u64 << n) | r.read_bits(n)) - 1;
    if l > 63 {
        return None;
    }
    pos += l as usize;
    (pos <= end).then_some(pos)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let s = BlockedDeltaSeq::new(&[2, 5, 9, 14], 2);
        // value 9 has 1-based rank 3
        assert_eq!(s.predecessor(9), Some((9, 2)));
        assert_eq!(s.predecessor(1), None);
        assert_eq!(s.get(3), 14);
        assert_eq!(s.predecessor(13), Some((9, 2)));
        assert_eq!(s.predecessor(100), Some((14, 3)));
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![2, 5, 9, 14]);
    }

    #[test]
    fn block_sizes_round_trip() {
        let values: Vec<u64> = (0..300u64).map(|i| i * i + 3 * i).collect();
        for b in [1, 2, 7, 64, values.len()] {
            let s = BlockedDeltaSeq::new(&values, b);
            assert_eq!(s.iter().collect::<Vec<_>>(), values, "B={b}");
            for (i, &v) in values.iter().enumerate() {
                assert_eq!(s.get(i), v);
            }
            let back = BlockedDeltaSeq::from_bytes(&s.to_bytes()).unwrap();
            assert_eq!(back, s);
        }
    }

    #[test]
    fn empty_sequence() {
        let s = BlockedDeltaSeq::new(&[], 4);
        assert!(s.is_empty());
        assert_eq!(s.predecessor(10), None);
    }
}
