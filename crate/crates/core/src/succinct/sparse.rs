use super::{DenseBitvector, IntVector, RankSelect};
use crate::error::{format_err, Result};
use crate::persist::{ByteSink, ByteSource, Persist};

/// Elias-Fano encoded set of positions over `[0, universe)`.
///
/// Each position is split into `low_width` low bits, stored verbatim, and
/// high bits, stored in unary in a dense bitvector with select support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseBitvector {
    universe: usize,
    count: usize,
    low_width: u32,
    low: IntVector,
    high: DenseBitvector,
}

impl SparseBitvector {
    /// Builds from strictly increasing positions below `universe`.
    pub fn from_positions(universe: usize, positions: &[usize]) -> Self {
        let count = positions.len();
        debug_assert!(positions.windows(2).all(|w| w[0] < w[1]));
        if let Some(&last) = positions.last() {
            assert!(last < universe, "position {last} outside universe {universe}");
        }
        let low_width = if count == 0 || universe <= count {
            0
        } else {
            (usize::BITS - 1 - (universe / count).leading_zeros()).min(63)
        };
        let lw = low_width.max(1);
        let lmask = (1u64 << low_width) - 1;
        let lows: Vec<u64> = positions.iter().map(|&p| p as u64 & lmask).collect();
        let low = IntVector::from_slice_width(&lows, lw);
        let high_len = count + (universe >> low_width) + 1;
        let high_pos: Vec<usize> = positions
            .iter()
            .enumerate()
            .map(|(i, &p)| (p >> low_width) + i)
            .collect();
        let high = DenseBitvector::from_positions(high_len, &high_pos);
        Self {
            universe,
            count,
            low_width,
            low,
            high,
        }
    }

    pub fn from_dense(bits: &DenseBitvector) -> Self {
        let ones = bits.ones();
        Self::from_positions(bits.len(), &ones)
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    /// Ones before `i < universe`, and the slot in `high` where the scan
    /// stopped: the first element of `i`'s bucket not below `i`, if any.
    #[inline]
    fn bucket_rank(&self, i: usize) -> (usize, usize) {
        let hi = i >> self.low_width;
        let lo = i & ((1usize << self.low_width) - 1);
        let (mut idx, mut pos) = if hi == 0 {
            (0, 0)
        } else {
            match self.high.select0(hi - 1) {
                Some(z) => (z + 1 - hi, z + 1),
                None => return (self.count, self.high.len()),
            }
        };
        while pos < self.high.len() && self.high.get(pos) {
            if self.low_at(idx) >= lo {
                break;
            }
            idx += 1;
            pos += 1;
        }
        (idx, pos)
    }

    /// Rank and position of the rightmost one at or before `i`.
    #[inline]
    pub fn rank_predecessor(&self, i: usize) -> Option<(usize, usize)> {
        let (idx, pos) = if i + 1 >= self.universe {
            (self.count, self.high.len())
        } else {
            self.bucket_rank(i + 1)
        };
        let k = idx.checked_sub(1)?;
        let slot = self.high.prev_one(pos).expect("sparse high part has the one");
        Some((k, ((slot - k) << self.low_width) | self.low_at(k)))
    }

    /// Rank and position of the leftmost one at or after `i`.
    #[inline]
    pub fn rank_successor(&self, i: usize) -> Option<(usize, usize)> {
        if i >= self.universe {
            return None;
        }
        let (idx, pos) = self.bucket_rank(i);
        if idx == self.count {
            return None;
        }
        let slot = self.high.next_one(pos).expect("sparse high part has the one");
        Some((idx, ((slot - idx) << self.low_width) | self.low_at(idx)))
    }

    #[inline]
    fn low_at(&self, i: usize) -> usize {
        if self.low_width == 0 {
            0
        } else {
            self.low.get(i) as usize
        }
    }
}

impl RankSelect for SparseBitvector {
    fn len(&self) -> usize {
        self.universe
    }

    fn count_ones(&self) -> usize {
        self.count
    }

    fn get(&self, i: usize) -> bool {
        assert!(i < self.universe);
        let (idx, pos) = self.bucket_rank(i);
        pos < self.high.len()
            && self.high.get(pos)
            && self.low_at(idx) == i & ((1usize << self.low_width) - 1)
    }

    fn predecessor1(&self, i: usize) -> Option<usize> {
        self.rank_predecessor(i.min(self.universe - 1)).map(|p| p.1)
    }

    fn successor1(&self, i: usize) -> Option<usize> {
        self.rank_successor(i).map(|p| p.1)
    }

    fn rank1(&self, i: usize) -> usize {
        assert!(i <= self.universe, "rank position {i} out of range {}", self.universe);
        if i == self.universe {
            return self.count;
        }
        self.bucket_rank(i).0
    }

    #[inline]
    fn select1(&self, k: usize) -> Option<usize> {
        if k >= self.count {
            return None;
        }
        let h = self.high.select1(k)? - k;
        Some((h << self.low_width) | self.low_at(k))
    }
}

impl Persist for SparseBitvector {
    fn write_to(&self, out: &mut ByteSink) {
        out.put_usize(self.universe);
        out.put_usize(self.count);
        out.put_u64(self.low_width as u64);
        self.low.write_to(out);
        self.high.write_to(out);
    }

    fn read_from(src: &mut ByteSource<'_>) -> Result<Self> {
        let universe = src.get_usize()?;
        let count = src.get_usize()?;
        let low_width = src.get_u64()?;
        if low_width > 63 {
            return format_err("sparse bitvector low width too large");
        }
        let low_width = low_width as u32;
        let low = IntVector::read_from(src)?;
        let high = DenseBitvector::read_from(src)?;
        if low.len() != count
            || high.count_ones() != count
            || high.len() != count + (universe >> low_width) + 1
        {
            return format_err("sparse bitvector parts are inconsistent");
        }
        let sb = Self {
            universe,
            count,
            low_width,
            low,
            high,
        };
        if count > 0 && sb.select1(count - 1).is_none_or(|p| p >= universe) {
            return format_err("sparse bitvector position outside universe");
        }
        Ok(sb)
    }
}
