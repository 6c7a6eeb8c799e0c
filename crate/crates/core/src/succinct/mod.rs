//! Rank/select bitvectors, per-symbol rank/select over short sequences, and
//! block-sampled Elias-delta sequences.
//!
//! Positions are 0-based. `rank1(i)` counts the ones in `[0, i)`, which is
//! the same number as an inclusive rank over a 1-based prefix of length `i`.
//! `select1(k)` returns the position of the `(k+1)`-th one.

mod bits;
mod delta;
mod dense;
mod sparse;
mod symseq;

pub use bits::{width_for, BitReader, BitWriter, IntVector};
pub use delta::BlockedDeltaSeq;
pub use dense::DenseBitvector;
pub use sparse::SparseBitvector;
pub use symseq::SymbolSequence;

use crate::error::{Error, Result};

pub trait RankSelect {
    fn len(&self) -> usize;

    fn count_ones(&self) -> usize;

    fn get(&self, i: usize) -> bool;

    /// Ones in `[0, i)`. Panics when `i > len`.
    fn rank1(&self, i: usize) -> usize;

    /// Position of the one with 0-based rank `k`, if there are more than `k`.
    fn select1(&self, k: usize) -> Option<usize>;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn rank0(&self, i: usize) -> usize {
        i - self.rank1(i)
    }

    fn try_rank1(&self, i: usize) -> Result<usize> {
        if i > self.len() {
            return Err(Error::OutOfRange {
                what: "rank position",
                index: i,
                len: self.len(),
            });
        }
        Ok(self.rank1(i))
    }

    fn try_select1(&self, k: usize) -> Result<usize> {
        self.select1(k).ok_or(Error::OutOfRange {
            what: "select rank",
            index: k,
            len: self.count_ones(),
        })
    }

    /// Rightmost one at or before `i`.
    fn predecessor1(&self, i: usize) -> Option<usize> {
        let r = self.rank1(i + 1);
        if r == 0 {
            None
        } else {
            self.select1(r - 1)
        }
    }

    /// Leftmost one at or after `i`.
    fn successor1(&self, i: usize) -> Option<usize> {
        if i >= self.len() {
            return None;
        }
        self.select1(self.rank1(i))
    }

    fn ones(&self) -> Vec<usize> {
        (0..self.count_ones()).filter_map(|k| self.select1(k)).collect()
    }
}
