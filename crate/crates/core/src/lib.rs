//! Run-length compressed text indexes: the r-index, the r-CSA, and their
//! subsampled forms, over a shared set of succinct structures.

pub mod error;
pub mod index;
pub mod persist;
pub mod rcsa;
pub mod rindex;
pub mod rlbwt;
pub mod section;
pub mod srcsa;
pub mod srindex;
pub mod succinct;
pub mod text;
pub mod toolkit;
pub mod trace;

pub use error::{Error, Result};
pub use index::{AnyIndex, BuildParams, IndexKind};
pub use srindex::Variant;

/// Inclusive, 0-based range of suffix-array rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SaRange {
    pub sp: usize,
    pub ep: usize,
}

impl SaRange {
    pub fn new(sp: usize, ep: usize) -> Self {
        debug_assert!(sp <= ep);
        Self { sp, ep }
    }

    pub fn len(&self) -> usize {
        self.ep - self.sp + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}
