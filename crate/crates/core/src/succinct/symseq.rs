use super::IntVector;
use crate::error::{format_err, Result};
use crate::persist::{ByteSink, ByteSource, Persist};

/// Sequence over a small alphabet `[0, sigma)` with rank/select per symbol.
///
/// Symbols are stored packed; the per-symbol occurrence lists backing rank
/// and select are rebuilt on load.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolSequence {
    symbols: IntVector,
    sigma: usize,
    occurrences: Vec<Vec<u32>>,
}

impl SymbolSequence {
    pub fn new(symbols: &[u8], sigma: usize) -> Self {
        assert!((1..=256).contains(&sigma));
        let raw: Vec<u64> = symbols.iter().map(|&c| c as u64).collect();
        let packed = IntVector::from_slice_width(&raw, super::width_for(sigma as u64 - 1));
        Self::from_packed(packed, sigma)
    }

    fn from_packed(symbols: IntVector, sigma: usize) -> Self {
        let mut occurrences = vec![Vec::new(); sigma];
        for (i, c) in symbols.iter().enumerate() {
            occurrences[c as usize].push(i as u32);
        }
        Self {
            symbols,
            sigma,
            occurrences,
        }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn sigma(&self) -> usize {
        self.sigma
    }

    #[inline]
    pub fn get(&self, i: usize) -> u8 {
        self.symbols.get(i) as u8
    }

    /// Occurrences of `c` in `[0, i)`.
    #[inline]
    pub fn rank(&self, c: u8, i: usize) -> usize {
        match self.occurrences.get(c as usize) {
            Some(occ) => occ.partition_point(|&p| (p as usize) < i),
            None => 0,
        }
    }

    /// Position of the occurrence of `c` with 0-based rank `k`.
    #[inline]
    pub fn select(&self, c: u8, k: usize) -> Option<usize> {
        self.occurrences
            .get(c as usize)
            .and_then(|occ| occ.get(k))
            .map(|&p| p as usize)
    }

    pub fn count(&self, c: u8) -> usize {
        self.occurrences.get(c as usize).map_or(0, Vec::len)
    }
}

impl Persist for SymbolSequence {
    fn write_to(&self, out: &mut ByteSink) {
        out.put_usize(self.sigma);
        self.symbols.write_to(out);
    }

    fn read_from(src: &mut ByteSource<'_>) -> Result<Self> {
        let sigma = src.get_usize()?;
        if !(1..=256).contains(&sigma) {
            return format_err(format!("invalid alphabet size {sigma}"));
        }
        let symbols = IntVector::read_from(src)?;
        if symbols.iter().any(|c| c as usize >= sigma) {
            return format_err("symbol outside alphabet");
        }
        Ok(Self::from_packed(symbols, sigma))
    }
}
