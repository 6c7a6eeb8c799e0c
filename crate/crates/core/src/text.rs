//! Text ingestion, suffix-structure construction and the naive search oracle.
//!
//! Internally everything is 0-based: the text occupies `[0, n)` with the
//! sentinel (symbol 0) at `n - 1`. Public occurrence positions are 1-based.

use crate::error::{format_err, Error, Result};
use crate::persist::{ByteSink, ByteSource, Persist};

/// Largest supported text length, sentinel included.
pub const MAX_TEXT_LEN: usize = u32::MAX as usize;

/// Mapping between input bytes and compact symbols `1..sigma`; symbol 0 is
/// the sentinel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    bytes: Vec<u8>,
    to_symbol: [u8; 256],
}

impl Alphabet {
    pub fn from_bytes_used(bytes: &[u8]) -> Self {
        let mut seen = [false; 256];
        for &b in bytes {
            seen[b as usize] = true;
        }
        let used: Vec<u8> = (0..=255u8).filter(|&b| seen[b as usize]).collect();
        Self::from_sorted(used)
    }

    fn from_sorted(bytes: Vec<u8>) -> Self {
        let mut to_symbol = [0u8; 256];
        for (i, &b) in bytes.iter().enumerate() {
            to_symbol[b as usize] = i as u8 + 1;
        }
        Self { bytes, to_symbol }
    }

    /// Alphabet size including the sentinel.
    pub fn sigma(&self) -> usize {
        self.bytes.len() + 1
    }

    pub fn symbol(&self, byte: u8) -> Option<u8> {
        match self.to_symbol[byte as usize] {
            0 => None,
            s => Some(s),
        }
    }

    pub fn byte(&self, symbol: u8) -> Option<u8> {
        if symbol == 0 {
            None
        } else {
            self.bytes.get(symbol as usize - 1).copied()
        }
    }

    /// Maps a byte pattern to symbols, or `None` if some byte never occurs
    /// in the text.
    pub fn encode(&self, pattern: &[u8]) -> Option<Vec<u8>> {
        pattern.iter().map(|&b| self.symbol(b)).collect()
    }
}

impl Persist for Alphabet {
    fn write_to(&self, out: &mut ByteSink) {
        out.put_bytes(&self.bytes);
    }

    fn read_from(src: &mut ByteSource<'_>) -> Result<Self> {
        let bytes = src.get_bytes()?;
        if bytes.windows(2).any(|w| w[0] >= w[1]) || bytes.contains(&0) || bytes.is_empty() {
            return format_err("alphabet table is not a sorted set of non-NUL bytes");
        }
        Ok(Self::from_sorted(bytes))
    }
}

/// A sentinel-terminated text over compact symbols.
#[derive(Debug, Clone)]
pub struct Text {
    symbols: Vec<u8>,
    alphabet: Alphabet,
}

impl Text {
    /// Remaps raw bytes to a compact alphabet and appends the sentinel.
    /// A single trailing 0x00 is accepted as an explicit terminator.
    pub fn ingest(bytes: &[u8]) -> Result<Self> {
        let body = match bytes.split_last() {
            Some((0, rest)) => rest,
            _ => bytes,
        };
        if body.is_empty() {
            return Err(Error::EmptyInput);
        }
        if let Some(pos) = body.iter().position(|&b| b == 0) {
            return Err(Error::InteriorNul(pos));
        }
        if body.len() + 1 > MAX_TEXT_LEN {
            return Err(Error::TextTooLong {
                len: body.len() + 1,
                limit: MAX_TEXT_LEN,
            });
        }
        let alphabet = Alphabet::from_bytes_used(body);
        let mut symbols: Vec<u8> = body.iter().map(|&b| alphabet.to_symbol[b as usize]).collect();
        symbols.push(0);
        Ok(Self { symbols, alphabet })
    }

    /// Length including the sentinel.
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn sigma(&self) -> usize {
        self.alphabet.sigma()
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// The original bytes, without the sentinel.
    pub fn original(&self) -> Vec<u8> {
        self.symbols[..self.len() - 1]
            .iter()
            .map(|&s| self.alphabet.bytes[s as usize - 1])
            .collect()
    }
}

/// Strips FASTA header lines (starting with `>`) and line breaks,
/// concatenating the sequence lines.
pub fn flatten_fasta(bytes: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(bytes.len());
    for line in bytes.split(|&b| b == b'\n') {
        if line.first() == Some(&b'>') {
            continue;
        }
        out.extend(line.iter().filter(|&&b| b != b'\r' && b != b' ' && b != b'\t'));
    }
    out
}

/// Suffix array, its inverse, the BWT and Psi of a text. Construction and
/// verification only; no index keeps these.
#[derive(Debug, Clone)]
pub struct SuffixBundle {
    pub sa: Vec<usize>,
    pub isa: Vec<usize>,
    pub bwt: Vec<u8>,
    pub psi: Vec<usize>,
}

impl SuffixBundle {
    pub fn build(text: &Text) -> Self {
        Self::from_symbols(text.symbols(), text.sigma())
    }

    /// `symbols` must end with a unique smallest symbol.
    pub fn from_symbols(symbols: &[u8], sigma: usize) -> Self {
        let n = symbols.len();
        let sa = suffix_array(symbols, sigma);
        let mut isa = vec![0; n];
        for (i, &p) in sa.iter().enumerate() {
            isa[p] = i;
        }
        let bwt = sa.iter().map(|&p| symbols[(p + n - 1) % n]).collect();
        let psi = sa.iter().map(|&p| isa[(p + 1) % n]).collect();
        Self { sa, isa, bwt, psi }
    }

    pub fn len(&self) -> usize {
        self.sa.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sa.is_empty()
    }

    /// LF(i): the row of suffix `SA[i] - 1` (cyclically).
    pub fn lf(&self, i: usize) -> usize {
        let n = self.len();
        self.isa[(self.sa[i] + n - 1) % n]
    }

    /// Number of maximal equal-letter runs in the BWT.
    pub fn bwt_runs(&self) -> usize {
        1 + self.bwt.windows(2).filter(|w| w[0] != w[1]).count()
    }
}

/// Prefix-doubling suffix sorting over cyclic rotations with counting sorts,
/// O(n log n). Rotation order equals suffix order because the last symbol
/// is a unique minimum.
pub fn suffix_array(symbols: &[u8], sigma: usize) -> Vec<usize> {
    let n = symbols.len();
    if n == 0 {
        return Vec::new();
    }
    let mut sa: Vec<usize> = Vec::with_capacity(n);
    let mut class: Vec<usize> = symbols.iter().map(|&c| c as usize).collect();
    {
        let mut cnt = vec![0usize; sigma.max(1) + 1];
        for &c in symbols {
            cnt[c as usize + 1] += 1;
        }
        for i in 1..cnt.len() {
            cnt[i] += cnt[i - 1];
        }
        sa.resize(n, 0);
        for (i, &c) in symbols.iter().enumerate() {
            sa[cnt[c as usize]] = i;
            cnt[c as usize] += 1;
        }
    }
    let mut classes = {
        let mut k = 0;
        let mut prev = None;
        for &p in &sa {
            if prev != Some(symbols[p]) {
                k += 1;
                prev = Some(symbols[p]);
            }
            class[p] = k - 1;
        }
        k
    };
    let mut shifted = vec![0usize; n];
    let mut next_class = vec![0usize; n];
    let mut cnt = vec![0usize; n + 1];
    let mut h = 1usize;
    while classes < n {
        // Order by second half is the current order shifted left by h.
        for (i, &p) in sa.iter().enumerate() {
            shifted[i] = (p + n - h % n) % n;
        }
        cnt[..=classes].iter_mut().for_each(|c| *c = 0);
        for &p in &shifted {
            cnt[class[p] + 1] += 1;
        }
        for i in 1..=classes {
            cnt[i] += cnt[i - 1];
        }
        for &p in &shifted {
            sa[cnt[class[p]]] = p;
            cnt[class[p]] += 1;
        }
        next_class[sa[0]] = 0;
        let mut k = 1;
        for i in 1..n {
            let (a, b) = (sa[i - 1], sa[i]);
            if class[a] != class[b] || class[(a + h) % n] != class[(b + h) % n] {
                k += 1;
            }
            next_class[b] = k - 1;
        }
        std::mem::swap(&mut class, &mut next_class);
        classes = k;
        h *= 2;
    }
    sa
}

/// Naive scan: number of occurrences and sorted 1-based start positions.
/// Bytes that never occur in the text yield no occurrences.
pub fn oracle_search(text: &Text, pattern: &[u8]) -> (usize, Vec<usize>) {
    let Some(pat) = text.alphabet().encode(pattern) else {
        return (0, Vec::new());
    };
    if pat.is_empty() {
        return (0, Vec::new());
    }
    let body = &text.symbols()[..text.len() - 1];
    let positions: Vec<usize> = body
        .windows(pat.len())
        .enumerate()
        .filter(|(_, w)| *w == pat.as_slice())
        .map(|(i, _)| i + 1)
        .collect();
    (positions.len(), positions)
}
