//! Seeded text generators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const DNA: &[u8] = b"ACGT";

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSpec {
    pub base_len: usize,
    pub copies: usize,
    /// Per-symbol mutation probability in each copy.
    pub mutation: f64,
    pub alphabet: Vec<u8>,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        Self {
            base_len: 100_000,
            copies: 10,
            mutation: 0.001,
            alphabet: DNA.to_vec(),
            seed: 42,
        }
    }
}

/// Uniform random bytes over `alphabet`.
pub fn random_text(len: usize, alphabet: &[u8], rng: &mut impl Rng) -> Vec<u8> {
    (0..len).map(|_| alphabet[rng.gen_range(0..alphabet.len())]).collect()
}

/// A random base repeated `copies` times, each copied symbol replaced by a
/// different random symbol with probability `mutation`.
pub fn synthetic(spec: &SyntheticSpec) -> Vec<u8> {
    assert!(!spec.alphabet.is_empty(), "alphabet must be nonempty");
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let base = random_text(spec.base_len, &spec.alphabet, &mut rng);
    let sigma = spec.alphabet.len();
    let mut out = Vec::with_capacity(spec.base_len * spec.copies);
    for _ in 0..spec.copies {
        for &c in &base {
            if sigma > 1 && rng.gen_bool(spec.mutation) {
                let mut d = spec.alphabet[rng.gen_range(0..sigma - 1)];
                if d == c {
                    d = spec.alphabet[sigma - 1];
                }
                out.push(d);
            } else {
                out.push(c);
            }
        }
    }
    out
}

/// Texts with long repeats: a short random motif copied with light
/// mutations until `len` symbols.
pub fn repetitive_text(len: usize, alphabet: &[u8], rng: &mut impl Rng) -> Vec<u8> {
    let motif_len = rng.gen_range(1..=len.clamp(1, 64));
    let motif = random_text(motif_len, alphabet, rng);
    let p = [0.0, 0.01, 0.05][rng.gen_range(0..3)];
    let mut out = Vec::with_capacity(len);
    while out.len() < len {
        for &c in &motif {
            if out.len() == len {
                break;
            }
            if rng.gen_bool(p) {
                out.push(alphabet[rng.gen_range(0..alphabet.len())]);
            } else {
                out.push(c);
            }
        }
    }
    out
}

/// The first `sigma` lowercase letters.
pub fn letters(sigma: usize) -> Vec<u8> {
    assert!((1..=26).contains(&sigma));
    (b'a'..b'a' + sigma as u8).collect()
}
