#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use srx::text::{SuffixBundle, Text};
use srx::toolkit::corpus;

pub const SIGMAS: [usize; 3] = [2, 4, 26];

/// Text `i` of a seeded family: alphabet cycles over `SIGMAS`, even `i`
/// are uniform random and odd `i` are mutated repeats.
pub fn family_text(seed: u64, i: usize, max_len: usize) -> Vec<u8> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (i as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let alphabet = corpus::letters(SIGMAS[i % 3]);
    let len = rng.gen_range(1..=max_len);
    if i.is_multiple_of(2) {
        corpus::random_text(len, &alphabet, &mut rng)
    } else {
        corpus::repetitive_text(len, &alphabet, &mut rng)
    }
}

/// At least `count` patterns of lengths 1..=8: mostly substrings of `body`,
/// the rest random over the alphabet plus one foreign byte.
pub fn patterns(body: &[u8], sigma: usize, count: usize, seed: u64) -> Vec<Vec<u8>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alphabet = corpus::letters(sigma);
    let mut out = Vec::with_capacity(count + 1);
    for k in 0..count {
        let m = rng.gen_range(1..=8usize);
        if k % 3 != 2 && body.len() >= m {
            let st = rng.gen_range(0..=body.len() - m);
            out.push(body[st..st + m].to_vec());
        } else {
            out.push(corpus::random_text(m, &alphabet, &mut rng));
        }
    }
    let mut foreign = body[..body.len().min(3)].to_vec();
    foreign.push(b'#');
    out.push(foreign);
    out
}

pub struct Case {
    pub body: Vec<u8>,
    pub text: Text,
    pub bundle: SuffixBundle,
}

impl std::fmt::Debug for Case {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Case({:?})", String::from_utf8_lossy(&self.body))
    }
}

impl Case {
    pub fn new(body: Vec<u8>) -> Self {
        let text = Text::ingest(&body).unwrap();
        let bundle = SuffixBundle::build(&text);
        Self { body, text, bundle }
    }
}
