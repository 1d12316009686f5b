//! Counter-based random numbers: every draw is a pure function of its key.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Key domains keep unrelated uses of the same seed independent.
#[derive(Clone, Copy, Debug)]
pub(crate) enum Domain {
    Disorder = 1,
    Replica = 2,
    Bank = 3,
    Trial = 4,
}

pub(crate) fn keyed_rng(domain: Domain, seed: u64, index: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&index.to_le_bytes());
    key[16..24].copy_from_slice(&(domain as u64).to_le_bytes());
    key[24..].copy_from_slice(b"doslab\0\0");
    ChaCha8Rng::from_seed(key)
}

/// Uniform draw in [0, 1) keyed by (seed, sample, stream).
pub(crate) fn keyed_uniform(seed: u64, sample: u64, stream: u64) -> f64 {
    let mut rng = keyed_rng(Domain::Disorder, seed, sample);
    rng.set_stream(stream);
    rng.gen::<f64>()
}

fn zigzag(v: i64) -> u64 {
    ((v << 1) ^ (v >> 63)) as u64
}

/// Injective encoding of a lattice block coordinate into a stream number.
pub(crate) fn block_stream(coords: &[i64]) -> u64 {
    match coords.len() {
        0 => 0,
        1 => zigzag(coords[0]),
        d => {
            let bits = 64 / d as u32;
            let mut out = 0u64;
            for &c in coords {
                let z = zigzag(c);
                assert!(z < (1u64 << bits), "block coordinate {c} too large for dimension {d}");
                out = (out << bits) | z;
            }
            out
        }
    }
}
