//! Deterministic randomness plumbing.
//!
//! Every stochastic routine in this crate draws from a ChaCha8 stream keyed
//! by a 64-bit seed. The 256-bit ChaCha key is expanded from the seed with
//! SplitMix64, pinned here byte for byte so streams depend only on this
//! module, never on library defaults. Parallel work never shares a stream:
//! item `i` of a batch gets [`substream`]`(seed, i)`, so results are
//! identical for any worker count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// SplitMix64 increment; doubles as the odd multiplier that spreads
/// substream ids across the seed space.
const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(GOLDEN_GAMMA);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// ChaCha8 generator for `seed`: the key is four consecutive SplitMix64
/// outputs in little-endian order.
pub fn stream_rng(seed: u64) -> ChaCha8Rng {
    let mut state = seed;
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}

/// Seed for substream `stream` of `seed`: `seed XOR stream * GOLDEN_GAMMA`.
/// Stream 0 is the parent seed itself.
pub fn substream(seed: u64, stream: u64) -> u64 {
    seed ^ stream.wrapping_mul(GOLDEN_GAMMA)
}

/// In-place Fisher-Yates shuffle, spelled out so the sampled object depends
/// only on the documented stream, not on external shuffle implementations.
pub fn shuffle<T, R: Rng>(items: &mut [T], rng: &mut R) {
    for i in (1..items.len()).rev() {
        let j = rng.random_range(0..=i);
        items.swap(i, j);
    }
}
