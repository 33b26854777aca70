//! Seed derivation for reproducible random streams.
//!
//! Every random draw in the crate comes from a ChaCha8 stream whose key is a
//! hash of a master seed, a trial coordinate and a stream tag. Results depend
//! only on those coordinates, never on scheduling order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Independent random stream families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    Dictionary = 0x4449_4354,
    Channel = 0x4348_414e,
    Noise = 0x4e4f_4953,
    Payload = 0x5041_594c,
}

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Order-sensitive hash of a sequence of words.
pub fn hash_words(words: &[u64]) -> u64 {
    words
        .iter()
        .fold(0x6a09_e667_f3bc_c908, |acc, &w| mix64(acc ^ mix64(w)))
}

/// Seed for one trial of one SNR point of a sweep.
pub fn trial_seed(master_seed: u64, snr_index: usize, trial: u64) -> u64 {
    hash_words(&[master_seed, snr_index as u64, trial])
}

/// Stream keyed on `(seed, trial, stream)`.
pub fn stream_rng(seed: u64, trial: u64, stream: Stream) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(hash_words(&[seed, trial, stream as u64]))
}
