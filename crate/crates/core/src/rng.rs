//! Seeded random streams.
//!
//! Every random consumer gets its own ChaCha stream keyed by the master seed
//! and a stream id, so the draws of one group never depend on how many draws
//! another group made or on the order groups are processed in.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream used by the D^z seeding step of a build.
pub const SEEDING_STREAM: u64 = 0;

pub fn stream(seed: u64, stream_id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream_id);
    rng
}

/// Derives an independent child seed, for consumers that take a plain `u64`.
pub fn child_seed(seed: u64, index: u64) -> u64 {
    // splitmix64 finaliser over the pair
    let mut x = seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}


/// Index of the first cumulative entry strictly greater than `u`.
///
/// `cumulative` must be non-decreasing; zero-mass entries are never picked
/// unless `u` falls past the end, in which case the last positive entry wins.
pub(crate) fn pick_from_cdf<T: PartialOrd + Copy>(cumulative: &[T], u: T) -> usize {
    let idx = cumulative.partition_point(|&c| c <= u);
    if idx < cumulative.len() {
        return idx;
    }
    // u at or beyond the total through rounding: take the last entry with mass
    let last = cumulative[cumulative.len() - 1];
    cumulative.partition_point(|&c| c < last)
}
