//! Counter-style random streams: one independent ChaCha stream per
//! `(master_seed, stream)` pair, so results never depend on execution order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

pub fn stream_rng(master_seed: u64, stream: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(stream);
    rng
}

/// Sub-seed for nested stream families (e.g. trial `i` of a batch).
pub fn derive_seed(master_seed: u64, label: u64) -> u64 {
    use rand::RngCore;
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed ^ 0x9e37_79b9_7f4a_7c15);
    rng.set_stream(label);
    rng.next_u64()
}
