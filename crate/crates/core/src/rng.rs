//! Deterministic random streams.
//!
//! Every stochastic routine takes a 64-bit seed. Streams are ChaCha8 keyed by
//! `seed_from_u64(seed)` and selected with `set_stream`, so an index range can be
//! replayed on any platform and any thread count:
//!
//! * sampling splits the index range into chunks of [`CHUNK`] points; chunk `c`
//!   draws from stream `c` of the caller's seed;
//! * composite generators derive child seeds with [`derive_seed`] (a SplitMix64
//!   mix of the parent seed and a purpose tag) before applying the rule above.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::Scalar;

/// Number of samples drawn from one substream.
pub const CHUNK: usize = 4096;

/// Purpose tags for [`derive_seed`].
pub mod tag {
    pub const CENTERS: u64 = 1;
    pub const SAMPLING: u64 = 2;
    pub const FIGURES: u64 = 3;
}

/// Generator for substream `stream` of `seed`.
pub fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Child seed for the given purpose tag.
pub fn derive_seed(parent: u64, tag: u64) -> u64 {
    splitmix64(splitmix64(parent) ^ tag.wrapping_mul(0xD1B5_4A32_D192_ED03))
}

/// Uniform draw in `[0, 1)` converted to the target scalar.
#[inline]
pub fn unit<T: Scalar, R: rand::Rng + ?Sized>(rng: &mut R) -> T {
    T::lit(rng.random::<f64>())
}

/// Draw `n` items in parallel, chunk `c` using stream `c` of `seed`.
///
/// The result depends only on `(seed, n, draw)`, never on the thread pool size.
pub fn par_draw<T, F>(seed: u64, n: usize, draw: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng) -> T + Sync,
{
    let chunks = n.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .flat_map_iter(|c| {
            let mut rng = stream(seed, c as u64);
            let len = CHUNK.min(n - c * CHUNK);
            let draw = &draw;
            (0..len).map(move |_| draw(&mut rng)).collect::<Vec<_>>()
        })
        .collect()
}
