use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Reproducible, splittable random stream.
///
/// Each stream is a ChaCha8 generator keyed by a 64-bit key. `split(id)` derives
/// a child key by mixing the parent key with `id`, so a child depends only on
/// the parent's seed path and the id, never on how many values the parent has
/// already drawn. Children with distinct ids are independent streams; this is
/// what lets search trials run in any order and still reproduce.
#[derive(Clone, Debug)]
pub struct SeededRng {
    key: u64,
    inner: ChaCha8Rng,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self::from_key(splitmix64(seed))
    }

    fn from_key(key: u64) -> Self {
        Self {
            key,
            inner: ChaCha8Rng::seed_from_u64(key),
        }
    }

    pub fn split(&self, stream: u64) -> SeededRng {
        Self::from_key(splitmix64(self.key ^ splitmix64(stream.wrapping_add(0x632B_E59B_D9B4_E019))))
    }

    /// Uniform draw in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        // 53 random mantissa bits.
        (self.inner.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

impl RngCore for SeededRng {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
