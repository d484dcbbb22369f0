//! Counter-based deterministic randomness.
//!
//! Every draw is a pure function of `(seed, stream, counter)`, so an
//! algorithm can recompute any past draw instead of storing it. The mixing
//! function is the SplitMix64 finalizer; a stream key selects an independent
//! SplitMix64 sequence and the counter indexes into it.

use rand::RngCore;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
const STREAM_MUL: u64 = 0xD1B5_4A32_D192_ED03;

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stable 64-bit FNV-1a hash, used to derive stream keys from names.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xCBF2_9CE4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01B3);
    }
    h
}

/// A keyed random stream. Cheap to copy; holds no mutable state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CounterRng {
    seed: u64,
    stream: u64,
    key: u64,
}

impl CounterRng {
    pub fn new(seed: u64, stream: u64) -> Self {
        let key = mix64(mix64(seed.wrapping_add(GOLDEN_GAMMA)) ^ stream.wrapping_mul(STREAM_MUL));
        Self { seed, stream, key }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Derives an independent child stream. Children of distinct ids never
    /// share a key with each other or with the parent for practical purposes.
    pub fn substream(&self, id: u64) -> Self {
        Self::new(self.seed, mix64(self.stream ^ mix64(id.wrapping_add(GOLDEN_GAMMA))))
    }

    /// The `counter`-th 64-bit draw of this stream.
    #[inline]
    pub fn u64_at(&self, counter: u64) -> u64 {
        mix64(self.key.wrapping_add(counter.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
    }

    /// The `counter`-th draw mapped to `[0, 1)` with 53 bits of precision.
    #[inline]
    pub fn f64_at(&self, counter: u64) -> f64 {
        (self.u64_at(counter) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// A sequential cursor starting at `counter`, for use with `rand` APIs.
    pub fn cursor(&self, counter: u64) -> RngCursor {
        RngCursor { rng: *self, counter }
    }
}

/// Sequential view of a [`CounterRng`]. Draw `i` of the cursor is
/// `u64_at(start + i)`.
#[derive(Clone, Debug)]
pub struct RngCursor {
    rng: CounterRng,
    counter: u64,
}

impl RngCursor {
    pub fn position(&self) -> u64 {
        self.counter
    }
}

impl RngCore for RngCursor {
    fn next_u32(&mut self) -> u32 {
        (self.next_u64() >> 32) as u32
    }

    fn next_u64(&mut self) -> u64 {
        let v = self.rng.u64_at(self.counter);
        self.counter = self.counter.wrapping_add(1);
        v
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        for chunk in dst.chunks_mut(8) {
            let bytes = self.next_u64().to_le_bytes();
            chunk.copy_from_slice(&bytes[..chunk.len()]);
        }
    }
}
