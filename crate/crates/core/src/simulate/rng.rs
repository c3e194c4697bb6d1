//! Counter-based random streams.
//!
//! Every draw is a pure function of `(seed, stream, counter)`: the seed and
//! stream index select a SplitMix64 starting state and the counter indexes
//! into its output sequence. Paths, samples and bootstrap replicates each get
//! their own stream, so results do not depend on how work is scheduled.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;
const STREAM_MUL: u64 = 0xD1B5_4A32_D192_ED03;

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive an independent seed for a named sub-experiment.
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    mix64(seed ^ mix64(tag.wrapping_add(GOLDEN)))
}

/// One random stream; `bits(k)` is the `k`-th output.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StreamKey {
    state: u64,
}

impl StreamKey {
    pub fn new(seed: u64, stream: u64) -> Self {
        let k = mix64(seed.wrapping_add(GOLDEN));
        Self {
            state: mix64(k ^ stream.wrapping_mul(STREAM_MUL)),
        }
    }

    #[inline]
    pub fn bits(&self, counter: u64) -> u64 {
        mix64(self.state.wrapping_add(counter.wrapping_add(1).wrapping_mul(GOLDEN)))
    }

    /// Uniform on the open interval `(0, 1)`.
    #[inline]
    pub fn uniform(&self, counter: u64) -> f64 {
        ((self.bits(counter) >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform index in `0..n`.
    #[inline]
    pub fn index(&self, counter: u64, n: usize) -> usize {
        ((self.uniform(counter) * n as f64) as usize).min(n - 1)
    }
}
