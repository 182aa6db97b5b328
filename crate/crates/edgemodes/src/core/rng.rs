use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Seed plus stream id for a counter-based ChaCha generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngSpec {
    pub seed: u64,
    pub stream: u64,
}

impl RngSpec {
    pub fn new(seed: u64) -> Self {
        RngSpec { seed, stream: 0 }
    }

    /// Independent sub-stream `k` (e.g. one per disorder instance).
    pub fn child(&self, k: u64) -> Self {
        // high word: parent stream, low word: child index
        RngSpec { seed: self.seed, stream: (self.stream << 32) ^ (k & 0xffff_ffff) ^ (1 << 31) }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::seed_from_u64(self.seed);
        r.set_stream(self.stream);
        r
    }
}

/// i.i.d. uniform fields on [-delta, delta].
pub fn sample_disorder(delta: f64, l: usize, spec: RngSpec) -> Vec<f64> {
    if delta == 0.0 {
        return vec![0.0; l];
    }
    let mut rng = spec.rng();
    (0..l).map(|_| rng.gen_range(-delta..=delta)).collect()
}
