//! Deterministic counter-based random streams.
//!
//! Every stream is a pure function of a 64-bit seed and the labels used to
//! derive it, so draws for one anchor never depend on how many other anchors
//! exist or in which order they are visited. The simulator keys one stream
//! per `(seed, draw index, anchor)` triple; tests key streams off case
//! indices. Not cryptographic.

/// A splitmix-style generator: an immutable stream id plus a rolling counter.
#[derive(Debug, Clone)]
pub struct Stream {
    stream_id: u64,
    counter: u64,
}

const GAMMA: u64 = 0x9E3779B97F4A7C15;

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf29ce484222325u64;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

impl Stream {
    pub fn new(seed: u64) -> Self {
        let id = mix64(seed ^ 0xA0761D6478BD642F);
        Self {
            stream_id: id,
            counter: mix64(id ^ 0xE7037ED1A0B428DB),
        }
    }

    /// Derives an independent child stream without touching this one.
    pub fn derive(&self, label: u64) -> Self {
        let id = mix64(self.stream_id ^ mix64(label ^ 0xD1342543DE82EF95));
        Self {
            stream_id: id,
            counter: mix64(id ^ 0x8E9D5A8F6A09E667),
        }
    }

    /// Derives a child stream from a string label.
    pub fn derive_str(&self, label: &str) -> Self {
        self.derive(fnv1a64(label.as_bytes()))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.counter = self.counter.wrapping_add(GAMMA);
        mix64(self.stream_id ^ self.counter)
    }

    /// Uniform draw in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        const SCALE: f64 = (1u64 << 53) as f64;
        (self.next_u64() >> 11) as f64 / SCALE
    }

    /// Uniform draw in `(0, 1)`, safe to feed into logarithms.
    pub fn next_open_f64(&mut self) -> f64 {
        const SCALE: f64 = (1u64 << 53) as f64;
        ((self.next_u64() >> 11) as f64 + 0.5) / SCALE
    }

    /// Uniform draw in `[lo, hi)`.
    pub fn next_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Uniform integer draw in `[lo, hi)`.
    pub fn next_usize(&mut self, lo: usize, hi: usize) -> usize {
        debug_assert!(lo < hi);
        lo + (self.next_u64() % (hi - lo) as u64) as usize
    }

    /// Standard normal draw via Box-Muller.
    pub fn next_gaussian(&mut self) -> f64 {
        let u1 = self.next_open_f64();
        let u2 = self.next_open_f64();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    /// Bernoulli draw with success probability `p`.
    pub fn next_bool(&mut self, p: f64) -> bool {
        self.next_f64() < p
    }
}
