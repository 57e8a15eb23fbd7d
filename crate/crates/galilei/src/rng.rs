//! Deterministic pseudo-random numbers for reproducible test data.
//!
//! A fixed 64-bit linear congruential generator (Knuth's MMIX multiplier)
//! with a splitmix-style stream derivation, so every consumer of stream `k`
//! sees exactly the same draws on every platform.

/// 64-bit linear congruential generator.
///
/// State update: `s ← s·6364136223846793005 + 1442695040888963407 (mod 2⁶⁴)`.
/// Each `f64` output takes the top 53 bits of the updated state, giving a
/// uniform value in `[0, 1)`.
#[derive(Clone, Debug)]
pub struct Lcg {
    state: u64,
}

impl Lcg {
    pub const MULTIPLIER: u64 = 6364136223846793005;
    pub const INCREMENT: u64 = 1442695040888963407;

    pub fn new(seed: u64) -> Self {
        Lcg { state: seed }
    }

    /// Seed for an indexed stream (path `k`, element `k`, …): golden-ratio
    /// multiple of `k + 1`, wrapping mod 2⁶⁴.
    pub fn stream(k: u64) -> Self {
        Lcg::new(k.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self
            .state
            .wrapping_mul(Self::MULTIPLIER)
            .wrapping_add(Self::INCREMENT);
        self.state
    }

    /// Uniform in `[0, 1)` with 53-bit resolution.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform in `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }
}

/// Coefficients of a random smooth cubic path `r(t) = c0 + c1·s + c2·s² + c3·s³`
/// with `s = t − 1`, plus a boost velocity and a mass, all drawn from stream `k`.
///
/// Draw order and ranges are fixed: `c0 ∈ [0.8, 1.2)`, `c1 ∈ [−0.3, 0.3)`,
/// `c2 ∈ [−0.12, 0.12)`, `c3 ∈ [−0.04, 0.04)`, `u ∈ [−0.3, 0.3)`,
/// `m ∈ [0.5, 1.5)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PathDraw {
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub boost: f64,
    pub mass: f64,
}

impl PathDraw {
    pub fn sample(k: u64) -> Self {
        let mut rng = Lcg::stream(k);
        PathDraw {
            c0: rng.uniform(0.8, 1.2),
            c1: rng.uniform(-0.3, 0.3),
            c2: rng.uniform(-0.12, 0.12),
            c3: rng.uniform(-0.04, 0.04),
            boost: rng.uniform(-0.3, 0.3),
            mass: rng.uniform(0.5, 1.5),
        }
    }

    /// Position at time `t`.
    pub fn position(&self, t: f64) -> f64 {
        let s = t - 1.0;
        self.c0 + self.c1 * s + self.c2 * s * s + self.c3 * s * s * s
    }
}
