//! Counter-based pseudorandom stream.
//!
//! Word `j` of stream `(seed, index)` is
//!
//! ```text
//! key  = splitmix64(seed ^ splitmix64(index ^ 0xD1B54A32D192ED03))
//! word = splitmix64(key + (j + 1) * 0x9E3779B97F4A7C15)
//! ```
//!
//! with `splitmix64` the standard Stafford variant-13 finalizer over the
//! golden-ratio increment. All arithmetic wraps on 64 bits, so a stream
//! is the same on every platform and independent of which thread reads it.

use crate::window::{clear_tail, word_count, SetWindow, Words};

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(GOLDEN);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// A stream keyed by `(seed, index)`; reading it never touches shared state.
#[derive(Debug, Clone)]
pub struct CounterRng {
    key: u64,
    counter: u64,
}

impl CounterRng {
    pub fn new(seed: u64, index: u64) -> Self {
        CounterRng { key: splitmix64(seed ^ splitmix64(index ^ 0xD1B5_4A32_D192_ED03)), counter: 0 }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.counter = self.counter.wrapping_add(1);
        splitmix64(self.key.wrapping_add(self.counter.wrapping_mul(GOLDEN)))
    }

    /// Uniform in `[0, 1)` with 53 bits of resolution.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[0, bound)` by rejection; `bound` must be nonzero.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0);
        let zone = u64::MAX - u64::MAX % bound;
        loop {
            let v = self.next_u64();
            if v < zone {
                return v % bound;
            }
        }
    }

    /// A uniform subset of `[0, n]`: every element independently with
    /// probability 1/2.
    pub fn subset(&mut self, n: usize) -> SetWindow {
        let mut words = Words::new();
        for _ in 0..word_count(n + 1) {
            words.push(self.next_u64());
        }
        clear_tail(&mut words, n + 1);
        SetWindow::from_words(n, &words)
    }
}

/// The uniform random window for `(seed, index)`.
pub fn random_window(n: usize, seed: u64, index: u64) -> SetWindow {
    CounterRng::new(seed, index).subset(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitmix_reference_values() {
        // first outputs of the reference SplitMix64 generator seeded with 0
        assert_eq!(splitmix64(0), 0xE220_A839_7B1D_CDAF);
        assert_eq!(splitmix64(GOLDEN), 0x6E78_9E6A_A1B9_65F4);
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<u64> = { let mut r = CounterRng::new(7, 3); (0..4).map(|_| r.next_u64()).collect() };
        let b: Vec<u64> = { let mut r = CounterRng::new(7, 3); (0..4).map(|_| r.next_u64()).collect() };
        let c: Vec<u64> = { let mut r = CounterRng::new(7, 4); (0..4).map(|_| r.next_u64()).collect() };
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn subsets_are_roughly_balanced() {
        let w = random_window(99_999, 1, 0);
        let frac = w.cardinality() as f64 / 100_000.0;
        assert!((frac - 0.5).abs() < 0.01, "{frac}");
        assert_eq!(w.window(), 99_999);
    }

    #[test]
    fn below_stays_in_range() {
        let mut r = CounterRng::new(1, 1);
        for _ in 0..1000 {
            assert!(r.below(7) < 7);
        }
    }
}
