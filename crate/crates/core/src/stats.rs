//! Counting-function diagnostics for windows: the normalized counts behind
//! the `Z_α` families, and block (pattern) frequencies.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::window::{count_range, SetWindow};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CountingSample {
    pub n: usize,
    pub count: usize,
    /// `count / n^α`; at `n = 0` the denominator is taken as 1.
    pub ratio: f64,
}

/// `|S(n)| / n^α` sampled on a checkpoint grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountingProfile {
    pub alpha: f64,
    pub samples: Vec<CountingSample>,
}

impl CountingProfile {
    pub fn last_ratio(&self) -> Option<f64> {
        self.samples.last().map(|s| s.ratio)
    }

    /// Whether the last ratio is below `tolerance`. A finite window can only
    /// hint at `|S(n)| = o(n^α)`; this never decides membership in `Z_α`.
    pub fn looks_vanishing(&self, tolerance: f64) -> bool {
        self.last_ratio().is_some_and(|r| r < tolerance)
    }
}

pub fn z_alpha_profile(s: &SetWindow, alpha: f64, checkpoints: &[usize]) -> Result<CountingProfile> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidArgument(format!("alpha must lie in (0, 1], got {alpha}")));
    }
    let mut grid = checkpoints.to_vec();
    grid.sort_unstable();
    grid.dedup();
    if let Some(&bad) = grid.iter().find(|&&n| n > s.window()) {
        return Err(Error::OutOfWindow { element: bad, window: s.window() });
    }
    let samples = grid
        .into_iter()
        .map(|n| {
            let count = s.count_upto(n);
            let ratio = count as f64 / (n.max(1) as f64).powf(alpha);
            CountingSample { n, count, ratio }
        })
        .collect();
    Ok(CountingProfile { alpha, samples })
}

/// `|{j ∈ [0, n] : A ∩ (I + j) = F + j}|` with `I = [0, pattern_len − 1]`.
///
/// Requires `n + pattern_len − 1 ≤` the window of `A`, so every shifted
/// block lies inside the window.
pub fn pattern_frequency(a: &SetWindow, pattern_len: usize, pattern: &SetWindow, n: usize) -> Result<u64> {
    if pattern_len == 0 {
        return Err(Error::InvalidArgument("pattern length must be at least 1".into()));
    }
    if let Some(m) = pattern.max() {
        if m >= pattern_len {
            return Err(Error::OutOfWindow { element: m, window: pattern_len - 1 });
        }
    }
    if n + pattern_len - 1 > a.window() {
        return Err(Error::InvalidArgument(format!(
            "blocks up to {} exceed the window [0, {}]",
            n + pattern_len - 1,
            a.window()
        )));
    }

    let words = a.words();
    if pattern_len <= 64 {
        let want = pattern.to_mask().unwrap_or(0) & low_mask(pattern_len);
        let hits = (0..=n).filter(|&j| extract(words, j, pattern_len) == want).count();
        return Ok(hits as u64);
    }
    // long blocks: compare member counts, then members
    let size = pattern.cardinality();
    let hits = (0..=n)
        .filter(|&j| {
            count_range(words, j, j + pattern_len - 1) == size
                && pattern.members().all(|f| a.contains(f + j))
        })
        .count();
    Ok(hits as u64)
}

#[inline]
fn low_mask(len: usize) -> u64 {
    if len >= 64 { !0 } else { (1u64 << len) - 1 }
}

/// Bits `[j, j + len)` of the vector as the low bits of a word (`len ≤ 64`).
#[inline]
fn extract(words: &[u64], j: usize, len: usize) -> u64 {
    let (w, b) = (j / 64, j % 64);
    let lo = words.get(w).copied().unwrap_or(0) >> b;
    let hi = if b != 0 { words.get(w + 1).copied().unwrap_or(0) << (64 - b) } else { 0 };
    (lo | hi) & low_mask(len)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::montecarlo::rng::random_window;

    #[test]
    fn squares_do_not_vanish_at_one_half() {
        let n = 10_000;
        let squares = SetWindow::from_members(n, (0..=100).map(|i| i * i)).unwrap();
        let grid = [100, 1000, 5000, 10_000];
        let p = z_alpha_profile(&squares, 0.5, &grid).unwrap();
        for s in &p.samples {
            // direct count: floor(sqrt n) + 1
            let expect = (s.n as f64).sqrt().floor() as usize + 1;
            assert_eq!(s.count, expect);
        }
        let last = p.last_ratio().unwrap();
        assert!((last - 1.01).abs() < 1e-9, "{last}");
        assert!(!p.looks_vanishing(0.5));
    }

    #[test]
    fn empty_and_full_profiles() {
        let p = z_alpha_profile(&SetWindow::empty(500), 0.3, &[1, 10, 500]).unwrap();
        assert!(p.samples.iter().all(|s| s.ratio == 0.0));
        assert!(p.looks_vanishing(1e-9));

        let p = z_alpha_profile(&SetWindow::full(1000), 1.0, &[10, 100, 1000]).unwrap();
        let r: Vec<f64> = p.samples.iter().map(|s| s.ratio).collect();
        assert_eq!(r, vec![1.1, 1.01, 1.001]);
    }

    #[test]
    fn profile_counts_are_nondecreasing() {
        let a = random_window(2000, 5, 0);
        let grid: Vec<usize> = (0..=2000).step_by(37).collect();
        let p = z_alpha_profile(&a, 0.7, &grid).unwrap();
        assert!(p.samples.windows(2).all(|w| w[0].count <= w[1].count));
        assert!(p.samples.iter().all(|s| s.ratio >= 0.0));
    }

    #[test]
    fn alpha_out_of_range() {
        let a = SetWindow::full(3);
        assert!(z_alpha_profile(&a, 0.0, &[1]).is_err());
        assert!(z_alpha_profile(&a, 1.5, &[1]).is_err());
        assert!(z_alpha_profile(&a, 0.5, &[4]).is_err());
    }

    #[test]
    fn trivial_pattern_counts() {
        let n = 50;
        let full = SetWindow::full(n + 1);
        let f = SetWindow::from_members(1, [0, 1]).unwrap();
        assert_eq!(pattern_frequency(&full, 2, &f, n).unwrap(), n as u64 + 1);

        let empty = SetWindow::empty(n);
        assert_eq!(pattern_frequency(&empty, 1, &SetWindow::empty(0), n).unwrap(), n as u64 + 1);
    }

    #[test]
    fn pattern_outside_block_is_rejected() {
        let a = SetWindow::full(10);
        let f = SetWindow::from_members(5, [4]).unwrap();
        assert!(pattern_frequency(&a, 3, &f, 5).is_err());
        assert!(pattern_frequency(&a, 3, &SetWindow::empty(2), 9).is_err());
    }

    #[test]
    fn counts_partition_the_shifts() {
        let a = random_window(3000, 11, 0);
        for len in [1usize, 3, 5] {
            let n = 3000 - len + 1;
            let total: u64 = (0u64..1 << len)
                .map(|m| pattern_frequency(&a, len, &SetWindow::from_mask(len - 1, m), n).unwrap())
                .sum();
            assert_eq!(total, n as u64 + 1);
        }
    }

    #[test]
    fn long_blocks_agree_with_direct_comparison() {
        let a = random_window(700, 2, 0);
        let f = a.restrict(69).translate(0, 69);
        // block starting at 0 matches itself
        let hits = pattern_frequency(&a, 70, &f, 600).unwrap();
        let direct = (0..=600)
            .filter(|&j| (0..70).all(|i| a.contains(i + j) == f.contains(i)))
            .count() as u64;
        assert_eq!(hits, direct);
        assert!(hits >= 1);
    }

    #[test]
    fn seeded_frequency_is_close_to_one_eighth() {
        let a = random_window(100_000, 1, 0);
        let n = 100_000 - 2;
        let f = SetWindow::from_members(2, [0, 2]).unwrap();
        let c = pattern_frequency(&a, 3, &f, n).unwrap();
        assert!((c as f64 / (n + 1) as f64 - 0.125).abs() < 0.01);
    }
}
