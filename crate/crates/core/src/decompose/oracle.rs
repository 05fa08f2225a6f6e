//! Brute-force ground truth: every truncated sumset over a small window.

use crate::error::{Error, Result};
use crate::window::{sumset_window, SetWindow};
use rayon::prelude::*;

/// Largest window the pair enumeration (`4^(n+1)` pairs) accepts.
pub const ORACLE_MAX_N: usize = 13;

/// A set of window masks over `[0, n]`, stored as a bitmap of `2^(n+1)` bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaskSet {
    n: usize,
    bits: Vec<u64>,
}

impl MaskSet {
    fn new(n: usize) -> Self {
        let masks = 1usize << (n + 1);
        MaskSet { n, bits: vec![0; masks.div_ceil(64)] }
    }

    pub fn window(&self) -> usize {
        self.n
    }

    pub fn contains(&self, mask: u64) -> bool {
        let m = mask as usize;
        m < (1usize << (self.n + 1)) && (self.bits[m / 64] >> (m % 64)) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Masks in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        (0..1u64 << (self.n + 1)).filter(move |&m| self.contains(m))
    }

    fn insert(&mut self, mask: u64) {
        let m = mask as usize;
        self.bits[m / 64] |= 1 << (m % 64);
    }

    fn union(mut self, other: &MaskSet) -> Self {
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a |= b;
        }
        self
    }
}

/// Enumerates all `Y, Z ⊆ [0, n]` with `min_size ≤ |Y|, |Z| ≤ size_cap` and
/// collects every `(Y + Z) ∩ [0, n]`.
pub fn oracle_decomposable_masks(n: usize, min_size: usize, size_cap: Option<usize>) -> Result<MaskSet> {
    if n > ORACLE_MAX_N {
        return Err(Error::Refused {
            what: "oracle",
            reason: format!("n = {n} exceeds {ORACLE_MAX_N}; 4^(n+1) pairs is not desk-scale"),
        });
    }
    let cap = size_cap.unwrap_or(usize::MAX);
    let factors: Vec<SetWindow> = (0u64..1 << (n + 1))
        .filter(|m| {
            let c = m.count_ones() as usize;
            c >= min_size && c <= cap
        })
        .map(|m| SetWindow::from_mask(n, m))
        .collect();

    let found = factors
        .par_iter()
        .fold(
            || MaskSet::new(n),
            |mut acc, y| {
                for z in &factors {
                    let s = sumset_window(y, z, n);
                    acc.insert(s.to_mask().expect("oracle windows fit in a mask"));
                }
                acc
            },
        )
        .reduce(|| MaskSet::new(n), |a, b| a.union(&b));
    Ok(found)
}
