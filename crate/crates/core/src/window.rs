//! Finite integer-set windows `A ∩ [0, n]` stored as membership bit-vectors.
//!
//! Bit `i` of the vector is the integer `i`. Windows are inclusive, so a
//! window of length `n` carries `n + 1` bits, and nothing above index `n` is
//! ever set.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use smallvec::SmallVec;

use crate::error::{Error, Result};

pub(crate) type Words = SmallVec<[u64; 2]>;

/// Number of 64-bit words needed for `bits` bits.
#[inline]
pub(crate) fn word_count(bits: usize) -> usize {
    bits.div_ceil(64)
}

/// ORs `src << shift` into `dst`, dropping everything at or above `nbits`.
pub(crate) fn or_shifted(dst: &mut [u64], src: &[u64], shift: usize, nbits: usize) {
    if shift >= nbits {
        return;
    }
    let word_shift = shift / 64;
    let bit_shift = shift % 64;
    let limit = word_count(nbits).min(dst.len());
    for i in word_shift..limit {
        let j = i - word_shift;
        let mut w = if j < src.len() { src[j] << bit_shift } else { 0 };
        if bit_shift != 0 && j >= 1 && j - 1 < src.len() {
            w |= src[j - 1] >> (64 - bit_shift);
        }
        dst[i] |= w;
    }
    clear_tail(dst, nbits);
}

/// Zeroes every bit at index `>= nbits`.
#[inline]
pub(crate) fn clear_tail(words: &mut [u64], nbits: usize) {
    let full = nbits / 64;
    let rem = nbits % 64;
    if full < words.len() {
        if rem != 0 {
            words[full] &= (1u64 << rem) - 1;
            for w in &mut words[full + 1..] {
                *w = 0;
            }
        } else {
            for w in &mut words[full..] {
                *w = 0;
            }
        }
    }
}

/// Population count of bits in the inclusive index range `[lo, hi]`.
pub(crate) fn count_range(words: &[u64], lo: usize, hi: usize) -> usize {
    if lo > hi {
        return 0;
    }
    let (lw, hw) = (lo / 64, hi / 64);
    if lw >= words.len() {
        return 0;
    }
    let lo_mask = !0u64 << (lo % 64);
    let hi_mask = if hi % 64 == 63 { !0u64 } else { (1u64 << (hi % 64 + 1)) - 1 };
    if lw == hw {
        return (words[lw] & lo_mask & hi_mask).count_ones() as usize;
    }
    let mut total = (words[lw] & lo_mask).count_ones() as usize;
    let end = hw.min(words.len());
    for w in &words[lw + 1..end] {
        total += w.count_ones() as usize;
    }
    if hw < words.len() {
        total += (words[hw] & hi_mask).count_ones() as usize;
    }
    total
}

#[inline]
pub(crate) fn test_bit(words: &[u64], i: usize) -> bool {
    words.get(i / 64).is_some_and(|w| (w >> (i % 64)) & 1 == 1)
}

#[inline]
pub(crate) fn set_bit(words: &mut [u64], i: usize) {
    words[i / 64] |= 1u64 << (i % 64);
}

#[inline]
pub(crate) fn clear_bit(words: &mut [u64], i: usize) {
    words[i / 64] &= !(1u64 << (i % 64));
}

/// A finite window `A ∩ [0, n]`.
///
/// Values are immutable once built; every operation returns a new window.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SetWindow {
    n: usize,
    words: Words,
}

impl SetWindow {
    /// The empty set over `[0, n]`.
    pub fn empty(n: usize) -> Self {
        let mut words = Words::new();
        words.resize(word_count(n + 1), 0);
        SetWindow { n, words }
    }

    /// The full interval `[0, n]`.
    pub fn full(n: usize) -> Self {
        let mut w = Self::empty(n);
        for x in w.words.iter_mut() {
            *x = !0;
        }
        clear_tail(&mut w.words, n + 1);
        w
    }

    /// Builds a window from its members. Fails if any member exceeds `n`.
    pub fn from_members<I: IntoIterator<Item = usize>>(n: usize, members: I) -> Result<Self> {
        let mut w = Self::empty(n);
        for m in members {
            if m > n {
                return Err(Error::OutOfWindow { element: m, window: n });
            }
            set_bit(&mut w.words, m);
        }
        Ok(w)
    }

    /// Builds a window from the low `n + 1` bits of `mask` (`n < 64`).
    pub fn from_mask(n: usize, mask: u64) -> Self {
        assert!(n < 64, "mask windows hold at most 64 bits");
        let mut w = Self::empty(n);
        w.words[0] = mask;
        clear_tail(&mut w.words, n + 1);
        w
    }

    pub(crate) fn from_words(n: usize, src: &[u64]) -> Self {
        let mut w = Self::empty(n);
        let k = w.words.len().min(src.len());
        w.words[..k].copy_from_slice(&src[..k]);
        clear_tail(&mut w.words, n + 1);
        w
    }

    /// The window as a bit mask, if it fits in 64 bits.
    pub fn to_mask(&self) -> Option<u64> {
        (self.n < 64).then(|| self.words[0])
    }

    /// The right end `n` of the window `[0, n]`.
    pub fn window(&self) -> usize {
        self.n
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn contains(&self, i: usize) -> bool {
        i <= self.n && test_bit(&self.words, i)
    }

    /// `|A ∩ [0, n]|`.
    pub fn cardinality(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// `|A ∩ [0, m]|` for `m` inside the window (clamped otherwise).
    pub fn count_upto(&self, m: usize) -> usize {
        count_range(&self.words, 0, m.min(self.n))
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn min(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn max(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + 63 - w.leading_zeros() as usize)
    }

    /// Members in increasing order.
    pub fn members(&self) -> Members<'_> {
        Members { words: &self.words, idx: 0, cur: self.words.first().copied().unwrap_or(0) }
    }

    /// The prefix `A ∩ [0, m]` as a window of length `m`.
    ///
    /// When `m` exceeds the current window the extra positions are absent.
    pub fn restrict(&self, m: usize) -> SetWindow {
        SetWindow::from_words(m, &self.words)
    }

    /// Returns a copy with `i` toggled.
    pub fn toggled(&self, i: usize) -> Result<SetWindow> {
        if i > self.n {
            return Err(Error::OutOfWindow { element: i, window: self.n });
        }
        let mut w = self.clone();
        w.words[i / 64] ^= 1u64 << (i % 64);
        Ok(w)
    }

    /// `(A + d) ∩ [0, m]`.
    pub fn translate(&self, d: usize, m: usize) -> SetWindow {
        let mut out = SetWindow::empty(m);
        or_shifted(&mut out.words, &self.words, d, m + 1);
        out
    }

    /// Binary form: character `i` is `1` iff `i` is a member.
    pub fn to_bit_string(&self) -> String {
        (0..=self.n).map(|i| if self.contains(i) { '1' } else { '0' }).collect()
    }
}

impl fmt::Debug for SetWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SetWindow[0,{}]{{{}}}", self.n, self)
    }
}

/// Comma list of members, e.g. `0,2,5`.
impl fmt::Display for SetWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for m in self.members() {
            if !first {
                f.write_str(",")?;
            }
            first = false;
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

pub struct Members<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl Iterator for Members<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let tz = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.idx * 64 + tz);
            }
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.idx];
        }
    }
}

#[derive(Serialize, Deserialize)]
struct WindowRepr {
    window: usize,
    members: Vec<usize>,
}

impl Serialize for SetWindow {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        WindowRepr { window: self.n, members: self.members().collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SetWindow {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = WindowRepr::deserialize(d)?;
        SetWindow::from_members(repr.window, repr.members).map_err(serde::de::Error::custom)
    }
}

/// `(Y + Z) ∩ [0, n]`.
///
/// Computed as the OR of `Z` shifted by every `y ∈ Y`. Members of either
/// factor above `n` cannot contribute and are ignored.
pub fn sumset_window(y: &SetWindow, z: &SetWindow, n: usize) -> SetWindow {
    let mut out = SetWindow::empty(n);
    for shift in y.members() {
        if shift > n {
            break;
        }
        or_shifted(&mut out.words, &z.words, shift, n + 1);
    }
    out
}

/// Whether `(Y + Z) ∩ [0, n] = target`, with `n` the target's window.
pub fn sum_check(y: &SetWindow, z: &SetWindow, target: &SetWindow) -> bool {
    sumset_window(y, z, target.window()) == *target
}

/// `|A △ B|`; both windows must have the same length.
pub fn sym_diff_count(a: &SetWindow, b: &SetWindow) -> Result<usize> {
    if a.n != b.n {
        return Err(Error::WindowMismatch { left: a.n, right: b.n });
    }
    Ok(a.words.iter().zip(&b.words).map(|(x, y)| (x ^ y).count_ones() as usize).sum())
}

/// The indices where `A` and `B` differ, ascending.
pub fn sym_diff(a: &SetWindow, b: &SetWindow) -> Result<Vec<usize>> {
    if a.n != b.n {
        return Err(Error::WindowMismatch { left: a.n, right: b.n });
    }
    let xor: Words = a.words.iter().zip(&b.words).map(|(x, y)| x ^ y).collect();
    Ok(SetWindow { n: a.n, words: xor }.members().collect())
}
