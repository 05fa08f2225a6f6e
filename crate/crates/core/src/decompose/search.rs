//! Branch-and-bound search for `(Y + Z) ∩ [0, n] = A′` with `|A △ A′| ≤ t`.
//!
//! Positions `x = 0..=n` are scanned in increasing order and each one is
//! placed in neither factor, `Z` only, `Y` only or both, in that order.
//! `A′` is never materialized up front: it is the running coverage
//! `(Y + Z) ∩ [0, n]`, and the flip cost is
//!
//! * one for every covered sum outside `A` (charged when the sum appears),
//! * one for every member of `A` the scan has passed without covering.
//!
//! Sums only reach upward, so coverage below the scan position is final and
//! the running cost never decreases. Pruning uses two lower bounds on the
//! remaining cost: members of `A` that no future pair can reach, and, under a
//! size cap, members that exceed the number of pairs still available.
//!
//! When the budget is spent, every uncovered member `p` ahead of the scan
//! also needs a *support*: a pair `(y, z)` with `y + z = p` whose unplaced
//! half (or halves) can still be added without producing a sum outside
//! `A ∪ cover`. The first few such `p` are checked at each node.
//!
//! Symmetry: `min Y ≤ min Z`, i.e. `Z` cannot start before `Y`.
//!
//! Once every future element would only produce sums above `n` (the "free
//! tail"), the remaining positions only matter for the size constraints and
//! are filled greedily in the same branch order the search would use.

use crate::window::{clear_bit, clear_tail, count_range, or_shifted, set_bit, test_bit, word_count};

/// Support checks cost `O((|Y| + |Z|) · n / 64)` per node; above this window
/// size they are skipped.
const SUPPORT_MAX_N: usize = 2048;
/// Uncovered members examined per support check.
const SUPPORT_PROBES: usize = 8;

pub(crate) struct Params {
    pub min_size: usize,
    pub budget: usize,
    pub cap: usize,
    pub node_limit: u64,
}

pub(crate) enum Step {
    Found(Found),
    Exhausted,
    Aborted,
}

pub(crate) struct Found {
    pub y: Vec<u64>,
    pub z: Vec<u64>,
    pub cover: Vec<u64>,
}

const CHOICES: [(bool, bool); 4] = [(false, false), (false, true), (true, false), (true, true)];

struct Frame {
    x: usize,
    cost: usize,
    next: usize,
    applied: Option<Applied>,
}

struct Applied {
    to_y: bool,
    to_z: bool,
    log_start: usize,
}

struct Search<'a> {
    n: usize,
    nbits: usize,
    target: &'a [u64],
    p: &'a Params,
    y: Vec<u64>,
    z: Vec<u64>,
    y_len: usize,
    z_len: usize,
    y_min: usize,
    cover: Vec<u64>,
    fresh: Vec<u64>,
    log: Vec<usize>,
    nodes: u64,
    bad: Vec<u64>,
    no_y: Vec<u64>,
    no_z: Vec<u64>,
}

/// Runs the search; returns the step and the number of visited nodes.
pub(crate) fn run(target: &[u64], n: usize, p: &Params) -> (Step, u64) {
    let words = word_count(n + 1);
    let mut s = Search {
        n,
        nbits: n + 1,
        target,
        p,
        y: vec![0; words],
        z: vec![0; words],
        y_len: 0,
        z_len: 0,
        y_min: usize::MAX,
        cover: vec![0; words],
        fresh: vec![0; words],
        log: Vec::new(),
        nodes: 0,
        bad: vec![0; words],
        no_y: vec![0; words],
        no_z: vec![0; words],
    };
    let step = s.dfs();
    (step, s.nodes)
}

/// Popcount of `a & !b & !c` over the inclusive range `[lo, hi]`.
fn count_uncovered(a: &[u64], b: &[u64], c: &[u64], lo: usize, hi: usize) -> usize {
    if lo > hi {
        return 0;
    }
    let (lw, hw) = (lo / 64, hi / 64);
    let mut total = 0;
    for i in lw..=hw {
        let mut w = a[i] & !b[i] & !c[i];
        if i == lw {
            w &= !0u64 << (lo % 64);
        }
        if i == hw && hi % 64 != 63 {
            w &= (1u64 << (hi % 64 + 1)) - 1;
        }
        total += w.count_ones() as usize;
    }
    total
}

impl Search<'_> {
    fn dfs(&mut self) -> Step {
        if self.p.min_size > self.nbits {
            self.nodes = 1;
            return Step::Exhausted;
        }
        let mut stack = vec![Frame { x: 0, cost: 0, next: 0, applied: None }];
        let mut entering = true;
        while let Some(top) = stack.last_mut() {
            if entering {
                entering = false;
                self.nodes += 1;
                if self.nodes > self.p.node_limit {
                    return Step::Aborted;
                }
                if top.x > self.n {
                    if self.y_len >= self.p.min_size && self.z_len >= self.p.min_size {
                        return Step::Found(self.witness());
                    }
                    stack.pop();
                    continue;
                }
                if self.is_free(top.x) {
                    if self.finish(top.x, top.cost) {
                        return Step::Found(self.witness());
                    }
                    stack.pop();
                    continue;
                }
                if top.cost == self.p.budget && self.n <= SUPPORT_MAX_N && !self.supported(top.x) {
                    stack.pop();
                    continue;
                }
            }
            if let Some(a) = top.applied.take() {
                self.undo(top.x, a);
            }
            let mut child = None;
            while top.next < CHOICES.len() {
                let (to_y, to_z) = CHOICES[top.next];
                top.next += 1;
                if let Some(cost) = self.admissible(top.x, top.cost, to_y, to_z) {
                    top.applied = Some(self.apply(top.x, to_y, to_z));
                    child = Some(Frame { x: top.x + 1, cost, next: 0, applied: None });
                    break;
                }
            }
            match child {
                Some(f) => {
                    stack.push(f);
                    entering = true;
                }
                None => {
                    stack.pop();
                }
            }
        }
        Step::Exhausted
    }

    fn witness(&self) -> Found {
        Found { y: self.y.clone(), z: self.z.clone(), cover: self.cover.clone() }
    }

    /// No element placed at `x` or later can produce a sum inside the window.
    fn is_free(&self, x: usize) -> bool {
        if self.y_len > 0 { x + self.y_min > self.n } else { 2 * x > self.n }
    }

    /// Cost of placing `x` as chosen, or `None` when the branch is pruned.
    /// Leaves the new sums in `self.fresh`.
    fn admissible(&mut self, x: usize, cost: usize, to_y: bool, to_z: bool) -> Option<usize> {
        let p = self.p;
        if to_z && !to_y && self.y_len == 0 {
            return None;
        }
        let ny = self.y_len + to_y as usize;
        let nz = self.z_len + to_z as usize;
        if ny > p.cap || nz > p.cap {
            return None;
        }
        let after = self.n - x;
        if ny + after < p.min_size || nz + after < p.min_size {
            return None;
        }

        self.fresh.iter_mut().for_each(|w| *w = 0);
        if to_y {
            or_shifted(&mut self.fresh, &self.z, x, self.nbits);
        }
        if to_z {
            or_shifted(&mut self.fresh, &self.y, x, self.nbits);
        }
        if to_y && to_z && 2 * x <= self.n {
            set_bit(&mut self.fresh, 2 * x);
        }

        let mut c = cost;
        for ((f, cov), t) in self.fresh.iter().zip(&self.cover).zip(self.target) {
            c += (f & !cov & !t).count_ones() as usize;
        }
        if test_bit(self.target, x) && !test_bit(&self.cover, x) && !test_bit(&self.fresh, x) {
            c += 1;
        }
        if c > p.budget {
            return None;
        }

        if x < self.n {
            let y_min = if self.y_len > 0 { self.y_min } else if to_y { x } else { usize::MAX };
            let reach = if y_min != usize::MAX { x + y_min } else { 2 * x + 1 };
            let unreachable =
                count_uncovered(self.target, &self.cover, &self.fresh, x + 1, reach.min(self.n));
            let mut bound = unreachable;
            if p.cap != usize::MAX {
                let ahead = count_uncovered(self.target, &self.cover, &self.fresh, x + 1, self.n);
                let pairs_left = p.cap * p.cap - ny * nz;
                bound = bound.max(ahead.saturating_sub(pairs_left));
            }
            if c + bound > p.budget {
                return None;
            }
        }
        Some(c)
    }

    fn apply(&mut self, x: usize, to_y: bool, to_z: bool) -> Applied {
        let log_start = self.log.len();
        for i in 0..self.fresh.len() {
            let mut added = self.fresh[i] & !self.cover[i];
            self.cover[i] |= added;
            while added != 0 {
                self.log.push(i * 64 + added.trailing_zeros() as usize);
                added &= added - 1;
            }
        }
        if to_y {
            set_bit(&mut self.y, x);
            if self.y_len == 0 {
                self.y_min = x;
            }
            self.y_len += 1;
        }
        if to_z {
            set_bit(&mut self.z, x);
            self.z_len += 1;
        }
        Applied { to_y, to_z, log_start }
    }

    fn undo(&mut self, x: usize, a: Applied) {
        for &bit in &self.log[a.log_start..] {
            clear_bit(&mut self.cover, bit);
        }
        self.log.truncate(a.log_start);
        if a.to_y {
            clear_bit(&mut self.y, x);
            self.y_len -= 1;
            if self.y_len == 0 {
                self.y_min = usize::MAX;
            }
        }
        if a.to_z {
            clear_bit(&mut self.z, x);
            self.z_len -= 1;
        }
    }

    /// Settles the free tail `[x, n]`: uncovered members there are deleted,
    /// and the factors are topped up to `min_size`.
    fn finish(&mut self, x: usize, cost: usize) -> bool {
        let deletions = count_range(self.target, x, self.n) - count_range_and(self.target, &self.cover, x, self.n);
        if cost + deletions > self.p.budget {
            return false;
        }
        let slots = self.n - x + 1;
        let mut need_y = self.p.min_size.saturating_sub(self.y_len);
        let mut need_z = self.p.min_size.saturating_sub(self.z_len);
        if need_y > slots || need_z > slots {
            return false;
        }
        for pos in x..=self.n {
            let rest = self.n - pos;
            let (to_y, to_z) = if rest >= need_y.max(need_z) {
                (false, false)
            } else if self.y_len > 0 && need_z > 0 && rest >= need_y.max(need_z - 1) {
                (false, true)
            } else if need_y > 0 && rest >= (need_y - 1).max(need_z) {
                (true, false)
            } else {
                (true, true)
            };
            if to_y {
                set_bit(&mut self.y, pos);
                if self.y_len == 0 {
                    self.y_min = pos;
                }
                self.y_len += 1;
                need_y = need_y.saturating_sub(1);
            }
            if to_z {
                set_bit(&mut self.z, pos);
                self.z_len += 1;
                need_z = need_z.saturating_sub(1);
            }
        }
        true
    }
}

impl Search<'_> {
    /// With no budget left: does every one of the next few uncovered members
    /// at or above `x` still have a cost-free covering pair?
    fn supported(&mut self, x: usize) -> bool {
        let nbits = self.nbits;
        for i in 0..self.bad.len() {
            self.bad[i] = !(self.target[i] | self.cover[i]);
        }
        clear_tail(&mut self.bad, nbits);
        // u may join Y only if u + Z avoids `bad`, and Z only if u + Y does
        self.no_y.iter_mut().for_each(|w| *w = 0);
        self.no_z.iter_mut().for_each(|w| *w = 0);
        for z in members(&self.z) {
            or_shifted_down(&mut self.no_y, &self.bad, z);
        }
        for y in members(&self.y) {
            or_shifted_down(&mut self.no_z, &self.bad, y);
        }

        let mut probes = 0;
        let mut p = x;
        while probes < SUPPORT_PROBES && p <= self.n {
            if test_bit(self.target, p) && !test_bit(&self.cover, p) {
                if !self.has_support(p, x) {
                    return false;
                }
                probes += 1;
            }
            p += 1;
        }
        true
    }

    fn has_support(&self, p: usize, x: usize) -> bool {
        let fits_y = |u: usize| !test_bit(&self.no_y, u);
        let fits_z = |u: usize| !test_bit(&self.no_z, u);
        if members(&self.y).take_while(|&y| y + x <= p).any(|y| fits_z(p - y)) {
            return true;
        }
        if members(&self.z).take_while(|&z| z + x <= p).any(|z| fits_y(p - z)) {
            return true;
        }
        p >= 2 * x && (x..=p - x).any(|u| fits_y(u) && fits_z(p - u))
    }
}

fn members(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(i, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            (w != 0).then(|| {
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                i * 64 + b
            })
        })
    })
}

/// ORs `src >> shift` into `dst`.
fn or_shifted_down(dst: &mut [u64], src: &[u64], shift: usize) {
    let (ws, bs) = (shift / 64, shift % 64);
    for i in 0..dst.len() {
        let j = i + ws;
        if j >= src.len() {
            break;
        }
        let mut w = src[j] >> bs;
        if bs != 0 && j + 1 < src.len() {
            w |= src[j + 1] << (64 - bs);
        }
        dst[i] |= w;
    }
}

/// Popcount of `a & b` over `[lo, hi]`.
fn count_range_and(a: &[u64], b: &[u64], lo: usize, hi: usize) -> usize {
    let both: Vec<u64> = a.iter().zip(b).map(|(x, y)| x & y).collect();
    count_range(&both, lo, hi)
}
