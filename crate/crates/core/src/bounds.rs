//! Exact counting bounds for the event `E_n`.
//!
//! With `w_{n,k} = Σ_{i ≤ ⌊n/k⌋} C(n+1, i)` the number of windows in `E_n`
//! is at most `w³`, so `P(E_n) ≤ w³ / 2^{n+1}`. Growth of `w` is governed by
//! `α_k = k^{1/k} (k/(k−1))^{(k−1)/k}`; once `α_k³ < 2` the bound decays
//! geometrically and `Σ P(E_n)` converges.
//!
//! Binomial sums are exact big integers. `α_k` and `2^{1/3}` are carried as
//! dyadic intervals, and every comparison between them must clear a margin
//! of `2^-20` or it is reported as [`Error::ComparisonTooClose`].

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Fractional bits of every [`Interval`].
pub const PRECISION: u32 = 96;
/// Comparisons must separate by at least `2^-MARGIN_BITS`.
pub const MARGIN_BITS: u32 = 20;
/// Largest `k` searched by [`find_k`].
pub const FIND_K_CAP: u64 = 1_000_000;
/// How many `n` past `n0` the geometric constant is checked on.
pub const DEFAULT_CHECK_SPAN: u64 = 1000;

// α_k is an exact k-th root up to here, an f64 envelope beyond
const EXACT_ALPHA_MAX_K: u64 = 4000;
// grid for the constant c
const C_BITS: u32 = 40;

/// `w_{n,k} = Σ_{i=0}^{⌊n/k⌋} C(n+1, i)`. Panics if `k = 0`.
pub fn w(n: u64, k: u64) -> BigUint {
    assert!(k >= 1, "w(n, k) needs k >= 1");
    let top = n / k;
    let mut term = BigUint::one();
    let mut sum = BigUint::one();
    for i in 0..top {
        // C(n+1, i+1) = C(n+1, i) (n+1−i) / (i+1)
        term = term * (n + 1 - i) / (i + 1);
        sum += &term;
    }
    sum
}

/// `w(n,k)³ / 2^{n+1}` as an exact rational.
pub fn p_bound(n: u64, k: u64) -> BigRational {
    let w3 = BigInt::from(w(n, k).pow(3));
    BigRational::new(w3, BigInt::one() << (n + 1))
}

/// `p_bound` rendered as an `f64` (53 significant bits, or 0 on underflow).
pub fn p_bound_f64(n: u64, k: u64) -> f64 {
    p_bound(n, k).to_f64().unwrap_or(0.0)
}

/// A closed interval `[lo, hi] / 2^PRECISION` of nonnegative reals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    lo: BigUint,
    hi: BigUint,
}

impl Interval {
    fn new(lo: BigUint, hi: BigUint) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    /// The exact value of a nonnegative finite `f64`, widened to the grid.
    pub fn from_f64(x: f64) -> Result<Self> {
        if !(x.is_finite() && x >= 0.0) {
            return Err(Error::InvalidArgument(format!("{x} is not a nonnegative finite real")));
        }
        if x == 0.0 {
            return Ok(Interval::new(BigUint::zero(), BigUint::zero()));
        }
        let bits = x.to_bits();
        let exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1 << 52) - 1);
        let (mant, e) = if exp == 0 { (frac, -1074) } else { (frac | (1 << 52), exp - 1075) };
        let shift = e + PRECISION as i64;
        let m = BigUint::from(mant);
        if shift >= 0 {
            let v = m << shift as u64;
            Ok(Interval::new(v.clone(), v))
        } else {
            let s = (-shift) as u64;
            let lo = &m >> s;
            let hi = if (&lo << s) == m { lo.clone() } else { &lo + 1u32 };
            Ok(Interval::new(lo, hi))
        }
    }

    /// `2^{1/3}`.
    pub fn cube_root_two() -> Self {
        let r = (BigUint::from(2u32) << (3 * PRECISION as u64)).nth_root(3);
        let exact = r.pow(3) == BigUint::from(2u32) << (3 * PRECISION as u64);
        let hi = if exact { r.clone() } else { &r + 1u32 };
        Interval::new(r, hi)
    }

    pub fn lo_f64(&self) -> f64 {
        scaled_to_f64(&self.lo)
    }

    pub fn hi_f64(&self) -> f64 {
        scaled_to_f64(&self.hi)
    }

    pub fn midpoint(&self) -> f64 {
        scaled_to_f64(&(&self.lo + &self.hi)) / 2.0
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    /// Decide `self` vs `other` only when they are separated by the margin.
    pub fn compare(&self, other: &Interval) -> Result<Ordering> {
        let margin = BigUint::one() << (PRECISION - MARGIN_BITS) as u64;
        if &self.hi + &margin <= other.lo {
            Ok(Ordering::Less)
        } else if &other.hi + &margin <= self.lo {
            Ok(Ordering::Greater)
        } else {
            Err(Error::ComparisonTooClose(format!("{self} vs {other}")))
        }
    }

    /// Decimal rendering of the lower end with `digits` places.
    pub fn lo_decimal(&self, digits: usize) -> String {
        decimal(&self.lo, digits, false)
    }

    pub fn hi_decimal(&self, digits: usize) -> String {
        decimal(&self.hi, digits, true)
    }

    fn cubed_hi_f64(&self) -> f64 {
        // the f64 conversion may round down by half an ulp; step up once
        let x = scaled_to_f64(&(self.hi.pow(3) >> (2 * PRECISION as u64)));
        next_up(x)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo_decimal(24), self.hi_decimal(24))
    }
}

fn scaled_to_f64(v: &BigUint) -> f64 {
    let bits = v.bits();
    if bits <= 1000 {
        v.to_f64().unwrap_or(f64::INFINITY) / 2f64.powi(PRECISION as i32)
    } else {
        f64::INFINITY
    }
}

fn next_up(x: f64) -> f64 {
    if x.is_finite() && x > 0.0 {
        f64::from_bits(x.to_bits() + 1)
    } else {
        x
    }
}

fn decimal(v: &BigUint, digits: usize, round_up: bool) -> String {
    let ten = BigUint::from(10u32).pow(digits as u32);
    let num = v * &ten;
    let mut q = &num >> PRECISION as u64;
    if round_up && (&q << PRECISION as u64) != num {
        q += 1u32;
    }
    let int = &q / &ten;
    let frac = (&q % &ten).to_string();
    format!("{int}.{}{frac}", "0".repeat(digits - frac.len()))
}

/// `α_k = (k^k / (k−1)^{k−1})^{1/k}` as an interval.
///
/// ```
/// use irreducible::bounds::alpha_k;
///
/// let a2 = alpha_k(2)?;
/// assert!(a2.is_exact() && a2.midpoint() == 2.0);
/// assert!((alpha_k(17)?.midpoint() - 1.2507).abs() < 1e-3);
/// # Ok::<(), irreducible::Error>(())
/// ```
pub fn alpha_k(k: u64) -> Result<Interval> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("alpha_k needs k >= 2, got {k}")));
    }
    if k > EXACT_ALPHA_MAX_K {
        return Ok(alpha_envelope(k));
    }
    let kk = k as u32;
    let num = BigUint::from(k).pow(kk) << (PRECISION as u64 * k);
    let den = BigUint::from(k - 1).pow(kk - 1);
    let q = &num / &den;
    let r = floor_root(&q, kk, alpha_f64(k));
    // r^k ≤ ⌊num/den⌋ ≤ num/den, and (r+1)^k > ⌊num/den⌋ forces (r+1)^k > num/den
    let exact = &q * &den == num && r.pow(kk) == q;
    let hi = if exact { r.clone() } else { &r + 1u32 };
    Ok(Interval::new(r, hi))
}

/// `⌊q^{1/k}⌋` by Newton's method from an `f64` guess of `q^{1/k} / 2^PRECISION`.
fn floor_root(q: &BigUint, k: u32, guess: f64) -> BigUint {
    let mut r = BigUint::from((guess * (1u64 << 52) as f64) as u64) << (PRECISION as u64 - 52);
    for _ in 0..8 {
        let next = (&r * (k - 1) + q / r.pow(k - 1)) / k;
        let done = if next > r { &next - &r } else { &r - &next } <= BigUint::from(2u32);
        r = next;
        if done {
            break;
        }
    }
    while r.pow(k) > *q {
        r -= 1u32;
    }
    while (&r + 1u32).pow(k) <= *q {
        r += 1u32;
    }
    r
}

fn alpha_f64(k: u64) -> f64 {
    let kf = k as f64;
    ((kf.ln() + (kf - 1.0) * (kf / (kf - 1.0)).ln()) / kf).exp()
}

// Relative error of the f64 formula is a few ulps; 1e-12 covers it with room.
fn alpha_envelope(k: u64) -> Interval {
    let a = alpha_f64(k);
    let lo = Interval::from_f64(a * (1.0 - 1e-12)).expect("finite");
    let hi = Interval::from_f64(a * (1.0 + 1e-12)).expect("finite");
    Interval::new(lo.lo, hi.hi)
}

/// The smallest `k` together with the certified brackets around it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FindK {
    pub k: u64,
    pub threshold: f64,
    /// `α_k`, certified below the threshold.
    pub alpha_k: IntervalRepr,
    /// `α_{k−1}`, certified above the threshold (absent for `k = 2`).
    pub alpha_prev: Option<IntervalRepr>,
}

/// Smallest `k ≥ 2` with `α_k < threshold`.
///
/// The candidate comes from an `f64` scan; it is then certified by interval
/// comparisons on both sides.
pub fn find_k(threshold: &Interval) -> Result<FindK> {
    let t = threshold.midpoint();
    if !(t > 1.0) {
        return Err(Error::InvalidArgument(format!("threshold must exceed 1, got {t}")));
    }
    let mut k = 2;
    while alpha_f64(k) >= t {
        k += 1;
        if k > FIND_K_CAP {
            return Err(Error::InvalidArgument(format!("no k <= {FIND_K_CAP} has alpha_k below {t}")));
        }
    }
    let here = alpha_k(k)?;
    if here.compare(threshold)? != Ordering::Less {
        return Err(Error::ComparisonTooClose(format!("alpha_{k} against the threshold")));
    }
    let prev = if k > 2 {
        let p = alpha_k(k - 1)?;
        if p.compare(threshold)? != Ordering::Greater {
            return Err(Error::ComparisonTooClose(format!("alpha_{} against the threshold", k - 1)));
        }
        Some(IntervalRepr::from(&p))
    } else {
        None
    };
    Ok(FindK { k, threshold: t, alpha_k: IntervalRepr::from(&here), alpha_prev: prev })
}

/// [`find_k`] at the default threshold `2^{1/3}`.
pub fn find_k_default() -> Result<FindK> {
    find_k(&Interval::cube_root_two())
}

/// `Σ_{n ≥ n0} c^n = c^{n0} / (1 − c)`.
pub fn geometric_tail(c: f64, n0: u64) -> f64 {
    assert!(c > 0.0 && c < 1.0, "ratio {c} outside (0, 1)");
    (n0 as f64 * c.ln()).exp() / (1.0 - c)
}

/// A geometric constant for `P(E_n) ≤ c^n` and the resulting tail bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeometricBound {
    pub k: u64,
    pub n0: u64,
    /// Every `n ∈ [n0, checked_through]` satisfies `p_bound(n,k) ≤ c^n` exactly.
    pub checked_through: u64,
    /// Upper estimate of `α_k³/2`, the limit of `p_bound(n,k)^{1/n}`.
    pub asymptotic_ratio: f64,
    /// Largest `p_bound(n,k)^{1/n}` seen on the checked range.
    pub range_max_root: f64,
    /// A dyadic rational in `(1/2, 1)`.
    pub c: f64,
    pub tail: f64,
}

/// Find `c` with `p_bound(n,k) ≤ c^n` on `[n0, n0 + DEFAULT_CHECK_SPAN]`
/// and return `Σ_{n ≥ n0} c^n`.
pub fn tail_and_c(n0: u64, k: u64) -> Result<GeometricBound> {
    tail_and_c_checked(n0, k, DEFAULT_CHECK_SPAN)
}

pub fn tail_and_c_checked(n0: u64, k: u64, span: u64) -> Result<GeometricBound> {
    let alpha = alpha_k(k)?;
    if alpha.compare(&Interval::cube_root_two())? != Ordering::Less {
        return Err(Error::InvalidParams(format!(
            "alpha_{k} = {:.6} is not below 2^(1/3), so w^3/2^(n+1) does not decay geometrically",
            alpha.midpoint()
        )));
    }
    let end = n0 + span;
    let asymptotic_ratio = alpha.cubed_hi_f64() / 2.0;

    let mut range_max = 0.0f64;
    let mut last_bad = None;
    for n in n0.max(1)..=end {
        let r = root_of_bound(n, k);
        if r >= 1.0 {
            last_bad = Some(n);
        }
        range_max = range_max.max(r);
    }
    if let Some(bad) = last_bad {
        return Err(Error::NoGeometricConstant { n0, suggestion: smallest_workable_n0(bad + 1, k, span) });
    }

    let base = asymptotic_ratio.max(range_max).max(0.5);
    let target = base + (1.0 - base) / 4.0;
    let scale = (1u64 << C_BITS) as f64;
    let m = (target * scale).ceil() as u64;
    if m >= 1 << C_BITS {
        return Err(Error::NoGeometricConstant { n0, suggestion: None });
    }
    let c = m as f64 / scale;

    // w³ · 2^{C_BITS·n} ≤ m^n · 2^{n+1}, checked for every n in range
    let mb = BigUint::from(m);
    let mut m_pow = mb.pow(n0 as u32);
    for n in n0..=end {
        let lhs = w(n, k).pow(3) << (C_BITS as u64 * n);
        let rhs = &m_pow << (n + 1);
        if lhs > rhs {
            return Err(Error::NoGeometricConstant { n0, suggestion: smallest_workable_n0(n + 1, k, span) });
        }
        m_pow *= &mb;
    }

    Ok(GeometricBound {
        k,
        n0,
        checked_through: end,
        asymptotic_ratio,
        range_max_root: range_max,
        c,
        tail: geometric_tail(c, n0),
    })
}

fn root_of_bound(n: u64, k: u64) -> f64 {
    // log2 of w³/2^{n+1}, divided by n
    let wb = w(n, k);
    let lw = log2_big(&wb);
    ((3.0 * lw - (n + 1) as f64) / n as f64).exp2()
}

fn log2_big(v: &BigUint) -> f64 {
    let bits = v.bits();
    if bits <= 1000 {
        v.to_f64().unwrap().log2()
    } else {
        let shift = bits - 64;
        (v >> shift).to_f64().unwrap().log2() + shift as f64
    }
}

fn smallest_workable_n0(from: u64, k: u64, span: u64) -> Option<u64> {
    (from..from + 10 * span).find(|&n0| (n0..=n0 + span).all(|n| n == 0 || root_of_bound(n, k) < 1.0))
}

/// Serializable view of an [`Interval`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalRepr {
    pub lo: String,
    pub hi: String,
    pub approx: f64,
}

impl From<&Interval> for IntervalRepr {
    fn from(i: &Interval) -> Self {
        IntervalRepr { lo: i.lo_decimal(24), hi: i.hi_decimal(24), approx: i.midpoint() }
    }
}

/// Serializable view of an exact rational.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RationalRepr {
    pub numerator: String,
    pub denominator: String,
    pub approx: f64,
}

impl From<&BigRational> for RationalRepr {
    fn from(r: &BigRational) -> Self {
        RationalRepr {
            numerator: r.numer().to_string(),
            denominator: r.denom().to_string(),
            approx: r.to_f64().unwrap_or(0.0),
        }
    }
}

/// Everything the bounds module knows about one `(n, k)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub n: u64,
    pub k: u64,
    /// `w_{n,k}` in decimal.
    pub w: String,
    pub p_bound: RationalRepr,
    pub alpha_k: IntervalRepr,
    pub alpha_below_cube_root_two: bool,
    pub c_witness: Option<f64>,
    pub tail_from: Option<u64>,
    pub tail: Option<f64>,
    pub checked_through: Option<u64>,
    pub note: String,
}

const REPORT_NOTE: &str = "c is certified by exact checks of p_bound(n,k) <= c^n on a finite range \
     plus the asymptotic condition alpha_k^3 < 2; the constants of the Stirling estimate are not tracked";

pub fn bound_report(n: u64, k: u64, tail_from: Option<u64>) -> Result<BoundReport> {
    let alpha = alpha_k(k)?;
    let below = alpha.compare(&Interval::cube_root_two())? == Ordering::Less;
    let geo = match tail_from {
        Some(n0) => Some(tail_and_c(n0, k)?),
        None => None,
    };
    Ok(BoundReport {
        n,
        k,
        w: w(n, k).to_string(),
        p_bound: RationalRepr::from(&p_bound(n, k)),
        alpha_k: IntervalRepr::from(&alpha),
        alpha_below_cube_root_two: below,
        c_witness: geo.as_ref().map(|g| g.c),
        tail_from,
        tail: geo.as_ref().map(|g| g.tail),
        checked_through: geo.as_ref().map(|g| g.checked_through),
        note: REPORT_NOTE.into(),
    })
}
