//! Seeded Monte Carlo estimates of `P(E_n)` and of decomposability.
//!
//! Trial `i` of a run with seed `s` decides [`rng::random_window`]`(n, s, i)`,
//! so an estimate depends only on `(n, trials, seed)` and the decider
//! settings, never on how trials are spread over threads.

pub mod persist;
pub mod rng;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::p_bound_f64;
use crate::decompose::{decide_budgeted, is_in_e_n_limited, SearchConfig, Verdict};
use crate::error::{Error, Result};

pub use persist::{append_csv, append_jsonl, RunRecord};

const Z95: f64 = 1.959_963_984_540_054;
const Z99: f64 = 2.575_829_303_548_900_4;

/// Two-sided confidence levels offered by [`wilson`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Confidence {
    P95,
    P99,
}

impl Confidence {
    fn z(self) -> f64 {
        match self {
            Confidence::P95 => Z95,
            Confidence::P99 => Z99,
        }
    }

    fn alpha(self) -> f64 {
        match self {
            Confidence::P95 => 0.05,
            Confidence::P99 => 0.01,
        }
    }
}

/// Wilson score interval for `hits` successes in `trials`.
///
/// With no hits the upper end is `−ln(α)/trials` (the rule of three at 95%)
/// and the lower end is 0.
pub fn wilson(hits: u64, trials: u64, level: Confidence) -> (f64, f64) {
    assert!(trials > 0 && hits <= trials);
    let n = trials as f64;
    if hits == 0 {
        return (0.0, (-level.alpha().ln() / n).min(1.0));
    }
    let p = hits as f64 / n;
    let z = level.z();
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).max(0.0).min(p), (center + half).min(1.0).max(p))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub n: usize,
    /// Set for `E_n` estimates.
    pub k: Option<usize>,
    /// Set for general decomposability estimates.
    pub config: Option<SearchConfig>,
    pub trials: u64,
    pub hits: u64,
    /// Trials where the decider hit its node limit; never counted as hits.
    pub inconclusive: u64,
    pub p_hat: f64,
    /// 95% Wilson interval.
    pub ci_low: f64,
    pub ci_high: f64,
    /// Upper end of the 99% Wilson interval.
    pub ci_high_99: f64,
    /// `w(n,k)³/2^{n+1}` for `E_n` estimates.
    pub p_bound: Option<f64>,
    pub seed: u64,
}

impl Estimate {
    fn new(n: usize, trials: u64, seed: u64, tally: Tally) -> Self {
        let (ci_low, ci_high) = wilson(tally.hits, trials, Confidence::P95);
        let (_, ci_high_99) = wilson(tally.hits, trials, Confidence::P99);
        Estimate {
            n,
            k: None,
            config: None,
            trials,
            hits: tally.hits,
            inconclusive: tally.inconclusive,
            p_hat: tally.hits as f64 / trials as f64,
            ci_low,
            ci_high,
            ci_high_99,
            p_bound: None,
            seed,
        }
    }
}

/// Execution settings that do not affect which windows are drawn.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunOptions {
    /// Worker threads; `None` uses the global rayon pool.
    pub threads: Option<usize>,
    /// Per-trial node limit for the decider.
    pub node_limit: Option<u64>,
}

#[derive(Debug, Default, Clone, Copy)]
struct Tally {
    hits: u64,
    inconclusive: u64,
}

fn run_trials<F>(trials: u64, opts: RunOptions, verdict: F) -> Result<Tally>
where
    F: Fn(u64) -> Result<Verdict> + Sync,
{
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let sweep = || {
        (0..trials)
            .into_par_iter()
            .map(|i| {
                Ok(match verdict(i)? {
                    Verdict::Decomposable => Tally { hits: 1, inconclusive: 0 },
                    Verdict::Irreducible => Tally::default(),
                    Verdict::Inconclusive => Tally { hits: 0, inconclusive: 1 },
                })
            })
            .try_reduce(Tally::default, |a, b| {
                Ok(Tally { hits: a.hits + b.hits, inconclusive: a.inconclusive + b.inconclusive })
            })
    };
    match opts.threads {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?
            .install(sweep),
        None => sweep(),
    }
}

/// Estimate `P(E_n)` for uniform `X ⊆ [0, n]`.
///
/// ```
/// use irreducible::montecarlo::estimate_event;
///
/// let e = estimate_event(34, 17, 2000, 1)?;
/// assert!(e.ci_high_99 <= e.p_bound.unwrap());
/// # Ok::<(), irreducible::Error>(())
/// ```
pub fn estimate_event(n: usize, k: usize, trials: u64, seed: u64) -> Result<Estimate> {
    estimate_event_with(n, k, trials, seed, RunOptions::default())
}

pub fn estimate_event_with(n: usize, k: usize, trials: u64, seed: u64, opts: RunOptions) -> Result<Estimate> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let tally = run_trials(trials, opts, |i| {
        let x = rng::random_window(n, seed, i);
        Ok(is_in_e_n_limited(&x, k, opts.node_limit)?.verdict())
    })?;
    let mut e = Estimate::new(n, trials, seed, tally);
    e.k = Some(k);
    e.p_bound = Some(p_bound_f64(n as u64, k as u64));
    Ok(e)
}

/// Estimate the fraction of uniform windows over `[0, n]` that the budgeted
/// decider accepts under `config`.
pub fn estimate_decomposable(n: usize, config: &SearchConfig, trials: u64, seed: u64) -> Result<Estimate> {
    estimate_decomposable_with(n, config, trials, seed, RunOptions::default())
}

pub fn estimate_decomposable_with(
    n: usize,
    config: &SearchConfig,
    trials: u64,
    seed: u64,
    opts: RunOptions,
) -> Result<Estimate> {
    let cfg = match opts.node_limit {
        Some(_) => config.with_node_limit(opts.node_limit),
        None => *config,
    };
    cfg.validate(n)?;
    let tally = run_trials(trials, opts, |i| {
        let a = rng::random_window(n, seed, i);
        Ok(decide_budgeted(&a, &cfg)?.verdict())
    })?;
    let mut e = Estimate::new(n, trials, seed, tally);
    e.config = Some(cfg);
    Ok(e)
}
