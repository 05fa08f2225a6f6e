//! Exhaustive census of decomposable windows over `[0, n]`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{decide_budgeted, SearchConfig, Verdict};
use crate::error::{Error, Result};
use crate::window::SetWindow;

/// Largest `n` the exhaustive census accepts (`2^(n+1)` decider calls).
pub const CENSUS_MAX_N: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusReport {
    pub n: usize,
    pub config: SearchConfig,
    pub total: u64,
    pub decomposable: u64,
    pub irreducible: u64,
    pub inconclusive: u64,
    /// `decomposable / total`.
    pub fraction: f64,
}

#[derive(Default, Clone, Copy)]
struct Tally {
    decomposable: u64,
    irreducible: u64,
    inconclusive: u64,
}

impl Tally {
    fn merge(self, o: Tally) -> Tally {
        Tally {
            decomposable: self.decomposable + o.decomposable,
            irreducible: self.irreducible + o.irreducible,
            inconclusive: self.inconclusive + o.inconclusive,
        }
    }
}

/// Runs the decider on every `A ⊆ [0, n]`.
///
/// The mask space is cut into disjoint blocks by the high-order bits and
/// the per-block tallies are summed, so the report does not depend on
/// `threads` (`None` uses the global rayon pool).
pub fn census(n: usize, config: &SearchConfig, threads: Option<usize>) -> Result<CensusReport> {
    if n > CENSUS_MAX_N {
        return Err(Error::Refused {
            what: "census",
            reason: format!("n = {n} needs 2^{} decider calls (limit n = {CENSUS_MAX_N}); sample instead", n + 1),
        });
    }
    config.validate(n)?;

    let total = 1u64 << (n + 1);
    let high_bits = (n + 1).min(8);
    let low_bits = n + 1 - high_bits;

    let run_block = |prefix: u64| -> Result<Tally> {
        let mut t = Tally::default();
        for low in 0..1u64 << low_bits {
            let a = SetWindow::from_mask(n, (prefix << low_bits) | low);
            match decide_budgeted(&a, config)?.verdict() {
                Verdict::Decomposable => t.decomposable += 1,
                Verdict::Irreducible => t.irreducible += 1,
                Verdict::Inconclusive => t.inconclusive += 1,
            }
        }
        Ok(t)
    };
    let sweep = || {
        (0..1u64 << high_bits)
            .into_par_iter()
            .map(run_block)
            .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))
    };
    let tally = match threads {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?
            .install(sweep)?,
        None => sweep()?,
    };

    Ok(CensusReport {
        n,
        config: *config,
        total,
        decomposable: tally.decomposable,
        irreducible: tally.irreducible,
        inconclusive: tally.inconclusive,
        fraction: tally.decomposable as f64 / total as f64,
    })
}
