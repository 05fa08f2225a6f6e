//! Deciding whether a window is a nontrivial truncated sumset.
//!
//! A window `A ⊆ [0, n]` is *window-decomposable* when there are
//! `Y, Z ⊆ [0, n]` with `|Y|, |Z| ≥ min_size` and `(Y + Z) ∩ [0, n] = A`.
//! With a flip budget `t` the question becomes whether some `A′` with
//! `|A △ A′| ≤ t` is window-decomposable.
//!
//! This is a finite construction. It is neither necessary nor sufficient for
//! the (ir)reducibility of any infinite set extending `A`: truncation makes
//! every window within one flip of a sumset, e.g. `A ∪ {n} = {0, n − min A} + A`.
//! The one finite event with a direct counting meaning is [`is_in_e_n`],
//! where both factors and the flip budget are capped by `⌊n/k⌋`.

mod census;
mod oracle;
mod search;

use serde::{Deserialize, Serialize};

pub use census::{census, CensusReport, CENSUS_MAX_N};
pub use oracle::{oracle_decomposable_masks, MaskSet, ORACLE_MAX_N};

use crate::error::{Error, Result};
use crate::window::{sum_check, SetWindow};

/// Parameters shared by the exact and budgeted deciders.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Lower bound on `|Y|` and `|Z|`.
    pub min_size: usize,
    /// Flip budget `t`.
    pub budget: usize,
    /// Upper bound on `|Y|` and `|Z|`.
    pub size_cap: Option<usize>,
    /// Give up (inconclusive) after this many search nodes.
    pub node_limit: Option<u64>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { min_size: 2, budget: 0, size_cap: None, node_limit: None }
    }
}

impl SearchConfig {
    pub fn with_budget(self, budget: usize) -> Self {
        SearchConfig { budget, ..self }
    }

    pub fn with_min_size(self, min_size: usize) -> Self {
        SearchConfig { min_size, ..self }
    }

    pub fn with_size_cap(self, size_cap: Option<usize>) -> Self {
        SearchConfig { size_cap, ..self }
    }

    pub fn with_node_limit(self, node_limit: Option<u64>) -> Self {
        SearchConfig { node_limit, ..self }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if self.min_size == 0 {
            return Err(Error::InvalidConfig("min_size must be at least 1".into()));
        }
        if self.budget > n + 1 {
            return Err(Error::InvalidConfig(format!(
                "budget {} exceeds the window size {}",
                self.budget,
                n + 1
            )));
        }
        if let Some(cap) = self.size_cap {
            if cap < self.min_size {
                return Err(Error::InvalidConfig(format!("size_cap {cap} is below min_size {}", self.min_size)));
            }
        }
        Ok(())
    }
}

/// `(Y, Z)` with `(Y + Z) ∩ [0, n]` equal to the decided target.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub y: SetWindow,
    pub z: SetWindow,
}

impl Decomposition {
    /// `(Y + Z) ∩ [0, n]` recomputed from scratch.
    pub fn sumset(&self) -> SetWindow {
        crate::window::sumset_window(&self.y, &self.z, self.y.window())
    }

    pub fn swapped(&self) -> Decomposition {
        Decomposition { y: self.z.clone(), z: self.y.clone() }
    }
}

/// A perturbed target `A′`, its decomposition, and the flipped indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BudgetedWitness {
    pub a_prime: SetWindow,
    pub decomposition: Decomposition,
    pub flips: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Decomposable,
    Irreducible,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Decomposable => "decomposable",
            Verdict::Irreducible => "irreducible",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// Result of one decider run. `Inconclusive` means the node limit tripped
/// and says nothing about decomposability.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decision<W> {
    Found(W),
    Irreducible,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome<W> {
    pub decision: Decision<W>,
    pub nodes: u64,
}

impl<W> Outcome<W> {
    pub fn verdict(&self) -> Verdict {
        match self.decision {
            Decision::Found(_) => Verdict::Decomposable,
            Decision::Irreducible => Verdict::Irreducible,
            Decision::Inconclusive => Verdict::Inconclusive,
        }
    }

    pub fn witness(&self) -> Option<&W> {
        match &self.decision {
            Decision::Found(w) => Some(w),
            _ => None,
        }
    }

    pub fn is_decomposable(&self) -> bool {
        matches!(self.decision, Decision::Found(_))
    }
}

/// Exact decision: is `A` itself a truncated sumset? `config.budget` must be 0.
///
/// ```
/// use irreducible::{decide_exact, SearchConfig, SetWindow, Verdict};
///
/// let a = SetWindow::from_members(2, [0, 1, 2])?;
/// assert_eq!(decide_exact(&a, &SearchConfig::default())?.verdict(), Verdict::Decomposable);
///
/// let b = SetWindow::from_members(2, [0])?;
/// assert_eq!(decide_exact(&b, &SearchConfig::default())?.verdict(), Verdict::Irreducible);
/// # Ok::<(), irreducible::Error>(())
/// ```
pub fn decide_exact(a: &SetWindow, config: &SearchConfig) -> Result<Outcome<Decomposition>> {
    if config.budget != 0 {
        return Err(Error::InvalidConfig("decide_exact needs budget 0; use decide_budgeted".into()));
    }
    let out = decide_budgeted(a, config)?;
    Ok(Outcome {
        nodes: out.nodes,
        decision: match out.decision {
            Decision::Found(w) => Decision::Found(w.decomposition),
            Decision::Irreducible => Decision::Irreducible,
            Decision::Inconclusive => Decision::Inconclusive,
        },
    })
}

/// Budgeted decision: is some `A′` within `config.budget` flips of `A` a
/// truncated sumset? The first witness in the fixed branch order is returned.
pub fn decide_budgeted(a: &SetWindow, config: &SearchConfig) -> Result<Outcome<BudgetedWitness>> {
    let n = a.window();
    config.validate(n)?;
    let params = search::Params {
        min_size: config.min_size,
        budget: config.budget,
        cap: config.size_cap.unwrap_or(usize::MAX),
        node_limit: config.node_limit.unwrap_or(u64::MAX),
    };
    let (step, nodes) = search::run(a.words(), n, &params);
    let decision = match step {
        search::Step::Found(f) => {
            let y = SetWindow::from_words(n, &f.y);
            let z = SetWindow::from_words(n, &f.z);
            let a_prime = SetWindow::from_words(n, &f.cover);
            assert!(sum_check(&y, &z, &a_prime), "search produced an invalid witness");
            let flips = crate::window::sym_diff(a, &a_prime)?;
            assert!(flips.len() <= config.budget);
            Decision::Found(BudgetedWitness { a_prime, decomposition: Decomposition { y, z }, flips })
        }
        search::Step::Exhausted => Decision::Irreducible,
        search::Step::Aborted => Decision::Inconclusive,
    };
    Ok(Outcome { decision, nodes })
}

/// The configuration [`is_in_e_n`] uses: budget and size cap `⌊n/k⌋`, no
/// lower size bound beyond nonempty factors.
pub fn e_n_config(n: usize, k: usize) -> SearchConfig {
    let cap = n / k.max(1);
    SearchConfig { min_size: 1, budget: cap, size_cap: Some(cap), node_limit: None }
}

/// Membership of `X ⊆ [0, n]` in the counting event `E_n`: within `⌊n/k⌋`
/// flips of some `(Y + Z) ∩ [0, n]` with `|Y|, |Z| ≤ ⌊n/k⌋`.
pub fn is_in_e_n(x: &SetWindow, k: usize) -> Result<bool> {
    Ok(is_in_e_n_limited(x, k, None)?.is_decomposable())
}

/// [`is_in_e_n`] with an optional node limit; the witness is returned.
pub fn is_in_e_n_limited(x: &SetWindow, k: usize, node_limit: Option<u64>) -> Result<Outcome<BudgetedWitness>> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let n = x.window();
    let cap = n / k;
    if cap == 0 {
        // Only Y = Z = ∅ fits, giving X′ = ∅ with no flips to spare.
        let decision = if x.is_empty() {
            Decision::Found(BudgetedWitness {
                a_prime: SetWindow::empty(n),
                decomposition: Decomposition { y: SetWindow::empty(n), z: SetWindow::empty(n) },
                flips: Vec::new(),
            })
        } else {
            Decision::Irreducible
        };
        return Ok(Outcome { decision, nodes: 0 });
    }
    decide_budgeted(x, &e_n_config(n, k).with_node_limit(node_limit))
}

#[cfg(test)]
mod tests;
