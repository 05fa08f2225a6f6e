//! Finite-scale tools for irreducible sets of nonnegative integers.
//!
//! A set `A ⊆ ℕ` is *irreducible* when it is not a sumset `B + C` with
//! `|B|, |C| ≥ 2`. Nothing about an infinite set can be decided from a finite
//! prefix, so this crate works with windows `A ∩ [0, n]` and provides:
//!
//! * [`SetWindow`] and bit-parallel primitives ([`sumset_window`],
//!   [`sym_diff_count`]) plus counting diagnostics ([`z_alpha_profile`],
//!   [`pattern_frequency`]);
//! * exact and flip-budgeted deciders for truncated sumsets
//!   ([`decide_exact`], [`decide_budgeted`], [`is_in_e_n`]) with a
//!   brute-force oracle and an exhaustive census;
//! * the Banach–Mazur cylinder game with Player II's block-and-progression
//!   strategy ([`game`]);
//! * exact counting bounds `w_{n,k}`, `P(E_n) ≤ w³/2^{n+1}` and the
//!   constant `α_k` ([`bounds`]);
//! * a seeded Monte Carlo harness for `P(E_n)` ([`montecarlo`]).
//!
//! The guide under `book/` walks through each piece; its code listings are
//! compiled as doc-tests of this crate.

pub mod bounds;
pub mod decompose;
pub mod error;
pub mod game;
pub mod montecarlo;
pub mod stats;
pub mod window;

pub use decompose::{
    census, decide_budgeted, decide_exact, is_in_e_n, oracle_decomposable_masks, BudgetedWitness, CensusReport,
    Decision, Decomposition, MaskSet, Outcome, SearchConfig, Verdict,
};
pub use error::{Error, Result};
pub use stats::{pattern_frequency, z_alpha_profile, CountingProfile};
pub use window::{sumset_window, sym_diff_count, SetWindow};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/windows.md")]
    mod windows {}
    #[doc = include_str!("../../../book/src/deciding.md")]
    mod deciding {}
    #[doc = include_str!("../../../book/src/game.md")]
    mod game {}
    #[doc = include_str!("../../../book/src/bounds.md")]
    mod bounds {}
    #[doc = include_str!("../../../book/src/sampling.md")]
    mod sampling {}
}
