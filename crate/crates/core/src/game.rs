//! The Banach–Mazur game on cylinders `{A : A ∩ [0, k] = F}`.
//!
//! Player I hands over a cylinder `(F_m, k_m)`; Player II answers with the
//! longer cylinder whose prefix on `[0, 7k + t²]`, `t = ⌊k^β⌋`, is
//!
//! ```text
//! F ∪ (k, 2k] ∪ {5k + i·t : 1 ≤ i ≤ t}
//! ```
//!
//! and nothing else. The intersection of all cylinders is the limit set; a
//! game of finitely many rounds yields its prefix. [`verify_prefix`] runs the
//! budgeted decider on those prefixes and records what it finds; it says
//! nothing about the infinite limit set.

use serde::{Deserialize, Serialize};

use crate::decompose::{decide_budgeted, BudgetedWitness, SearchConfig, Verdict};
use crate::error::{Error, Result};
use crate::montecarlo::rng::CounterRng;
use crate::window::{sumset_window, SetWindow};

/// Largest `7k + t²` a game may reach.
pub const MAX_WINDOW_END: usize = 1 << 28;

// keeps ⌊k^β⌋ exact when k^β is an integer the float misses by an ulp
const FLOOR_GUARD: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Adversary {
    /// Passes the cylinder through: `F = prefix`, `k = end + 1`.
    Minimal,
    /// Seeded coin flips between the old window end and a random new `k`.
    Random,
    /// Appends a block that is itself a truncated sumset.
    Sumsetish,
}

impl std::str::FromStr for Adversary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "minimal" => Ok(Adversary::Minimal),
            "random" => Ok(Adversary::Random),
            "sumsetish" => Ok(Adversary::Sumsetish),
            _ => Err(Error::InvalidArgument(format!("unknown adversary {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameParams {
    pub alpha: f64,
    pub beta: f64,
    pub rounds: usize,
    pub player1: Adversary,
    pub seed: u64,
    /// Player I's opening base `F_0`.
    pub f0: Vec<usize>,
    pub k0: usize,
}

impl GameParams {
    /// `α = 0.25`, `β = 0.8`, `F_0 = {0, 1}`.
    pub fn new(k0: usize, rounds: usize, player1: Adversary, seed: u64) -> Self {
        GameParams { alpha: 0.25, beta: 0.8, rounds, player1, seed, f0: vec![0, 1], k0 }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParams(m));
        if !(self.alpha > 0.0 && self.alpha < 1.0 / 3.0) {
            return bad(format!("alpha = {} must lie in (0, 1/3)", self.alpha));
        }
        if !(self.beta > 0.75 && self.beta < 1.0) {
            return bad(format!("beta = {} must lie in (3/4, 1)", self.beta));
        }
        if !(self.alpha * self.beta < 0.25) {
            return bad(format!("alpha * beta = {} must be below 1/4", self.alpha * self.beta));
        }
        if self.rounds == 0 {
            return bad("at least one round is needed".into());
        }
        self.opening().map(|_| ())
    }

    fn opening(&self) -> Result<SetWindow> {
        let f = SetWindow::from_members(self.k0, self.f0.iter().copied())
            .map_err(|_| Error::InvalidParams(format!("F_0 must lie in [0, k0 = {}]", self.k0)))?;
        if f.cardinality() < 2 {
            return Err(Error::InvalidParams("F_0 needs at least two elements".into()));
        }
        Ok(f)
    }
}

/// One round: Player I's cylinder `(f, k)` and Player II's extension to
/// `[0, window_end]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveRecord {
    pub m: usize,
    pub f: SetWindow,
    pub k: usize,
    pub t: usize,
    pub window_end: usize,
}

impl MoveRecord {
    /// `F ∪ (k, 2k] ∪ {5k + i·t}` over `[0, window_end]`.
    pub fn prefix(&self) -> SetWindow {
        let (k, t) = (self.k, self.t);
        let block = k + 1..=2 * k;
        let ap = (1..=t).map(|i| 5 * k + i * t);
        SetWindow::from_members(self.window_end, self.f.members().chain(block).chain(ap))
            .expect("every piece lies below 7k + t²")
    }
}

/// `⌊k^β⌋`.
pub fn t_of(k: usize, beta: f64) -> usize {
    ((k as f64).powf(beta) + FLOOR_GUARD).floor() as usize
}

/// Player II's answer to the cylinder `(f, k)`; `f` is read on `[0, k]`.
///
/// ```
/// use irreducible::game::player2_move;
/// use irreducible::SetWindow;
///
/// let mv = player2_move(&SetWindow::from_members(4, [0, 1])?, 4, 0.8)?;
/// assert_eq!((mv.t, mv.window_end), (3, 37));
/// let got: Vec<usize> = mv.prefix().members().collect();
/// assert_eq!(got, [0, 1, 5, 6, 7, 8, 23, 26, 29]);
/// # Ok::<(), irreducible::Error>(())
/// ```
pub fn player2_move(f: &SetWindow, k: usize, beta: f64) -> Result<MoveRecord> {
    player2_move_at(0, f, k, beta)
}

fn player2_move_at(m: usize, f: &SetWindow, k: usize, beta: f64) -> Result<MoveRecord> {
    if !(beta > 0.75 && beta < 1.0) {
        return Err(Error::InvalidArgument(format!("beta = {beta} must lie in (3/4, 1)")));
    }
    if let Some(mx) = f.max() {
        if mx > k {
            return Err(Error::InvalidArgument(format!("F reaches {mx} beyond k = {k}")));
        }
    }
    if f.cardinality() < 2 {
        return Err(Error::InvalidArgument("F needs at least two elements".into()));
    }
    let t = t_of(k, beta);
    let window_end = t
        .checked_mul(t)
        .and_then(|tt| k.checked_mul(7).and_then(|s| s.checked_add(tt)))
        .filter(|&e| e <= MAX_WINDOW_END)
        .ok_or_else(|| Error::Refused {
            what: "game",
            reason: format!("round {m} would need a window beyond {MAX_WINDOW_END} (k = {k})"),
        })?;
    Ok(MoveRecord { m, f: f.restrict(k), k, t, window_end })
}

/// A Player I strategy. It sees the current prefix (over `[0, end]`) and
/// returns the next cylinder `(F, k)`.
pub trait PlayerOne {
    fn respond(&mut self, round: usize, prefix: &SetWindow, rng: &mut CounterRng) -> (SetWindow, usize);
}

impl PlayerOne for Adversary {
    fn respond(&mut self, _round: usize, prefix: &SetWindow, rng: &mut CounterRng) -> (SetWindow, usize) {
        let end = prefix.window();
        match self {
            Adversary::Minimal => (prefix.restrict(end + 1), end + 1),
            Adversary::Random => {
                let k = end + 1 + rng.below(end as u64 / 2 + 1) as usize;
                let noise = rng.subset(k - end - 1).translate(end + 1, k);
                (union(&prefix.restrict(k), &noise), k)
            }
            Adversary::Sumsetish => {
                // {0, d} + Z for a random Z ⊆ [0, len], placed just past the prefix
                let len = (end / 4).max(4);
                let d = 1 + rng.below(len as u64 / 2) as usize;
                let mut z = rng.subset(len);
                if z.is_empty() {
                    z = SetWindow::from_members(len, [0]).unwrap();
                }
                let y = SetWindow::from_members(len, [0, d]).unwrap();
                let block = sumset_window(&y, &z, len);
                let k = end + 1 + len;
                (union(&prefix.restrict(k), &block.translate(end + 1, k)), k)
            }
        }
    }
}

fn union(a: &SetWindow, b: &SetWindow) -> SetWindow {
    SetWindow::from_members(a.window(), a.members().chain(b.members())).unwrap()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameTranscript {
    pub params: GameParams,
    pub moves: Vec<MoveRecord>,
    /// The limit set on `[0, last window_end]`.
    pub limit_prefix: SetWindow,
}

/// Play `params.rounds` rounds against the configured adversary.
pub fn play(params: &GameParams) -> Result<GameTranscript> {
    let mut p1 = params.player1;
    play_against(params, &mut p1)
}

/// Play against any Player I. Round `m` draws randomness from the stream
/// `(seed, m)`, so transcripts depend only on the parameters.
pub fn play_against<P: PlayerOne + ?Sized>(params: &GameParams, p1: &mut P) -> Result<GameTranscript> {
    params.validate()?;
    let mut moves = Vec::with_capacity(params.rounds);
    let first = player2_move_at(0, &params.opening()?, params.k0, params.beta)?;
    let mut prefix = first.prefix();
    moves.push(first);

    for m in 1..params.rounds {
        let mut rng = CounterRng::new(params.seed, m as u64);
        let (f, k) = p1.respond(m, &prefix, &mut rng);
        let end = prefix.window();
        let protocol = |reason: String| Err(Error::Protocol { round: m, reason });
        if k <= end {
            return protocol(format!("k = {k} does not exceed the previous window end {end}"));
        }
        if f.window() != k {
            return protocol(format!("F is given over [0, {}] instead of [0, {k}]", f.window()));
        }
        if f.restrict(end) != prefix {
            return protocol("F does not extend the previous prefix".into());
        }
        let mv = player2_move_at(m, &f, k, params.beta)?;
        prefix = mv.prefix();
        moves.push(mv);
    }
    Ok(GameTranscript { params: params.clone(), moves, limit_prefix: prefix })
}

/// What the budgeted decider says about the limit prefix at one round's
/// window end.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundCheck {
    pub round: usize,
    pub n: usize,
    pub budget: usize,
    pub verdict: Verdict,
    pub nodes: u64,
    pub witness: Option<BudgetedWitness>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrefixReport {
    pub alpha: f64,
    pub checks: Vec<RoundCheck>,
}

/// `⌊½ n^α⌋`.
pub fn flip_budget(n: usize, alpha: f64) -> usize {
    (0.5 * (n as f64).powf(alpha) + FLOOR_GUARD).floor() as usize
}

/// For every round, decide the limit prefix on `[0, window_end]` with flip
/// budget `⌊½ n^α⌋`. `config.budget` is replaced; its other fields apply.
pub fn verify_prefix(transcript: &GameTranscript, alpha: f64, config: &SearchConfig) -> Result<PrefixReport> {
    let mut checks = Vec::with_capacity(transcript.moves.len());
    for mv in &transcript.moves {
        let n = mv.window_end;
        let budget = flip_budget(n, alpha);
        let a = transcript.limit_prefix.restrict(n);
        let out = decide_budgeted(&a, &config.with_budget(budget))?;
        checks.push(RoundCheck {
            round: mv.m,
            n,
            budget,
            verdict: out.verdict(),
            nodes: out.nodes,
            witness: out.witness().cloned(),
        });
    }
    Ok(PrefixReport { alpha, checks })
}
