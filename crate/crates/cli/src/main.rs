mod literal;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use irreducible::bounds::{self, Interval};
use irreducible::game::{self, Adversary, GameParams};
use irreducible::montecarlo::{self, RunOptions};
use irreducible::{census, decide_budgeted, oracle_decomposable_masks, pattern_frequency, Error, SearchConfig, Verdict};

use literal::parse_set;

const EXIT_USAGE: u8 = 64;
const EXIT_LIMIT: u8 = 2;

#[derive(Parser)]
#[command(name = "irreducible", version, about = "Sumset decomposition of finite integer windows")]
#[command(after_help = "Set literals: 0,2,5 | b:101001 (character i is element i) | @path (a file holding either form).")]
struct Cli {
    /// Emit strict JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a window is (within a flip budget of) a truncated sumset.
    #[command(after_help = "With --quiet the exit status is the verdict: 0 decomposable, 1 irreducible, \
                            2 inconclusive; 64 means a usage error.")]
    Decide {
        set: String,
        #[arg(long)]
        window: Option<usize>,
        #[command(flatten)]
        search: SearchArgs,
        /// Print nothing; report the verdict through the exit status.
        #[arg(long)]
        quiet: bool,
    },
    /// Run the decider on every subset of [0, n].
    Census {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Monte Carlo estimates over uniform random windows.
    Sample {
        #[command(subcommand)]
        what: SampleKind,
    },
    /// Counting bounds w(n,k), w^3/2^(n+1), alpha_k and geometric tails.
    Bounds {
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        k: Option<u64>,
        /// Smallest k with alpha_k below the threshold (default 2^(1/3)).
        #[arg(long)]
        find_k: bool,
        #[arg(long, requires = "find_k")]
        threshold: Option<f64>,
        /// Also certify c with p_bound(n,k) <= c^n from this n on.
        #[arg(long)]
        tail_from: Option<u64>,
    },
    /// Play the cylinder game and optionally decide the resulting prefixes.
    Game {
        #[arg(long, default_value_t = 1)]
        rounds: usize,
        #[arg(long, default_value_t = 0.25)]
        alpha: f64,
        #[arg(long, default_value_t = 0.8)]
        beta: f64,
        #[arg(long, default_value = "0,1")]
        f0: String,
        #[arg(long)]
        k0: usize,
        #[arg(long, default_value = "minimal", value_parser = ["minimal", "random", "sumsetish"])]
        adversary: String,
        #[arg(long)]
        seed: Option<u64>,
        /// Run the budgeted decider on every round's prefix.
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value_t = 2)]
        min_size: usize,
        #[arg(long, default_value_t = 100_000_000)]
        node_limit: u64,
    },
    /// Count the shifts j in [0, n] where the set matches the pattern on [j, j + L − 1].
    Freq {
        set: String,
        #[arg(long)]
        window: Option<usize>,
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        pattern_window: usize,
        #[arg(long)]
        n: usize,
    },
    /// Brute-force list of decomposable masks (n ≤ 13).
    Oracle {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        min_size: usize,
        #[arg(long)]
        size_cap: Option<usize>,
        /// Include every decomposable mask in the output.
        #[arg(long)]
        dump: bool,
    },
}

#[derive(Subcommand)]
enum SampleKind {
    /// Estimate P(E_n).
    Event {
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        run: SampleArgs,
    },
    /// Estimate the decomposable fraction under a search configuration.
    Decide {
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        run: SampleArgs,
    },
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long, default_value_t = 2)]
    min_size: usize,
    #[arg(long, default_value_t = 0)]
    budget: usize,
    #[arg(long)]
    size_cap: Option<usize>,
    #[arg(long)]
    node_limit: Option<u64>,
}

impl SearchArgs {
    fn config(&self) -> SearchConfig {
        SearchConfig {
            min_size: self.min_size,
            budget: self.budget,
            size_cap: self.size_cap,
            node_limit: self.node_limit,
        }
    }
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    trials: u64,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    threads: Option<usize>,
    /// Append a JSON-lines record (with wall time) to this file.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Append a CSV row to this file.
    #[arg(long)]
    csv: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Limit(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::OutOfWindow { .. }
            | Error::WindowMismatch { .. }
            | Error::InvalidArgument(_)
            | Error::InvalidConfig(_)
            | Error::InvalidParams(_) => Failure::Usage(e.to_string()),
            _ => Failure::Limit(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Limit(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_LIMIT)
        }
    }
}

fn emit<T: Serialize>(json: bool, value: &T, text: impl FnOnce() -> String) {
    if json {
        println!("{}", serde_json::to_string(value).expect("serializable"));
    } else {
        println!("{}", text());
    }
}

fn resolve_seed(seed: Option<u64>, json: bool) -> Result<u64, Failure> {
    match seed {
        Some(s) => Ok(s),
        None if json => Err(Failure::Usage("--seed is required with --json".into())),
        None => {
            let t = std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).unwrap_or_default();
            let s = t.as_nanos() as u64;
            eprintln!("seed = {s}");
            Ok(s)
        }
    }
}

fn set_text(s: &irreducible::SetWindow) -> String {
    format!("{{{s}}}")
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let json = cli.json;
    match cli.command {
        Command::Decide { set, window, search, quiet } => {
            let a = parse_set(&set, window).map_err(Failure::Usage)?;
            let config = search.config();
            let out = decide_budgeted(&a, &config)?;
            let verdict = out.verdict();
            if !quiet {
                let value = json!({
                    "verdict": verdict,
                    "window": a.window(),
                    "set": a,
                    "config": config,
                    "nodes": out.nodes,
                    "witness": out.witness(),
                });
                emit(json, &value, || {
                    let mut s = format!("{}\nnodes = {}", verdict.as_str(), out.nodes);
                    if let Some(w) = out.witness() {
                        s += &format!(
                            "\nY = {}\nZ = {}\nflips = {:?}",
                            set_text(&w.decomposition.y),
                            set_text(&w.decomposition.z),
                            w.flips
                        );
                    }
                    s
                });
                return Ok(0);
            }
            Ok(match verdict {
                Verdict::Decomposable => 0,
                Verdict::Irreducible => 1,
                Verdict::Inconclusive => 2,
            })
        }
        Command::Census { n, search, threads } => {
            let r = census(n, &search.config(), threads)?;
            emit(json, &r, || {
                format!(
                    "n = {}\ntotal = {}\ndecomposable = {}\nirreducible = {}\ninconclusive = {}\nfraction = {}",
                    r.n, r.total, r.decomposable, r.irreducible, r.inconclusive, r.fraction
                )
            });
            Ok(0)
        }
        Command::Sample { what } => {
            let started = Instant::now();
            let (run, e) = match what {
                SampleKind::Event { k, run } => {
                    let seed = resolve_seed(run.seed, json)?;
                    let opts = RunOptions { threads: run.threads, node_limit: None };
                    let e = montecarlo::estimate_event_with(run.n, k, run.trials, seed, opts)?;
                    (run, e)
                }
                SampleKind::Decide { search, run } => {
                    let seed = resolve_seed(run.seed, json)?;
                    let opts = RunOptions { threads: run.threads, node_limit: None };
                    let e = montecarlo::estimate_decomposable_with(run.n, &search.config(), run.trials, seed, opts)?;
                    (run, e)
                }
            };
            let ms = started.elapsed().as_millis() as u64;
            if let Some(path) = &run.out {
                montecarlo::append_jsonl(path, &e, ms)?;
            }
            if let Some(path) = &run.csv {
                montecarlo::append_csv(path, &e)?;
            }
            emit(json, &e, || {
                let mut s = format!(
                    "n = {}\ntrials = {}\nhits = {}\ninconclusive = {}\np_hat = {}\n95% CI = [{}, {}]\n99% upper = {}\nseed = {}",
                    e.n, e.trials, e.hits, e.inconclusive, e.p_hat, e.ci_low, e.ci_high, e.ci_high_99, e.seed
                );
                if let Some(p) = e.p_bound {
                    s += &format!("\np_bound = {p}");
                }
                s
            });
            Ok(0)
        }
        Command::Bounds { n, k, find_k, threshold, tail_from } => {
            let found = if find_k {
                let t = match threshold {
                    Some(t) => Interval::from_f64(t)?,
                    None => Interval::cube_root_two(),
                };
                Some(bounds::find_k(&t)?)
            } else {
                None
            };
            let k = k.or(found.as_ref().map(|f| f.k));
            match (n, k) {
                (Some(n), Some(k)) => {
                    let r = bounds::bound_report(n, k, tail_from)?;
                    emit(json, &r, || {
                        let mut s = format!(
                            "n = {}\nk = {}\nw = {}\np_bound = {}/{} ~ {:e}\nalpha_k in [{}, {}]\nalpha_k < 2^(1/3): {}",
                            r.n,
                            r.k,
                            r.w,
                            r.p_bound.numerator,
                            r.p_bound.denominator,
                            r.p_bound.approx,
                            r.alpha_k.lo,
                            r.alpha_k.hi,
                            r.alpha_below_cube_root_two
                        );
                        if let (Some(c), Some(t), Some(n0)) = (r.c_witness, r.tail, r.tail_from) {
                            s += &format!("\nc = {c}\ntail from {n0} = {t:e}\nchecked through n = {:?}", r.checked_through);
                        }
                        s + "\nnote: " + &r.note
                    });
                }
                (None, _) if found.is_some() => {
                    let f = found.unwrap();
                    emit(json, &f, || {
                        let mut s = format!("k = {}\nalpha_k = {} (lo {})", f.k, f.alpha_k.approx, f.alpha_k.lo);
                        if let Some(p) = &f.alpha_prev {
                            s += &format!("\nalpha_(k-1) = {} (hi {})", p.approx, p.hi);
                        }
                        s
                    });
                }
                _ => return Err(Failure::Usage("bounds needs --n and --k, or --find-k".into())),
            }
            Ok(0)
        }
        Command::Game { rounds, alpha, beta, f0, k0, adversary, seed, verify, min_size, node_limit } => {
            let player1: Adversary = adversary.parse()?;
            let seed = match (seed, player1) {
                (Some(s), _) => s,
                (None, _) if json => return Err(Failure::Usage("--seed is required with --json".into())),
                (None, Adversary::Minimal) => 0,
                (None, _) => resolve_seed(None, false)?,
            };
            let f0 = parse_set(&f0, None).map_err(Failure::Usage)?;
            let params = GameParams { alpha, beta, rounds, player1, seed, f0: f0.members().collect(), k0 };
            let t = game::play(&params)?;
            let report = if verify {
                let cfg = SearchConfig::default().with_min_size(min_size).with_node_limit(Some(node_limit));
                Some(game::verify_prefix(&t, alpha, &cfg)?)
            } else {
                None
            };
            let value = json!({ "transcript": t, "verify": report });
            emit(json, &value, || {
                let mut s = String::new();
                for mv in &t.moves {
                    s += &format!(
                        "round {}: k = {}, t = {}, window_end = {}, |F| = {}\n",
                        mv.m,
                        mv.k,
                        mv.t,
                        mv.window_end,
                        mv.f.cardinality()
                    );
                }
                s += &format!("limit prefix: {} members on [0, {}]", t.limit_prefix.cardinality(), t.limit_prefix.window());
                if let Some(r) = &report {
                    for c in &r.checks {
                        s += &format!(
                            "\nround {} (n = {}, budget {}): {} after {} nodes",
                            c.round,
                            c.n,
                            c.budget,
                            c.verdict.as_str(),
                            c.nodes
                        );
                    }
                }
                s
            });
            Ok(0)
        }
        Command::Freq { set, window, pattern, pattern_window, n } => {
            let a = parse_set(&set, window).map_err(Failure::Usage)?;
            if pattern_window == 0 {
                return Err(Failure::Usage("--pattern-window must be at least 1".into()));
            }
            let f = parse_set(&pattern, Some(pattern_window - 1)).map_err(Failure::Usage)?;
            let count = pattern_frequency(&a, pattern_window, &f, n)?;
            let value = json!({
                "n": n,
                "pattern_window": pattern_window,
                "pattern": f,
                "count": count,
                "fraction": count as f64 / (n + 1) as f64,
            });
            emit(json, &value, || format!("{count}"));
            Ok(0)
        }
        Command::Oracle { n, min_size, size_cap, dump } => {
            let set = oracle_decomposable_masks(n, min_size, size_cap)?;
            let masks: Vec<u64> = set.iter().collect();
            let total = 1u64 << (n + 1);
            let value = json!({
                "n": n,
                "min_size": min_size,
                "size_cap": size_cap,
                "total": total,
                "count": masks.len(),
                "masks": if dump { Some(&masks) } else { None },
            });
            emit(json, &value, || {
                let mut s = format!("{} of {} windows are decomposable", masks.len(), total);
                if dump {
                    for m in &masks {
                        s += &format!("\n{}", irreducible::SetWindow::from_mask(n, *m).to_bit_string());
                    }
                }
                s
            });
            Ok(0)
        }
    }
}
