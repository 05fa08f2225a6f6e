//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::cmp::Ordering;
use std::time::{Duration, Instant};

use irreducible::bounds::{alpha_k, find_k_default, p_bound, w, Interval};
use irreducible::game::{play, verify_prefix, Adversary, GameParams, GameTranscript};
use irreducible::montecarlo::rng::random_window;
use irreducible::montecarlo::{estimate_decomposable_with, estimate_event, estimate_event_with, RunOptions};
use irreducible::{
    census, decide_budgeted, decide_exact, oracle_decomposable_masks, pattern_frequency, sumset_window, SearchConfig,
    SetWindow, Verdict,
};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond { Ok(()) } else { Err(msg.into()) }
}

fn oracle_equivalence() -> Check {
    let mut windows = 0u64;
    for n in 0..=12 {
        let oracle = oracle_decomposable_masks(n, 2, None).map_err(|e| e.to_string())?;
        for m in 0u64..1 << (n + 1) {
            let a = SetWindow::from_mask(n, m);
            let out = decide_exact(&a, &SearchConfig::default()).map_err(|e| e.to_string())?;
            ensure(out.is_decomposable() == oracle.contains(m), format!("n={n} mask={m:b}"))?;
            if let Some(d) = out.witness() {
                ensure(sumset_window(&d.y, &d.z, n) == a, format!("bad witness n={n} mask={m:b}"))?;
                ensure(d.y.cardinality() >= 2 && d.z.cardinality() >= 2, "witness factor too small")?;
            }
            windows += 1;
        }
    }
    Ok(format!("{windows} windows agree"))
}

fn budgeted_equivalence() -> Check {
    let n = 10;
    let oracle: Vec<u64> = oracle_decomposable_masks(n, 2, None).map_err(|e| e.to_string())?.iter().collect();
    for t in 0..=2usize {
        let cfg = SearchConfig::default().with_budget(t);
        for m in 0u64..1 << (n + 1) {
            let ball = oracle.iter().any(|o| (o ^ m).count_ones() as usize <= t);
            let out = decide_budgeted(&SetWindow::from_mask(n, m), &cfg).map_err(|e| e.to_string())?;
            ensure(out.is_decomposable() == ball, format!("t={t} mask={m:b}"))?;
        }
    }
    Ok("3 x 2048 windows agree".into())
}

fn bound_constants() -> Check {
    let a2 = alpha_k(2).map_err(|e| e.to_string())?;
    ensure(a2.is_exact() && a2.midpoint() == 2.0, "alpha_2 is not exactly 2")?;
    let f = find_k_default().map_err(|e| e.to_string())?;
    ensure(f.k == 17, format!("find_k gave {}", f.k))?;
    let c = Interval::cube_root_two();
    let above = alpha_k(16).unwrap().compare(&c).map_err(|e| e.to_string())?;
    let below = alpha_k(17).unwrap().compare(&c).map_err(|e| e.to_string())?;
    ensure(above == Ordering::Greater && below == Ordering::Less, "brackets fail")?;
    ensure(w(34, 17) == BigUint::from(631u32), "w(34,17) != 631")?;
    let want = BigRational::new(BigInt::from(251_239_591u64), BigInt::from(1u64 << 35));
    ensure(p_bound(34, 17) == want, "p_bound(34,17) != 251239591/2^35")?;
    Ok(format!("k = 17, alpha_16 = {:.6} > 2^(1/3) > alpha_17 = {:.6}", f.alpha_prev.unwrap().approx, f.alpha_k.approx))
}

fn empirical_vs_bound() -> Check {
    let mut parts = Vec::new();
    for n in [34usize, 51, 68] {
        let e = estimate_event(n, 17, 100_000, 1).map_err(|e| e.to_string())?;
        let bound = p_bound(n as u64, 17);
        let bound_f = e.p_bound.unwrap();
        ensure(e.inconclusive == 0, format!("n={n}: {} inconclusive trials", e.inconclusive))?;
        // exact comparison of the f64 upper limit against the rational bound
        let upper = BigRational::from_float(e.ci_high_99).ok_or("non-finite limit")?;
        ensure(upper <= bound, format!("n={n}: 99% upper {} exceeds bound {bound_f}", e.ci_high_99))?;
        parts.push(format!("n={n}: {} hits, 99% upper {:.3e} <= {:.3e}", e.hits, e.ci_high_99, bound_f));
    }
    Ok(parts.join("; "))
}

fn census_decay() -> Check {
    let cfg = SearchConfig::default();
    let mut fractions = Vec::new();
    let mut n12 = 0;
    for n in [4usize, 8, 12, 16] {
        let r = census(n, &cfg, None).map_err(|e| e.to_string())?;
        let again = census(n, &cfg, Some(1)).map_err(|e| e.to_string())?;
        ensure(r == again, format!("census n={n} not deterministic"))?;
        if n == 12 {
            n12 = r.decomposable;
        }
        fractions.push((n, r.decomposable, r.total, r.fraction));
    }
    let listing: Vec<String> = fractions.iter().map(|(n, d, t, f)| format!("n={n}: {d}/{t} = {f:.5}")).collect();
    let listing = listing.join(", ");
    let oracle = oracle_decomposable_masks(12, 2, None).map_err(|e| e.to_string())?.len() as u64;
    ensure(n12 == oracle, format!("n=12 census {n12} != oracle {oracle}; {listing}"))?;
    let tail: Vec<f64> = fractions.iter().skip(1).map(|x| x.3).collect();
    ensure(tail.windows(2).all(|p| p[1] <= p[0]), format!("not weakly decreasing from n=8: {listing}"))?;
    Ok(listing)
}

fn structure_ok(t: &GameTranscript) -> Result<(), String> {
    let a = &t.limit_prefix;
    for (i, mv) in t.moves.iter().enumerate() {
        let (k, tm) = (mv.k, mv.t);
        ensure(tm == ((k as f64).powf(t.params.beta) + 1e-9).floor() as usize, format!("round {i}: t"))?;
        ensure(mv.window_end == 7 * k + tm * tm, format!("round {i}: window end"))?;
        ensure((k + 1..=2 * k).all(|x| a.contains(x)), format!("round {i}: block"))?;
        ensure((1..=tm).all(|j| a.contains(5 * k + j * tm)), format!("round {i}: progression"))?;
        ensure((5 * k + tm * tm + 1..=mv.window_end).all(|x| !a.contains(x)), format!("round {i}: gap"))?;
        if let Some(next) = t.moves.get(i + 1) {
            ensure(next.k > mv.window_end, format!("round {i}: k not increasing"))?;
            ensure(next.f.restrict(mv.window_end) == mv.prefix(), format!("round {i}: nesting"))?;
        }
    }
    Ok(())
}

fn game_construction() -> Check {
    let t = play(&GameParams::new(4, 3, Adversary::Minimal, 0)).map_err(|e| e.to_string())?;
    let first = &t.moves[0];
    let got: Vec<usize> = first.prefix().members().collect();
    ensure(got == [0, 1, 5, 6, 7, 8, 23, 26, 29], format!("round-0 prefix {got:?}"))?;
    ensure(first.window_end == 37, format!("round-0 window end {}", first.window_end))?;
    structure_ok(&t)?;
    let ks: Vec<usize> = t.moves.iter().map(|m| m.k).collect();
    Ok(format!("k = {ks:?}, final window [0, {}]", t.limit_prefix.window()))
}

fn game_verification() -> Check {
    let mut p = GameParams::new(32, 1, Adversary::Random, 7);
    p.alpha = 0.25;
    p.beta = 0.8;
    let t = play(&p).map_err(|e| e.to_string())?;
    let cfg = SearchConfig::default().with_node_limit(Some(100_000_000));
    let r = verify_prefix(&t, 0.25, &cfg).map_err(|e| e.to_string())?;
    let c = &r.checks[0];
    ensure(c.n == 480 && c.budget == 2, format!("round 0 has n={} budget={}", c.n, c.budget))?;
    let summary = format!("n=480, budget 2: {} after {} nodes", c.verdict.as_str(), c.nodes);
    match c.verdict {
        Verdict::Irreducible => Ok(summary),
        Verdict::Inconclusive => Err(format!("{summary}; node limit too small")),
        Verdict::Decomposable => {
            let wit = c.witness.as_ref().unwrap();
            Err(format!(
                "{summary}; expected irreducible. Witness: flip {:?}, Y = {{{}}}, Z = {{{}}}",
                wit.flips, wit.decomposition.y, wit.decomposition.z
            ))
        }
    }
}

fn pattern_frequencies() -> Check {
    let a = random_window(100_000, 1, 0);
    let n = 100_000 - 2;
    let mut total = 0u64;
    let mut worst = 0f64;
    for m in 0u64..8 {
        let f = SetWindow::from_mask(2, m);
        let c = pattern_frequency(&a, 3, &f, n).map_err(|e| e.to_string())?;
        let dev = (c as f64 / (n + 1) as f64 - 0.125).abs();
        ensure(dev <= 0.01, format!("pattern {m:03b}: deviation {dev}"))?;
        worst = worst.max(dev);
        total += c;
    }
    ensure(total == n as u64 + 1, format!("counts sum to {total}, not {}", n + 1))?;
    Ok(format!("8 counts sum to {total}, max deviation {worst:.4}"))
}

fn determinism() -> Check {
    let one = RunOptions { threads: Some(1), node_limit: None };
    let eight = RunOptions { threads: Some(8), node_limit: None };
    for n in [34usize, 51] {
        let a = estimate_event_with(n, 17, 20_000, 1, one).map_err(|e| e.to_string())?;
        let b = estimate_event_with(n, 17, 20_000, 1, eight).map_err(|e| e.to_string())?;
        let c = estimate_event_with(n, 17, 20_000, 1, eight).map_err(|e| e.to_string())?;
        ensure(ser(&a) == ser(&b) && ser(&b) == ser(&c), format!("estimate_event n={n} differs"))?;
    }
    let cfg = SearchConfig::default();
    let a = estimate_decomposable_with(40, &cfg, 2000, 1, one).map_err(|e| e.to_string())?;
    let b = estimate_decomposable_with(40, &cfg, 2000, 1, eight).map_err(|e| e.to_string())?;
    ensure(ser(&a) == ser(&b), "estimate_decomposable differs")?;
    let a = census(14, &cfg, Some(1)).map_err(|e| e.to_string())?;
    let b = census(14, &cfg, Some(8)).map_err(|e| e.to_string())?;
    ensure(ser(&a) == ser(&b), "census differs")?;
    for adv in [Adversary::Random, Adversary::Sumsetish] {
        let p = GameParams::new(6, 3, adv, 7);
        ensure(ser(&play(&p).unwrap()) == ser(&play(&p).unwrap()), format!("{adv:?} game differs"))?;
    }
    Ok("estimates, census and transcripts byte-identical across repeats and 1/8 threads".into())
}

fn ser<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string(v).unwrap()
}

fn main() {
    let criteria: [(u32, &str, u64, fn() -> Check); 9] = [
        (1, "oracle equivalence, n <= 12", 60, oracle_equivalence),
        (2, "budgeted oracle equivalence, n = 10, t <= 2", 120, budgeted_equivalence),
        (3, "bound constants", 1, bound_constants),
        (4, "empirical P(E_n) vs bound, k = 17", 600, empirical_vs_bound),
        (5, "census decay, t = 0", 600, census_decay),
        (6, "game construction", 1, game_construction),
        (7, "game verification at n = 480", 600, game_verification),
        (8, "pattern frequency", 10, pattern_frequencies),
        (9, "determinism", 600, determinism),
    ];
    let mut failed = 0;
    for (id, name, limit, run) in criteria {
        let start = Instant::now();
        let result = run();
        let took = start.elapsed();
        let result = match result {
            Ok(msg) if took > Duration::from_secs(limit) => Err(format!("{msg}; took {took:.1?}, limit {limit} s")),
            r => r,
        };
        match result {
            Ok(msg) => println!("PASS criterion {id} ({name}) [{took:.2?}]: {msg}"),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {id} ({name}) [{took:.2?}]: {msg}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
