//! Acceptance suite: one PASS/FAIL line per criterion, each checked at its
//! stated tolerance.
//!
//! Runs without the test harness so the report is always printed. The run
//! fails when a criterion fails, except for those listed in `UNATTAINABLE`,
//! which are still evaluated and reported as FAIL.

#[path = "../../core/tests/support/oracle.rs"]
mod oracle;

use std::collections::HashMap;
use std::process::Command;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};
use tsig::artifact::SignatureArtifact;
use tsig::core::combinatorics::{n_star, random_order};
use tsig::core::engine::{calculate_m, classic_signature, exact_tsignature};
use tsig::core::reliability::{survival_mixture, uniform_grid};
use tsig::core::{CountingModel, Error, MMode, Network, SignatureVector, StratumTable};
use tsig::parallel::{approx_tsignature, parallel_exact_tsignature, parallel_streamed_counts};
use tsig::{fixtures, parse_network};

/// Criteria that cannot be met as stated. Each is explained in its detail
/// line and in the README.
const UNATTAINABLE: &[u32] = &[2];

const FIGURE1_PUBLISHED: [f64; 9] = [0.0, 0.1030962, 0.2788933, 0.4374931, 0.1512359, 0.0292814, 0.0, 0.0, 0.0];

const FIGURE2_EXACT_COLUMN: [f64; 11] =
    [0.0, 0.02621, 0.05111, 0.08714, 0.15056, 0.23622, 0.21530, 0.13705, 0.07020, 0.02621, 0.0];

const EON_PAR_COP_1E8: [f64; 26] = [
    0.0, 0.0, 0.0, 0.000107, 0.000370, 0.000868, 0.001716, 0.003077, 0.005183, 0.008481, 0.013657, 0.021973, 0.035222,
    0.055667, 0.084447, 0.117803, 0.142872, 0.143175, 0.122817, 0.093849, 0.065459, 0.041978, 0.024496, 0.012354,
    0.004428, 0.0,
];

type Outcome = Result<String, String>;

fn net(text: &str) -> Network {
    parse_network(text).expect("fixture parses")
}

fn graph_of(net: &Network) -> oracle::Graph {
    oracle::Graph { nodes: net.node_count(), edges: net.links().to_vec(), terminals: net.terminals().to_vec() }
}

fn max_error(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn fmt(v: &[f64], digits: usize) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.digits$}")).collect();
    format!("({})", parts.join(", "))
}

fn tsig_cli(args: &[&str]) -> Result<String, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_tsig")).args(args).output().map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("tsig {args:?} failed: {}", String::from_utf8_lossy(&out.stderr)));
    }
    String::from_utf8(out.stdout).map_err(|e| e.to_string())
}

fn fixture_path(stem: &str) -> String {
    format!("{}/fixtures/{stem}.graph", env!("CARGO_MANIFEST_DIR"))
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn nstar_table() -> Outcome {
    let published = [
        "3",
        "13",
        "75",
        "541",
        "4,683",
        "47,293",
        "545,835",
        "7,087,261",
        "102,247,563",
        "1,622,632,573",
        "28,091,567,595",
    ];
    let started = Instant::now();
    let table = tsig_cli(&["nstar", "12"])?;
    let elapsed = started.elapsed().as_secs_f64();
    let got: Vec<String> = table.lines().skip(1).map(|l| l.rsplit(" | ").next().unwrap_or("").to_string()).collect();
    let big = n_star(26).map_err(|e| e.to_string())?.to_string();
    let ok = got == published && big == "4002225759844168492486127539083" && elapsed < 1.0;
    check(
        ok,
        format!("rows n=2..12 {}, n*(26) = {big}, {elapsed:.3}s", if got == published { "exact" } else { "differ" }),
    )
}

fn figure1() -> Outcome {
    let net = net(fixtures::FIGURE1);
    let started = Instant::now();
    let sig = parallel_exact_tsignature(&net, MMode::ExactSubset, workers(), 12).map_err(|e| e.to_string())?;
    let elapsed = started.elapsed().as_secs_f64();
    let oracle = oracle::t_counts(&graph_of(&net));
    let err = max_error(sig.values(), &FIGURE1_PUBLISHED);
    let greedy = match parallel_exact_tsignature(&net, MMode::PaperGreedy, workers(), 12) {
        Err(Error::Unsupported(_)) => "paper-greedy not applicable (three terminals)".to_string(),
        Err(e) => return Err(e.to_string()),
        Ok(g) => format!("paper-greedy error {:.2e}", max_error(g.values(), &FIGURE1_PUBLISHED)),
    };
    check(
        err <= 1e-6 && sig.total() == 7_087_261,
        format!(
            "exact-subset {} over {} orders in {elapsed:.2}s, max error {err:.4} vs published; independent oracle {}; \
             {greedy}; the published vector has s_7 = 0, impossible here since links a-b, a-c, a-d alone keep b, c, d joined",
            fmt(sig.values(), 7),
            sig.total(),
            if oracle == sig.counts() { "agrees" } else { "DISAGREES" },
        ),
    )
}

fn figure2(exact: &mut Option<SignatureVector>) -> Outcome {
    let net = net(fixtures::FIGURE2);
    let started = Instant::now();
    let sig = parallel_exact_tsignature(&net, MMode::ExactSubset, workers(), 12).map_err(|e| e.to_string())?;
    let full_time = started.elapsed().as_secs_f64();
    let err = max_error(sig.values(), &FIGURE2_EXACT_COLUMN);
    let started = Instant::now();
    let one = parallel_streamed_counts(&net, MMode::ExactSubset, 10_000_000, 1).map_err(|e| e.to_string())?;
    let eight = parallel_streamed_counts(&net, MMode::ExactSubset, 10_000_000, 8).map_err(|e| e.to_string())?;
    let surrogate_time = started.elapsed().as_secs_f64();
    let ok = err <= 5e-5 && sig.total() == 1_622_632_573 && one == eight && one.iter().sum::<u128>() == 10_000_000;
    let detail = format!(
        "full run over {} orders in {full_time:.1}s, max error {err:.2e}; first 1e7 orders workers 1 vs 8 {} ({surrogate_time:.1}s)",
        sig.total(),
        if one == eight { "identical" } else { "DIFFER" },
    );
    *exact = Some(sig);
    check(ok, detail)
}

fn figure2_sampling(exact: Option<&SignatureVector>) -> Outcome {
    let exact = exact.ok_or("criterion 3 produced no exact vector")?;
    let started = Instant::now();
    let json = tsig_cli(&["approx", &fixture_path("figure2"), "--samples", "1000000", "--seed", "2024"])?;
    let elapsed = started.elapsed().as_secs_f64();
    let artifact = SignatureArtifact::from_json(&json).map_err(|e| e.to_string())?;
    let se = artifact.std_error.clone().ok_or("no std_error in artifact")?;
    let mut worst = 0.0f64;
    let mut ok = elapsed <= 900.0;
    for ((v, e), s) in artifact.values.iter().zip(exact.values()).zip(&se) {
        let tol = f64::max(0.005, 4.0 * s);
        ok &= (v - e).abs() <= tol;
        worst = worst.max((v - e).abs() / tol);
    }
    check(ok, format!("worst deviation {:.3} of its tolerance, {elapsed:.2}s", worst))
}

fn eon() -> Outcome {
    let net = net(fixtures::EON_PAR_COP);
    let mut runs = Vec::new();
    for seed in [1, 2, 3] {
        let plan = tsig::core::SamplingPlan::new(100_000, seed).map_err(|e| e.to_string())?.with_workers(workers());
        runs.push(approx_tsignature(&net, &plan).map_err(|e| e.to_string())?.values().to_vec());
    }
    let zeros = runs.iter().all(|r| [1, 2, 3, 26].iter().all(|&i| r[i - 1] == 0.0));
    let band = runs.iter().map(|r| max_error(r, &EON_PAR_COP_1E8)).fold(0.0, f64::max);
    let spread = (0..26)
        .map(|i| {
            let xs = runs.iter().map(|r| r[i]);
            xs.clone().fold(f64::MIN, f64::max) - xs.fold(f64::MAX, f64::min)
        })
        .fold(0.0, f64::max);
    check(
        zeros && band <= 0.01 && spread <= 0.01,
        format!(
            "zeros at 1,2,3,26 {}, max distance to N=1e8 column {band:.5}, seed spread {spread:.5}",
            if zeros { "hold" } else { "FAIL" }
        ),
    )
}

/// Fixtures with at most five links plus 25 random connected graphs with
/// four or five links.
fn oracle_corpus() -> Vec<(String, Network)> {
    let mut corpus: Vec<(String, Network)> = fixtures::ALL
        .iter()
        .map(|(name, text)| (name.to_string(), net(text)))
        .filter(|(_, n)| n.link_count() <= 5)
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for i in 0..25 {
        let g = oracle::random_graph(&mut rng, 4 + i % 2);
        let n = Network::new(oracle::labels(&g), g.edges.clone(), g.terminals.clone()).expect("connected");
        corpus.push((format!("random{i}"), n));
    }
    corpus
}

fn oracle_equivalence() -> Outcome {
    let corpus = oracle_corpus();
    let mut mismatches = Vec::new();
    for (name, n) in &corpus {
        let sig = exact_tsignature(n, MMode::ExactSubset, 12).map_err(|e| e.to_string())?;
        let expected = oracle::t_counts(&graph_of(n));
        let total = oracle::ordered_partitions(n.link_count()).len() as u128;
        if sig.counts() != expected || sig.total() != total {
            mismatches.push(name.clone());
        }
    }
    let bridge = classic_signature(&net(fixtures::BRIDGE), MMode::ExactSubset, 10).map_err(|e| e.to_string())?;
    let bridge_ok = bridge.counts() == [0, 24, 72, 24, 0] && bridge.total() == 120;
    check(
        mismatches.is_empty() && bridge_ok,
        format!(
            "{} networks, mismatches {mismatches:?}; bridge classic counts {:?}/{}",
            corpus.len(),
            bridge.counts(),
            bridge.total()
        ),
    )
}

fn mode_ordering() -> Outcome {
    let mut corpus = oracle_corpus();
    corpus.push(("greedy_gap".into(), net(fixtures::GREEDY_GAP)));
    let mut violations = 0;
    let mut strict: HashMap<String, usize> = HashMap::new();
    let mut checked = 0;
    let mut skipped = 0;
    for (i, (name, n)) in corpus.iter().enumerate() {
        if n.terminals().len() != 2 {
            skipped += 1;
            continue;
        }
        let table = StratumTable::new(n.link_count()).map_err(|e| e.to_string())?;
        let mut rng = ChaCha8Rng::seed_from_u64(700 + i as u64);
        for _ in 0..10_000 {
            let order = random_order(&table, &mut rng);
            let exact = calculate_m(n, &order, MMode::ExactSubset).map_err(|e| e.to_string())?.m;
            let greedy = calculate_m(n, &order, MMode::PaperGreedy).map_err(|e| e.to_string())?.m;
            violations += (greedy > exact) as usize;
            *strict.entry(name.clone()).or_default() += (greedy < exact) as usize;
        }
        checked += 1;
    }
    let gap = strict.get("greedy_gap").copied().unwrap_or(0);
    let counterexample = strict.get("counterexample").copied().unwrap_or(0);
    check(
        violations == 0 && gap > 0,
        format!(
            "{checked} two-terminal networks x 1e4 orders ({skipped} with three terminals have no greedy mode), \
             {violations} violations; strict on greedy_gap {gap}/10000, on the five-link counterexample {counterexample}/10000 \
             (shortest paths make it tight there)"
        ),
    )
}

fn chi_square_uniform(n: usize, draws: usize, seed: u64) -> Result<(f64, usize), String> {
    let table = StratumTable::new(n).map_err(|e| e.to_string())?;
    let cells: usize = table.n_star().to_string().parse().map_err(|_| "n* too big")?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts: HashMap<Vec<Vec<usize>>, usize> = HashMap::new();
    for _ in 0..draws {
        *counts.entry(random_order(&table, &mut rng).to_ids()).or_default() += 1;
    }
    if counts.len() != cells {
        return Err(format!("{} of {cells} orders seen for n = {n}", counts.len()));
    }
    let expected = draws as f64 / cells as f64;
    let stat: f64 = counts.values().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    let dist = ChiSquared::new((cells - 1) as f64).map_err(|e| e.to_string())?;
    Ok((1.0 - dist.cdf(stat), cells))
}

fn sampler_uniformity() -> Outcome {
    let (p3, c3) = chi_square_uniform(3, 130_000, 8)?;
    let (p4, c4) = chi_square_uniform(4, 750_000, 9)?;
    check(p3 > 0.001 && p4 > 0.001, format!("n=3: {c3} orders, p = {p3:.4}; n=4: {c4} orders, p = {p4:.4}"))
}

fn reliability_closed_forms(figure2: Option<&SignatureVector>) -> Outcome {
    let grid = uniform_grid(5.0, 100).map_err(|e| e.to_string())?;
    let poisson = CountingModel::poisson(1.0).map_err(|e| e.to_string())?;
    let tsig_of = |text: &str| exact_tsignature(&net(text), MMode::ExactSubset, 12).map_err(|e| e.to_string());
    let series = survival_mixture(tsig_of(fixtures::SERIES2)?.values(), &poisson, &grid).map_err(|e| e.to_string())?;
    let parallel =
        survival_mixture(tsig_of(fixtures::PARALLEL2)?.values(), &poisson, &grid).map_err(|e| e.to_string())?;
    let series_err = grid.iter().zip(&series.survival).map(|(t, s)| (s - (-t).exp()).abs()).fold(0.0, f64::max);
    let parallel_err =
        grid.iter().zip(&parallel.survival).map(|(t, s)| (s - (-t).exp() * (1.0 + t)).abs()).fold(0.0, f64::max);

    let mut shapes_ok = true;
    for (name, text) in fixtures::ALL {
        let n = net(text);
        let values = match *name {
            "figure2" => figure2.ok_or("criterion 3 produced no exact vector")?.values().to_vec(),
            _ if n.link_count() > 9 => {
                let plan = tsig::core::SamplingPlan::new(10_000, 1).map_err(|e| e.to_string())?;
                approx_tsignature(&n, &plan).map_err(|e| e.to_string())?.values().to_vec()
            }
            _ => tsig_of(text)?.values().to_vec(),
        };
        for model in [poisson, CountingModel::binomial_exponential(values.len(), 0.5).map_err(|e| e.to_string())?] {
            let curve = survival_mixture(&values, &model, &grid).map_err(|e| e.to_string())?;
            shapes_ok &= curve.survival[0] == 1.0 && curve.survival.windows(2).all(|w| w[1] <= w[0]);
        }
    }
    check(
        series_err <= 1e-12 && parallel_err <= 1e-12 && shapes_ok,
        format!(
            "series-2 error {series_err:.1e}, parallel-2 error {parallel_err:.1e}; {} fixtures x 2 models start at 1 and never rise: {shapes_ok}",
            fixtures::ALL.len()
        ),
    )
}

fn without_lines(json: &str, keys: &[&str]) -> String {
    json.lines()
        .filter(|l| !keys.iter().any(|k| l.trim_start().starts_with(&format!("\"{k}\""))))
        .collect::<Vec<_>>()
        .join("\n")
}

fn determinism() -> Outcome {
    let bridge = fixture_path("bridge");
    let eon = fixture_path("eon_lon_ber_mil");
    let runs: [&[&str]; 4] = [
        &["approx", &eon, "--samples", "20000", "--seed", "77"],
        &["exact", &bridge],
        &["signature", &bridge],
        &["reliability", &bridge, "--process", "binomial", "--rate", "0.3", "--tmax", "4"],
    ];
    let mut same = 0;
    for args in runs {
        let a = tsig_cli(args)?;
        let b = tsig_cli(args)?;
        same += (without_lines(&a, &["duration_seconds"]) == without_lines(&b, &["duration_seconds"])) as usize;
    }
    let mut across = true;
    let one = tsig_cli(&["approx", &eon, "--samples", "20000", "--seed", "77", "--workers", "1"])?;
    for w in ["2", "5", "8"] {
        let other = tsig_cli(&["approx", &eon, "--samples", "20000", "--seed", "77", "--workers", w])?;
        across &= without_lines(&one, &["duration_seconds", "workers"])
            == without_lines(&other, &["duration_seconds", "workers"]);
    }
    check(
        same == runs.len() && across,
        format!("{same}/{} commands repeat byte for byte apart from duration; sampling across 1, 2, 5, 8 workers identical apart from duration and the workers field: {across}", runs.len()),
    )
}

fn main() {
    let started = Instant::now();
    let mut figure2_exact = None;
    let mut results: Vec<(u32, &str, Outcome, f64)> = Vec::new();
    let mut run = |id: u32, name: &'static str, f: &mut dyn FnMut() -> Outcome| {
        let t = Instant::now();
        let outcome = f();
        let secs = t.elapsed().as_secs_f64();
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        println!("{tag} criterion {id:>2} {name}: {detail} [{secs:.1}s]");
        results.push((id, name, outcome, secs));
    };
    run(1, "n* table", &mut nstar_table);
    run(2, "Figure 1 exact vector", &mut figure1);
    run(3, "Figure 2 exact vector", &mut || figure2(&mut figure2_exact));
    run(4, "Figure 2 sampling", &mut || figure2_sampling(figure2_exact.as_ref()));
    run(5, "EON zero pattern and band", &mut eon);
    run(6, "oracle equivalence", &mut oracle_equivalence);
    run(7, "mode ordering", &mut mode_ordering);
    run(8, "sampler uniformity", &mut sampler_uniformity);
    run(9, "reliability closed forms", &mut || reliability_closed_forms(figure2_exact.as_ref()));
    run(10, "determinism", &mut determinism);

    let passed = results.iter().filter(|r| r.2.is_ok()).count();
    println!("{passed}/{} criteria pass in {:.1}s", results.len(), started.elapsed().as_secs_f64());
    let unexpected: Vec<u32> =
        results.iter().filter(|r| r.2.is_err() && !UNATTAINABLE.contains(&r.0)).map(|r| r.0).collect();
    for r in results.iter().filter(|r| r.2.is_ok() && UNATTAINABLE.contains(&r.0)) {
        println!("note: criterion {} now passes; remove it from UNATTAINABLE", r.0);
    }
    if !unexpected.is_empty() {
        eprintln!("failing criteria: {unexpected:?}");
        std::process::exit(1);
    }
}
