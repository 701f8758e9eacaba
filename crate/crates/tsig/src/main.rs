use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use tsig::artifact::{CurveArtifact, ProcessSpec, RunManifest, SignatureArtifact};
use tsig::nstar::{nstar_rows, render_table, with_thousands};
use tsig::parallel::{approx_tsignature, convergence_report, parallel_exact_tsignature};
use tsig::parse_network;
use tsig_core::engine::{classic_signature, DEFAULT_SIGNATURE_CAP, DEFAULT_TSIGNATURE_CAP};
use tsig_core::reliability::{survival_mixture, uniform_grid};
use tsig_core::{CountingModel, Error, MMode, Network, SamplingPlan};

const EXIT_USAGE: u8 = 2;
const EXIT_INPUT: u8 = 3;
const EXIT_CAP: u8 = 4;

#[derive(Parser)]
#[command(name = "tsig", version, about = "t-signatures and signatures of two-state networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MModeArg {
    Exact,
    Greedy,
}

impl From<MModeArg> for MMode {
    fn from(m: MModeArg) -> MMode {
        match m {
            MModeArg::Exact => MMode::ExactSubset,
            MModeArg::Greedy => MMode::PaperGreedy,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableOutput {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Process {
    Poisson,
    Binomial,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    /// t-signature over all failure orders
    T,
    /// classic signature over permutations
    Classic,
}

#[derive(clap::Args)]
struct Common {
    /// How the fatal block is resolved
    #[arg(long, value_enum, default_value = "exact")]
    m_mode: MModeArg,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long, value_enum, default_value = "json")]
    output: Output,
    /// Write to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Print n! and the number of failure orders n* for 2..=N
    Nstar {
        n: usize,
        #[arg(long, value_enum, default_value = "text")]
        output: TableOutput,
    },
    /// Exact t-signature by full enumeration
    Exact {
        graph: PathBuf,
        #[command(flatten)]
        common: Common,
        /// Refuse networks with more links than this
        #[arg(long, default_value_t = DEFAULT_TSIGNATURE_CAP)]
        max_n: usize,
    },
    /// Monte Carlo t-signature from uniformly drawn failure orders
    Approx {
        graph: PathBuf,
        #[command(flatten)]
        common: Common,
        /// Number of sampled orders (accepts 1e6)
        #[arg(long, value_parser = parse_count)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Classic signature over all permutations of the links
    Signature {
        graph: PathBuf,
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = DEFAULT_SIGNATURE_CAP)]
        max_n: usize,
    },
    /// Survival curve P(T > t) from a graph or a signature artifact
    Reliability {
        /// Graph file, or a JSON artifact written by exact/approx/signature
        input: PathBuf,
        #[arg(long, value_enum)]
        process: Process,
        /// Poisson failure rate, or the exponential link failure rate
        #[arg(long, default_value_t = 1.0)]
        rate: f64,
        #[arg(long)]
        tmax: f64,
        /// Grid intervals; the curve has steps + 1 points from 0 to tmax
        #[arg(long, default_value_t = 100)]
        steps: usize,
        /// Signature computed when the input is a graph
        #[arg(long, value_enum, default_value = "t")]
        kind: Kind,
        #[arg(long)]
        max_n: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Sample with several seeds and sizes and report the agreement
    Converge {
        graph: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        seeds: Vec<u64>,
        #[arg(long, value_delimiter = ',', value_parser = parse_count, required = true)]
        samples: Vec<u64>,
        /// Exact artifact to measure the error against
        #[arg(long)]
        reference: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "exact")]
        m_mode: MModeArg,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Integers, also in `1e6` or `1_000_000` form.
fn parse_count(s: &str) -> Result<u64, String> {
    let clean = s.replace('_', "");
    if let Ok(v) = clean.parse::<u64>() {
        return Ok(v);
    }
    if let Some((mantissa, exp)) = clean.split_once(['e', 'E']) {
        if let (Ok(m), Ok(e)) = (mantissa.parse::<u64>(), exp.parse::<u32>()) {
            return 10u64.checked_pow(e).and_then(|p| p.checked_mul(m)).ok_or_else(|| format!("`{s}` is too large"));
        }
    }
    Err(format!("`{s}` is not a whole number"))
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl ToString) -> Self {
        Failure { code: EXIT_INPUT, message: message.to_string() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::CapExceeded { .. } => EXIT_CAP,
            Error::Unsupported(_) => EXIT_USAGE,
            _ => EXIT_INPUT,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<tsig::artifact::ArtifactError> for Failure {
    fn from(e: tsig::artifact::ArtifactError) -> Self {
        match e {
            tsig::artifact::ArtifactError::Core(e) => e.into(),
            other => Failure::input(other),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<(Network, String), Failure> {
    let text = read(path)?;
    let net = parse_network(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    Ok((net, text))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| Failure { code: 1, message: format!("{}: {e}", path.display()) })
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn render(artifact: &SignatureArtifact, output: Output) -> Result<String, Failure> {
    Ok(match output {
        Output::Json => artifact.to_json(),
        Output::Csv => artifact.to_csv()?,
    })
}

fn manifest(command: &str, text: &str, common: &Common) -> RunManifest {
    let mut m = RunManifest::new(command, Some(text.as_bytes()))
        .flag("m_mode", MMode::from(common.m_mode))
        .flag("output", if common.output == Output::Json { "json" } else { "csv" });
    m.workers = common.workers;
    m
}

fn run(cli: Cli) -> Result<(), Failure> {
    let started = Instant::now();
    match cli.command {
        Command::Nstar { n, output } => {
            let rows = nstar_rows(n).map_err(|e| Failure { code: EXIT_USAGE, message: e.to_string() })?;
            let text = match output {
                TableOutput::Text => render_table(&rows),
                TableOutput::Json => {
                    let rows: Vec<_> = rows
                        .iter()
                        .map(|r| {
                            serde_json::json!({
                                "n": r.n,
                                "permutations": r.permutations.to_string(),
                                "orders": r.orders.to_string(),
                                "orders_formatted": with_thousands(&r.orders),
                            })
                        })
                        .collect();
                    format!("{}\n", serde_json::to_string_pretty(&rows).expect("json"))
                }
            };
            emit(&None, &text)
        }
        Command::Exact { graph, common, max_n } => {
            let (net, text) = load_graph(&graph)?;
            let sig = parallel_exact_tsignature(&net, common.m_mode.into(), common.workers, max_n)?;
            let mut m = manifest("exact", &text, &common).flag("max_n", max_n);
            m.duration_seconds = started.elapsed().as_secs_f64();
            emit(&common.out, &render(&SignatureArtifact::new(m, &sig, None), common.output)?)
        }
        Command::Approx { graph, common, samples, seed } => {
            let (net, text) = load_graph(&graph)?;
            let plan = SamplingPlan::new(samples, seed)?.with_workers(common.workers).with_m_mode(common.m_mode.into());
            let s = approx_tsignature(&net, &plan)?;
            let mut m = manifest("approx", &text, &common);
            m.seed = Some(seed);
            m.sample_count = Some(samples);
            m.duration_seconds = started.elapsed().as_secs_f64();
            emit(&common.out, &render(&SignatureArtifact::new(m, &s.signature, Some(&s.std_error)), common.output)?)
        }
        Command::Signature { graph, common, max_n } => {
            let (net, text) = load_graph(&graph)?;
            let sig = classic_signature(&net, common.m_mode.into(), max_n)?;
            let mut m = manifest("signature", &text, &common).flag("max_n", max_n);
            m.duration_seconds = started.elapsed().as_secs_f64();
            emit(&common.out, &render(&SignatureArtifact::new(m, &sig, None), common.output)?)
        }
        Command::Reliability { input, process, rate, tmax, steps, kind, max_n, common } => {
            let text = read(&input)?;
            let (values, mode) = if text.trim_start().starts_with('{') {
                let sig = SignatureArtifact::from_json(&text)?.to_vector()?;
                (sig.values().to_vec(), sig.mode().as_str())
            } else {
                let net = parse_network(&text).map_err(|e| Failure::input(format!("{}: {e}", input.display())))?;
                let m_mode = common.m_mode.into();
                let sig = match kind {
                    Kind::T => parallel_exact_tsignature(
                        &net,
                        m_mode,
                        common.workers,
                        max_n.unwrap_or(DEFAULT_TSIGNATURE_CAP),
                    )?,
                    Kind::Classic => classic_signature(&net, m_mode, max_n.unwrap_or(DEFAULT_SIGNATURE_CAP))?,
                };
                (sig.values().to_vec(), sig.mode().as_str())
            };
            let (model, spec) = match process {
                Process::Poisson => (
                    CountingModel::poisson(rate)?,
                    ProcessSpec { kind: "poisson".into(), rate, links: None, lifetime: None },
                ),
                Process::Binomial => (
                    CountingModel::binomial_exponential(values.len(), rate)?,
                    ProcessSpec {
                        kind: "binomial".into(),
                        rate,
                        links: Some(values.len()),
                        lifetime: Some("exponential".into()),
                    },
                ),
            };
            if steps == 0 {
                return Err(Failure { code: EXIT_USAGE, message: "--steps must be at least 1".into() });
            }
            let grid = uniform_grid(tmax, steps + 1)?;
            let curve = survival_mixture(&values, &model, &grid)?;
            let mut m = manifest("reliability", &text, &common).flag("steps", steps).flag("tmax", tmax);
            m.duration_seconds = started.elapsed().as_secs_f64();
            let artifact = CurveArtifact::new(m, spec, mode, &values, &curve);
            let body = match common.output {
                Output::Json => artifact.to_json(),
                Output::Csv => artifact.to_csv()?,
            };
            emit(&common.out, &body)
        }
        Command::Converge { graph, seeds, samples, reference, m_mode, workers, out } => {
            let (net, text) = load_graph(&graph)?;
            let reference = match reference {
                Some(path) => Some(SignatureArtifact::from_json(&read(&path)?)?.to_vector()?.values().to_vec()),
                None => None,
            };
            let report = convergence_report(&net, &seeds, &samples, workers, m_mode.into(), reference.as_deref())?;
            let mut m = RunManifest::new("converge", Some(text.as_bytes())).flag("m_mode", MMode::from(m_mode));
            m.workers = workers;
            m.duration_seconds = started.elapsed().as_secs_f64();
            let body = serde_json::json!({ "manifest": m, "report": report });
            emit(&out, &format!("{}\n", serde_json::to_string_pretty(&body).expect("json")))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
