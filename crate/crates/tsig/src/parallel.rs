//! Worker-thread drivers for the exact engine and the sampler.
//!
//! Work is cut into contiguous index ranges (base partitions, enumerated
//! orders or sample indices). Workers claim ranges from a shared counter and
//! return exact histograms that are summed at the end, so the result does not
//! depend on the number of workers or on scheduling.

use std::ops::Range;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::Serialize;
use tsig_core::engine::{self, MMode, Mode, SignatureVector};
use tsig_core::sampling::{self, SampledTSignature, SamplingPlan};
use tsig_core::{Error, Network, StratumTable};

/// Ranges handed out per worker; more than one keeps workers busy when
/// ranges differ in cost.
const CHUNKS_PER_WORKER: u128 = 16;

fn add_into(acc: &mut [u128], part: &[u128]) {
    for (a, p) in acc.iter_mut().zip(part) {
        *a += p;
    }
}

/// Splits `0..total` into contiguous chunks, runs `job` on each from
/// `workers` threads and sums the histograms.
fn run_chunked<F>(total: u128, bins: usize, workers: usize, job: F) -> Result<Vec<u128>, Error>
where
    F: Fn(Range<u128>) -> Result<Vec<u128>, Error> + Sync,
{
    if workers == 0 {
        return Err(Error::Argument("workers must be at least 1".into()));
    }
    if workers == 1 || total <= 1 {
        return job(0..total);
    }
    let chunks = (workers as u128 * CHUNKS_PER_WORKER).min(total);
    let bounds: Vec<u128> = (0..=chunks).map(|i| total * i / chunks).collect();
    let next = AtomicUsize::new(0);
    let merged = Mutex::new((vec![0u128; bins], None::<Error>));
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| {
                let mut local = vec![0u128; bins];
                loop {
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    if i + 1 >= bounds.len() {
                        break;
                    }
                    match job(bounds[i]..bounds[i + 1]) {
                        Ok(h) => add_into(&mut local, &h),
                        Err(e) => {
                            merged.lock().unwrap().1.get_or_insert(e);
                            return;
                        }
                    }
                }
                add_into(&mut merged.lock().unwrap().0, &local);
            });
        }
    });
    let (hist, err) = merged.into_inner().unwrap();
    match err {
        Some(e) => Err(e),
        None => Ok(hist),
    }
}

/// Exact t-signature with the base partitions shared among `workers`
/// threads. Counts are identical for every worker count.
pub fn parallel_exact_tsignature(
    net: &Network,
    m_mode: MMode,
    workers: usize,
    max_n: usize,
) -> Result<SignatureVector, Error> {
    if workers == 1 {
        return engine::exact_tsignature(net, m_mode, max_n);
    }
    let n = net.link_count();
    if n > max_n {
        return Err(Error::CapExceeded { links: n, cap: max_n });
    }
    let bases = engine::base_partition_total(net)?;
    let counts = run_chunked(bases, n, workers, |r| engine::exact_counts_for_bases(net, m_mode, r))?;
    SignatureVector::from_counts(counts, Mode::Exact, m_mode)
}

/// Histogram of `M` over the first `orders` orders of the enumeration
/// stream, scoring every order individually.
pub fn parallel_streamed_counts(
    net: &Network,
    m_mode: MMode,
    orders: u128,
    workers: usize,
) -> Result<Vec<u128>, Error> {
    run_chunked(orders, net.link_count(), workers, |r| engine::streamed_counts(net, m_mode, r.start, r.end - r.start))
}

/// Monte Carlo t-signature from `plan.sample_count` uniform failure orders.
/// Sample `j` is fully determined by `(plan.seed, j)`.
pub fn approx_tsignature(net: &Network, plan: &SamplingPlan) -> Result<SampledTSignature, Error> {
    plan.validate()?;
    let table = StratumTable::new(net.link_count())?;
    let counts = run_chunked(plan.sample_count as u128, net.link_count(), plan.workers, |r| {
        sampling::sample_counts(net, &table, plan.m_mode, plan.seed, r.start as u64..r.end as u64)
    })?;
    SampledTSignature::from_counts(counts, plan.m_mode, plan.seed)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub seed: u64,
    pub samples: u64,
    pub values: Vec<f64>,
    pub std_error: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SizeSummary {
    pub samples: u64,
    /// Componentwise mean over seeds.
    pub mean: Vec<f64>,
    /// Largest componentwise difference between any two seeds.
    pub max_spread: f64,
    /// Largest componentwise distance of any seed's vector from the
    /// reference, when one was given.
    pub max_error: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
    pub sizes: Vec<SizeSummary>,
    /// Steps between consecutive sample sizes where the spread grew.
    pub spread_inversions: usize,
    /// Same for the distance to the reference.
    pub error_inversions: Option<usize>,
}

fn inversions(xs: impl Iterator<Item = f64>) -> usize {
    let xs: Vec<f64> = xs.collect();
    xs.windows(2).filter(|w| w[1] > w[0]).count()
}

/// Samples once per `(seed, sample count)` pair and summarises agreement
/// between seeds, and with `reference` if provided, as the sample count
/// grows.
pub fn convergence_report(
    net: &Network,
    seeds: &[u64],
    sample_counts: &[u64],
    workers: usize,
    m_mode: MMode,
    reference: Option<&[f64]>,
) -> Result<ConvergenceReport, Error> {
    if seeds.is_empty() || sample_counts.is_empty() {
        return Err(Error::Argument("need at least one seed and one sample count".into()));
    }
    if let Some(r) = reference {
        if r.len() != net.link_count() {
            return Err(Error::Argument("reference length differs from the link count".into()));
        }
    }
    let n = net.link_count();
    let mut rows = Vec::new();
    let mut sizes = Vec::new();
    for &samples in sample_counts {
        let plan = SamplingPlan::new(samples, 0)?.with_workers(workers).with_m_mode(m_mode);
        let first = rows.len();
        for &seed in seeds {
            let s = approx_tsignature(net, &SamplingPlan { seed, ..plan })?;
            rows.push(ConvergenceRow { seed, samples, values: s.values().to_vec(), std_error: s.std_error.clone() });
        }
        let group = &rows[first..];
        let mean: Vec<f64> =
            (0..n).map(|i| group.iter().map(|r| r.values[i]).sum::<f64>() / group.len() as f64).collect();
        let max_spread = (0..n)
            .map(|i| {
                let (lo, hi) = group
                    .iter()
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| (lo.min(r.values[i]), hi.max(r.values[i])));
                hi - lo
            })
            .fold(0.0, f64::max);
        let max_error = reference.map(|reference| {
            group.iter().flat_map(|r| r.values.iter().zip(reference).map(|(a, b)| (a - b).abs())).fold(0.0, f64::max)
        });
        sizes.push(SizeSummary { samples, mean, max_spread, max_error });
    }
    let spread_inversions = inversions(sizes.iter().map(|s| s.max_spread));
    let error_inversions = reference.map(|_| inversions(sizes.iter().map(|s| s.max_error.unwrap_or(0.0))));
    Ok(ConvergenceReport { rows, sizes, spread_inversions, error_inversions })
}
