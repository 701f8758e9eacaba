//! Monte Carlo t-signatures from uniformly drawn failure orders.
//!
//! Sample `j` of a run is drawn from its own ChaCha8 stream, keyed by the
//! run seed with stream id `j`, so any split of the index range over
//! workers reproduces the same counts.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::combinatorics::random::random_order_into;
use crate::combinatorics::{FailureOrder, StratumTable};
use crate::engine::{MMode, Mode, Scorer, SignatureVector};
use crate::graph::Network;
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SamplingPlan {
    pub sample_count: u64,
    pub seed: u64,
    pub workers: usize,
    pub m_mode: MMode,
}

impl SamplingPlan {
    /// One worker, exact-subset scoring.
    pub fn new(sample_count: u64, seed: u64) -> Result<Self, Error> {
        let plan = SamplingPlan { sample_count, seed, workers: 1, m_mode: MMode::ExactSubset };
        plan.validate()?;
        Ok(plan)
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn with_m_mode(mut self, m_mode: MMode) -> Self {
        self.m_mode = m_mode;
        self
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.sample_count == 0 {
            return Err(Error::Argument("sample_count must be at least 1".into()));
        }
        if self.workers == 0 {
            return Err(Error::Argument("workers must be at least 1".into()));
        }
        Ok(())
    }
}

/// A sampled t-signature with per-component binomial standard errors
/// `sqrt(s_i (1 − s_i) / N)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledTSignature {
    pub signature: SignatureVector,
    pub std_error: Vec<f64>,
    pub seed: u64,
}

impl SampledTSignature {
    pub fn from_counts(counts: Vec<u128>, m_mode: MMode, seed: u64) -> Result<Self, Error> {
        let signature = SignatureVector::from_counts(counts, Mode::Sampled, m_mode)?;
        let n = signature.total() as f64;
        let std_error = signature.values().iter().map(|&p| libm::sqrt(p * (1.0 - p) / n)).collect();
        Ok(SampledTSignature { signature, std_error, seed })
    }

    pub fn values(&self) -> &[f64] {
        self.signature.values()
    }

    pub fn sample_count(&self) -> u128 {
        self.signature.total()
    }
}

/// Histogram of `M` over samples `indices` of the run keyed by `seed`.
pub fn sample_counts(
    net: &Network,
    table: &StratumTable,
    m_mode: MMode,
    seed: u64,
    indices: Range<u64>,
) -> Result<Vec<u128>, Error> {
    let n = net.link_count();
    if table.links() != n {
        return Err(Error::OrderMismatch { order: table.links(), network: n });
    }
    let scorer = Scorer::new(net, m_mode)?;
    let base = ChaCha8Rng::seed_from_u64(seed);
    let mut order = FailureOrder::empty(n);
    let mut hist = vec![0u128; n];
    for j in indices {
        let mut rng = base.clone();
        rng.set_stream(j);
        random_order_into(table, &mut rng, &mut order);
        hist[scorer.m(order.blocks()) - 1] += 1;
    }
    Ok(hist)
}
