//! Per-order `M`, exact t-signatures and classic signatures.
//!
//! `M` for an order only depends on the blocks up to and including the first
//! one whose removal disconnects the terminals. The exact engine uses that to
//! score all `k!` block sequences of a set partition as one prefix tree: when
//! a prefix ends in the fatal block, every arrangement of the remaining
//! blocks shares its `M`, and the histogram gains `(remaining)!` at once.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Range;
use core::str::FromStr;

use crate::combinatorics::orders::GrowthCounts;
use crate::combinatorics::{BasePartitions, FailureOrder, OrderStream, MAX_ENUMERATION_LINKS};
use crate::graph::{LinkSet, Network};
use crate::Error;

/// Default cap on `n` for exact t-signatures (`n* ≈ 2.8·10^10` at 12).
pub const DEFAULT_TSIGNATURE_CAP: usize = 12;
/// Default cap on `n` for classic signatures.
pub const DEFAULT_SIGNATURE_CAP: usize = 10;

/// How the fatal block is resolved.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum MMode {
    /// Smallest disconnecting subset of the block, by exhaustive search.
    #[default]
    ExactSubset,
    /// Path-by-path greedy count; two-terminal only and a lower bound.
    PaperGreedy,
}

impl MMode {
    pub fn as_str(self) -> &'static str {
        match self {
            MMode::ExactSubset => "exact-subset",
            MMode::PaperGreedy => "paper-greedy",
        }
    }
}

impl fmt::Display for MMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "exact" | "exact-subset" => Ok(MMode::ExactSubset),
            "greedy" | "paper-greedy" => Ok(MMode::PaperGreedy),
            other => Err(Error::Argument(alloc::format!("unknown m-mode `{other}`"))),
        }
    }
}

/// Where a vector's counts come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Every failure order, `total = n*`.
    Exact,
    /// Uniformly drawn orders, `total` = sample size.
    Sampled,
    /// Every permutation, `total = n!`.
    Classic,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Sampled => "sampled",
            Mode::Classic => "classic",
        }
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "exact" => Ok(Mode::Exact),
            "sampled" => Ok(Mode::Sampled),
            "classic" => Ok(Mode::Classic),
            other => Err(Error::Argument(alloc::format!("unknown mode `{other}`"))),
        }
    }
}

/// `M` for one failure order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MResult {
    pub order: FailureOrder,
    pub m: usize,
}

/// A t-signature or classic signature: exact counts `n_1..n_n`, their total
/// and the probabilities `n_i / total`.
#[derive(Clone, Debug, PartialEq)]
pub struct SignatureVector {
    counts: Vec<u128>,
    total: u128,
    values: Vec<f64>,
    mode: Mode,
    m_mode: MMode,
}

impl SignatureVector {
    /// `counts[i]` is the number of orders with `M = i + 1`.
    pub fn from_counts(counts: Vec<u128>, mode: Mode, m_mode: MMode) -> Result<Self, Error> {
        if counts.is_empty() {
            return Err(Error::Argument("a signature needs at least one component".into()));
        }
        let total =
            counts.iter().try_fold(0u128, |acc, &c| acc.checked_add(c)).ok_or(Error::Overflow("signature total"))?;
        if total == 0 {
            return Err(Error::Argument("a signature needs a positive total".into()));
        }
        let values = counts.iter().map(|&c| c as f64 / total as f64).collect();
        Ok(SignatureVector { counts, total, values, mode, m_mode })
    }

    /// Number of links.
    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn counts(&self) -> &[u128] {
        &self.counts
    }

    pub fn total(&self) -> u128 {
        self.total
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn m_mode(&self) -> MMode {
        self.m_mode
    }
}

pub(crate) struct Scorer<'a> {
    net: &'a Network,
    mode: MMode,
}

impl<'a> Scorer<'a> {
    pub(crate) fn new(net: &'a Network, mode: MMode) -> Result<Self, Error> {
        if mode == MMode::PaperGreedy {
            net.check_two_terminal()?;
        }
        Ok(Scorer { net, mode })
    }

    /// Links of `block` needed to finish off the network after `removed`.
    fn fatal(&self, removed: u64, block: u64) -> usize {
        match self.mode {
            MMode::ExactSubset => self.net.min_subset_bits(removed, block).count_ones() as usize,
            MMode::PaperGreedy => self.net.greedy_count_bits(removed, block),
        }
    }

    fn connected(&self, removed: u64) -> bool {
        self.net.is_terminal_connected(LinkSet::from_bits(removed))
    }

    pub(crate) fn m(&self, blocks: &[LinkSet]) -> usize {
        let mut removed = 0u64;
        let mut m = 0;
        for b in blocks {
            let next = removed | b.bits();
            if self.connected(next) {
                m += b.len();
                removed = next;
            } else {
                return m + self.fatal(removed, b.bits());
            }
        }
        unreachable!("removing every link disconnects the terminals")
    }

    /// Adds the `M` of every arrangement of the blocks not yet in `used`,
    /// given the prefix already removed.
    #[allow(clippy::too_many_arguments)]
    fn walk(
        &self,
        blocks: &[u64],
        used: u64,
        removed: u64,
        prefix: usize,
        depth: usize,
        factorial: &[u128],
        hist: &mut [u128],
    ) {
        let k = blocks.len();
        for (i, &b) in blocks.iter().enumerate() {
            if used >> i & 1 == 1 {
                continue;
            }
            let next = removed | b;
            if self.connected(next) {
                self.walk(blocks, used | 1 << i, next, prefix + b.count_ones() as usize, depth + 1, factorial, hist);
            } else {
                let m = prefix + self.fatal(removed, b);
                hist[m - 1] += factorial[k - depth - 1];
            }
        }
    }
}

/// Blocks left to right, adding whole blocks while the terminals stay
/// connected, then the minimum needed from the first fatal block.
pub fn calculate_m(net: &Network, order: &FailureOrder, m_mode: MMode) -> Result<MResult, Error> {
    if order.links() != net.link_count() {
        return Err(Error::OrderMismatch { order: order.links(), network: net.link_count() });
    }
    let scorer = Scorer::new(net, m_mode)?;
    Ok(MResult { order: order.clone(), m: scorer.m(order.blocks()) })
}

fn check_cap(net: &Network, cap: usize) -> Result<(), Error> {
    let n = net.link_count();
    if n > cap || n > MAX_ENUMERATION_LINKS {
        return Err(Error::CapExceeded { links: n, cap: cap.min(MAX_ENUMERATION_LINKS) });
    }
    Ok(())
}

/// Number of base partitions the exact engine walks for `net`.
pub fn base_partition_total(net: &Network) -> Result<u128, Error> {
    Ok(GrowthCounts::new(net.link_count())?.base_count())
}

/// Histogram of `M` over every order built from the base partitions with
/// ranks in `bases`. Summing disjoint ranges gives the full histogram.
pub fn exact_counts_for_bases(net: &Network, m_mode: MMode, bases: Range<u128>) -> Result<Vec<u128>, Error> {
    let n = net.link_count();
    let scorer = Scorer::new(net, m_mode)?;
    let counts = GrowthCounts::new(n)?;
    let factorial: Vec<u128> = (0..=n).map(|k| counts.factorial(k)).collect();
    let mut hist = vec![0u128; n];
    if bases.start >= bases.end {
        return Ok(hist);
    }
    let mut partitions = BasePartitions::from_counts(&counts, bases.start);
    let mut blocks = Vec::with_capacity(n);
    let mut bits = Vec::with_capacity(n);
    let mut remaining = bases.end - bases.start;
    while remaining > 0 && partitions.next_into(&mut blocks) {
        bits.clear();
        bits.extend(blocks.iter().map(|b| b.bits()));
        scorer.walk(&bits, 0, 0, 0, 0, &factorial, &mut hist);
        remaining -= 1;
    }
    Ok(hist)
}

/// Histogram of `M` over `len` consecutive orders of the enumeration
/// stream starting at `start`, scoring each order on its own.
pub fn streamed_counts(net: &Network, m_mode: MMode, start: u128, len: u128) -> Result<Vec<u128>, Error> {
    let n = net.link_count();
    let scorer = Scorer::new(net, m_mode)?;
    let mut stream = OrderStream::starting_at(n, start)?;
    let mut order = FailureOrder::empty(n);
    let mut hist = vec![0u128; n];
    let mut left = len;
    while left > 0 && stream.next_into(&mut order) {
        hist[scorer.m(order.blocks()) - 1] += 1;
        left -= 1;
    }
    Ok(hist)
}

/// Exact t-signature over all `n*` failure orders.
///
/// Refuses networks with more than `max_n` links.
pub fn exact_tsignature(net: &Network, m_mode: MMode, max_n: usize) -> Result<SignatureVector, Error> {
    check_cap(net, max_n)?;
    let total = base_partition_total(net)?;
    let counts = exact_counts_for_bases(net, m_mode, 0..total)?;
    SignatureVector::from_counts(counts, Mode::Exact, m_mode)
}

/// Classic signature over all `n!` permutations of the links.
pub fn classic_signature(net: &Network, m_mode: MMode, max_n: usize) -> Result<SignatureVector, Error> {
    check_cap(net, max_n)?;
    let n = net.link_count();
    let scorer = Scorer::new(net, m_mode)?;
    let counts = GrowthCounts::new(n)?;
    let factorial: Vec<u128> = (0..=n).map(|k| counts.factorial(k)).collect();
    let singles: Vec<u64> = (0..n).map(|i| 1u64 << i).collect();
    let mut hist = vec![0u128; n];
    scorer.walk(&singles, 0, 0, 0, 0, &factorial, &mut hist);
    SignatureVector::from_counts(hist, Mode::Classic, m_mode)
}
