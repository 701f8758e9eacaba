use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{LinkSet, MAX_LINKS};
use crate::Error;

/// Enumeration bookkeeping uses `u128`; `n*` overflows it past 30 links.
pub const MAX_ENUMERATION_LINKS: usize = 30;

/// An ordered partition of links `1..=n` into nonempty disjoint blocks.
/// Blocks fail left to right; the links of one block fail together.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FailureOrder {
    n: usize,
    blocks: Vec<LinkSet>,
}

impl FailureOrder {
    /// Checks that the blocks are nonempty, disjoint and cover `1..=n`.
    pub fn new(n: usize, blocks: Vec<LinkSet>) -> Result<Self, Error> {
        if n == 0 || n > MAX_LINKS {
            return Err(Error::Argument(alloc::format!("a failure order needs 1..={MAX_LINKS} links")));
        }
        let full = LinkSet::full(n);
        let mut seen = LinkSet::EMPTY;
        for &b in &blocks {
            if b.is_empty() {
                return Err(Error::Argument("empty block in failure order".into()));
            }
            if !b.is_subset(full) {
                let id = b.difference(full).first().unwrap_or(0);
                return Err(Error::InvalidLink { id, links: n });
            }
            if !b.is_disjoint(seen) {
                return Err(Error::Argument("blocks of a failure order overlap".into()));
            }
            seen = seen | b;
        }
        if seen != full {
            return Err(Error::OrderMismatch { order: seen.len(), network: n });
        }
        Ok(FailureOrder { n, blocks })
    }

    /// Builds an order from blocks of link ids.
    pub fn from_ids(n: usize, blocks: &[&[usize]]) -> Result<Self, Error> {
        let sets = blocks.iter().map(|b| LinkSet::from_ids(b.iter().copied(), n)).collect::<Result<Vec<_>, _>>()?;
        if sets.iter().zip(blocks).any(|(s, b)| s.len() != b.len()) {
            return Err(Error::Argument("repeated link inside a block".into()));
        }
        FailureOrder::new(n, sets)
    }

    pub(crate) fn empty(n: usize) -> Self {
        FailureOrder { n, blocks: Vec::with_capacity(n) }
    }

    pub(crate) fn blocks_mut(&mut self) -> &mut Vec<LinkSet> {
        &mut self.blocks
    }

    /// Number of links covered.
    pub fn links(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[LinkSet] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Blocks as ascending id lists.
    pub fn to_ids(&self) -> Vec<Vec<usize>> {
        self.blocks.iter().map(|b| b.iter().collect()).collect()
    }
}

/// Completion counts of restricted growth strings.
///
/// `tails[r][m]` counts the ways to label `r` more elements when `m` blocks
/// are open; `weighted[r][m]` weighs each completion by `k!` for its final
/// block count `k`, i.e. counts ordered completions. Only `m + r <= n` is
/// reachable and stored.
#[derive(Clone, Debug)]
pub(crate) struct GrowthCounts {
    tails: Vec<Vec<u128>>,
    weighted: Vec<Vec<u128>>,
    factorial: Vec<u128>,
}

impl GrowthCounts {
    pub(crate) fn new(n: usize) -> Result<Self, Error> {
        check_enumerable(n)?;
        let overflow = || Error::Overflow("enumeration count");
        let mut factorial = vec![1u128; n + 1];
        for i in 1..=n {
            factorial[i] = factorial[i - 1].checked_mul(i as u128).ok_or_else(overflow)?;
        }
        let mut tails = vec![vec![0u128; n + 1]; n];
        let mut weighted = vec![vec![0u128; n + 1]; n];
        for m in 1..=n {
            tails[0][m] = 1;
            weighted[0][m] = factorial[m];
        }
        for r in 1..n {
            for m in 1..=n - r {
                let step = |t: &Vec<Vec<u128>>| {
                    t[r - 1][m].checked_mul(m as u128).and_then(|v| v.checked_add(t[r - 1][m + 1]))
                };
                tails[r][m] = step(&tails).ok_or_else(overflow)?;
                weighted[r][m] = step(&weighted).ok_or_else(overflow)?;
            }
        }
        Ok(GrowthCounts { tails, weighted, factorial })
    }

    fn n(&self) -> usize {
        self.tails.len()
    }

    /// Bell number.
    pub(crate) fn base_count(&self) -> u128 {
        self.tails[self.n() - 1][1]
    }

    /// Ordered Bell number.
    pub(crate) fn order_count(&self) -> u128 {
        self.weighted[self.n() - 1][1]
    }

    pub(crate) fn factorial(&self, k: usize) -> u128 {
        self.factorial[k]
    }

    /// Labels of the `rank`-th growth string, with `rank` counted in `table`
    /// units; returns the rank left over inside the chosen string.
    fn unrank(&self, weighted: bool, mut rank: u128, labels: &mut [u8]) -> u128 {
        let n = self.n();
        let table = if weighted { &self.weighted } else { &self.tails };
        labels[0] = 0;
        let mut open = 1;
        for (i, label) in labels.iter_mut().enumerate().take(n).skip(1) {
            let r = n - 1 - i;
            let mut chosen = open;
            for c in 0..open {
                let cnt = table[r][open];
                if rank < cnt {
                    chosen = c;
                    break;
                }
                rank -= cnt;
            }
            *label = chosen as u8;
            if chosen == open {
                open += 1;
            }
        }
        rank
    }
}

fn check_enumerable(n: usize) -> Result<(), Error> {
    if n == 0 || n > MAX_ENUMERATION_LINKS {
        Err(Error::Argument(alloc::format!("enumeration supports 1..={MAX_ENUMERATION_LINKS} links, got {n}")))
    } else {
        Ok(())
    }
}

/// Number of unordered set partitions of `n` links (the Bell number).
pub fn base_partition_count(n: usize) -> Result<u128, Error> {
    Ok(GrowthCounts::new(n)?.base_count())
}

/// Set partitions of `1..=n` in lexicographic order of their restricted
/// growth strings. Blocks come sorted by their smallest link.
#[derive(Clone, Debug)]
pub struct BasePartitions {
    n: usize,
    labels: [u8; MAX_LINKS],
    /// `prefix_max[i] = max(labels[..=i])`
    prefix_max: [u8; MAX_LINKS],
    done: bool,
}

impl BasePartitions {
    pub fn new(n: usize) -> Result<Self, Error> {
        check_enumerable(n)?;
        Ok(BasePartitions { n, labels: [0; MAX_LINKS], prefix_max: [0; MAX_LINKS], done: false })
    }

    /// Starts at the `rank`-th partition (0-based).
    pub fn starting_at(n: usize, rank: u128) -> Result<Self, Error> {
        let counts = GrowthCounts::new(n)?;
        Ok(Self::from_counts(&counts, rank))
    }

    pub(crate) fn from_counts(counts: &GrowthCounts, rank: u128) -> Self {
        let n = counts.n();
        let mut it = BasePartitions { n, labels: [0; MAX_LINKS], prefix_max: [0; MAX_LINKS], done: false };
        if rank >= counts.base_count() {
            it.done = true;
            return it;
        }
        counts.unrank(false, rank, &mut it.labels[..n]);
        it.refresh_prefix(0);
        it
    }

    fn refresh_prefix(&mut self, from: usize) {
        for i in from..self.n {
            let before = if i == 0 { 0 } else { self.prefix_max[i - 1] };
            self.prefix_max[i] = before.max(self.labels[i]);
        }
    }

    fn blocks_into(&self, blocks: &mut Vec<LinkSet>) {
        blocks.clear();
        for i in 0..self.n {
            let label = self.labels[i] as usize;
            if label == blocks.len() {
                blocks.push(LinkSet::EMPTY);
            }
            blocks[label].insert(i + 1);
        }
    }

    fn advance(&mut self) {
        for i in (1..self.n).rev() {
            if self.labels[i] <= self.prefix_max[i - 1] {
                self.labels[i] += 1;
                for l in &mut self.labels[i + 1..self.n] {
                    *l = 0;
                }
                self.refresh_prefix(i);
                return;
            }
        }
        self.done = true;
    }

    /// Writes the current partition into `blocks` and steps forward.
    pub fn next_into(&mut self, blocks: &mut Vec<LinkSet>) -> bool {
        if self.done {
            return false;
        }
        self.blocks_into(blocks);
        self.advance();
        true
    }
}

impl Iterator for BasePartitions {
    type Item = Vec<LinkSet>;

    fn next(&mut self) -> Option<Vec<LinkSet>> {
        let mut blocks = Vec::new();
        self.next_into(&mut blocks).then_some(blocks)
    }
}

/// Lazy stream of every failure order of `n` links, each exactly once.
///
/// Base partitions follow [`BasePartitions`]; within one, the block
/// sequences follow lexicographic order of block-index permutations.
#[derive(Clone, Debug)]
pub struct OrderStream {
    bases: BasePartitions,
    blocks: Vec<LinkSet>,
    perm: Vec<usize>,
    started: bool,
    exhausted: bool,
}

/// Streams all failure orders of `n` links.
pub fn enumerate_orders(n: usize) -> Result<OrderStream, Error> {
    OrderStream::new(n)
}

impl OrderStream {
    pub fn new(n: usize) -> Result<Self, Error> {
        Ok(OrderStream::over(BasePartitions::new(n)?))
    }

    fn over(bases: BasePartitions) -> Self {
        OrderStream { bases, blocks: Vec::new(), perm: Vec::new(), started: false, exhausted: false }
    }

    /// Starts at the `rank`-th order of the full stream (0-based).
    pub fn starting_at(n: usize, rank: u128) -> Result<Self, Error> {
        let counts = GrowthCounts::new(n)?;
        if rank >= counts.order_count() {
            let mut s = OrderStream::new(n)?;
            s.exhausted = true;
            return Ok(s);
        }
        let mut labels = [0u8; MAX_LINKS];
        let within = counts.unrank(true, rank, &mut labels[..n]);
        let mut bases = BasePartitions { n, labels, prefix_max: [0; MAX_LINKS], done: false };
        bases.refresh_prefix(0);
        let mut stream = OrderStream::over(bases);
        stream.load_base();
        let k = stream.blocks.len();
        unrank_permutation(within, k, &counts, &mut stream.perm);
        Ok(stream)
    }

    fn load_base(&mut self) -> bool {
        if !self.bases.next_into(&mut self.blocks) {
            self.exhausted = true;
            return false;
        }
        self.perm.clear();
        self.perm.extend(0..self.blocks.len());
        self.started = true;
        true
    }

    /// Writes the next order into `out` without allocating.
    pub fn next_into(&mut self, out: &mut FailureOrder) -> bool {
        if self.exhausted || (!self.started && !self.load_base()) {
            return false;
        }
        out.n = self.bases.n;
        out.blocks.clear();
        out.blocks.extend(self.perm.iter().map(|&i| self.blocks[i]));
        if !next_permutation(&mut self.perm) {
            self.load_base();
        }
        true
    }
}

impl Iterator for OrderStream {
    type Item = FailureOrder;

    fn next(&mut self) -> Option<FailureOrder> {
        let mut out = FailureOrder::empty(self.bases.n);
        self.next_into(&mut out).then_some(out)
    }
}

/// Lexicographic successor; false (and unchanged) at the last permutation.
pub(crate) fn next_permutation(perm: &mut [usize]) -> bool {
    let n = perm.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

fn unrank_permutation(mut rank: u128, k: usize, counts: &GrowthCounts, perm: &mut Vec<usize>) {
    let mut pool: Vec<usize> = (0..k).collect();
    perm.clear();
    for i in (0..k).rev() {
        let f = counts.factorial(i);
        let idx = (rank / f) as usize;
        rank %= f;
        perm.push(pool.remove(idx));
    }
}
