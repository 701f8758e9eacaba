use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::Rng;

use super::counting::{stirling_rows, StratumTable};
use super::orders::FailureOrder;
use crate::graph::{LinkSet, MAX_LINKS};
use crate::Error;

/// Exact integer weights that can be drawn uniformly below a bound.
pub(crate) trait Weight: Ord + Clone {
    fn uniform_below<R: Rng + ?Sized>(rng: &mut R, bound: &Self) -> Self;
}

impl Weight for u128 {
    fn uniform_below<R: Rng + ?Sized>(rng: &mut R, bound: &u128) -> u128 {
        rng.random_range(0..*bound)
    }
}

impl Weight for BigUint {
    /// Rejection sampling on whole 32-bit digits.
    fn uniform_below<R: Rng + ?Sized>(rng: &mut R, bound: &BigUint) -> BigUint {
        let bits = bound.bits() as usize;
        let words = bits.div_ceil(32);
        let top_mask = match bits % 32 {
            0 => u32::MAX,
            r => (1u32 << r) - 1,
        };
        let mut digits = alloc::vec![0u32; words];
        loop {
            for d in digits.iter_mut() {
                *d = rng.next_u32();
            }
            digits[words - 1] &= top_mask;
            let v = BigUint::from_slice(&digits);
            if &v < bound {
                return v;
            }
        }
    }
}

/// Cumulative strata and the Stirling triangle in one integer width.
#[derive(Clone, Debug)]
pub(crate) struct Tables<W> {
    /// `cumulative[k − 1] = m_1 + … + m_k`
    cumulative: Vec<W>,
    /// `stirling[i][j] = S(i, j)`
    stirling: Vec<Vec<W>>,
}

#[derive(Clone, Debug)]
pub(crate) enum WeightTables {
    Narrow(Tables<u128>),
    Wide(Tables<BigUint>),
}

impl WeightTables {
    pub(crate) fn new(n: usize, strata: &[BigUint], force_wide: bool) -> Self {
        let mut acc = BigUint::default();
        let cumulative: Vec<BigUint> = strata
            .iter()
            .map(|m| {
                acc += m;
                acc.clone()
            })
            .collect();
        let stirling = stirling_rows(n);
        // S(n, k) <= n*, so the narrow form fits whenever n* does.
        let fits = !force_wide && acc.to_u128().is_some();
        if fits {
            let narrow = |v: &BigUint| v.to_u128().expect("checked above");
            WeightTables::Narrow(Tables {
                cumulative: cumulative.iter().map(narrow).collect(),
                stirling: stirling.iter().map(|row| row.iter().map(narrow).collect()).collect(),
            })
        } else {
            WeightTables::Wide(Tables { cumulative, stirling })
        }
    }
}

impl<W: Weight> Tables<W> {
    fn block_count<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let total = self.cumulative.last().expect("n >= 1");
        let u = W::uniform_below(rng, total);
        self.cumulative.iter().position(|c| &u < c).expect("u < n*") + 1
    }

    /// Uniform partition of `1..=n` into `k` blocks, blocks sorted by
    /// smallest link.
    ///
    /// Walks elements `n, n−1, …, 1`: element `i` with `j` blocks still to
    /// fill opens its own block with probability `S(i−1, j−1) / S(i, j)`,
    /// otherwise joins one of the `j` blocks of the first `i − 1` elements
    /// uniformly. Choices are replayed forwards to build the blocks.
    fn partition<R: Rng + ?Sized>(&self, n: usize, k: usize, rng: &mut R, out: &mut Vec<LinkSet>) {
        // 0 = opens a new block, c + 1 = joins block c
        let mut choice = [0u8; MAX_LINKS + 1];
        let mut j = k;
        for i in (1..=n).rev() {
            if j == i {
                // the remaining elements are all singletons
                break;
            }
            let u = W::uniform_below(rng, &self.stirling[i][j]);
            if j >= 1 && u < self.stirling[i - 1][j - 1] {
                j -= 1;
            } else {
                choice[i] = rng.random_range(0..j) as u8 + 1;
            }
        }
        out.clear();
        for (i, &c) in choice.iter().enumerate().take(n + 1).skip(1) {
            if c == 0 {
                out.push(LinkSet::EMPTY);
                let last = out.len() - 1;
                out[last].insert(i);
            } else {
                out[c as usize - 1].insert(i);
            }
        }
        debug_assert_eq!(out.len(), k);
    }
}

fn check_partition_args(n: usize, k: usize) -> Result<(), Error> {
    if k == 0 || k > n || n > MAX_LINKS {
        return Err(Error::Argument(alloc::format!("need 1 <= k <= n <= {MAX_LINKS}, got n={n}, k={k}")));
    }
    Ok(())
}

/// A set partition of `1..=n` into exactly `k` blocks, uniform over all
/// `S(n,k)` of them. Blocks are sorted by smallest link.
pub fn random_partition_with_k_blocks<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Result<Vec<LinkSet>, Error> {
    check_partition_args(n, k)?;
    let table = StratumTable::new(n)?;
    let mut out = Vec::with_capacity(k);
    match &table.weights {
        WeightTables::Narrow(t) => t.partition(n, k, rng, &mut out),
        WeightTables::Wide(t) => t.partition(n, k, rng, &mut out),
    }
    Ok(out)
}

/// A failure order uniform over all `n*` orders: the block count `k` with
/// probability `m_k / n*`, a uniform `k`-block partition, then a uniform
/// shuffle of the blocks.
pub fn random_order<R: Rng + ?Sized>(table: &StratumTable, rng: &mut R) -> FailureOrder {
    let mut out = FailureOrder::empty(table.links());
    random_order_into(table, rng, &mut out);
    out
}

pub(crate) fn random_order_into<R: Rng + ?Sized>(table: &StratumTable, rng: &mut R, out: &mut FailureOrder) {
    let n = table.links();
    let blocks = out.blocks_mut();
    match &table.weights {
        WeightTables::Narrow(t) => {
            let k = t.block_count(rng);
            t.partition(n, k, rng, blocks);
        }
        WeightTables::Wide(t) => {
            let k = t.block_count(rng);
            t.partition(n, k, rng, blocks);
        }
    }
    blocks.shuffle(rng);
}
