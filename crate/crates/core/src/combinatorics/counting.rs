use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use super::random::WeightTables;
use crate::Error;

/// `n choose k`.
pub fn binomial(n: usize, k: usize) -> Result<BigUint, Error> {
    if k > n {
        return Err(Error::Argument(alloc::format!("binomial({n}, {k}) needs k <= n")));
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    Ok(acc)
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// Rows `0..=n` of the Stirling triangle of the second kind.
pub(crate) fn stirling_rows(n: usize) -> Vec<Vec<BigUint>> {
    let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(n + 1);
    rows.push(vec![BigUint::one()]);
    for i in 1..=n {
        let prev = &rows[i - 1];
        let mut row = vec![BigUint::zero(); i + 1];
        for k in 1..=i {
            let mut v = if k < i { &prev[k] * k } else { BigUint::zero() };
            v += &prev[k - 1];
            row[k] = v;
        }
        rows.push(row);
    }
    rows
}

/// Number of partitions of an `n`-set into exactly `k` nonempty blocks,
/// from `S(n,k) = k·S(n−1,k) + S(n−1,k−1)`.
pub fn stirling2(n: usize, k: usize) -> Result<BigUint, Error> {
    if k > n {
        return Err(Error::Argument(alloc::format!("stirling2({n}, {k}) needs k <= n")));
    }
    Ok(stirling_rows(n).swap_remove(n).swap_remove(k))
}

/// `n* = Σ_{j=1..n} Σ_{k=0..j} C(j,k)·(−1)^k·(j−k)^n`, evaluated literally in
/// signed arbitrary precision.
pub fn n_star_alternating_sum(n: usize) -> Result<BigUint, Error> {
    if n == 0 {
        return Err(Error::Argument("n* is defined for n >= 1".into()));
    }
    let mut total = BigInt::zero();
    for j in 1..=n {
        for k in 0..=j {
            let term = BigInt::from(binomial(j, k)?) * BigInt::from(j - k).pow(n as u32);
            if k % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
    }
    total.to_biguint().ok_or(Error::Contract("alternating sum came out negative"))
}

/// Number of failure orders of `n` links (the ordered Bell number).
///
/// Computed from the alternating double sum and checked against
/// `Σ_k k!·S(n,k)`.
pub fn n_star(n: usize) -> Result<BigUint, Error> {
    let value = n_star_alternating_sum(n)?;
    let strata = strata(n);
    assert_eq!(value, strata.iter().sum::<BigUint>(), "ordered Bell identity failed for n={n}");
    Ok(value)
}

/// `m_k = k!·S(n,k)` for `k = 1..=n`.
fn strata(n: usize) -> Vec<BigUint> {
    let row = stirling_rows(n).swap_remove(n);
    let mut fact = BigUint::one();
    let mut m = Vec::with_capacity(n);
    for (k, s) in row.into_iter().enumerate().skip(1) {
        fact *= k;
        m.push(&fact * s);
    }
    m
}

/// Per-block-count weights `m_k = k!·S(n,k)` and their sum `n*`.
///
/// Also carries the integer tables [`super::random_order`] needs to draw
/// orders uniformly.
#[derive(Clone, Debug)]
pub struct StratumTable {
    n: usize,
    m: Vec<BigUint>,
    n_star: BigUint,
    pub(crate) weights: WeightTables,
}

impl StratumTable {
    pub fn new(n: usize) -> Result<Self, Error> {
        Self::build(n, false)
    }

    pub(crate) fn build(n: usize, force_wide: bool) -> Result<Self, Error> {
        if n == 0 {
            return Err(Error::Argument("a stratum table needs n >= 1".into()));
        }
        let m = strata(n);
        let n_star: BigUint = m.iter().sum();
        let weights = WeightTables::new(n, &m, force_wide);
        Ok(StratumTable { n, m, n_star, weights })
    }

    /// Number of links.
    pub fn links(&self) -> usize {
        self.n
    }

    /// `m_k` for `k = 1..=n`, index `k − 1`.
    pub fn strata(&self) -> &[BigUint] {
        &self.m
    }

    /// `m_k`, or zero outside `1..=n`.
    pub fn stratum(&self, k: usize) -> BigUint {
        match k {
            1.. if k <= self.n => self.m[k - 1].clone(),
            _ => BigUint::zero(),
        }
    }

    pub fn n_star(&self) -> &BigUint {
        &self.n_star
    }
}
