//! Exact counting, enumeration and uniform sampling of failure orders.
//!
//! A failure order over links `1..=n` is an ordered set partition. There are
//! `k!·S(n,k)` orders with `k` blocks and the ordered Bell (Fubini) number
//! `n*` in total.

mod counting;
pub(crate) mod orders;
pub(crate) mod random;

pub use counting::{binomial, factorial, n_star, n_star_alternating_sum, stirling2, StratumTable};
pub use orders::{
    base_partition_count, enumerate_orders, BasePartitions, FailureOrder, OrderStream, MAX_ENUMERATION_LINKS,
};
pub use random::{random_order, random_partition_with_k_blocks};
