//! Exact and Monte Carlo t-signatures of two-state networks.
//!
//! A network is a multigraph with perfectly reliable nodes, failing links and
//! a terminal set. It is up while all terminals lie in one component. Links
//! fail in batches: a *failure order* is an ordered set partition of the link
//! set, and for each order `M` is the smallest number of link failures at
//! which the network goes down. Over all orders taken as equally likely the
//! distribution of `M` is the t-signature; restricted to permutations (all
//! blocks singletons) it is the classic signature.
//!
//! The crate is `no_std` and only needs `alloc`. Thread pools, file formats
//! and the command line live in the `tsig` companion crate.
#![no_std]

extern crate alloc;
#[cfg(any(test, feature = "std"))]
extern crate std;

pub mod combinatorics;
pub mod engine;
mod error;
pub mod graph;
pub mod reliability;
pub mod sampling;

pub use combinatorics::{FailureOrder, StratumTable};
pub use engine::{MMode, MResult, Mode, SignatureVector};
pub use error::Error;
pub use graph::{LinkSet, Network, NetworkError, Path};
pub use reliability::{CountingModel, Lifetime, ReliabilityCurve};
pub use sampling::{SampledTSignature, SamplingPlan};
