//! File formats, parallel drivers and artifacts for the `tsig` command.
//!
//! The algorithms live in [`tsig_core`]; this crate adds what needs the
//! standard library: reading graph files, running the exact engine and the
//! sampler on worker threads, and writing JSON/CSV results with a run
//! manifest.

pub mod artifact;
pub mod fixtures;
pub mod graph_file;
pub mod nstar;
pub mod parallel;

pub use graph_file::{parse_network, GraphFileError};
pub use tsig_core as core;
