//! Reductions between Set Cover variants and tree-pattern subgraph
//! isomorphism (Directed nTree, Directed Hamiltonicity, kTree), together with
//! the exact exponential solvers that serve as pipeline endpoints and as
//! brute-force oracles.
//!
//! The crate is `no_std` and only needs `alloc`. Text formats, the command
//! line driver and the verification harness live in the `xcover` crate.

#![cfg_attr(not(test), no_std)]
#![allow(clippy::needless_range_loop)]

extern crate alloc;

pub mod analysis;
mod error;
pub mod generate;
pub mod instances;
pub mod partitions;
pub mod reductions;
pub mod solvers;
mod util;

pub use error::{InstanceError, SolveError};
pub use instances::{Digraph, EdgeDir, PatternTree, SetCoverInstance, Variant};
pub use partitions::{Partition, ShrunkPartition};
pub use solvers::{Answer, Caps, Certificate, SolveResult, Stats};
