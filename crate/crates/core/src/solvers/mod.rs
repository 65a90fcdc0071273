//! Exact solvers and brute-force oracles.
//!
//! These are the endpoints of the reduction pipelines and the ground truth of
//! the differential tests. Element-subset dynamic programs index their tables
//! by machine-word bitsets, so their widths are capped through [`Caps`].

use alloc::vec::Vec;

mod check;
mod colorcoding;
mod cover;
mod embed;
mod ham;

pub use check::{verify_cover, verify_embedding, verify_exact_cover, verify_ham_cycle, verify_partial_cover};
pub use colorcoding::{colorcoding_trials, ktree_colorcoding};
pub use cover::{
    cover_within, exactcover_solve, exactcover_with_large_sets, partialcover_dp, setcover_bruteforce,
    setcover_dp,
};
pub use embed::{for_each_embedding, tree_embed_backtrack, EmbedQuery};
pub use ham::heldkarp_ham;

/// Outcome of a solver run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Answer {
    Optimum(usize),
    Infeasible,
    Yes,
    No,
}

impl Answer {
    pub fn optimum(self) -> Option<usize> {
        match self {
            Answer::Optimum(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_yes(self) -> bool {
        matches!(self, Answer::Yes)
    }
}

/// A witness that an independent checker can accept or reject.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Certificate {
    /// Indices into the instance's set list.
    Sets(Vec<usize>),
    /// Nodes in cycle order, each once.
    Cycle(Vec<usize>),
    /// `map[t]` is the host node of tree node `t`.
    Embedding(Vec<usize>),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Stats {
    /// Solver-specific unit of work: DP states, search expansions or trials.
    pub explored: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SolveResult {
    pub answer: Answer,
    pub certificate: Option<Certificate>,
    pub stats: Stats,
}

impl SolveResult {
    pub(crate) fn new(answer: Answer, certificate: Option<Certificate>, explored: u64) -> Self {
        SolveResult {
            answer,
            certificate,
            stats: Stats { explored },
        }
    }

    pub fn sets(&self) -> Option<&[usize]> {
        match &self.certificate {
            Some(Certificate::Sets(s)) => Some(s),
            _ => None,
        }
    }

    pub fn embedding(&self) -> Option<&[usize]> {
        match &self.certificate {
            Some(Certificate::Embedding(e)) => Some(e),
            _ => None,
        }
    }
}

/// Size limits of the exponential solvers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Ground-set width of the element-subset dynamic programs.
    pub subset_n: usize,
    /// Number of sets the brute-force oracle will enumerate over.
    pub bruteforce_m: usize,
    /// Node count for Held–Karp.
    pub ham_n: usize,
    /// Pattern size for color coding.
    pub colorcoding_k: usize,
    /// Expansion budget of the backtracking tree embedder.
    pub embed_budget: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            subset_n: 24,
            bruteforce_m: 20,
            ham_n: 22,
            colorcoding_k: 16,
            embed_budget: 100_000_000,
        }
    }
}

impl Caps {
    pub(crate) fn check(what: &'static str, got: usize, limit: usize) -> Result<(), crate::SolveError> {
        if got > limit {
            Err(crate::SolveError::Capacity { what, got, limit })
        } else {
            Ok(())
        }
    }
}
