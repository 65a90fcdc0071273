//! Reductions between tree-pattern problems and Set Cover variants.
//!
//! Directed nTree and Directed Hamiltonicity reduce to batches of Δ-bounded
//! Set Cover instances, one per guess of pinned node images. Set Cover and
//! p-Partial Cover reduce to undirected kTree, one pattern tree per integer
//! partition. Each reduction is also wrapped as an end-to-end decision or
//! optimisation pipeline.

use alloc::vec::Vec;

use crate::instances::SetCoverInstance;
use crate::solvers::{cover_within, setcover_dp, Caps};
use crate::SolveError;

mod ham;
mod ktree;
mod ntree;
mod subtree_cover;

pub use ham::{ham_to_setcover, solve_ham_via_setcover, HamBatch};
pub use ktree::{
    build_host_graph, build_partial_host_graph, build_pattern_tree, pattern_tree_size, ppc_preprocess_large, ppc_to_ktree,
    ppc_via_ktree, setcover_preprocess_large, setcover_to_ktree, setcover_via_ktree, HostGraphBundle, LargeSplit,
    Role,
};
pub use ntree::{ntree_to_setcover, solve_ntree_via_setcover, NtreeBatch, NtreeVariant};
pub use subtree_cover::{check_cover_properties, tree_cover, CoverReport, Subtree, SubtreeCover};

/// One Set Cover instance of a reduction batch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Produced {
    pub instance: SetCoverInstance,
    /// A cover of exactly this many sets answers yes.
    pub target: usize,
    /// The guess that generated the instance: host images of the pinned
    /// tree nodes, or the representatives in cycle order.
    pub provenance: Vec<usize>,
    /// Per set, the host nodes it stands for: images of the subtree's nodes
    /// in sorted tree-node order, or the path from one representative to the
    /// next.
    pub origins: Vec<Vec<usize>>,
}

/// The caps a batch promises to respect, in log2 for the count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeclaredBounds {
    pub count_log2: f64,
    pub elements: f64,
}

/// Running totals of what a batch actually produced.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Realized {
    /// Guesses enumerated, including those discarded before producing.
    pub guesses: u64,
    /// Instances produced.
    pub produced: u64,
    pub max_elements: usize,
}

/// Backend answering "is there a cover with at most `target` sets?".
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoverSolver {
    /// Subset dynamic program; bounded by the ground-set cap.
    Dp(Caps),
    /// Branching search with a set-count budget.
    Search,
}

impl CoverSolver {
    /// Indices of a cover with at most `target` sets, if one exists.
    pub fn within(&self, inst: &SetCoverInstance, target: usize) -> Result<Option<Vec<usize>>, SolveError> {
        match self {
            CoverSolver::Dp(caps) => {
                let r = setcover_dp(inst, caps)?;
                Ok(match r.answer.optimum() {
                    Some(opt) if opt <= target => r.sets().map(<[usize]>::to_vec),
                    _ => None,
                })
            }
            CoverSolver::Search => {
                let r = cover_within(inst, target)?;
                Ok(if r.answer.is_yes() { r.sets().map(<[usize]>::to_vec) } else { None })
            }
        }
    }
}

/// Verdict of a reduction pipeline that decides a yes/no question.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineVerdict {
    pub yes: bool,
    /// Guess of the first accepting instance.
    pub provenance: Option<Vec<usize>>,
    /// Embedding or cycle decoded from the accepting cover.
    pub certificate: Option<Vec<usize>>,
    /// Whether the decoded certificate passes the independent checker.
    pub certificate_valid: bool,
    /// Whether the accepting cover consists of pairwise-disjoint sets.
    pub cover_disjoint: bool,
    /// Instances solved before the verdict.
    pub instances_solved: u64,
}

impl PipelineVerdict {
    fn no(instances_solved: u64) -> Self {
        PipelineVerdict {
            yes: false,
            provenance: None,
            certificate: None,
            certificate_valid: false,
            cover_disjoint: false,
            instances_solved,
        }
    }
}

/// Sorts `(set, origin)` pairs, drops repeated sets (keeping the first
/// origin) and builds the instance. The list order then matches the
/// instance's canonical set order.
fn assemble(n: usize, mut pairs: Vec<(Vec<usize>, Vec<usize>)>) -> (SetCoverInstance, Vec<Vec<usize>>) {
    for (s, _) in pairs.iter_mut() {
        s.sort_unstable();
    }
    pairs.sort();
    pairs.dedup_by(|a, b| a.0 == b.0);
    let (sets, origins): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
    let inst = SetCoverInstance::new(n, sets, crate::Variant::Plain).expect("reduction emits valid sets");
    (inst, origins)
}

/// Whether the chosen sets share no element.
pub fn pairwise_disjoint(inst: &SetCoverInstance, chosen: &[usize]) -> bool {
    let mut seen = alloc::vec![false; inst.n()];
    for &i in chosen {
        for &e in &inst.sets()[i] {
            if core::mem::replace(&mut seen[e], true) {
                return false;
            }
        }
    }
    true
}
