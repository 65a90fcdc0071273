//! Directed nTree to Δ-bounded Set Cover.
//!
//! The pattern tree is cut into subtrees by [`tree_cover`] with
//! `l = ⌊Δ/3⌋ + 1`, so every subtree has at most Δ nodes. Each guess pins the
//! subtree roots (and, in the anchored variant, the roots' tree parents) to
//! host nodes. The produced instance has one element per unpinned host node
//! and one label per subtree; every way of embedding a subtree around its
//! pins becomes a set. A cover with one set per subtree is an embedding.

use alloc::format;
use alloc::vec::Vec;

use super::subtree_cover::{tree_cover, SubtreeCover};
use super::{assemble, pairwise_disjoint, CoverSolver, DeclaredBounds, PipelineVerdict, Produced, Realized};
use crate::instances::{Digraph, PatternTree};
use crate::solvers::{for_each_embedding, verify_embedding, EmbedQuery};
use crate::util::{falling_factorial, Arrangements};
use crate::SolveError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NtreeVariant {
    /// Pin only the subtree roots.
    RootsOnly,
    /// Also pin each non-global root's tree parent and check the tree edges
    /// between pinned nodes directly against the host.
    Anchored,
}

/// A subtree as a standalone pattern tree.
#[derive(Debug, Clone)]
struct Piece {
    /// Local id → tree node; local 0 is the subtree root.
    nodes: Vec<usize>,
    tree: PatternTree,
    /// `(local id, position in the pinned list)`
    pins: Vec<(usize, usize)>,
    /// Pinned nodes of this subtree other than its root, each contributing a
    /// fixed element to every set of the subtree.
    incidences: usize,
}

fn piece_of(t: &PatternTree, nodes: &[usize], root: usize, pinned: &[usize]) -> Piece {
    let mut order: Vec<usize> = Vec::with_capacity(nodes.len());
    order.push(root);
    order.extend(nodes.iter().copied().filter(|&v| v != root));
    let local = |v: usize| order.iter().position(|&x| x == v);
    let parent: Vec<Option<usize>> = order
        .iter()
        .map(|&v| if v == root { None } else { t.parent(v).and_then(local) })
        .collect();
    let dir = order.iter().map(|&v| t.dir(v)).collect();
    let tree = PatternTree::new(parent, dir).expect("a subtree of a tree is a tree");
    let pins: Vec<(usize, usize)> = order
        .iter()
        .enumerate()
        .filter_map(|(i, v)| pinned.binary_search(v).ok().map(|p| (i, p)))
        .collect();
    let incidences = pins.iter().filter(|&&(i, _)| i != 0).count();
    Piece {
        nodes: order,
        tree,
        pins,
        incidences,
    }
}

/// Lazily produced instances of the nTree reduction, one per admissible guess.
#[derive(Debug, Clone)]
pub struct NtreeBatch<'a> {
    g: &'a Digraph,
    t: &'a PatternTree,
    delta: usize,
    variant: NtreeVariant,
    cover: SubtreeCover,
    /// Pinned tree nodes, sorted.
    pinned: Vec<usize>,
    pieces: Vec<Piece>,
    guesses: Arrangements,
    realized: Realized,
    error: Option<SolveError>,
}

/// Sets up the reduction of `(g, t)` with subtree size bound `delta`.
///
/// Requires `|t| = |g|` and `delta >= 6`; `delta` may exceed the node count.
pub fn ntree_to_setcover<'a>(
    g: &'a Digraph,
    t: &'a PatternTree,
    delta: usize,
    variant: NtreeVariant,
) -> Result<NtreeBatch<'a>, SolveError> {
    if g.num_nodes() != t.k() {
        return Err(SolveError::Precondition(format!(
            "pattern has {} nodes but host has {}",
            t.k(),
            g.num_nodes()
        )));
    }
    if delta < 6 {
        return Err(SolveError::Precondition(format!(
            "subtree bound {delta} below 6 leaves l = ⌊Δ/3⌋+1 under 2"
        )));
    }
    let cover = tree_cover(t, delta / 3 + 1)?;
    let mut pinned = cover.roots();
    if variant == NtreeVariant::Anchored {
        let extra: Vec<usize> = pinned.iter().filter_map(|&r| t.parent(r)).collect();
        pinned.extend(extra);
        pinned.sort_unstable();
        pinned.dedup();
    }
    let pieces = cover
        .subtrees
        .iter()
        .map(|s| piece_of(t, &s.nodes, s.root, &pinned))
        .collect();
    let guesses = Arrangements::new(g.num_nodes(), pinned.len());
    Ok(NtreeBatch {
        g,
        t,
        delta,
        variant,
        cover,
        pinned,
        pieces,
        guesses,
        realized: Realized::default(),
        error: None,
    })
}

impl NtreeBatch<'_> {
    pub fn cover(&self) -> &SubtreeCover {
        &self.cover
    }

    pub fn pinned(&self) -> &[usize] {
        &self.pinned
    }

    pub fn target(&self) -> usize {
        self.cover.subtrees.len()
    }

    pub fn variant(&self) -> NtreeVariant {
        self.variant
    }

    /// Guesses the stream will enumerate, admissible or not.
    pub fn guess_count(&self) -> u128 {
        falling_factorial(self.g.num_nodes(), self.pinned.len())
    }

    /// `ñ^{9ñ/Δ'}` instances (`ñ^{18ñ/Δ'}` anchored) of at most `ñ + 9ñ/Δ'`
    /// elements, where `Δ' = 3⌊Δ/3⌋` is the largest multiple of three not
    /// above Δ (equal to Δ whenever three divides it).
    pub fn declared(&self) -> DeclaredBounds {
        let nt = self.t.k() as f64;
        let d = (3 * (self.delta / 3)) as f64;
        let factor = match self.variant {
            NtreeVariant::RootsOnly => 9.0,
            NtreeVariant::Anchored => 18.0,
        };
        DeclaredBounds {
            count_log2: factor * nt / d * libm::log2(nt),
            elements: nt + 9.0 * nt / d,
        }
    }

    pub fn realized(&self) -> Realized {
        self.realized
    }

    /// Error raised while producing, if any; the stream ends at the first one.
    pub fn take_error(&mut self) -> Option<SolveError> {
        self.error.take()
    }

    /// Anchored guesses must realise every tree edge whose ends are both pinned.
    fn pinned_edges_ok(&self, f: &[usize]) -> bool {
        let pos = |v: usize| self.pinned.binary_search(&v).ok();
        (0..self.t.k()).all(|c| match (self.t.parent(c).and_then(pos), pos(c)) {
            (Some(pp), Some(pc)) => self.t.edge_realised(c, self.g, f[pp], f[pc]),
            _ => true,
        })
    }

    fn produce(&self, f: &[usize]) -> Result<Produced, SolveError> {
        let n = self.g.num_nodes();
        let mut elem = alloc::vec![usize::MAX; n];
        let mut is_pinned_image = alloc::vec![false; n];
        for &x in f {
            is_pinned_image[x] = true;
        }
        let mut free = 0;
        for x in 0..n {
            if !is_pinned_image[x] {
                elem[x] = free;
                free += 1;
            }
        }
        let labels = free;
        let mut next_incidence = labels + self.pieces.len();
        let forbidden: Vec<usize> = f.to_vec();
        let mut pairs: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
        for (si, piece) in self.pieces.iter().enumerate() {
            let fixed: Vec<usize> = (next_incidence..next_incidence + piece.incidences).collect();
            next_incidence += piece.incidences;
            let pins: Vec<(usize, usize)> = piece.pins.iter().map(|&(i, p)| (i, f[p])).collect();
            let q = EmbedQuery {
                host: self.g,
                tree: &piece.tree,
                pins: &pins,
                forbidden: &forbidden,
            };
            for_each_embedding(&q, &mut |map| {
                let mut set = alloc::vec![labels + si];
                set.extend_from_slice(&fixed);
                set.extend(
                    map.iter()
                        .enumerate()
                        .filter(|(i, _)| !piece.pins.iter().any(|&(pi, _)| pi == *i))
                        .map(|(_, &x)| elem[x]),
                );
                // origin in sorted tree-node order
                let mut origin: Vec<(usize, usize)> =
                    piece.nodes.iter().zip(map.iter()).map(|(&v, &x)| (v, x)).collect();
                origin.sort_unstable();
                pairs.push((set, origin.into_iter().map(|(_, x)| x).collect()));
                false
            })?;
        }
        let (instance, origins) = assemble(next_incidence, pairs);
        Ok(Produced {
            instance,
            target: self.pieces.len(),
            provenance: f.to_vec(),
            origins,
        })
    }

    /// Embedding of the whole tree assembled from a cover's sets. The label
    /// element of a set tells which subtree it realises.
    pub fn decode(&self, p: &Produced, chosen: &[usize]) -> Vec<usize> {
        let labels = p.instance.n() - self.pieces.len() - self.pieces.iter().map(|x| x.incidences).sum::<usize>();
        let mut image = alloc::vec![usize::MAX; self.t.k()];
        for &c in chosen {
            let set = &p.instance.sets()[c];
            let Some(si) = set.iter().find(|&&e| e >= labels && e < labels + self.pieces.len()).map(|&e| e - labels)
            else {
                continue;
            };
            let mut nodes = self.cover.subtrees[si].nodes.clone();
            nodes.sort_unstable();
            for (v, &x) in nodes.iter().zip(p.origins[c].iter()) {
                image[*v] = x;
            }
        }
        image
    }
}

impl Iterator for NtreeBatch<'_> {
    type Item = Produced;

    fn next(&mut self) -> Option<Produced> {
        if self.error.is_some() {
            return None;
        }
        loop {
            let f = self.guesses.advance()?.to_vec();
            self.realized.guesses += 1;
            if self.variant == NtreeVariant::Anchored && !self.pinned_edges_ok(&f) {
                continue;
            }
            match self.produce(&f) {
                Ok(p) => {
                    self.realized.produced += 1;
                    self.realized.max_elements = self.realized.max_elements.max(p.instance.n());
                    return Some(p);
                }
                Err(e) => {
                    self.error = Some(e);
                    return None;
                }
            }
        }
    }
}

/// Yes iff some produced instance has a cover with exactly one set per
/// subtree. Stops at the first accepting instance.
pub fn solve_ntree_via_setcover(
    g: &Digraph,
    t: &PatternTree,
    delta: usize,
    variant: NtreeVariant,
    solver: &CoverSolver,
) -> Result<PipelineVerdict, SolveError> {
    let mut batch = ntree_to_setcover(g, t, delta, variant)?;
    let mut solved = 0;
    while let Some(p) = batch.next() {
        solved += 1;
        if let Some(chosen) = solver.within(&p.instance, p.target)? {
            let image = batch.decode(&p, &chosen);
            let valid = verify_embedding(g, t, &image);
            return Ok(PipelineVerdict {
                yes: true,
                cover_disjoint: pairwise_disjoint(&p.instance, &chosen),
                provenance: Some(p.provenance),
                certificate: Some(image),
                certificate_valid: valid,
                instances_solved: solved,
            });
        }
    }
    if let Some(e) = batch.take_error() {
        return Err(e);
    }
    Ok(PipelineVerdict::no(solved))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::EdgeDir;
    use alloc::vec;

    #[test]
    fn directed_path_in_directed_cycle() {
        let g = Digraph::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0)], false).unwrap();
        let t = PatternTree::path(4, EdgeDir::Down);
        for variant in [NtreeVariant::Anchored, NtreeVariant::RootsOnly] {
            let v = solve_ntree_via_setcover(&g, &t, 6, variant, &CoverSolver::Search).unwrap();
            assert!(v.yes && v.certificate_valid && v.cover_disjoint, "{variant:?}");
        }
    }

    #[test]
    fn out_star_does_not_fit_low_out_degree() {
        // every node has out-degree at most 2
        let g = Digraph::new(4, vec![(0, 1), (0, 2), (1, 2), (1, 3), (2, 3), (3, 0)], false).unwrap();
        let t = PatternTree::star(3, EdgeDir::Down);
        let v = solve_ntree_via_setcover(&g, &t, 6, NtreeVariant::Anchored, &CoverSolver::Search).unwrap();
        assert!(!v.yes);
    }

    #[test]
    fn single_node() {
        let g = Digraph::empty(1, false);
        let t = PatternTree::path(1, EdgeDir::Undirected);
        let v = solve_ntree_via_setcover(&g, &t, 6, NtreeVariant::Anchored, &CoverSolver::Search).unwrap();
        assert!(v.yes && v.certificate_valid);
    }

    #[test]
    fn small_delta_rejected() {
        let g = Digraph::empty(2, false);
        let t = PatternTree::path(2, EdgeDir::Undirected);
        assert!(ntree_to_setcover(&g, &t, 5, NtreeVariant::Anchored).is_err());
    }

    #[test]
    fn set_sizes_stay_within_delta() {
        let g = Digraph::new(7, (0..7).flat_map(|u| (0..7).filter(move |&v| v != u).map(move |v| (u, v))).collect(), false)
            .unwrap();
        let t = PatternTree::path(7, EdgeDir::Down);
        let batch = ntree_to_setcover(&g, &t, 6, NtreeVariant::Anchored).unwrap();
        for p in batch.take(20) {
            assert!(p.instance.max_set_size() <= 6);
        }
    }
}
