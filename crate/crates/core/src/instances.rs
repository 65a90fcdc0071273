//! Core data model: Set Cover instances, host digraphs and pattern trees.
//!
//! Elements and nodes are 0-based. All three types are validated and brought
//! into canonical form on construction, so structural equality is meaningful.

use alloc::format;
use alloc::vec::Vec;

use crate::error::InstanceError;
use crate::util::mask_of;

/// Which problem a [`SetCoverInstance`] poses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Minimum number of sets whose union is the ground set.
    Plain,
    /// Minimum number of pairwise-disjoint sets whose union is the ground set.
    Exact,
    /// Minimum number of sets whose union holds at least `p` elements.
    Partial(usize),
}

/// A ground set `0..n` and an ordered list of element subsets.
///
/// Sets are stored sorted, and the list of sets is sorted lexicographically.
/// Repeated sets are kept.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SetCoverInstance {
    n: usize,
    sets: Vec<Vec<usize>>,
    variant: Variant,
    delta: Option<usize>,
}

impl SetCoverInstance {
    pub fn new(n: usize, sets: Vec<Vec<usize>>, variant: Variant) -> Result<Self, InstanceError> {
        if let Variant::Partial(p) = variant {
            if p > n {
                return Err(InstanceError::TargetOutOfRange { p, n });
            }
        }
        let mut sets = sets;
        for (idx, set) in sets.iter_mut().enumerate() {
            set.sort_unstable();
            for w in set.windows(2) {
                if w[0] == w[1] {
                    return Err(InstanceError::RepeatedElement { element: w[0], set: idx });
                }
            }
            if let Some(&last) = set.last() {
                if last >= n {
                    return Err(InstanceError::ElementOutOfRange { element: last, n });
                }
            }
        }
        sets.sort();
        Ok(SetCoverInstance {
            n,
            sets,
            variant,
            delta: None,
        })
    }

    /// Tags the instance as Δ-bounded after checking every set against `delta`.
    pub fn with_delta(mut self, delta: usize) -> Result<Self, InstanceError> {
        if let Some((set, s)) = self.sets.iter().enumerate().find(|(_, s)| s.len() > delta) {
            return Err(InstanceError::SetTooLarge {
                set,
                size: s.len(),
                delta,
            });
        }
        self.delta = Some(delta);
        Ok(self)
    }

    /// The same sets under a different variant.
    pub fn with_variant(&self, variant: Variant) -> Result<Self, InstanceError> {
        let mut out = SetCoverInstance::new(self.n, self.sets.clone(), variant)?;
        out.delta = self.delta;
        Ok(out)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.sets.len()
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn delta(&self) -> Option<usize> {
        self.delta
    }

    /// Number of elements a solution must cover.
    pub fn coverage_target(&self) -> usize {
        match self.variant {
            Variant::Partial(p) => p,
            _ => self.n,
        }
    }

    pub fn max_set_size(&self) -> usize {
        self.sets.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Bitmask per set. Only meaningful for `n <= 64`.
    pub fn set_masks(&self) -> Vec<u64> {
        debug_assert!(self.n <= 64);
        self.sets.iter().map(|s| mask_of(s)).collect()
    }

    pub fn union_size(&self) -> usize {
        let mut seen = alloc::vec![false; self.n];
        for s in &self.sets {
            for &e in s {
                seen[e] = true;
            }
        }
        seen.into_iter().filter(|&b| b).count()
    }

    /// The instance with the sets at `keep` (indices into [`Self::sets`]).
    pub fn subcollection(&self, keep: &[usize]) -> Self {
        let sets = keep.iter().map(|&i| self.sets[i].clone()).collect();
        SetCoverInstance::new(self.n, sets, self.variant).expect("subcollection of a valid instance")
    }
}

/// How a pattern-tree edge is oriented relative to the parent/child relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeDir {
    Undirected,
    /// parent → child
    Down,
    /// child → parent
    Up,
}

/// Node-indexed graph with either directed arcs or undirected edges.
///
/// In undirected mode every stored pair `(u, v)` has `u < v` and stands for
/// both orientations. Anti-parallel arcs are allowed in directed mode.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Digraph {
    num_nodes: usize,
    edges: Vec<(usize, usize)>,
    undirected: bool,
    out_adj: Vec<Vec<usize>>,
    in_adj: Vec<Vec<usize>>,
    adj: Vec<Vec<usize>>,
}

impl Digraph {
    pub fn new(
        num_nodes: usize,
        edges: Vec<(usize, usize)>,
        undirected: bool,
    ) -> Result<Self, InstanceError> {
        let mut edges = edges;
        for e in edges.iter_mut() {
            let (u, v) = *e;
            for x in [u, v] {
                if x >= num_nodes {
                    return Err(InstanceError::NodeOutOfRange { node: x, num_nodes });
                }
            }
            if u == v {
                return Err(InstanceError::SelfLoop(u));
            }
            if undirected && u > v {
                *e = (v, u);
            }
        }
        edges.sort_unstable();
        for w in edges.windows(2) {
            if w[0] == w[1] {
                return Err(InstanceError::DuplicateEdge(w[0].0, w[0].1));
            }
        }
        let mut out_adj = alloc::vec![Vec::new(); num_nodes];
        let mut in_adj = alloc::vec![Vec::new(); num_nodes];
        for &(u, v) in &edges {
            out_adj[u].push(v);
            in_adj[v].push(u);
            if undirected {
                out_adj[v].push(u);
                in_adj[u].push(v);
            }
        }
        let mut adj = Vec::with_capacity(num_nodes);
        for u in 0..num_nodes {
            out_adj[u].sort_unstable();
            in_adj[u].sort_unstable();
            let mut all: Vec<usize> = out_adj[u].iter().chain(in_adj[u].iter()).copied().collect();
            all.sort_unstable();
            all.dedup();
            adj.push(all);
        }
        Ok(Digraph {
            num_nodes,
            edges,
            undirected,
            out_adj,
            in_adj,
            adj,
        })
    }

    pub fn empty(num_nodes: usize, undirected: bool) -> Self {
        Digraph::new(num_nodes, Vec::new(), undirected).expect("empty graph is valid")
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Stored pairs in canonical (sorted) order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn is_undirected(&self) -> bool {
        self.undirected
    }

    /// Whether an arc `u → v` is present (either orientation in undirected mode).
    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.out_adj[u].binary_search(&v).is_ok()
    }

    pub fn out_neighbors(&self, u: usize) -> &[usize] {
        &self.out_adj[u]
    }

    pub fn in_neighbors(&self, u: usize) -> &[usize] {
        &self.in_adj[u]
    }

    /// Nodes joined to `u` by an arc in either direction.
    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adj[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    /// Copy with one more edge; fails on duplicates or self-loops.
    pub fn with_edge(&self, u: usize, v: usize) -> Result<Self, InstanceError> {
        let mut edges = self.edges.clone();
        edges.push((u, v));
        Digraph::new(self.num_nodes, edges, self.undirected)
    }

    /// Copy without the stored pair at position `idx` of [`Self::edges`].
    pub fn without_edge(&self, idx: usize) -> Self {
        let mut edges = self.edges.clone();
        edges.remove(idx);
        Digraph::new(self.num_nodes, edges, self.undirected).expect("subgraph of a valid graph")
    }
}

/// A rooted tree on `k` nodes whose edges are either all undirected or all
/// oriented (in which case the underlying undirected graph is a tree, not
/// necessarily an arborescence).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PatternTree {
    root: usize,
    parent: Vec<Option<usize>>,
    dir: Vec<EdgeDir>,
    children: Vec<Vec<usize>>,
}

impl PatternTree {
    /// `parent[v]` is `None` exactly for the root; `dir[v]` describes the edge
    /// between `v` and its parent (ignored for the root).
    pub fn new(parent: Vec<Option<usize>>, dir: Vec<EdgeDir>) -> Result<Self, InstanceError> {
        let k = parent.len();
        if k == 0 {
            return Err(InstanceError::NotATree("a tree needs at least one node".into()));
        }
        if dir.len() != k {
            return Err(InstanceError::InvalidParams(format!(
                "{} orientations for {k} nodes",
                dir.len()
            )));
        }
        let roots: Vec<usize> = (0..k).filter(|&v| parent[v].is_none()).collect();
        if roots.len() != 1 {
            return Err(InstanceError::NotATree(format!("{} nodes without a parent", roots.len())));
        }
        let root = roots[0];
        for v in 0..k {
            if let Some(p) = parent[v] {
                if p >= k {
                    return Err(InstanceError::NodeOutOfRange { node: p, num_nodes: k });
                }
                if p == v {
                    return Err(InstanceError::SelfLoop(v));
                }
            }
        }
        // every node must reach the root within k steps
        for v in 0..k {
            let mut cur = v;
            let mut steps = 0;
            while let Some(p) = parent[cur] {
                cur = p;
                steps += 1;
                if steps > k {
                    return Err(InstanceError::NotATree(format!("cycle through node {v}")));
                }
            }
        }
        let mut dir = dir;
        dir[root] = EdgeDir::Undirected;
        let oriented = (0..k).filter(|&v| v != root && dir[v] != EdgeDir::Undirected).count();
        if oriented != 0 && oriented != k - 1 {
            return Err(InstanceError::MixedOrientation);
        }
        let mut children = alloc::vec![Vec::new(); k];
        for v in 0..k {
            if let Some(p) = parent[v] {
                children[p].push(v);
            }
        }
        Ok(PatternTree {
            root,
            parent,
            dir,
            children,
        })
    }

    /// Builds a tree from `(parent, child, orientation)` triples.
    pub fn from_edges(k: usize, edges: &[(usize, usize, EdgeDir)]) -> Result<Self, InstanceError> {
        if edges.len() + 1 != k {
            return Err(InstanceError::NotATree(format!(
                "{} edges for {k} nodes",
                edges.len()
            )));
        }
        let mut parent = alloc::vec![None; k];
        let mut dir = alloc::vec![EdgeDir::Undirected; k];
        for &(p, c, d) in edges {
            for x in [p, c] {
                if x >= k {
                    return Err(InstanceError::NodeOutOfRange { node: x, num_nodes: k });
                }
            }
            if parent[c].is_some() {
                return Err(InstanceError::NotATree(format!("node {c} has two parents")));
            }
            parent[c] = Some(p);
            dir[c] = d;
        }
        PatternTree::new(parent, dir)
    }

    /// Path `0 - 1 - ... - (k-1)` rooted at 0.
    pub fn path(k: usize, dir: EdgeDir) -> Self {
        let parent = (0..k).map(|v| v.checked_sub(1)).collect();
        PatternTree::new(parent, alloc::vec![dir; k]).expect("path is a tree")
    }

    /// Star with center 0 and `leaves` leaves.
    pub fn star(leaves: usize, dir: EdgeDir) -> Self {
        let parent = (0..=leaves).map(|v| if v == 0 { None } else { Some(0) }).collect();
        PatternTree::new(parent, alloc::vec![dir; leaves + 1]).expect("star is a tree")
    }

    pub fn k(&self) -> usize {
        self.parent.len()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn parents(&self) -> &[Option<usize>] {
        &self.parent
    }

    /// Orientation of the edge between `v` and its parent.
    pub fn dir(&self, v: usize) -> EdgeDir {
        self.dir[v]
    }

    /// Children in ascending id order.
    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn is_oriented(&self) -> bool {
        self.dir.iter().any(|&d| d != EdgeDir::Undirected)
    }

    /// Tree neighbours of `v` (parent and children).
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self.parent[v].into_iter().collect();
        out.extend_from_slice(&self.children[v]);
        out
    }

    /// `(parent, child, orientation)` triples sorted by `(parent, child)`.
    pub fn edges(&self) -> Vec<(usize, usize, EdgeDir)> {
        let mut out: Vec<_> = (0..self.k())
            .filter_map(|c| self.parent[c].map(|p| (p, c, self.dir[c])))
            .collect();
        out.sort_unstable_by_key(|&(p, c, _)| (p, c));
        out
    }

    /// Whether the tree edge between `child` and its parent is realised by the
    /// host images `hp` (parent) and `hc` (child).
    pub fn edge_realised(&self, child: usize, host: &Digraph, hp: usize, hc: usize) -> bool {
        match self.dir[child] {
            EdgeDir::Undirected => host.has_arc(hp, hc) || host.has_arc(hc, hp),
            EdgeDir::Down => host.has_arc(hp, hc),
            EdgeDir::Up => host.has_arc(hc, hp),
        }
    }

    /// The same tree re-rooted at `new_root`, keeping each edge's orientation.
    pub fn rerooted(&self, new_root: usize) -> Self {
        let k = self.k();
        let mut parent = alloc::vec![None; k];
        let mut dir = alloc::vec![EdgeDir::Undirected; k];
        let mut stack = alloc::vec![new_root];
        let mut seen = alloc::vec![false; k];
        seen[new_root] = true;
        while let Some(u) = stack.pop() {
            for w in self.neighbors(u) {
                if seen[w] {
                    continue;
                }
                seen[w] = true;
                parent[w] = Some(u);
                // original edge between u and w
                dir[w] = if self.parent[w] == Some(u) {
                    self.dir[w]
                } else {
                    match self.dir[u] {
                        EdgeDir::Undirected => EdgeDir::Undirected,
                        EdgeDir::Down => EdgeDir::Up,
                        EdgeDir::Up => EdgeDir::Down,
                    }
                };
                stack.push(w);
            }
        }
        PatternTree::new(parent, dir).expect("re-rooting preserves tree structure")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn canonical_set_order() {
        let inst = SetCoverInstance::new(3, vec![vec![2, 1], vec![1, 0]], Variant::Plain).unwrap();
        assert_eq!(inst.sets(), &[vec![0, 1], vec![1, 2]]);
    }

    #[test]
    fn rejects_bad_sets() {
        assert!(matches!(
            SetCoverInstance::new(2, vec![vec![0, 2]], Variant::Plain),
            Err(InstanceError::ElementOutOfRange { element: 2, n: 2 })
        ));
        assert!(matches!(
            SetCoverInstance::new(2, vec![vec![1, 1]], Variant::Plain),
            Err(InstanceError::RepeatedElement { .. })
        ));
        assert!(SetCoverInstance::new(2, vec![], Variant::Partial(3)).is_err());
        let inst = SetCoverInstance::new(3, vec![vec![0, 1, 2]], Variant::Plain).unwrap();
        assert!(inst.clone().with_delta(2).is_err());
        assert_eq!(inst.with_delta(3).unwrap().delta(), Some(3));
    }

    #[test]
    fn digraph_modes() {
        let g = Digraph::new(2, vec![(0, 1), (1, 0)], false).unwrap();
        assert!(g.has_arc(0, 1) && g.has_arc(1, 0));
        assert_eq!(g.neighbors(0), &[1]);
        assert!(Digraph::new(2, vec![(0, 1), (1, 0)], true).is_err());
        assert!(Digraph::new(2, vec![(1, 1)], false).is_err());
        let u = Digraph::new(3, vec![(2, 0)], true).unwrap();
        assert_eq!(u.edges(), &[(0, 2)]);
        assert!(u.has_arc(0, 2) && u.has_arc(2, 0));
    }

    #[test]
    fn tree_validation() {
        assert!(PatternTree::new(vec![None, Some(2), Some(1)], vec![EdgeDir::Undirected; 3]).is_err());
        assert!(PatternTree::new(vec![None, None], vec![EdgeDir::Undirected; 2]).is_err());
        assert!(matches!(
            PatternTree::new(
                vec![None, Some(0), Some(0)],
                vec![EdgeDir::Undirected, EdgeDir::Down, EdgeDir::Undirected]
            ),
            Err(InstanceError::MixedOrientation)
        ));
        let t = PatternTree::from_edges(1, &[]).unwrap();
        assert_eq!(t.k(), 1);
    }

    #[test]
    fn reroot_keeps_arcs() {
        // 0 -> 1 <- 2
        let t = PatternTree::from_edges(3, &[(0, 1, EdgeDir::Down), (1, 2, EdgeDir::Up)]).unwrap();
        let r = t.rerooted(2);
        assert_eq!(r.root(), 2);
        // 2 -> 1 as a Down edge from 2, then 1 <- 0 is Up from 1
        assert_eq!(r.parent(1), Some(2));
        assert_eq!(r.dir(1), EdgeDir::Down);
        assert_eq!(r.parent(0), Some(1));
        assert_eq!(r.dir(0), EdgeDir::Up);
    }
}
