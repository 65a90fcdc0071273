//! Injective, orientation-respecting embeddings of a pattern tree into a host.
//!
//! The search walks the tree depth-first from a pinned node (or the root when
//! nothing is pinned). Only non-leaf nodes are branched on: once they are
//! placed, the remaining leaves are assigned by bipartite matching against the
//! free neighbours of their parents' images. Sibling subtrees with identical
//! shape are placed in increasing image order.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use super::{Answer, Certificate, SolveResult};
use crate::instances::{Digraph, EdgeDir, PatternTree};
use crate::SolveError;

/// A tree-in-host question with optional pinned images and forbidden hosts.
#[derive(Debug, Clone, Copy)]
pub struct EmbedQuery<'a> {
    pub host: &'a Digraph,
    pub tree: &'a PatternTree,
    /// `(tree node, host node)` pairs the embedding must extend.
    pub pins: &'a [(usize, usize)],
    /// Host nodes no unpinned tree node may use.
    pub forbidden: &'a [usize],
}

impl<'a> EmbedQuery<'a> {
    pub fn new(host: &'a Digraph, tree: &'a PatternTree) -> Self {
        EmbedQuery {
            host,
            tree,
            pins: &[],
            forbidden: &[],
        }
    }
}

/// Direction of the host arc between a node's image and its search parent's image.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Link {
    Any,
    /// parent image → node image
    Out,
    /// node image → parent image
    In,
}

fn link_candidates(host: &Digraph, link: Link, from: usize) -> &[usize] {
    match link {
        Link::Any => host.neighbors(from),
        Link::Out => host.out_neighbors(from),
        Link::In => host.in_neighbors(from),
    }
}

fn link_ok(host: &Digraph, link: Link, parent_img: usize, img: usize) -> bool {
    match link {
        Link::Any => host.has_arc(parent_img, img) || host.has_arc(img, parent_img),
        Link::Out => host.has_arc(parent_img, img),
        Link::In => host.has_arc(img, parent_img),
    }
}

/// Search order and static pruning data derived from a query.
struct Plan {
    order: Vec<usize>,
    up: Vec<Option<usize>>,
    link: Vec<Link>,
    kids: Vec<Vec<usize>>,
    /// (out-arcs, in-arcs, total degree) the image must support
    need: Vec<(usize, usize, usize)>,
    pin: Vec<Option<usize>>,
    /// earlier sibling with an identical unpinned subtree
    after: Vec<Option<usize>>,
}

impl Plan {
    fn build(q: &EmbedQuery) -> Result<Plan, SolveError> {
        let t = q.tree;
        let k = t.k();
        let hn = q.host.num_nodes();
        let mut pin = alloc::vec![None; k];
        let mut taken = alloc::vec![false; hn];
        let mut forbidden = alloc::vec![false; hn];
        for &f in q.forbidden {
            if f >= hn {
                return Err(SolveError::Precondition(format!("forbidden node {f} out of range")));
            }
            forbidden[f] = true;
        }
        for &(tv, hv) in q.pins {
            if tv >= k || hv >= hn {
                return Err(SolveError::Precondition(format!("pin {tv}->{hv} out of range")));
            }
            if pin[tv].is_some() || taken[hv] {
                return Err(SolveError::Precondition(format!("pins are not injective at {tv}->{hv}")));
            }
            pin[tv] = Some(hv);
            taken[hv] = true;
        }
        let start = q.pins.iter().map(|&(tv, _)| tv).min().unwrap_or(t.root());

        // link of every tree neighbour pair, seen from the search parent
        let link_between = |from: usize, to: usize| -> Link {
            if t.parent(to) == Some(from) {
                match t.dir(to) {
                    EdgeDir::Undirected => Link::Any,
                    EdgeDir::Down => Link::Out,
                    EdgeDir::Up => Link::In,
                }
            } else {
                match t.dir(from) {
                    EdgeDir::Undirected => Link::Any,
                    EdgeDir::Down => Link::In,
                    EdgeDir::Up => Link::Out,
                }
            }
        };

        let mut up = alloc::vec![None; k];
        let mut link = alloc::vec![Link::Any; k];
        let mut kids: Vec<Vec<usize>> = alloc::vec![Vec::new(); k];
        let mut seen = alloc::vec![false; k];
        let mut stack = alloc::vec![start];
        let mut pre = Vec::with_capacity(k);
        seen[start] = true;
        while let Some(u) = stack.pop() {
            pre.push(u);
            for w in t.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    up[w] = Some(u);
                    link[w] = link_between(u, w);
                    kids[u].push(w);
                }
            }
            kids[u].sort_unstable();
            for &w in kids[u].iter().rev() {
                stack.push(w);
            }
        }

        // subtree sizes, pin presence and shape codes, bottom-up
        let mut size = alloc::vec![1usize; k];
        let mut pinned_below = alloc::vec![false; k];
        let mut code = alloc::vec![0usize; k];
        let mut codes: BTreeMap<(Link, Vec<usize>), usize> = BTreeMap::new();
        let mut fresh = usize::MAX;
        for &u in pre.iter().rev() {
            pinned_below[u] |= pin[u].is_some();
            let mut child_codes: Vec<usize> = kids[u].iter().map(|&c| code[c]).collect();
            child_codes.sort_unstable();
            for &c in &kids[u] {
                size[u] += size[c];
                pinned_below[u] |= pinned_below[c];
            }
            code[u] = if pinned_below[u] {
                fresh -= 1;
                fresh
            } else {
                let next = codes.len();
                *codes.entry((link[u], child_codes)).or_insert(next)
            };
        }

        // visit pinned and larger subtrees first
        for u in 0..k {
            kids[u].sort_by_key(|&c| (!pinned_below[c], usize::MAX - size[c], code[c], c));
        }
        let mut order = Vec::with_capacity(k);
        let mut stack = alloc::vec![start];
        while let Some(u) = stack.pop() {
            order.push(u);
            for &w in kids[u].iter().rev() {
                stack.push(w);
            }
        }

        let mut after = alloc::vec![None; k];
        for u in 0..k {
            for pair in kids[u].windows(2) {
                if code[pair[0]] == code[pair[1]] && !pinned_below[pair[0]] {
                    after[pair[1]] = Some(pair[0]);
                }
            }
        }

        let mut need = alloc::vec![(0usize, 0usize, 0usize); k];
        for u in 0..k {
            let mut out = 0;
            let mut inn = 0;
            let nb = t.neighbors(u);
            for &w in &nb {
                // arc direction from u's point of view
                match link_between(u, w) {
                    Link::Out => out += 1,
                    Link::In => inn += 1,
                    Link::Any => {}
                }
            }
            need[u] = (out, inn, nb.len());
        }

        Ok(Plan {
            order,
            up,
            link,
            kids,
            need,
            pin,
            after,
        })
    }
}

struct Search<'a> {
    host: &'a Digraph,
    plan: Plan,
    reserved: Vec<bool>,
    used: Vec<bool>,
    image: Vec<usize>,
    internal: Vec<usize>,
    leaves: Vec<usize>,
    leaf_kids: Vec<usize>,
    explored: u64,
    budget: u64,
}

const UNSET: usize = usize::MAX;

impl<'a> Search<'a> {
    fn new(q: &EmbedQuery<'a>, plan: Plan, budget: u64, match_leaves: bool) -> Self {
        let hn = q.host.num_nodes();
        let k = q.tree.k();
        let mut reserved = alloc::vec![false; hn];
        for &f in q.forbidden {
            reserved[f] = true;
        }
        for &(_, hv) in q.pins {
            reserved[hv] = true;
        }
        let start = plan.order[0];
        let is_leaf = |u: usize| match_leaves && u != start && plan.pin[u].is_none() && plan.kids[u].is_empty();
        let internal: Vec<usize> = plan.order.iter().copied().filter(|&u| !is_leaf(u)).collect();
        let leaves: Vec<usize> = plan.order.iter().copied().filter(|&u| is_leaf(u)).collect();
        let mut leaf_kids = alloc::vec![0usize; k];
        for &l in &leaves {
            leaf_kids[plan.up[l].expect("leaf has a parent")] += 1;
        }
        Search {
            host: q.host,
            plan,
            reserved,
            used: alloc::vec![false; hn],
            image: alloc::vec![UNSET; k],
            internal,
            leaves,
            leaf_kids,
            explored: 0,
            budget,
        }
    }

    fn admissible(&self, v: usize, x: usize) -> bool {
        let host = self.host;
        let p = &self.plan;
        if self.used[x] {
            return false;
        }
        match p.pin[v] {
            Some(pinned) if pinned != x => return false,
            None if self.reserved[x] => return false,
            _ => {}
        }
        if let Some(u) = p.up[v] {
            if !link_ok(host, p.link[v], self.image[u], x) {
                return false;
            }
        }
        let (out, inn, total) = p.need[v];
        if host.out_neighbors(x).len() < out || host.in_neighbors(x).len() < inn || host.degree(x) < total {
            return false;
        }
        if let Some(prev) = p.after[v] {
            if self.image[prev] != UNSET && self.image[prev] >= x {
                return false;
            }
        }
        for &c in &p.kids[v] {
            if let Some(pc) = p.pin[c] {
                if !link_ok(host, p.link[c], x, pc) {
                    return false;
                }
            }
        }
        if self.leaf_kids[v] > 0 {
            let free = host
                .neighbors(x)
                .iter()
                .filter(|&&y| !self.used[y] && !self.reserved[y])
                .count();
            if free < self.leaf_kids[v] {
                return false;
            }
        }
        true
    }

    fn tick(&mut self) -> Result<(), SolveError> {
        self.explored += 1;
        if self.explored > self.budget {
            Err(SolveError::Budget(self.budget))
        } else {
            Ok(())
        }
    }

    fn candidates(&self, v: usize) -> Vec<usize> {
        let p = &self.plan;
        if let Some(x) = p.pin[v] {
            return alloc::vec![x];
        }
        match p.up[v] {
            None => (0..self.host.num_nodes()).collect(),
            Some(u) => link_candidates(self.host, p.link[v], self.image[u]).to_vec(),
        }
    }

    /// Places internal nodes from position `idx` on; `done` is called with
    /// each complete placement and returns `true` to stop.
    fn place(
        &mut self,
        idx: usize,
        done: &mut dyn FnMut(&mut Self) -> Result<bool, SolveError>,
    ) -> Result<bool, SolveError> {
        if idx == self.internal.len() {
            return done(self);
        }
        let v = self.internal[idx];
        for x in self.candidates(v) {
            self.tick()?;
            if !self.admissible(v, x) {
                continue;
            }
            self.image[v] = x;
            self.used[x] = true;
            let stop = self.place(idx + 1, done)?;
            self.used[x] = false;
            self.image[v] = UNSET;
            if stop {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Kuhn's augmenting-path matching of the deferred leaves.
    fn match_leaves(&mut self) -> Result<Option<Vec<usize>>, SolveError> {
        let host = self.host;
        let hn = host.num_nodes();
        let options: Vec<Vec<usize>> = self
            .leaves
            .iter()
            .map(|&l| {
                let u = self.plan.up[l].expect("leaf has a parent");
                link_candidates(host, self.plan.link[l], self.image[u])
                    .iter()
                    .copied()
                    .filter(|&y| !self.used[y] && !self.reserved[y])
                    .collect()
            })
            .collect();
        let mut owner = alloc::vec![UNSET; hn];
        let mut stamp = alloc::vec![0usize; hn];
        for i in 0..self.leaves.len() {
            self.tick()?;
            if !augment(i, i + 1, &options, &mut owner, &mut stamp) {
                return Ok(None);
            }
        }
        let mut image = self.image.clone();
        for (y, &i) in owner.iter().enumerate() {
            if i != UNSET {
                image[self.leaves[i]] = y;
            }
        }
        Ok(Some(image))
    }
}

fn augment(i: usize, round: usize, options: &[Vec<usize>], owner: &mut [usize], stamp: &mut [usize]) -> bool {
    for &y in &options[i] {
        if stamp[y] == round {
            continue;
        }
        stamp[y] = round;
        if owner[y] == UNSET || augment(owner[y], round, options, owner, stamp) {
            owner[y] = i;
            return true;
        }
    }
    false
}

/// Decides whether the pattern tree embeds into the host, extending the pins
/// and avoiding forbidden nodes. The certificate maps tree nodes to hosts.
///
/// Fails with [`SolveError::Budget`] after `budget` node expansions.
pub fn tree_embed_backtrack(q: &EmbedQuery, budget: u64) -> Result<SolveResult, SolveError> {
    let plan = Plan::build(q)?;
    if q.tree.k() > q.host.num_nodes() {
        return Ok(SolveResult::new(Answer::No, None, 0));
    }
    let mut search = Search::new(q, plan, budget, true);
    let mut found = None;
    search.place(0, &mut |s| {
        found = s.match_leaves()?;
        Ok(found.is_some())
    })?;
    let explored = search.explored;
    Ok(match found {
        Some(map) => SolveResult::new(Answer::Yes, Some(Certificate::Embedding(map)), explored),
        None => SolveResult::new(Answer::No, None, explored),
    })
}

/// Calls `visit` with embeddings of the query until it returns `true`.
///
/// Embeddings that differ only by permuting identical sibling subtrees are
/// reported once, so every reachable image set is visited at least once.
/// Returns the number of expansions.
pub fn for_each_embedding(
    q: &EmbedQuery,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> Result<u64, SolveError> {
    let plan = Plan::build(q)?;
    if q.tree.k() > q.host.num_nodes() {
        return Ok(0);
    }
    let mut search = Search::new(q, plan, u64::MAX, false);
    search.place(0, &mut |s| Ok(visit(&s.image)))?;
    Ok(search.explored)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::verify_embedding;
    use alloc::vec;

    #[test]
    fn single_node_fits_anywhere() {
        let g = Digraph::empty(3, false);
        let t = PatternTree::from_edges(1, &[]).unwrap();
        let r = tree_embed_backtrack(&EmbedQuery::new(&g, &t), 1000).unwrap();
        assert_eq!(r.answer, Answer::Yes);
    }

    #[test]
    fn orientation_mismatch_with_pin() {
        let g = Digraph::new(2, vec![(0, 1)], false).unwrap();
        let t = PatternTree::from_edges(2, &[(0, 1, EdgeDir::Down)]).unwrap();
        let q = EmbedQuery {
            pins: &[(0, 1)],
            ..EmbedQuery::new(&g, &t)
        };
        assert_eq!(tree_embed_backtrack(&q, 1000).unwrap().answer, Answer::No);
        let q = EmbedQuery {
            pins: &[(0, 0)],
            ..EmbedQuery::new(&g, &t)
        };
        assert_eq!(tree_embed_backtrack(&q, 1000).unwrap().answer, Answer::Yes);
    }

    #[test]
    fn directed_path_in_triangle_fails() {
        let g = Digraph::new(3, vec![(0, 1), (1, 2), (2, 0)], false).unwrap();
        let t = PatternTree::path(4, EdgeDir::Down);
        assert_eq!(tree_embed_backtrack(&EmbedQuery::new(&g, &t), 1000).unwrap().answer, Answer::No);
        let t3 = PatternTree::path(3, EdgeDir::Down);
        let r = tree_embed_backtrack(&EmbedQuery::new(&g, &t3), 1000).unwrap();
        assert!(verify_embedding(&g, &t3, r.embedding().unwrap()));
    }

    #[test]
    fn star_needs_distinct_leaves() {
        // star with 3 leaves in a host whose best node has degree 2
        let g = Digraph::new(4, vec![(0, 1), (0, 2), (2, 3)], true).unwrap();
        let t = PatternTree::star(3, EdgeDir::Undirected);
        assert_eq!(tree_embed_backtrack(&EmbedQuery::new(&g, &t), 1000).unwrap().answer, Answer::No);
        let g2 = g.with_edge(0, 3).unwrap();
        let r = tree_embed_backtrack(&EmbedQuery::new(&g2, &t), 1000).unwrap();
        assert!(verify_embedding(&g2, &t, r.embedding().unwrap()));
    }

    #[test]
    fn forbidden_nodes_are_avoided() {
        let g = Digraph::new(3, vec![(0, 1), (1, 2)], true).unwrap();
        let t = PatternTree::path(2, EdgeDir::Undirected);
        let q = EmbedQuery {
            forbidden: &[1],
            ..EmbedQuery::new(&g, &t)
        };
        assert_eq!(tree_embed_backtrack(&q, 1000).unwrap().answer, Answer::No);
    }

    #[test]
    fn bad_pins_rejected() {
        let g = Digraph::empty(2, false);
        let t = PatternTree::path(2, EdgeDir::Down);
        let q = EmbedQuery {
            pins: &[(0, 1), (1, 1)],
            ..EmbedQuery::new(&g, &t)
        };
        assert!(matches!(tree_embed_backtrack(&q, 10), Err(SolveError::Precondition(_))));
    }

    #[test]
    fn budget_exhaustion() {
        let g = Digraph::new(6, (0..6).flat_map(|u| (0..6).filter(move |&v| v != u).map(move |v| (u, v))).collect(), false)
            .unwrap();
        let t = PatternTree::path(6, EdgeDir::Down);
        assert!(matches!(
            tree_embed_backtrack(&EmbedQuery::new(&g, &t), 2),
            Err(SolveError::Budget(2))
        ));
    }

    #[test]
    fn enumeration_covers_all_image_sets() {
        // undirected path of 3 in a 4-cycle: image sets are the 4 consecutive triples
        let g = Digraph::new(4, vec![(0, 1), (1, 2), (2, 3), (0, 3)], true).unwrap();
        let t = PatternTree::path(3, EdgeDir::Undirected);
        let mut sets = Vec::new();
        for_each_embedding(&EmbedQuery::new(&g, &t), &mut |m| {
            let mut s = m.to_vec();
            s.sort_unstable();
            sets.push(s);
            false
        })
        .unwrap();
        sets.sort();
        sets.dedup();
        assert_eq!(sets, vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]);
    }
}
