//! Seeded random and planted instance generators.
//!
//! Every generator is a pure function of its parameters and seed. Planted
//! generators return a certificate alongside the instance.

use alloc::format;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::instances::{Digraph, EdgeDir, PatternTree, SetCoverInstance, Variant};
use crate::InstanceError;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn invalid(msg: alloc::string::String) -> InstanceError {
    InstanceError::InvalidParams(msg)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SetParams {
    pub n: usize,
    pub m: usize,
    /// Each set draws its size uniformly from `1..=max_set_size`.
    pub max_set_size: usize,
    /// Reject repeated sets and redraw.
    pub distinct: bool,
}

fn random_set(r: &mut ChaCha8Rng, n: usize, max_size: usize) -> Vec<usize> {
    let size = r.gen_range(1..=max_size);
    let mut all: Vec<usize> = (0..n).collect();
    let (picked, _) = all.partial_shuffle(r, size);
    let mut s = picked.to_vec();
    s.sort_unstable();
    s
}

/// Number of nonempty subsets of `0..n` with at most `max` elements, saturating.
fn distinct_capacity(n: usize, max: usize) -> u128 {
    let mut total: u128 = 0;
    let mut c: u128 = 1;
    for s in 1..=max {
        c = c.saturating_mul((n + 1 - s) as u128) / s as u128;
        total = total.saturating_add(c);
    }
    total
}

pub fn random_setcover(params: SetParams, variant: Variant, seed: u64) -> Result<SetCoverInstance, InstanceError> {
    let SetParams {
        n,
        m,
        max_set_size,
        distinct,
    } = params;
    if m > 0 && (max_set_size == 0 || max_set_size > n) {
        return Err(invalid(format!("max set size {max_set_size} outside [1, {n}]")));
    }
    if distinct && distinct_capacity(n, max_set_size) < m as u128 {
        return Err(invalid(format!(
            "{m} distinct sets of size at most {max_set_size} do not exist over {n} elements"
        )));
    }
    let mut r = rng(seed);
    let mut sets: Vec<Vec<usize>> = Vec::with_capacity(m);
    while sets.len() < m {
        let s = random_set(&mut r, n, max_set_size);
        if distinct && sets.contains(&s) {
            continue;
        }
        sets.push(s);
    }
    SetCoverInstance::new(n, sets, variant)
}

/// Each ordered pair (unordered in undirected mode) becomes an edge with
/// probability `edge_probability`.
pub fn random_digraph(n: usize, edge_probability: f64, undirected: bool, seed: u64) -> Result<Digraph, InstanceError> {
    if !(0.0..=1.0).contains(&edge_probability) {
        return Err(invalid(format!("edge probability {edge_probability} outside [0, 1]")));
    }
    let mut r = rng(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u == v || (undirected && v < u) {
                continue;
            }
            if r.gen_bool(edge_probability) {
                edges.push((u, v));
            }
        }
    }
    Digraph::new(n, edges, undirected)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeOrientation {
    Undirected,
    /// Every edge points from parent to child.
    Down,
    /// Each edge independently points down or up.
    Random,
}

/// Uniform labelled tree (via a random Prüfer sequence), rooted at a uniform node.
pub fn random_tree(k: usize, orientation: TreeOrientation, seed: u64) -> Result<PatternTree, InstanceError> {
    let mut r = rng(seed);
    random_tree_with(&mut r, k, orientation)
}

fn random_tree_with(r: &mut ChaCha8Rng, k: usize, orientation: TreeOrientation) -> Result<PatternTree, InstanceError> {
    if k == 0 {
        return Err(invalid("a tree needs at least one node".into()));
    }
    let mut adj: Vec<Vec<usize>> = alloc::vec![Vec::new(); k];
    if k == 2 {
        adj[0].push(1);
        adj[1].push(0);
    } else if k > 2 {
        let code: Vec<usize> = (0..k - 2).map(|_| r.gen_range(0..k)).collect();
        let mut degree = alloc::vec![1usize; k];
        for &c in &code {
            degree[c] += 1;
        }
        for &c in &code {
            let leaf = (0..k).find(|&v| degree[v] == 1).expect("a leaf remains");
            adj[leaf].push(c);
            adj[c].push(leaf);
            degree[leaf] -= 1;
            degree[c] -= 1;
        }
        let last: Vec<usize> = (0..k).filter(|&v| degree[v] == 1).collect();
        adj[last[0]].push(last[1]);
        adj[last[1]].push(last[0]);
    }
    let root = r.gen_range(0..k);
    let mut parent = alloc::vec![None; k];
    let mut dir = alloc::vec![EdgeDir::Undirected; k];
    let mut seen = alloc::vec![false; k];
    let mut stack = alloc::vec![root];
    seen[root] = true;
    while let Some(u) = stack.pop() {
        for &w in &adj[u] {
            if !seen[w] {
                seen[w] = true;
                parent[w] = Some(u);
                stack.push(w);
            }
        }
    }
    for v in (0..k).filter(|&v| v != root) {
        dir[v] = match orientation {
            TreeOrientation::Undirected => EdgeDir::Undirected,
            TreeOrientation::Down => EdgeDir::Down,
            TreeOrientation::Random => {
                if r.gen_bool(0.5) {
                    EdgeDir::Down
                } else {
                    EdgeDir::Up
                }
            }
        };
    }
    PatternTree::new(parent, dir)
}

/// Adds up to `extra` new arcs chosen uniformly among the absent ones.
fn sprinkle(r: &mut ChaCha8Rng, n: usize, edges: &mut Vec<(usize, usize)>, extra: usize, undirected: bool) {
    let key = |u: usize, v: usize| if undirected && u > v { (v, u) } else { (u, v) };
    let mut absent: Vec<(usize, usize)> = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && (!undirected || u < v) && !edges.contains(&key(u, v)) {
                absent.push((u, v));
            }
        }
    }
    absent.shuffle(r);
    edges.extend(absent.into_iter().take(extra));
}

/// A digraph containing the Hamiltonian cycle returned alongside it, plus
/// `extra_edges` random arcs.
pub fn planted_ham_cycle(n: usize, extra_edges: usize, seed: u64) -> Result<(Digraph, Vec<usize>), InstanceError> {
    if n < 2 {
        return Err(invalid(format!("a Hamiltonian cycle needs at least 2 nodes, got {n}")));
    }
    let mut r = rng(seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut r);
    let mut edges: Vec<(usize, usize)> = (0..n).map(|i| (order[i], order[(i + 1) % n])).collect();
    edges.sort_unstable();
    edges.dedup();
    sprinkle(&mut r, n, &mut edges, extra_edges, false);
    let g = Digraph::new(n, edges, false)?;
    // report the cycle starting at node 0
    let start = order.iter().position(|&v| v == 0).expect("node 0 is on the cycle");
    order.rotate_left(start);
    Ok((g, order))
}

/// A host on `host_n` nodes that contains a random `k`-node tree at the
/// returned map, plus `extra_edges` random arcs. Oriented trees get a
/// directed host, undirected trees an undirected one.
pub fn planted_tree(
    k: usize,
    host_n: usize,
    extra_edges: usize,
    orientation: TreeOrientation,
    seed: u64,
) -> Result<(Digraph, PatternTree, Vec<usize>), InstanceError> {
    if k > host_n {
        return Err(invalid(format!("tree of {k} nodes does not fit a host of {host_n}")));
    }
    let mut r = rng(seed);
    let t = random_tree_with(&mut r, k, orientation)?;
    let mut hosts: Vec<usize> = (0..host_n).collect();
    hosts.shuffle(&mut r);
    let map: Vec<usize> = hosts[..k].to_vec();
    let undirected = orientation == TreeOrientation::Undirected;
    let mut edges = Vec::with_capacity(k);
    for (p, c, d) in t.edges() {
        let (a, b) = (map[p], map[c]);
        edges.push(match d {
            EdgeDir::Up => (b, a),
            _ if undirected && a > b => (b, a),
            _ => (a, b),
        });
    }
    sprinkle(&mut r, host_n, &mut edges, extra_edges, undirected);
    let g = Digraph::new(host_n, edges, undirected)?;
    Ok((g, t, map))
}

/// Random sets whose union is the whole ground set; uncovered elements are
/// added to random sets. The witness is a greedy cover.
pub fn planted_cover(params: SetParams, seed: u64) -> Result<(SetCoverInstance, Vec<usize>), InstanceError> {
    let SetParams { n, m, max_set_size, .. } = params;
    if n > 0 && m == 0 {
        return Err(invalid(format!("cannot cover {n} elements with no sets")));
    }
    if m > 0 && (max_set_size == 0 || max_set_size > n) {
        return Err(invalid(format!("max set size {max_set_size} outside [1, {n}]")));
    }
    let mut r = rng(seed);
    let mut sets: Vec<Vec<usize>> = (0..m).map(|_| random_set(&mut r, n, max_set_size)).collect();
    for e in 0..n {
        if !sets.iter().any(|s| s.contains(&e)) {
            let i = r.gen_range(0..m);
            sets[i].push(e);
        }
    }
    let inst = SetCoverInstance::new(n, sets, Variant::Plain)?;
    let mut covered = alloc::vec![false; n];
    let mut witness = Vec::new();
    while covered.iter().any(|&c| !c) {
        let (best, _) = inst
            .sets()
            .iter()
            .enumerate()
            .map(|(i, s)| (i, s.iter().filter(|&&e| !covered[e]).count()))
            .max_by_key(|&(i, gain)| (gain, core::cmp::Reverse(i)))
            .expect("at least one set");
        for &e in &inst.sets()[best] {
            covered[e] = true;
        }
        witness.push(best);
    }
    Ok((inst, witness))
}

/// A hidden cover by consecutive blocks of a random element order, each of
/// `1..=max_set_size` elements, followed by `decoys` random sets of the same
/// size range. Every set respects `max_set_size`, so the instance meets any
/// small-set bound at least that large. The witness indexes the blocks.
pub fn planted_blocks(
    n: usize,
    max_set_size: usize,
    decoys: usize,
    seed: u64,
) -> Result<(SetCoverInstance, Vec<usize>), InstanceError> {
    if max_set_size == 0 || max_set_size > n {
        return Err(invalid(format!("max set size {max_set_size} outside [1, {n}]")));
    }
    let mut r = rng(seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut r);
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut rest = &order[..];
    while !rest.is_empty() {
        let take = r.gen_range(1..=max_set_size.min(rest.len()));
        blocks.push(rest[..take].to_vec());
        rest = &rest[take..];
    }
    let mut sets = blocks.clone();
    for _ in 0..decoys {
        sets.push(random_set(&mut r, n, max_set_size));
    }
    let inst = SetCoverInstance::new(n, sets, Variant::Plain)?;
    // locate the blocks in the canonical order, skipping repeats already used
    let mut used = alloc::vec![false; inst.m()];
    let mut witness = Vec::with_capacity(blocks.len());
    for mut b in blocks {
        b.sort_unstable();
        let i = (0..inst.m()).find(|&i| !used[i] && inst.sets()[i] == b).expect("block kept");
        used[i] = true;
        witness.push(i);
    }
    witness.sort_unstable();
    Ok((inst, witness))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::{verify_cover, verify_embedding, verify_ham_cycle};

    #[test]
    fn setcover_is_deterministic() {
        let p = SetParams {
            n: 6,
            m: 4,
            max_set_size: 2,
            distinct: false,
        };
        assert_eq!(
            random_setcover(p, Variant::Plain, 7).unwrap(),
            random_setcover(p, Variant::Plain, 7).unwrap()
        );
    }

    #[test]
    fn distinct_request_too_large() {
        let p = SetParams {
            n: 2,
            m: 4,
            max_set_size: 2,
            distinct: true,
        };
        assert!(random_setcover(p, Variant::Plain, 0).is_err());
    }

    #[test]
    fn tree_shape() {
        let t = random_tree(5, TreeOrientation::Random, 1).unwrap();
        assert_eq!(t.k(), 5);
        assert_eq!(t.edges().len(), 4);
    }

    #[test]
    fn digraph_edge_bound() {
        let g = random_digraph(8, 0.5, false, 3).unwrap();
        assert!(g.num_edges() <= 56);
    }

    #[test]
    fn planted_witnesses_verify() {
        let (g, order) = planted_ham_cycle(6, 4, 2).unwrap();
        assert!(verify_ham_cycle(&g, &order));
        let (g, t, map) = planted_tree(4, 7, 3, TreeOrientation::Random, 5).unwrap();
        assert!(verify_embedding(&g, &t, &map));
        let p = SetParams {
            n: 8,
            m: 5,
            max_set_size: 3,
            distinct: false,
        };
        let (inst, w) = planted_cover(p, 9).unwrap();
        assert_eq!(inst.union_size(), 8);
        assert!(verify_cover(&inst, &w));
    }

    #[test]
    fn blocks_cover_and_respect_size() {
        for seed in 0..20 {
            let (inst, w) = planted_blocks(11, 2, 4, seed).unwrap();
            assert!(inst.max_set_size() <= 2);
            assert!(verify_cover(&inst, &w));
        }
        assert!(planted_blocks(3, 4, 0, 0).is_err());
    }
}
