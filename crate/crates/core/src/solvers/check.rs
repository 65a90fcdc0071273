//! Independent certificate checkers. None of these share code with the
//! solvers whose output they judge.

use crate::instances::{Digraph, PatternTree, SetCoverInstance};

fn union_marks(inst: &SetCoverInstance, chosen: &[usize]) -> Option<alloc::vec::Vec<u32>> {
    let mut hits = alloc::vec![0u32; inst.n()];
    for &i in chosen {
        for &e in inst.sets().get(i)? {
            hits[e] += 1;
        }
    }
    Some(hits)
}

/// Every element is in some chosen set.
pub fn verify_cover(inst: &SetCoverInstance, chosen: &[usize]) -> bool {
    union_marks(inst, chosen).is_some_and(|h| h.iter().all(|&c| c > 0))
}

/// Every element is in exactly one chosen set.
pub fn verify_exact_cover(inst: &SetCoverInstance, chosen: &[usize]) -> bool {
    let mut sorted = chosen.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    sorted.len() == chosen.len() && union_marks(inst, chosen).is_some_and(|h| h.iter().all(|&c| c == 1))
}

/// The chosen sets jointly hold at least the instance's coverage target.
pub fn verify_partial_cover(inst: &SetCoverInstance, chosen: &[usize]) -> bool {
    union_marks(inst, chosen)
        .is_some_and(|h| h.iter().filter(|&&c| c > 0).count() >= inst.coverage_target())
}

/// `order` lists every node once and consecutive nodes (cyclically) are
/// joined by arcs in order.
pub fn verify_ham_cycle(g: &Digraph, order: &[usize]) -> bool {
    let n = g.num_nodes();
    if n < 2 || order.len() != n {
        return false;
    }
    let mut seen = alloc::vec![false; n];
    for &v in order {
        if v >= n || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    (0..n).all(|i| g.has_arc(order[i], order[(i + 1) % n]))
}

/// `map` is injective and realises every tree edge with its orientation
/// (orientation is ignored for undirected trees).
pub fn verify_embedding(g: &Digraph, t: &PatternTree, map: &[usize]) -> bool {
    if map.len() != t.k() {
        return false;
    }
    let mut used = alloc::vec![false; g.num_nodes()];
    for &x in map {
        if x >= g.num_nodes() || used[x] {
            return false;
        }
        used[x] = true;
    }
    t.edges().into_iter().all(|(p, c, d)| {
        let (a, b) = (map[p], map[c]);
        match d {
            crate::EdgeDir::Undirected => g.has_arc(a, b) || g.has_arc(b, a),
            crate::EdgeDir::Down => g.has_arc(a, b),
            crate::EdgeDir::Up => g.has_arc(b, a),
        }
    })
}
