//! Covering a rooted tree by small subtrees that meet only at their roots.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::instances::PatternTree;
use crate::InstanceError;

/// A connected node set of a pattern tree and its node nearest the global root.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subtree {
    pub root: usize,
    /// Sorted.
    pub nodes: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubtreeCover {
    pub subtrees: Vec<Subtree>,
    pub source_k: usize,
    pub l: usize,
}

impl SubtreeCover {
    /// Distinct subtree roots, sorted.
    pub fn roots(&self) -> Vec<usize> {
        let mut r: Vec<usize> = self.subtrees.iter().map(|s| s.root).collect();
        r.sort_unstable();
        r.dedup();
        r
    }
}

/// Depth-first accumulation: each node collects the leftovers of its finished
/// children and emits them as a subtree once they reach `l` nodes, when the
/// node already roots an emitted subtree, or at the very end. Children are
/// visited in ascending id order; edge orientations are ignored.
///
/// `l` may exceed the tree size, in which case the whole tree is one subtree.
pub fn tree_cover(t: &PatternTree, l: usize) -> Result<SubtreeCover, InstanceError> {
    if l < 2 {
        return Err(InstanceError::InvalidParams(format!("subtree size parameter {l} below 2")));
    }
    let k = t.k();
    let root = t.root();
    let mut out = Vec::new();
    if k == 1 {
        out.push(Subtree {
            root,
            nodes: alloc::vec![root],
        });
        return Ok(SubtreeCover {
            subtrees: out,
            source_k: k,
            l,
        });
    }

    let mut acc: Vec<Vec<usize>> = (0..k).map(|u| alloc::vec![u]).collect();
    let mut roots_a_set = alloc::vec![false; k];
    // (node, index of the next child to visit)
    let mut stack: Vec<(usize, usize)> = alloc::vec![(root, 0)];
    while let Some(top) = stack.last_mut() {
        let (v, next) = *top;
        if let Some(&c) = t.children(v).get(next) {
            top.1 += 1;
            stack.push((c, 0));
            continue;
        }
        stack.pop();
        let Some(&(p, next_of_p)) = stack.last() else {
            break;
        };
        let moved = core::mem::take(&mut acc[v]);
        acc[p].extend(moved);
        let more_children = next_of_p < t.children(p).len();
        let emit = acc[p].len() >= l || (!more_children && (roots_a_set[p] || p == root));
        if emit {
            let mut nodes = core::mem::take(&mut acc[p]);
            nodes.sort_unstable();
            out.push(Subtree { root: p, nodes });
            roots_a_set[p] = true;
            if more_children {
                acc[p] = alloc::vec![p];
            }
        }
    }
    Ok(SubtreeCover {
        subtrees: out,
        source_k: k,
        l,
    })
}

/// Outcome of checking a subtree cover against its four structural
/// guarantees plus well-formedness of every subtree.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CoverReport {
    /// Every subtree has at most `2(l-1)` nodes.
    pub size_ok: bool,
    /// The subtrees jointly contain every node.
    pub covers_all: bool,
    /// Two subtrees share only nodes that are a root of one of them.
    pub meet_at_roots: bool,
    /// At most `3k/(l-1)` subtrees.
    pub count_ok: bool,
    /// Each subtree is connected and its recorded root is its node nearest
    /// the global root.
    pub well_formed: bool,
    pub violations: Vec<String>,
}

impl CoverReport {
    pub fn passed(&self) -> bool {
        self.size_ok && self.covers_all && self.meet_at_roots && self.count_ok && self.well_formed
    }
}

pub fn check_cover_properties(t: &PatternTree, cover: &SubtreeCover, l: usize) -> CoverReport {
    let k = t.k();
    let mut rep = CoverReport {
        size_ok: true,
        covers_all: true,
        meet_at_roots: true,
        count_ok: true,
        well_formed: true,
        violations: Vec::new(),
    };
    let cap = 2 * l.saturating_sub(1);
    for (i, s) in cover.subtrees.iter().enumerate() {
        if s.nodes.len() > cap {
            rep.size_ok = false;
            rep.violations
                .push(format!("subtree {i} has {} nodes, more than {cap}", s.nodes.len()));
        }
        if s.nodes.iter().any(|&v| v >= k) || !s.nodes.contains(&s.root) {
            rep.well_formed = false;
            rep.violations.push(format!("subtree {i} has foreign nodes or lacks its root"));
            continue;
        }
        // connected with the recorded root on top: every other node's parent is inside
        for &v in &s.nodes {
            if v == s.root {
                continue;
            }
            match t.parent(v) {
                Some(p) if s.nodes.binary_search(&p).is_ok() => {}
                _ => {
                    rep.well_formed = false;
                    rep.violations
                        .push(format!("subtree {i}: node {v} hangs outside the subtree rooted at {}", s.root));
                    break;
                }
            }
        }
        if let Some(p) = t.parent(s.root) {
            if s.nodes.binary_search(&p).is_ok() {
                rep.well_formed = false;
                rep.violations
                    .push(format!("subtree {i}: recorded root {} is not its topmost node", s.root));
            }
        }
    }
    let mut seen = alloc::vec![false; k];
    for s in &cover.subtrees {
        for &v in &s.nodes {
            if v < k {
                seen[v] = true;
            }
        }
    }
    if let Some(v) = seen.iter().position(|&b| !b) {
        rep.covers_all = false;
        rep.violations.push(format!("node {v} is in no subtree"));
    }
    let subs = &cover.subtrees;
    for i in 0..subs.len() {
        for j in i + 1..subs.len() {
            let (a, b) = (&subs[i], &subs[j]);
            for &v in &a.nodes {
                if b.nodes.binary_search(&v).is_ok() && v != a.root && v != b.root {
                    rep.meet_at_roots = false;
                    rep.violations
                        .push(format!("subtrees {i} and {j} share non-root node {v}"));
                }
            }
        }
    }
    if l < 2 || subs.len() * (l - 1) > 3 * k {
        rep.count_ok = false;
        rep.violations
            .push(format!("{} subtrees exceed 3k/(l-1) for k={k}, l={l}", subs.len()));
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::EdgeDir;
    use alloc::vec;

    fn sub(root: usize, nodes: &[usize]) -> Subtree {
        Subtree {
            root,
            nodes: nodes.to_vec(),
        }
    }

    #[test]
    fn path_with_l2() {
        // r=0, a=1, b=2, c=3
        let t = PatternTree::path(4, EdgeDir::Undirected);
        let c = tree_cover(&t, 2).unwrap();
        assert_eq!(c.subtrees, vec![sub(2, &[2, 3]), sub(0, &[0, 1])]);
        assert!(check_cover_properties(&t, &c, 2).passed());
    }

    #[test]
    fn star_with_l3() {
        let t = PatternTree::star(3, EdgeDir::Undirected);
        let c = tree_cover(&t, 3).unwrap();
        assert_eq!(c.subtrees, vec![sub(0, &[0, 1, 2]), sub(0, &[0, 3])]);
        assert!(check_cover_properties(&t, &c, 3).passed());
    }

    #[test]
    fn l_equal_k_gives_whole_tree() {
        let t = PatternTree::from_edges(
            5,
            &[
                (0, 1, EdgeDir::Undirected),
                (1, 2, EdgeDir::Undirected),
                (0, 3, EdgeDir::Undirected),
                (3, 4, EdgeDir::Undirected),
            ],
        )
        .unwrap();
        let c = tree_cover(&t, 5).unwrap();
        assert_eq!(c.subtrees, vec![sub(0, &[0, 1, 2, 3, 4])]);
    }

    #[test]
    fn single_node_and_small_l() {
        let t = PatternTree::path(1, EdgeDir::Undirected);
        assert_eq!(tree_cover(&t, 4).unwrap().subtrees, vec![sub(0, &[0])]);
        assert!(tree_cover(&t, 1).is_err());
    }

    #[test]
    fn constructed_violations_are_flagged() {
        let t = PatternTree::path(4, EdgeDir::Undirected);
        let big = SubtreeCover {
            subtrees: vec![sub(0, &[0, 1, 2, 3])],
            source_k: 4,
            l: 2,
        };
        let r = check_cover_properties(&t, &big, 2);
        assert!(!r.size_ok && r.covers_all);
        let missing = SubtreeCover {
            subtrees: vec![sub(0, &[0, 1]), sub(1, &[1, 2])],
            source_k: 4,
            l: 2,
        };
        let r = check_cover_properties(&t, &missing, 2);
        assert!(!r.covers_all && r.size_ok);
    }
}
