//! Set Cover and p-Partial Cover to undirected kTree.
//!
//! The host graph is the element/set incidence graph plus one node per
//! `g`-subset of sets, four rows of pendant nodes and four hub nodes that pin
//! down where a pattern tree can sit. For every integer partition `α` of the
//! number of elements to cover, the pattern tree has one star per entry of
//! the shrunk partition `α_g`; a star whose center lands on a set (or on a
//! `g`-subset of sets) covers as many elements as it has leaves.

use alloc::format;
use alloc::vec::Vec;

use crate::instances::{Digraph, EdgeDir, PatternTree, SetCoverInstance, Variant};
use crate::partitions::{enumerate_partitions, shrink_partition, Partition};
use crate::solvers::{partialcover_dp, setcover_dp, Answer, Caps, Certificate, SolveResult};
use crate::util::{binomial, combinations};
use crate::SolveError;

const MAX_GROUP: usize = 4;
const MAX_GROUP_NODES: u128 = 1_000_000;

/// What a host node stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    Element(usize),
    Set(usize),
    /// Index into [`HostGraphBundle::groups`].
    Group(usize),
    /// `v^row_col`, `row` in `1..=4`.
    Pendant { row: usize, col: usize },
    HubGroup,
    HubOne,
    HubTwo,
    Hub,
}

#[derive(Debug, Clone)]
pub struct HostGraphBundle {
    pub host: Digraph,
    pub roles: Vec<Role>,
    /// The `g`-subsets of set indices, in lexicographic order.
    pub groups: Vec<Vec<usize>>,
    pub g: usize,
    /// Pendants per row, `⌈2s/g⌉` for `s` elements to cover.
    pub q: usize,
}

impl HostGraphBundle {
    pub fn count(&self, pred: impl Fn(&Role) -> bool) -> usize {
        self.roles.iter().filter(|r| pred(r)).count()
    }

    /// The top hub `r`.
    pub fn hub(&self) -> usize {
        self.roles.len() - 1
    }

    /// Largest degree among set and group nodes.
    pub fn max_set_side_degree(&self) -> usize {
        self.roles
            .iter()
            .enumerate()
            .filter(|(_, r)| matches!(r, Role::Set(_) | Role::Group(_)))
            .map(|(x, _)| self.host.degree(x))
            .max()
            .unwrap_or(0)
    }
}

fn rows_for(scale: usize, g: usize) -> usize {
    (2 * scale).div_ceil(g)
}

/// Host graph for covering `scale` elements of `inst`.
fn host_graph(inst: &SetCoverInstance, g: usize, scale: usize) -> Result<HostGraphBundle, SolveError> {
    if g < 2 {
        return Err(SolveError::Precondition(format!("group size {g} below 2")));
    }
    Caps::check("group size", g, MAX_GROUP)?;
    let (n, m) = (inst.n(), inst.m());
    let group_count = binomial(m, g);
    if group_count > MAX_GROUP_NODES {
        return Err(SolveError::Capacity {
            what: "set groups",
            got: usize::try_from(group_count).unwrap_or(usize::MAX),
            limit: MAX_GROUP_NODES as usize,
        });
    }
    let groups = combinations(m, g);
    let q = rows_for(scale, g);
    let mut roles: Vec<Role> = Vec::with_capacity(n + m + groups.len() + 4 * q + 4);
    roles.extend((0..n).map(Role::Element));
    roles.extend((0..m).map(Role::Set));
    roles.extend((0..groups.len()).map(Role::Group));
    for row in 1..=4 {
        roles.extend((0..q).map(|col| Role::Pendant { row, col }));
    }
    roles.extend([Role::HubGroup, Role::HubOne, Role::HubTwo, Role::Hub]);

    let set_node = |i: usize| n + i;
    let group_node = |c: usize| n + m + c;
    let pendant = |row: usize, col: usize| n + m + groups.len() + (row - 1) * q + col;
    let hub_base = n + m + groups.len() + 4 * q;
    let (rg, r1, r2, r) = (hub_base, hub_base + 1, hub_base + 2, hub_base + 3);

    let mut edges = Vec::new();
    for (i, s) in inst.sets().iter().enumerate() {
        edges.extend(s.iter().map(|&e| (e, set_node(i))));
    }
    for (c, grp) in groups.iter().enumerate() {
        let mut covered: Vec<usize> = grp.iter().flat_map(|&i| inst.sets()[i].iter().copied()).collect();
        covered.sort_unstable();
        covered.dedup();
        edges.extend(covered.into_iter().map(|e| (e, group_node(c))));
        edges.push((group_node(c), rg));
    }
    for col in 0..q {
        edges.push((pendant(1, col), r1));
        edges.push((pendant(2, col), r2));
        edges.push((pendant(3, col), r));
        edges.push((pendant(4, col), rg));
    }
    edges.extend([(rg, r), (r1, r), (r2, r)]);
    edges.extend((0..m).map(|i| (set_node(i), r)));
    let host = Digraph::new(roles.len(), edges, true)?;
    Ok(HostGraphBundle {
        host,
        roles,
        groups,
        g,
        q,
    })
}

/// The host graph `G_g` for `inst`. Every set must have at most `n/g²`
/// elements; larger sets are handled by [`setcover_preprocess_large`].
pub fn build_host_graph(inst: &SetCoverInstance, g: usize) -> Result<HostGraphBundle, SolveError> {
    let n = inst.n();
    if let Some(s) = inst.sets().iter().find(|s| s.len() * g * g > n) {
        return Err(SolveError::Precondition(format!(
            "set of size {} exceeds n/g² = {n}/{}; remove large sets with setcover_preprocess_large first",
            s.len(),
            g * g
        )));
    }
    host_graph(inst, g, n)
}

/// Node count of the pattern tree for a partition of `total` into `parts`
/// parts: `4 + 4⌈2·total/g⌉ + |α_g| + total`.
pub fn pattern_tree_size(alpha: &Partition, g: usize, total: usize) -> usize {
    4 + 4 * rows_for(total, g) + shrink_partition(alpha, g).len() + total
}

/// Pattern tree `T_g^α`. Node 0 is the top hub `r'`, nodes 1, 2, 3 are
/// `r'_g`, `r'_1`, `r'_2`; then the four pendant rows; then each star's
/// center followed by its leaves, grouped sums first.
pub fn build_pattern_tree(alpha: &Partition, g: usize, total: usize) -> PatternTree {
    assert!(g >= 1, "group size must be positive");
    let q = rows_for(total, g);
    let shrunk = shrink_partition(alpha, g);
    let mut parent: Vec<Option<usize>> = alloc::vec![None, Some(0), Some(0), Some(0)];
    let row_hub = [2, 3, 0, 1];
    for hub in row_hub {
        parent.extend((0..q).map(|_| Some(hub)));
    }
    let stars = shrunk
        .grouped
        .iter()
        .map(|&i| (i, 1))
        .chain(shrunk.remainder.iter().map(|&i| (i, 0)));
    for (leaves, hub) in stars {
        let center = parent.len();
        parent.push(Some(hub));
        parent.extend((0..leaves).map(|_| Some(center)));
    }
    let k = parent.len();
    PatternTree::new(parent, alloc::vec![EdgeDir::Undirected; k]).expect("construction yields a tree")
}

/// Star centers of [`build_pattern_tree`] with their leaf counts.
fn star_centers(alpha: &Partition, g: usize, total: usize) -> Vec<(usize, usize)> {
    let shrunk = shrink_partition(alpha, g);
    let mut at = 4 + 4 * rows_for(total, g);
    let mut out = Vec::new();
    for &i in shrunk.grouped.iter().chain(shrunk.remainder.iter()) {
        out.push((at, i));
        at += i + 1;
    }
    out
}

/// Sets named by an embedding's star centers, provided every center sits on
/// a set or group node and every leaf on an element node.
fn decode_cover(bundle: &HostGraphBundle, centers: &[(usize, usize)], image: &[usize]) -> Option<Vec<usize>> {
    let mut chosen = Vec::new();
    for &(c, leaves) in centers {
        match bundle.roles[image[c]] {
            Role::Set(i) => chosen.push(i),
            Role::Group(x) => chosen.extend_from_slice(&bundle.groups[x]),
            _ => return None,
        }
        if (c + 1..=c + leaves).any(|leaf| !matches!(bundle.roles[image[leaf]], Role::Element(_))) {
            return None;
        }
    }
    chosen.sort_unstable();
    chosen.dedup();
    Some(chosen)
}

/// The degree arguments that force hubs onto hubs: the pattern's `r'_1` and
/// `r'_2` have degree `q + 1`, which no set or group node may reach.
fn check_forcing(bundle: &HostGraphBundle) -> Result<(), SolveError> {
    let d = bundle.max_set_side_degree();
    if d > bundle.q {
        return Err(SolveError::Precondition(format!(
            "set-side degree {d} exceeds pendant row length {}; hub placement is not forced",
            bundle.q
        )));
    }
    Ok(())
}

/// Shared loop: partitions of `total` by ascending length, first tree that
/// embeds and decodes wins.
fn ktree_search(
    inst: &SetCoverInstance,
    bundle: &HostGraphBundle,
    total: usize,
    ktree_solver: &mut dyn FnMut(&Digraph, &PatternTree) -> Result<SolveResult, SolveError>,
) -> Result<SolveResult, SolveError> {
    if total == 0 {
        return Ok(SolveResult::new(Answer::Optimum(0), Some(Certificate::Sets(Vec::new())), 0));
    }
    check_forcing(bundle)?;
    let mut alphas: Vec<Partition> = enumerate_partitions(total).collect();
    alphas.sort_by_key(Partition::len);
    let mut tried = 0;
    for alpha in alphas {
        tried += 1;
        let tree = build_pattern_tree(&alpha, bundle.g, total);
        let r = ktree_solver(&bundle.host, &tree)?;
        if !r.answer.is_yes() {
            continue;
        }
        let image = r
            .embedding()
            .ok_or_else(|| SolveError::Precondition("kTree solver answered yes without an embedding".into()))?;
        let centers = star_centers(&alpha, bundle.g, total);
        let chosen = decode_cover(bundle, &centers, image).ok_or_else(|| {
            SolveError::Precondition(format!(
                "embedding for partition {:?} does not place stars on sets; hub placement is not forced",
                alpha.parts()
            ))
        })?;
        let covered = inst.subcollection(&chosen).union_size();
        if chosen.len() > alpha.len() || covered < total {
            return Err(SolveError::Precondition(format!(
                "embedding for partition {:?} decodes to {} sets covering {covered}",
                alpha.parts(),
                chosen.len()
            )));
        }
        return Ok(SolveResult::new(
            Answer::Optimum(alpha.len()),
            Some(Certificate::Sets(chosen)),
            tried,
        ));
    }
    Ok(SolveResult::new(Answer::Infeasible, None, tried))
}

/// Minimum set cover through kTree queries on `(G_g, T_g^α)`, smallest `|α|`
/// first. The instance must satisfy the small-set assumption and the
/// numeric forcing condition; the embedding behind the answer is decoded
/// back into a cover and checked.
pub fn setcover_to_ktree(
    inst: &SetCoverInstance,
    g: usize,
    ktree_solver: &mut dyn FnMut(&Digraph, &PatternTree) -> Result<SolveResult, SolveError>,
) -> Result<SolveResult, SolveError> {
    let bundle = build_host_graph(inst, g)?;
    ktree_search(inst, &bundle, inst.n(), ktree_solver)
}

/// Best solution that uses at least one large set, and the instance left
/// after removing all large sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LargeSplit {
    /// Optimum and cover (indices into the original instance) among
    /// solutions containing a large set.
    pub large_best: Option<(usize, Vec<usize>)>,
    pub residual: SetCoverInstance,
    /// `residual` set index → original set index.
    pub residual_index: Vec<usize>,
}

/// Elements outside `taken`, renumbered, with every set restricted to them.
fn restrict(inst: &SetCoverInstance, taken: &[usize], variant: Variant) -> (SetCoverInstance, Vec<usize>) {
    let n = inst.n();
    let mut index = alloc::vec![usize::MAX; n];
    let mut next = 0;
    for e in 0..n {
        if taken.binary_search(&e).is_err() {
            index[e] = next;
            next += 1;
        }
    }
    let mut pairs: Vec<(Vec<usize>, usize)> = inst
        .sets()
        .iter()
        .enumerate()
        .map(|(i, s)| (s.iter().filter(|&&e| index[e] != usize::MAX).map(|&e| index[e]).collect(), i))
        .collect();
    pairs.sort();
    let (sets, back): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
    (
        SetCoverInstance::new(next, sets, variant).expect("restriction of a valid instance"),
        back,
    )
}

fn split_large(
    inst: &SetCoverInstance,
    is_large: impl Fn(usize) -> bool,
    mut solve_rest: impl FnMut(&[usize]) -> Result<Option<(usize, Vec<usize>)>, SolveError>,
) -> Result<LargeSplit, SolveError> {
    let mut large_best: Option<(usize, Vec<usize>)> = None;
    let mut keep = Vec::new();
    for (i, s) in inst.sets().iter().enumerate() {
        if !is_large(s.len()) {
            keep.push(i);
            continue;
        }
        if let Some((opt, mut cover)) = solve_rest(s)? {
            if large_best.as_ref().is_none_or(|(b, _)| opt + 1 < *b) {
                cover.push(i);
                cover.sort_unstable();
                cover.dedup();
                large_best = Some((opt + 1, cover));
            }
        }
    }
    let sets = keep.iter().map(|&i| inst.sets()[i].clone()).collect();
    let residual = SetCoverInstance::new(inst.n(), sets, inst.variant()).expect("subcollection of a valid instance");
    Ok(LargeSplit {
        large_best,
        residual,
        residual_index: keep,
    })
}

/// Guesses each set larger than `n/g²` as part of the solution and solves
/// the uncovered remainder with the subset DP; returns the best such
/// solution together with the instance stripped of large sets.
pub fn setcover_preprocess_large(inst: &SetCoverInstance, g: usize, caps: &Caps) -> Result<LargeSplit, SolveError> {
    let n = inst.n();
    split_large(
        inst,
        |size| size * g * g > n,
        |taken| {
            let (rest, back) = restrict(inst, taken, Variant::Plain);
            let r = setcover_dp(&rest, caps)?;
            Ok(r.answer.optimum().map(|opt| {
                let cover = r.sets().unwrap_or(&[]).iter().map(|&j| back[j]).collect();
                (opt, cover)
            }))
        },
    )
}

fn combine(split: &LargeSplit, small: SolveResult) -> SolveResult {
    let small_best = small.answer.optimum().map(|opt| {
        let cover: Vec<usize> = small.sets().unwrap_or(&[]).iter().map(|&j| split.residual_index[j]).collect();
        (opt, cover)
    });
    let best = match (&split.large_best, small_best) {
        (Some(a), Some(b)) => Some(if b.0 < a.0 { b } else { a.clone() }),
        (Some(a), None) => Some(a.clone()),
        (None, b) => b,
    };
    match best {
        Some((opt, mut cover)) => {
            cover.sort_unstable();
            SolveResult::new(Answer::Optimum(opt), Some(Certificate::Sets(cover)), small.stats.explored)
        }
        None => SolveResult::new(Answer::Infeasible, None, small.stats.explored),
    }
}

/// [`setcover_preprocess_large`] followed by [`setcover_to_ktree`] on the
/// residual; the smaller of the two answers is the optimum.
pub fn setcover_via_ktree(
    inst: &SetCoverInstance,
    g: usize,
    caps: &Caps,
    ktree_solver: &mut dyn FnMut(&Digraph, &PatternTree) -> Result<SolveResult, SolveError>,
) -> Result<SolveResult, SolveError> {
    let split = setcover_preprocess_large(inst, g, caps)?;
    let small = setcover_to_ktree(&split.residual, g, ktree_solver)?;
    Ok(combine(&split, small))
}

fn partial_target(inst: &SetCoverInstance) -> Result<usize, SolveError> {
    match inst.variant() {
        Variant::Partial(p) => Ok(p),
        other => Err(SolveError::Precondition(format!("expected a partial-cover instance, got {other:?}"))),
    }
}

/// Partial-cover analogue of [`setcover_preprocess_large`]: sets of at least
/// `p/g²` elements are guessed, the rest of the target is met by the
/// partial-cover DP on the remaining elements.
pub fn ppc_preprocess_large(inst: &SetCoverInstance, g: usize, caps: &Caps) -> Result<LargeSplit, SolveError> {
    let p = partial_target(inst)?;
    split_large(
        inst,
        |size| size * g * g >= p && size > 0,
        |taken| {
            let left = p.saturating_sub(taken.len());
            let (rest, back) = restrict(inst, taken, Variant::Partial(left));
            let r = partialcover_dp(&rest, caps)?;
            Ok(r.answer.optimum().map(|opt| {
                let cover = r.sets().unwrap_or(&[]).iter().map(|&j| back[j]).collect();
                (opt, cover)
            }))
        },
    )
}

/// Minimum partial cover through kTree queries over partitions of `p`.
/// Every set must have fewer than `p/g²` elements.
pub fn ppc_to_ktree(
    inst: &SetCoverInstance,
    g: usize,
    ktree_solver: &mut dyn FnMut(&Digraph, &PatternTree) -> Result<SolveResult, SolveError>,
) -> Result<SolveResult, SolveError> {
    let p = partial_target(inst)?;
    if p == 0 {
        return Ok(SolveResult::new(Answer::Optimum(0), Some(Certificate::Sets(Vec::new())), 0));
    }
    let bundle = build_partial_host_graph(inst, g)?;
    ktree_search(inst, &bundle, p, ktree_solver)
}

/// Host graph of a partial-cover instance, with pendant rows scaled to `p`.
/// Every nonempty set must have fewer than `p/g²` elements.
pub fn build_partial_host_graph(inst: &SetCoverInstance, g: usize) -> Result<HostGraphBundle, SolveError> {
    let p = partial_target(inst)?;
    if let Some(s) = inst.sets().iter().find(|s| !s.is_empty() && s.len() * g * g >= p) {
        return Err(SolveError::Precondition(format!(
            "set of size {} reaches p/g² = {p}/{}; remove large sets with ppc_preprocess_large first",
            s.len(),
            g * g
        )));
    }
    host_graph(inst, g, p)
}

/// [`ppc_preprocess_large`] followed by [`ppc_to_ktree`] on the residual.
pub fn ppc_via_ktree(
    inst: &SetCoverInstance,
    g: usize,
    caps: &Caps,
    ktree_solver: &mut dyn FnMut(&Digraph, &PatternTree) -> Result<SolveResult, SolveError>,
) -> Result<SolveResult, SolveError> {
    if partial_target(inst)? == 0 {
        return Ok(SolveResult::new(Answer::Optimum(0), Some(Certificate::Sets(Vec::new())), 0));
    }
    let split = ppc_preprocess_large(inst, g, caps)?;
    let small = ppc_to_ktree(&split.residual, g, ktree_solver)?;
    Ok(combine(&split, small))
}
