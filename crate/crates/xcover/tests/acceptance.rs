//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails. Reference answers come from the brute-force
//! oracles below, which share no code with the library solvers.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use xcover::suite::forcing_instance;
use xcover_core::analysis::{compose_runtime, cover_lambda, speedup_threshold};
use xcover_core::generate::{planted_tree, random_digraph, random_setcover, random_tree, SetParams, TreeOrientation};
use xcover_core::partitions::{count_partitions, enumerate_partitions};
use xcover_core::reductions::{
    build_host_graph, build_pattern_tree, check_cover_properties, ham_to_setcover, ntree_to_setcover, ppc_via_ktree,
    setcover_preprocess_large, setcover_to_ktree, solve_ham_via_setcover, solve_ntree_via_setcover, tree_cover,
    CoverSolver, NtreeVariant, SubtreeCover,
};
use xcover_core::solvers::{
    exactcover_solve, exactcover_with_large_sets, heldkarp_ham, ktree_colorcoding, partialcover_dp, setcover_dp,
    tree_embed_backtrack, EmbedQuery,
};
use xcover_core::{Caps, Digraph, EdgeDir, PatternTree, SetCoverInstance, SolveError, SolveResult, Variant};

const LOG2_TOL: f64 = 1e-9;
const SEED: u64 = 0x5eed_2024;

fn rng(family: u64, trial: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(SEED);
    r.set_stream((family << 32) | trial);
    r
}

// ---------------------------------------------------------------- oracles

fn edge_ok(t: &PatternTree, g: &Digraph, child: usize, hp: usize, hc: usize) -> bool {
    match t.dir(child) {
        EdgeDir::Down => g.has_arc(hp, hc),
        EdgeDir::Up => g.has_arc(hc, hp),
        EdgeDir::Undirected => g.has_arc(hp, hc) || g.has_arc(hc, hp),
    }
}

fn oracle_embedding_ok(g: &Digraph, t: &PatternTree, map: &[usize]) -> bool {
    let k = t.k();
    if map.len() != k || map.iter().any(|&h| h >= g.num_nodes()) {
        return false;
    }
    let distinct: BTreeSet<_> = map.iter().collect();
    distinct.len() == k && (0..k).all(|v| t.parent(v).is_none_or(|p| edge_ok(t, g, v, map[p], map[v])))
}

/// Exhaustive search over injective maps, assigning tree nodes in BFS order.
fn oracle_embeds(g: &Digraph, t: &PatternTree) -> bool {
    let mut order = vec![t.root()];
    let mut i = 0;
    while i < order.len() {
        order.extend(t.children(order[i]).iter().copied());
        i += 1;
    }
    fn go(g: &Digraph, t: &PatternTree, order: &[usize], at: usize, map: &mut [usize], used: &mut [bool]) -> bool {
        if at == order.len() {
            return true;
        }
        let v = order[at];
        for h in 0..g.num_nodes() {
            if used[h] || t.parent(v).is_some_and(|p| !edge_ok(t, g, v, map[p], h)) {
                continue;
            }
            map[v] = h;
            used[h] = true;
            if go(g, t, order, at + 1, map, used) {
                return true;
            }
            used[h] = false;
        }
        false
    }
    let mut map = vec![usize::MAX; t.k()];
    let mut used = vec![false; g.num_nodes()];
    go(g, t, &order, 0, &mut map, &mut used)
}

fn oracle_hamiltonian(g: &Digraph) -> bool {
    let n = g.num_nodes();
    if n < 2 {
        return false;
    }
    fn go(g: &Digraph, at: usize, depth: usize, used: &mut [bool]) -> bool {
        let n = g.num_nodes();
        if depth == n {
            return g.has_arc(at, 0);
        }
        for v in 1..n {
            if !used[v] && g.has_arc(at, v) {
                used[v] = true;
                if go(g, v, depth + 1, used) {
                    return true;
                }
                used[v] = false;
            }
        }
        false
    }
    let mut used = vec![false; n];
    used[0] = true;
    go(g, 0, 1, &mut used)
}

fn union_mask(inst: &SetCoverInstance, pick: u64) -> (u64, bool) {
    let mut covered = 0u64;
    let mut disjoint = true;
    for (i, s) in inst.sets().iter().enumerate() {
        if pick >> i & 1 == 1 {
            for &e in s {
                disjoint &= covered >> e & 1 == 0;
                covered |= 1 << e;
            }
        }
    }
    (covered, disjoint)
}

/// Fewest sets meeting `accept(covered, disjoint)`, over all subcollections.
fn oracle_min_cover(inst: &SetCoverInstance, accept: impl Fn(u64, bool) -> bool) -> Option<usize> {
    assert!(inst.m() <= 24, "oracle limited to 24 sets");
    (0u64..1 << inst.m())
        .filter(|&pick| {
            let (c, d) = union_mask(inst, pick);
            accept(c, d)
        })
        .map(|pick| pick.count_ones() as usize)
        .min()
}

fn oracle_disjoint_cover(inst: &SetCoverInstance, chosen: &[usize]) -> bool {
    let mut hits = vec![0usize; inst.n()];
    for &j in chosen {
        for &e in &inst.sets()[j] {
            hits[e] += 1;
        }
    }
    hits.iter().all(|&h| h == 1)
}

fn full(n: usize) -> u64 {
    (1u64 << n) - 1
}

fn oracle_setcover(inst: &SetCoverInstance) -> Option<usize> {
    oracle_min_cover(inst, |c, _| c == full(inst.n()))
}

fn oracle_exactcover(inst: &SetCoverInstance) -> Option<usize> {
    oracle_min_cover(inst, |c, d| d && c == full(inst.n()))
}

fn oracle_partialcover(inst: &SetCoverInstance, p: usize) -> Option<usize> {
    oracle_min_cover(inst, |c, _| c.count_ones() as usize >= p)
}

fn oracle_partitions(a: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
        }
        for p in 1..=rest.min(max) {
            cur.push(p);
            go(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(a, a, &mut Vec::new(), &mut out);
    out
}

fn oracle_cover_properties(t: &PatternTree, c: &SubtreeCover, l: usize) -> Result<(), String> {
    let k = t.k();
    let mut seen = vec![false; k];
    for (i, s) in c.subtrees.iter().enumerate() {
        if s.nodes.len() > 2 * (l - 1) {
            return Err(format!("subtree {i} has {} nodes", s.nodes.len()));
        }
        let set: BTreeSet<usize> = s.nodes.iter().copied().collect();
        if !set.contains(&s.root) {
            return Err(format!("subtree {i} lacks its root"));
        }
        for &v in &s.nodes {
            seen[v] = true;
            if v != s.root && !t.parent(v).is_some_and(|p| set.contains(&p)) {
                return Err(format!("subtree {i} is not connected below {}", s.root));
            }
        }
    }
    if seen.iter().any(|&b| !b) {
        return Err("some node is uncovered".into());
    }
    if (c.subtrees.len() * (l - 1)) as f64 > 3.0 * k as f64 {
        return Err(format!("{} subtrees", c.subtrees.len()));
    }
    for (i, a) in c.subtrees.iter().enumerate() {
        for b in &c.subtrees[i + 1..] {
            for v in a.nodes.iter().filter(|v| b.nodes.contains(v)) {
                if *v != a.root && *v != b.root {
                    return Err(format!("subtrees {} and {} share non-root {v}", a.root, b.root));
                }
            }
        }
    }
    Ok(())
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// `|V(T_g^α)|` for a partition with `parts` parts of `total`.
fn tree_size_closed_form(parts: usize, g: usize, total: usize) -> usize {
    4 + 4 * total.div_ceil(g / 2) + parts / g + parts % g + total
}

fn backtrack(g: &Digraph, t: &PatternTree) -> Result<SolveResult, SolveError> {
    tree_embed_backtrack(&EmbedQuery::new(g, t), 200_000_000)
}

// --------------------------------------------------------------- criteria

struct Verdict {
    ok: bool,
    detail: String,
}

fn verdict(errors: Vec<String>, summary: String) -> Verdict {
    match errors.first() {
        None => Verdict { ok: true, detail: summary },
        Some(e) => Verdict {
            ok: false,
            detail: format!("{summary}; {} failing, first: {e}", errors.len()),
        },
    }
}

fn errors<T: Send>(items: Vec<T>, f: impl Fn(T) -> Result<(), String> + Sync + Send) -> Vec<String> {
    items.into_par_iter().filter_map(|x| f(x).err()).collect()
}

fn criterion1() -> Verdict {
    let trials: Vec<u64> = (0..1200).collect();
    let errs = errors(trials, |i| {
        let mut r = rng(1, i);
        let k = r.gen_range(2..=200);
        let l = r.gen_range(2..=k);
        let orientation = [TreeOrientation::Undirected, TreeOrientation::Random][i as usize % 2];
        let t = random_tree(k, orientation, r.gen()).map_err(|e| e.to_string())?;
        let c = tree_cover(&t, l).map_err(|e| e.to_string())?;
        let rep = check_cover_properties(&t, &c, l);
        if !rep.passed() {
            return Err(format!("trial {i}: {:?}", rep.violations));
        }
        oracle_cover_properties(&t, &c, l).map_err(|e| format!("trial {i} (k {k}, l {l}): {e}"))
    });
    verdict(errs, "1200 trees, k ≤ 200, l ∈ [2, k]".into())
}

fn criterion2() -> Verdict {
    let delta = 6usize;
    let trials: Vec<u64> = (0..120).collect();
    let results: Vec<Result<bool, String>> = trials
        .into_par_iter()
        .map(|i| {
            let mut r = rng(2, i);
            let n = 4 + (i % 4) as usize;
            let orientation = if i % 3 == 0 { TreeOrientation::Undirected } else { TreeOrientation::Random };
            let p = [0.3, 0.45, 0.6][(i / 4 % 3) as usize];
            let g = random_digraph(n, p, orientation == TreeOrientation::Undirected, r.gen()).unwrap();
            let t = random_tree(n, orientation, r.gen()).unwrap();
            let want = oracle_embeds(&g, &t);
            let bt = backtrack(&g, &t).map_err(|e| e.to_string())?.answer.is_yes();
            if bt != want {
                return Err(format!("pair {i}: backtracking {bt}, oracle {want}"));
            }
            let v = solve_ntree_via_setcover(&g, &t, delta, NtreeVariant::Anchored, &CoverSolver::Search)
                .map_err(|e| e.to_string())?;
            if v.yes != want {
                return Err(format!("pair {i}: reduction {}, embedding exists {want}", v.yes));
            }
            if v.yes && !v.certificate.as_deref().is_some_and(|m| oracle_embedding_ok(&g, &t, m)) {
                return Err(format!("pair {i}: decoded embedding invalid"));
            }
            let mut batch = ntree_to_setcover(&g, &t, delta, NtreeVariant::Anchored).map_err(|e| e.to_string())?;
            let mut produced = 0u64;
            let mut max_elems = 0;
            for p in batch.by_ref() {
                produced += 1;
                max_elems = max_elems.max(p.instance.n());
            }
            if let Some(e) = batch.take_error() {
                return Err(e.to_string());
            }
            let nt = n as f64;
            let count_cap = 18.0 * nt / delta as f64 * nt.log2();
            if produced > 0 && (produced as f64).log2() > count_cap + LOG2_TOL {
                return Err(format!("pair {i}: {produced} instances above ñ^(18ñ/Δ)"));
            }
            if max_elems as f64 > nt + 9.0 * nt / delta as f64 + LOG2_TOL {
                return Err(format!("pair {i}: {max_elems} elements above ñ + 9ñ/Δ"));
            }
            Ok(want)
        })
        .collect();
    let yes = results.iter().filter(|r| matches!(r, Ok(true))).count();
    let errs = results.into_iter().filter_map(Result::err).collect();
    verdict(errs, format!("120 pairs, ñ ∈ 4..7, Δ = 6, {yes} embeddable"))
}

fn criterion3() -> Verdict {
    let sizes = [4usize, 6, 8, 10];
    let trials: Vec<u64> = (0..120).collect();
    let results: Vec<Result<bool, String>> = trials
        .into_par_iter()
        .map(|i| {
            let mut r = rng(3, i);
            let n = sizes[i as usize % 4];
            let p = [0.25, 0.4, 0.55][(i / 4 % 3) as usize];
            let g = random_digraph(n, p, false, r.gen()).unwrap();
            let want = oracle_hamiltonian(&g);
            let hk = heldkarp_ham(&g, &Caps::default()).map_err(|e| e.to_string())?.answer.is_yes();
            if hk != want {
                return Err(format!("digraph {i}: Held–Karp {hk}, oracle {want}"));
            }
            let mut deltas = vec![2, n / 2];
            deltas.dedup();
            for delta in deltas {
                let v = solve_ham_via_setcover(&g, delta, &CoverSolver::Search).map_err(|e| e.to_string())?;
                if v.yes != want {
                    return Err(format!("digraph {i}, Δ {delta}: reduction {}, Hamiltonian {want}", v.yes));
                }
                let batch = ham_to_setcover(&g, delta).map_err(|e| e.to_string())?;
                let mut accepted = false;
                for prod in batch {
                    if let Some(s) = prod.instance.sets().iter().find(|s| s.len() != delta) {
                        return Err(format!("digraph {i}, Δ {delta}: set of size {}", s.len()));
                    }
                    if accepted {
                        continue;
                    }
                    let cover = CoverSolver::Search.within(&prod.instance, prod.target).map_err(|e| e.to_string())?;
                    if let Some(c) = cover {
                        accepted = true;
                        if !oracle_disjoint_cover(&prod.instance, &c) {
                            return Err(format!("digraph {i}, Δ {delta}: accepting cover {c:?} not disjoint"));
                        }
                    }
                }
                if accepted != want {
                    return Err(format!("digraph {i}, Δ {delta}: batch accepts {accepted}"));
                }
                if v.yes && !v.cover_disjoint {
                    return Err(format!("digraph {i}, Δ {delta}: pipeline cover not disjoint"));
                }
            }
            Ok(want)
        })
        .collect();
    let yes = results.iter().filter(|r| matches!(r, Ok(true))).count();
    let errs = results.into_iter().filter_map(Result::err).collect();
    verdict(errs, format!("120 digraphs, n ∈ {{4,6,8,10}}, Δ ∈ {{2, n/2}}, {yes} Hamiltonian"))
}

fn criterion4() -> Verdict {
    let g = 2;
    let caps = Caps::default();
    let trials: Vec<u64> = (0..25).collect();
    let errs = errors(trials, |i| {
        let n = 8 + (i % 5) as usize;
        let inst = forcing_instance(n, g, 3, SEED ^ (i << 8)).map_err(|e| e.to_string())?;
        let m = inst.m();
        if let Some(s) = inst.sets().iter().find(|s| s.len() * g * g > n) {
            return Err(format!("instance {i}: set {s:?} above n/g²"));
        }
        let bundle = build_host_graph(&inst, g).map_err(|e| e.to_string())?;
        if bundle.max_set_side_degree() > bundle.q {
            return Err(format!("instance {i}: forcing condition fails"));
        }
        let want_nodes = 4 + 4 * n.div_ceil(g / 2) + binomial(m, g) + m + n;
        if bundle.host.num_nodes() != want_nodes {
            return Err(format!("instance {i}: G_g has {} nodes, closed form {want_nodes}", bundle.host.num_nodes()));
        }
        for alpha in enumerate_partitions(n) {
            let got = build_pattern_tree(&alpha, g, n).k();
            let want = tree_size_closed_form(alpha.len(), g, n);
            if got != want {
                return Err(format!("instance {i}: T_g^{:?} has {got} nodes, closed form {want}", alpha.parts()));
            }
        }
        let split = setcover_preprocess_large(&inst, g, &caps).map_err(|e| e.to_string())?;
        let small = setcover_to_ktree(&split.residual, g, &mut backtrack).map_err(|e| e.to_string())?;
        let got = [split.large_best.map(|b| b.0), small.answer.optimum()].into_iter().flatten().min();
        let dp = setcover_dp(&inst, &caps).map_err(|e| e.to_string())?.answer.optimum();
        let brute = oracle_setcover(&inst);
        if got != dp || dp != brute {
            return Err(format!("instance {i}: kTree {got:?}, DP {dp:?}, brute force {brute:?}"));
        }
        Ok(())
    });
    verdict(errs, "25 crafted instances, n ∈ 8..12, g = 2".into())
}

fn criterion5() -> Verdict {
    let caps = Caps::default();
    let trials: Vec<u64> = (0..60).collect();
    let errs = errors(trials, |i| {
        let mut r = rng(5, i);
        let n = r.gen_range(1..=8);
        let p = r.gen_range(0..=n);
        let params = SetParams {
            n,
            m: r.gen_range(1..=8),
            max_set_size: r.gen_range(1..=n),
            distinct: false,
        };
        let inst = random_setcover(params, Variant::Partial(p), r.gen()).map_err(|e| e.to_string())?;
        let streamed = enumerate_partitions(p).count();
        let counted = count_partitions(p);
        if counted != streamed.into() || streamed != oracle_partitions(p).len() {
            return Err(format!("p = {p}: {streamed} streamed, {counted} counted"));
        }
        let got = ppc_via_ktree(&inst, 2, &caps, &mut backtrack).map_err(|e| e.to_string())?.answer.optimum();
        let dp = partialcover_dp(&inst, &caps).map_err(|e| e.to_string())?.answer.optimum();
        let brute = oracle_partialcover(&inst, p);
        if got != dp || dp != brute {
            return Err(format!("instance {i} (n {n}, p {p}): kTree {got:?}, DP {dp:?}, brute force {brute:?}"));
        }
        Ok(())
    });
    verdict(errs, "60 instances, p ≤ n ≤ 8, g = 2".into())
}

fn criterion6() -> Verdict {
    let caps = Caps::default();
    let trials: Vec<u64> = (0..120).collect();
    let errs = errors(trials, |i| {
        let mut r = rng(6, i);
        let n = r.gen_range(1..=12);
        let delta = [2, 3][i as usize % 2];
        let params = SetParams {
            n,
            m: r.gen_range(1..=12),
            max_set_size: r.gen_range(1..=n),
            distinct: false,
        };
        let inst = random_setcover(params, Variant::Exact, r.gen()).map_err(|e| e.to_string())?;
        let a = exactcover_with_large_sets(&inst, delta, &caps).map_err(|e| e.to_string())?.answer.optimum();
        let b = exactcover_solve(&inst, &caps).map_err(|e| e.to_string())?.answer.optimum();
        let brute = oracle_exactcover(&inst);
        if a != b || b != brute {
            return Err(format!("instance {i} (Δ {delta}): split {a:?}, plain {b:?}, brute force {brute:?}"));
        }
        Ok(())
    });
    verdict(errs, "120 instances, n ≤ 12, Δ ∈ {2,3}".into())
}

fn criterion7() -> Verdict {
    let mut errs = Vec::new();
    for (a, want) in [(5usize, 7u32), (10, 42)] {
        let brute = oracle_partitions(a).len();
        if count_partitions(a) != want.into() || brute != want as usize {
            errs.push(format!("p({a}) = {}, brute force {brute}", count_partitions(a)));
        }
    }
    for a in 0..=30 {
        let streamed: Vec<Vec<usize>> = enumerate_partitions(a).map(|p| p.parts().to_vec()).collect();
        let mut sorted: Vec<Vec<usize>> = streamed
            .iter()
            .map(|p| {
                let mut q = p.clone();
                q.sort_unstable_by(|x, y| y.cmp(x));
                q
            })
            .collect();
        sorted.sort();
        let mut oracle: Vec<Vec<usize>> = oracle_partitions(a);
        oracle.sort();
        if count_partitions(a) != streamed.len().into() || sorted != oracle {
            errs.push(format!("a = {a}: {} streamed, {} brute force", streamed.len(), oracle.len()));
        }
    }
    verdict(errs, "p(5) = 7, p(10) = 42, streams match for a ≤ 30".into())
}

fn criterion8() -> Verdict {
    let mut errs = Vec::new();
    for d in 2..=10_000usize {
        let lambda = cover_lambda(d).unwrap();
        let df = d as f64;
        let own = (2.0 * df - 2.0) / ((2.0 * df - 1.0).powi(2) - 2.0 * std::f64::consts::LN_2).sqrt();
        if (lambda - own).abs() > 1e-12 || lambda > 1.0 - 1.0 / (2.0 * df) {
            errs.push(format!("λ_{d} = {lambda}"));
            break;
        }
    }
    let eps = 0.1;
    // log2(ñ^Δ + ñ^{ñ/Δ} · 2^{(1−ε)(ñ + 9ñ/Δ)}), computed directly
    let exponent = |nt: f64| {
        let delta = 81.0 / eps * nt.log2();
        let a = delta * nt.log2();
        let b = nt / delta * nt.log2() + (1.0 - eps) * (nt + 9.0 * nt / delta);
        let (hi, lo) = if a > b { (a, b) } else { (b, a) };
        hi + (1.0 + (lo - hi).exp2()).log2()
    };
    let threshold = speedup_threshold(eps);
    match threshold {
        None => errs.push("no threshold found".into()),
        Some(t) => {
            let mut points: Vec<u64> = (t..t + 20_000).collect();
            points.extend((1..=40).map(|s| t << s));
            for x in points {
                let nt = x as f64;
                let lib = compose_runtime(nt, 81.0 / eps * nt.log2(), &|n, _| (1.0 - eps) * n);
                let own = exponent(nt);
                if (lib - own).abs() > LOG2_TOL * nt.max(1.0) || own > nt - eps * nt / 2.0 + LOG2_TOL {
                    errs.push(format!("ñ = {x}: exponent {own}, library {lib}, cap {}", nt - eps * nt / 2.0));
                    break;
                }
            }
            if exponent((t - 1) as f64) <= (t - 1) as f64 * (1.0 - eps / 2.0) {
                errs.push(format!("threshold {t} is not minimal"));
            }
        }
    }
    verdict(errs, format!("λ_Δ for Δ ≤ 10^4; ε = 0.1 threshold ñ = {}", threshold.unwrap_or(0)))
}

fn criterion9() -> Verdict {
    let caps = Caps::default();
    let trials: Vec<u64> = (0..50).collect();
    let results: Vec<Result<bool, String>> = trials
        .into_par_iter()
        .map(|i| {
            let mut r = rng(9, i);
            let (g, t, planted) =
                planted_tree(8, 16, 24, TreeOrientation::Random, r.gen()).map_err(|e| e.to_string())?;
            if !oracle_embedding_ok(&g, &t, &planted) {
                return Err(format!("instance {i}: planted map invalid"));
            }
            let res = ktree_colorcoding(&g, &t, 0.01, r.gen(), &caps).map_err(|e| e.to_string())?;
            match res.embedding() {
                Some(map) if oracle_embedding_ok(&g, &t, map) => Ok(true),
                Some(map) => Err(format!("instance {i}: embedding {map:?} invalid")),
                None => Ok(false),
            }
        })
        .collect();
    let yes = results.iter().filter(|r| matches!(r, Ok(true))).count();
    let mut errs: Vec<String> = results.into_iter().filter_map(Result::err).collect();
    if yes < 49 {
        errs.push(format!("only {yes} of 50 answered yes"));
    }
    verdict(errs, format!("50 planted k = 8 instances, q = 0.01, {yes} yes"))
}

type Criterion = (u32, Duration, fn() -> Verdict);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        (1, Duration::from_secs(60), criterion1),
        (2, Duration::from_secs(600), criterion2),
        (3, Duration::from_secs(600), criterion3),
        (4, Duration::from_secs(1800), criterion4),
        (5, Duration::from_secs(600), criterion5),
        (6, Duration::from_secs(60), criterion6),
        (7, Duration::from_secs(60), criterion7),
        (8, Duration::from_secs(60), criterion8),
        (9, Duration::from_secs(600), criterion9),
    ];
    let mut failed = 0;
    for (id, limit, run) in criteria {
        let start = Instant::now();
        let v = run();
        let took = start.elapsed();
        let ok = v.ok && took <= limit;
        failed += !ok as usize;
        println!(
            "{} criterion {id}: {} [{:.1}s of {}s]",
            if ok { "PASS" } else { "FAIL" },
            v.detail,
            took.as_secs_f64(),
            limit.as_secs()
        );
    }
    println!("acceptance: {} of 9 criteria passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
