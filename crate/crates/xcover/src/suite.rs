//! Differential verification of every reduction against direct solvers.
//!
//! Each family draws its trials from a ChaCha stream keyed by the family and
//! the trial index, runs them on the rayon pool and reports them in trial
//! order, so a rerun with the same configuration is byte-identical.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use xcover_core::analysis::BoundReport;
use xcover_core::generate::{planted_blocks, planted_tree, random_digraph, random_setcover, random_tree, SetParams};
use xcover_core::generate::TreeOrientation;
use xcover_core::partitions::{count_partitions, enumerate_partitions};
use xcover_core::reductions::{
    build_host_graph, build_pattern_tree, check_cover_properties, ham_to_setcover, ntree_to_setcover,
    ppc_via_ktree, setcover_via_ktree, solve_ham_via_setcover, solve_ntree_via_setcover, tree_cover, CoverSolver,
    NtreeVariant,
};
use xcover_core::solvers::{
    exactcover_solve, exactcover_with_large_sets, heldkarp_ham, ktree_colorcoding, partialcover_dp, setcover_dp,
    tree_embed_backtrack, verify_cover, verify_embedding, verify_exact_cover, verify_partial_cover, EmbedQuery,
};
use xcover_core::{Caps, Digraph, PatternTree, SetCoverInstance, SolveError, SolveResult, Variant};

use crate::format::{serialize, Instance};
use crate::record::TOOL_VERSION;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VariantFlag {
    Anchored,
    /// Pins only the subtree roots.
    #[serde(rename = "paper")]
    RootsOnly,
}

impl From<VariantFlag> for NtreeVariant {
    fn from(v: VariantFlag) -> Self {
        match v {
            VariantFlag::Anchored => NtreeVariant::Anchored,
            VariantFlag::RootsOnly => NtreeVariant::RootsOnly,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TreeCoverConfig {
    pub trials: usize,
    pub max_k: usize,
}

impl Default for TreeCoverConfig {
    fn default() -> Self {
        TreeCoverConfig { trials: 1000, max_k: 200 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NtreeConfig {
    pub trials: usize,
    pub min_n: usize,
    pub max_n: usize,
    pub delta: usize,
    /// Cycled through by trial index.
    pub edge_probabilities: Vec<f64>,
}

impl Default for NtreeConfig {
    fn default() -> Self {
        NtreeConfig {
            trials: 120,
            min_n: 4,
            max_n: 7,
            delta: 6,
            edge_probabilities: vec![0.3, 0.45, 0.6],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HamConfig {
    pub trials: usize,
    /// Cycled through by trial index; each size is tested with Δ = 2 and Δ = n/2.
    pub sizes: Vec<usize>,
    pub edge_probabilities: Vec<f64>,
}

impl Default for HamConfig {
    fn default() -> Self {
        HamConfig {
            trials: 120,
            sizes: vec![4, 6, 8, 10],
            edge_probabilities: vec![0.3, 0.45, 0.6],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SetcoverKtreeConfig {
    pub trials: usize,
    pub min_n: usize,
    pub max_n: usize,
    pub g: usize,
    pub decoys: usize,
}

impl Default for SetcoverKtreeConfig {
    fn default() -> Self {
        SetcoverKtreeConfig {
            trials: 25,
            min_n: 8,
            max_n: 12,
            g: 2,
            decoys: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PartialKtreeConfig {
    pub trials: usize,
    pub max_n: usize,
    pub max_m: usize,
    pub g: usize,
}

impl Default for PartialKtreeConfig {
    fn default() -> Self {
        PartialKtreeConfig {
            trials: 60,
            max_n: 8,
            max_m: 8,
            g: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExactCoverConfig {
    pub trials: usize,
    pub max_n: usize,
    pub max_m: usize,
    pub deltas: Vec<usize>,
}

impl Default for ExactCoverConfig {
    fn default() -> Self {
        ExactCoverConfig {
            trials: 120,
            max_n: 12,
            max_m: 12,
            deltas: vec![2, 3],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PartitionConfig {
    pub max_a: usize,
}

impl Default for PartitionConfig {
    fn default() -> Self {
        PartitionConfig { max_a: 30 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ColorCodingConfig {
    pub trials: usize,
    pub k: usize,
    pub host_nodes: usize,
    pub extra_edges: usize,
    pub failure_prob: f64,
}

impl Default for ColorCodingConfig {
    fn default() -> Self {
        ColorCodingConfig {
            trials: 50,
            k: 8,
            host_nodes: 16,
            extra_edges: 24,
            failure_prob: 0.01,
        }
    }
}

/// Families with zero trials are skipped.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    pub seed: u64,
    pub variant: VariantFlag,
    /// Expansion budget of every backtracking embedding call.
    pub budget: u64,
    pub tree_cover: TreeCoverConfig,
    pub ntree: NtreeConfig,
    pub ham: HamConfig,
    pub setcover_ktree: SetcoverKtreeConfig,
    pub partial_ktree: PartialKtreeConfig,
    pub exact_cover: ExactCoverConfig,
    pub partitions: PartitionConfig,
    pub colorcoding: ColorCodingConfig,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 2024,
            variant: VariantFlag::Anchored,
            budget: 100_000_000,
            tree_cover: TreeCoverConfig::default(),
            ntree: NtreeConfig::default(),
            ham: HamConfig::default(),
            setcover_ktree: SetcoverKtreeConfig::default(),
            partial_ktree: PartialKtreeConfig::default(),
            exact_cover: ExactCoverConfig::default(),
            partitions: PartitionConfig::default(),
            colorcoding: ColorCodingConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub trial: usize,
    pub seed: u64,
    pub detail: String,
    /// Serialized instances, minimized where a minimizer applies.
    pub witness: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyReport {
    pub name: String,
    pub trials: usize,
    pub passed: usize,
    pub failed: usize,
    pub failures: Vec<Failure>,
    /// Family-specific counters summed over trials.
    pub stats: BTreeMap<String, u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundEntry {
    pub family: String,
    pub trial: usize,
    pub ntilde: usize,
    pub delta: usize,
    pub variant: String,
    pub declared_count_log2: f64,
    pub realized_count: u64,
    pub declared_elements: f64,
    pub realized_max_elements: usize,
    pub composed_runtime_log2: f64,
    pub within: bool,
}

/// A roots-only nTree acceptance that no embedding backs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Discrepancy {
    pub trial: usize,
    pub seed: u64,
    pub original_edges: usize,
    pub minimized_edges: usize,
    pub witness: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub version: &'static str,
    pub config: SuiteConfig,
    pub families: Vec<FamilyReport>,
    pub bounds: Vec<BoundEntry>,
    pub discrepancies: Vec<Discrepancy>,
    pub total_trials: usize,
    pub total_failures: usize,
}

impl SuiteReport {
    pub fn family(&self, name: &str) -> Option<&FamilyReport> {
        self.families.iter().find(|f| f.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Default)]
struct Outcome {
    failures: Vec<String>,
    witness: Vec<String>,
    stats: Vec<(&'static str, u64)>,
    bounds: Vec<BoundEntry>,
    discrepancy: Option<Discrepancy>,
}

impl Outcome {
    fn fail(&mut self, msg: String) {
        self.failures.push(msg);
    }

    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(msg());
        }
    }

    fn count(&mut self, key: &'static str, v: u64) {
        self.stats.push((key, v));
    }
}

/// Trial `i` of family `f` draws from stream `(f << 32) | i`.
fn trial_rng(base: u64, family: u64, trial: usize) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(base);
    r.set_stream((family << 32) | trial as u64);
    r
}

struct Family<'a> {
    name: &'static str,
    index: u64,
    trials: usize,
    run: Box<dyn Fn(usize, u64) -> Result<Outcome, SolveError> + Sync + 'a>,
}

fn run_family(base: u64, fam: &Family<'_>) -> (FamilyReport, Vec<BoundEntry>, Vec<Discrepancy>) {
    let outcomes: Vec<(u64, Outcome)> = (0..fam.trials)
        .into_par_iter()
        .map(|i| {
            let seed = trial_rng(base, fam.index, i).gen::<u64>();
            let out = match catch_unwind(AssertUnwindSafe(|| (fam.run)(i, seed))) {
                Ok(Ok(o)) => o,
                Ok(Err(e)) => Outcome {
                    failures: vec![format!("error: {e}")],
                    ..Outcome::default()
                },
                Err(p) => {
                    let msg = p
                        .downcast_ref::<String>()
                        .cloned()
                        .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                        .unwrap_or_default();
                    Outcome {
                        failures: vec![format!("panic: {msg}")],
                        ..Outcome::default()
                    }
                }
            };
            (seed, out)
        })
        .collect();
    let mut report = FamilyReport {
        name: fam.name.to_string(),
        trials: fam.trials,
        passed: 0,
        failed: 0,
        failures: Vec::new(),
        stats: BTreeMap::new(),
    };
    let mut bounds = Vec::new();
    let mut discrepancies = Vec::new();
    for (trial, (seed, out)) in outcomes.into_iter().enumerate() {
        for (k, v) in out.stats {
            *report.stats.entry(k.to_string()).or_default() += v;
        }
        bounds.extend(out.bounds);
        discrepancies.extend(out.discrepancy);
        if out.failures.is_empty() {
            report.passed += 1;
        } else {
            report.failed += 1;
            report.failures.push(Failure {
                trial,
                seed,
                detail: out.failures.join("; "),
                witness: out.witness,
            });
        }
    }
    (report, bounds, discrepancies)
}

fn backtrack(budget: u64) -> impl Fn(&Digraph, &PatternTree) -> Result<SolveResult, SolveError> {
    move |g, t| tree_embed_backtrack(&EmbedQuery::new(g, t), budget)
}

/// Deletes edges one at a time, keeping each deletion under which `bad` still holds.
pub fn minimize_edges(g: &Digraph, bad: impl Fn(&Digraph) -> bool) -> Digraph {
    let mut cur = g.clone();
    'shrink: loop {
        for i in 0..cur.num_edges() {
            let cand = cur.without_edge(i);
            if bad(&cand) {
                cur = cand;
                continue 'shrink;
            }
        }
        return cur;
    }
}

/// Deletes sets one at a time, keeping each deletion under which `bad` still holds.
pub fn minimize_sets(inst: &SetCoverInstance, bad: impl Fn(&SetCoverInstance) -> bool) -> SetCoverInstance {
    let mut cur = inst.clone();
    'shrink: loop {
        for i in 0..cur.m() {
            let keep: Vec<usize> = (0..cur.m()).filter(|&j| j != i).collect();
            let cand = cur.subcollection(&keep);
            if bad(&cand) {
                cur = cand;
                continue 'shrink;
            }
        }
        return cur;
    }
}

fn text_of_graph(g: &Digraph) -> String {
    serialize(&Instance::Graph(g.clone()))
}

fn text_of_tree(t: &PatternTree) -> String {
    serialize(&Instance::Tree(t.clone()))
}

fn text_of_sets(s: &SetCoverInstance) -> String {
    serialize(&Instance::Sets(s.clone()))
}

fn bound_entry(family: &str, trial: usize, variant: &str, r: BoundReport) -> BoundEntry {
    BoundEntry {
        family: family.to_string(),
        trial,
        ntilde: r.ntilde,
        delta: r.delta,
        variant: variant.to_string(),
        declared_count_log2: r.declared_count_log2,
        realized_count: r.realized_count,
        declared_elements: r.declared_elements,
        realized_max_elements: r.realized_max_elements,
        composed_runtime_log2: r.composed_runtime_log2,
        within: r.within(),
    }
}

fn tree_cover_trial(cfg: &TreeCoverConfig, seed: u64) -> Result<Outcome, SolveError> {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let k = r.gen_range(1..=cfg.max_k.max(1));
    let l = r.gen_range(2..=k.max(2));
    let t = random_tree(k, TreeOrientation::Undirected, r.gen())?;
    let cover = tree_cover(&t, l)?;
    let rep = check_cover_properties(&t, &cover, l);
    let mut out = Outcome::default();
    out.count("subtrees", cover.subtrees.len() as u64);
    if !rep.passed() {
        out.fail(format!("k = {k}, l = {l}: {}", rep.violations.join(", ")));
        out.witness.push(text_of_tree(&t));
    }
    Ok(out)
}

fn ntree_trial(cfg: &NtreeConfig, variant: NtreeVariant, budget: u64, i: usize, seed: u64) -> Result<Outcome, SolveError> {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let n = r.gen_range(cfg.min_n..=cfg.max_n.max(cfg.min_n));
    let p = cfg.edge_probabilities[i % cfg.edge_probabilities.len()];
    let orientation = if i.is_multiple_of(4) { TreeOrientation::Undirected } else { TreeOrientation::Random };
    let undirected = orientation == TreeOrientation::Undirected;
    let g = random_digraph(n, p, undirected, r.gen())?;
    let t = random_tree(n, orientation, r.gen())?;
    let truth = |g: &Digraph| -> Result<bool, SolveError> { Ok(backtrack(budget)(g, &t)?.answer.is_yes()) };
    let via = |g: &Digraph| solve_ntree_via_setcover(g, &t, cfg.delta, variant, &CoverSolver::Search);

    let mut out = Outcome::default();
    let want = truth(&g)?;
    let v = via(&g)?;
    out.count("yes", v.yes as u64);
    out.count("embeddable", want as u64);
    if v.yes {
        out.count("accepting_cover_disjoint", v.cover_disjoint as u64);
    }
    match variant {
        NtreeVariant::Anchored => {
            if v.yes != want {
                out.fail(format!("reduction says {} but an embedding {} exist", v.yes, if want { "does" } else { "does not" }));
                let small = minimize_edges(&g, |h| matches!((truth(h), via(h)), (Ok(a), Ok(b)) if a != b.yes));
                out.witness = vec![text_of_graph(&small), text_of_tree(&t)];
            } else if v.yes && !v.certificate_valid {
                out.fail("decoded embedding rejected by the checker".to_string());
                out.witness = vec![text_of_graph(&g), text_of_tree(&t)];
            }
        }
        NtreeVariant::RootsOnly => {
            if want && !v.yes {
                out.fail("roots-only reduction rejects an embeddable pair".to_string());
                out.witness = vec![text_of_graph(&g), text_of_tree(&t)];
            }
            if v.yes && !v.certificate_valid {
                out.count("invalid_decoded_embeddings", 1);
            }
            if v.yes && !want {
                let bad = |h: &Digraph| matches!((truth(h), via(h)), (Ok(false), Ok(b)) if b.yes);
                let small = minimize_edges(&g, bad);
                out.discrepancy = Some(Discrepancy {
                    trial: i,
                    seed,
                    original_edges: g.num_edges(),
                    minimized_edges: small.num_edges(),
                    witness: vec![text_of_graph(&small), text_of_tree(&t)],
                });
            }
        }
    }

    let mut batch = ntree_to_setcover(&g, &t, cfg.delta, variant)?;
    let mut oversized = 0;
    for p in batch.by_ref() {
        if p.instance.max_set_size() > cfg.delta {
            oversized += 1;
        }
    }
    if let Some(e) = batch.take_error() {
        return Err(e);
    }
    out.count("instances", batch.realized().produced);
    out.check(oversized == 0, || format!("{oversized} instances hold a set larger than Δ"));
    let rep = BoundReport::new(n, cfg.delta, batch.declared(), batch.realized());
    out.check(rep.within(), || format!("bounds exceeded: {rep:?}"));
    let name = match variant {
        NtreeVariant::Anchored => "anchored",
        NtreeVariant::RootsOnly => "paper",
    };
    out.bounds.push(bound_entry("ntree", i, name, rep));
    if !out.failures.is_empty() && out.witness.is_empty() {
        out.witness = vec![text_of_graph(&g), text_of_tree(&t)];
    }
    Ok(out)
}

fn ham_trial(cfg: &HamConfig, caps: &Caps, i: usize, seed: u64) -> Result<Outcome, SolveError> {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let n = cfg.sizes[i % cfg.sizes.len()];
    let p = cfg.edge_probabilities[(i / cfg.sizes.len()) % cfg.edge_probabilities.len()];
    let g = random_digraph(n, p, false, r.gen())?;
    let truth = |g: &Digraph| -> Result<bool, SolveError> { Ok(heldkarp_ham(g, caps)?.answer.is_yes()) };
    let mut out = Outcome::default();
    let want = truth(&g)?;
    out.count("hamiltonian", want as u64);
    let mut deltas = vec![2, n / 2];
    deltas.dedup();
    for delta in deltas {
        let via = |g: &Digraph| solve_ham_via_setcover(g, delta, &CoverSolver::Search);
        let v = via(&g)?;
        if v.yes != want {
            out.fail(format!("Δ = {delta}: reduction says {}, Held–Karp says {want}", v.yes));
            let small = minimize_edges(&g, |h| matches!((truth(h), via(h)), (Ok(a), Ok(b)) if a != b.yes));
            out.witness = vec![text_of_graph(&small)];
        }
        if v.yes {
            out.check(v.certificate_valid, || format!("Δ = {delta}: decoded cycle rejected"));
            out.check(v.cover_disjoint, || format!("Δ = {delta}: accepting cover not pairwise disjoint"));
        }
        let mut batch = ham_to_setcover(&g, delta)?;
        let mut wrong_size = 0;
        for p in batch.by_ref() {
            wrong_size += p.instance.sets().iter().filter(|s| s.len() != delta).count();
        }
        out.count("instances", batch.realized().produced);
        out.check(wrong_size == 0, || format!("Δ = {delta}: {wrong_size} sets of size other than Δ"));
        let rep = BoundReport::new(n, delta, batch.declared(), batch.realized());
        out.check(rep.within(), || format!("bounds exceeded: {rep:?}"));
        out.bounds.push(bound_entry("ham", i, "ham", rep));
    }
    if !out.failures.is_empty() && out.witness.is_empty() {
        out.witness = vec![text_of_graph(&g)];
    }
    Ok(out)
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Independent closed forms for the host graph and pattern tree sizes.
pub fn expected_host_nodes(n: usize, m: usize, g: usize) -> usize {
    4 + 4 * (2 * n).div_ceil(g) + binomial(m, g) + m + n
}

pub fn expected_tree_nodes(parts: usize, g: usize, total: usize) -> usize {
    4 + 4 * (2 * total).div_ceil(g) + parts / g + parts % g + total
}

/// A planted small-set instance whose host graph passes the forcing check.
pub fn forcing_instance(n: usize, g: usize, decoys: usize, seed: u64) -> Result<SetCoverInstance, SolveError> {
    let size = (n / (g * g)).max(1);
    for attempt in 0..64 {
        let (inst, _) = planted_blocks(n, size, decoys, seed.wrapping_add(attempt))?;
        let b = build_host_graph(&inst, g)?;
        if b.max_set_side_degree() <= b.q {
            return Ok(inst);
        }
    }
    Err(SolveError::Precondition(format!("no instance with n = {n} passes the forcing check")))
}

fn setcover_ktree_trial(cfg: &SetcoverKtreeConfig, caps: &Caps, i: usize, seed: u64) -> Result<Outcome, SolveError> {
    let span = cfg.max_n.saturating_sub(cfg.min_n) + 1;
    let n = cfg.min_n + i % span;
    let g = cfg.g;
    let inst = forcing_instance(n, g, cfg.decoys, seed)?;
    let mut out = Outcome::default();
    let bundle = build_host_graph(&inst, g)?;
    let want_nodes = expected_host_nodes(n, inst.m(), g);
    out.check(bundle.host.num_nodes() == want_nodes, || {
        format!("host graph has {} nodes, expected {want_nodes}", bundle.host.num_nodes())
    });
    for alpha in enumerate_partitions(n) {
        let k = build_pattern_tree(&alpha, g, n).k();
        let want = expected_tree_nodes(alpha.len(), g, n);
        out.check(k == want, || format!("tree for {:?} has {k} nodes, expected {want}", alpha.parts()));
    }
    let dp = setcover_dp(&inst, caps)?;
    let solver = backtrack(caps.embed_budget);
    let got = setcover_via_ktree(&inst, g, caps, &mut |h, t| solver(h, t))?;
    out.count("trees_tried", got.stats.explored);
    if got.answer != dp.answer {
        out.fail(format!("kTree pipeline {:?}, subset DP {:?}", got.answer, dp.answer));
    } else if let Some(c) = got.sets() {
        out.check(verify_cover(&inst, c) && Some(c.len()) == got.answer.optimum(), || {
            format!("decoded cover {c:?} is not an optimal cover")
        });
    }
    if !out.failures.is_empty() {
        out.witness = vec![text_of_sets(&inst)];
    }
    Ok(out)
}

fn partial_ktree_trial(cfg: &PartialKtreeConfig, caps: &Caps, seed: u64) -> Result<Outcome, SolveError> {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let n = r.gen_range(1..=cfg.max_n.max(1));
    let p = r.gen_range(0..=n);
    let params = SetParams {
        n,
        m: r.gen_range(1..=cfg.max_m.max(1)),
        max_set_size: r.gen_range(1..=n),
        distinct: false,
    };
    let inst = random_setcover(params, Variant::Partial(p), r.gen())?;
    let mut out = Outcome::default();
    let streamed = enumerate_partitions(p).count();
    out.check(count_partitions(p) == streamed.into(), || format!("partition stream of {p} has {streamed} entries"));
    let solver = backtrack(caps.embed_budget);
    let run = |s: &SetCoverInstance| -> Result<(SolveResult, SolveResult), SolveError> {
        let got = ppc_via_ktree(s, cfg.g, caps, &mut |h, t| solver(h, t))?;
        Ok((got, partialcover_dp(s, caps)?))
    };
    let (got, dp) = run(&inst)?;
    if got.answer != dp.answer {
        out.fail(format!("p = {p}: kTree pipeline {:?}, DP {:?}", got.answer, dp.answer));
        let small = minimize_sets(&inst, |s| matches!(run(s), Ok((a, b)) if a.answer != b.answer));
        out.witness = vec![text_of_sets(&small)];
    } else if let Some(c) = got.sets() {
        out.check(verify_partial_cover(&inst, c), || format!("decoded cover {c:?} misses the target"));
    }
    Ok(out)
}

fn exact_cover_trial(cfg: &ExactCoverConfig, caps: &Caps, i: usize, seed: u64) -> Result<Outcome, SolveError> {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let n = r.gen_range(1..=cfg.max_n.max(1));
    let delta = cfg.deltas[i % cfg.deltas.len()];
    let plain = if i.is_multiple_of(2) {
        planted_blocks(n, r.gen_range(1..=n), r.gen_range(0..=cfg.max_m / 2), r.gen())?.0
    } else {
        let params = SetParams {
            n,
            m: r.gen_range(1..=cfg.max_m.max(1)),
            max_set_size: r.gen_range(1..=n),
            distinct: false,
        };
        random_setcover(params, Variant::Plain, r.gen())?
    };
    let inst = plain.with_variant(Variant::Exact)?;
    let run = |s: &SetCoverInstance| -> Result<(SolveResult, SolveResult), SolveError> {
        Ok((exactcover_with_large_sets(s, delta, caps)?, exactcover_solve(s, caps)?))
    };
    let (a, b) = run(&inst)?;
    let mut out = Outcome::default();
    out.count("feasible", b.answer.optimum().is_some() as u64);
    if a.answer != b.answer {
        out.fail(format!("Δ = {delta}: large-set split {:?}, plain {:?}", a.answer, b.answer));
        let small = minimize_sets(&inst, |s| matches!(run(s), Ok((x, y)) if x.answer != y.answer));
        out.witness = vec![text_of_sets(&small)];
    }
    for res in [&a, &b] {
        if let Some(c) = res.sets() {
            out.check(verify_exact_cover(&inst, c), || format!("{c:?} is not an exact cover"));
        }
    }
    Ok(out)
}

/// Non-increasing sequences summing to `a`, by plain recursion.
fn naive_partitions(a: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            cur.push(p);
            go(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(a, a, &mut Vec::new(), &mut out);
    out
}

fn partition_trial(a: usize) -> Result<Outcome, SolveError> {
    let stream: Vec<Vec<usize>> = enumerate_partitions(a).map(|p| p.parts().to_vec()).collect();
    let mut out = Outcome::default();
    let distinct: BTreeSet<&Vec<usize>> = stream.iter().collect();
    out.check(distinct.len() == stream.len(), || format!("a = {a}: repeated partitions"));
    out.check(count_partitions(a) == stream.len().into(), || {
        format!("a = {a}: {} streamed, {} counted", stream.len(), count_partitions(a))
    });
    out.check(stream == naive_partitions(a), || format!("a = {a}: stream differs from the naive enumerator"));
    out.count("partitions", stream.len() as u64);
    Ok(out)
}

fn colorcoding_trial(cfg: &ColorCodingConfig, caps: &Caps, seed: u64) -> Result<Outcome, SolveError> {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let (g, t, planted) = planted_tree(cfg.k, cfg.host_nodes, cfg.extra_edges, TreeOrientation::Random, r.gen())?;
    let mut out = Outcome::default();
    out.check(verify_embedding(&g, &t, &planted), || "planted embedding rejected".to_string());
    let res = ktree_colorcoding(&g, &t, cfg.failure_prob, r.gen(), caps)?;
    out.count("trials_run", res.stats.explored);
    match res.embedding() {
        Some(map) => {
            out.count("yes", 1);
            out.check(verify_embedding(&g, &t, map), || format!("embedding {map:?} rejected"));
        }
        None => out.count("missed", 1),
    }
    if !out.failures.is_empty() {
        out.witness = vec![text_of_graph(&g), text_of_tree(&t)];
    }
    Ok(out)
}

/// Runs every family on the current rayon pool.
pub fn run_verification_suite(config: &SuiteConfig, caps: &Caps) -> SuiteReport {
    let caps = Caps {
        embed_budget: config.budget,
        ..*caps
    };
    let c = config;
    let families = [Family {
            name: "tree_cover",
            index: 1,
            trials: c.tree_cover.trials,
            run: Box::new(|_, s| tree_cover_trial(&c.tree_cover, s)),
        },
        Family {
            name: "ntree",
            index: 2,
            trials: c.ntree.trials,
            run: Box::new(|i, s| ntree_trial(&c.ntree, c.variant.into(), caps.embed_budget, i, s)),
        },
        Family {
            name: "ham",
            index: 3,
            trials: c.ham.trials,
            run: Box::new(|i, s| ham_trial(&c.ham, &caps, i, s)),
        },
        Family {
            name: "setcover_ktree",
            index: 4,
            trials: c.setcover_ktree.trials,
            run: Box::new(|i, s| setcover_ktree_trial(&c.setcover_ktree, &caps, i, s)),
        },
        Family {
            name: "partial_ktree",
            index: 5,
            trials: c.partial_ktree.trials,
            run: Box::new(|_, s| partial_ktree_trial(&c.partial_ktree, &caps, s)),
        },
        Family {
            name: "exact_cover",
            index: 6,
            trials: c.exact_cover.trials,
            run: Box::new(|i, s| exact_cover_trial(&c.exact_cover, &caps, i, s)),
        },
        Family {
            name: "partitions",
            index: 7,
            trials: c.partitions.max_a + 1,
            run: Box::new(|a, _| partition_trial(a)),
        },
        Family {
            name: "colorcoding",
            index: 8,
            trials: c.colorcoding.trials,
            run: Box::new(|_, s| colorcoding_trial(&c.colorcoding, &caps, s)),
        }];
    let mut report = SuiteReport {
        version: TOOL_VERSION,
        config: config.clone(),
        families: Vec::new(),
        bounds: Vec::new(),
        discrepancies: Vec::new(),
        total_trials: 0,
        total_failures: 0,
    };
    for fam in families.iter().filter(|f| f.trials > 0) {
        let (fr, bounds, disc) = run_family(config.seed, fam);
        report.total_trials += fr.trials;
        report.total_failures += fr.failed;
        report.families.push(fr);
        report.bounds.extend(bounds);
        report.discrepancies.extend(disc);
    }
    report
}
