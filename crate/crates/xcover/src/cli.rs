//! Command-line driver. Records go to `out` as JSON lines, diagnostics to `err`.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};
use xcover_core::analysis::{
    compose_runtime, cover_lambda, log2_sum, speedup_delta, speedup_exponent, speedup_slack,
    speedup_threshold, BoundReport,
};
use xcover_core::generate::{
    planted_blocks, planted_ham_cycle, planted_tree, random_digraph, random_setcover, random_tree, SetParams,
    TreeOrientation,
};
use xcover_core::partitions::{count_partitions, enumerate_partitions, partition_asymptotic, shrink_partition};
use xcover_core::reductions::{
    build_host_graph, build_partial_host_graph, build_pattern_tree, ham_to_setcover, ntree_to_setcover,
    pairwise_disjoint, ppc_via_ktree, setcover_via_ktree, CoverSolver, NtreeVariant, Produced,
};
use xcover_core::solvers::{
    exactcover_solve, exactcover_with_large_sets, heldkarp_ham, ktree_colorcoding, partialcover_dp,
    setcover_bruteforce, setcover_dp, tree_embed_backtrack, verify_embedding, verify_ham_cycle, EmbedQuery,
};
use xcover_core::{Caps, Digraph, PatternTree, SetCoverInstance, SolveError, SolveResult, Variant};

use crate::format::{parse_instance, serialize, serialize_with_comments, FormatError, Instance};
use crate::record::{digest, RunRecord};
use crate::suite::{run_verification_suite, SuiteConfig, VariantFlag};

#[derive(Debug, Parser)]
#[command(name = "xcover", version, about = "Set Cover and tree-pattern reductions with exact solvers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Worker threads for pipelines and the verification suite.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Add wall-clock milliseconds to each record's stats.
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a direct solver on an instance file.
    Solve {
        kind: SolveKind,
        /// Instance file(s); `ham` takes a digraph, `ktree`/`ktree-cc` take a graph then a tree.
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long)]
        delta: Option<usize>,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Write the instances a reduction produces.
    Reduce {
        which: ReductionKind,
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[command(flatten)]
        red: ReductionArgs,
        /// Directory for the produced instance files.
        #[arg(long)]
        emit_dir: Option<PathBuf>,
    },
    /// Reduce and solve, emitting a verdict.
    Pipeline {
        which: ReductionKind,
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[command(flatten)]
        red: ReductionArgs,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Run the differential verification suite.
    Verify {
        /// JSON configuration; missing fields take their defaults.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Where to write the full report.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum)]
        variant: Option<VariantArg>,
        /// Overrides the trial count of every family.
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Evaluate the counting and running-time bounds.
    Bounds {
        #[arg(long)]
        ntilde: u64,
        #[arg(long)]
        delta: u64,
        #[arg(long)]
        epsilon: Option<f64>,
    },
    /// Count or list integer partitions.
    Partitions {
        #[arg(long, value_name = "A", required_unless_present = "list")]
        count: Option<usize>,
        #[arg(long, value_name = "A")]
        list: Option<usize>,
        /// Also show the shrunk representation with groups of this size.
        #[arg(long)]
        g: Option<usize>,
    },
    /// Generate a random or planted instance.
    Generate {
        kind: GenerateKind,
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long, default_value_t = 8)]
        m: usize,
        #[arg(long)]
        max_set_size: Option<usize>,
        /// Partial-cover target.
        #[arg(long)]
        p: Option<usize>,
        /// Pattern size for planted trees.
        #[arg(long, default_value_t = 5)]
        k: usize,
        #[arg(long, default_value_t = 0.3)]
        edge_prob: f64,
        /// Extra edges or decoy sets around a planted structure.
        #[arg(long, default_value_t = 0)]
        extra: usize,
        #[arg(long, value_enum, default_value_t = OrientationArg::Random)]
        orientation: OrientationArg,
        #[arg(long)]
        distinct: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write instance files here instead of embedding them in the record.
        #[arg(long)]
        emit_dir: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct SearchArgs {
    /// Use color coding with this failure probability for tree embedding.
    #[arg(long)]
    pub failure_prob: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Expansion budget of the backtracking embedder.
    #[arg(long)]
    pub budget: Option<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct ReductionArgs {
    #[arg(long)]
    pub delta: Option<usize>,
    #[arg(long)]
    pub g: Option<usize>,
    #[arg(long, value_enum, default_value_t = VariantArg::Anchored)]
    pub variant: VariantArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolveKind {
    Setcover,
    SetcoverBrute,
    Exactcover,
    Partialcover,
    Ham,
    Ktree,
    KtreeCc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReductionKind {
    #[value(name = "ntree-to-sc", alias = "ntree")]
    NtreeToSc,
    #[value(name = "ham-to-sc", alias = "ham")]
    HamToSc,
    #[value(name = "sc-to-ktree", alias = "sc-ktree")]
    ScToKtree,
    #[value(name = "ppc-to-ktree", alias = "ppc-ktree")]
    PpcToKtree,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Anchored,
    /// Pins only the subtree roots.
    #[value(name = "paper")]
    RootsOnly,
}

impl From<VariantArg> for NtreeVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Anchored => NtreeVariant::Anchored,
            VariantArg::RootsOnly => NtreeVariant::RootsOnly,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenerateKind {
    Setcover,
    Exactcover,
    Partialcover,
    Digraph,
    Graph,
    Tree,
    PlantedCover,
    PlantedHam,
    PlantedTree,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OrientationArg {
    Undirected,
    Down,
    Random,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl From<xcover_core::InstanceError> for CliError {
    fn from(e: xcover_core::InstanceError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Solve(_) => 3,
            _ => 2,
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Subset-DP width from `XCOVER_CAP_N`, defaults otherwise.
pub fn caps_from_env() -> Result<Caps, CliError> {
    let mut caps = Caps::default();
    if let Ok(v) = std::env::var("XCOVER_CAP_N") {
        caps.subset_n = v.trim().parse().map_err(|_| usage(format!("XCOVER_CAP_N={v:?} is not a number")))?;
    }
    Ok(caps)
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with(args: impl IntoIterator<Item = String>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
                return 2;
            }
            let _ = write!(out, "{text}");
            return 0;
        }
    };
    match run(&cli, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "xcover: {e}");
            e.exit_code()
        }
    }
}

struct Loaded {
    instances: Vec<Instance>,
    digest: String,
}

fn load(files: &[PathBuf]) -> Result<Loaded, CliError> {
    let mut bytes = Vec::new();
    let mut instances = Vec::new();
    for f in files {
        let data = std::fs::read(f).map_err(|e| usage(format!("{}: {e}", f.display())))?;
        let text = String::from_utf8(data.clone()).map_err(|_| usage(format!("{}: not UTF-8", f.display())))?;
        instances.push(parse_instance(&text).map_err(|e| match e {
            FormatError::Syntax { line, msg } => usage(format!("{}: line {line}: {msg}", f.display())),
            other => CliError::Format(other),
        })?);
        bytes.push(data);
    }
    let chunks: Vec<&[u8]> = bytes.iter().map(Vec::as_slice).collect();
    Ok(Loaded {
        instances,
        digest: digest(&chunks),
    })
}

fn expect_count(files: &[PathBuf], n: usize, what: &str) -> Result<(), CliError> {
    if files.len() == n {
        Ok(())
    } else {
        Err(usage(format!("expected {what}, got {} file(s)", files.len())))
    }
}

fn sets(inst: &Instance) -> Result<&SetCoverInstance, CliError> {
    match inst {
        Instance::Sets(s) => Ok(s),
        other => Err(usage(format!("expected a set system, found a {}", other.kind()))),
    }
}

fn graph(inst: &Instance) -> Result<&Digraph, CliError> {
    match inst {
        Instance::Graph(g) => Ok(g),
        other => Err(usage(format!("expected a graph, found a {}", other.kind()))),
    }
}

fn tree(inst: &Instance) -> Result<&PatternTree, CliError> {
    match inst {
        Instance::Tree(t) => Ok(t),
        other => Err(usage(format!("expected a tree, found a {}", other.kind()))),
    }
}

fn ktree_solver(
    search: &SearchArgs,
    caps: Caps,
) -> impl FnMut(&Digraph, &PatternTree) -> Result<SolveResult, SolveError> + '_ {
    move |g, t| match search.failure_prob {
        Some(q) => ktree_colorcoding(g, t, q, search.seed, &caps),
        None => tree_embed_backtrack(&EmbedQuery::new(g, t), search.budget.unwrap_or(caps.embed_budget)),
    }
}

fn finish(mut rec: RunRecord, started: Instant, timing: bool, out: &mut dyn Write) -> Result<(), CliError> {
    if timing {
        rec.stat("wall_ms", started.elapsed().as_millis() as u64);
    }
    rec.emit(out)?;
    Ok(())
}

/// Runs `f` on a pool of `jobs` workers, or on the global pool.
fn on_pool<R: Send>(jobs: Option<usize>, f: impl FnOnce() -> R + Send) -> Result<R, CliError> {
    match jobs {
        Some(j) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(j)
                .build()
                .map_err(|e| usage(format!("cannot start {j} workers: {e}")))?;
            Ok(pool.install(f))
        }
        None => Ok(f()),
    }
}

pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let caps = caps_from_env()?;
    let started = Instant::now();
    match &cli.command {
        Command::Solve {
            kind,
            files,
            delta,
            search,
        } => {
            let name = kind.to_possible_value().expect("no skipped variants").get_name().to_string();
            let loaded = load(files)?;
            let ins = &loaded.instances;
            let mut rec = RunRecord::new("solve", Some(&name));
            let r = match kind {
                SolveKind::Setcover | SolveKind::SetcoverBrute | SolveKind::Exactcover | SolveKind::Partialcover => {
                    expect_count(files, 1, "one set-system file")?;
                    let s = sets(&ins[0])?;
                    match kind {
                        SolveKind::Setcover => setcover_dp(&s.with_variant(Variant::Plain)?, &caps)?,
                        SolveKind::SetcoverBrute => setcover_bruteforce(&s.with_variant(Variant::Plain)?, &caps)?,
                        SolveKind::Exactcover => {
                            let e = s.with_variant(Variant::Exact)?;
                            match delta {
                                Some(d) => {
                                    rec = rec.param("delta", *d);
                                    exactcover_with_large_sets(&e, *d, &caps)?
                                }
                                None => exactcover_solve(&e, &caps)?,
                            }
                        }
                        _ => {
                            if !matches!(s.variant(), Variant::Partial(_)) {
                                return Err(usage("partialcover needs a `p partialcover` file"));
                            }
                            partialcover_dp(s, &caps)?
                        }
                    }
                }
                SolveKind::Ham => {
                    expect_count(files, 1, "one digraph file")?;
                    heldkarp_ham(graph(&ins[0])?, &caps)?
                }
                SolveKind::Ktree | SolveKind::KtreeCc => {
                    expect_count(files, 2, "a graph file and a tree file")?;
                    let (g, t) = (graph(&ins[0])?, tree(&ins[1])?);
                    if *kind == SolveKind::KtreeCc {
                        let q = search.failure_prob.unwrap_or(0.01);
                        rec = rec.param("failure_prob", q).param("seed", search.seed);
                        ktree_colorcoding(g, t, q, search.seed, &caps)?
                    } else {
                        let budget = search.budget.unwrap_or(caps.embed_budget);
                        rec = rec.param("budget", budget);
                        tree_embed_backtrack(&EmbedQuery::new(g, t), budget)?
                    }
                }
            };
            rec.input_digest = Some(loaded.digest);
            finish(rec.with_result(&r), started, cli.timing, out)
        }
        Command::Reduce {
            which,
            files,
            red,
            emit_dir,
        } => reduce(*which, files, red, emit_dir.as_deref(), cli.timing, started, out),
        Command::Pipeline {
            which,
            files,
            red,
            search,
        } => pipeline(*which, files, red, search, &caps, cli.jobs, cli.timing, started, out),
        Command::Verify {
            config,
            out: report_path,
            seed,
            variant,
            trials,
            budget,
        } => {
            let mut cfg: SuiteConfig = match config {
                Some(p) => {
                    let text = std::fs::read_to_string(p).map_err(|e| usage(format!("{}: {e}", p.display())))?;
                    serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", p.display())))?
                }
                None => SuiteConfig::default(),
            };
            if let Some(s) = seed {
                cfg.seed = *s;
            }
            if let Some(v) = variant {
                cfg.variant = match v {
                    VariantArg::Anchored => VariantFlag::Anchored,
                    VariantArg::RootsOnly => VariantFlag::RootsOnly,
                };
            }
            if let Some(b) = budget {
                cfg.budget = *b;
            }
            if let Some(t) = trials {
                cfg.tree_cover.trials = *t;
                cfg.ntree.trials = *t;
                cfg.ham.trials = *t;
                cfg.setcover_ktree.trials = *t;
                cfg.partial_ktree.trials = *t;
                cfg.exact_cover.trials = *t;
                cfg.colorcoding.trials = *t;
            }
            let report = on_pool(cli.jobs, || run_verification_suite(&cfg, &caps))?;
            if let Some(p) = report_path {
                std::fs::write(p, report.to_json() + "\n").map_err(|e| usage(format!("{}: {e}", p.display())))?;
            }
            for f in &report.families {
                let _ = writeln!(err, "{:<16} {:>5} trials {:>5} failed", f.name, f.trials, f.failed);
            }
            let mut rec = RunRecord::new("verify", None)
                .param("seed", cfg.seed)
                .param("variant", serde_json::to_value(cfg.variant).expect("variant serializes"));
            rec.answer = Some(if report.total_failures == 0 { "pass" } else { "fail" }.to_string());
            rec.value("total_trials", report.total_trials);
            rec.value("total_failures", report.total_failures);
            rec.value("discrepancies", report.discrepancies.len());
            rec.value("bounds_within", report.bounds.iter().all(|b| b.within));
            let fams: serde_json::Map<String, Value> = report
                .families
                .iter()
                .map(|f| (f.name.clone(), json!({"trials": f.trials, "failed": f.failed, "stats": f.stats})))
                .collect();
            rec.value("families", Value::Object(fams));
            finish(rec, started, cli.timing, out)
        }
        Command::Bounds { ntilde, delta, epsilon } => {
            finish(bounds_record(*ntilde, *delta, *epsilon)?, started, cli.timing, out)
        }
        Command::Partitions { count, list, g } => {
            if let Some(a) = count {
                let mut rec = RunRecord::new("partitions", Some("count")).param("a", *a);
                rec.value("count", count_partitions(*a).to_string());
                rec.value("asymptotic", partition_asymptotic(*a));
                finish(rec, started, cli.timing, out)?;
            }
            if let Some(a) = list {
                if *g == Some(0) {
                    return Err(usage("--g must be positive"));
                }
                for (i, alpha) in enumerate_partitions(*a).enumerate() {
                    let mut rec = RunRecord::new("partitions", Some("list")).param("a", *a);
                    rec.value("index", i);
                    rec.value("parts", alpha.parts());
                    if let Some(g) = g {
                        let s = shrink_partition(&alpha, *g);
                        rec.value("grouped", s.grouped);
                        rec.value("remainder", s.remainder);
                    }
                    rec.emit(out)?;
                }
            }
            Ok(())
        }
        Command::Generate { .. } => generate(&cli.command, out),
    }
}

/// `log2` of the instance counts, element caps and composed running times
/// for `ñ` and `Δ`.
pub fn bounds_record(ntilde: u64, delta: u64, epsilon: Option<f64>) -> Result<RunRecord, CliError> {
    if ntilde < 2 || delta < 1 || delta > ntilde {
        return Err(usage(format!("need 2 ≤ ñ and 1 ≤ Δ ≤ ñ, got ñ = {ntilde}, Δ = {delta}")));
    }
    let (n, d) = (ntilde as f64, delta as f64);
    let lg = n.log2();
    let mut rec = RunRecord::new("bounds", None).param("ntilde", ntilde).param("delta", delta);
    rec.value("ntree_count_log2", 9.0 * n / d * lg);
    rec.value("ntree_count_log2_anchored", 18.0 * n / d * lg);
    rec.value("ntree_elements", n + 9.0 * n / d);
    let eff = 3 * (delta / 3);
    rec.value("effective_delta", eff);
    if eff > 0 {
        let e = eff as f64;
        rec.value("effective_ntree_count_log2", 9.0 * n / e * lg);
        rec.value("effective_ntree_count_log2_anchored", 18.0 * n / e * lg);
    }
    rec.value("ntree_time_log2", log2_sum((d + 1.0) * lg, 9.0 * n / d * lg));
    rec.value("ham_count_log2", n / d * lg);
    rec.value("composed_runtime_log2_trivial", compose_runtime(n, d, &|m, _| m));
    if delta >= 2 {
        let lambda = cover_lambda(delta as usize)?;
        rec.value("lambda", lambda);
        rec.value("composed_runtime_log2_lambda", compose_runtime(n, d, &|m, _| lambda * m));
    }
    if let Some(eps) = epsilon {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(usage(format!("epsilon {eps} outside (0, 1)")));
        }
        rec = rec.param("epsilon", eps);
        rec.value("speedup_delta", speedup_delta(n, eps));
        rec.value("speedup_exponent", speedup_exponent(n, eps));
        rec.value("speedup_target", n - eps * n / 2.0);
        rec.value("speedup_slack", speedup_slack(n, eps));
        rec.value("speedup_threshold", speedup_threshold(eps));
    }
    Ok(rec)
}

fn bound_values(rec: &mut RunRecord, r: &BoundReport, guesses: u128) {
    rec.value("guesses", guesses.to_string());
    rec.value("declared_count_log2", r.declared_count_log2);
    rec.value("realized_count", r.realized_count);
    rec.value("declared_elements", r.declared_elements);
    rec.value("realized_max_elements", r.realized_max_elements);
    rec.value("composed_runtime_log2", r.composed_runtime_log2);
    rec.value("within", r.within());
}

fn write_file(dir: &Path, name: &str, text: &str) -> Result<String, CliError> {
    std::fs::create_dir_all(dir).map_err(|e| usage(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    std::fs::write(&path, text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    Ok(path.display().to_string())
}

fn produced_record(which: &str, i: usize, p: &Produced, dir: Option<&Path>) -> Result<RunRecord, CliError> {
    let mut rec = RunRecord::new("reduce", Some(which));
    rec.value("index", i);
    rec.value("provenance", p.provenance.clone());
    rec.value("n", p.instance.n());
    rec.value("m", p.instance.m());
    rec.value("target", p.target);
    let inst = Instance::Sets(p.instance.clone());
    if let Some(dir) = dir {
        let comments = [
            format!("provenance {}", join(&p.provenance)),
            format!("target {}", p.target),
        ];
        let text = serialize_with_comments(&inst, &comments);
        rec.value("file", write_file(dir, &format!("{which}-{i:06}.sc"), &text)?);
    } else {
        rec.value("instance_digest", digest(&[serialize(&inst).as_bytes()]));
    }
    Ok(rec)
}

fn join(xs: &[usize]) -> String {
    xs.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

fn need<T: Copy>(v: Option<T>, flag: &str) -> Result<T, CliError> {
    v.ok_or_else(|| usage(format!("this reduction needs {flag}")))
}

#[allow(clippy::too_many_arguments)]
fn reduce(
    which: ReductionKind,
    files: &[PathBuf],
    red: &ReductionArgs,
    dir: Option<&Path>,
    timing: bool,
    started: Instant,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let loaded = load(files)?;
    let ins = &loaded.instances;
    let name = which.to_possible_value().expect("no skipped variants").get_name().to_string();
    let mut summary = RunRecord::new("reduce-summary", Some(&name));
    summary.input_digest = Some(loaded.digest.clone());
    match which {
        ReductionKind::NtreeToSc => {
            expect_count(files, 2, "a digraph file and a tree file")?;
            let delta = need(red.delta, "--delta")?;
            let (g, t) = (graph(&ins[0])?, tree(&ins[1])?);
            let mut batch = ntree_to_setcover(g, t, delta, red.variant.into())?;
            for (i, p) in batch.by_ref().enumerate() {
                produced_record(&name, i, &p, dir)?.emit(out)?;
            }
            if let Some(e) = batch.take_error() {
                return Err(e.into());
            }
            summary = summary.param("delta", delta).param("variant", variant_name(red.variant));
            summary.value("pinned", batch.pinned());
            summary.value("target", batch.target());
            let rep = BoundReport::new(g.num_nodes(), delta, batch.declared(), batch.realized());
            bound_values(&mut summary, &rep, batch.guess_count());
        }
        ReductionKind::HamToSc => {
            expect_count(files, 1, "one digraph file")?;
            let delta = need(red.delta, "--delta")?;
            let g = graph(&ins[0])?;
            let mut batch = ham_to_setcover(g, delta)?;
            for (i, p) in batch.by_ref().enumerate() {
                produced_record(&name, i, &p, dir)?.emit(out)?;
            }
            summary = summary.param("delta", delta);
            summary.value("target", batch.target());
            let rep = BoundReport::new(g.num_nodes(), delta, batch.declared(), batch.realized());
            bound_values(&mut summary, &rep, batch.guess_count());
        }
        ReductionKind::ScToKtree | ReductionKind::PpcToKtree => {
            expect_count(files, 1, "one set-system file")?;
            let g = need(red.g, "--g")?;
            let s = sets(&ins[0])?;
            let (bundle, total) = if which == ReductionKind::ScToKtree {
                (build_host_graph(&s.with_variant(Variant::Plain)?, g)?, s.n())
            } else {
                (build_partial_host_graph(s, g)?, s.coverage_target())
            };
            let mut host = RunRecord::new("reduce", Some(&name));
            host.value("role", "host");
            host.value("nodes", bundle.host.num_nodes());
            host.value("edges", bundle.host.num_edges());
            host.value("q", bundle.q);
            host.value("max_set_side_degree", bundle.max_set_side_degree());
            if let Some(dir) = dir {
                let text = serialize(&Instance::Graph(bundle.host.clone()));
                host.value("file", write_file(dir, "host.graph", &text)?);
            }
            host.emit(out)?;
            let mut alphas: Vec<_> = enumerate_partitions(total).collect();
            alphas.sort_by_key(|a| a.len());
            for (i, alpha) in alphas.iter().enumerate() {
                let t = build_pattern_tree(alpha, g, total);
                let mut rec = RunRecord::new("reduce", Some(&name));
                rec.value("role", "tree");
                rec.value("index", i);
                rec.value("partition", alpha.parts());
                rec.value("nodes", t.k());
                if let Some(dir) = dir {
                    let comments = [format!("partition {}", join(alpha.parts()))];
                    let text = serialize_with_comments(&Instance::Tree(t), &comments);
                    rec.value("file", write_file(dir, &format!("tree-{i:06}.tree"), &text)?);
                }
                rec.emit(out)?;
            }
            summary = summary.param("g", g);
            summary.value("trees", alphas.len());
        }
    }
    finish(summary, started, timing, out)
}

fn variant_name(v: VariantArg) -> &'static str {
    match v {
        VariantArg::Anchored => "anchored",
        VariantArg::RootsOnly => "paper",
    }
}

/// Batch size handed to the worker pool between early-exit checks.
const CHUNK: usize = 256;

/// An accepting instance and its cover.
type Accepted = (Produced, Vec<usize>);

/// First produced instance, in batch order, that has a cover within its target,
/// and the number of instances solved.
fn first_accepting(
    batch: &mut dyn Iterator<Item = Produced>,
    solver: &CoverSolver,
    jobs: Option<usize>,
) -> Result<(Option<Accepted>, u64), CliError> {
    let mut solved = 0;
    loop {
        let chunk: Vec<Produced> = batch.take(CHUNK).collect();
        if chunk.is_empty() {
            return Ok((None, solved));
        }
        let answers: Vec<Result<Option<Vec<usize>>, SolveError>> =
            on_pool(jobs, || chunk.par_iter().map(|p| solver.within(&p.instance, p.target)).collect())?;
        for (p, a) in chunk.into_iter().zip(answers) {
            solved += 1;
            if let Some(chosen) = a? {
                return Ok((Some((p, chosen)), solved));
            }
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn pipeline(
    which: ReductionKind,
    files: &[PathBuf],
    red: &ReductionArgs,
    search: &SearchArgs,
    caps: &Caps,
    jobs: Option<usize>,
    timing: bool,
    started: Instant,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let loaded = load(files)?;
    let ins = &loaded.instances;
    let name = which.to_possible_value().expect("no skipped variants").get_name().to_string();
    let mut rec = RunRecord::new("pipeline", Some(&name));
    rec.input_digest = Some(loaded.digest.clone());
    let solver = CoverSolver::Search;
    match which {
        ReductionKind::NtreeToSc | ReductionKind::HamToSc => {
            let (found, solved, valid, certificate) = if which == ReductionKind::NtreeToSc {
                expect_count(files, 2, "a digraph file and a tree file")?;
                let delta = need(red.delta, "--delta")?;
                rec = rec.param("delta", delta).param("variant", variant_name(red.variant));
                let (g, t) = (graph(&ins[0])?, tree(&ins[1])?);
                let mut batch = ntree_to_setcover(g, t, delta, red.variant.into())?;
                let (found, solved) = first_accepting(&mut batch, &solver, jobs)?;
                if let Some(e) = batch.take_error() {
                    return Err(e.into());
                }
                let cert = found.as_ref().map(|(p, c)| batch.decode(p, c));
                let valid = cert.as_ref().is_some_and(|m| verify_embedding(g, t, m));
                (found, solved, valid, cert.map(|m| json!({"type": "embedding", "items": m})))
            } else {
                expect_count(files, 1, "one digraph file")?;
                let delta = need(red.delta, "--delta")?;
                rec = rec.param("delta", delta);
                let g = graph(&ins[0])?;
                let mut batch = ham_to_setcover(g, delta)?;
                let (found, solved) = first_accepting(&mut batch, &solver, jobs)?;
                let cert = found.as_ref().map(|(p, c)| batch.decode(p, c));
                let valid = cert.as_ref().is_some_and(|o| verify_ham_cycle(g, o));
                (found, solved, valid, cert.map(|o| json!({"type": "cycle", "items": o})))
            };
            rec.answer = Some(if found.is_some() { "yes" } else { "no" }.to_string());
            rec.certificate = certificate;
            if let Some((p, chosen)) = &found {
                rec.value("provenance", p.provenance.clone());
                rec.value("cover", chosen.clone());
                rec.value("cover_disjoint", pairwise_disjoint(&p.instance, chosen));
                rec.value("certificate_valid", valid);
            }
            rec.stat("instances_solved", solved);
        }
        ReductionKind::ScToKtree | ReductionKind::PpcToKtree => {
            expect_count(files, 1, "one set-system file")?;
            let g = need(red.g, "--g")?;
            rec = rec.param("g", g);
            if let Some(q) = search.failure_prob {
                rec = rec.param("failure_prob", q).param("seed", search.seed);
            }
            let s = sets(&ins[0])?;
            let mut solve = ktree_solver(search, *caps);
            let r = if which == ReductionKind::ScToKtree {
                setcover_via_ktree(&s.with_variant(Variant::Plain)?, g, caps, &mut solve)?
            } else {
                if !matches!(s.variant(), Variant::Partial(_)) {
                    return Err(usage("ppc-to-ktree needs a `p partialcover` file"));
                }
                ppc_via_ktree(s, g, caps, &mut solve)?
            };
            rec = rec.with_result(&r);
            rec.stats.remove("explored");
            rec.stat("trees_tried", r.stats.explored);
        }
    }
    finish(rec, started, timing, out)
}

fn orientation(o: OrientationArg) -> TreeOrientation {
    match o {
        OrientationArg::Undirected => TreeOrientation::Undirected,
        OrientationArg::Down => TreeOrientation::Down,
        OrientationArg::Random => TreeOrientation::Random,
    }
}

fn generate(cmd: &Command, out: &mut dyn Write) -> Result<(), CliError> {
    let Command::Generate {
        kind,
        n,
        m,
        max_set_size,
        p,
        k,
        edge_prob,
        extra,
        orientation: orient,
        distinct,
        seed,
        emit_dir,
    } = cmd
    else {
        unreachable!("called with a generate command")
    };
    let name = kind.to_possible_value().expect("no skipped variants").get_name().to_string();
    let mut rec = RunRecord::new("generate", Some(&name)).param("seed", *seed);
    let params = SetParams {
        n: *n,
        m: *m,
        max_set_size: max_set_size.unwrap_or(*n),
        distinct: *distinct,
    };
    let mut outputs: Vec<(&str, Instance)> = Vec::new();
    match kind {
        GenerateKind::Setcover | GenerateKind::Exactcover | GenerateKind::Partialcover => {
            let variant = match kind {
                GenerateKind::Setcover => Variant::Plain,
                GenerateKind::Exactcover => Variant::Exact,
                _ => Variant::Partial(p.unwrap_or(*n)),
            };
            rec = rec.param("n", *n).param("m", *m).param("max_set_size", params.max_set_size);
            outputs.push(("sc", Instance::Sets(random_setcover(params, variant, *seed)?)));
        }
        GenerateKind::Digraph | GenerateKind::Graph => {
            rec = rec.param("n", *n).param("edge_prob", *edge_prob);
            let g = random_digraph(*n, *edge_prob, *kind == GenerateKind::Graph, *seed)?;
            outputs.push(("graph", Instance::Graph(g)));
        }
        GenerateKind::Tree => {
            rec = rec.param("k", *k);
            outputs.push(("tree", Instance::Tree(random_tree(*k, orientation(*orient), *seed)?)));
        }
        GenerateKind::PlantedCover => {
            let size = max_set_size.unwrap_or(*n);
            rec = rec.param("n", *n).param("max_set_size", size).param("extra", *extra);
            let (inst, witness) = planted_blocks(*n, size, *extra, *seed)?;
            rec.certificate = Some(json!({"type": "sets", "items": witness}));
            outputs.push(("sc", Instance::Sets(inst)));
        }
        GenerateKind::PlantedHam => {
            rec = rec.param("n", *n).param("extra", *extra);
            let (g, order) = planted_ham_cycle(*n, *extra, *seed)?;
            rec.certificate = Some(json!({"type": "cycle", "items": order}));
            outputs.push(("graph", Instance::Graph(g)));
        }
        GenerateKind::PlantedTree => {
            rec = rec.param("n", *n).param("k", *k).param("extra", *extra);
            let (g, t, map) = planted_tree(*k, *n, *extra, orientation(*orient), *seed)?;
            rec.certificate = Some(json!({"type": "embedding", "items": map}));
            outputs.push(("graph", Instance::Graph(g)));
            outputs.push(("tree", Instance::Tree(t)));
        }
    }
    for (ext, inst) in outputs {
        let text = serialize(&inst);
        let key = if ext == "tree" { "tree" } else { "instance" };
        match emit_dir {
            Some(dir) => {
                let file = write_file(dir, &format!("{name}-{seed}.{ext}"), &text)?;
                rec.value(&format!("{key}_file"), file);
            }
            None => rec.value(key, text),
        }
    }
    rec.emit(out)?;
    Ok(())
}
