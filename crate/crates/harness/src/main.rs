use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use transversal_core::absorber::{
    absorb_colors, build_absorber_with, AbsorberConfig, AbsorberTemplate,
};
use transversal_core::io::{
    parse_collection, parse_target, write_collection, write_embedding, write_target,
};
use transversal_core::ratio::parse_rational;
use transversal_core::regularity::pair_report;
use transversal_core::solver::{
    find_transversal, find_transversal_portfolio, verify_transversal, Outcome, PruneLevel,
    SearchConfig, VertexOrder,
};
use transversal_core::{ColorSet, GraphCollection, Rational, Root, VertexSet};
use transversal_harness::config::expand_config;
use transversal_harness::sweep::{monotonicity_warnings, rows_to_csv};
use transversal_harness::{
    extremal_instance, gen_collection, gen_target, threshold_sweep, ExtremalKind, InstanceSpec,
    LayerModel, SweepConfig, TargetSpec,
};

/// Transversal embeddings in graph collections.
#[derive(Parser)]
#[command(name = "transversal", version, args_override_self = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a collection or a target graph.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Search for a transversal copy of a target in a collection.
    Solve(SolveArgs),
    /// Run a threshold sweep and write CSV.
    Sweep(SweepArgs),
    /// Regularity report for a pair of vertex sets.
    Check(CheckArgs),
    /// Build or use a color absorber.
    #[command(subcommand)]
    Absorber(AbsorberCommand),
    /// Write an extremal construction and the target it lacks.
    Extremal(ExtremalArgs),
}

#[derive(Subcommand)]
enum GenCommand {
    Collection(GenCollectionArgs),
    Target(GenTargetArgs),
}

#[derive(Args)]
struct GenCollectionArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    h: usize,
    /// `iid:p`, `min-degree:δ`, `complete` or `extremal:KIND`.
    #[arg(long, default_value = "iid:0.5")]
    model: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenTargetArgs {
    /// `hamilton`, `path`, `power_of_cycle:k`, `kk_factor:k`, `tree:Δ` or
    /// `random_bounded:Δ:b`.
    #[arg(long)]
    family: String,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long, default_value_t = 10_000_000)]
    node_budget: u64,
    #[arg(long)]
    time_budget_ms: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// `bandwidth`, `degree` or `given` (uses the target file's order).
    #[arg(long, default_value = "bandwidth")]
    order: String,
    /// `off`, `hall` or `hall-codegree`.
    #[arg(long, default_value = "hall-codegree")]
    prune: String,
    #[arg(long)]
    no_symmetry_breaking: bool,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    collection: PathBuf,
    #[arg(long)]
    target: PathBuf,
    #[command(flatten)]
    search: SearchArgs,
    /// Run one search per seed in parallel and keep the lowest seed that
    /// succeeds.
    #[arg(long, value_delimiter = ',')]
    portfolio: Vec<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_delimiter = ',', default_value = "8")]
    ns: Vec<usize>,
    #[arg(long, default_value = "hamilton")]
    family: String,
    #[arg(long, value_delimiter = ',', default_value = "1/2")]
    delta: Vec<String>,
    #[arg(long)]
    extremal: Option<String>,
    #[arg(long, default_value_t = 10)]
    trials: usize,
    #[arg(long, default_value_t = 10_000_000)]
    node_budget: u64,
    #[arg(long)]
    time_budget_ms: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    deterministic: bool,
    #[arg(long)]
    gnuplot: bool,
    /// Worker threads; defaults to $TRANSVERSAL_THREADS, then all cores.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct CheckArgs {
    /// A graph in target format.
    #[arg(long, conflicts_with = "collection")]
    graph: Option<PathBuf>,
    #[arg(long)]
    collection: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    layer: usize,
    /// Vertices like `0-3,7`.
    #[arg(long)]
    a: String,
    #[arg(long)]
    b: String,
    /// A rational, optionally with a root: `1/64^1/6`.
    #[arg(long, default_value = "1/4")]
    eps: String,
    #[arg(long, default_value = "0")]
    d: String,
    #[arg(long, default_value = "1/2")]
    p: String,
}

#[derive(Subcommand)]
enum AbsorberCommand {
    Build(AbsorberBuildArgs),
    Absorb(AbsorberAbsorbArgs),
}

#[derive(Args)]
struct AbsorberBuildArgs {
    #[arg(long)]
    collection: PathBuf,
    /// Host edges like `0-1,2-3`.
    #[arg(long)]
    edges: String,
    #[arg(long)]
    ell: usize,
    #[arg(long)]
    c_size: usize,
    #[arg(long, default_value_t = 0)]
    min_avail: usize,
    #[arg(long)]
    tau: Option<usize>,
    #[arg(long, default_value_t = 50)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10_000)]
    exhaustive_limit: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AbsorberAbsorbArgs {
    #[arg(long)]
    collection: PathBuf,
    #[arg(long)]
    template: PathBuf,
    /// Leftover colors like `4,6`.
    #[arg(long)]
    leftover: String,
}

#[derive(Args)]
struct ExtremalArgs {
    /// `dirac-hamilton`, `kpartite-factor:k` or `space-barrier-triangle`.
    #[arg(long)]
    kind: String,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    out_collection: Option<PathBuf>,
    #[arg(long)]
    out_target: Option<PathBuf>,
    /// Also run the solver and report its outcome.
    #[arg(long)]
    solve: bool,
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// `0-3,7` → [0, 1, 2, 3, 7].
fn parse_list(s: &str) -> anyhow::Result<Vec<usize>> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once('-') {
            Some((lo, hi)) => out.extend(lo.trim().parse::<usize>()?..=hi.trim().parse::<usize>()?),
            None => out.push(part.parse()?),
        }
    }
    Ok(out)
}

fn parse_edges(s: &str) -> anyhow::Result<Vec<(usize, usize)>> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| {
            let (u, v) = p
                .split_once('-')
                .ok_or_else(|| anyhow!("bad edge {p:?}, expected u-v"))?;
            Ok((u.trim().parse()?, v.trim().parse()?))
        })
        .collect()
}

fn search_config(args: &SearchArgs, given: Option<Vec<usize>>) -> anyhow::Result<SearchConfig> {
    let vertex_order = match args.order.as_str() {
        "bandwidth" => VertexOrder::Bandwidth,
        "degree" => VertexOrder::Degree,
        "given" => VertexOrder::Given(
            given.ok_or_else(|| anyhow!("--order given needs an `order:` line in the target"))?,
        ),
        o => bail!("unknown order {o:?}"),
    };
    let prune_level = match args.prune.as_str() {
        "off" => PruneLevel::Off,
        "hall" => PruneLevel::Hall,
        "hall-codegree" => PruneLevel::HallCodegree,
        p => bail!("unknown prune level {p:?}"),
    };
    Ok(SearchConfig {
        vertex_order,
        node_budget: args.node_budget,
        time_budget_ms: args.time_budget_ms,
        seed: args.seed,
        prune_level,
        symmetry_breaking: !args.no_symmetry_breaking,
        ..SearchConfig::default()
    })
}

fn layer_model(s: &str) -> anyhow::Result<LayerModel> {
    let (kind, arg) = s.split_once(':').unwrap_or((s, ""));
    Ok(match kind {
        "iid" => LayerModel::Iid {
            p: arg.parse().context("iid needs a probability")?,
        },
        "min-degree" => LayerModel::MinDegree {
            delta_frac: parse_rational(arg)?,
            margin: 0.05,
        },
        "extremal" => LayerModel::Extremal(arg.parse()?),
        _ => bail!("unknown model {s:?}"),
    })
}

fn gen(cmd: GenCommand) -> anyhow::Result<()> {
    match cmd {
        GenCommand::Collection(a) => {
            let model = if a.model == "complete" {
                LayerModel::Identical(transversal_core::Graph::complete(a.n)?)
            } else {
                layer_model(&a.model)?
            };
            let coll = gen_collection(&InstanceSpec {
                n: a.n,
                h: a.h,
                model,
                seed: a.seed,
            })?;
            emit(a.out.as_deref(), &write_collection(&coll))
        }
        GenCommand::Target(a) => {
            let t = gen_target(&TargetSpec {
                family: a.family.parse()?,
                n: a.n,
                seed: a.seed,
            })?;
            eprintln!(
                "n={} e={} max_degree={} chromatic={} bandwidth={}",
                a.n,
                t.graph.edge_count(),
                t.graph.max_degree(),
                t.chromatic_number(),
                t.bandwidth()
            );
            emit(a.out.as_deref(), &write_target(&t.graph, Some(&t.ordering)))
        }
    }
}

fn solve(a: SolveArgs) -> anyhow::Result<bool> {
    let coll = parse_collection(&read(&a.collection)?)?;
    let target = parse_target(&read(&a.target)?)?;
    let cfg = search_config(&a.search, target.order.as_ref().map(|o| o.order().to_vec()))?;
    let (seed, res) = if a.portfolio.is_empty() {
        (cfg.seed, find_transversal(&coll, &target.graph, &cfg)?)
    } else {
        find_transversal_portfolio(&coll, &target.graph, &cfg, &a.portfolio)?
    };
    let s = &res.stats;
    eprintln!(
        "outcome: {}\nseed: {seed}\nnodes: {}\nhall_prunes: {}\nforward_prunes: {}\naugmentations: {}\nelapsed_ms: {}",
        res.outcome.label(),
        s.nodes,
        s.hall_prunes,
        s.forward_prunes,
        s.augmentations,
        s.elapsed_ms
    );
    match &res.outcome {
        Outcome::Found(emb) => {
            verify_transversal(&coll, &target.graph, emb)
                .map_err(|v| anyhow!("solver returned an invalid embedding: {v:?}"))?;
            emit(a.out.as_deref(), &write_embedding(emb))?;
            Ok(true)
        }
        _ => Ok(false),
    }
}

fn sweep(a: SweepArgs) -> anyhow::Result<()> {
    let cfg = SweepConfig {
        ns: a.ns,
        family: a.family.parse()?,
        delta_fracs: a
            .delta
            .iter()
            .map(|d| parse_rational(d))
            .collect::<Result<_, _>>()?,
        extremal: a.extremal.as_deref().map(str::parse).transpose()?,
        trials: a.trials,
        node_budget: a.node_budget,
        time_budget_ms: a.time_budget_ms,
        base_seed: a.seed,
        out: a.out.clone(),
        deterministic: a.deterministic,
        gnuplot: a.gnuplot,
        threads: a.threads,
    };
    if cfg.gnuplot && cfg.out.is_none() {
        bail!("--gnuplot needs --out");
    }
    let rows = threshold_sweep(&cfg)?;
    for w in monotonicity_warnings(&rows) {
        eprintln!("{w}");
    }
    if cfg.out.is_none() {
        print!("{}", rows_to_csv(&rows)?);
    }
    Ok(())
}

fn check(a: CheckArgs) -> anyhow::Result<()> {
    let g = match (&a.graph, &a.collection) {
        (Some(p), _) => parse_target(&read(p)?)?.graph,
        (None, Some(p)) => {
            let coll = parse_collection(&read(p)?)?;
            if a.layer >= coll.h() {
                bail!("layer {} out of range 0..{}", a.layer, coll.h());
            }
            coll.layer(a.layer).clone()
        }
        (None, None) => bail!("pass --graph or --collection"),
    };
    let set =
        |s: &str| -> anyhow::Result<VertexSet> { Ok(VertexSet::from_iter(g.n(), parse_list(s)?)?) };
    let eps: Root = a.eps.parse()?;
    let d: Rational = parse_rational(&a.d)?;
    let p: Rational = parse_rational(&a.p)?;
    let report = pair_report(&g, &set(&a.a)?, &set(&a.b)?, &eps, &d, &p)?;
    print!("{}", report.to_kv());
    Ok(())
}

fn absorber(cmd: AbsorberCommand) -> anyhow::Result<()> {
    match cmd {
        AbsorberCommand::Build(a) => {
            let coll = parse_collection(&read(&a.collection)?)?;
            let cfg = AbsorberConfig {
                tau: a.tau,
                samples: a.samples,
                seed: a.seed,
                exhaustive_limit: a.exhaustive_limit,
            };
            let tpl = build_absorber_with(
                &coll,
                &parse_edges(&a.edges)?,
                a.ell,
                a.c_size,
                a.min_avail,
                &cfg,
            )?;
            emit(a.out.as_deref(), &tpl.to_text())
        }
        AbsorberCommand::Absorb(a) => {
            let coll = parse_collection(&read(&a.collection)?)?;
            let tpl = AbsorberTemplate::from_text(&read(&a.template)?, &coll)?;
            let leftover = ColorSet::from_iter(coll.h(), parse_list(&a.leftover)?)?;
            let colors = absorb_colors(&tpl, &leftover)?;
            for (&(u, v), c) in tpl.edges().iter().zip(colors) {
                println!("{u}-{v}→{c}");
            }
            Ok(())
        }
    }
}

fn extremal(a: ExtremalArgs) -> anyhow::Result<bool> {
    let kind: ExtremalKind = a.kind.parse()?;
    let (coll, spec): (GraphCollection, TargetSpec) = extremal_instance(kind, a.n)?;
    let target = gen_target(&spec)?;
    emit(a.out_collection.as_deref(), &write_collection(&coll))?;
    if let Some(p) = &a.out_target {
        fs::write(p, write_target(&target.graph, Some(&target.ordering)))?;
    }
    eprintln!("kind: {kind}\ntarget: {}\nh: {}", spec.family, coll.h());
    if a.solve {
        let res = find_transversal(&coll, &target.graph, &SearchConfig::default())?;
        eprintln!("outcome: {}", res.outcome.label());
        return Ok(matches!(res.outcome, Outcome::NotFound));
    }
    Ok(true)
}

fn run() -> anyhow::Result<bool> {
    let args = expand_config(std::env::args_os().collect())?;
    let cli = Cli::parse_from(args);
    match cli.command {
        Command::Gen(c) => gen(c).map(|_| true),
        Command::Solve(a) => solve(a),
        Command::Sweep(a) => sweep(a).map(|_| true),
        Command::Check(a) => check(a).map(|_| true),
        Command::Absorber(c) => absorber(c).map(|_| true),
        Command::Extremal(a) => extremal(a),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
