//! Threshold sweeps: for every `(n, δ)` grid cell, run independent trials
//! and tally solver outcomes into one CSV row.

use std::collections::HashMap;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use transversal_core::ratio::parse_rational;
use transversal_core::solver::{find_transversal, Outcome, SearchConfig, SearchStats};
use transversal_core::Rational;

use crate::error::{spec_err, Result};
use crate::extremal::{extremal_instance, ExtremalKind};
use crate::instance::{gen_collection, InstanceSpec};
use crate::target::{gen_target, Family, TargetSpec};

/// Environment variable holding the default worker count.
pub const THREADS_ENV: &str = "TRANSVERSAL_THREADS";

pub const CSV_HEADER: [&str; 11] = [
    "n",
    "h",
    "family",
    "k",
    "delta_frac",
    "trials",
    "found",
    "notfound",
    "exhausted",
    "mean_ms",
    "seed",
];

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub ns: Vec<usize>,
    pub family: Family,
    pub delta_fracs: Vec<Rational>,
    /// When set, every trial runs on this construction instead of a
    /// random min-degree instance, and `family`/`delta_fracs` are ignored.
    pub extremal: Option<ExtremalKind>,
    pub trials: usize,
    pub node_budget: u64,
    pub time_budget_ms: Option<u64>,
    pub base_seed: u64,
    /// CSV destination; existing rows with a matching key are kept and
    /// their cells skipped.
    pub out: Option<PathBuf>,
    /// Write `-` for `mean_ms` so that reruns are byte-identical.
    pub deterministic: bool,
    pub gnuplot: bool,
    pub threads: Option<usize>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            ns: vec![8],
            family: Family::HamiltonCycle,
            delta_fracs: vec![Rational::new(1, 2)],
            extremal: None,
            trials: 10,
            node_budget: 10_000_000,
            time_budget_ms: None,
            base_seed: 0,
            out: None,
            deterministic: false,
            gnuplot: false,
            threads: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct TrialResult {
    pub n: usize,
    pub h: usize,
    pub delta_frac: Rational,
    pub trial: usize,
    pub seed: u64,
    pub outcome: Outcome,
    pub stats: SearchStats,
    pub wall_ms: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub n: usize,
    pub h: usize,
    pub family: String,
    pub k: usize,
    pub delta_frac: Rational,
    pub trials: usize,
    pub found: usize,
    pub notfound: usize,
    pub exhausted: usize,
    /// `None` in deterministic mode.
    pub mean_ms: Option<f64>,
    pub seed: u64,
}

impl SweepRow {
    fn key(&self) -> (usize, String, Rational) {
        (self.n, self.family.clone(), self.delta_frac)
    }

    pub fn found_rate(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.found as f64 / self.trials as f64
        }
    }

    fn record(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            self.h.to_string(),
            self.family.clone(),
            self.k.to_string(),
            self.delta_frac.to_string(),
            self.trials.to_string(),
            self.found.to_string(),
            self.notfound.to_string(),
            self.exhausted.to_string(),
            self.mean_ms
                .map_or_else(|| "-".to_string(), |m| format!("{m:.3}")),
            self.seed.to_string(),
        ]
    }

    fn from_record(r: &csv::StringRecord) -> Result<Self> {
        let field = |i: usize| r.get(i).unwrap_or("");
        let num = |i: usize| -> Result<u64> {
            field(i)
                .parse()
                .or_else(|_| spec_err(format!("bad checkpoint field {:?}", field(i))))
        };
        Ok(SweepRow {
            n: num(0)? as usize,
            h: num(1)? as usize,
            family: field(2).to_string(),
            k: num(3)? as usize,
            delta_frac: parse_rational(field(4))?,
            trials: num(5)? as usize,
            found: num(6)? as usize,
            notfound: num(7)? as usize,
            exhausted: num(8)? as usize,
            mean_ms: field(9).parse().ok(),
            seed: num(10)?,
        })
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// `base ⊕ splitmix64(cell << 32 | trial)`.
pub fn trial_seed(base: u64, cell: usize, trial: usize) -> u64 {
    base ^ splitmix64(((cell as u64) << 32) | trial as u64)
}

struct Cell {
    index: usize,
    n: usize,
    delta_frac: Rational,
}

fn grid(cfg: &SweepConfig) -> Vec<Cell> {
    let deltas: Vec<Option<Rational>> = if cfg.extremal.is_some() {
        vec![None]
    } else {
        cfg.delta_fracs.iter().copied().map(Some).collect()
    };
    let mut cells = Vec::new();
    for &n in &cfg.ns {
        for d in &deltas {
            let delta_frac = d.unwrap_or_default();
            cells.push(Cell {
                index: cells.len(),
                n,
                delta_frac,
            });
        }
    }
    cells
}

fn family_label(cfg: &SweepConfig) -> String {
    match cfg.extremal {
        Some(kind) => kind.to_string(),
        None => cfg.family.name().to_string(),
    }
}

fn search_config(cfg: &SweepConfig) -> SearchConfig {
    SearchConfig {
        node_budget: cfg.node_budget,
        time_budget_ms: cfg.time_budget_ms,
        ..SearchConfig::default()
    }
}

/// Runs one trial. Extremal cells report δ(𝒢)/n of the construction.
pub fn run_trial(
    cfg: &SweepConfig,
    n: usize,
    delta_frac: Rational,
    cell: usize,
    trial: usize,
) -> Result<TrialResult> {
    let seed = trial_seed(cfg.base_seed, cell, trial);
    let (coll, target, delta_frac) = match cfg.extremal {
        Some(kind) => {
            let (coll, spec) = extremal_instance(kind, n)?;
            let d = Rational::new(coll.min_degree() as i128, n as i128);
            (coll, gen_target(&spec)?, d)
        }
        None => {
            let target = gen_target(&TargetSpec {
                family: cfg.family,
                n,
                seed,
            })?;
            let h = target.graph.edge_count();
            let coll = gen_collection(&InstanceSpec::min_degree(n, h, delta_frac, seed))?;
            (coll, target, delta_frac)
        }
    };
    let start = Instant::now();
    let res = find_transversal(&coll, &target.graph, &search_config(cfg))?;
    Ok(TrialResult {
        n,
        h: coll.h(),
        delta_frac,
        trial,
        seed,
        outcome: res.outcome,
        stats: res.stats,
        wall_ms: start.elapsed().as_secs_f64() * 1000.0,
    })
}

fn tally(cfg: &SweepConfig, results: &[TrialResult], n: usize, delta_frac: Rational) -> SweepRow {
    let count = |f: fn(&Outcome) -> bool| results.iter().filter(|r| f(&r.outcome)).count();
    let k = match cfg.extremal {
        Some(ExtremalKind::KPartiteFactor(k)) => k,
        Some(_) => 2,
        None => cfg.family.k(),
    };
    let mean = results.iter().map(|r| r.wall_ms).sum::<f64>() / results.len().max(1) as f64;
    SweepRow {
        n,
        h: results.first().map_or(0, |r| r.h),
        family: family_label(cfg),
        k,
        delta_frac: results.first().map_or(delta_frac, |r| r.delta_frac),
        trials: results.len(),
        found: count(|o| matches!(o, Outcome::Found(_))),
        notfound: count(|o| matches!(o, Outcome::NotFound)),
        exhausted: count(|o| matches!(o, Outcome::BudgetExhausted)),
        mean_ms: (!cfg.deterministic).then_some(mean),
        seed: cfg.base_seed,
    }
}

fn thread_count(cfg: &SweepConfig) -> usize {
    cfg.threads
        .or_else(|| std::env::var(THREADS_ENV).ok().and_then(|v| v.parse().ok()))
        .filter(|&t| t > 0)
        .unwrap_or(0)
}

pub fn read_rows(path: &Path) -> Result<Vec<SweepRow>> {
    let mut rdr = csv::Reader::from_path(path)?;
    rdr.records().map(|r| SweepRow::from_record(&r?)).collect()
}

pub fn write_rows(path: &Path, rows: &[SweepRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record(r.record())?;
    }
    w.flush()?;
    Ok(())
}

pub fn rows_to_csv(rows: &[SweepRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record(r.record())?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| crate::HarnessError::Spec(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Runs the grid in order. Trials of a cell run on the worker pool; rows
/// are collected in grid order and, when `cfg.out` is set, the file is
/// rewritten after every finished cell so an interrupted sweep resumes
/// where it stopped.
pub fn threshold_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    if cfg.trials == 0
        || cfg.ns.is_empty()
        || (cfg.extremal.is_none() && cfg.delta_fracs.is_empty())
    {
        return spec_err("a sweep needs at least one n, one δ and one trial");
    }
    let mut done: HashMap<(usize, String, Rational), SweepRow> = HashMap::new();
    if let Some(path) = cfg.out.as_deref().filter(|p| p.exists()) {
        for row in read_rows(path)? {
            done.insert(row.key(), row);
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(thread_count(cfg))
        .build()
        .map_err(|e| crate::HarnessError::Spec(e.to_string()))?;
    let label = family_label(cfg);
    let mut rows = Vec::new();
    for cell in grid(cfg) {
        if cfg.extremal.is_none() {
            if let Some(row) = done.get(&(cell.n, label.clone(), cell.delta_frac)) {
                rows.push(row.clone());
                continue;
            }
        } else if let Some(row) = done.values().find(|r| r.n == cell.n && r.family == label) {
            rows.push(row.clone());
            continue;
        }
        let results: Vec<TrialResult> = pool.install(|| {
            (0..cfg.trials)
                .into_par_iter()
                .map(|t| run_trial(cfg, cell.n, cell.delta_frac, cell.index, t))
                .collect::<Result<_>>()
        })?;
        rows.push(tally(cfg, &results, cell.n, cell.delta_frac));
        if let Some(path) = &cfg.out {
            let mut all = rows.clone();
            all.extend(
                done.values()
                    .filter(|r| !rows.iter().any(|x| x.key() == r.key()))
                    .cloned(),
            );
            write_rows(path, &all)?;
        }
    }
    if let Some(path) = &cfg.out {
        write_rows(path, &rows)?;
        if cfg.gnuplot {
            write_gnuplot(path, &rows)?;
        }
    }
    Ok(rows)
}

/// Cells where the found-rate drops in δ by more than two standard errors.
pub fn monotonicity_warnings(rows: &[SweepRow]) -> Vec<String> {
    let mut groups: HashMap<(usize, &str), Vec<&SweepRow>> = HashMap::new();
    for r in rows {
        groups.entry((r.n, r.family.as_str())).or_default().push(r);
    }
    let mut out = Vec::new();
    let mut keys: Vec<_> = groups.keys().copied().collect();
    keys.sort();
    for key in keys {
        let mut g = groups[&key].clone();
        g.sort_by_key(|a| a.delta_frac);
        for w in g.windows(2) {
            let (p, q) = (w[0].found_rate(), w[1].found_rate());
            let var = |r: f64, t: usize| {
                (r * (1.0 - r) / t.max(1) as f64).max(1.0 / (t.max(1) as f64).powi(2))
            };
            let noise = 2.0 * (var(p, w[0].trials) + var(q, w[1].trials)).sqrt();
            if p - q > noise {
                out.push(format!(
                    "warning: n={} {}: found-rate falls from {:.3} at δ={} to {:.3} at δ={}",
                    key.0, key.1, p, w[0].delta_frac, q, w[1].delta_frac
                ));
            }
        }
    }
    out
}

fn rational_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Writes `<out>.dat` (one block per n: δ, found-rate) and a `<out>.gp`
/// script that plots it.
pub fn write_gnuplot(out: &Path, rows: &[SweepRow]) -> Result<()> {
    let dat = out.with_extension("dat");
    let gp = out.with_extension("gp");
    let mut ns: Vec<usize> = rows.iter().map(|r| r.n).collect();
    ns.sort_unstable();
    ns.dedup();
    let mut f = fs::File::create(&dat)?;
    for (i, n) in ns.iter().enumerate() {
        if i > 0 {
            writeln!(f, "\n")?;
        }
        writeln!(f, "# n={n}")?;
        let mut rs: Vec<&SweepRow> = rows.iter().filter(|r| r.n == *n).collect();
        rs.sort_by_key(|a| a.delta_frac);
        for r in rs {
            writeln!(
                f,
                "{:.6} {:.6}",
                rational_f64(&r.delta_frac),
                r.found_rate()
            )?;
        }
    }
    let dat_name = dat
        .file_name()
        .and_then(|s| s.to_str())
        .unwrap_or("sweep.dat");
    let mut s = fs::File::create(&gp)?;
    writeln!(
        s,
        "set xlabel 'delta'\nset ylabel 'found rate'\nset yrange [0:1.05]\nset key left top"
    )?;
    let plots: Vec<String> = ns
        .iter()
        .enumerate()
        .map(|(i, n)| format!("'{dat_name}' index {i} with linespoints title 'n={n}'"))
        .collect();
    writeln!(s, "plot {}", plots.join(", \\\n     "))?;
    Ok(())
}
