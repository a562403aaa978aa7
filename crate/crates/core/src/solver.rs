//! Exact transversal search.
//!
//! Vertices of H are placed one at a time along a fixed order. A host
//! vertex is a candidate for x when it is adjacent, in some layer, to the
//! images of all earlier neighbors of x. Every H-edge closed by a placement
//! is pushed into an incremental edge-to-color matching; if the matching
//! can no longer cover all closed edges, no completion exists (Hall) and
//! the search backtracks.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bandwidth::{compute_ordering, OrderingMode, EXACT_BANDWIDTH_CAP};
use crate::error::{Error, Result};
use crate::graph::{Graph, GraphCollection, VertexSet};
use crate::matching::{hall_certificate, max_matching, HallCertificate, IncrementalMatching};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VertexOrder {
    /// A bandwidth ordering of H (exact when small, heuristic otherwise).
    Bandwidth,
    /// Greedy: repeatedly the vertex with the most already-placed neighbors.
    Degree,
    Given(Vec<usize>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PruneLevel {
    /// No incremental matching; colors are only assigned at the leaves.
    /// Exists to cross-check the pruning.
    Off,
    Hall,
    /// Hall pruning plus a check that every unplaced neighbor of the new
    /// vertex still has a candidate image.
    HallCodegree,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    pub vertex_order: VertexOrder,
    pub node_budget: u64,
    pub time_budget_ms: Option<u64>,
    /// 0 tries host vertices in increasing order; other seeds shuffle it.
    pub seed: u64,
    pub prune_level: PruneLevel,
    /// Recompute the matching from scratch after every push and compare.
    pub recompute_matching: bool,
    /// Restrict the first vertex's image to one host vertex per class of
    /// vertices that are twins in every layer.
    pub symmetry_breaking: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            vertex_order: VertexOrder::Bandwidth,
            node_budget: 10_000_000,
            time_budget_ms: None,
            seed: 0,
            prune_level: PruneLevel::HallCodegree,
            recompute_matching: false,
            symmetry_breaking: true,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub hall_prunes: u64,
    pub forward_prunes: u64,
    pub augmentations: u64,
    pub matching_recomputations: u64,
    pub elapsed_ms: u64,
}

/// φ: V(H) → V and λ: E(H) → colors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransversalEmbedding {
    pub phi: Vec<usize>,
    /// `(x, y, c)` with `x < y` an edge of H and `c` its color.
    pub lambda: Vec<(usize, usize, usize)>,
}

impl TransversalEmbedding {
    /// Fewer edges than colors: λ is injective but not onto.
    pub fn is_partial(&self, h: usize) -> bool {
        self.lambda.len() < h
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Found(TransversalEmbedding),
    NotFound,
    BudgetExhausted,
}

impl Outcome {
    pub fn is_found(&self) -> bool {
        matches!(self, Outcome::Found(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            Outcome::Found(_) => "found",
            Outcome::NotFound => "not-found",
            Outcome::BudgetExhausted => "budget-exhausted",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    pub outcome: Outcome,
    pub stats: SearchStats,
}

fn colors_of(coll: &GraphCollection, u: usize, v: usize) -> Vec<usize> {
    (0..coll.h())
        .filter(|&c| coll.layer(c).has_edge(u, v))
        .collect()
}

fn resolve_order(h: &Graph, order: &VertexOrder, seed: u64) -> Result<Vec<usize>> {
    let n = h.n();
    match order {
        VertexOrder::Given(o) => {
            let mut seen = vec![false; n];
            if o.len() != n
                || o.iter()
                    .any(|&v| v >= n || std::mem::replace(&mut seen[v], true))
            {
                return Err(Error::InvalidParameter(
                    "given vertex order is not a permutation of V(H)".into(),
                ));
            }
            Ok(o.clone())
        }
        VertexOrder::Bandwidth => {
            let ord = if n <= EXACT_BANDWIDTH_CAP {
                compute_ordering(h, OrderingMode::Exact, 1_000_000)
                    .or_else(|_| compute_ordering(h, OrderingMode::Heuristic { seed }, 0))?
            } else {
                compute_ordering(h, OrderingMode::Heuristic { seed }, 0)?
            };
            Ok(ord.order().to_vec())
        }
        VertexOrder::Degree => {
            let mut placed = vec![false; n];
            let mut back = vec![0usize; n];
            let mut out = Vec::with_capacity(n);
            for _ in 0..n {
                let x = (0..n)
                    .filter(|&v| !placed[v])
                    .max_by(|&a, &b| {
                        back[a]
                            .cmp(&back[b])
                            .then(h.degree(a).cmp(&h.degree(b)))
                            .then(b.cmp(&a))
                    })
                    .unwrap();
                placed[x] = true;
                out.push(x);
                for y in h.neighbor_iter(x) {
                    back[y] += 1;
                }
            }
            Ok(out)
        }
    }
}

/// One representative per class of vertices that are twins in every layer
/// (`N(u) − v = N(v) − u`). Swapping twins maps every layer to itself.
fn twin_representatives(coll: &GraphCollection) -> VertexSet {
    let n = coll.n();
    let twins = |u: usize, v: usize| {
        coll.layers().iter().all(|g| {
            let (mut nu, mut nv) = (g.neighbors(u), g.neighbors(v));
            nu.remove(v);
            nv.remove(u);
            nu == nv
        })
    };
    let mut reps: Vec<usize> = Vec::new();
    for v in 0..n {
        if !reps.iter().any(|&r| twins(r, v)) {
            reps.push(v);
        }
    }
    VertexSet::from_iter(n, reps).expect("vertices in range")
}

struct Search<'a> {
    coll: &'a GraphCollection,
    union: Graph,
    h: &'a Graph,
    order: Vec<usize>,
    back: Vec<Vec<usize>>,
    phi: Vec<usize>,
    placed: Vec<bool>,
    used: VertexSet,
    closed: Vec<(usize, usize)>,
    matching: IncrementalMatching,
    host_order: Vec<usize>,
    first_choices: Option<VertexSet>,
    cfg: &'a SearchConfig,
    stats: SearchStats,
    start: Instant,
    exhausted: bool,
}

impl Search<'_> {
    fn candidates(&self, back: &[usize]) -> VertexSet {
        let mut cand = VertexSet::full(self.coll.n());
        cand.difference_with(&self.used);
        for &y in back {
            cand.intersect_with(&self.union.neighbors(self.phi[y]));
        }
        cand
    }

    fn out_of_budget(&mut self) -> bool {
        if self.stats.nodes >= self.cfg.node_budget {
            return true;
        }
        if let Some(ms) = self.cfg.time_budget_ms {
            if self.stats.nodes % 1024 == 0 && self.start.elapsed().as_millis() as u64 >= ms {
                return true;
            }
        }
        false
    }

    fn leaf_matching(&mut self) -> Option<Vec<usize>> {
        let adj: Vec<Vec<usize>> = self
            .closed
            .iter()
            .map(|&(x, y)| colors_of(self.coll, self.phi[x], self.phi[y]))
            .collect();
        self.stats.matching_recomputations += 1;
        let m = max_matching(&adj, self.coll.h());
        m.is_perfect()
            .then(|| m.item_color.into_iter().map(Option::unwrap).collect())
    }

    fn dfs(&mut self, i: usize) -> bool {
        if i == self.order.len() {
            return self.cfg.prune_level != PruneLevel::Off || self.leaf_matching().is_some();
        }
        let x = self.order[i];
        let back = std::mem::take(&mut self.back[i]);
        let mut cand = self.candidates(&back);
        if i == 0 {
            if let Some(first) = &self.first_choices {
                cand.intersect_with(first);
            }
        }
        let mut found = false;
        for idx in 0..self.host_order.len() {
            let v = self.host_order[idx];
            if !cand.contains(v) {
                continue;
            }
            if self.out_of_budget() {
                self.exhausted = true;
                break;
            }
            self.stats.nodes += 1;
            self.phi[x] = v;
            self.placed[x] = true;
            self.used.insert(v);
            let mark = self.matching.mark();
            let closed_before = self.closed.len();
            let mut ok = true;
            for &y in &back {
                let (a, b) = (x.min(y), x.max(y));
                self.closed.push((a, b));
                if self.cfg.prune_level == PruneLevel::Off {
                    continue;
                }
                let pushed = self.matching.push(colors_of(self.coll, v, self.phi[y]));
                if self.cfg.recompute_matching {
                    let scratch = self.leaf_matching().is_some();
                    assert_eq!(
                        scratch, pushed,
                        "incremental and recomputed matchings disagree"
                    );
                }
                if !pushed {
                    self.stats.hall_prunes += 1;
                    ok = false;
                    break;
                }
            }
            if ok && self.cfg.prune_level == PruneLevel::HallCodegree {
                ok = self.forward_check(x);
                if !ok {
                    self.stats.forward_prunes += 1;
                }
            }
            if ok && self.dfs(i + 1) {
                found = true;
            } else {
                self.matching.rollback(mark);
                self.closed.truncate(closed_before);
                self.placed[x] = false;
                self.used.remove(v);
            }
            if found || self.exhausted {
                break;
            }
        }
        self.back[i] = back;
        found
    }

    /// Every unplaced neighbor of `x` must keep a candidate image.
    fn forward_check(&self, x: usize) -> bool {
        self.h
            .neighbor_iter(x)
            .filter(|&z| !self.placed[z])
            .all(|z| {
                let mut cand = VertexSet::full(self.coll.n());
                cand.difference_with(&self.used);
                for y in self.h.neighbor_iter(z).filter(|&y| self.placed[y]) {
                    cand.intersect_with(&self.union.neighbors(self.phi[y]));
                }
                !cand.is_empty()
            })
    }
}

/// Searches for a transversal copy of `h` in `coll`.
///
/// `e(H) < h` is allowed and yields a partial transversal (injective λ).
/// `BudgetExhausted` is inconclusive; `NotFound` is only reported after
/// the whole search space has been ruled out.
pub fn find_transversal(
    coll: &GraphCollection,
    h: &Graph,
    cfg: &SearchConfig,
) -> Result<SearchResult> {
    let start = Instant::now();
    if cfg.node_budget == 0 || cfg.time_budget_ms == Some(0) {
        return Err(Error::InvalidParameter(
            "search budgets must be positive".into(),
        ));
    }
    let e = h.edge_count();
    if e > coll.h() {
        return Err(Error::InvalidParameter(format!(
            "H has {e} edges but the collection only {} colors",
            coll.h()
        )));
    }
    let order = resolve_order(h, &cfg.vertex_order, cfg.seed)?;
    let mut stats = SearchStats::default();
    if h.n() > coll.n() {
        stats.elapsed_ms = start.elapsed().as_millis() as u64;
        return Ok(SearchResult {
            outcome: Outcome::NotFound,
            stats,
        });
    }
    let mut pos = vec![0; h.n()];
    for (i, &x) in order.iter().enumerate() {
        pos[x] = i;
    }
    let back: Vec<Vec<usize>> = order
        .iter()
        .enumerate()
        .map(|(i, &x)| h.neighbor_iter(x).filter(|&y| pos[y] < i).collect())
        .collect();
    let mut host_order: Vec<usize> = (0..coll.n()).collect();
    if cfg.seed != 0 {
        host_order.shuffle(&mut ChaCha8Rng::seed_from_u64(cfg.seed));
    }
    let first_choices = cfg.symmetry_breaking.then(|| twin_representatives(coll));

    let mut s = Search {
        coll,
        union: coll.union_graph(),
        h,
        order,
        back,
        phi: vec![usize::MAX; h.n()],
        placed: vec![false; h.n()],
        used: VertexSet::empty(coll.n()),
        closed: Vec::with_capacity(e),
        matching: IncrementalMatching::new(coll.h()),
        host_order,
        first_choices,
        cfg,
        stats,
        start,
        exhausted: false,
    };
    let found = s.dfs(0);
    let outcome = if found {
        let colors: Vec<usize> = if cfg.prune_level == PruneLevel::Off {
            s.leaf_matching()
                .expect("leaf was accepted with a perfect matching")
        } else {
            (0..s.closed.len())
                .map(|i| s.matching.color_of(i).expect("matching is perfect"))
                .collect()
        };
        let mut lambda: Vec<(usize, usize, usize)> = s
            .closed
            .iter()
            .zip(colors)
            .map(|(&(x, y), c)| (x, y, c))
            .collect();
        lambda.sort_unstable();
        Outcome::Found(TransversalEmbedding {
            phi: s.phi.clone(),
            lambda,
        })
    } else if s.exhausted {
        Outcome::BudgetExhausted
    } else {
        Outcome::NotFound
    };
    s.stats.augmentations = s.matching.augmentations();
    s.stats.elapsed_ms = s.start.elapsed().as_millis() as u64;
    Ok(SearchResult {
        outcome,
        stats: s.stats,
    })
}

/// Runs one search per seed in parallel. The reported embedding is the
/// one from the lowest seed that succeeded, so the result does not depend
/// on scheduling (with node budgets only).
pub fn find_transversal_portfolio(
    coll: &GraphCollection,
    h: &Graph,
    cfg: &SearchConfig,
    seeds: &[u64],
) -> Result<(u64, SearchResult)> {
    if seeds.is_empty() {
        return Err(Error::InvalidParameter(
            "portfolio needs at least one seed".into(),
        ));
    }
    let mut runs: Vec<(u64, SearchResult)> = seeds
        .par_iter()
        .map(|&seed| {
            let c = SearchConfig {
                seed,
                ..cfg.clone()
            };
            find_transversal(coll, h, &c).map(|r| (seed, r))
        })
        .collect::<Result<_>>()?;
    runs.sort_by_key(|(seed, _)| *seed);
    if let Some(i) = runs.iter().position(|(_, r)| r.outcome.is_found()) {
        return Ok(runs.swap_remove(i));
    }
    // a complete search by any seed settles the question
    if let Some(i) = runs
        .iter()
        .position(|(_, r)| r.outcome == Outcome::NotFound)
    {
        return Ok(runs.swap_remove(i));
    }
    Ok(runs.swap_remove(0))
}

/// Why an embedding is not a transversal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    PhiLength {
        expected: usize,
        got: usize,
    },
    PhiOutOfRange {
        vertex: usize,
        image: usize,
    },
    PhiNotInjective {
        x: usize,
        y: usize,
        image: usize,
    },
    /// λ's edge list differs from E(H).
    EdgeSetMismatch,
    ColorOutOfRange {
        edge: (usize, usize),
        color: usize,
    },
    ColorRepeated {
        first: (usize, usize),
        second: (usize, usize),
        color: usize,
    },
    /// The image of an H-edge is missing from its color's layer.
    EdgeNotInLayer {
        edge: (usize, usize),
        color: usize,
    },
}

/// Re-checks an embedding from the definition alone.
pub fn verify_transversal(
    coll: &GraphCollection,
    h: &Graph,
    emb: &TransversalEmbedding,
) -> std::result::Result<(), Violation> {
    if emb.phi.len() != h.n() {
        return Err(Violation::PhiLength {
            expected: h.n(),
            got: emb.phi.len(),
        });
    }
    let mut owner: Vec<Option<usize>> = vec![None; coll.n()];
    for (x, &img) in emb.phi.iter().enumerate() {
        if img >= coll.n() {
            return Err(Violation::PhiOutOfRange {
                vertex: x,
                image: img,
            });
        }
        if let Some(y) = owner[img] {
            return Err(Violation::PhiNotInjective {
                x: y,
                y: x,
                image: img,
            });
        }
        owner[img] = Some(x);
    }
    let mut want = Vec::new();
    for x in 0..h.n() {
        for y in x + 1..h.n() {
            if h.has_edge(x, y) {
                want.push((x, y));
            }
        }
    }
    let mut got: Vec<(usize, usize)> = emb
        .lambda
        .iter()
        .map(|&(x, y, _)| (x.min(y), x.max(y)))
        .collect();
    got.sort_unstable();
    if got != want {
        return Err(Violation::EdgeSetMismatch);
    }
    let mut color_owner: Vec<Option<(usize, usize)>> = vec![None; coll.h()];
    for &(x, y, c) in &emb.lambda {
        let edge = (x.min(y), x.max(y));
        if c >= coll.h() {
            return Err(Violation::ColorOutOfRange { edge, color: c });
        }
        if let Some(first) = color_owner[c] {
            return Err(Violation::ColorRepeated {
                first,
                second: edge,
                color: c,
            });
        }
        color_owner[c] = Some(edge);
        if !coll.layer(c).has_edge(emb.phi[x], emb.phi[y]) {
            return Err(Violation::EdgeNotInLayer { edge, color: c });
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rainbow {
    /// The color of each input edge.
    Colored(Vec<usize>),
    /// Edges (by input index) whose available colors are too few.
    Infeasible(HallCertificate),
}

/// Injective coloring of host edges by available colors, by maximum
/// bipartite matching.
pub fn find_rainbow_coloring(coll: &GraphCollection, edges: &[(usize, usize)]) -> Result<Rainbow> {
    let mut seen = std::collections::HashSet::new();
    for &(u, v) in edges {
        for w in [u, v] {
            if w >= coll.n() {
                return Err(Error::VertexOutOfRange { v: w, n: coll.n() });
            }
        }
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(Error::InvalidParameter(format!("edge {u}-{v} repeated")));
        }
    }
    let adj: Vec<Vec<usize>> = edges.iter().map(|&(u, v)| colors_of(coll, u, v)).collect();
    let m = max_matching(&adj, coll.h());
    Ok(match hall_certificate(&adj, coll.h(), &m) {
        Some(cert) => Rainbow::Infeasible(cert),
        None => Rainbow::Colored(m.item_color.into_iter().map(Option::unwrap).collect()),
    })
}
