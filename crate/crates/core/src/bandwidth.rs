//! Bandwidth orderings and the block partitions they induce.
//!
//! Block and position arithmetic in this module is 1-indexed where it
//! mirrors the partition formula (`W_1..W_r`, positions `1..n`); storage
//! is 0-indexed, so `blocks[i - 1]` holds `W_i`.

use std::collections::{HashSet, VecDeque};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Exact bandwidth search is limited to this many vertices.
pub const EXACT_BANDWIDTH_CAP: usize = 20;
/// Exact coloring search is limited to this many vertices.
pub const EXACT_COLORING_CAP: usize = 64;

/// A linear order `x_1, ..., x_n` of the vertices of H together with its
/// bandwidth `max |i - j|` over edges `x_i x_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BandwidthOrdering {
    order: Vec<usize>,
    position: Vec<usize>,
    bandwidth: usize,
}

impl BandwidthOrdering {
    /// Builds an ordering from the vertex sequence `order` (vertex at each
    /// 0-based position) and computes its bandwidth in `h`.
    pub fn new(h: &Graph, order: Vec<usize>) -> Result<Self> {
        let n = h.n();
        if order.len() != n {
            return Err(Error::InvalidParameter(format!(
                "ordering lists {} vertices, graph has {n}",
                order.len()
            )));
        }
        let mut position = vec![usize::MAX; n];
        for (i, &v) in order.iter().enumerate() {
            h.check_vertex(v)?;
            if position[v] != usize::MAX {
                return Err(Error::InvalidParameter(format!(
                    "vertex {v} appears twice in ordering"
                )));
            }
            position[v] = i;
        }
        let bandwidth = stretch(h, &position);
        Ok(BandwidthOrdering {
            order,
            position,
            bandwidth,
        })
    }

    pub fn identity(h: &Graph) -> Self {
        Self::new(h, (0..h.n()).collect()).expect("identity is a permutation")
    }

    /// Vertices in order.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// 0-based position of vertex `v`.
    pub fn position(&self, v: usize) -> usize {
        self.position[v]
    }

    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }
}

fn stretch(h: &Graph, position: &[usize]) -> usize {
    h.edges()
        .iter()
        .map(|&(u, v)| position[u].abs_diff(position[v]))
        .max()
        .unwrap_or(0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderingMode {
    /// Minimum bandwidth by branch and bound; at most 20 vertices.
    Exact,
    /// Breadth-first levels followed by 2-swap hill climbing.
    Heuristic { seed: u64 },
}

/// Computes a bandwidth ordering of `h`. `budget` bounds the number of
/// search nodes in exact mode.
pub fn compute_ordering(h: &Graph, mode: OrderingMode, budget: u64) -> Result<BandwidthOrdering> {
    match mode {
        OrderingMode::Heuristic { seed } => Ok(heuristic_ordering(h, seed)),
        OrderingMode::Exact => {
            if h.n() > EXACT_BANDWIDTH_CAP {
                return Err(Error::SizeCap {
                    what: "exact bandwidth (use heuristic mode)",
                    size: h.n(),
                    cap: EXACT_BANDWIDTH_CAP,
                });
            }
            exact_ordering(h, budget)
        }
    }
}

fn heuristic_ordering(h: &Graph, seed: u64) -> BandwidthOrdering {
    let n = h.n();
    let mut best = level_ordering(h, None);
    // also try a pseudo-peripheral root in every component
    let alt = level_ordering(h, Some(()));
    if alt.bandwidth < best.bandwidth {
        best = alt;
    }
    if best.bandwidth <= 1 || n < 3 {
        return best;
    }
    let edges = h.edges();
    let score = |pos: &[usize]| -> (usize, usize) {
        let mut b = 0;
        let mut at_b = 0;
        for &(u, v) in &edges {
            let s = pos[u].abs_diff(pos[v]);
            if s > b {
                b = s;
                at_b = 1;
            } else if s == b {
                at_b += 1;
            }
        }
        (b, at_b)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order = best.order.clone();
    let mut pos = best.position.clone();
    let mut current = score(&pos);
    let mut pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let max_passes = if n <= 64 { 30 } else { 4 };
    for _ in 0..max_passes {
        pairs.shuffle(&mut rng);
        let mut improved = false;
        for &(i, j) in &pairs {
            let (a, b) = (order[i], order[j]);
            pos.swap(a, b);
            let s = score(&pos);
            if s < current {
                order.swap(i, j);
                current = s;
                improved = true;
            } else {
                pos.swap(a, b);
            }
        }
        if !improved {
            break;
        }
    }
    BandwidthOrdering {
        order,
        position: pos,
        bandwidth: current.0,
    }
}

fn level_ordering(h: &Graph, peripheral: Option<()>) -> BandwidthOrdering {
    let n = h.n();
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        // root: minimum degree among unvisited, lowest index on ties
        let mut root = (0..n)
            .filter(|&v| !seen[v])
            .min_by_key(|&v| (h.degree(v), v))
            .unwrap();
        if peripheral.is_some() {
            let dist = h.bfs_distances(root);
            root = (0..n)
                .filter(|&v| !seen[v] && dist[v].is_some())
                .max_by_key(|&v| (dist[v].unwrap(), std::cmp::Reverse((h.degree(v), v))))
                .unwrap();
        }
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            let mut next: Vec<usize> = h.neighbor_iter(u).filter(|&v| !seen[v]).collect();
            next.sort_by_key(|&v| (h.degree(v), v));
            for v in next {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    BandwidthOrdering::new(h, order).expect("level ordering is a permutation")
}

fn bandwidth_lower_bound(h: &Graph) -> usize {
    let n = h.n();
    let mut lb = h.max_degree().div_ceil(2);
    let mut seen = vec![false; n];
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let dist = h.bfs_distances(s);
        let comp: Vec<usize> = (0..n).filter(|&v| dist[v].is_some()).collect();
        for &v in &comp {
            seen[v] = true;
        }
        if comp.len() < 2 {
            continue;
        }
        let diam = comp
            .iter()
            .map(|&v| h.bfs_distances(v).into_iter().flatten().max().unwrap_or(0))
            .max()
            .unwrap_or(1)
            .max(1);
        lb = lb.max((comp.len() - 1).div_ceil(diam));
    }
    lb
}

struct ExactSearch {
    n: usize,
    adj: Vec<u32>,
    b: usize,
    nodes: u64,
    budget: u64,
    failed: HashSet<(u32, Vec<u8>)>,
    order: Vec<usize>,
}

impl ExactSearch {
    fn feasible(&mut self, placed: u32) -> Result<bool> {
        let p = self.order.len();
        if p == self.n {
            return Ok(true);
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExhausted(self.budget));
        }
        let tail_start = p.saturating_sub(self.b);
        let key = (
            placed,
            self.order[tail_start..]
                .iter()
                .map(|&v| v as u8)
                .collect::<Vec<_>>(),
        );
        if self.failed.contains(&key) {
            return Ok(false);
        }
        // next position is p (0-based)
        for v in 0..self.n {
            if placed >> v & 1 == 1 {
                continue;
            }
            // placed neighbors of v must sit at positions >= p - b
            let placed_nbrs = self.adj[v] & placed;
            if placed_nbrs & !self.window_mask(tail_start) != 0 {
                continue;
            }
            let now = placed | 1 << v;
            self.order.push(v);
            if self.window_ok(now) && self.feasible(now)? {
                return Ok(true);
            }
            self.order.pop();
        }
        self.failed.insert(key);
        Ok(false)
    }

    fn window_mask(&self, from: usize) -> u32 {
        self.order[from..].iter().fold(0, |m, &v| m | 1 << v)
    }

    /// Every placed vertex must be able to fit its unplaced neighbors
    /// within distance b.
    fn window_ok(&self, placed: u32) -> bool {
        let last = self.order.len() - 1;
        let from = (last + 1).saturating_sub(self.b + 1);
        self.order[from..].iter().enumerate().all(|(off, &u)| {
            let q = from + off;
            let remaining = (self.adj[u] & !placed).count_ones() as usize;
            remaining <= q + self.b - last
        })
    }
}

fn exact_ordering(h: &Graph, budget: u64) -> Result<BandwidthOrdering> {
    let n = h.n();
    let upper = heuristic_ordering(h, 0);
    let lb = bandwidth_lower_bound(h);
    if upper.bandwidth <= lb {
        return Ok(upper);
    }
    let adj: Vec<u32> = (0..n)
        .map(|v| h.neighbor_iter(v).fold(0u32, |m, w| m | 1 << w))
        .collect();
    let mut nodes = 0u64;
    for b in lb..upper.bandwidth {
        let mut search = ExactSearch {
            n,
            adj: adj.clone(),
            b,
            nodes,
            budget,
            failed: HashSet::new(),
            order: Vec::with_capacity(n),
        };
        let found = search.feasible(0)?;
        nodes = search.nodes;
        if found {
            let ord = BandwidthOrdering::new(h, search.order)?;
            debug_assert_eq!(ord.bandwidth, b);
            return Ok(ord);
        }
    }
    Ok(upper)
}

/// A proper coloring with colors `1..=k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProperColoring {
    colors: Vec<usize>,
    k: usize,
}

impl ProperColoring {
    /// Validates `colors` (one entry in `1..=k` per vertex) against `h`.
    pub fn new(h: &Graph, colors: Vec<usize>, k: usize) -> Result<Self> {
        if colors.len() != h.n() {
            return Err(Error::InvalidParameter(format!(
                "coloring has {} entries, graph has {} vertices",
                colors.len(),
                h.n()
            )));
        }
        if let Some(v) = colors.iter().position(|&c| c == 0 || c > k) {
            return Err(Error::InvalidParameter(format!(
                "vertex {v} has color {} outside 1..={k}",
                colors[v]
            )));
        }
        if let Some((u, v)) = h.edges().into_iter().find(|&(u, v)| colors[u] == colors[v]) {
            return Err(Error::InvalidParameter(format!(
                "edge {u}-{v} is monochromatic"
            )));
        }
        Ok(ProperColoring { colors, k })
    }

    pub fn color(&self, v: usize) -> usize {
        self.colors[v]
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

/// Finds a proper k-coloring by exact backtracking (DSATUR order).
/// `Ok(None)` means χ(H) > k.
pub fn proper_coloring(h: &Graph, k: usize) -> Result<Option<ProperColoring>> {
    let n = h.n();
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if n > EXACT_COLORING_CAP {
        return Err(Error::SizeCap {
            what: "exact coloring",
            size: n,
            cap: EXACT_COLORING_CAP,
        });
    }
    let mut colors = vec![0usize; n];
    if color_rec(h, k, &mut colors, 0, 0) {
        Ok(Some(ProperColoring::new(h, colors, k)?))
    } else {
        Ok(None)
    }
}

fn color_rec(h: &Graph, k: usize, colors: &mut [usize], done: usize, used: usize) -> bool {
    let n = h.n();
    if done == n {
        return true;
    }
    // most saturated uncolored vertex, then highest degree, then lowest index
    let mut pick = None;
    let mut best = (0usize, 0usize);
    for v in 0..n {
        if colors[v] != 0 {
            continue;
        }
        let mut seen = 0u128;
        for w in h.neighbor_iter(v) {
            if colors[w] != 0 {
                seen |= 1 << colors[w].min(127);
            }
        }
        let key = (seen.count_ones() as usize, h.degree(v));
        if pick.is_none() || key > best {
            best = key;
            pick = Some(v);
        }
    }
    let v = pick.unwrap();
    for c in 1..=k.min(used + 1) {
        if h.neighbor_iter(v).any(|w| colors[w] == c) {
            continue;
        }
        colors[v] = c;
        if color_rec(h, k, colors, done + 1, used.max(c)) {
            return true;
        }
        colors[v] = 0;
    }
    false
}

/// Ordered blocks `W_1..W_r` of V(H).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BandwidthPartition {
    blocks: Vec<Vec<usize>>,
    k: usize,
    alpha_n: usize,
}

impl BandwidthPartition {
    /// Wraps explicit blocks; `blocks[i]` is `W_{i+1}`. No invariants are
    /// checked here, see [`verify_admission`].
    pub fn from_blocks(blocks: Vec<Vec<usize>>, k: usize, alpha_n: usize) -> Self {
        BandwidthPartition { blocks, k, alpha_n }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// `W_i`, 1-indexed.
    pub fn block(&self, i: usize) -> &[usize] {
        &self.blocks[i - 1]
    }

    pub fn r(&self) -> usize {
        self.blocks.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn alpha_n(&self) -> usize {
        self.alpha_n
    }

    pub fn max_block_size(&self) -> usize {
        self.blocks.iter().map(Vec::len).max().unwrap_or(0)
    }
}

/// Splits V(H) into blocks
/// `W_i = { x_l : (i-k)·α_n + 1 <= l <= i·α_n, c(x_l) ≡ i (mod k) }`,
/// with r the least multiple of k that covers every vertex.
pub fn bandwidth_partition(
    h: &Graph,
    ord: &BandwidthOrdering,
    coloring: &ProperColoring,
    alpha_n: usize,
) -> Result<BandwidthPartition> {
    let n = h.n();
    if ord.order.len() != n || coloring.colors.len() != n {
        return Err(Error::InvalidParameter(
            "ordering or coloring does not match the graph".into(),
        ));
    }
    if alpha_n == 0 {
        return Err(Error::InvalidParameter(
            "block window α_n must be positive".into(),
        ));
    }
    if ord.bandwidth > alpha_n {
        return Err(Error::InvalidParameter(format!(
            "ordering has bandwidth {} > α_n = {alpha_n}",
            ord.bandwidth
        )));
    }
    let coloring = ProperColoring::new(h, coloring.colors.clone(), coloring.k)?;
    let k = coloring.k;
    let mut assignment = Vec::with_capacity(n);
    for (idx, &x) in ord.order.iter().enumerate() {
        let l = idx + 1;
        // the admissible block indices for position l are ceil(l/α_n) ..= ceil(l/α_n) + k - 1;
        // exactly one of them is congruent to c(x) mod k
        let first = l.div_ceil(alpha_n);
        let c = coloring.color(x) % k;
        let i = first + (c + k - first % k) % k;
        debug_assert!(
            (i as isize - k as isize) * alpha_n as isize + 1 <= l as isize && l <= i * alpha_n
        );
        assignment.push((i, x));
    }
    let top = assignment
        .iter()
        .map(|&(i, _)| i)
        .max()
        .unwrap_or(1)
        .max(n.div_ceil(alpha_n));
    let r = top.div_ceil(k) * k;
    let mut blocks = vec![Vec::new(); r];
    for (i, x) in assignment {
        blocks[i - 1].push(x);
    }
    let part = BandwidthPartition { blocks, k, alpha_n };
    if let Admission::Violation { edge, .. } = verify_admission(h, &part)? {
        return Err(Error::InvalidParameter(format!(
            "constructed partition rejects edge {edge:?}"
        )));
    }
    if part.max_block_size() > k * alpha_n {
        return Err(Error::InvalidParameter(
            "constructed block exceeds k·α_n".into(),
        ));
    }
    Ok(part)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    /// Both endpoints in one block.
    InsideBlock,
    /// Endpoints in blocks at index distance at least k.
    TooFar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Admission {
    Admitted,
    Violation {
        edge: (usize, usize),
        kind: ViolationKind,
    },
}

impl Admission {
    pub fn is_admitted(&self) -> bool {
        matches!(self, Admission::Admitted)
    }
}

/// Checks that H admits `(P^{k-1}_{[r]}, W)`: blocks are independent and
/// every edge joins blocks at index distance at most k - 1.
pub fn verify_admission(h: &Graph, part: &BandwidthPartition) -> Result<Admission> {
    let n = h.n();
    let mut block_of = vec![usize::MAX; n];
    for (i, block) in part.blocks.iter().enumerate() {
        for &x in block {
            h.check_vertex(x)?;
            if block_of[x] != usize::MAX {
                return Err(Error::InvalidParameter(format!(
                    "vertex {x} lies in two blocks"
                )));
            }
            block_of[x] = i;
        }
    }
    if let Some(x) = block_of.iter().position(|&b| b == usize::MAX) {
        return Err(Error::InvalidParameter(format!(
            "vertex {x} lies in no block"
        )));
    }
    for (u, v) in h.edges() {
        let d = block_of[u].abs_diff(block_of[v]);
        if d == 0 {
            return Ok(Admission::Violation {
                edge: (u, v),
                kind: ViolationKind::InsideBlock,
            });
        }
        if d + 1 > part.k {
            return Ok(Admission::Violation {
                edge: (u, v),
                kind: ViolationKind::TooFar,
            });
        }
    }
    Ok(Admission::Admitted)
}

/// Short runs of consecutive blocks `[t_{2i-1}, t_{2i}]` (1-indexed,
/// inclusive), each at most ℓ long and separated by at least ℓ+1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FragmentedIntervals {
    intervals: Vec<(usize, usize)>,
    ell: usize,
    initial_bound: Option<usize>,
}

impl FragmentedIntervals {
    pub fn new(
        intervals: Vec<(usize, usize)>,
        ell: usize,
        initial_bound: Option<usize>,
    ) -> Result<Self> {
        let f = FragmentedIntervals {
            intervals,
            ell,
            initial_bound,
        };
        f.validate()?;
        Ok(f)
    }

    pub fn intervals(&self) -> &[(usize, usize)] {
        &self.intervals
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn initial_bound(&self) -> Option<usize> {
        self.initial_bound
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        for (idx, &(s, e)) in self.intervals.iter().enumerate() {
            if s == 0 || e < s {
                return bad(format!("interval {idx} = [{s}, {e}] is malformed"));
            }
            if e - s > self.ell.saturating_sub(1) {
                return bad(format!(
                    "interval [{s}, {e}] spans more than {} blocks",
                    self.ell
                ));
            }
            if let Some(&(next, _)) = self.intervals.get(idx + 1) {
                if next < e + self.ell + 1 {
                    return bad(format!(
                        "intervals ending at {e} and starting at {next} are too close"
                    ));
                }
            }
            if let Some(bound) = self.initial_bound {
                if e > bound {
                    return bad(format!(
                        "interval [{s}, {e}] exceeds the initial bound {bound}"
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Places `p` intervals of width exactly ℓ greedily from block 1 with gaps
/// of ℓ+1: `[1, ℓ], [2ℓ+1, 3ℓ], ...`.
pub fn build_fragmented(
    part: &BandwidthPartition,
    ell: usize,
    p: usize,
    initial_bound: Option<usize>,
) -> Result<FragmentedIntervals> {
    if ell == 0 {
        return Err(Error::InvalidParameter("ℓ must be at least 1".into()));
    }
    let room = initial_bound.map_or(part.r(), |b| b.min(part.r()));
    // interval i (1-indexed) ends at (2i - 1)ℓ
    let max_p = (room / ell + 1) / 2;
    if p > max_p {
        return Err(Error::InvalidParameter(format!(
            "no room for {p} intervals of width {ell} in {room} blocks (room for {max_p})"
        )));
    }
    let intervals = (0..p)
        .map(|i| (1 + 2 * i * ell, (2 * i + 1) * ell))
        .collect();
    FragmentedIntervals::new(intervals, ell, initial_bound)
}
