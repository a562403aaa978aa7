//! Combinatorics on reduced graphs: clique-walks, K_k-factors and
//! 3-independent matchings.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

/// Exact K_k-factor search is limited to this many vertices.
pub const FACTOR_CAP: usize = 36;

/// An ordered k-tuple of distinct, pairwise adjacent vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrderedClique(Vec<usize>);

impl OrderedClique {
    pub fn new(g: &Graph, vertices: Vec<usize>) -> Result<Self> {
        for &v in &vertices {
            g.check_vertex(v)?;
        }
        for (i, &u) in vertices.iter().enumerate() {
            for &v in &vertices[i + 1..] {
                if !g.has_edge(u, v) {
                    return Err(Error::NotAClique(vertices.clone()));
                }
            }
        }
        Ok(OrderedClique(vertices))
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn k(&self) -> usize {
        self.0.len()
    }
}

/// A walk `z_1..z_t` whose windows of k consecutive vertices are cliques,
/// starting with one ordered clique and ending with another.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueWalk {
    walk: Vec<usize>,
    k: usize,
}

impl CliqueWalk {
    pub fn walk(&self) -> &[usize] {
        &self.walk
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.walk.len()
    }

    pub fn is_empty(&self) -> bool {
        self.walk.is_empty()
    }
}

type State = Vec<u16>;

fn step(r: &Graph, state: &[u16], v: usize) -> Option<State> {
    if state.iter().any(|&w| !r.has_edge(w as usize, v)) {
        return None;
    }
    let mut next = state[1..].to_vec();
    next.push(v as u16);
    Some(next)
}

/// Applies the forced suffix `q2` from `state`.
fn suffix_fits(r: &Graph, state: &[u16], q2: &[usize]) -> bool {
    let mut s = state.to_vec();
    for &y in q2 {
        match step(r, &s, y) {
            Some(next) => s = next,
            None => return false,
        }
    }
    true
}

/// Finds the shortest clique-walk from `q1` to `q2` with `3k <= t <= 3k^3`
/// and `k | t`, taking the lexicographically smallest vertex sequence among
/// the shortest. `Ok(None)` when no such walk exists.
pub fn clique_walk(
    r: &Graph,
    k: usize,
    q1: &OrderedClique,
    q2: &OrderedClique,
) -> Result<Option<CliqueWalk>> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!(
            "clique-walks need k >= 2, got {k}"
        )));
    }
    if q1.k() != k || q2.k() != k {
        return Err(Error::InvalidParameter(format!(
            "endpoint cliques have sizes {} and {}, expected {k}",
            q1.k(),
            q2.k()
        )));
    }
    if r.n() > u16::MAX as usize {
        return Err(Error::SizeCap {
            what: "clique-walk search",
            size: r.n(),
            cap: u16::MAX as usize,
        });
    }
    for q in [q1, q2] {
        OrderedClique::new(r, q.0.clone())?;
    }
    let (q1, q2) = (&q1.0, &q2.0);
    let max_len = 3 * k * k * k;
    let min_len = 3 * k;

    // layers[j] holds the reachable states after k + j vertices
    let start: State = q1[1..].iter().map(|&v| v as u16).collect();
    let mut layers: Vec<HashSet<State>> = vec![HashSet::from([start])];
    let mut total = None;
    let mut len = k;
    loop {
        let t = len + k;
        if t > max_len {
            break;
        }
        if t >= min_len
            && t % k == 0
            && layers.last().unwrap().iter().any(|s| suffix_fits(r, s, q2))
        {
            total = Some(t);
            break;
        }
        let mut next = HashSet::new();
        for s in layers.last().unwrap() {
            for v in 0..r.n() {
                if let Some(ns) = step(r, s, v) {
                    next.insert(ns);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        layers.push(next);
        len += 1;
    }
    let Some(t) = total else {
        return Ok(None);
    };

    // good[j]: states in layer j from which the goal is reachable
    let last = layers.len() - 1;
    let mut good: Vec<HashSet<State>> = vec![HashSet::new(); layers.len()];
    good[last] = layers[last]
        .iter()
        .filter(|s| suffix_fits(r, s, q2))
        .cloned()
        .collect();
    for j in (0..last).rev() {
        let mut g = HashSet::new();
        for s in &layers[j] {
            if (0..r.n()).any(|v| step(r, s, v).is_some_and(|ns| good[j + 1].contains(&ns))) {
                g.insert(s.clone());
            }
        }
        good[j] = g;
    }

    let mut walk = q1.clone();
    let mut state: State = q1[1..].iter().map(|&v| v as u16).collect();
    for j in 0..last {
        let (v, ns) = (0..r.n())
            .find_map(|v| {
                step(r, &state, v)
                    .filter(|ns| good[j + 1].contains(ns))
                    .map(|ns| (v, ns))
            })
            .expect("backward pass guarantees a continuation");
        walk.push(v);
        state = ns;
    }
    walk.extend_from_slice(q2);
    debug_assert_eq!(walk.len(), t);
    Ok(Some(CliqueWalk { walk, k }))
}

/// Vertex-disjoint k-cliques covering V(R); cliques sorted by their
/// minimum vertex, each listed in ascending order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KFactor {
    cliques: Vec<Vec<usize>>,
}

impl KFactor {
    pub fn cliques(&self) -> &[Vec<usize>] {
        &self.cliques
    }
}

struct FactorSearch<'a> {
    adj: &'a [u64],
    k: usize,
    failed: HashSet<u64>,
    chosen: Vec<Vec<usize>>,
}

impl FactorSearch<'_> {
    fn search(&mut self, uncovered: u64) -> bool {
        if uncovered == 0 {
            return true;
        }
        if self.failed.contains(&uncovered) {
            return false;
        }
        // every uncovered vertex needs k-1 uncovered neighbors
        let mut m = uncovered;
        while m != 0 {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            if ((self.adj[v] & uncovered).count_ones() as usize) < self.k - 1 {
                self.failed.insert(uncovered);
                return false;
            }
        }
        let v = uncovered.trailing_zeros() as usize;
        let rest = uncovered & !(1 << v);
        let mut clique = vec![v];
        if self.extend(&mut clique, self.adj[v] & rest, rest) {
            return true;
        }
        self.failed.insert(uncovered);
        false
    }

    fn extend(&mut self, clique: &mut Vec<usize>, candidates: u64, rest: u64) -> bool {
        if clique.len() == self.k {
            let used = clique.iter().fold(0u64, |m, &v| m | 1 << v);
            self.chosen.push(clique.clone());
            if self.search(rest & !used) {
                return true;
            }
            self.chosen.pop();
            return false;
        }
        if ((candidates.count_ones()) as usize) < self.k - clique.len() {
            return false;
        }
        let mut c = candidates;
        while c != 0 {
            let w = c.trailing_zeros() as usize;
            c &= c - 1;
            clique.push(w);
            // only later candidates, so each clique is generated once
            if self.extend(clique, c & self.adj[w], rest) {
                return true;
            }
            clique.pop();
        }
        false
    }
}

fn adjacency_masks(r: &Graph) -> Vec<u64> {
    (0..r.n())
        .map(|v| r.neighbor_iter(v).fold(0u64, |m, w| m | 1 << w))
        .collect()
}

fn factor_search(r: &Graph, k: usize, fixed: Option<&[usize]>) -> Result<Option<KFactor>> {
    let n = r.n();
    if k == 0 || n % k != 0 {
        return Err(Error::InvalidParameter(format!(
            "k = {k} does not divide r = {n}"
        )));
    }
    if n > FACTOR_CAP {
        return Err(Error::SizeCap {
            what: "exact K_k-factor search",
            size: n,
            cap: FACTOR_CAP,
        });
    }
    let adj = adjacency_masks(r);
    let mut uncovered = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut cliques = Vec::new();
    if let Some(q) = fixed {
        let mut q = q.to_vec();
        q.sort_unstable();
        for &v in &q {
            uncovered &= !(1 << v);
        }
        cliques.push(q);
    }
    let mut search = FactorSearch {
        adj: &adj,
        k,
        failed: HashSet::new(),
        chosen: Vec::new(),
    };
    if !search.search(uncovered) {
        return Ok(None);
    }
    cliques.extend(search.chosen);
    cliques.sort_by_key(|c| c[0]);
    Ok(Some(KFactor { cliques }))
}

/// Finds a K_k-factor of `r` by exact backtracking over the smallest
/// uncovered vertex. `Ok(None)` when none exists.
pub fn kk_factor(r: &Graph, k: usize) -> Result<Option<KFactor>> {
    factor_search(r, k, None)
}

/// Finds a K_k-factor of `r` that uses the clique `q` as one of its parts.
pub fn kk_factor_through(r: &Graph, k: usize, q: &OrderedClique) -> Result<Option<KFactor>> {
    if q.k() != k {
        return Err(Error::InvalidParameter(format!(
            "clique has {} vertices, expected {k}",
            q.k()
        )));
    }
    OrderedClique::new(r, q.0.clone())?;
    factor_search(r, k, Some(&q.0))
}

/// A matching whose edges are pairwise at distance at least three.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching3Ind {
    edges: Vec<(usize, usize)>,
}

impl Matching3Ind {
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// The guaranteed size `⌈|E| / (2Δ³)⌉`.
pub fn three_independent_bound(edges: usize, max_degree: usize) -> usize {
    if edges == 0 {
        return 0;
    }
    edges.div_ceil(2 * max_degree.pow(3))
}

/// Greedy 3-independent matching inside `edges`, scanned in ascending
/// `(u, v)` order. An edge is taken when neither endpoint lies within
/// distance two of an edge already taken.
pub fn three_independent_matching(
    h: &Graph,
    edges: &[(usize, usize)],
    max_degree: usize,
) -> Result<Matching3Ind> {
    let actual = h.max_degree();
    if actual > max_degree {
        return Err(Error::InvalidParameter(format!(
            "Δ(H) = {actual} exceeds the bound {max_degree}"
        )));
    }
    let mut sorted: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
    for &(u, v) in edges {
        h.check_vertex(u)?;
        h.check_vertex(v)?;
        if !h.has_edge(u, v) {
            return Err(Error::InvalidParameter(format!(
                "{u}-{v} is not an edge of H"
            )));
        }
        sorted.push((u.min(v), u.max(v)));
    }
    sorted.sort_unstable();
    sorted.dedup();

    let mut blocked = VertexSet::empty(h.n());
    let mut taken = Vec::new();
    for (u, v) in sorted {
        if blocked.contains(u) || blocked.contains(v) {
            continue;
        }
        taken.push((u, v));
        // everything within distance two of {u, v}
        let mut ball = h.neighbors(u);
        ball.union_with(&h.neighbors(v));
        ball.insert(u);
        ball.insert(v);
        let mut two = ball.clone();
        for w in ball.iter() {
            two.union_with(&h.neighbors(w));
        }
        blocked.union_with(&two);
    }
    Ok(Matching3Ind { edges: taken })
}
