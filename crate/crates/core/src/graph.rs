//! Dense bit-row graphs over small vertex sets.

use std::fmt;

use crate::error::{Error, Result};

/// Largest supported vertex count. Rows are at most 64 words wide.
pub const MAX_VERTICES: usize = 4096;

#[inline]
fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

/// A subset of `0..n`, stored as a bitmask.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    n: usize,
    words: Vec<u64>,
}

impl VertexSet {
    pub fn empty(n: usize) -> Self {
        VertexSet {
            n,
            words: vec![0; words_for(n)],
        }
    }

    pub fn full(n: usize) -> Self {
        let mut s = Self::empty(n);
        for v in 0..n {
            s.insert(v);
        }
        s
    }

    pub fn from_iter<I: IntoIterator<Item = usize>>(n: usize, it: I) -> Result<Self> {
        let mut s = Self::empty(n);
        for v in it {
            if v >= n {
                return Err(Error::VertexOutOfRange { v, n });
            }
            s.insert(v);
        }
        Ok(s)
    }

    /// Universe size.
    pub fn universe(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        v < self.n && self.words[v / 64] >> (v % 64) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, v: usize) {
        debug_assert!(v < self.n);
        self.words[v / 64] |= 1 << (v % 64);
    }

    #[inline]
    pub fn remove(&mut self, v: usize) {
        debug_assert!(v < self.n);
        self.words[v / 64] &= !(1 << (v % 64));
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn intersect_with(&mut self, other: &VertexSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn difference_with(&mut self, other: &VertexSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn intersection_len(&self, other: &VertexSet) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    /// Members in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// An undirected simple graph on vertices `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    stride: usize,
    rows: Vec<u64>,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        if n > MAX_VERTICES {
            return Err(Error::TooManyVertices {
                n,
                max: MAX_VERTICES,
            });
        }
        let stride = words_for(n);
        Ok(Graph {
            n,
            stride,
            rows: vec![0; n * stride],
        })
    }

    pub fn complete(n: usize) -> Result<Self> {
        let mut g = Self::empty(n)?;
        for u in 0..n {
            for v in u + 1..n {
                g.set_edge(u, v);
            }
        }
        Ok(g)
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n)?;
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Cycle 0-1-...-(n-1)-0. Needs `n >= 3`.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidParameter(format!(
                "cycle needs n >= 3, got {n}"
            )));
        }
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::from_edges(n, &edges)
    }

    pub fn path(n: usize) -> Result<Self> {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_edges(n, &edges)
    }

    /// Complete multipartite graph with the given part sizes; parts are
    /// consecutive vertex ranges.
    pub fn complete_multipartite(parts: &[usize]) -> Result<Self> {
        let n = parts.iter().sum();
        let mut g = Self::empty(n)?;
        let mut part_of = Vec::with_capacity(n);
        for (i, &p) in parts.iter().enumerate() {
            part_of.extend(std::iter::repeat(i).take(p));
        }
        for u in 0..n {
            for v in u + 1..n {
                if part_of[u] != part_of[v] {
                    g.set_edge(u, v);
                }
            }
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        self.set_edge(u, v);
        Ok(())
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        self.rows[u * self.stride + v / 64] &= !(1 << (v % 64));
        self.rows[v * self.stride + u / 64] &= !(1 << (u % 64));
        Ok(())
    }

    #[inline]
    fn set_edge(&mut self, u: usize, v: usize) {
        self.rows[u * self.stride + v / 64] |= 1 << (v % 64);
        self.rows[v * self.stride + u / 64] |= 1 << (u % 64);
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n {
            Err(Error::VertexOutOfRange { v, n: self.n })
        } else {
            Ok(())
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.rows[u * self.stride + v / 64] >> (v % 64) & 1 == 1
    }

    #[inline]
    pub(crate) fn row(&self, v: usize) -> &[u64] {
        &self.rows[v * self.stride..(v + 1) * self.stride]
    }

    /// The neighborhood of `v` as a set.
    pub fn neighbors(&self, v: usize) -> VertexSet {
        VertexSet {
            n: self.n,
            words: self.row(v).to_vec(),
        }
    }

    pub fn neighbor_iter(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(v).iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            })
        })
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Number of neighbors of `v` inside `set`.
    pub fn degree_into(&self, v: usize, set: &VertexSet) -> usize {
        self.row(v)
            .iter()
            .zip(set.words())
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            for v in self.neighbor_iter(u) {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn is_clique(&self, set: &VertexSet) -> bool {
        let vs = set.to_vec();
        vs.iter()
            .enumerate()
            .all(|(i, &u)| vs[i + 1..].iter().all(|&v| self.has_edge(u, v)))
    }

    pub fn is_independent(&self, set: &VertexSet) -> bool {
        set.iter().all(|v| self.degree_into(v, set) == 0)
    }

    /// Union of two graphs on the same vertex count.
    pub fn union(&self, other: &Graph) -> Result<Graph> {
        if self.n != other.n {
            return Err(Error::InvalidParameter(format!(
                "cannot take union of graphs on {} and {} vertices",
                self.n, other.n
            )));
        }
        let mut g = self.clone();
        for (a, b) in g.rows.iter_mut().zip(&other.rows) {
            *a |= b;
        }
        Ok(g)
    }

    /// The `k`-th power: `uv` is an edge iff `0 < dist(u, v) <= k`.
    pub fn power(&self, k: usize) -> Graph {
        let mut g = Graph {
            n: self.n,
            stride: self.stride,
            rows: vec![0; self.rows.len()],
        };
        for s in 0..self.n {
            for (t, d) in self.bfs_distances(s).into_iter().enumerate() {
                if let Some(d) = d {
                    if d >= 1 && d <= k {
                        g.set_edge(s, t);
                    }
                }
            }
        }
        g
    }

    pub fn bfs_distances(&self, s: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        let mut queue = std::collections::VecDeque::new();
        dist[s] = Some(0);
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for v in self.neighbor_iter(u) {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    pub(crate) fn check_set(&self, set: &VertexSet) -> Result<()> {
        if set.universe() != self.n {
            return Err(Error::InvalidParameter(format!(
                "vertex set over {} elements used with a graph on {} vertices",
                set.universe(),
                self.n
            )));
        }
        Ok(())
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges())
    }
}

/// `h` graphs ("layers", one per color) on a shared vertex set.
#[derive(Clone, PartialEq, Eq)]
pub struct GraphCollection {
    n: usize,
    layers: Vec<Graph>,
}

impl GraphCollection {
    pub fn new(layers: Vec<Graph>) -> Result<Self> {
        let n = layers.first().map(Graph::n).ok_or_else(|| {
            Error::InvalidParameter("a collection needs at least one layer".into())
        })?;
        if let Some(bad) = layers.iter().find(|g| g.n() != n) {
            return Err(Error::InvalidParameter(format!(
                "layer on {} vertices in a collection on {n} vertices",
                bad.n()
            )));
        }
        Ok(GraphCollection { n, layers })
    }

    /// `h` copies of the same graph.
    pub fn identical(g: &Graph, h: usize) -> Result<Self> {
        Self::new(vec![g.clone(); h])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> usize {
        self.layers.len()
    }

    pub fn layer(&self, c: usize) -> &Graph {
        &self.layers[c]
    }

    pub fn layers(&self) -> &[Graph] {
        &self.layers
    }

    /// Union of all layers.
    pub fn union_graph(&self) -> Graph {
        let mut g = self.layers[0].clone();
        for l in &self.layers[1..] {
            for (a, b) in g.rows.iter_mut().zip(&l.rows) {
                *a |= b;
            }
        }
        g
    }

    pub fn all_layers_equal(&self) -> bool {
        self.layers.windows(2).all(|w| w[0] == w[1])
    }

    /// `min_c δ(G_c)`.
    pub fn min_degree(&self) -> usize {
        self.layers
            .iter()
            .map(|g| min_degree(g).unwrap_or(0))
            .min()
            .unwrap_or(0)
    }
}

impl fmt::Debug for GraphCollection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GraphCollection")
            .field("n", &self.n)
            .field("layers", &self.layers)
            .finish()
    }
}

/// δ(G).
pub fn min_degree(g: &Graph) -> Result<usize> {
    if g.n() == 0 {
        return Err(Error::EmptyGraph);
    }
    Ok((0..g.n()).map(|v| g.degree(v)).min().unwrap())
}

/// N_G(X): vertices adjacent to every member of `x`.
pub fn common_neighborhood(g: &Graph, x: &VertexSet) -> Result<VertexSet> {
    g.check_set(x)?;
    let mut members = x.iter();
    let first = members.next().ok_or(Error::EmptySet)?;
    let mut out = g.neighbors(first);
    for v in members {
        for (a, b) in out.words.iter_mut().zip(g.row(v)) {
            *a &= b;
        }
    }
    Ok(out)
}

/// Up to `limit` k-cliques in lexicographic order of their sorted vertex
/// tuples.
pub fn enumerate_cliques(g: &Graph, k: usize, limit: usize) -> Result<Vec<VertexSet>> {
    if k == 0 || k > g.n() {
        return Err(Error::InvalidParameter(format!(
            "clique size {k} not in 1..={}",
            g.n()
        )));
    }
    if limit == 0 {
        return Err(Error::InvalidParameter("limit must be at least 1".into()));
    }
    let mut out = Vec::new();
    let mut current = VertexSet::empty(g.n());
    let candidates = VertexSet::full(g.n());
    clique_rec(g, k, limit, &mut current, &candidates, &mut out);
    Ok(out)
}

fn clique_rec(
    g: &Graph,
    k: usize,
    limit: usize,
    current: &mut VertexSet,
    candidates: &VertexSet,
    out: &mut Vec<VertexSet>,
) -> bool {
    let size = current.len();
    if size == k {
        out.push(current.clone());
        return out.len() >= limit;
    }
    if size + candidates.len() < k {
        return false;
    }
    for v in candidates.iter() {
        let mut next = candidates.clone();
        next.intersect_with(&g.neighbors(v));
        // only later vertices, so each clique appears once in sorted order
        for w in 0..=v {
            next.remove(w);
        }
        current.insert(v);
        let stop = clique_rec(g, k, limit, current, &next, out);
        current.remove(v);
        if stop {
            return true;
        }
    }
    false
}

/// Extends the clique `q` to a k-clique. Returns `Ok(None)` when no
/// k-clique of `g` contains `q`. Under δ(G) ≥ (1 − 1/(k−1))n + 1 the
/// greedy extension never gets stuck; below that the search backtracks.
pub fn extend_clique(g: &Graph, q: &VertexSet, k: usize) -> Result<Option<VertexSet>> {
    g.check_set(q)?;
    if q.is_empty() {
        return Err(Error::EmptySet);
    }
    if !g.is_clique(q) {
        return Err(Error::NotAClique(q.to_vec()));
    }
    if q.len() > k || k > g.n() {
        return Err(Error::InvalidParameter(format!(
            "cannot extend a {}-clique to a {k}-clique in a graph on {} vertices",
            q.len(),
            g.n()
        )));
    }
    let mut current = q.clone();
    let candidates = common_neighborhood(g, q)?;
    Ok(extend_rec(g, k, &mut current, &candidates).then_some(current))
}

fn extend_rec(g: &Graph, k: usize, current: &mut VertexSet, candidates: &VertexSet) -> bool {
    if current.len() == k {
        return true;
    }
    if current.len() + candidates.len() < k {
        return false;
    }
    for v in candidates.iter() {
        let mut next = candidates.clone();
        next.intersect_with(&g.neighbors(v));
        for w in 0..=v {
            next.remove(w);
        }
        current.insert(v);
        if extend_rec(g, k, current, &next) {
            return true;
        }
        current.remove(v);
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: usize, vs: &[usize]) -> VertexSet {
        VertexSet::from_iter(n, vs.iter().copied()).unwrap()
    }

    #[test]
    fn min_degree_examples() {
        assert_eq!(min_degree(&Graph::complete(4).unwrap()).unwrap(), 3);
        assert_eq!(min_degree(&Graph::empty(5).unwrap()).unwrap(), 0);
        assert_eq!(min_degree(&Graph::cycle(5).unwrap()).unwrap(), 2);
        assert_eq!(Graph::empty(0), Err(Error::EmptyGraph));
    }

    #[test]
    fn common_neighborhood_examples() {
        let k4 = Graph::complete(4).unwrap();
        assert_eq!(
            common_neighborhood(&k4, &set(4, &[0, 1])).unwrap(),
            set(4, &[2, 3])
        );
        let c5 = Graph::cycle(5).unwrap();
        assert_eq!(
            common_neighborhood(&c5, &set(5, &[0, 2])).unwrap(),
            set(5, &[1])
        );
        let p3 = Graph::path(3).unwrap();
        assert_eq!(
            common_neighborhood(&p3, &set(3, &[0, 2])).unwrap(),
            set(3, &[1])
        );
        assert_eq!(
            common_neighborhood(&p3, &VertexSet::empty(3)),
            Err(Error::EmptySet)
        );
    }

    #[test]
    fn clique_enumeration_examples() {
        let k4 = Graph::complete(4).unwrap();
        let got: Vec<_> = enumerate_cliques(&k4, 3, 10)
            .unwrap()
            .iter()
            .map(VertexSet::to_vec)
            .collect();
        assert_eq!(
            got,
            vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]
        );
        assert!(enumerate_cliques(&Graph::cycle(5).unwrap(), 3, 10)
            .unwrap()
            .is_empty());
        let mut g = k4.clone();
        g.remove_edge(0, 1).unwrap();
        let got: Vec<_> = enumerate_cliques(&g, 3, 10)
            .unwrap()
            .iter()
            .map(VertexSet::to_vec)
            .collect();
        assert_eq!(got, vec![vec![0, 2, 3], vec![1, 2, 3]]);
        assert_eq!(enumerate_cliques(&k4, 3, 2).unwrap().len(), 2);
        assert!(enumerate_cliques(&k4, 5, 2).is_err());
    }

    #[test]
    fn extend_clique_examples() {
        let k5 = Graph::complete(5).unwrap();
        assert_eq!(
            extend_clique(&k5, &set(5, &[0, 1]), 4).unwrap(),
            Some(set(5, &[0, 1, 2, 3]))
        );
        let c5 = Graph::cycle(5).unwrap();
        assert_eq!(extend_clique(&c5, &set(5, &[0, 1]), 3).unwrap(), None);
        assert!(matches!(
            extend_clique(&c5, &set(5, &[0, 2]), 3),
            Err(Error::NotAClique(_))
        ));

        let mut g = Graph::complete(6).unwrap();
        for (u, v) in [(0, 3), (1, 4), (2, 5)] {
            g.remove_edge(u, v).unwrap();
        }
        let tri = extend_clique(&g, &set(6, &[0, 1]), 3).unwrap().unwrap();
        // brute force: third vertex must avoid 3 (0's non-neighbor) and 4 (1's)
        let third: Vec<_> = (2..6)
            .filter(|&w| g.has_edge(0, w) && g.has_edge(1, w))
            .collect();
        assert_eq!(third, vec![2, 5]);
        assert!(tri.contains(0) && tri.contains(1) && g.is_clique(&tri) && tri.len() == 3);
    }

    #[test]
    fn vertex_set_ops() {
        let mut a = set(130, &[0, 64, 129]);
        assert_eq!(a.len(), 3);
        assert_eq!(a.to_vec(), vec![0, 64, 129]);
        a.remove(64);
        assert!(!a.contains(64));
        assert!(set(130, &[0]).is_subset(&a));
        assert!(VertexSet::from_iter(3, [3]).is_err());
    }

    #[test]
    fn power_of_cycle() {
        let c7 = Graph::cycle(7).unwrap();
        let sq = c7.power(2);
        assert_eq!(sq.edge_count(), 14);
        assert_eq!(sq.max_degree(), 4);
        assert_eq!(
            Graph::cycle(5).unwrap().power(2),
            Graph::complete(5).unwrap()
        );
    }
}
