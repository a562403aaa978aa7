#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use transversal_core::{Graph, GraphCollection};

pub fn gnp<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut g = Graph::empty(n).unwrap();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

/// Complete graph thinned by deleting random edges while every degree
/// stays at least `min_deg`.
pub fn dense_with_min_degree<R: Rng>(n: usize, min_deg: usize, keep: f64, rng: &mut R) -> Graph {
    let mut g = Graph::complete(n).unwrap();
    let mut edges = g.edges();
    edges.shuffle(rng);
    for (u, v) in edges {
        if g.degree(u) > min_deg && g.degree(v) > min_deg && !rng.gen_bool(keep) {
            g.remove_edge(u, v).unwrap();
        }
    }
    g
}

/// Random graph with maximum degree at most `max_deg`.
pub fn bounded_degree<R: Rng>(n: usize, max_deg: usize, tries: usize, rng: &mut R) -> Graph {
    let mut g = Graph::empty(n).unwrap();
    if n < 2 {
        return g;
    }
    for _ in 0..tries {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u != v && !g.has_edge(u, v) && g.degree(u) < max_deg && g.degree(v) < max_deg {
            g.add_edge(u, v).unwrap();
        }
    }
    g
}

pub fn random_collection<R: Rng>(n: usize, h: usize, p: f64, rng: &mut R) -> GraphCollection {
    GraphCollection::new((0..h).map(|_| gnp(n, p, rng)).collect()).unwrap()
}

/// Distances between all vertex pairs by repeated BFS, written out
/// directly rather than through the library.
pub fn all_distances(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut out = vec![vec![usize::MAX; n]; n];
    for s in 0..n {
        out[s][s] = 0;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for v in 0..n {
                if g.has_edge(u, v) && out[s][v] == usize::MAX {
                    out[s][v] = out[s][u] + 1;
                    queue.push_back(v);
                }
            }
        }
    }
    out
}
