//! The acceptance suite: ten criteria, one PASS/FAIL line each. Run with
//! `cargo test -p transversal-harness --test acceptance`.

use std::collections::{BTreeSet, VecDeque};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use transversal_core::absorber::{
    absorb_colors, build_absorber_with, AbsorberConfig, Verification,
};
use transversal_core::bandwidth::{
    bandwidth_partition, compute_ordering, proper_coloring, verify_admission, OrderingMode,
};
use transversal_core::fraction::fraction_graph;
use transversal_core::reduced::{
    clique_walk, kk_factor, three_independent_matching, OrderedClique,
};
use transversal_core::regularity::{
    super_regular_core, test_quasi_random, test_regular_exact, QrViolation, Regularity, Side,
};
use transversal_core::solver::{find_transversal, Outcome, SearchConfig, TransversalEmbedding};
use transversal_core::{ColorSet, Graph, GraphCollection, Rational, Root, VertexSet};
use transversal_harness::{
    extremal_instance, gen_target, threshold_sweep, ExtremalKind, Family, SweepConfig,
};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---------------------------------------------------------------------------
// Generators and independent checkers

fn gnp<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
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

/// K_n with random edges removed while both endpoints keep degree above
/// `min_deg`; `drop` is the chance of trying to remove each edge.
fn thinned_complete<R: Rng>(n: usize, min_deg: usize, drop: f64, rng: &mut R) -> Graph {
    let mut g = Graph::complete(n).unwrap();
    let mut edges = g.edges();
    edges.shuffle(rng);
    for (u, v) in edges {
        if g.degree(u) > min_deg && g.degree(v) > min_deg && rng.gen_bool(drop) {
            g.remove_edge(u, v).unwrap();
        }
    }
    g
}

fn bounded_degree<R: Rng>(n: usize, max_deg: usize, rng: &mut R) -> Graph {
    let mut g = Graph::empty(n).unwrap();
    if n < 2 {
        return g;
    }
    for _ in 0..rng.gen_range(0..=3 * n) {
        let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if u != v && !g.has_edge(u, v) && g.degree(u) < max_deg && g.degree(v) < max_deg {
            g.add_edge(u, v).unwrap();
        }
    }
    g
}

fn min_deg(g: &Graph) -> usize {
    (0..g.n())
        .map(|v| (0..g.n()).filter(|&u| g.has_edge(u, v)).count())
        .min()
        .unwrap_or(0)
}

fn distances_from(g: &Graph, s: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; g.n()];
    dist[s] = 0;
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        for v in 0..g.n() {
            if g.has_edge(u, v) && dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    dist
}

fn is_clique(g: &Graph, vs: &[usize]) -> bool {
    vs.iter()
        .enumerate()
        .all(|(i, &a)| vs[i + 1..].iter().all(|&b| g.has_edge(a, b)))
}

/// A uniformly shuffled k-clique grown greedily from a random vertex.
fn random_clique<R: Rng>(g: &Graph, k: usize, rng: &mut R) -> Option<Vec<usize>> {
    for _ in 0..50 {
        let mut c = vec![rng.gen_range(0..g.n())];
        while c.len() < k {
            let cand: Vec<usize> = (0..g.n())
                .filter(|&v| c.iter().all(|&u| g.has_edge(u, v)))
                .collect();
            let Some(&v) = cand.choose(rng) else { break };
            c.push(v);
        }
        if c.len() == k {
            c.shuffle(rng);
            return Some(c);
        }
    }
    None
}

/// Every k consecutive walk positions are pairwise adjacent, except pairs
/// that lie entirely inside the two endpoint windows.
fn walk_ok(r: &Graph, k: usize, q1: &[usize], q2: &[usize], w: &[usize]) -> Result<(), String> {
    let t = w.len();
    ensure(t >= 3 * k && t <= 3 * k * k * k, || {
        format!("length {t} outside [3k, 3k^3] for k = {k}")
    })?;
    ensure(t.is_multiple_of(k), || format!("length {t} not divisible by {k}"))?;
    ensure(w[..k] == *q1 && w[t - k..] == *q2, || {
        "walk does not start and end at the given cliques".into()
    })?;
    let end = |i: usize| i < k || i >= t - k;
    for i in 0..t {
        for j in i + 1..t.min(i + k) {
            if !(end(i) && end(j)) && !r.has_edge(w[i], w[j]) {
                return Err(format!(
                    "positions {i}, {j} ({} and {}) are not adjacent",
                    w[i], w[j]
                ));
            }
        }
    }
    Ok(())
}

/// Is there an injective choice of colors for the host pairs?
fn colorable(coll: &GraphCollection, pairs: &[(usize, usize)], used: u64) -> bool {
    let Some((&(u, v), rest)) = pairs.split_first() else {
        return true;
    };
    (0..coll.h()).any(|c| {
        used >> c & 1 == 0 && coll.layer(c).has_edge(u, v) && colorable(coll, rest, used | 1 << c)
    })
}

fn injections(
    n: usize,
    m: usize,
    prefix: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    if prefix.len() == m {
        return visit(prefix);
    }
    for v in 0..n {
        if !prefix.contains(&v) {
            prefix.push(v);
            let stop = injections(n, m, prefix, visit);
            prefix.pop();
            if stop {
                return true;
            }
        }
    }
    false
}

/// Brute force over every injective vertex map and every color choice.
fn oracle(coll: &GraphCollection, h: &Graph) -> bool {
    if h.n() > coll.n() || h.edge_count() > coll.h() {
        return false;
    }
    let he = h.edges();
    injections(coll.n(), h.n(), &mut Vec::new(), &mut |phi| {
        let img: Vec<(usize, usize)> = he.iter().map(|&(x, y)| (phi[x], phi[y])).collect();
        img.iter()
            .all(|&(u, v)| (0..coll.h()).any(|c| coll.layer(c).has_edge(u, v)))
            && colorable(coll, &img, 0)
    })
}

fn embedding_ok(
    coll: &GraphCollection,
    h: &Graph,
    emb: &TransversalEmbedding,
) -> Result<(), String> {
    let phi = &emb.phi;
    ensure(phi.len() == h.n(), || "phi has the wrong length".into())?;
    let distinct: BTreeSet<usize> = phi.iter().copied().collect();
    ensure(
        distinct.len() == phi.len() && phi.iter().all(|&u| u < coll.n()),
        || "phi is not injective".into(),
    )?;
    let mut edges: Vec<(usize, usize)> = emb
        .lambda
        .iter()
        .map(|&(x, y, _)| (x.min(y), x.max(y)))
        .collect();
    edges.sort_unstable();
    ensure(edges == h.edges(), || {
        "lambda does not cover E(H) exactly".into()
    })?;
    let colors: BTreeSet<usize> = emb.lambda.iter().map(|&(_, _, c)| c).collect();
    ensure(colors.len() == emb.lambda.len(), || {
        "lambda is not injective".into()
    })?;
    for &(x, y, c) in &emb.lambda {
        ensure(
            c < coll.h() && coll.layer(c).has_edge(phi[x], phi[y]),
            || format!("edge {x}-{y} is not in layer {c}"),
        )?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Criteria

fn fraction_inheritance() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut checks = 0;
    for trial in 0..1000 {
        let n = rng.gen_range(2..=24);
        let h = rng.gen_range(1..=24);
        let layers: Vec<Graph> = (0..h)
            .map(|_| {
                if trial % 2 == 0 {
                    gnp(n, rng.gen_range(0.3..1.0), &mut rng)
                } else {
                    let m = rng.gen_range(0..n);
                    thinned_complete(n, m, rng.gen_range(0.2..1.0), &mut rng)
                }
            })
            .collect();
        let delta = layers.iter().map(min_deg).min().unwrap() as i128;
        let coll = GraphCollection::new(layers).unwrap();
        for num in 1..=3i128 {
            let f = fraction_graph(&coll, &ColorSet::full(h), &Rational::new(num, 4)).unwrap();
            for u in 0..n {
                for v in u + 1..n {
                    let count = (0..h).filter(|&c| coll.layer(c).has_edge(u, v)).count() as i128;
                    ensure(f.has_edge(u, v) == (4 * count >= num * h as i128), || {
                        format!("trial {trial}: pair {u}{v} misclassified at η = {num}/4")
                    })?;
                }
            }
            // δ(F) ≥ (δ − η)n with δ = min degree / n
            let fd = min_deg(&f) as i128;
            ensure(4 * fd >= 4 * delta - num * n as i128, || {
                format!("trial {trial}: δ(F) = {fd} < {delta} − {num}/4·{n}")
            })?;
            checks += 1;
        }
    }
    Ok(format!("{checks}/3000 (collection, η) cases"))
}

fn clique_walks() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut done = 0;
    while done < 500 {
        let k: usize = rng.gen_range(2..=4);
        let r = rng.gen_range(2 * k..=15);
        let need = (r * (k - 1)).div_ceil(k) + 1;
        let g = thinned_complete(r, need, rng.gen_range(0.1..1.0), &mut rng);
        ensure(min_deg(&g) >= need, || {
            "generator broke the degree bound".into()
        })?;
        let q1 = random_clique(&g, k, &mut rng).ok_or("no k-clique found")?;
        let q2 = random_clique(&g, k, &mut rng).ok_or("no k-clique found")?;
        let walk = clique_walk(
            &g,
            k,
            &OrderedClique::new(&g, q1.clone()).unwrap(),
            &OrderedClique::new(&g, q2.clone()).unwrap(),
        )
        .map_err(|e| e.to_string())?
        .ok_or_else(|| format!("no walk in R with r = {r}, k = {k}"))?;
        walk_ok(&g, k, &q1, &q2, walk.walk()).map_err(|e| format!("r = {r}, k = {k}: {e}"))?;
        done += 1;
    }
    Ok(format!("{done}/500 walks found and verified"))
}

fn clique_factors() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for trial in 0..10_000 {
        let k: usize = if trial % 2 == 0 { 2 } else { 3 };
        let r = k * rng.gen_range(1..=12 / k);
        let need = (r * (k - 1)).div_ceil(k);
        let g = thinned_complete(r, need, rng.gen_range(0.1..1.0), &mut rng);
        ensure(min_deg(&g) >= need, || {
            "generator broke the degree bound".into()
        })?;
        let f = kk_factor(&g, k)
            .map_err(|e| e.to_string())?
            .ok_or_else(|| format!("trial {trial}: no K_{k}-factor"))?;
        let mut seen = vec![false; r];
        for c in f.cliques() {
            ensure(c.len() == k && is_clique(&g, c), || {
                format!("trial {trial}: {c:?} is not a K_{k}")
            })?;
            for &v in c {
                ensure(!std::mem::replace(&mut seen[v], true), || {
                    format!("trial {trial}: vertex {v} covered twice")
                })?;
            }
        }
        ensure(seen.iter().all(|&s| s), || {
            format!("trial {trial}: not spanning")
        })?;
    }
    Ok("10000/10000 factors found and verified".into())
}

fn three_independent() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut nonempty = 0;
    for trial in 0..1000 {
        let n = rng.gen_range(1..=40);
        let h = bounded_degree(n, rng.gen_range(1..=4), &mut rng);
        let edges = h.edges();
        let delta = h.max_degree();
        let m = three_independent_matching(&h, &edges, delta.max(1)).map_err(|e| e.to_string())?;
        let bound = if edges.is_empty() {
            0
        } else {
            edges.len().div_ceil(2 * delta.pow(3))
        };
        ensure(m.len() >= bound, || {
            format!(
                "trial {trial}: {} < ⌈{}/(2·{delta}³)⌉",
                m.len(),
                edges.len()
            )
        })?;
        for (i, &(a, b)) in m.edges().iter().enumerate() {
            ensure(h.has_edge(a, b), || {
                format!("trial {trial}: {a}{b} is not an edge")
            })?;
            let (da, db) = (distances_from(&h, a), distances_from(&h, b));
            for &(c, d) in &m.edges()[i + 1..] {
                ensure([da[c], da[d], db[c], db[d]].iter().all(|&x| x >= 3), || {
                    format!("trial {trial}: {a}{b} and {c}{d} are within distance 2")
                })?;
            }
        }
        nonempty += usize::from(!edges.is_empty());
    }
    Ok(format!(
        "1000/1000 matchings ({nonempty} graphs with edges)"
    ))
}

fn bandwidth_partitions() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut exact, mut heuristic) = (0, 0);
    for trial in 0..500 {
        let n = rng.gen_range(1..=40);
        let h = bounded_degree(n, rng.gen_range(1..=4), &mut rng);
        let ord = if n <= 12 && trial % 2 == 0 {
            exact += 1;
            compute_ordering(&h, OrderingMode::Exact, 50_000_000).map_err(|e| e.to_string())?
        } else {
            heuristic += 1;
            compute_ordering(&h, OrderingMode::Heuristic { seed: trial }, 0)
                .map_err(|e| e.to_string())?
        };
        let coloring = (1..=n.max(1))
            .find_map(|k| proper_coloring(&h, k).unwrap())
            .ok_or("no coloring")?;
        let k = coloring.k();
        let alpha_n = ord.bandwidth().max(1) + rng.gen_range(0..4);
        let part = bandwidth_partition(&h, &ord, &coloring, alpha_n)
            .map_err(|e| format!("trial {trial}: {e}"))?;
        ensure(verify_admission(&h, &part).unwrap().is_admitted(), || {
            format!("trial {trial}: not admitted")
        })?;
        let mut block = vec![usize::MAX; n];
        for (i, w) in part.blocks().iter().enumerate() {
            ensure(w.len() <= k * alpha_n, || {
                format!("trial {trial}: |W_{i}| = {} > k·α_n", w.len())
            })?;
            ensure(
                w.iter().all(|&x| w.iter().all(|&y| !h.has_edge(x, y))),
                || format!("trial {trial}: W_{i} not independent"),
            )?;
            for &x in w {
                block[x] = i;
            }
        }
        ensure(block.iter().all(|&b| b != usize::MAX), || {
            format!("trial {trial}: vertex outside every block")
        })?;
        for (u, v) in h.edges() {
            let d = block[u].abs_diff(block[v]);
            ensure(d >= 1 && d < k, || {
                format!("trial {trial}: edge {u}{v} spans {d} blocks, k = {k}")
            })?;
        }
    }
    Ok(format!(
        "500/500 partitions admitted ({exact} exact, {heuristic} heuristic orderings)"
    ))
}

fn sweep_cfg(ns: Vec<usize>, family: Family, delta: Rational, trials: usize) -> SweepConfig {
    SweepConfig {
        ns,
        family,
        delta_fracs: vec![delta],
        trials,
        node_budget: 10_000_000,
        base_seed: 2024,
        deterministic: true,
        ..SweepConfig::default()
    }
}

fn extremal_not_found(kind: ExtremalKind, n: usize) -> Result<(), String> {
    let (coll, spec) = extremal_instance(kind, n).map_err(|e| e.to_string())?;
    let target = gen_target(&spec).map_err(|e| e.to_string())?;
    let cfg = SearchConfig {
        node_budget: u64::MAX,
        ..SearchConfig::default()
    };
    let res = find_transversal(&coll, &target.graph, &cfg).map_err(|e| e.to_string())?;
    ensure(matches!(res.outcome, Outcome::NotFound), || {
        format!("{kind} n = {n}: {}", res.outcome.label())
    })?;
    ensure(!oracle(&coll, &target.graph), || {
        format!("{kind} n = {n}: brute force finds a copy")
    })
}

fn dirac_sweep() -> Check {
    let rows = threshold_sweep(&sweep_cfg(
        vec![6, 7, 8],
        Family::HamiltonCycle,
        Rational::new(1, 2),
        200,
    ))
    .map_err(|e| e.to_string())?;
    let mut parts = Vec::new();
    for r in &rows {
        ensure(r.found == r.trials && r.exhausted == 0, || {
            format!(
                "n = {}: found {}/{}, exhausted {}",
                r.n, r.found, r.trials, r.exhausted
            )
        })?;
        parts.push(format!("n={} {}/{}", r.n, r.found, r.trials));
    }
    extremal_not_found(ExtremalKind::DiracHamilton, 8)?;
    Ok(format!("{}; extremal n=8 not-found", parts.join(", ")))
}

fn square_cycle_sweep() -> Check {
    let delta = Rational::new(2, 3) + Rational::new(1, 10);
    let rows = threshold_sweep(&sweep_cfg(
        vec![6, 7, 8],
        Family::PowerOfCycle(2),
        delta,
        100,
    ))
    .map_err(|e| e.to_string())?;
    let mut parts = Vec::new();
    for r in &rows {
        ensure(r.h == 2 * r.n, || {
            format!("n = {}: h = {} is not e(C_n²)", r.n, r.h)
        })?;
        ensure(r.found * 100 >= 95 * r.trials && r.exhausted == 0, || {
            format!(
                "n = {}: found {}/{}, exhausted {}",
                r.n, r.found, r.trials, r.exhausted
            )
        })?;
        parts.push(format!("n={} {}/{}", r.n, r.found, r.trials));
    }
    extremal_not_found(ExtremalKind::KPartiteFactor(3), 9)?;
    Ok(format!(
        "{}; kpartite-factor(3) n=9 not-found",
        parts.join(", ")
    ))
}

fn subsets(items: &[usize], size: usize) -> Vec<Vec<usize>> {
    if size == 0 {
        return vec![vec![]];
    }
    if items.len() < size {
        return vec![];
    }
    let mut out: Vec<Vec<usize>> = subsets(&items[1..], size - 1)
        .into_iter()
        .map(|mut s| {
            s.insert(0, items[0]);
            s
        })
        .collect();
    out.extend(subsets(&items[1..], size));
    out
}

fn absorbers() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut built, mut attempts, mut leftovers) = (0, 0, 0);
    while built < 100 {
        attempts += 1;
        ensure(attempts <= 2000, || {
            format!("only {built} templates built in 2000 attempts")
        })?;
        let m = rng.gen_range(1..=12);
        let ell = rng.gen_range(0..=3.min(m));
        let c_size = ell + rng.gen_range(0..=4);
        let h = m + c_size + rng.gen_range(0..6);
        let n = rng.gen_range(2 * m..=2 * m + 4);
        // F: m disjoint host pairs; every layer keeps each pair with
        // probability q and adds some noise edges.
        let mut verts: Vec<usize> = (0..n).collect();
        verts.shuffle(&mut rng);
        let f: Vec<(usize, usize)> = (0..m)
            .map(|i| {
                (
                    verts[2 * i].min(verts[2 * i + 1]),
                    verts[2 * i].max(verts[2 * i + 1]),
                )
            })
            .collect();
        let q = rng.gen_range(0.4..0.9);
        let layers: Vec<Graph> = (0..h)
            .map(|_| {
                let mut g = gnp(n, 0.1, &mut rng);
                for &(u, v) in &f {
                    if rng.gen_bool(q) && !g.has_edge(u, v) {
                        g.add_edge(u, v).unwrap();
                    }
                }
                g
            })
            .collect();
        let coll = GraphCollection::new(layers).unwrap();
        let Ok(tpl) = build_absorber_with(
            &coll,
            &f,
            ell,
            c_size,
            1,
            &AbsorberConfig {
                seed: attempts,
                ..AbsorberConfig::default()
            },
        ) else {
            continue;
        };
        built += 1;
        ensure(tpl.verification() == Verification::Exhaustive, || {
            "template was only sampled".into()
        })?;
        let c: Vec<usize> = tpl.c().iter().collect();
        for left in subsets(&c, ell) {
            let cs = ColorSet::from_iter(h, left.iter().copied()).unwrap();
            let colors = absorb_colors(&tpl, &cs).map_err(|e| format!("C' = {left:?}: {e}"))?;
            let mut got = colors.clone();
            got.sort_unstable();
            let mut want: Vec<usize> = tpl.a().iter().chain(left.iter().copied()).collect();
            want.sort_unstable();
            ensure(got == want, || {
                format!("C' = {left:?}: colors {got:?} are not A ∪ C'")
            })?;
            for (&(u, v), &col) in f.iter().zip(&colors) {
                ensure(coll.layer(col).has_edge(u, v), || {
                    format!("edge {u}{v} is not in layer {col}")
                })?;
            }
            leftovers += 1;
        }
    }
    Ok(format!(
        "100/100 templates, {leftovers} leftover sets absorbed"
    ))
}

fn bipartite(
    a: usize,
    b: usize,
    adj: impl Fn(usize, usize) -> bool,
) -> (Graph, VertexSet, VertexSet) {
    let mut g = Graph::empty(a + b).unwrap();
    for x in 0..a {
        for y in 0..b {
            if adj(x, y) {
                g.add_edge(x, a + y).unwrap();
            }
        }
    }
    (
        g,
        VertexSet::from_iter(a + b, 0..a).unwrap(),
        VertexSet::from_iter(a + b, a..a + b).unwrap(),
    )
}

fn constructed_pairs() -> Vec<(Graph, VertexSet, VertexSet)> {
    let mut pairs = Vec::new();
    // Sylvester–Hadamard sign pattern, first row and column dropped
    for flip in [false, true] {
        pairs.push(bipartite(15, 15, |i, j| {
            (((i + 1) & (j + 1)).count_ones() % 2 == 1) == flip
        }));
    }
    // bipartite Paley pairs: x ~ y iff x − y is a nonzero square mod q
    for q in [5usize, 13] {
        let squares: BTreeSet<usize> = (1..q).map(|x| x * x % q).collect();
        pairs.push(bipartite(q, q, |i, j| squares.contains(&((i + q - j) % q))));
    }
    // circulants: x ~ y iff (y − x) mod m lies in a window
    for m in [6usize, 8, 10, 12, 16] {
        for w in [m / 4, m / 2, 3 * m / 4] {
            pairs.push(bipartite(m, m, |i, j| (j + m - i) % m < w));
        }
    }
    for (a, b) in [(1, 1), (3, 5), (8, 8), (16, 16), (16, 7)] {
        pairs.push(bipartite(a, b, |_, _| true));
    }
    pairs.push(bipartite(6, 6, |_, _| false));
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    while pairs.len() < 200 {
        let (a, b) = (rng.gen_range(2..=16), rng.gen_range(2..=16));
        let p = rng.gen_range(0.1..0.95);
        let bits: Vec<bool> = (0..a * b).map(|_| rng.gen_bool(p)).collect();
        pairs.push(bipartite(a, b, |i, j| bits[i * b + j]));
    }
    pairs
}

/// `deg ≥ (p − r)·m` with `r^6 = ε`, decided as `(p − deg/m)^6 ≤ ε`.
fn degree_ok(deg: usize, m: usize, p: &Rational, eps: &Rational) -> bool {
    let gap = *p - Rational::new(deg as i128, m as i128);
    if gap <= Rational::from_integer(0) {
        return true;
    }
    let sq = gap * gap;
    sq * sq * sq <= *eps
}

fn quasi_random_implies_regular() -> Check {
    let grid: Vec<Rational> = [
        (1, 100),
        (1, 20),
        (1, 10),
        (1, 5),
        (1, 4),
        (1, 3),
        (1, 2),
        (3, 4),
    ]
    .iter()
    .map(|&(p, q)| Rational::new(p, q))
    .collect();
    let pairs = constructed_pairs();
    let mut exercised = 0;
    let mut pairs_used = 0;
    for (idx, (g, a, b)) in pairs.iter().enumerate() {
        let edges = a
            .iter()
            .map(|x| b.iter().filter(|&y| g.has_edge(x, y)).count())
            .sum::<usize>();
        let p = Rational::new(edges as i128, (a.len() * b.len()) as i128);
        let mut used = false;
        for eps in &grid {
            if !test_quasi_random(g, a, b, &Root::from(*eps), &p)
                .unwrap()
                .passed()
            {
                continue;
            }
            used = true;
            exercised += 1;
            let sixth = Root::from(*eps).nth_root(6);
            let r = test_regular_exact(g, a, b, &sixth).unwrap();
            ensure(r.is_regular(), || {
                format!("pair {idx} is quasi-random at ε = {eps} but {r:?} at ε^(1/6)")
            })?;
            for (this, other) in [(a, b), (b, a)] {
                for x in this.iter() {
                    let deg = other.iter().filter(|&y| g.has_edge(x, y)).count();
                    ensure(degree_ok(deg, other.len(), &p, eps), || {
                        format!("pair {idx}, ε = {eps}: vertex {x} has degree {deg} below (p − ε^(1/6))·{}", other.len())
                    })?;
                }
            }
            let core = super_regular_core(g, a, b, &sixth, &p).unwrap();
            ensure(core.as_ref() == Some(&(a.clone(), b.clone())), || {
                format!("pair {idx}: core trimmed at ε = {eps}")
            })?;
        }
        pairs_used += usize::from(used);
    }
    // the planted pair: A complete to B1, empty to B2
    let (g, a, b) = bipartite(8, 8, |_, j| j < 4);
    let qr = test_quasi_random(
        &g,
        &a,
        &b,
        &Root::from(Rational::new(1, 4)),
        &Rational::new(1, 2),
    )
    .unwrap();
    ensure(!qr.passed(), || {
        "planted pair passed quasi-randomness".into()
    })?;
    match qr.codegree_witness(Side::B) {
        Some(QrViolation::Codegree { u, v, .. }) if (8..12).contains(u) && (8..12).contains(v) => {}
        other => {
            return Err(format!(
                "planted pair: expected a codegree witness in B1, got {other:?}"
            ))
        }
    }
    ensure(
        matches!(
            test_regular_exact(&g, &a, &b, &Root::from(Rational::new(1, 4))).unwrap(),
            Regularity::Irregular(_)
        ),
        || "planted pair is regular".into(),
    )?;
    Ok(format!("{} pairs, {exercised} quasi-random (pair, ε) cases over {pairs_used} pairs; planted pair rejected", pairs.len()))
}

/// Three graphs on `n` vertices: a path, a star at the last vertex, and the
/// complement of the path.
fn menu(n: usize) -> [Graph; 3] {
    let path = Graph::path(n).unwrap();
    let star: Vec<(usize, usize)> = (0..n.saturating_sub(1)).map(|v| (v, n - 1)).collect();
    let mut comp = Graph::empty(n).unwrap();
    for u in 0..n {
        for v in u + 2..n {
            comp.add_edge(u, v).unwrap();
        }
    }
    [path, Graph::from_edges(n, &star).unwrap(), comp]
}

/// Every graph on `v` vertices with between 1 and `max_e` edges, one per
/// isomorphism class.
fn targets(v: usize, max_e: usize) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..v)
        .flat_map(|a| (a + 1..v).map(move |b| (a, b)))
        .collect();
    let mut perms = Vec::new();
    injections(v, v, &mut Vec::new(), &mut |p| {
        perms.push(p.to_vec());
        false
    });
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 1u32..1 << pairs.len() {
        if mask.count_ones() as usize > max_e {
            continue;
        }
        let es: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        let canon = perms
            .iter()
            .map(|p| {
                let mut m: Vec<(usize, usize)> = es
                    .iter()
                    .map(|&(a, b)| (p[a].min(p[b]), p[a].max(p[b])))
                    .collect();
                m.sort_unstable();
                m
            })
            .min()
            .unwrap();
        if seen.insert(canon) {
            out.push(Graph::from_edges(v, &es).unwrap());
        }
    }
    out
}

fn compare(coll: &GraphCollection, h: &Graph, counts: &mut [usize; 2]) -> Result<(), String> {
    let want = oracle(coll, h);
    let res = find_transversal(coll, h, &SearchConfig::default()).map_err(|e| e.to_string())?;
    match &res.outcome {
        Outcome::Found(emb) => {
            ensure(want, || {
                format!("solver found a copy the oracle rules out: {coll:?} {h:?}")
            })?;
            embedding_ok(coll, h, emb)?;
        }
        Outcome::NotFound => ensure(!want, || format!("solver missed a copy: {coll:?} {h:?}"))?,
        Outcome::BudgetExhausted => return Err("budget exhausted on a tiny instance".into()),
    }
    counts[usize::from(want)] += 1;
    Ok(())
}

fn solver_oracle() -> Check {
    let mut counts = [0usize; 2];
    let mut catalog = 0;
    for n in 2..=4 {
        let menu = menu(n);
        for h in 1..=4 {
            let ts: Vec<Graph> = (2..=n).flat_map(|v| targets(v, h)).collect();
            for code in 0..3usize.pow(h as u32) {
                let layers: Vec<Graph> = (0..h)
                    .map(|i| menu[code / 3usize.pow(i as u32) % 3].clone())
                    .collect();
                let coll = GraphCollection::new(layers).unwrap();
                catalog += 1;
                for t in &ts {
                    compare(&coll, t, &mut counts)?;
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..1000 {
        let n = rng.gen_range(2..=6);
        let h = rng.gen_range(1..=6);
        let p = rng.gen_range(0.2..0.9);
        let coll = GraphCollection::new((0..h).map(|_| gnp(n, p, &mut rng)).collect()).unwrap();
        let v = rng.gen_range(2..=n);
        let mut pairs: Vec<(usize, usize)> = (0..v)
            .flat_map(|a| (a + 1..v).map(move |b| (a, b)))
            .collect();
        pairs.shuffle(&mut rng);
        let e = rng.gen_range(1..=h.min(pairs.len()));
        let t = Graph::from_edges(v, &pairs[..e]).unwrap();
        compare(&coll, &t, &mut counts)?;
    }
    Ok(format!(
        "{} comparisons ({catalog} catalog collections + 1000 random), {} found / {} not-found, all agree",
        counts[0] + counts[1],
        counts[1],
        counts[0]
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, u64, fn() -> Check); 10] = [
        (
            "fraction-graph minimum degree inheritance",
            10,
            fraction_inheritance,
        ),
        ("clique-walks in dense reduced graphs", 30, clique_walks),
        (
            "K_k-factors above the Hajnal-Szemerédi degree",
            60,
            clique_factors,
        ),
        (
            "3-independent matching size and distance",
            10,
            three_independent,
        ),
        (
            "bandwidth partitions are admitted",
            20,
            bandwidth_partitions,
        ),
        (
            "transversal Dirac sweep and extremal instance",
            300,
            dirac_sweep,
        ),
        (
            "square-of-cycle sweep and k-partite extremal instance",
            600,
            square_cycle_sweep,
        ),
        ("absorber resilience, exhaustive", 30, absorbers),
        (
            "quasi-random pairs are super-regular",
            60,
            quasi_random_implies_regular,
        ),
        ("solver agrees with brute force", 300, solver_oracle),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let took = start.elapsed();
        let result = match result {
            Ok(detail) if took > Duration::from_secs(*limit) => {
                Err(format!("{detail}; took {took:.1?}, limit {limit} s"))
            }
            r => r,
        };
        match result {
            Ok(detail) => println!(
                "PASS {:>2} {name}: {detail} [{:.2} s < {limit} s]",
                i + 1,
                took.as_secs_f64()
            ),
            Err(why) => {
                failed += 1;
                println!(
                    "FAIL {:>2} {name}: {why} [{:.2} s]",
                    i + 1,
                    took.as_secs_f64()
                );
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
