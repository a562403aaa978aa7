mod common;

use itertools::Itertools;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use transversal_core::fraction::{color_availability, fraction_graph};
use transversal_core::graph::{common_neighborhood, enumerate_cliques, extend_clique, min_degree};
use transversal_core::ratio::rat;
use transversal_core::{ColorSet, Graph, VertexSet};

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n, any::<u64>(), 0.1f64..0.9)
        .prop_map(|(n, seed, p)| common::gnp(n, p, &mut ChaCha8Rng::seed_from_u64(seed)))
}

proptest! {
    #[test]
    fn cliques_match_subset_enumeration(g in graph_strategy(10), k in 1usize..5) {
        prop_assume!(k <= g.n());
        let got: Vec<Vec<usize>> = enumerate_cliques(&g, k, usize::MAX).unwrap().iter().map(VertexSet::to_vec).collect();
        let want: Vec<Vec<usize>> = (0..g.n())
            .combinations(k)
            .filter(|c| c.iter().tuple_combinations().all(|(&a, &b)| g.has_edge(a, b)))
            .collect();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn common_neighborhood_shrinks_as_set_grows(g in graph_strategy(12), mask in 1u32..4096) {
        let n = g.n();
        let x: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        prop_assume!(x.len() >= 2);
        let big = VertexSet::from_iter(n, x.iter().copied()).unwrap();
        let small = VertexSet::from_iter(n, x[..x.len() / 2].iter().copied()).unwrap();
        let nb = common_neighborhood(&g, &big).unwrap();
        let ns = common_neighborhood(&g, &small).unwrap();
        prop_assert!(nb.is_subset(&ns));
        for v in 0..n {
            prop_assert_eq!(nb.contains(v), x.iter().all(|&y| g.has_edge(y, v)));
        }
    }

    #[test]
    fn fraction_graph_is_the_availability_threshold(seed in any::<u64>(), n in 2usize..10, h in 1usize..8, num in 1i128..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coll = common::random_collection(n, h, 0.5, &mut rng);
        let eta = rat(num, 4);
        let colors: Vec<usize> = (0..h).filter(|c| (seed >> c) & 1 == 1 || *c == 0).collect();
        let cs = ColorSet::from_iter(h, colors.iter().copied()).unwrap();
        let f = fraction_graph(&coll, &cs, &eta).unwrap();
        for (u, v) in (0..n).tuple_combinations() {
            let count = color_availability(&coll, u, v).unwrap().intersection(&cs).len() as i128;
            prop_assert_eq!(f.has_edge(u, v), count * 4 >= num * colors.len() as i128);
        }
        // raising η only removes edges
        if num < 4 {
            let g2 = fraction_graph(&coll, &cs, &rat(num + 1, 4)).unwrap();
            for (u, v) in g2.edges() {
                prop_assert!(f.has_edge(u, v));
            }
        }
    }
}

/// δ(𝒢^η) ≥ (δ − η)n whenever every layer has minimum degree at least δn.
#[test]
fn fraction_graph_inherits_min_degree() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for trial in 0..300 {
        let n = 4 + trial % 12;
        let h = 1 + trial % 9;
        let min_deg = (trial * 7) % n;
        let layers: Vec<Graph> = (0..h)
            .map(|_| common::dense_with_min_degree(n, min_deg, 0.3, &mut rng))
            .collect();
        let coll = transversal_core::GraphCollection::new(layers).unwrap();
        let delta = coll.min_degree() as i128;
        for eta in [rat(1, 4), rat(1, 2), rat(3, 4)] {
            let f = fraction_graph(&coll, &ColorSet::full(h), &eta).unwrap();
            let got = min_degree(&f).unwrap() as i128;
            // δ(G^η) ≥ (δ/n − η)n = δ − ηn
            assert!(
                rat(got, 1) >= rat(delta, 1) - eta * rat(n as i128, 1),
                "trial {trial}"
            );
        }
    }
}

#[test]
fn dense_graphs_extend_every_clique() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for trial in 0..200 {
        let k: usize = 3 + trial % 2;
        let n = 5 + trial % 8;
        // δ ≥ (1 − 1/(k−1))n + 1
        let need = (n * (k - 2)).div_ceil(k - 1) + 1;
        if need >= n {
            continue;
        }
        let g = common::dense_with_min_degree(n, need, 0.2, &mut rng);
        assert!(min_degree(&g).unwrap() >= need);
        for kp in 1..=k {
            for q in enumerate_cliques(&g, kp, usize::MAX).unwrap() {
                let big = extend_clique(&g, &q, k)
                    .unwrap()
                    .expect("dense graph extends every clique");
                assert!(q.is_subset(&big) && big.len() == k && g.is_clique(&big));
            }
        }
    }
}
