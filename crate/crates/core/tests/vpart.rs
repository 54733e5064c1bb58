use epart::graph::DataAffinityGraph;
use epart::transform::{clone_and_connect, TransformedGraph};
use epart::vpart::{
    cluster_cap, coarsen, enforce_balance, partition_vertices, partition_weighted, refine,
    WeightedGraph, DEFAULT_EPSILON,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_weighted(rng: &mut ChaCha8Rng, n: usize, m: usize) -> WeightedGraph {
    let vwgt = (0..n).map(|_| rng.gen_range(1..=4)).collect();
    let edges: Vec<(u32, u32, i64)> = (0..m)
        .map(|_| {
            (
                rng.gen_range(0..n as u32),
                rng.gen_range(0..n as u32),
                rng.gen_range(1..=10),
            )
        })
        .collect();
    WeightedGraph::from_edges(vwgt, edges)
}

#[test]
fn refine_never_increases_cut() {
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_weighted(&mut rng, 200, 600);
        let k = rng.gen_range(2..=6);
        let cap = cluster_cap(g.total_vertex_weight(), k, DEFAULT_EPSILON);
        let mut part: Vec<u32> = (0..200).map(|v| (v % k) as u32).collect();
        let before = g.cut(&part);
        let gain = refine(&g, &mut part, k, cap);
        let after = g.cut(&part);
        assert!(after <= before, "seed {seed}: {before} -> {after}");
        assert_eq!(before - after, gain, "seed {seed}");
        assert!(g.cluster_weights(&part, k).iter().all(|&w| w <= cap));
    }
}

#[test]
fn balance_sweep_reaches_cap() {
    for seed in 0..50u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_weighted(&mut rng, 120, 300);
        let k = rng.gen_range(2..=5);
        let cap = cluster_cap(g.total_vertex_weight(), k, 0.1);
        let mut part = vec![0u32; 120];
        assert!(enforce_balance(&g, &mut part, k, cap), "seed {seed}");
        assert!(g.cluster_weights(&part, k).iter().all(|&w| w <= cap));
    }
}

#[test]
fn coarse_weights_are_sums() {
    for seed in 0..30u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_weighted(&mut rng, 80, 200);
        let level = coarsen(&g);
        let c = &level.graph;
        assert_eq!(c.total_vertex_weight(), g.total_vertex_weight());
        let mut expect = std::collections::BTreeMap::new();
        for (u, v, w) in g.edges() {
            let (a, b) = (level.map[u as usize], level.map[v as usize]);
            if a != b {
                *expect.entry((a.min(b), a.max(b))).or_insert(0) += w;
            }
        }
        let got: std::collections::BTreeMap<(u32, u32), i64> = c
            .edges()
            .map(|(a, b, w)| ((a.min(b), a.max(b)), w))
            .collect();
        assert_eq!(got, expect, "seed {seed}");
    }
}

#[test]
fn original_edges_match_before_aux_edges() {
    let g =
        DataAffinityGraph::new(6, vec![(0, 1), (1, 2), (3, 4), (0, 2), (4, 5), (3, 5)]).unwrap();
    let tg = clone_and_connect(&g).unwrap();
    let level = coarsen(&tg.to_weighted());
    for (a, b) in tg.original_edges() {
        assert_eq!(level.map[a as usize], level.map[b as usize]);
    }
}

#[test]
fn k_way_on_isolated_units() {
    let g = WeightedGraph::from_edges(vec![1; 12], std::iter::empty());
    let part = partition_weighted(&g, 6, 0.0, 0).unwrap();
    let mut sizes = vec![0; 6];
    for c in part {
        sizes[c as usize] += 1;
    }
    assert_eq!(sizes, vec![2; 6]);
}

/// Exhaustive minimum weighted cut over assignments within the cluster cap.
fn exhaustive_cut(tg: &TransformedGraph, k: usize, cap: usize) -> i64 {
    let n = tg.clone_count();
    let mut a = vec![0u32; n];
    let mut best = i64::MAX;
    let total = (k as u64).pow(n as u32);
    for code in 0..total {
        let mut x = code;
        let mut sizes = vec![0usize; k];
        for slot in a.iter_mut() {
            *slot = (x % k as u64) as u32;
            sizes[*slot as usize] += 1;
            x /= k as u64;
        }
        if sizes.iter().all(|&s| s <= cap) {
            best = best.min(tg.cut_weight(&a));
        }
    }
    best
}

#[test]
fn multilevel_cut_within_three_times_optimum() {
    let mut checked = 0;
    for seed in 0..120u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(400 + seed);
        let m = rng.gen_range(2..=7);
        let n = rng.gen_range(2..=m + 1);
        let edges = (0..m)
            .map(|_| (rng.gen_range(0..n as u32), rng.gen_range(0..n as u32)))
            .collect();
        let g = DataAffinityGraph::new(n, edges).unwrap();
        let tg = clone_and_connect(&g).unwrap();
        let k = if tg.clone_count() <= 10 && rng.gen_bool(0.5) {
            3
        } else {
            2
        };
        let cap = cluster_cap(tg.clone_count() as i64, k, DEFAULT_EPSILON) as usize;
        let opt = exhaustive_cut(&tg, k, cap);
        let vp = partition_vertices(&tg, k, DEFAULT_EPSILON, seed).unwrap();
        let cut = tg.cut_weight(&vp.assignment);
        assert!(vp.sizes().iter().all(|&s| s <= cap));
        assert!(cut >= opt, "seed {seed}: {cut} below optimum {opt}");
        assert!(
            cut <= 3 * opt,
            "seed {seed}: {cut} vs optimum {opt}, edges {:?}",
            g.edges()
        );
        checked += 1;
    }
    assert_eq!(checked, 120);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn deterministic_and_balanced(seed in any::<u64>(), k in 1usize..9, gseed in 0u64..1000) {
        let mut rng = ChaCha8Rng::seed_from_u64(gseed);
        let m = rng.gen_range(k..=300);
        let n = rng.gen_range(2..=m.max(2));
        let edges = (0..m).map(|_| (rng.gen_range(0..n as u32), rng.gen_range(0..n as u32))).collect();
        let tg = clone_and_connect(&DataAffinityGraph::new(n, edges).unwrap()).unwrap();
        let a = partition_vertices(&tg, k, DEFAULT_EPSILON, seed).unwrap();
        let b = partition_vertices(&tg, k, DEFAULT_EPSILON, seed).unwrap();
        prop_assert_eq!(&a, &b);
        let cap = cluster_cap(tg.clone_count() as i64, k, DEFAULT_EPSILON) as usize;
        prop_assert!(a.sizes().into_iter().all(|s| s <= cap));
    }
}
