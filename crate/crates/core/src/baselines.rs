//! Streaming random and greedy edge partitioners used for comparison.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::DataAffinityGraph;
use crate::reconstruct::EdgePartition;

/// Shuffle task ids with a seeded generator and deal them round-robin.
pub fn random_partition(g: &DataAffinityGraph, k: usize, seed: u64) -> Result<EdgePartition> {
    if k == 0 {
        return Err(Error::Infeasible("k must be at least 1".into()));
    }
    let mut order: Vec<usize> = (0..g.m()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut cluster = vec![0u32; g.m()];
    for (i, &e) in order.iter().enumerate() {
        cluster[e] = (i % k) as u32;
    }
    EdgePartition::new(cluster, k)
}

/// One pass in task order. Each task goes to the non-full cluster that already
/// holds the most of its endpoints (ties: fewer tasks, then lower id); when no
/// cluster holds either endpoint it goes to the smallest cluster. Clusters
/// hold at most `ceil(m / k)` tasks.
pub fn greedy_partition(g: &DataAffinityGraph, k: usize) -> Result<EdgePartition> {
    if k == 0 {
        return Err(Error::Infeasible("k must be at least 1".into()));
    }
    let m = g.m();
    let capacity = m.div_ceil(k);
    let mut present: Vec<Vec<u32>> = vec![Vec::new(); g.n()];
    let mut sizes = vec![0usize; k];
    let mut by_size: BTreeSet<(usize, u32)> = (0..k as u32).map(|c| (0, c)).collect();
    let mut cluster = Vec::with_capacity(m);

    for &(u, v) in g.edges() {
        let score = |c: u32| {
            let pu = present[u as usize].contains(&c) as u8;
            let pv = u != v && present[v as usize].contains(&c);
            pu + pv as u8
        };
        let candidates = present[u as usize]
            .iter()
            .chain(present[v as usize].iter())
            .copied();
        let best = candidates
            .filter(|&c| sizes[c as usize] < capacity)
            .max_by_key(|&c| {
                (
                    score(c),
                    std::cmp::Reverse(sizes[c as usize]),
                    std::cmp::Reverse(c),
                )
            });
        let chosen = match best {
            Some(c) => c,
            None => by_size.iter().next().expect("some cluster has room").1,
        };

        by_size.remove(&(sizes[chosen as usize], chosen));
        sizes[chosen as usize] += 1;
        if sizes[chosen as usize] < capacity {
            by_size.insert((sizes[chosen as usize], chosen));
        }
        for x in [u, v] {
            if !present[x as usize].contains(&chosen) {
                present[x as usize].push(chosen);
            }
        }
        cluster.push(chosen);
    }
    EdgePartition::new(cluster, k)
}

/// Contiguous chunks of the original task order.
pub fn default_partition(g: &DataAffinityGraph, k: usize) -> Result<EdgePartition> {
    EdgePartition::contiguous(g.m(), k)
}
