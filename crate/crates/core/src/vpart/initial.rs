//! Greedy graph-growing initial partition of the coarsest graph.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rand::Rng;

use super::WeightedGraph;

const UNASSIGNED: u32 = u32::MAX;

/// Grow `k - 1` regions one after another; whatever is left forms the last
/// cluster. Each region starts at the heaviest unassigned vertex (lowest id on
/// ties), or at a random unassigned vertex when `rng` is given, and absorbs
/// the frontier vertex most strongly connected to it until it reaches its
/// share of the remaining weight. Vertices that would push a region past
/// `cap` are passed over. The result may still need a balance sweep.
pub fn grow_regions<R: Rng>(
    g: &WeightedGraph,
    k: usize,
    cap: i64,
    mut rng: Option<&mut R>,
) -> Vec<u32> {
    let n = g.n();
    let mut part = vec![UNASSIGNED; n];
    if k <= 1 {
        part.iter_mut().for_each(|p| *p = 0);
        return part;
    }

    let mut by_weight: Vec<u32> = (0..n as u32).collect();
    by_weight.sort_by_key(|&v| (Reverse(g.vertex_weight(v as usize)), v));
    let mut cursor = 0usize;

    let mut conn = vec![0i64; n];
    let mut skipped = vec![false; n];
    let mut remaining = g.total_vertex_weight();

    for region in 0..k - 1 {
        let r = region as u32;
        let target = remaining / (k - region) as i64;
        let mut weight = 0i64;
        let mut heap: BinaryHeap<(i64, Reverse<u32>)> = BinaryHeap::new();
        let mut touched: Vec<u32> = Vec::new();

        while weight < target {
            let next = loop {
                match heap.pop() {
                    Some((c, Reverse(v))) => {
                        let vi = v as usize;
                        if part[vi] == UNASSIGNED && !skipped[vi] && conn[vi] == c {
                            break Some(v);
                        }
                    }
                    None => break None,
                }
            };
            let v = match next {
                Some(v) => v,
                None => {
                    let random_pick = rng.as_deref_mut().and_then(|rng| {
                        (0..32)
                            .map(|_| rng.gen_range(0..n))
                            .find(|&v| part[v] == UNASSIGNED && !skipped[v])
                    });
                    match random_pick {
                        Some(v) => v as u32,
                        None => {
                            while cursor < n && part[by_weight[cursor] as usize] != UNASSIGNED {
                                cursor += 1;
                            }
                            match by_weight[cursor..]
                                .iter()
                                .find(|&&v| part[v as usize] == UNASSIGNED && !skipped[v as usize])
                            {
                                Some(&v) => v,
                                None => break,
                            }
                        }
                    }
                }
            };
            let vi = v as usize;
            let w = g.vertex_weight(vi);
            if weight > 0 && weight + w > cap {
                skipped[vi] = true;
                touched.push(v);
                continue;
            }
            part[vi] = r;
            weight += w;
            for (u, ew) in g.neighbors(vi) {
                let ui = u as usize;
                if part[ui] == UNASSIGNED && !skipped[ui] {
                    if conn[ui] == 0 {
                        touched.push(u);
                    }
                    conn[ui] += ew;
                    heap.push((conn[ui], Reverse(u)));
                }
            }
        }
        for v in touched {
            conn[v as usize] = 0;
            skipped[v as usize] = false;
        }
        remaining -= weight;
    }

    let last = (k - 1) as u32;
    for p in part.iter_mut().filter(|p| **p == UNASSIGNED) {
        *p = last;
    }
    part
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_cluster() {
        let g = WeightedGraph::from_edges(vec![1; 5], vec![(0, 1, 1)]);
        assert_eq!(grow_regions::<ChaCha8Rng>(&g, 1, 5, None), vec![0; 5]);
    }

    #[test]
    fn isolated_units_split_evenly() {
        let k = 4;
        let g = WeightedGraph::from_edges(vec![1; 2 * k], vec![]);
        let part = grow_regions::<ChaCha8Rng>(&g, k, 2, None);
        assert_eq!(g.cluster_weights(&part, k), vec![2; k]);
    }

    #[test]
    fn regions_follow_strong_connections() {
        // two 3-cliques joined by a light edge
        let edges = vec![
            (0, 2, 5),
            (2, 4, 5),
            (0, 4, 5),
            (1, 3, 5),
            (3, 5, 5),
            (1, 5, 5),
            (4, 5, 1),
        ];
        let g = WeightedGraph::from_edges(vec![1; 6], edges);
        let part = grow_regions::<ChaCha8Rng>(&g, 2, 3, None);
        assert_eq!(part, vec![0, 1, 0, 1, 0, 1]);
    }
}
