//! Balanced k-way partitioning of weighted graphs.
//!
//! Multilevel scheme: contract heavy-edge matchings down to at most
//! `max(4k, 64)` vertices, grow an initial partition on the coarsest graph,
//! then project it back level by level with a balance sweep and boundary
//! refinement at each level.

mod buckets;
mod coarsen;
mod graph;
mod initial;
mod refine;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub use buckets::GainBuckets;
pub use coarsen::{coarsen, coarsen_bounded, heavy_edge_matching, CoarseLevel};
pub use graph::WeightedGraph;
pub use initial::grow_regions;
pub use refine::{enforce_balance, refine};

use crate::error::{Error, Result};
use crate::transform::TransformedGraph;

pub const DEFAULT_EPSILON: f64 = 0.03;

/// A coarse graph shrinking by less than this factor ends coarsening.
const CONVERGED_RATIO: f64 = 0.85;

/// Cluster assignment over the clones of a transformed graph.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VertexPartition {
    pub assignment: Vec<u32>,
    pub k: usize,
    pub epsilon: f64,
}

impl VertexPartition {
    pub fn new(assignment: Vec<u32>, k: usize, epsilon: f64) -> Result<Self> {
        if k == 0 {
            return Err(Error::Infeasible("k must be at least 1".into()));
        }
        if let Some(bad) = assignment.iter().find(|&&c| c as usize >= k) {
            return Err(Error::Mismatch(format!(
                "cluster id {bad} out of range for k = {k}"
            )));
        }
        Ok(Self {
            assignment,
            k,
            epsilon,
        })
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut s = vec![0usize; self.k];
        for &c in &self.assignment {
            s[c as usize] += 1;
        }
        s
    }

    /// Largest cluster size over mean cluster size.
    pub fn balance_factor(&self) -> f64 {
        let max = self.sizes().into_iter().max().unwrap_or(0);
        if self.assignment.is_empty() {
            return 1.0;
        }
        max as f64 * self.k as f64 / self.assignment.len() as f64
    }
}

/// Heaviest cluster weight permitted for `total` weight split `k` ways:
/// `floor((1 + epsilon) * total / k)`, but never below `ceil(total / k)`.
pub fn cluster_cap(total: i64, k: usize, epsilon: f64) -> i64 {
    let k = k as i64;
    let tol = ((1.0 + epsilon) * total as f64 / k as f64 + 1e-9).floor() as i64;
    tol.max((total + k - 1) / k)
}

/// Multilevel k-way partition of an arbitrary weighted graph.
pub fn partition_weighted(
    g: &WeightedGraph,
    k: usize,
    epsilon: f64,
    seed: u64,
) -> Result<Vec<u32>> {
    if k == 0 {
        return Err(Error::Infeasible("k must be at least 1".into()));
    }
    if !(epsilon >= 0.0 && epsilon.is_finite()) {
        return Err(Error::Infeasible(format!(
            "epsilon must be a nonnegative number, got {epsilon}"
        )));
    }
    let total = g.total_vertex_weight();
    if k as i64 > total {
        return Err(Error::Infeasible(format!(
            "k = {k} exceeds total vertex weight {total}"
        )));
    }
    if k == 1 {
        return Ok(vec![0; g.n()]);
    }
    let cap = cluster_cap(total, k, epsilon);
    let coarsen_to = (4 * k).max(64);
    let max_vwgt = (3 * total / (2 * coarsen_to as i64))
        .max(2 * g.max_vertex_weight())
        .min(cap)
        .max(1);

    let mut levels: Vec<CoarseLevel> = Vec::new();
    loop {
        let cur = levels.last().map_or(g, |l| &l.graph);
        if !levels.is_empty() && cur.n() <= coarsen_to {
            break;
        }
        let next = coarsen_bounded(cur, max_vwgt);
        if next.graph.n() == cur.n() || next.graph.n() < k {
            break;
        }
        let converged = next.graph.n() as f64 > CONVERGED_RATIO * cur.n() as f64;
        levels.push(next);
        if converged {
            break;
        }
    }

    let coarsest = levels.last().map_or(g, |l| &l.graph);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let trials = if coarsest.n() <= 256 { 12 } else { 4 };
    let mut best: Option<((i64, i64), Vec<u32>)> = None;
    for t in 0..trials {
        let mut part = if t == 0 {
            grow_regions::<ChaCha8Rng>(coarsest, k, cap, None)
        } else {
            grow_regions(coarsest, k, cap, Some(&mut rng))
        };
        enforce_balance(coarsest, &mut part, k, cap);
        refine(coarsest, &mut part, k, cap);
        let over: i64 = coarsest
            .cluster_weights(&part, k)
            .iter()
            .map(|&w| (w - cap).max(0))
            .sum();
        let key = (over, coarsest.cut(&part));
        if best.as_ref().is_none_or(|(b, _)| key < *b) {
            best = Some((key, part));
        }
    }
    let mut part = best.expect("at least one trial").1;

    for i in (0..levels.len()).rev() {
        let fine = if i == 0 { g } else { &levels[i - 1].graph };
        let map = &levels[i].map;
        let mut fine_part: Vec<u32> = map.iter().map(|&c| part[c as usize]).collect();
        enforce_balance(fine, &mut fine_part, k, cap);
        refine(fine, &mut fine_part, k, cap);
        part = fine_part;
    }
    Ok(part)
}

/// Partition the clones of `tg` into `k` clusters of at most
/// `cluster_cap(clone_count, k, epsilon)` clones each, minimizing cut weight.
/// Deterministic for a fixed seed.
pub fn partition_vertices(
    tg: &TransformedGraph,
    k: usize,
    epsilon: f64,
    seed: u64,
) -> Result<VertexPartition> {
    if k == 0 || k > tg.clone_count() {
        return Err(Error::Infeasible(format!(
            "k = {k} must be in 1..={}",
            tg.clone_count()
        )));
    }
    let g = tg.to_weighted();
    let assignment = partition_weighted(&g, k, epsilon, seed)?;
    VertexPartition::new(assignment, k, epsilon)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::from_edge_list;
    use crate::transform::clone_and_connect;

    #[test]
    fn caps() {
        assert_eq!(cluster_cap(12, 2, 0.03), 6);
        assert_eq!(cluster_cap(2_000_000, 1024, 0.03), 2011);
        assert_eq!(cluster_cap(5, 4, 0.03), 2);
        assert_eq!(cluster_cap(100, 2, 0.0), 50);
    }

    #[test]
    fn single_edge_one_cluster() {
        let tg = clone_and_connect(&from_edge_list("0 1").unwrap()).unwrap();
        let vp = partition_vertices(&tg, 1, DEFAULT_EPSILON, 0).unwrap();
        assert_eq!(vp.assignment, vec![0, 0]);
        assert_eq!(tg.cut_weight(&vp.assignment), 0);
    }

    #[test]
    fn two_triangles_split_cleanly() {
        let tg =
            clone_and_connect(&from_edge_list("0 1\n1 2\n3 4\n0 2\n4 5\n3 5").unwrap()).unwrap();
        let vp = partition_vertices(&tg, 2, DEFAULT_EPSILON, 0).unwrap();
        assert_eq!(tg.cut_weight(&vp.assignment), 0);
        assert_eq!(vp.sizes(), vec![6, 6]);
    }

    #[test]
    fn path_costs_one_aux_edge() {
        let g = crate::graph::DataAffinityGraph::new(13, (0..12u32).map(|i| (i, i + 1)).collect())
            .unwrap();
        let tg = clone_and_connect(&g).unwrap();
        let vp = partition_vertices(&tg, 2, DEFAULT_EPSILON, 0).unwrap();
        assert_eq!(tg.cut_weight(&vp.assignment), 1);
    }

    #[test]
    fn rejects_bad_k() {
        let tg = clone_and_connect(&from_edge_list("0 1").unwrap()).unwrap();
        assert!(matches!(
            partition_vertices(&tg, 3, 0.03, 0),
            Err(Error::Infeasible(_))
        ));
        assert!(matches!(
            partition_vertices(&tg, 0, 0.03, 0),
            Err(Error::Infeasible(_))
        ));
        assert!(matches!(
            partition_vertices(&tg, 2, -1.0, 0),
            Err(Error::Infeasible(_))
        ));
    }
}
