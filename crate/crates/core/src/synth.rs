//! Small fixtures and synthetic graph generators.

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::DataAffinityGraph;
use crate::reconstruct::EdgePartition;

fn build(n: usize, edges: Vec<(u32, u32)>, name: &str) -> DataAffinityGraph {
    DataAffinityGraph::with_name(n, edges, name).expect("generator emits valid ids")
}

/// Two disjoint triangles with interleaved task order.
pub fn two_triangles() -> DataAffinityGraph {
    build(
        6,
        vec![(0, 1), (1, 2), (3, 4), (0, 2), (4, 5), (3, 5)],
        "two-triangles",
    )
}

/// Six particles, six interactions: a three-task star around particle 0 and
/// a triangle on particles 3, 4, 5, joined through particle 3.
pub fn motivating_example() -> DataAffinityGraph {
    build(
        6,
        vec![(0, 1), (0, 2), (3, 4), (0, 3), (4, 5), (3, 5)],
        "motivating-example",
    )
}

/// Tasks 1-3 in one block, 4-6 in the other.
pub fn motivating_bad_schedule() -> EdgePartition {
    EdgePartition::new(vec![0, 0, 0, 1, 1, 1], 2).unwrap()
}

/// Tasks 1, 2, 4 in one block, 3, 5, 6 in the other.
pub fn motivating_good_schedule() -> EdgePartition {
    EdgePartition::new(vec![0, 0, 1, 0, 1, 1], 2).unwrap()
}

pub fn path(m: usize) -> DataAffinityGraph {
    build(m + 1, (0..m as u32).map(|i| (i, i + 1)).collect(), "path")
}

pub fn cycle(m: usize) -> DataAffinityGraph {
    assert!(m >= 3, "a simple cycle needs at least 3 edges");
    build(
        m,
        (0..m as u32).map(|i| (i, (i + 1) % m as u32)).collect(),
        "cycle",
    )
}

/// Disjoint simple cycles with the given lengths (each at least 3).
pub fn cycles(lengths: &[usize]) -> DataAffinityGraph {
    let mut edges = Vec::new();
    let mut base = 0u32;
    for &len in lengths {
        assert!(len >= 3, "a simple cycle needs at least 3 edges");
        let len = len as u32;
        edges.extend((0..len).map(|i| (base + i, base + (i + 1) % len)));
        base += len;
    }
    build(base as usize, edges, "cycles")
}

/// Star with `leaves` leaves, each extended by one pendant edge.
pub fn spider(leaves: usize) -> DataAffinityGraph {
    let l = leaves as u32;
    let mut edges: Vec<(u32, u32)> = (1..=l).map(|i| (0, i)).collect();
    edges.extend((1..=l).map(|i| (i, l + i)));
    build(2 * leaves + 1, edges, "spider")
}

/// 4-regular torus grid, tasks in row-major order (right edge, then down edge).
pub fn torus_mesh(rows: usize, cols: usize) -> DataAffinityGraph {
    assert!(
        rows >= 3 && cols >= 3,
        "torus needs at least 3 x 3 vertices"
    );
    let id = |r: usize, c: usize| (r * cols + c) as u32;
    let mut edges = Vec::with_capacity(2 * rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            edges.push((id(r, c), id(r, (c + 1) % cols)));
            edges.push((id(r, c), id((r + 1) % rows, c)));
        }
    }
    build(rows * cols, edges, "torus-mesh")
}

/// Chung-Lu style graph: `m` tasks whose endpoints are drawn with probability
/// proportional to `(i + 1)^(-1 / (exponent - 1))`, giving a power-law degree
/// tail with the given exponent. Self-loops are redrawn.
pub fn power_law(n: usize, m: usize, exponent: f64, seed: u64) -> DataAffinityGraph {
    assert!(n >= 2 && exponent > 1.0);
    let alpha = 1.0 / (exponent - 1.0);
    let weights: Vec<f64> = (0..n).map(|i| ((i + 1) as f64).powf(-alpha)).collect();
    let dist = WeightedIndex::new(&weights).expect("positive weights");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::with_capacity(m);
    while edges.len() < m {
        let u = dist.sample(&mut rng) as u32;
        let v = dist.sample(&mut rng) as u32;
        if u != v {
            edges.push((u, v));
        }
    }
    build(n, edges, "power-law")
}

/// `m` tasks with endpoints drawn uniformly from `n` objects, no self-loops.
pub fn random_graph<R: Rng>(n: usize, m: usize, rng: &mut R) -> DataAffinityGraph {
    assert!(n >= 2);
    let edges = (0..m)
        .map(|_| {
            let u = rng.gen_range(0..n as u32);
            let mut v = rng.gen_range(0..n as u32 - 1);
            if v >= u {
                v += 1;
            }
            (u, v)
        })
        .collect();
    build(n, edges, "random")
}
