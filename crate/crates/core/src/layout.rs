//! First-touch data layout packing and per-cluster load accounting.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::DataAffinityGraph;
use crate::reconstruct::EdgePartition;

const UNPLACED: u32 = u32::MAX;

/// Data-object permutation produced by first-touch packing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LayoutPlan {
    /// New position of each data object.
    pub perm: Vec<u32>,
    /// Per cluster, the position of the first object it placed.
    pub block_begin: Vec<u32>,
    /// Per task, its two endpoint positions in the new layout.
    pub index_remap: Vec<[u32; 2]>,
}

impl LayoutPlan {
    /// Data object stored at each new position.
    pub fn inverse(&self) -> Vec<u32> {
        let mut inv = vec![0u32; self.perm.len()];
        for (v, &p) in self.perm.iter().enumerate() {
            inv[p as usize] = v as u32;
        }
        inv
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("layout serializes")
    }
}

fn check(g: &DataAffinityGraph, ep: &EdgePartition) -> Result<()> {
    if ep.m() != g.m() {
        return Err(Error::Mismatch(format!(
            "partition covers {} tasks, graph has {}",
            ep.m(),
            g.m()
        )));
    }
    Ok(())
}

/// Task ids grouped by cluster, ascending within each cluster.
fn tasks_by_cluster(ep: &EdgePartition) -> Vec<Vec<u32>> {
    let mut groups = vec![Vec::new(); ep.k];
    for (e, &c) in ep.cluster.iter().enumerate() {
        groups[c as usize].push(e as u32);
    }
    groups
}

/// Visit clusters in id order, their tasks in id order, and each task's
/// endpoints in stored order, giving every object the next free position on
/// first touch. Untouched objects follow in their original order.
pub fn cpack_reorder(g: &DataAffinityGraph, ep: &EdgePartition) -> Result<LayoutPlan> {
    check(g, ep)?;
    let mut perm = vec![UNPLACED; g.n()];
    let mut next = 0u32;
    let mut block_begin = Vec::with_capacity(ep.k);
    for tasks in tasks_by_cluster(ep) {
        block_begin.push(next);
        for e in tasks {
            let (u, v) = g.edge(e as usize);
            for x in [u, v] {
                if perm[x as usize] == UNPLACED {
                    perm[x as usize] = next;
                    next += 1;
                }
            }
        }
    }
    for p in perm.iter_mut().filter(|p| **p == UNPLACED) {
        *p = next;
        next += 1;
    }
    let index_remap = g
        .edges()
        .iter()
        .map(|&(u, v)| [perm[u as usize], perm[v as usize]])
        .collect();
    Ok(LayoutPlan {
        perm,
        block_begin,
        index_remap,
    })
}

/// Loads issued when every cluster fetches each distinct object it touches
/// exactly once.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LoadReport {
    pub total_loads: u64,
    pub touched: u64,
    pub redundant_loads: u64,
    pub redundant_fraction: f64,
    pub per_block: Vec<u64>,
}

impl LoadReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

pub fn simulate_loads(g: &DataAffinityGraph, ep: &EdgePartition) -> Result<LoadReport> {
    check(g, ep)?;
    let mut stamp = vec![u32::MAX; g.n()];
    let mut per_block = Vec::with_capacity(ep.k);
    for (c, tasks) in tasks_by_cluster(ep).into_iter().enumerate() {
        let mut distinct = 0u64;
        for e in tasks {
            let (u, v) = g.edge(e as usize);
            for x in [u, v] {
                if stamp[x as usize] != c as u32 {
                    stamp[x as usize] = c as u32;
                    distinct += 1;
                }
            }
        }
        per_block.push(distinct);
    }
    let total_loads: u64 = per_block.iter().sum();
    let touched = g.non_isolated() as u64;
    let redundant_loads = total_loads - touched;
    let redundant_fraction = if total_loads == 0 {
        0.0
    } else {
        redundant_loads as f64 / total_loads as f64
    };
    Ok(LoadReport {
        total_loads,
        touched,
        redundant_loads,
        redundant_fraction,
        per_block,
    })
}
