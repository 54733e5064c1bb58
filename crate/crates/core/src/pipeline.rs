//! End-to-end scheduling: precheck, clone-and-connect, vertex partition,
//! exact rebalance, edge repair, reconstruction and swap refinement.

use serde::Serialize;

use crate::edge_fix::{fix_cut_real_edges, rebalance_exact, FixOutcome};
use crate::error::{Error, Result};
use crate::graph::{should_partition, DataAffinityGraph, Precheck, DEFAULT_REUSE_THRESHOLD};
use crate::polish::{clones_of, swap_refine};
use crate::reconstruct::{
    preset_path_partition, to_edge_partition, vertex_cut_cost, CostReport, EdgePartition,
};
use crate::transform::{clone_and_connect, TransformedGraph};
use crate::vpart::{partition_vertices, VertexPartition, DEFAULT_EPSILON};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Options {
    pub k: usize,
    pub epsilon: f64,
    pub seed: u64,
    pub reuse_threshold: f64,
    /// Always run the partitioner, even when the precheck would skip or
    /// preset the graph.
    pub skip_precheck: bool,
}

impl Options {
    pub fn new(k: usize) -> Self {
        Self {
            k,
            epsilon: DEFAULT_EPSILON,
            seed: 0,
            reuse_threshold: DEFAULT_REUSE_THRESHOLD,
            skip_precheck: false,
        }
    }
}

/// Every intermediate of one clone-and-connect run.
#[derive(Debug, Clone)]
pub struct CloneRun {
    pub transformed: TransformedGraph,
    /// Partitioner output, balanced within the tolerance.
    pub raw: VertexPartition,
    /// `raw` moved to exact, even cluster sizes.
    pub balanced: VertexPartition,
    pub fix: FixOutcome,
    /// Task partition read off the repaired clone partition.
    pub reconstructed: EdgePartition,
    /// `reconstructed` after swap refinement.
    pub partition: EdgePartition,
}

impl CloneRun {
    pub fn raw_aux_cut(&self) -> usize {
        self.transformed.aux_cut(&self.raw.assignment)
    }

    /// Auxiliary edges cut by the repaired clone partition.
    pub fn aux_cut(&self) -> usize {
        self.transformed.aux_cut(&self.fix.partition.assignment)
    }

    /// Auxiliary edges cut when each task's clones follow the final partition.
    pub fn final_aux_cut(&self) -> usize {
        self.transformed
            .aux_cut(&clones_of(&self.partition).assignment)
    }
}

/// Sweeps of task swap refinement after reconstruction.
pub const SWAP_PASSES: usize = 8;

fn check_k(g: &DataAffinityGraph, k: usize) -> Result<()> {
    if g.m() == 0 {
        return Err(Error::EmptyGraph);
    }
    if k == 0 || k > g.m() {
        return Err(Error::Infeasible(format!(
            "k = {k} must be between 1 and m = {}",
            g.m()
        )));
    }
    Ok(())
}

/// Clone-and-connect partition of the tasks, without the precheck.
pub fn clone_partition(
    g: &DataAffinityGraph,
    k: usize,
    epsilon: f64,
    seed: u64,
) -> Result<CloneRun> {
    check_k(g, k)?;
    let transformed = clone_and_connect(g)?;
    let raw = partition_vertices(&transformed, k, epsilon, seed)?;
    let balanced = rebalance_exact(&transformed, &raw);
    let fix = fix_cut_real_edges(&transformed, &balanced)?;
    let reconstructed = to_edge_partition(&transformed, &fix.partition)?;
    let partition = swap_refine(g, &reconstructed, SWAP_PASSES);
    Ok(CloneRun {
        transformed,
        raw,
        balanced,
        fix,
        reconstructed,
        partition,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    /// Clone-and-connect partitioning.
    Partitioned,
    /// Contiguous runs along a path or cycle.
    Preset,
    /// Original task order in contiguous chunks.
    Skipped,
}

#[derive(Debug, Clone)]
pub struct Schedule {
    pub route: Route,
    pub partition: EdgePartition,
    pub report: CostReport,
    /// Cluster sizes are not all within one task of each other.
    pub uneven: bool,
    /// Present when the partitioner ran.
    pub run: Option<CloneRun>,
}

/// Schedule the tasks of `g` into `opts.k` clusters.
pub fn schedule(g: &DataAffinityGraph, opts: &Options) -> Result<Schedule> {
    check_k(g, opts.k)?;
    let check = if opts.skip_precheck {
        Precheck::Partition
    } else {
        should_partition(g, opts.reuse_threshold)
    };
    let (route, partition, run) = match check {
        Precheck::Skip => (
            Route::Skipped,
            EdgePartition::contiguous(g.m(), opts.k)?,
            None,
        ),
        Precheck::Preset(_) => (
            Route::Preset,
            preset_path_partition(g, opts.k)?.partition,
            None,
        ),
        Precheck::Partition => {
            let run = clone_partition(g, opts.k, opts.epsilon, opts.seed)?;
            (Route::Partitioned, run.partition.clone(), Some(run))
        }
    };
    let report = vertex_cut_cost(g, &partition)?;
    let (lo, hi) = (
        report.sizes.iter().min().copied(),
        report.sizes.iter().max().copied(),
    );
    let uneven = matches!((lo, hi), (Some(lo), Some(hi)) if hi - lo > 1);
    Ok(Schedule {
        route,
        partition,
        report,
        uneven,
        run,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth;

    #[test]
    fn two_triangles_reach_zero() {
        let g = synth::two_triangles();
        let s = schedule(&g, &Options::new(2)).unwrap();
        assert_eq!(s.route, Route::Partitioned);
        assert_eq!(s.report.cost, 0);
        assert_eq!(s.partition.sizes(), vec![3, 3]);
    }

    #[test]
    fn path_is_preset() {
        let g = synth::path(12);
        let s = schedule(&g, &Options::new(3)).unwrap();
        assert_eq!(s.route, Route::Preset);
        assert_eq!(s.report.cost, 2);
        let mut forced = Options::new(3);
        forced.skip_precheck = true;
        let run = schedule(&g, &forced).unwrap();
        assert_eq!(run.route, Route::Partitioned);
        assert_eq!(run.partition.sizes(), vec![4, 4, 4]);
    }

    #[test]
    fn disjoint_edges_are_skipped() {
        let g = DataAffinityGraph::new(4, vec![(0, 1), (2, 3)]).unwrap();
        let s = schedule(&g, &Options::new(2)).unwrap();
        assert_eq!(s.route, Route::Skipped);
        assert_eq!(s.report.cost, 0);
    }

    #[test]
    fn bad_k() {
        let g = synth::two_triangles();
        assert!(matches!(
            schedule(&g, &Options::new(0)),
            Err(Error::Infeasible(_))
        ));
        assert!(matches!(
            schedule(&g, &Options::new(7)),
            Err(Error::Infeasible(_))
        ));
    }
}
