//! Edge partitions, their vertex-cut cost, and the partition file format.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{walk_order, DataAffinityGraph};
use crate::transform::TransformedGraph;
use crate::vpart::VertexPartition;

/// Cluster id per task.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgePartition {
    pub cluster: Vec<u32>,
    pub k: usize,
}

impl EdgePartition {
    pub fn new(cluster: Vec<u32>, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Infeasible("k must be at least 1".into()));
        }
        if let Some(&bad) = cluster.iter().find(|&&c| c as usize >= k) {
            return Err(Error::Mismatch(format!(
                "cluster id {bad} out of range for k = {k}"
            )));
        }
        Ok(Self { cluster, k })
    }

    pub fn m(&self) -> usize {
        self.cluster.len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut s = vec![0usize; self.k];
        for &c in &self.cluster {
            s[c as usize] += 1;
        }
        s
    }

    /// Contiguous chunks in task order: the first `m mod k` clusters get
    /// `ceil(m / k)` tasks, the rest `floor(m / k)`.
    pub fn contiguous(m: usize, k: usize) -> Result<Self> {
        Self::contiguous_along(&(0..m).collect::<Vec<_>>(), k)
    }

    fn contiguous_along(order: &[usize], k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Infeasible("k must be at least 1".into()));
        }
        let m = order.len();
        let (q, r) = (m / k, m % k);
        let mut cluster = vec![0u32; m];
        let mut pos = 0;
        for c in 0..k {
            let len = q + usize::from(c < r);
            for &e in &order[pos..pos + len] {
                cluster[e] = c as u32;
            }
            pos += len;
        }
        Ok(Self { cluster, k })
    }

    /// `k <k> m <m>` header, then one cluster id per line in task order.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(16 + self.m() * 4);
        let _ = writeln!(out, "k {} m {}", self.k, self.m());
        for &c in &self.cluster {
            let _ = writeln!(out, "{c}");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "empty partition file".into(),
        })?;
        let f: Vec<&str> = header.split_whitespace().collect();
        let bad_header = || Error::Parse {
            line: 1,
            msg: "expected header 'k <k> m <m>'".into(),
        };
        if f.len() != 4 || f[0] != "k" || f[2] != "m" {
            return Err(bad_header());
        }
        let k: usize = f[1].parse().map_err(|_| bad_header())?;
        let m: usize = f[3].parse().map_err(|_| bad_header())?;
        let mut cluster = Vec::with_capacity(m);
        for (idx, line) in lines {
            let c: u32 = line.trim().parse().map_err(|_| Error::Parse {
                line: idx + 1,
                msg: format!("expected a cluster id, got {line:?}"),
            })?;
            if c as usize >= k {
                return Err(Error::Parse {
                    line: idx + 1,
                    msg: format!("cluster id {c} out of range for k = {k}"),
                });
            }
            cluster.push(c);
        }
        if cluster.len() != m {
            return Err(Error::Mismatch(format!(
                "header says m = {m}, file lists {} tasks",
                cluster.len()
            )));
        }
        Self::new(cluster, k)
    }
}

/// Vertex-cut cost and balance of an edge partition.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CostReport {
    pub k: usize,
    pub m: usize,
    /// Sum over touched vertices of (clusters spanned - 1).
    pub cost: u64,
    /// Clusters spanned per vertex; 0 for isolated vertices.
    #[serde(skip)]
    pub span: Vec<u32>,
    pub cut_vertices: usize,
    pub sizes: Vec<usize>,
    #[serde(serialize_with = "six_digits")]
    pub balance_factor: f64,
}

fn six_digits<S: serde::Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64((x * 1e6).round() / 1e6)
}

impl CostReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// Largest cluster size over the exact mean `m / k`.
pub fn balance_factor(sizes: &[usize]) -> f64 {
    let m: usize = sizes.iter().sum();
    if m == 0 {
        return 1.0;
    }
    let max = sizes.iter().copied().max().unwrap_or(0);
    max as f64 * sizes.len() as f64 / m as f64
}

pub fn vertex_cut_cost(g: &DataAffinityGraph, ep: &EdgePartition) -> Result<CostReport> {
    if ep.m() != g.m() {
        return Err(Error::Mismatch(format!(
            "partition covers {} tasks, graph has {}",
            ep.m(),
            g.m()
        )));
    }
    let mut span = vec![0u32; g.n()];
    let mut seen: Vec<u32> = Vec::new();
    for (v, s) in span.iter_mut().enumerate() {
        seen.clear();
        seen.extend(g.incident(v).iter().map(|&e| ep.cluster[e as usize]));
        seen.sort_unstable();
        seen.dedup();
        *s = seen.len() as u32;
    }
    let cost = span.iter().map(|&p| p.saturating_sub(1) as u64).sum();
    let cut_vertices = span.iter().filter(|&&p| p > 1).count();
    let sizes = ep.sizes();
    Ok(CostReport {
        k: ep.k,
        m: ep.m(),
        cost,
        span,
        cut_vertices,
        balance_factor: balance_factor(&sizes),
        sizes,
    })
}

/// Map a clone partition with no cut original edge to a task partition.
pub fn to_edge_partition(tg: &TransformedGraph, vp: &VertexPartition) -> Result<EdgePartition> {
    if vp.assignment.len() != tg.clone_count() {
        return Err(Error::Mismatch(format!(
            "vertex partition has {} entries, transformed graph has {} clones",
            vp.assignment.len(),
            tg.clone_count()
        )));
    }
    let mut cluster = Vec::with_capacity(tg.m());
    for (i, (a, b)) in tg.original_edges().enumerate() {
        let (ca, cb) = (vp.assignment[a as usize], vp.assignment[b as usize]);
        if ca != cb {
            return Err(Error::OriginalEdgeCut { edge: i });
        }
        cluster.push(ca);
    }
    EdgePartition::new(cluster, vp.k)
}

/// Preset schedule for a path or cycle, with whether it is flagged as
/// unbalanced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresetPartition {
    pub partition: EdgePartition,
    pub uneven: bool,
}

/// Contiguous runs of consecutive edges along a path or cycle.
pub fn preset_path_partition(g: &DataAffinityGraph, k: usize) -> Result<PresetPartition> {
    let order = walk_order(g).ok_or(Error::NotPreset)?;
    let partition = EdgePartition::contiguous_along(&order, k)?;
    Ok(PresetPartition {
        partition,
        uneven: !g.m().is_multiple_of(k),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::from_edge_list;
    use crate::transform::clone_and_connect;

    const TWO_TRIANGLES: &str = "0 1\n1 2\n3 4\n0 2\n4 5\n3 5";

    fn path(m: u32) -> DataAffinityGraph {
        DataAffinityGraph::new(m as usize + 1, (0..m).map(|i| (i, i + 1)).collect()).unwrap()
    }

    fn cycle(m: u32) -> DataAffinityGraph {
        DataAffinityGraph::new(m as usize, (0..m).map(|i| (i, (i + 1) % m)).collect()).unwrap()
    }

    #[test]
    fn contiguous_split_of_two_triangles() {
        let g = from_edge_list(TWO_TRIANGLES).unwrap();
        let r = vertex_cut_cost(&g, &EdgePartition::contiguous(6, 2).unwrap()).unwrap();
        assert_eq!(r.cost, 4);
        assert_eq!(r.span, vec![2, 1, 2, 2, 2, 1]);
        assert_eq!(r.balance_factor, 1.0);
    }

    #[test]
    fn single_cluster_costs_nothing() {
        let g = from_edge_list(TWO_TRIANGLES).unwrap();
        let r = vertex_cut_cost(&g, &EdgePartition::new(vec![0; 6], 1).unwrap()).unwrap();
        assert_eq!(r.cost, 0);
    }

    #[test]
    fn isolated_vertices_cost_nothing() {
        let g = from_edge_list("n 5\n0 1\n1 2").unwrap();
        let r = vertex_cut_cost(&g, &EdgePartition::new(vec![0, 1], 2).unwrap()).unwrap();
        assert_eq!(r.span, vec![1, 2, 1, 0, 0]);
        assert_eq!(r.cost, 1);
    }

    #[test]
    fn reconstruct_two_triangles() {
        let g = from_edge_list(TWO_TRIANGLES).unwrap();
        let tg = clone_and_connect(&g).unwrap();
        let tri = [0u32, 0, 1, 0, 1, 1];
        let assignment: Vec<u32> = (0..12).map(|c| tri[c / 2]).collect();
        let ep =
            to_edge_partition(&tg, &VertexPartition::new(assignment, 2, 0.0).unwrap()).unwrap();
        assert_eq!(ep.cluster, tri.to_vec());
        assert_eq!(vertex_cut_cost(&g, &ep).unwrap().cost, 0);
    }

    #[test]
    fn reconstruct_rejects_cut_edge() {
        let tg = clone_and_connect(&from_edge_list("0 1\n1 2").unwrap()).unwrap();
        let vp = VertexPartition::new(vec![0, 0, 0, 1], 2, 0.0).unwrap();
        assert_eq!(
            to_edge_partition(&tg, &vp),
            Err(Error::OriginalEdgeCut { edge: 1 })
        );
    }

    #[test]
    fn presets() {
        let p = preset_path_partition(&path(12), 3).unwrap();
        assert!(!p.uneven);
        assert_eq!(vertex_cut_cost(&path(12), &p.partition).unwrap().cost, 2);
        let c = preset_path_partition(&cycle(12), 2).unwrap();
        assert_eq!(vertex_cut_cost(&cycle(12), &c.partition).unwrap().cost, 2);
        let u = preset_path_partition(&path(7), 3).unwrap();
        assert!(u.uneven);
        assert_eq!(u.partition.sizes(), vec![3, 2, 2]);
        assert_eq!(
            preset_path_partition(&from_edge_list(TWO_TRIANGLES).unwrap(), 2),
            Err(Error::NotPreset)
        );
    }

    #[test]
    fn partition_file_round_trip_and_errors() {
        let ep = EdgePartition::new(vec![1, 0, 2, 2], 3).unwrap();
        let text = ep.to_text();
        assert_eq!(text, "k 3 m 4\n1\n0\n2\n2\n");
        assert_eq!(EdgePartition::from_text(&text).unwrap(), ep);
        assert!(EdgePartition::from_text("k 3 m 2\n1\n").is_err());
        assert!(EdgePartition::from_text("k 2 m 1\n5\n").is_err());
        assert!(EdgePartition::from_text("m 1\n0\n").is_err());
    }

    #[test]
    fn report_json_is_flat() {
        let g = from_edge_list(TWO_TRIANGLES).unwrap();
        let r =
            vertex_cut_cost(&g, &EdgePartition::new(vec![0, 0, 0, 0, 0, 1], 2).unwrap()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["cost"], 2);
        assert_eq!(v["balance_factor"], 1.666667);
        assert!(v.get("span").is_none());
    }
}
