//! Data-affinity graphs: vertices are data objects, edges are tasks.
//!
//! Edge order is significant. Task `i` is always the `i`-th ingested edge, and
//! per-vertex incidence lists are kept in ascending edge-id order.

use std::collections::HashSet;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};

/// Immutable data-affinity graph with CSR incidence lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DataAffinityGraph {
    n: usize,
    edges: Vec<(u32, u32)>,
    inc_offsets: Vec<usize>,
    inc_edges: Vec<u32>,
    name: String,
}

impl DataAffinityGraph {
    pub fn new(n: usize, edges: Vec<(u32, u32)>) -> Result<Self> {
        Self::with_name(n, edges, String::new())
    }

    pub fn with_name(n: usize, edges: Vec<(u32, u32)>, name: impl Into<String>) -> Result<Self> {
        if n > u32::MAX as usize || edges.len() > (u32::MAX / 2) as usize {
            return Err(Error::TooLarge(format!("n = {n}, m = {}", edges.len())));
        }
        for (i, &(u, v)) in edges.iter().enumerate() {
            let bad = if u as usize >= n {
                Some(u)
            } else if v as usize >= n {
                Some(v)
            } else {
                None
            };
            if let Some(id) = bad {
                return Err(Error::VertexOutOfRange {
                    line: i + 1,
                    id: id as u64,
                    n: n as u64,
                });
            }
        }

        let mut inc_offsets = vec![0usize; n + 1];
        for &(u, v) in &edges {
            inc_offsets[u as usize + 1] += 1;
            inc_offsets[v as usize + 1] += 1;
        }
        for v in 0..n {
            inc_offsets[v + 1] += inc_offsets[v];
        }
        let mut fill = inc_offsets.clone();
        let mut inc_edges = vec![0u32; 2 * edges.len()];
        for (e, &(u, v)) in edges.iter().enumerate() {
            inc_edges[fill[u as usize]] = e as u32;
            fill[u as usize] += 1;
            inc_edges[fill[v as usize]] = e as u32;
            fill[v as usize] += 1;
        }

        Ok(Self {
            n,
            edges,
            inc_offsets,
            inc_edges,
            name: name.into(),
        })
    }

    /// Number of data objects.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of tasks.
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> (u32, u32) {
        self.edges[e]
    }

    /// Incident edge ids of `v`, ascending. A self-loop appears twice.
    pub fn incident(&self, v: usize) -> &[u32] {
        &self.inc_edges[self.inc_offsets[v]..self.inc_offsets[v + 1]]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.inc_offsets[v + 1] - self.inc_offsets[v]
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Number of vertices with at least one incident task.
    pub fn non_isolated(&self) -> usize {
        (0..self.n).filter(|&v| self.degree(v) > 0).count()
    }

    /// The endpoint of edge `e` opposite to `v`.
    pub fn other(&self, e: usize, v: u32) -> u32 {
        let (a, b) = self.edges[e];
        if a == v {
            b
        } else {
            a
        }
    }
}

/// Parse the line-oriented edge-list format.
///
/// Lines starting with `#` are comments. An optional `n <count>` line may
/// precede the first edge; otherwise `n` is one more than the largest id.
pub fn from_edge_list(text: &str) -> Result<DataAffinityGraph> {
    let mut declared_n: Option<u64> = None;
    let mut edges = Vec::new();
    let mut max_id: Option<u64> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split_whitespace();
        let first = fields.next().unwrap();
        if first == "n" {
            if declared_n.is_some() || !edges.is_empty() {
                return Err(Error::Parse {
                    line: line_no,
                    msg: "'n' header must precede all edges".into(),
                });
            }
            let count = fields
                .next()
                .and_then(|s| s.parse::<u64>().ok())
                .ok_or_else(|| Error::Parse {
                    line: line_no,
                    msg: "expected 'n <count>'".into(),
                })?;
            if fields.next().is_some() {
                return Err(Error::Parse {
                    line: line_no,
                    msg: "trailing tokens after 'n <count>'".into(),
                });
            }
            declared_n = Some(count);
            continue;
        }
        let parse = |s: Option<&str>| -> Result<u64> {
            s.and_then(|t| t.parse::<u64>().ok())
                .ok_or_else(|| Error::Parse {
                    line: line_no,
                    msg: format!("expected two nonnegative integers, got {line:?}"),
                })
        };
        let u = parse(Some(first))?;
        let v = parse(fields.next())?;
        if fields.next().is_some() {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("expected two integers, got {line:?}"),
            });
        }
        if let Some(n) = declared_n {
            let id = u.max(v);
            if id >= n {
                return Err(Error::VertexOutOfRange {
                    line: line_no,
                    id,
                    n,
                });
            }
        }
        if u.max(v) >= u32::MAX as u64 {
            return Err(Error::Parse {
                line: line_no,
                msg: "vertex id exceeds 32-bit range".into(),
            });
        }
        max_id = Some(max_id.map_or(u.max(v), |m: u64| m.max(u).max(v)));
        edges.push((u as u32, v as u32));
    }

    let n = match declared_n {
        Some(n) => n as usize,
        None => max_id.map_or(0, |m| m as usize + 1),
    };
    DataAffinityGraph::new(n, edges)
}

/// Serialize to the edge-list format accepted by [`from_edge_list`].
pub fn to_edge_list(g: &DataAffinityGraph) -> String {
    let mut out = String::with_capacity(16 + g.m() * 12);
    let _ = writeln!(out, "n {}", g.n());
    for &(u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

/// How a Matrix Market matrix is turned into a data-affinity graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixMode {
    /// `x_j` objects are vertices `0..cols`, `y_i` objects are `cols..cols+rows`;
    /// one task per stored nonzero `A[i,j]`.
    SpmvBipartite,
    /// Square matrix read as an undirected adjacency pattern.
    SymmetricAdjacency,
}

/// Parse a Matrix Market coordinate file. Values are ignored.
pub fn from_matrix_market(text: &str, mode: MatrixMode) -> Result<DataAffinityGraph> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "empty input".into(),
    })?;
    let tokens: Vec<String> = header
        .split_whitespace()
        .map(|t| t.to_ascii_lowercase())
        .collect();
    let header_err = |msg: &str| Error::Parse {
        line: 1,
        msg: msg.to_string(),
    };
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" {
        return Err(header_err(
            "expected '%%MatrixMarket matrix coordinate <field> <symmetry>'",
        ));
    }
    if tokens[1] != "matrix" || tokens[2] != "coordinate" {
        return Err(header_err("only 'matrix coordinate' is supported"));
    }
    if !matches!(tokens[3].as_str(), "pattern" | "real" | "integer") {
        return Err(header_err("field must be pattern, real or integer"));
    }
    let symmetric = match tokens[4].as_str() {
        "general" => false,
        "symmetric" | "skew-symmetric" => true,
        _ => {
            return Err(header_err(
                "symmetry must be general, symmetric or skew-symmetric",
            ))
        }
    };

    let mut size: Option<(u64, u64, u64)> = None;
    let mut entries: Vec<(u32, u32)> = Vec::new();
    for (idx, raw) in lines {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        let mut fields = line.split_whitespace();
        let mut next_int = || -> Result<u64> {
            fields
                .next()
                .and_then(|t| t.parse::<u64>().ok())
                .ok_or_else(|| Error::Parse {
                    line: line_no,
                    msg: format!("malformed line {line:?}"),
                })
        };
        match size {
            None => {
                let dims = (next_int()?, next_int()?, next_int()?);
                if dims.0 >= u32::MAX as u64 / 2 || dims.1 >= u32::MAX as u64 / 2 {
                    return Err(Error::TooLarge(format!("{} x {} matrix", dims.0, dims.1)));
                }
                entries.reserve(dims.2 as usize);
                size = Some(dims);
            }
            Some((rows, cols, nnz)) => {
                let i = next_int()?;
                let j = next_int()?;
                if i == 0 || j == 0 || i > rows || j > cols {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!(
                            "entry ({i}, {j}) outside {rows} x {cols} (indices are 1-based)"
                        ),
                    });
                }
                if entries.len() as u64 == nnz {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("more than {nnz} entries"),
                    });
                }
                entries.push(((i - 1) as u32, (j - 1) as u32));
            }
        }
    }
    let (rows, cols, nnz) = size.ok_or(Error::Parse {
        line: 1,
        msg: "missing size line".into(),
    })?;
    if entries.len() as u64 != nnz {
        return Err(Error::Parse {
            line: text.lines().count(),
            msg: format!("expected {nnz} entries, found {}", entries.len()),
        });
    }

    match mode {
        MatrixMode::SpmvBipartite => {
            let cols32 = cols as u32;
            let mut edges = Vec::with_capacity(entries.len() * if symmetric { 2 } else { 1 });
            for &(i, j) in &entries {
                edges.push((j, cols32 + i));
                if symmetric && i != j {
                    edges.push((i, cols32 + j));
                }
            }
            DataAffinityGraph::with_name((rows + cols) as usize, edges, "spmv")
        }
        MatrixMode::SymmetricAdjacency => {
            if rows != cols {
                return Err(Error::Mismatch(format!(
                    "adjacency mode needs a square matrix, got {rows} x {cols}"
                )));
            }
            let mut seen: HashSet<(u32, u32)> = HashSet::with_capacity(entries.len());
            let mut edges = Vec::with_capacity(entries.len());
            for &(i, j) in &entries {
                if i == j {
                    continue;
                }
                if seen.insert((i.min(j), i.max(j))) {
                    edges.push((i, j));
                }
            }
            DataAffinityGraph::with_name(rows as usize, edges, "adjacency")
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeBin {
    pub degree: usize,
    pub count: usize,
    pub percent: f64,
}

/// Vertex-degree frequencies, ascending by degree.
#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct DegreeHistogram {
    pub bins: Vec<DegreeBin>,
}

impl DegreeHistogram {
    pub fn percent_of(&self, degree: usize) -> f64 {
        self.bins
            .iter()
            .find(|b| b.degree == degree)
            .map_or(0.0, |b| b.percent)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("degree\tcount\tpercent\n");
        for b in &self.bins {
            let _ = writeln!(out, "{}\t{}\t{}", b.degree, b.count, b.percent);
        }
        out
    }
}

pub fn degree_distribution(g: &DataAffinityGraph) -> DegreeHistogram {
    let mut counts: Vec<usize> = Vec::new();
    for v in 0..g.n() {
        let d = g.degree(v);
        if d >= counts.len() {
            counts.resize(d + 1, 0);
        }
        counts[d] += 1;
    }
    let n = g.n() as f64;
    let bins = counts
        .into_iter()
        .enumerate()
        .filter(|&(_, c)| c > 0)
        .map(|(degree, count)| DegreeBin {
            degree,
            count,
            percent: 100.0 * count as f64 / n,
        })
        .collect();
    DegreeHistogram { bins }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PresetShape {
    Path,
    Cycle,
}

/// Outcome of the pre-partitioning checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Precheck {
    Partition,
    Skip,
    Preset(PresetShape),
}

pub const DEFAULT_REUSE_THRESHOLD: f64 = 2.0;

/// Decide whether a graph is worth partitioning.
///
/// A graph in which no data object is shared by two tasks is skipped. Simple
/// paths and cycles get a preset schedule. Otherwise the graph is skipped when
/// the mean degree of its non-isolated vertices is below `reuse_threshold`.
pub fn should_partition(g: &DataAffinityGraph, reuse_threshold: f64) -> Precheck {
    let touched = g.non_isolated();
    if g.m() == 0 || g.max_degree() < 2 {
        return Precheck::Skip;
    }
    if let Some(shape) = preset_shape(g) {
        return Precheck::Preset(shape);
    }
    let avg = 2.0 * g.m() as f64 / touched as f64;
    if avg < reuse_threshold {
        Precheck::Skip
    } else {
        Precheck::Partition
    }
}

/// Detect whether the non-isolated part of `g` is a single simple path or cycle.
pub fn preset_shape(g: &DataAffinityGraph) -> Option<PresetShape> {
    let touched = g.non_isolated();
    if g.m() == 0 || g.max_degree() > 2 {
        return None;
    }
    if g.edges().iter().any(|&(u, v)| u == v) {
        return None;
    }
    let start = (0..g.n()).find(|&v| g.degree(v) > 0)?;
    if reachable_count(g, start) != touched {
        return None;
    }
    if g.m() + 1 == touched {
        Some(PresetShape::Path)
    } else if g.m() == touched && touched >= 3 {
        Some(PresetShape::Cycle)
    } else {
        None
    }
}

fn reachable_count(g: &DataAffinityGraph, start: usize) -> usize {
    let mut seen = vec![false; g.n()];
    let mut stack = vec![start as u32];
    seen[start] = true;
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for &e in g.incident(v as usize) {
            let w = g.other(e as usize, v);
            if !seen[w as usize] {
                seen[w as usize] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    count
}

/// Edge ids in walk order along a path or cycle, or `None` for other shapes.
///
/// Paths start at their lowest-id end; cycles start at their lowest-id vertex
/// and leave through its lower incident edge id.
pub fn walk_order(g: &DataAffinityGraph) -> Option<Vec<usize>> {
    let shape = preset_shape(g)?;
    let start = match shape {
        PresetShape::Path => (0..g.n()).find(|&v| g.degree(v) == 1)?,
        PresetShape::Cycle => (0..g.n()).find(|&v| g.degree(v) > 0)?,
    };
    let mut order = Vec::with_capacity(g.m());
    let mut used = vec![false; g.m()];
    let mut cur = start as u32;
    while order.len() < g.m() {
        let e = *g
            .incident(cur as usize)
            .iter()
            .find(|&&e| !used[e as usize])?;
        used[e as usize] = true;
        order.push(e as usize);
        cur = g.other(e as usize, cur);
    }
    Some(order)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO_TRIANGLES: &str = "0 1\n1 2\n3 4\n0 2\n4 5\n3 5";

    #[test]
    fn path_of_two_edges() {
        let g = from_edge_list("0 1\n1 2").unwrap();
        assert_eq!((g.n(), g.m()), (3, 2));
        assert_eq!(g.degrees(), vec![1, 2, 1]);
    }

    #[test]
    fn self_loop_counts_twice() {
        let g = from_edge_list("0 0").unwrap();
        assert_eq!((g.n(), g.m()), (1, 1));
        assert_eq!(g.degree(0), 2);
        assert_eq!(g.incident(0), &[0, 0]);
    }

    #[test]
    fn two_triangles_all_degree_two() {
        let g = from_edge_list(TWO_TRIANGLES).unwrap();
        assert_eq!((g.n(), g.m()), (6, 6));
        assert!(g.degrees().iter().all(|&d| d == 2));
    }

    #[test]
    fn header_comments_and_isolated_vertices() {
        let g = from_edge_list("# demo\nn 5\n0 1\n# mid\n1 2\n").unwrap();
        assert_eq!(g.n(), 5);
        assert_eq!(g.non_isolated(), 3);
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let err = from_edge_list("0 1\n1 x\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err:?}");
        let err = from_edge_list("0 1 2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = from_edge_list("n 3\n0 1\n2 3\n").unwrap_err();
        assert_eq!(
            err,
            Error::VertexOutOfRange {
                line: 3,
                id: 3,
                n: 3
            }
        );
    }

    #[test]
    fn parallel_edges_are_kept() {
        let g = from_edge_list("0 1\n0 1\n1 0").unwrap();
        assert_eq!(g.m(), 3);
        assert_eq!(g.incident(1), &[0, 1, 2]);
    }

    #[test]
    fn matrix_market_identity_and_dense() {
        let id = "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n2 2 1.0\n";
        let g = from_matrix_market(id, MatrixMode::SpmvBipartite).unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.edges(), &[(0, 2), (1, 3)]);

        let dense =
            "%%MatrixMarket matrix coordinate pattern general\n% c\n2 2 4\n1 1\n1 2\n2 1\n2 2\n";
        let g = from_matrix_market(dense, MatrixMode::SpmvBipartite).unwrap();
        assert_eq!((g.n(), g.m()), (4, 4));
        assert!(g.degrees().iter().all(|&d| d == 2));
        assert!(g.edges().iter().all(|&(x, y)| x < 2 && y >= 2));
    }

    #[test]
    fn matrix_market_symmetric_expansion() {
        let text =
            "%%MatrixMarket matrix coordinate integer symmetric\n3 3 3\n1 1 4\n2 1 1\n3 2 1\n";
        let spmv = from_matrix_market(text, MatrixMode::SpmvBipartite).unwrap();
        assert_eq!(spmv.edges(), &[(0, 3), (0, 4), (1, 3), (1, 5), (2, 4)]);
        let adj = from_matrix_market(text, MatrixMode::SymmetricAdjacency).unwrap();
        assert_eq!(adj.edges(), &[(1, 0), (2, 1)]);
    }

    #[test]
    fn matrix_market_general_mirrored_pairs_collapse() {
        let text = "%%MatrixMarket matrix coordinate real general\n3 3 5\n1 2 1\n2 1 1\n2 3 1\n3 3 1\n1 3 1\n";
        let g = from_matrix_market(text, MatrixMode::SymmetricAdjacency).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2), (0, 2)]);
    }

    #[test]
    fn matrix_market_errors() {
        let bad_header = "%%MatrixMarket matrix array real general\n2 2\n";
        assert!(from_matrix_market(bad_header, MatrixMode::SpmvBipartite).is_err());
        let oob = "%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1.0\n";
        assert!(matches!(
            from_matrix_market(oob, MatrixMode::SpmvBipartite),
            Err(Error::Parse { line: 3, .. })
        ));
        let zero = "%%MatrixMarket matrix coordinate real general\n2 2 1\n0 1 1.0\n";
        assert!(from_matrix_market(zero, MatrixMode::SpmvBipartite).is_err());
        let rect = "%%MatrixMarket matrix coordinate real general\n2 3 1\n1 3 1.0\n";
        assert!(from_matrix_market(rect, MatrixMode::SpmvBipartite).is_ok());
        assert!(matches!(
            from_matrix_market(rect, MatrixMode::SymmetricAdjacency),
            Err(Error::Mismatch(_))
        ));
        let short = "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n";
        assert!(from_matrix_market(short, MatrixMode::SpmvBipartite).is_err());
    }

    #[test]
    fn histogram_cases() {
        let empty = DataAffinityGraph::new(0, vec![]).unwrap();
        assert!(degree_distribution(&empty).bins.is_empty());

        let m = 7;
        let path =
            DataAffinityGraph::new(m + 1, (0..m as u32).map(|i| (i, i + 1)).collect()).unwrap();
        let h = degree_distribution(&path);
        assert_eq!(
            h.bins
                .iter()
                .map(|b| (b.degree, b.count))
                .collect::<Vec<_>>(),
            vec![(1, 2), (2, m - 1)]
        );

        let h = degree_distribution(&from_edge_list(TWO_TRIANGLES).unwrap());
        assert_eq!(
            h.bins,
            vec![DegreeBin {
                degree: 2,
                count: 6,
                percent: 100.0
            }]
        );
    }

    #[test]
    fn precheck_routes() {
        let single = from_edge_list("0 1").unwrap();
        assert_eq!(
            should_partition(&single, DEFAULT_REUSE_THRESHOLD),
            Precheck::Skip
        );

        let path = DataAffinityGraph::new(13, (0..12u32).map(|i| (i, i + 1)).collect()).unwrap();
        assert_eq!(
            should_partition(&path, 2.0),
            Precheck::Preset(PresetShape::Path)
        );

        let cycle =
            DataAffinityGraph::new(12, (0..12u32).map(|i| (i, (i + 1) % 12)).collect()).unwrap();
        assert_eq!(
            should_partition(&cycle, 2.0),
            Precheck::Preset(PresetShape::Cycle)
        );

        let tt = from_edge_list(TWO_TRIANGLES).unwrap();
        assert_eq!(should_partition(&tt, 2.0), Precheck::Partition);
        assert_eq!(should_partition(&tt, 2.5), Precheck::Skip);

        let matching = from_edge_list("0 1\n2 3\n4 5").unwrap();
        assert_eq!(should_partition(&matching, 0.5), Precheck::Skip);
    }

    #[test]
    fn walk_order_follows_the_path() {
        let g = from_edge_list("2 3\n0 1\n1 2\n3 4").unwrap();
        assert_eq!(walk_order(&g), Some(vec![1, 2, 0, 3]));
        let cyc = from_edge_list("0 1\n2 0\n1 2").unwrap();
        assert_eq!(walk_order(&cyc), Some(vec![0, 2, 1]));
        assert_eq!(walk_order(&from_edge_list(TWO_TRIANGLES).unwrap()), None);
    }
}
