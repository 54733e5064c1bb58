//! Clone-and-connect: turn balanced edge partitioning into weighted vertex
//! partitioning.
//!
//! Every endpoint slot of every task becomes its own clone, so edge `i` owns
//! clones `2i` (its first endpoint) and `2i + 1` (its second). The clones of a
//! vertex are chained by unit-weight auxiliary edges in ascending incident
//! edge order. Original edges carry a weight larger than the sum of all
//! auxiliary weights, so a min-cut partitioner cuts any number of auxiliary
//! edges before it cuts one original edge.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::DataAffinityGraph;
use crate::vpart::WeightedGraph;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformedGraph {
    /// Per clone: (original vertex, position in that vertex's chain).
    clone_origin: Vec<(u32, u32)>,
    aux_edges: Vec<(u32, u32)>,
    original_weight: i64,
}

impl TransformedGraph {
    pub fn clone_count(&self) -> usize {
        self.clone_origin.len()
    }

    /// Number of original edges (tasks).
    pub fn m(&self) -> usize {
        self.clone_origin.len() / 2
    }

    pub fn clone_origin(&self) -> &[(u32, u32)] {
        &self.clone_origin
    }

    /// Clone endpoints of the original edge for task `i`.
    pub fn original_edge(&self, i: usize) -> (u32, u32) {
        (2 * i as u32, 2 * i as u32 + 1)
    }

    pub fn original_edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.m()).map(|i| self.original_edge(i))
    }

    pub fn aux_edges(&self) -> &[(u32, u32)] {
        &self.aux_edges
    }

    /// Weight carried by every original edge.
    pub fn original_weight(&self) -> i64 {
        self.original_weight
    }

    /// Task owning clone `c`.
    pub fn task_of(c: u32) -> usize {
        (c / 2) as usize
    }

    /// The other clone on the same original edge.
    pub fn partner(c: u32) -> u32 {
        c ^ 1
    }

    /// CSR view with unit vertex weights. A self-loop's original edge and the
    /// auxiliary edge between its two clones collapse into one entry.
    pub fn to_weighted(&self) -> WeightedGraph {
        let w = self.original_weight;
        let list = self
            .original_edges()
            .map(|(a, b)| (a, b, w))
            .chain(self.aux_edges.iter().map(|&(a, b)| (a, b, 1)));
        WeightedGraph::from_edges(vec![1; self.clone_count()], list)
    }

    /// Total weight of edges whose endpoints lie in different clusters.
    pub fn cut_weight(&self, assignment: &[u32]) -> i64 {
        let real = self
            .original_edges()
            .filter(|&(a, b)| assignment[a as usize] != assignment[b as usize])
            .count();
        real as i64 * self.original_weight + self.aux_cut(assignment) as i64
    }

    /// Number of auxiliary edges crossing clusters.
    pub fn aux_cut(&self, assignment: &[u32]) -> usize {
        self.aux_edges
            .iter()
            .filter(|&&(a, b)| assignment[a as usize] != assignment[b as usize])
            .count()
    }

    /// Ids of original edges whose two clones sit in different clusters.
    pub fn cut_original_edges(&self, assignment: &[u32]) -> Vec<usize> {
        (0..self.m())
            .filter(|&i| assignment[2 * i] != assignment[2 * i + 1])
            .collect()
    }
}

pub fn clone_and_connect(g: &DataAffinityGraph) -> Result<TransformedGraph> {
    let m = g.m();
    if m == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut clone_origin = vec![(0u32, 0u32); 2 * m];
    let mut aux_edges = Vec::with_capacity(2 * m - g.non_isolated());
    for v in 0..g.n() {
        let mut prev: Option<u32> = None;
        let inc = g.incident(v);
        for (pos, &e) in inc.iter().enumerate() {
            let (a, _) = g.edge(e as usize);
            // a self-loop shows up twice in a row: first slot, then second
            let second_slot = a as usize != v || (pos > 0 && inc[pos - 1] == e);
            let clone = 2 * e + second_slot as u32;
            clone_origin[clone as usize] = (v as u32, pos as u32);
            if let Some(p) = prev {
                aux_edges.push((p, clone));
            }
            prev = Some(clone);
        }
    }
    let original_weight = aux_edges.len() as i64 + 1;
    Ok(TransformedGraph {
        clone_origin,
        aux_edges,
        original_weight,
    })
}

/// Deterministic text listing of clones and weighted edges.
///
/// ```text
/// clones <count> weight <W>
/// c <clone> <vertex> <index>
/// e <a> <b> <weight> original|aux
/// ```
pub fn dump_transformed(tg: &TransformedGraph) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "clones {} weight {}",
        tg.clone_count(),
        tg.original_weight
    );
    for (c, &(v, idx)) in tg.clone_origin.iter().enumerate() {
        let _ = writeln!(out, "c {c} {v} {idx}");
    }
    for (a, b) in tg.original_edges() {
        let _ = writeln!(out, "e {a} {b} {} original", tg.original_weight);
    }
    for &(a, b) in &tg.aux_edges {
        let _ = writeln!(out, "e {a} {b} 1 aux");
    }
    out
}

/// Inverse of [`dump_transformed`].
pub fn parse_transformed(text: &str) -> Result<TransformedGraph> {
    let mut clone_origin: Vec<(u32, u32)> = Vec::new();
    let mut aux_edges = Vec::new();
    let mut count: Option<usize> = None;
    let mut weight = 0i64;
    let mut originals = 0usize;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let f: Vec<&str> = raw.split_whitespace().collect();
        if f.is_empty() {
            continue;
        }
        let err = |msg: &str| Error::Parse {
            line: line_no,
            msg: msg.to_string(),
        };
        let num = |s: &str| s.parse::<u64>().map_err(|_| err("expected an integer"));
        match (f[0], f.len()) {
            ("clones", 4) if count.is_none() && f[2] == "weight" => {
                let c = num(f[1])? as usize;
                count = Some(c);
                weight = num(f[3])? as i64;
                clone_origin = vec![(u32::MAX, 0); c];
            }
            ("c", 4) if count.is_some() => {
                let c = num(f[1])? as usize;
                if c >= clone_origin.len() {
                    return Err(err("clone id out of range"));
                }
                clone_origin[c] = (num(f[2])? as u32, num(f[3])? as u32);
            }
            ("e", 5) if count.is_some() => {
                let (a, b, w) = (num(f[1])? as u32, num(f[2])? as u32, num(f[3])? as i64);
                let n = clone_origin.len() as u32;
                if a >= n || b >= n {
                    return Err(err("edge endpoint out of range"));
                }
                match f[4] {
                    "original" => {
                        if (a, b) != (2 * originals as u32, 2 * originals as u32 + 1) || w != weight
                        {
                            return Err(err("original edges must be listed in task order"));
                        }
                        originals += 1;
                    }
                    "aux" if w == 1 => aux_edges.push((a, b)),
                    _ => return Err(err("edge kind must be 'original' or unit-weight 'aux'")),
                }
            }
            _ => return Err(err("unrecognized record")),
        }
    }
    let count = count.ok_or(Error::Parse {
        line: 1,
        msg: "missing 'clones' header".into(),
    })?;
    if originals * 2 != count || clone_origin.iter().any(|&(v, _)| v == u32::MAX) {
        return Err(Error::Mismatch(
            "clone records and original edges disagree".into(),
        ));
    }
    Ok(TransformedGraph {
        clone_origin,
        aux_edges,
        original_weight: weight,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::from_edge_list;

    #[test]
    fn single_edge() {
        let tg = clone_and_connect(&from_edge_list("0 1").unwrap()).unwrap();
        assert_eq!(tg.clone_count(), 2);
        assert_eq!(tg.m(), 1);
        assert!(tg.aux_edges().is_empty());
        assert_eq!(tg.original_weight(), 1);
    }

    #[test]
    fn star_chains_center() {
        let tg = clone_and_connect(&from_edge_list("0 1\n0 2\n0 3").unwrap()).unwrap();
        assert_eq!(tg.clone_count(), 6);
        assert_eq!(tg.aux_edges(), &[(0, 2), (2, 4)]);
        assert_eq!(tg.original_weight(), 3);
        assert_eq!(tg.clone_origin()[4], (0, 2));
        assert_eq!(tg.clone_origin()[5], (3, 0));
    }

    #[test]
    fn two_triangles_counts() {
        let g = from_edge_list("0 1\n1 2\n3 4\n0 2\n4 5\n3 5").unwrap();
        let tg = clone_and_connect(&g).unwrap();
        assert_eq!(tg.clone_count(), 12);
        assert_eq!(tg.aux_edges().len(), 6);
        assert_eq!(tg.original_weight(), 7);
    }

    #[test]
    fn self_loop_uses_two_clones_of_the_vertex() {
        let tg = clone_and_connect(&from_edge_list("0 0\n0 1").unwrap()).unwrap();
        assert_eq!(&tg.clone_origin()[..3], &[(0, 0), (0, 1), (0, 2)]);
        assert_eq!(tg.aux_edges(), &[(0, 1), (1, 2)]);
        let wg = tg.to_weighted();
        assert_eq!(
            wg.neighbors(0).collect::<Vec<_>>(),
            vec![(1, tg.original_weight() + 1)]
        );
    }

    #[test]
    fn empty_graph_rejected() {
        let g = DataAffinityGraph::new(3, vec![]).unwrap();
        assert_eq!(clone_and_connect(&g), Err(Error::EmptyGraph));
    }

    #[test]
    fn dump_records() {
        let tg = clone_and_connect(&from_edge_list("0 1\n0 2\n0 3").unwrap()).unwrap();
        let text = dump_transformed(&tg);
        assert_eq!(text.lines().filter(|l| l.starts_with("c ")).count(), 6);
        assert_eq!(text.lines().filter(|l| l.ends_with("original")).count(), 3);
        assert_eq!(text.lines().filter(|l| l.ends_with("aux")).count(), 2);
        assert_eq!(parse_transformed(&text).unwrap(), tg);

        let single = dump_transformed(&clone_and_connect(&from_edge_list("0 1").unwrap()).unwrap());
        assert_eq!(
            single,
            "clones 2 weight 1\nc 0 0 0\nc 1 1 0\ne 0 1 1 original\n"
        );
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse_transformed("").is_err());
        assert!(parse_transformed("clones 2 weight 1\nc 0 0 0\n").is_err());
        assert!(parse_transformed("clones 2 weight 1\nc 0 0 0\nc 1 1 0\ne 0 1 1 bogus\n").is_err());
    }
}
