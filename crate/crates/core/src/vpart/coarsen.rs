//! Heavy-edge matching and graph contraction.

use std::cmp::Reverse;

use super::WeightedGraph;

pub(crate) const UNMATCHED: u32 = u32::MAX;

/// One contraction step: the coarse graph and the fine-to-coarse map.
#[derive(Debug, Clone)]
pub struct CoarseLevel {
    pub graph: WeightedGraph,
    pub map: Vec<u32>,
}

/// Maximal matching built by scanning edges heaviest first, ties broken by
/// lower endpoint id. Pairs whose combined weight would exceed
/// `max_vertex_weight` are not matched. Returns each vertex's mate.
pub fn heavy_edge_matching(g: &WeightedGraph, max_vertex_weight: i64) -> Vec<u32> {
    let mut order: Vec<(Reverse<i64>, u32, u32)> =
        g.edges().map(|(u, v, w)| (Reverse(w), u, v)).collect();
    order.sort_unstable();
    let mut mate = vec![UNMATCHED; g.n()];
    for (_, u, v) in order {
        let (ui, vi) = (u as usize, v as usize);
        if mate[ui] == UNMATCHED
            && mate[vi] == UNMATCHED
            && g.vertex_weight(ui) + g.vertex_weight(vi) <= max_vertex_weight
        {
            mate[ui] = v;
            mate[vi] = u;
        }
    }
    mate
}

/// Contract a heavy-edge matching with no vertex-weight limit.
pub fn coarsen(g: &WeightedGraph) -> CoarseLevel {
    coarsen_bounded(g, i64::MAX)
}

/// Contract a heavy-edge matching. Coarse ids follow the lowest fine id of
/// each matched pair.
pub fn coarsen_bounded(g: &WeightedGraph, max_vertex_weight: i64) -> CoarseLevel {
    let n = g.n();
    let mate = heavy_edge_matching(g, max_vertex_weight);
    let mut map = vec![UNMATCHED; n];
    let mut leaders = Vec::with_capacity(n);
    for v in 0..n {
        if map[v] != UNMATCHED {
            continue;
        }
        let c = leaders.len() as u32;
        map[v] = c;
        if mate[v] != UNMATCHED {
            map[mate[v] as usize] = c;
        }
        leaders.push(v as u32);
    }

    let nc = leaders.len();
    let mut vwgt = Vec::with_capacity(nc);
    let mut xadj = Vec::with_capacity(nc + 1);
    let mut adjncy = Vec::with_capacity(g.edge_count() * 2);
    let mut adjwgt = Vec::with_capacity(g.edge_count() * 2);
    let mut slot = vec![usize::MAX; nc];
    xadj.push(0);
    for (c, &leader) in leaders.iter().enumerate() {
        let start = adjncy.len();
        let mut w = 0;
        let members = [leader, mate[leader as usize]];
        for &v in members.iter().filter(|&&v| v != UNMATCHED) {
            w += g.vertex_weight(v as usize);
            for (u, ew) in g.neighbors(v as usize) {
                let cu = map[u as usize] as usize;
                if cu == c {
                    continue;
                }
                if slot[cu] == usize::MAX {
                    slot[cu] = adjncy.len();
                    adjncy.push(cu as u32);
                    adjwgt.push(ew);
                } else {
                    adjwgt[slot[cu]] += ew;
                }
            }
        }
        for &cu in &adjncy[start..] {
            slot[cu as usize] = usize::MAX;
        }
        vwgt.push(w);
        xadj.push(adjncy.len());
    }

    CoarseLevel {
        graph: WeightedGraph::from_csr(vwgt, xadj, adjncy, adjwgt),
        map,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_vertices_collapse() {
        let g = WeightedGraph::from_edges(vec![1, 1], vec![(0, 1, 1)]);
        let lvl = coarsen(&g);
        assert_eq!(lvl.graph.n(), 1);
        assert_eq!(lvl.graph.vertex_weight(0), 2);
        assert_eq!(lvl.map, vec![0, 0]);
    }

    #[test]
    fn heaviest_edge_wins() {
        let g = WeightedGraph::from_edges(vec![1, 1, 1], vec![(0, 1, 5), (1, 2, 1)]);
        let lvl = coarsen(&g);
        assert_eq!(lvl.map, vec![0, 0, 1]);
        assert_eq!(lvl.graph.vertex_weights(), &[2, 1]);
        assert_eq!(lvl.graph.neighbors(0).collect::<Vec<_>>(), vec![(1, 1)]);
    }

    #[test]
    fn ties_go_to_lower_ids() {
        let g = WeightedGraph::from_edges(vec![1; 4], vec![(2, 3, 1), (1, 2, 1), (0, 1, 1)]);
        let mate = heavy_edge_matching(&g, i64::MAX);
        assert_eq!(mate, vec![1, 0, 3, 2]);
    }

    #[test]
    fn weight_limit_blocks_merges() {
        let g = WeightedGraph::from_edges(vec![3, 3, 1], vec![(0, 1, 9), (1, 2, 1)]);
        let mate = heavy_edge_matching(&g, 4);
        assert_eq!(mate, vec![UNMATCHED, 2, 1]);
    }

    #[test]
    fn coarse_weights_are_conserved() {
        let edges: Vec<(u32, u32, i64)> = (0..20u32)
            .map(|i| (i, (i * 7 + 3) % 20, (i % 4 + 1) as i64))
            .collect();
        let g = WeightedGraph::from_edges(vec![1; 20], edges);
        let lvl = coarsen(&g);
        assert_eq!(lvl.graph.total_vertex_weight(), 20);
        let crossing: i64 = g
            .edges()
            .filter(|&(u, v, _)| lvl.map[u as usize] != lvl.map[v as usize])
            .map(|(_, _, w)| w)
            .sum();
        assert_eq!(lvl.graph.total_edge_weight(), crossing);
    }
}
