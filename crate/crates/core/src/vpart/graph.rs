/// Undirected graph with integer vertex and edge weights in CSR form.
///
/// Self-loops are dropped and parallel edges merged on construction, so every
/// neighbor appears once per adjacency list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedGraph {
    vwgt: Vec<i64>,
    xadj: Vec<usize>,
    adjncy: Vec<u32>,
    adjwgt: Vec<i64>,
}

impl WeightedGraph {
    pub fn from_edges<I>(vwgt: Vec<i64>, edges: I) -> Self
    where
        I: IntoIterator<Item = (u32, u32, i64)>,
    {
        let n = vwgt.len();
        let edges: Vec<(u32, u32, i64)> = edges.into_iter().filter(|&(a, b, _)| a != b).collect();
        let mut deg = vec![0usize; n + 1];
        for &(a, b, _) in &edges {
            deg[a as usize + 1] += 1;
            deg[b as usize + 1] += 1;
        }
        for v in 0..n {
            deg[v + 1] += deg[v];
        }
        let mut fill = deg.clone();
        let mut raw = vec![(0u32, 0i64); deg[n]];
        for &(a, b, w) in &edges {
            raw[fill[a as usize]] = (b, w);
            fill[a as usize] += 1;
            raw[fill[b as usize]] = (a, w);
            fill[b as usize] += 1;
        }

        let mut xadj = Vec::with_capacity(n + 1);
        let mut adjncy = Vec::with_capacity(raw.len());
        let mut adjwgt = Vec::with_capacity(raw.len());
        xadj.push(0);
        for v in 0..n {
            let row = &mut raw[deg[v]..deg[v + 1]];
            row.sort_unstable_by_key(|&(u, _)| u);
            for &(u, w) in row.iter() {
                if adjncy.len() > xadj[v] && *adjncy.last().unwrap() == u {
                    *adjwgt.last_mut().unwrap() += w;
                } else {
                    adjncy.push(u);
                    adjwgt.push(w);
                }
            }
            xadj.push(adjncy.len());
        }
        Self {
            vwgt,
            xadj,
            adjncy,
            adjwgt,
        }
    }

    pub(crate) fn from_csr(
        vwgt: Vec<i64>,
        xadj: Vec<usize>,
        adjncy: Vec<u32>,
        adjwgt: Vec<i64>,
    ) -> Self {
        Self {
            vwgt,
            xadj,
            adjncy,
            adjwgt,
        }
    }

    pub fn n(&self) -> usize {
        self.vwgt.len()
    }

    /// Number of undirected edges.
    pub fn edge_count(&self) -> usize {
        self.adjncy.len() / 2
    }

    pub fn vertex_weight(&self, v: usize) -> i64 {
        self.vwgt[v]
    }

    pub fn vertex_weights(&self) -> &[i64] {
        &self.vwgt
    }

    pub fn total_vertex_weight(&self) -> i64 {
        self.vwgt.iter().sum()
    }

    pub fn max_vertex_weight(&self) -> i64 {
        self.vwgt.iter().copied().max().unwrap_or(0)
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = (u32, i64)> + '_ {
        let r = self.xadj[v]..self.xadj[v + 1];
        self.adjncy[r.clone()]
            .iter()
            .copied()
            .zip(self.adjwgt[r].iter().copied())
    }

    pub fn degree(&self, v: usize) -> usize {
        self.xadj[v + 1] - self.xadj[v]
    }

    /// Each undirected edge once, as `(u, v, w)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32, i64)> + '_ {
        (0..self.n()).flat_map(move |u| {
            self.neighbors(u)
                .filter(move |&(v, _)| (u as u32) < v)
                .map(move |(v, w)| (u as u32, v, w))
        })
    }

    pub fn total_edge_weight(&self) -> i64 {
        self.adjwgt.iter().sum::<i64>() / 2
    }

    /// Sum of weights of edges whose endpoints lie in different clusters.
    pub fn cut(&self, part: &[u32]) -> i64 {
        self.edges()
            .filter(|&(u, v, _)| part[u as usize] != part[v as usize])
            .map(|(_, _, w)| w)
            .sum()
    }

    /// Vertex weight per cluster.
    pub fn cluster_weights(&self, part: &[u32], k: usize) -> Vec<i64> {
        let mut w = vec![0i64; k];
        for (v, &p) in part.iter().enumerate() {
            w[p as usize] += self.vwgt[v];
        }
        w
    }
}
