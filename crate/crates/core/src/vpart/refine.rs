//! Greedy k-way boundary refinement and balance repair.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};

use super::buckets::GainBuckets;
use super::WeightedGraph;

const MAX_PASSES: usize = 8;

/// Per-cluster connectivity of one vertex, reset after each query.
pub(crate) struct Scratch {
    conn: Vec<i64>,
    touched: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Move {
    pub dest: u32,
    pub gain: i64,
}

impl Scratch {
    pub fn new(k: usize) -> Self {
        Self {
            conn: vec![0; k],
            touched: Vec::new(),
        }
    }

    fn load(&mut self, g: &WeightedGraph, part: &[u32], v: usize) {
        for (u, w) in g.neighbors(v) {
            let c = part[u as usize];
            if self.conn[c as usize] == 0 {
                self.touched.push(c);
            }
            self.conn[c as usize] += w;
        }
    }

    fn reset(&mut self) {
        for &c in &self.touched {
            self.conn[c as usize] = 0;
        }
        self.touched.clear();
    }

    /// Best feasible move of `v` into an adjacent cluster: highest gain, then
    /// lightest destination, then lowest cluster id.
    pub fn best_move(
        &mut self,
        g: &WeightedGraph,
        part: &[u32],
        wts: &[i64],
        cap: i64,
        v: usize,
    ) -> Option<Move> {
        self.load(g, part, v);
        let own = part[v];
        let w = g.vertex_weight(v);
        let internal = self.conn[own as usize];
        let mut best: Option<(i64, Reverse<i64>, Reverse<u32>)> = None;
        for &c in &self.touched {
            if c == own || wts[c as usize] + w > cap {
                continue;
            }
            let key = (
                self.conn[c as usize] - internal,
                Reverse(wts[c as usize]),
                Reverse(c),
            );
            if best.is_none_or(|b| key > b) {
                best = Some(key);
            }
        }
        self.reset();
        best.map(|(gain, _, Reverse(dest))| Move { dest, gain })
    }

    /// Connectivity of `v` to its own cluster.
    fn internal(&mut self, g: &WeightedGraph, part: &[u32], v: usize) -> i64 {
        let own = part[v];
        g.neighbors(v)
            .filter(|&(u, _)| part[u as usize] == own)
            .map(|(_, w)| w)
            .sum()
    }
}

fn acceptable(mv: Move, w: i64, own_weight: i64, wts: &[i64]) -> bool {
    mv.gain > 0 || (mv.gain == 0 && wts[mv.dest as usize] + w < own_weight)
}

/// Boundary refinement. Each pass queues boundary vertices by the gain of
/// their best feasible move and applies non-negative moves, best first,
/// locking each moved vertex for the rest of the pass. Zero-gain moves are
/// taken only when they even out the two clusters involved. Passes repeat
/// until one yields no cut reduction. Returns the total cut reduction.
pub fn refine(g: &WeightedGraph, part: &mut [u32], k: usize, cap: i64) -> i64 {
    let n = g.n();
    if k <= 1 || n == 0 {
        return 0;
    }
    let mut wts = g.cluster_weights(part, k);
    let mut scratch = Scratch::new(k);
    let mut buckets = GainBuckets::new(n);
    let mut locked = vec![false; n];
    let mut total = 0i64;

    for _ in 0..MAX_PASSES {
        locked.iter_mut().for_each(|l| *l = false);
        buckets.clear();
        for v in 0..n {
            if let Some(mv) = scratch.best_move(g, part, &wts, cap, v) {
                if acceptable(mv, g.vertex_weight(v), wts[part[v] as usize], &wts) {
                    buckets.set(v as u32, mv.gain);
                }
            }
        }

        let mut pass_gain = 0i64;
        while let Some((v, key)) = buckets.pop_max() {
            let vi = v as usize;
            let w = g.vertex_weight(vi);
            let Some(mv) = scratch.best_move(g, part, &wts, cap, vi) else {
                continue;
            };
            if !acceptable(mv, w, wts[part[vi] as usize], &wts) {
                continue;
            }
            if mv.gain != key {
                buckets.set(v, mv.gain);
                continue;
            }
            wts[part[vi] as usize] -= w;
            wts[mv.dest as usize] += w;
            part[vi] = mv.dest;
            locked[vi] = true;
            pass_gain += mv.gain;

            for (u, _) in g.neighbors(vi) {
                let ui = u as usize;
                if locked[ui] {
                    continue;
                }
                match scratch.best_move(g, part, &wts, cap, ui) {
                    Some(m) if acceptable(m, g.vertex_weight(ui), wts[part[ui] as usize], &wts) => {
                        buckets.set(u, m.gain)
                    }
                    _ => buckets.remove(u),
                }
            }
        }
        total += pass_gain;
        if pass_gain == 0 {
            break;
        }
    }
    total
}

/// Move vertices out of clusters heavier than `cap`, cheapest cut increase
/// first. Destinations are adjacent clusters with room, or the lightest
/// cluster when no neighbor has room. Returns whether every cluster now fits.
pub fn enforce_balance(g: &WeightedGraph, part: &mut [u32], k: usize, cap: i64) -> bool {
    let mut wts = g.cluster_weights(part, k);
    if wts.iter().all(|&w| w <= cap) {
        return true;
    }
    let mut by_weight: BTreeSet<(i64, u32)> = wts
        .iter()
        .enumerate()
        .map(|(c, &w)| (w, c as u32))
        .collect();
    let mut scratch = Scratch::new(k);

    let candidate = |scratch: &mut Scratch,
                     part: &[u32],
                     wts: &[i64],
                     by_weight: &BTreeSet<(i64, u32)>,
                     v: usize| {
        if let Some(mv) = scratch.best_move(g, part, wts, cap, v) {
            return Some(mv);
        }
        let &(lw, lc) = by_weight.first()?;
        if lc == part[v] || lw + g.vertex_weight(v) > cap {
            return None;
        }
        Some(Move {
            dest: lc,
            gain: -scratch.internal(g, part, v),
        })
    };

    let mut heap: BinaryHeap<(i64, Reverse<u32>, u32)> = BinaryHeap::new();
    for v in 0..g.n() {
        if wts[part[v] as usize] > cap {
            if let Some(mv) = candidate(&mut scratch, part, &wts, &by_weight, v) {
                heap.push((mv.gain, Reverse(v as u32), mv.dest));
            }
        }
    }
    while let Some((gain, Reverse(v), dest)) = heap.pop() {
        let vi = v as usize;
        let own = part[vi] as usize;
        if wts[own] <= cap {
            continue;
        }
        let Some(mv) = candidate(&mut scratch, part, &wts, &by_weight, vi) else {
            continue;
        };
        if mv.gain != gain || mv.dest != dest {
            heap.push((mv.gain, Reverse(v), mv.dest));
            continue;
        }
        let w = g.vertex_weight(vi);
        let d = dest as usize;
        by_weight.remove(&(wts[own], own as u32));
        by_weight.remove(&(wts[d], dest));
        wts[own] -= w;
        wts[d] += w;
        by_weight.insert((wts[own], own as u32));
        by_weight.insert((wts[d], dest));
        part[vi] = dest;
        for (u, _) in g.neighbors(vi) {
            let ui = u as usize;
            if wts[part[ui] as usize] > cap {
                if let Some(m) = candidate(&mut scratch, part, &wts, &by_weight, ui) {
                    heap.push((m.gain, Reverse(u), m.dest));
                }
            }
        }
    }
    wts.iter().all(|&w| w <= cap)
}
