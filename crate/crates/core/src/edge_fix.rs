//! Repair a clone partition so that no original edge is cut while keeping
//! cluster sizes unchanged.
//!
//! Three phases:
//!
//! 1. For every cluster pair `(A, B)`, `A < B`, take the real edges crossing
//!    between them in ascending id order. The first half is pulled entirely
//!    into `A`, the second half entirely into `B`. With an odd count the edge
//!    with the largest id is left crossing.
//! 2. Treat clusters as super-nodes joined by the leftover crossing edges.
//!    When every cluster size is even, every super-node degree is even.
//! 3. Walk Euler tours of the super-node graph and pull each leftover edge
//!    into the cluster at its tail. Every super-node is left as often as it is
//!    entered, so sizes stay unchanged.
//!
//! With an odd cluster size the super-node graph has odd-degree vertices.
//! Open trails between them are oriented greedily toward the lighter end and
//! the result is flagged.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use serde::Serialize;

use crate::error::Result;
use crate::transform::TransformedGraph;
use crate::vpart::{VertexPartition, WeightedGraph};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FixOutcome {
    pub partition: VertexPartition,
    /// Every input cluster size was even, so the Euler phase preserved sizes.
    pub parity_ok: bool,
    /// Cluster sizes differ from the input sizes.
    pub residual_imbalance: bool,
    /// Real edges that crossed clusters on input.
    pub crossing_in: usize,
}

/// Pull one original edge entirely into cluster `into`.
fn pull_into(assignment: &mut [u32], edge: usize, into: u32) {
    assignment[2 * edge] = into;
    assignment[2 * edge + 1] = into;
}

/// Orient the edges of a multigraph on `k` nodes whose degrees are all even
/// so that every node has equal in- and out-degree. Hierholzer's algorithm;
/// each edge is oriented in the direction it is traversed.
pub fn euler_orientation(k: usize, edges: &[(u32, u32)]) -> Vec<(u32, u32)> {
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (i, &(a, b)) in edges.iter().enumerate() {
        adj[a as usize].push(i);
        adj[b as usize].push(i);
    }
    let mut next = vec![0usize; k];
    let mut used = vec![false; edges.len()];
    let mut oriented = edges.to_vec();

    for start in 0..k {
        let mut stack = vec![start as u32];
        while let Some(&cur) = stack.last() {
            let c = cur as usize;
            while next[c] < adj[c].len() && used[adj[c][next[c]]] {
                next[c] += 1;
            }
            if next[c] == adj[c].len() {
                stack.pop();
                continue;
            }
            let e = adj[c][next[c]];
            used[e] = true;
            let (a, b) = edges[e];
            let other = if a == cur { b } else { a };
            oriented[e] = (cur, other);
            stack.push(other);
        }
    }
    oriented
}

/// Orientation for graphs that may contain odd-degree nodes: open trails
/// between odd nodes first, each pointed so its tail is the currently lighter
/// cluster, then Euler tours over what remains.
fn trail_orientation(k: usize, edges: &[(u32, u32)], sizes: &mut [i64]) -> Vec<(u32, u32)> {
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (i, &(a, b)) in edges.iter().enumerate() {
        adj[a as usize].push(i);
        adj[b as usize].push(i);
    }
    let mut used = vec![false; edges.len()];
    let mut remaining: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut oriented = edges.to_vec();

    for s in 0..k {
        while remaining[s] % 2 == 1 {
            let mut cur = s as u32;
            let mut trail = Vec::new();
            while let Some(&e) = adj[cur as usize].iter().find(|&&e| !used[e]) {
                used[e] = true;
                let (a, b) = edges[e];
                let other = if a == cur { b } else { a };
                remaining[a as usize] -= 1;
                remaining[b as usize] -= 1;
                trail.push((e, cur, other));
                cur = other;
            }
            // tail gains a clone, head loses one
            let reverse = sizes[cur as usize] < sizes[s];
            for &(e, from, to) in &trail {
                oriented[e] = if reverse { (to, from) } else { (from, to) };
            }
            let (tail, head) = if reverse {
                (cur, s as u32)
            } else {
                (s as u32, cur)
            };
            if tail != head {
                sizes[tail as usize] += 1;
                sizes[head as usize] -= 1;
            }
        }
    }

    let rest: Vec<usize> = (0..edges.len()).filter(|&e| !used[e]).collect();
    let sub: Vec<(u32, u32)> = rest.iter().map(|&e| edges[e]).collect();
    for (i, o) in euler_orientation(k, &sub).into_iter().enumerate() {
        oriented[rest[i]] = o;
    }
    oriented
}

/// Uncut every original edge of `vp`. The input is not modified.
pub fn fix_cut_real_edges(tg: &TransformedGraph, vp: &VertexPartition) -> Result<FixOutcome> {
    let k = vp.k;
    let mut assignment = vp.assignment.clone();
    let sizes_in = vp.sizes();
    let parity_ok = sizes_in.iter().all(|s| s % 2 == 0);

    let crossing = tg.cut_original_edges(&assignment);
    let crossing_in = crossing.len();
    if crossing.is_empty() {
        return Ok(FixOutcome {
            partition: vp.clone(),
            parity_ok,
            residual_imbalance: false,
            crossing_in,
        });
    }

    let mut by_pair: BTreeMap<(u32, u32), Vec<usize>> = BTreeMap::new();
    for &e in &crossing {
        let (x, y) = (assignment[2 * e], assignment[2 * e + 1]);
        by_pair.entry((x.min(y), x.max(y))).or_default().push(e);
    }

    let mut leftover: Vec<(u32, u32)> = Vec::new();
    let mut leftover_edge: Vec<usize> = Vec::new();
    for (&(a, b), list) in &by_pair {
        let half = list.len() / 2;
        for &e in &list[..half] {
            pull_into(&mut assignment, e, a);
        }
        for &e in &list[half..2 * half] {
            pull_into(&mut assignment, e, b);
        }
        if list.len() % 2 == 1 {
            leftover.push((a, b));
            leftover_edge.push(*list.last().unwrap());
        }
    }

    let mut degree = vec![0usize; k];
    for &(a, b) in &leftover {
        degree[a as usize] += 1;
        degree[b as usize] += 1;
    }
    let even = degree.iter().all(|d| d % 2 == 0);
    debug_assert!(
        !parity_ok || even,
        "even cluster sizes must give even super-node degrees"
    );

    let oriented = if even {
        euler_orientation(k, &leftover)
    } else {
        let mut sizes: Vec<i64> = sizes_in.iter().map(|&s| s as i64).collect();
        trail_orientation(k, &leftover, &mut sizes)
    };
    for (i, &(tail, _)) in oriented.iter().enumerate() {
        pull_into(&mut assignment, leftover_edge[i], tail);
    }

    let partition = VertexPartition {
        assignment,
        k,
        epsilon: vp.epsilon,
    };
    let residual_imbalance = partition.sizes() != sizes_in;
    Ok(FixOutcome {
        partition,
        parity_ok: parity_ok && even,
        residual_imbalance,
        crossing_in,
    })
}

/// Ranks a single-clone move: partner already in the destination, then
/// connectivity gained, then lower clone id.
type MoveKey = (bool, i64, Reverse<u32>);

/// Per-cluster clone targets for exact task balance: `2 * ceil(m / k)` for the
/// `m mod k` currently largest clusters (lowest id on ties), `2 * floor(m / k)`
/// for the rest. Every target is even.
pub fn exact_targets(sizes: &[usize], m: usize) -> Vec<usize> {
    let k = sizes.len();
    let (q, r) = (m / k, m % k);
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by_key(|&c| (Reverse(sizes[c]), c));
    let mut targets = vec![2 * q; k];
    for &c in &order[..r] {
        targets[c] = 2 * (q + 1);
    }
    targets
}

/// Aux-edge connectivity of a whole task (both clones) to each cluster,
/// ignoring edges between the two clones themselves.
fn task_links(aux: &WeightedGraph, assignment: &[u32], task: usize, out: &mut Vec<(u32, i64)>) {
    out.clear();
    for x in [2 * task, 2 * task + 1] {
        for (y, w) in aux.neighbors(x) {
            if y as usize / 2 == task {
                continue;
            }
            let c = assignment[y as usize];
            match out.iter_mut().find(|(cc, _)| *cc == c) {
                Some(slot) => slot.1 += w,
                None => out.push((c, w)),
            }
        }
    }
}

/// Move clones until every cluster holds exactly its [`exact_targets`] size.
///
/// Clones whose real edge already crosses into an under-full cluster move
/// there first. Whole tasks move next, from clusters at least two over target to
/// clusters at least two under, cheapest auxiliary-cut increase first. The
/// remaining single-unit differences are settled by moving single clones,
/// preferring clones whose partner already sits in the destination. Real
/// edges cut by single moves are left for [`fix_cut_real_edges`].
pub fn rebalance_exact(tg: &TransformedGraph, vp: &VertexPartition) -> VertexPartition {
    let k = vp.k;
    let mut a = vp.assignment.clone();
    let sizes = vp.sizes();
    let targets = exact_targets(&sizes, tg.m());
    let mut excess: Vec<i64> = sizes
        .iter()
        .zip(&targets)
        .map(|(&s, &t)| s as i64 - t as i64)
        .collect();
    if excess.iter().all(|&e| e == 0) {
        return vp.clone();
    }
    let aux = WeightedGraph::from_edges(
        vec![1; tg.clone_count()],
        tg.aux_edges().iter().map(|&(x, y)| (x, y, 1)),
    );
    let mut links = Vec::new();

    // clones whose real edge already crosses into a cluster that is short
    for x in 0..a.len() {
        let (src, dst) = (a[x] as usize, a[x ^ 1] as usize);
        if src != dst && excess[src] > 0 && excess[dst] < 0 {
            a[x] = dst as u32;
            excess[src] -= 1;
            excess[dst] += 1;
        }
    }

    // whole-task moves
    let best_task_move =
        |a: &[u32], excess: &[i64], links: &mut Vec<(u32, i64)>, t: usize| -> Option<(i64, u32)> {
            let own = a[2 * t];
            if a[2 * t + 1] != own || excess[own as usize] < 2 {
                return None;
            }
            task_links(&aux, a, t, links);
            let internal = links.iter().find(|(c, _)| *c == own).map_or(0, |l| l.1);
            let adjacent = links
                .iter()
                .filter(|(c, _)| excess[*c as usize] <= -2)
                .map(|&(c, w)| (w - internal, Reverse(c)))
                .max();
            let fallback = || {
                (0..k as u32)
                    .filter(|&c| excess[c as usize] <= -2)
                    .min_by_key(|&c| (excess[c as usize], c))
                    .map(|c| (-internal, Reverse(c)))
            };
            adjacent.or_else(fallback).map(|(g, Reverse(c))| (g, c))
        };
    let mut heap: BinaryHeap<(i64, Reverse<u32>, u32)> = BinaryHeap::new();
    for t in 0..tg.m() {
        if let Some((g, c)) = best_task_move(&a, &excess, &mut links, t) {
            heap.push((g, Reverse(t as u32), c));
        }
    }
    while let Some((g, Reverse(t), dest)) = heap.pop() {
        let t = t as usize;
        let Some((g2, dest2)) = best_task_move(&a, &excess, &mut links, t) else {
            continue;
        };
        if (g2, dest2) != (g, dest) {
            heap.push((g2, Reverse(t as u32), dest2));
            continue;
        }
        let own = a[2 * t] as usize;
        excess[own] -= 2;
        excess[dest as usize] += 2;
        a[2 * t] = dest;
        a[2 * t + 1] = dest;
        task_links(&aux, &a, t, &mut links);
        let neighbors: Vec<usize> = [2 * t, 2 * t + 1]
            .iter()
            .flat_map(|&x| {
                aux.neighbors(x)
                    .map(|(y, _)| y as usize / 2)
                    .collect::<Vec<_>>()
            })
            .collect();
        for nt in neighbors {
            if let Some((g, c)) = best_task_move(&a, &excess, &mut links, nt) {
                heap.push((g, Reverse(nt as u32), c));
            }
        }
    }

    // single-clone moves
    let mut members: Vec<Vec<u32>> = vec![Vec::new(); k];
    for (x, &c) in a.iter().enumerate() {
        if excess[c as usize] > 0 {
            members[c as usize].push(x as u32);
        }
    }
    for src in 0..k {
        while excess[src] > 0 {
            let mut best: Option<(MoveKey, u32)> = None;
            for &x in &members[src] {
                if a[x as usize] != src as u32 {
                    continue;
                }
                let partner_cluster = a[(x ^ 1) as usize];
                let conn = |c: u32| {
                    aux.neighbors(x as usize)
                        .filter(|&(y, _)| a[y as usize] == c)
                        .map(|(_, w)| w)
                        .sum::<i64>()
                };
                let internal = conn(src as u32);
                let dest = if excess[partner_cluster as usize] < 0 {
                    partner_cluster
                } else {
                    match (0..k as u32)
                        .filter(|&c| excess[c as usize] < 0)
                        .max_by_key(|&c| (conn(c), Reverse(c)))
                    {
                        Some(c) => c,
                        None => break,
                    }
                };
                let key = (dest == partner_cluster, conn(dest) - internal, Reverse(x));
                if best.as_ref().is_none_or(|(b, _)| key > *b) {
                    best = Some((key, dest));
                }
            }
            let Some(((_, _, Reverse(x)), dest)) = best else {
                break;
            };
            a[x as usize] = dest;
            excess[src] -= 1;
            excess[dest as usize] += 1;
        }
    }
    VertexPartition {
        assignment: a,
        k,
        epsilon: vp.epsilon,
    }
}
