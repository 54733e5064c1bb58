//! Task-level local search on the vertex-cut cost.
//!
//! Moves a task to another cluster when that lowers the cost, then moves the
//! best task of the destination back to the source so sizes stay unchanged.
//! The pair is kept only when the combined change lowers the cost.

use crate::graph::DataAffinityGraph;
use crate::reconstruct::EdgePartition;
use crate::vpart::VertexPartition;

/// Per vertex, the clusters holding its tasks with task counts.
struct Presence {
    slots: Vec<Vec<(u32, u32)>>,
}

impl Presence {
    fn new(g: &DataAffinityGraph, cluster: &[u32]) -> Self {
        let mut p = Self {
            slots: vec![Vec::new(); g.n()],
        };
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            p.add(u, cluster[e]);
            p.add(v, cluster[e]);
        }
        p
    }

    fn count(&self, x: u32, c: u32) -> u32 {
        self.slots[x as usize]
            .iter()
            .find(|s| s.0 == c)
            .map_or(0, |s| s.1)
    }

    fn add(&mut self, x: u32, c: u32) {
        let slots = &mut self.slots[x as usize];
        match slots.iter_mut().find(|s| s.0 == c) {
            Some(s) => s.1 += 1,
            None => slots.push((c, 1)),
        }
    }

    fn remove(&mut self, x: u32, c: u32) {
        let slots = &mut self.slots[x as usize];
        let i = slots
            .iter()
            .position(|s| s.0 == c)
            .expect("vertex present in cluster");
        slots[i].1 -= 1;
        if slots[i].1 == 0 {
            slots.swap_remove(i);
        }
    }

    /// Cost decrease from moving a task with endpoints `(u, v)` from `a` to `b`.
    fn gain(&self, (u, v): (u32, u32), a: u32, b: u32) -> i64 {
        let mut gain = 0;
        let ends: &[(u32, u32)] = if u == v { &[(u, 2)] } else { &[(u, 1), (v, 1)] };
        for &(x, mult) in ends {
            gain += i64::from(self.count(x, a) == mult);
            gain -= i64::from(self.count(x, b) == 0);
        }
        gain
    }
}

/// Task ids per cluster with O(1) removal.
struct Members {
    tasks: Vec<Vec<u32>>,
    pos: Vec<usize>,
}

impl Members {
    fn new(cluster: &[u32], k: usize) -> Self {
        let mut tasks = vec![Vec::new(); k];
        let mut pos = vec![0; cluster.len()];
        for (e, &c) in cluster.iter().enumerate() {
            pos[e] = tasks[c as usize].len();
            tasks[c as usize].push(e as u32);
        }
        Self { tasks, pos }
    }

    fn relocate(&mut self, e: u32, from: u32, to: u32) {
        let list = &mut self.tasks[from as usize];
        let i = self.pos[e as usize];
        list.swap_remove(i);
        if let Some(&moved) = list.get(i) {
            self.pos[moved as usize] = i;
        }
        self.pos[e as usize] = self.tasks[to as usize].len();
        self.tasks[to as usize].push(e);
    }
}

struct State<'a> {
    g: &'a DataAffinityGraph,
    cluster: Vec<u32>,
    presence: Presence,
    members: Members,
}

impl State<'_> {
    fn relocate(&mut self, e: u32, to: u32) {
        let from = self.cluster[e as usize];
        let (u, v) = self.g.edge(e as usize);
        for x in [u, v] {
            self.presence.remove(x, from);
            self.presence.add(x, to);
        }
        self.members.relocate(e, from, to);
        self.cluster[e as usize] = to;
    }

    /// Try to move `e` into `b` paired with the best return move; returns the
    /// cost decrease when the pair is applied.
    fn try_swap(&mut self, e: u32, b: u32, first_gain: i64) -> Option<i64> {
        let a = self.cluster[e as usize];
        self.relocate(e, b);
        let best = self.members.tasks[b as usize]
            .iter()
            .filter(|&&f| f != e)
            .map(|&f| (self.presence.gain(self.g.edge(f as usize), b, a), f))
            .max_by_key(|&(gain, f)| (gain, std::cmp::Reverse(f)));
        match best {
            Some((second_gain, f)) if first_gain + second_gain > 0 => {
                self.relocate(f, a);
                Some(first_gain + second_gain)
            }
            _ => {
                self.relocate(e, a);
                None
            }
        }
    }
}

/// Size-preserving swap refinement of `ep`. Runs at most `max_passes` sweeps
/// over the tasks; each applied swap strictly lowers the vertex-cut cost.
pub fn swap_refine(g: &DataAffinityGraph, ep: &EdgePartition, max_passes: usize) -> EdgePartition {
    assert_eq!(ep.m(), g.m(), "partition and graph disagree on m");
    let mut s = State {
        g,
        presence: Presence::new(g, &ep.cluster),
        members: Members::new(&ep.cluster, ep.k),
        cluster: ep.cluster.clone(),
    };
    let mut targets = Vec::new();
    for _ in 0..max_passes {
        let mut improved = false;
        for e in 0..g.m() as u32 {
            let a = s.cluster[e as usize];
            let (u, v) = g.edge(e as usize);
            targets.clear();
            for x in [u, v] {
                targets.extend(
                    s.presence.slots[x as usize]
                        .iter()
                        .map(|t| t.0)
                        .filter(|&c| c != a),
                );
            }
            targets.sort_unstable();
            targets.dedup();
            let best = targets
                .iter()
                .map(|&b| (s.presence.gain((u, v), a, b), b))
                .filter(|&(gain, _)| gain > 0)
                .max_by_key(|&(gain, b)| (gain, std::cmp::Reverse(b)));
            if let Some((gain, b)) = best {
                improved |= s.try_swap(e, b, gain).is_some();
            }
        }
        if !improved {
            break;
        }
    }
    EdgePartition {
        cluster: s.cluster,
        k: ep.k,
    }
}

/// Clone partition that places both clones of every task in the task's
/// cluster.
pub fn clones_of(ep: &EdgePartition) -> VertexPartition {
    let assignment = ep.cluster.iter().flat_map(|&c| [c, c]).collect();
    VertexPartition {
        assignment,
        k: ep.k,
        epsilon: 0.0,
    }
}
