//! Exhaustive optima for tiny instances.
//!
//! Assignments are enumerated canonically: clusters are numbered in order of
//! their smallest task, so each partition is visited once regardless of
//! cluster labels.

use crate::error::{Error, Result};
use crate::graph::DataAffinityGraph;
use crate::reconstruct::EdgePartition;
use crate::transform::TransformedGraph;

/// Upper bound on the number of balanced assignments we are willing to visit.
pub const MAX_ASSIGNMENTS: f64 = 1e7;

/// Largest transformed graph accepted by [`brute_force_vp_optimum`].
pub const MAX_VP_CLONES: usize = 16;

/// Number of canonical balanced assignments of `m` tasks to `k` clusters of
/// `m / k` tasks: `m! / ((m/k)!^k k!)`.
pub fn balanced_assignment_count(m: usize, k: usize) -> f64 {
    if k == 0 || !m.is_multiple_of(k) {
        return 0.0;
    }
    let ln_fact = |x: usize| (1..=x).map(|i| (i as f64).ln()).sum::<f64>();
    (ln_fact(m) - k as f64 * ln_fact(m / k) - ln_fact(k))
        .exp()
        .round()
}

fn check_balanced(m: usize, k: usize) -> Result<()> {
    if k == 0 || !m.is_multiple_of(k) {
        return Err(Error::Infeasible(format!(
            "k = {k} does not divide m = {m}"
        )));
    }
    let count = balanced_assignment_count(m, k);
    if count > MAX_ASSIGNMENTS {
        return Err(Error::TooLarge(format!(
            "{count:.3e} balanced assignments for m = {m}, k = {k}"
        )));
    }
    Ok(())
}

/// Depth-first enumeration with a caller-supplied incremental cost.
///
/// `place(task, cluster, assignment)` returns the cost added by placing `task`;
/// `unplace` undoes it. Branches whose running cost reaches the best found so
/// far are cut.
struct Search<'a, P, U> {
    k: usize,
    cap: usize,
    sizes: Vec<usize>,
    assignment: Vec<u32>,
    place: &'a mut P,
    unplace: &'a mut U,
    best: u64,
    witness: Vec<u32>,
}

impl<P, U> Search<'_, P, U>
where
    P: FnMut(usize, u32, &[u32]) -> u64,
    U: FnMut(usize, u32),
{
    fn run(&mut self, task: usize, used: usize, cost: u64) {
        if cost >= self.best {
            return;
        }
        if task == self.assignment.len() {
            self.best = cost;
            self.witness.clone_from(&self.assignment);
            return;
        }
        let open = (used + 1).min(self.k);
        for c in 0..open {
            if self.sizes[c] == self.cap {
                continue;
            }
            let c32 = c as u32;
            self.assignment[task] = c32;
            self.sizes[c] += 1;
            let added = (self.place)(task, c32, &self.assignment);
            self.run(task + 1, used.max(c + 1), cost + added);
            (self.unplace)(task, c32);
            self.sizes[c] -= 1;
        }
    }
}

fn search<P, U>(m: usize, k: usize, mut place: P, mut unplace: U) -> (u64, Vec<u32>)
where
    P: FnMut(usize, u32, &[u32]) -> u64,
    U: FnMut(usize, u32),
{
    let mut s = Search {
        k,
        cap: m / k,
        sizes: vec![0; k],
        assignment: vec![0; m],
        place: &mut place,
        unplace: &mut unplace,
        best: u64::MAX,
        witness: Vec::new(),
    };
    s.run(0, 0, 0);
    (s.best, s.witness)
}

/// Minimum vertex-cut cost over all exactly balanced edge partitions, with a
/// witness partition.
pub fn brute_force_edge_optimum(g: &DataAffinityGraph, k: usize) -> Result<(u64, EdgePartition)> {
    let m = g.m();
    check_balanced(m, k)?;
    if m == 0 {
        return Ok((0, EdgePartition::new(Vec::new(), k)?));
    }
    let (best, witness) = search_edge(g, k);
    Ok((best, EdgePartition::new(witness, k)?))
}

fn search_edge(g: &DataAffinityGraph, k: usize) -> (u64, Vec<u32>) {
    let m = g.m();
    let edges = g.edges().to_vec();
    let n = g.n();
    // per (vertex, cluster) task counts, and clusters touched per vertex
    let count = std::cell::RefCell::new((vec![0u32; n * k], vec![0u32; n]));
    search(
        m,
        k,
        |task, c, _| {
            let (cnt, span) = &mut *count.borrow_mut();
            let (u, v) = edges[task];
            let mut added = 0;
            for x in [u, v] {
                let slot = x as usize * k + c as usize;
                if cnt[slot] == 0 {
                    if span[x as usize] > 0 {
                        added += 1;
                    }
                    span[x as usize] += 1;
                }
                cnt[slot] += 1;
            }
            added
        },
        |task, c| {
            let (cnt, span) = &mut *count.borrow_mut();
            let (u, v) = edges[task];
            for x in [v, u] {
                let slot = x as usize * k + c as usize;
                cnt[slot] -= 1;
                if cnt[slot] == 0 {
                    span[x as usize] -= 1;
                }
            }
        },
    )
}

/// Minimum number of auxiliary edges cut by an exactly balanced clone
/// partition that cuts no original edge.
pub fn brute_force_vp_optimum(tg: &TransformedGraph, k: usize) -> Result<u64> {
    if tg.clone_count() > MAX_VP_CLONES {
        return Err(Error::TooLarge(format!(
            "{} clones (limit {MAX_VP_CLONES})",
            tg.clone_count()
        )));
    }
    let m = tg.m();
    check_balanced(m, k)?;
    // aux edges as (later task, earlier task), grouped by the later task
    let mut back: Vec<Vec<usize>> = vec![Vec::new(); m];
    for &(x, y) in tg.aux_edges() {
        let (a, b) = (TransformedGraph::task_of(x), TransformedGraph::task_of(y));
        if a != b {
            back[a.max(b)].push(a.min(b));
        }
    }
    let (best, _) = search(
        m,
        k,
        |task, c, assignment| back[task].iter().filter(|&&t| assignment[t] != c).count() as u64,
        |_, _| {},
    );
    Ok(best)
}

/// Call `f` on every canonical exactly balanced assignment of `m` tasks.
pub fn for_each_balanced<F: FnMut(&[u32])>(m: usize, k: usize, mut f: F) -> Result<()> {
    check_balanced(m, k)?;
    fn rec<F: FnMut(&[u32])>(
        a: &mut Vec<u32>,
        sizes: &mut [usize],
        cap: usize,
        used: usize,
        m: usize,
        f: &mut F,
    ) {
        if a.len() == m {
            f(a);
            return;
        }
        for c in 0..(used + 1).min(sizes.len()) {
            if sizes[c] == cap {
                continue;
            }
            sizes[c] += 1;
            a.push(c as u32);
            rec(a, sizes, cap, used.max(c + 1), m, f);
            a.pop();
            sizes[c] -= 1;
        }
    }
    let mut sizes = vec![0; k];
    rec(&mut Vec::with_capacity(m), &mut sizes, m / k, 0, m, &mut f);
    Ok(())
}
