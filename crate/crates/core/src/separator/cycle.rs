//! Weighted cycle separators from fundamental cycles of breadth-first trees.

use super::tri::PlaneGraph;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleSplit {
    /// Vertices in cycle order; the closing edge joins the last to the first.
    pub cycle: Vec<usize>,
    /// Vertices strictly left of the oriented cycle.
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub left_weight: u64,
    pub right_weight: u64,
    pub cycle_weight: u64,
}

impl CycleSplit {
    pub fn max_side(&self) -> u64 {
        self.left_weight.max(self.right_weight)
    }

    /// Both sides at most 3/4 of `total`.
    pub fn balanced(&self, total: u64) -> bool {
        4 * self.max_side() as u128 <= 3 * total as u128
    }

    /// At most 4 sqrt(n) vertices.
    pub fn short(&self, n: usize) -> bool {
        self.cycle.len() * self.cycle.len() <= 16 * n
    }
}

pub struct BfsTree {
    pub root: usize,
    pub parent: Vec<usize>,
    pub depth: Vec<usize>,
    pub order: Vec<usize>,
}

pub fn bfs(g: &PlaneGraph, root: usize) -> BfsTree {
    let n = g.len();
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    depth[root] = 0;
    parent[root] = root;
    let mut q = VecDeque::from([root]);
    while let Some(v) = q.pop_front() {
        order.push(v);
        for w in g.neighbors(v) {
            if depth[w] == usize::MAX {
                depth[w] = depth[v] + 1;
                parent[w] = v;
                q.push_back(w);
            }
        }
    }
    BfsTree { root, parent, depth, order }
}

/// Tree path u -> lca -> w.
fn tree_cycle(t: &BfsTree, mut u: usize, mut w: usize) -> Vec<usize> {
    let mut a = Vec::new();
    let mut b = Vec::new();
    while t.depth[u] > t.depth[w] {
        a.push(u);
        u = t.parent[u];
    }
    while t.depth[w] > t.depth[u] {
        b.push(w);
        w = t.parent[w];
    }
    while u != w {
        a.push(u);
        b.push(w);
        u = t.parent[u];
        w = t.parent[w];
    }
    a.push(u);
    a.extend(b.into_iter().rev());
    a
}

/// Seeds of both sides: neighbours off the cycle reached from a cycle vertex
/// strictly between its outgoing and incoming cycle darts.
fn side_seeds(g: &PlaneGraph, cycle: &[usize], on: &[bool]) -> Result<(Vec<usize>, Vec<usize>)> {
    let k = cycle.len();
    let (mut left, mut right) = (Vec::new(), Vec::new());
    for i in 0..k {
        let x = cycle[i];
        let (next, prev) = (cycle[(i + 1) % k], cycle[(i + k - 1) % k]);
        let r = &g.rot[x];
        let find = |t: usize| r.iter().position(|&d| g.head(d) == t);
        let (Some(a), Some(b)) = (find(next), find(prev)) else {
            return Err(Error::Structural(format!("cycle vertices {x} and a neighbour are not adjacent")));
        };
        let deg = r.len();
        let mut j = (a + 1) % deg;
        while j != b {
            let w = g.head(r[j]);
            if !on[w] {
                left.push(w);
            }
            j = (j + 1) % deg;
        }
        let mut j = (b + 1) % deg;
        while j != a {
            let w = g.head(r[j]);
            if !on[w] {
                right.push(w);
            }
            j = (j + 1) % deg;
        }
    }
    Ok((left, right))
}

/// Sides of a simple cycle in a connected plane graph.
pub fn split_by_cycle(g: &PlaneGraph, cycle: &[usize]) -> Result<CycleSplit> {
    let n = g.len();
    let mut on = vec![false; n];
    for &v in cycle {
        on[v] = true;
    }
    let (ls, rs) = side_seeds(g, cycle, &on)?;
    let mut side = vec![0u8; n];
    let fill = |seeds: Vec<usize>, s: u8, side: &mut Vec<u8>| -> Result<()> {
        let mut q: VecDeque<usize> = VecDeque::new();
        for v in seeds {
            if side[v] == 0 {
                side[v] = s;
                q.push_back(v);
            } else if side[v] != s {
                return Err(Error::Structural("cycle sides touch: the embedding is not planar".into()));
            }
        }
        while let Some(v) = q.pop_front() {
            for w in g.neighbors(v) {
                if on[w] {
                    continue;
                }
                if side[w] == 0 {
                    side[w] = s;
                    q.push_back(w);
                } else if side[w] != s {
                    return Err(Error::Structural("cycle sides touch: the embedding is not planar".into()));
                }
            }
        }
        Ok(())
    };
    fill(ls, 1, &mut side)?;
    fill(rs, 2, &mut side)?;
    let pick = |s: u8| -> Vec<usize> { (0..n).filter(|&v| !on[v] && side[v] == s).collect() };
    let (left, right) = (pick(1), pick(2));
    let sum = |vs: &[usize]| vs.iter().map(|&v| g.weight[v]).sum::<u64>();
    Ok(CycleSplit {
        left_weight: sum(&left),
        right_weight: sum(&right),
        cycle_weight: sum(cycle),
        cycle: cycle.to_vec(),
        left,
        right,
    })
}

/// Side weights of a cycle by growing both sides in lockstep and stopping
/// when one is exhausted; the other side's weight follows from the total.
fn side_weights(g: &PlaneGraph, cycle: &[usize], on: &mut [bool], mark: &mut [u32], stamp: u32) -> Option<(u64, u64)> {
    let (ls, rs) = side_seeds(g, cycle, on).ok()?;
    let total = g.total_weight();
    let cw: u64 = cycle.iter().map(|&v| g.weight[v]).sum();
    let mut qs = [VecDeque::new(), VecDeque::new()];
    let mut w = [0u64; 2];
    for (s, seeds) in [ls, rs].into_iter().enumerate() {
        for v in seeds {
            if mark[v] != stamp + s as u32 {
                if mark[v] == stamp + 1 - s as u32 {
                    return None;
                }
                mark[v] = stamp + s as u32;
                w[s] += g.weight[v];
                qs[s].push_back(v);
            }
        }
    }
    loop {
        for s in 0..2 {
            if qs[s].is_empty() {
                let other = total - cw - w[s];
                return Some(if s == 0 { (w[0], other) } else { (other, w[1]) });
            }
            let v = qs[s].pop_front().unwrap();
            for x in g.neighbors(v) {
                if on[x] || mark[x] == stamp + s as u32 {
                    continue;
                }
                if mark[x] == stamp + 1 - s as u32 {
                    return None;
                }
                mark[x] = stamp + s as u32;
                w[s] += g.weight[x];
                qs[s].push_back(x);
            }
        }
    }
}

/// Fundamental cycle of every non-tree edge with its side weights
/// `(cycle, left, right)`.
pub fn fundamental_cycles(g: &PlaneGraph, t: &BfsTree) -> Vec<(Vec<usize>, u64, u64)> {
    let n = g.len();
    let mut on = vec![false; n];
    let mut mark = vec![0u32; n];
    let mut stamp = 1u32;
    let mut out = Vec::new();
    for &[u, w] in &g.edges {
        if u == w || t.parent[u] == w || t.parent[w] == u || t.depth[u] == usize::MAX || t.depth[w] == usize::MAX {
            continue;
        }
        let cycle = tree_cycle(t, u, w);
        if cycle.len() < 3 {
            continue;
        }
        for &v in &cycle {
            on[v] = true;
        }
        if let Some((l, r)) = side_weights(g, &cycle, &mut on, &mut mark, stamp) {
            out.push((cycle.clone(), l, r));
        }
        for &v in &cycle {
            on[v] = false;
        }
        stamp += 2;
    }
    out
}

/// Vertex near the middle of a longest shortest path found by double sweep.
pub fn approximate_center(g: &PlaneGraph) -> usize {
    let a = *bfs(g, 0).order.last().unwrap();
    let t = bfs(g, a);
    let b = *t.order.last().unwrap();
    let mut v = b;
    for _ in 0..t.depth[b] / 2 {
        v = t.parent[v];
    }
    v
}

/// Roots to try: the approximate center first, then vertices in BFS order
/// around it.
pub fn roots(g: &PlaneGraph, count: usize) -> Vec<usize> {
    let c = approximate_center(g);
    let t = bfs(g, c);
    let step = (t.order.len() / count.max(1)).max(1);
    t.order.iter().step_by(step).take(count).copied().collect()
}

const ROOTS: usize = 6;

/// A simple cycle with both strict sides at most 3/4 of the total weight and
/// at most 4 sqrt(|V|) vertices. Graphs with at most three vertices give the
/// whole vertex set.
pub fn cycle_separator(g: &PlaneGraph) -> Result<CycleSplit> {
    let n = g.len();
    let total = g.total_weight();
    if n <= 3 {
        return Ok(CycleSplit {
            cycle: (0..n).collect(),
            left: Vec::new(),
            right: Vec::new(),
            left_weight: 0,
            right_weight: 0,
            cycle_weight: total,
        });
    }
    let mut best: Option<(u64, usize, Vec<usize>)> = None;
    for root in roots(g, ROOTS) {
        let t = bfs(g, root);
        for (cycle, l, r) in fundamental_cycles(g, &t) {
            if cycle.len() * cycle.len() > 16 * n {
                continue;
            }
            let key = (l.max(r), cycle.len());
            if best.as_ref().is_none_or(|b| key < (b.0, b.1)) {
                best = Some((key.0, key.1, cycle));
            }
        }
        if best.as_ref().is_some_and(|b| 4 * b.0 as u128 <= 3 * total as u128) {
            break;
        }
    }
    let Some((_, _, cycle)) = best else {
        return Err(Error::Structural(format!("no fundamental cycle of at most 4 sqrt({n}) vertices")));
    };
    let split = split_by_cycle(g, &cycle)?;
    if !split.balanced(total) {
        return Err(Error::Structural(format!(
            "best cycle leaves {} of {} weight on one side",
            split.max_side(),
            total
        )));
    }
    Ok(split)
}
