//! Cut paths through a region: rays from boundary lattice points that, on
//! hitting an item, either turn along its edge or pass through it.

use crate::grid::{Dir, Item, UnitEdge};
use crate::region::Region;
use std::collections::HashSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Walk {
    pub start: (i64, i64),
    pub end: (i64, i64),
    pub edges: Vec<UnitEdge>,
    /// Indices (into the live items) of the items passed through.
    pub cut: Vec<usize>,
    pub turns: usize,
}

#[derive(Clone, Copy, Debug)]
pub struct WalkOptions {
    /// Pass through items instead of only turning at them.
    pub allow_pass: bool,
    pub max_turns: usize,
    /// Stop after this many walks.
    pub limit: usize,
}

impl Default for WalkOptions {
    fn default() -> Self {
        WalkOptions { allow_pass: true, max_turns: 4, limit: usize::MAX }
    }
}

/// Lattice points on the boundary of the open set (including wall points).
pub fn boundary_points(r: &Region) -> Vec<(i64, i64)> {
    let mut pts: HashSet<(i64, i64)> = HashSet::new();
    for (x, y) in r.cells() {
        for p in [(x, y), (x + 1, y), (x, y + 1), (x + 1, y + 1)] {
            if !r.point_inside(p) {
                pts.insert(p);
            }
        }
    }
    let mut v: Vec<_> = pts.into_iter().collect();
    v.sort();
    v
}

struct Ctx<'a> {
    r: &'a Region,
    live: &'a [Item],
    opts: WalkOptions,
    out: Vec<Walk>,
    seen: HashSet<Vec<UnitEdge>>,
    start: (i64, i64),
    edges: Vec<UnitEdge>,
    cut: Vec<usize>,
    visited: HashSet<(i64, i64)>,
}

impl Ctx<'_> {
    fn hits(&self, e: &UnitEdge) -> Vec<usize> {
        (0..self.live.len()).filter(|&i| !self.cut.contains(&i) && e.inside(&self.live[i])).collect()
    }

    fn go(&mut self, q: (i64, i64), d: Dir, turns: usize, may_turn: bool) {
        if self.out.len() >= self.opts.limit {
            return;
        }
        let e = UnitEdge::step(q, d);
        if !self.r.edge_open(&e) {
            return;
        }
        let hit = self.hits(&e);
        if !hit.is_empty() {
            if may_turn && turns < self.opts.max_turns {
                for nd in [d.left(), d.right()] {
                    self.go(q, nd, turns + 1, false);
                }
            }
            if !self.opts.allow_pass {
                return;
            }
        }
        let q2 = d.apply(q);
        if self.visited.contains(&q2) {
            return;
        }
        let cut_before = self.cut.len();
        self.cut.extend(hit);
        self.edges.push(e);
        if !self.r.point_inside(q2) {
            let mut key = self.edges.clone();
            key.sort();
            if self.seen.insert(key) {
                let turns_taken = turns;
                self.out.push(Walk { start: self.start, end: q2, edges: self.edges.clone(), cut: self.cut.clone(), turns: turns_taken });
            }
        } else {
            self.visited.insert(q2);
            self.go(q2, d, turns, true);
            self.visited.remove(&q2);
        }
        self.edges.pop();
        self.cut.truncate(cut_before);
    }
}

/// All distinct cut paths of `r` with respect to `live`, from every
/// boundary lattice point into the interior until the boundary is reached
/// again. Paths revisiting a point are dropped.
pub fn walks(r: &Region, live: &[Item], opts: WalkOptions) -> Vec<Walk> {
    let starts = boundary_points(r);
    walks_from(r, live, opts, &starts)
}

pub fn walks_from(r: &Region, live: &[Item], opts: WalkOptions, starts: &[(i64, i64)]) -> Vec<Walk> {
    let mut ctx = Ctx { r, live, opts, out: Vec::new(), seen: HashSet::new(), start: (0, 0), edges: Vec::new(), cut: Vec::new(), visited: HashSet::new() };
    for &p in starts {
        for d in Dir::ALL {
            ctx.start = p;
            ctx.visited.clear();
            ctx.visited.insert(p);
            ctx.go(p, d, 0, false);
        }
    }
    ctx.out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn straight_chords_of_a_rectangle() {
        let r = Region::rect(4, 0, 3, 0, 2);
        let ws = walks(&r, &[], WalkOptions::default());
        // two vertical chords and one horizontal chord
        assert_eq!(ws.len(), 3);
        assert!(ws.iter().all(|w| w.turns == 0 && r.cut(w.edges.iter().copied()).len() == 2));
    }

    #[test]
    fn walks_turn_at_blocks() {
        let r = Region::rect(8, 0, 8, 0, 3);
        let b = Item::new(0, 1, 7, 1, 2, 1);
        let no_pass = WalkOptions { allow_pass: false, ..Default::default() };
        let ws = walks(&r, &[b], no_pass);
        assert!(ws.iter().all(|w| w.cut.is_empty()));
        assert!(ws.iter().any(|w| w.turns == 1));
        for w in &ws {
            let parts = r.cut(w.edges.iter().copied());
            assert!(parts.iter().filter(|p| p.contains_item(&b)).count() <= 1);
        }
        let with_pass = walks(&r, &[b], WalkOptions::default());
        assert!(with_pass.iter().any(|w| w.cut == vec![0]));
        assert!(with_pass.len() > ws.len());
    }
}
