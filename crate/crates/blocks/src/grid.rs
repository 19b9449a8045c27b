//! Integer grid, weighted rectangles and axis-parallel segments.

use geomis_core::rng::{child, rng};
use geomis_core::{Error, Result};
use rand::Rng;
use serde::{Deserialize, Serialize};

/// `(1/delta)^2` square cells of side `big = delta * n` tiling `[0, n]^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Grid {
    pub n: i64,
    /// `1 / delta`.
    pub cells_per_side: i64,
    /// `delta * n`, the largeness threshold.
    pub big: i64,
}

/// `1/delta` as an integer when it is one (up to 1e-9).
pub fn inverse_delta(delta: f64) -> Result<i64> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::InvalidInput(format!("delta = {delta} must lie in (0, 1]")));
    }
    let inv = (1.0 / delta).round();
    if ((1.0 / delta) - inv).abs() > 1e-9 {
        return Err(Error::InvalidInput(format!("parameters not grid-compatible: 1/delta = {} is not an integer", 1.0 / delta)));
    }
    Ok(inv as i64)
}

pub fn build_grid(n: i64, delta: f64) -> Result<Grid> {
    let k = inverse_delta(delta)?;
    if n <= 0 || n % k != 0 {
        return Err(Error::InvalidInput(format!("parameters not grid-compatible: delta * N = {n}/{k} is not an integer")));
    }
    Ok(Grid { n, cells_per_side: k, big: n / k })
}

impl Grid {
    pub fn cell_count(&self) -> usize {
        (self.cells_per_side * self.cells_per_side) as usize
    }

    /// Cells as `(x1, x2, y1, y2)`, row by row.
    pub fn cells(&self) -> Vec<(i64, i64, i64, i64)> {
        let d = self.big;
        (0..self.cells_per_side)
            .flat_map(|j| (0..self.cells_per_side).map(move |i| (i * d, (i + 1) * d, j * d, (j + 1) * d)))
            .collect()
    }

    /// Index of the grid cell holding unit cell `(x, y)`.
    pub fn cell_of(&self, x: i64, y: i64) -> (i64, i64) {
        (x / self.big, y / self.big)
    }

    pub fn is_grid_line(&self, c: i64) -> bool {
        c % self.big == 0
    }

    /// Segment lies inside one edge of a grid cell.
    pub fn within_grid_edge(&self, s: &Seg) -> bool {
        let k = s.lo.div_euclid(self.big);
        self.is_grid_line(s.at) && s.hi <= (k + 1) * self.big
    }
}

/// Open axis-parallel rectangle with integer corners.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Item {
    pub id: u32,
    pub x1: i64,
    pub x2: i64,
    pub y1: i64,
    pub y2: i64,
    pub weight: u64,
}

impl Item {
    pub fn new(id: u32, x1: i64, x2: i64, y1: i64, y2: i64, weight: u64) -> Item {
        assert!(x1 < x2 && y1 < y2, "empty rectangle");
        Item { id, x1, x2, y1, y2, weight }
    }

    pub fn width(&self) -> i64 {
        self.x2 - self.x1
    }

    pub fn height(&self) -> i64 {
        self.y2 - self.y1
    }

    pub fn horizontal(&self) -> bool {
        self.width() >= self.height()
    }

    /// Longer side exceeds `big`.
    pub fn is_large(&self, g: &Grid) -> bool {
        self.width() > g.big || self.height() > g.big
    }

    pub fn is_block(&self, g: &Grid) -> bool {
        self.is_large(g) && (self.width() == 1 || self.height() == 1)
    }

    pub fn overlaps(&self, o: &Item) -> bool {
        self.x1 < o.x2 && o.x1 < self.x2 && self.y1 < o.y2 && o.y1 < self.y2
    }

    pub fn inside_square(&self, n: i64) -> bool {
        self.x1 >= 0 && self.y1 >= 0 && self.x2 <= n && self.y2 <= n
    }

    /// A unit-thickness rectangle inside `self` along its longer side,
    /// carrying its weight.
    pub fn representative_block(&self) -> Item {
        if self.horizontal() {
            Item { y2: self.y1 + 1, ..*self }
        } else {
            Item { x2: self.x1 + 1, ..*self }
        }
    }

    pub fn area(&self) -> i64 {
        self.width() * self.height()
    }
}

/// Closed segment: `x = at, lo <= y <= hi` when vertical, `y = at,
/// lo <= x <= hi` when horizontal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Seg {
    pub vertical: bool,
    pub at: i64,
    pub lo: i64,
    pub hi: i64,
}

impl Seg {
    pub fn new(vertical: bool, at: i64, a: i64, b: i64) -> Seg {
        Seg { vertical, at, lo: a.min(b), hi: a.max(b) }
    }

    /// Segment between two points sharing a coordinate.
    pub fn between(p: (i64, i64), q: (i64, i64)) -> Seg {
        if p.0 == q.0 {
            Seg::new(true, p.0, p.1, q.1)
        } else {
            assert_eq!(p.1, q.1, "points not axis-aligned");
            Seg::new(false, p.1, p.0, q.0)
        }
    }

    pub fn len(&self) -> i64 {
        self.hi - self.lo
    }

    pub fn is_empty(&self) -> bool {
        self.hi == self.lo
    }

    pub fn endpoints(&self) -> [(i64, i64); 2] {
        [self.point(self.lo), self.point(self.hi)]
    }

    /// Point at parameter `t` along the segment's line.
    pub fn point(&self, t: i64) -> (i64, i64) {
        if self.vertical {
            (self.at, t)
        } else {
            (t, self.at)
        }
    }

    /// Coordinates of `p` as (line coordinate, parameter).
    fn split(&self, p: (i64, i64)) -> (i64, i64) {
        if self.vertical {
            (p.0, p.1)
        } else {
            (p.1, p.0)
        }
    }

    pub fn contains(&self, p: (i64, i64)) -> bool {
        let (c, t) = self.split(p);
        c == self.at && self.lo <= t && t <= self.hi
    }

    pub fn contains_in_interior(&self, p: (i64, i64)) -> bool {
        let (c, t) = self.split(p);
        c == self.at && self.lo < t && t < self.hi
    }

    /// Interiors meet: a proper crossing of perpendicular segments or a
    /// collinear overlap of positive length.
    pub fn crosses(&self, o: &Seg) -> bool {
        if self.vertical == o.vertical {
            self.at == o.at && self.lo.max(o.lo) < self.hi.min(o.hi)
        } else {
            self.lo < o.at && o.at < self.hi && o.lo < self.at && self.at < o.hi
        }
    }

    /// Meets the open rectangle.
    pub fn intersects_item(&self, r: &Item) -> bool {
        if self.vertical {
            r.x1 < self.at && self.at < r.x2 && self.lo < r.y2 && self.hi > r.y1
        } else {
            r.y1 < self.at && self.at < r.y2 && self.lo < r.x2 && self.hi > r.x1
        }
    }

    /// Splits the open rectangle into two pieces.
    pub fn cuts_item(&self, r: &Item) -> bool {
        if self.vertical {
            r.x1 < self.at && self.at < r.x2 && self.lo <= r.y1 && self.hi >= r.y2
        } else {
            r.y1 < self.at && self.at < r.y2 && self.lo <= r.x1 && self.hi >= r.x2
        }
    }

    /// Unit edges covered by the segment.
    pub fn unit_edges(&self) -> impl Iterator<Item = UnitEdge> + '_ {
        (self.lo..self.hi).map(move |t| if self.vertical { UnitEdge::vertical(self.at, t) } else { UnitEdge::horizontal(t, self.at) })
    }
}

/// Unit edge of the integer lattice: from `(x, y)` to `(x + 1, y)` when
/// horizontal, to `(x, y + 1)` when vertical.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct UnitEdge {
    pub vertical: bool,
    pub x: i64,
    pub y: i64,
}

impl UnitEdge {
    pub fn horizontal(x: i64, y: i64) -> UnitEdge {
        UnitEdge { vertical: false, x, y }
    }

    pub fn vertical(x: i64, y: i64) -> UnitEdge {
        UnitEdge { vertical: true, x, y }
    }

    /// The edge from `p` one step in direction `d`.
    pub fn step(p: (i64, i64), d: Dir) -> UnitEdge {
        let q = d.apply(p);
        if d.vertical() {
            UnitEdge::vertical(p.0, p.1.min(q.1))
        } else {
            UnitEdge::horizontal(p.0.min(q.0), p.1)
        }
    }

    /// The two unit cells on either side (lower/left first).
    pub fn cells(&self) -> [(i64, i64); 2] {
        if self.vertical {
            [(self.x - 1, self.y), (self.x, self.y)]
        } else {
            [(self.x, self.y - 1), (self.x, self.y)]
        }
    }

    pub fn endpoints(&self) -> [(i64, i64); 2] {
        if self.vertical {
            [(self.x, self.y), (self.x, self.y + 1)]
        } else {
            [(self.x, self.y), (self.x + 1, self.y)]
        }
    }

    /// Lies inside the open rectangle.
    pub fn inside(&self, r: &Item) -> bool {
        if self.vertical {
            r.x1 < self.x && self.x < r.x2 && r.y1 <= self.y && self.y + 1 <= r.y2
        } else {
            r.y1 < self.y && self.y < r.y2 && r.x1 <= self.x && self.x + 1 <= r.x2
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Dir {
    East,
    North,
    West,
    South,
}

impl Dir {
    pub const ALL: [Dir; 4] = [Dir::East, Dir::North, Dir::West, Dir::South];

    pub fn delta(self) -> (i64, i64) {
        match self {
            Dir::East => (1, 0),
            Dir::North => (0, 1),
            Dir::West => (-1, 0),
            Dir::South => (0, -1),
        }
    }

    pub fn apply(self, p: (i64, i64)) -> (i64, i64) {
        let (dx, dy) = self.delta();
        (p.0 + dx, p.1 + dy)
    }

    pub fn vertical(self) -> bool {
        matches!(self, Dir::North | Dir::South)
    }

    pub fn left(self) -> Dir {
        match self {
            Dir::East => Dir::North,
            Dir::North => Dir::West,
            Dir::West => Dir::South,
            Dir::South => Dir::East,
        }
    }

    pub fn right(self) -> Dir {
        self.left().left().left()
    }

    pub fn back(self) -> Dir {
        self.left().left()
    }
}

/// Exact maximum weight independent set of open rectangles.
pub fn mwis_items(items: &[Item]) -> Result<(u64, Vec<u32>)> {
    use geomis_core::oracle::{mwis_exact, ConflictGraph};
    let mut edges = Vec::new();
    for i in 0..items.len() {
        for j in i + 1..items.len() {
            if items[i].overlaps(&items[j]) {
                edges.push((i, j));
            }
        }
    }
    let g = ConflictGraph::new(items.iter().map(|r| r.id).collect(), items.iter().map(|r| r.weight).collect(), &edges);
    let r = mwis_exact(&g)?;
    Ok((r.weight, r.ids))
}

pub fn pairwise_disjoint(items: &[Item]) -> bool {
    (0..items.len()).all(|i| (i + 1..items.len()).all(|j| !items[i].overlaps(&items[j])))
}

/// `m` delta-large rectangles with integer corners in `[0, n]^2`, possibly
/// overlapping. With `blocks_only` every one has thickness 1.
pub fn gen_delta_large(m: usize, n: i64, delta: f64, seed: u64, blocks_only: bool, max_weight: u64) -> Result<Vec<Item>> {
    let g = build_grid(n, delta)?;
    if g.big >= n {
        return Err(Error::InvalidInput(format!("no rectangle in [0,{n}]^2 is longer than delta * N = {}", g.big)));
    }
    let mut r = rng(child(seed, 2));
    let mut out = Vec::with_capacity(m);
    for id in 0..m {
        let long = r.gen_range(g.big + 1..=n);
        let short = if blocks_only { 1 } else { r.gen_range(1..=n) };
        let horizontal = r.gen_bool(0.5);
        let (w, h) = if horizontal { (long, short) } else { (short, long) };
        let x1 = r.gen_range(0..=n - w);
        let y1 = r.gen_range(0..=n - h);
        let weight = r.gen_range(1..=max_weight.max(1));
        out.push(Item::new(id as u32, x1, x1 + w, y1, y1 + h, weight));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_examples() {
        let g = build_grid(100, 0.2).unwrap();
        assert_eq!((g.big, g.cell_count()), (20, 25));
        let g = build_grid(8, 0.5).unwrap();
        assert_eq!((g.big, g.cell_count()), (4, 4));
        let g = build_grid(7, 1.0).unwrap();
        assert_eq!(g.cells(), vec![(0, 7, 0, 7)]);
        assert!(build_grid(10, 0.3).is_err());
        assert!(build_grid(10, 0.25).is_err());
    }

    #[test]
    fn segment_predicates() {
        let v = Seg::new(true, 3, 0, 5);
        let h = Seg::new(false, 2, 0, 6);
        assert!(v.crosses(&h));
        let t = Seg::new(false, 5, 3, 6);
        assert!(!v.crosses(&t));
        assert!(v.contains_in_interior((3, 2)));
        let b = Item::new(0, 1, 6, 5, 6, 1);
        assert!(!v.intersects_item(&b));
        assert!(Seg::new(true, 3, 0, 6).cuts_item(&b));
        assert!(build_grid(8, 0.5).unwrap().within_grid_edge(&Seg::new(false, 4, 4, 8)));
        assert!(!build_grid(8, 0.5).unwrap().within_grid_edge(&Seg::new(false, 4, 3, 5)));
    }

    #[test]
    fn generated_items_are_large() {
        let g = build_grid(8, 0.5).unwrap();
        for s in 0..50 {
            for r in gen_delta_large(10, 8, 0.5, s, true, 9).unwrap() {
                assert!(r.is_block(&g) && r.inside_square(8));
                assert!(r.width().max(r.height()) >= 5);
            }
            for r in gen_delta_large(6, 8, 0.5, s, false, 9).unwrap() {
                assert!(r.is_large(&g) && r.inside_square(8));
            }
        }
        assert!(gen_delta_large(0, 8, 0.5, 1, true, 9).unwrap().is_empty());
    }
}
