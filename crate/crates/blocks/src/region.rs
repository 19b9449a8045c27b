//! Rectilinear regions as sets of unit cells with optional internal walls
//! (slits), their boundaries, topology and narrowness.

use crate::grid::{Dir, Grid, Item, Seg, UnitEdge};
use serde::{Deserialize, Serialize};
use std::collections::{HashMap, HashSet};

/// Open set: the union of the chosen unit cells `[x, x+1] x [y, y+1]` of
/// `[0, n]^2`, without its boundary and without the wall edges.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Region {
    pub n: i64,
    bits: Vec<u64>,
    /// Sorted unit edges with both sides inside, removed from the set.
    walls: Vec<UnitEdge>,
}

pub type Loop = Vec<(i64, i64)>;

impl Region {
    pub fn empty(n: i64) -> Region {
        let words = ((n * n) as usize).div_ceil(64);
        Region { n, bits: vec![0; words], walls: Vec::new() }
    }

    pub fn square(n: i64) -> Region {
        Region::rect(n, 0, n, 0, n)
    }

    pub fn rect(n: i64, x1: i64, x2: i64, y1: i64, y2: i64) -> Region {
        Region::from_cells(n, (y1..y2).flat_map(|y| (x1..x2).map(move |x| (x, y))))
    }

    pub fn from_cells(n: i64, cells: impl IntoIterator<Item = (i64, i64)>) -> Region {
        let mut r = Region::empty(n);
        for (x, y) in cells {
            r.insert(x, y);
        }
        r
    }

    /// Adds walls, keeping only edges with both sides inside.
    pub fn with_walls(mut self, walls: impl IntoIterator<Item = UnitEdge>) -> Region {
        let keep: Vec<UnitEdge> = walls.into_iter().filter(|e| e.cells().iter().all(|&(x, y)| self.has(x, y))).collect();
        self.walls.extend(keep);
        self.walls.sort();
        self.walls.dedup();
        self
    }

    fn index(&self, x: i64, y: i64) -> usize {
        (y * self.n + x) as usize
    }

    pub fn insert(&mut self, x: i64, y: i64) {
        assert!(0 <= x && x < self.n && 0 <= y && y < self.n, "cell ({x}, {y}) outside the square");
        let i = self.index(x, y);
        self.bits[i / 64] |= 1 << (i % 64);
    }

    pub fn has(&self, x: i64, y: i64) -> bool {
        if x < 0 || y < 0 || x >= self.n || y >= self.n {
            return false;
        }
        let i = self.index(x, y);
        self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn cells(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        let n = self.n;
        self.bits.iter().enumerate().flat_map(move |(k, &w)| {
            (0..64).filter(move |b| w >> b & 1 == 1).map(move |b| {
                let i = (k * 64 + b) as i64;
                (i % n, i / n)
            })
        })
    }

    pub fn walls(&self) -> &[UnitEdge] {
        &self.walls
    }

    pub fn is_wall(&self, e: &UnitEdge) -> bool {
        self.walls.binary_search(e).is_ok()
    }

    /// Both sides inside and not a wall.
    pub fn edge_open(&self, e: &UnitEdge) -> bool {
        e.cells().iter().all(|&(x, y)| self.has(x, y)) && !self.is_wall(e)
    }

    fn incident(p: (i64, i64)) -> [UnitEdge; 4] {
        let (x, y) = p;
        [UnitEdge::horizontal(x - 1, y), UnitEdge::horizontal(x, y), UnitEdge::vertical(x, y - 1), UnitEdge::vertical(x, y)]
    }

    /// Lattice point in the open set.
    pub fn point_inside(&self, p: (i64, i64)) -> bool {
        Region::incident(p).iter().all(|e| self.edge_open(e))
    }

    pub fn is_subset(&self, o: &Region) -> bool {
        self.bits.iter().zip(&o.bits).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, o: &Region) -> bool {
        self.bits.iter().zip(&o.bits).all(|(a, b)| a & b == 0)
    }

    /// Open rectangle lies in the open set.
    pub fn contains_item(&self, r: &Item) -> bool {
        if !r.inside_square(self.n) {
            return false;
        }
        if !(r.y1..r.y2).all(|y| (r.x1..r.x2).all(|x| self.has(x, y))) {
            return false;
        }
        !self.walls.iter().any(|e| e.inside(r))
    }

    /// Restriction to the given cells, keeping walls between kept cells.
    pub fn restrict(&self, keep: impl Fn(i64, i64) -> bool) -> Region {
        let mut r = Region::empty(self.n);
        for (x, y) in self.cells() {
            if keep(x, y) {
                r.insert(x, y);
            }
        }
        let walls = self.walls.clone();
        r.with_walls(walls)
    }

    /// Connected components through open edges.
    pub fn components(&self) -> Vec<Region> {
        let mut seen = Region::empty(self.n);
        let mut out = Vec::new();
        for start in self.cells().collect::<Vec<_>>() {
            if seen.has(start.0, start.1) {
                continue;
            }
            let mut comp = Region::empty(self.n);
            let mut stack = vec![start];
            seen.insert(start.0, start.1);
            while let Some((x, y)) = stack.pop() {
                comp.insert(x, y);
                let sides = [
                    (UnitEdge::vertical(x + 1, y), (x + 1, y)),
                    (UnitEdge::vertical(x, y), (x - 1, y)),
                    (UnitEdge::horizontal(x, y + 1), (x, y + 1)),
                    (UnitEdge::horizontal(x, y), (x, y - 1)),
                ];
                for (e, c) in sides {
                    if self.edge_open(&e) && !seen.has(c.0, c.1) {
                        seen.insert(c.0, c.1);
                        stack.push(c);
                    }
                }
            }
            out.push(comp.with_walls(self.walls.iter().copied()));
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// Euler characteristic of the open set.
    pub fn euler(&self) -> i64 {
        let f = self.len() as i64;
        let mut e = 0;
        let mut v = 0;
        for (x, y) in self.cells() {
            if self.edge_open(&UnitEdge::vertical(x + 1, y)) {
                e += 1;
            }
            if self.edge_open(&UnitEdge::horizontal(x, y + 1)) {
                e += 1;
            }
            if self.point_inside((x + 1, y + 1)) {
                v += 1;
            }
        }
        f - e + v
    }

    /// Holes of a connected region.
    pub fn holes(&self) -> i64 {
        1 - self.euler()
    }

    /// Boundary cycles with the region on the left, as corner lists. Outer
    /// boundaries run counter-clockwise, holes clockwise; walls are walked
    /// along both sides.
    pub fn loops(&self) -> Vec<Loop> {
        let mut sides: Vec<((i64, i64), Dir)> = Vec::new();
        for (x, y) in self.cells() {
            let cand = [
                ((x, y), Dir::East, UnitEdge::horizontal(x, y)),
                ((x + 1, y), Dir::North, UnitEdge::vertical(x + 1, y)),
                ((x + 1, y + 1), Dir::West, UnitEdge::horizontal(x, y + 1)),
                ((x, y + 1), Dir::South, UnitEdge::vertical(x, y)),
            ];
            for (p, d, e) in cand {
                if !self.edge_open(&e) {
                    sides.push((p, d));
                }
            }
        }
        let mut at: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
        for (i, s) in sides.iter().enumerate() {
            at.entry(s.0).or_default().push(i);
        }
        let mut used = vec![false; sides.len()];
        let mut out = Vec::new();
        for s0 in 0..sides.len() {
            if used[s0] {
                continue;
            }
            let mut corners = Vec::new();
            let mut cur = s0;
            loop {
                used[cur] = true;
                let (p, d) = sides[cur];
                let q = d.apply(p);
                let outs = &at[&q];
                let next = [d.left(), d, d.right(), d.back()]
                    .iter()
                    .find_map(|&nd| outs.iter().copied().find(|&j| sides[j].1 == nd))
                    .expect("boundary side without successor");
                if sides[next].1 != d {
                    corners.push(q);
                }
                cur = next;
                if cur == s0 {
                    break;
                }
            }
            out.push(corners);
        }
        out
    }

    pub fn corner_count(&self) -> usize {
        self.loops().iter().map(|l| l.len()).sum()
    }

    /// Loops rotated to start at their smallest corner, sorted.
    pub fn canonical(&self) -> Vec<Loop> {
        let mut ls = self.loops();
        for l in &mut ls {
            let k = (0..l.len()).min_by_key(|&i| l[i]).unwrap_or(0);
            l.rotate_left(k);
        }
        ls.sort();
        ls
    }

    /// Splits along the given edges: the components after adding them as
    /// walls.
    pub fn cut(&self, edges: impl IntoIterator<Item = UnitEdge>) -> Vec<Region> {
        self.clone().with_walls(edges).components()
    }

    pub fn union(&self, o: &Region) -> Region {
        let mut r = self.clone();
        for (a, b) in r.bits.iter_mut().zip(&o.bits) {
            *a |= b;
        }
        r.walls.extend(o.walls.iter().copied());
        r.walls.sort();
        r.walls.dedup();
        r
    }

    pub fn shape(&self, g: &Grid) -> Shape {
        let comps = self.components();
        let connected = comps.len() == 1;
        let holes = if connected { self.holes() } else { -1 };
        let narrow = connected && narrowness(self, g).is_ok();
        let corners = self.corner_count();
        let kind = if !connected || !narrow {
            ShapeKind::Other
        } else if holes == 0 {
            ShapeKind::Trail
        } else if holes == 1 {
            ShapeKind::Ring
        } else {
            ShapeKind::Other
        };
        Shape { kind, corners, holes }
    }

    pub fn is_trail(&self, g: &Grid) -> bool {
        self.shape(g).kind == ShapeKind::Trail
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ShapeKind {
    Trail,
    Ring,
    Other,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Shape {
    pub kind: ShapeKind,
    pub corners: usize,
    pub holes: i64,
}

/// Piece of a region inside one grid cell.
#[derive(Clone, Debug)]
pub struct CellPiece {
    pub cell: (i64, i64),
    pub region: Region,
}

/// Per-cell pieces, cell by cell.
pub fn cell_pieces(r: &Region, g: &Grid) -> Vec<CellPiece> {
    let mut out = Vec::new();
    for j in 0..g.cells_per_side {
        for i in 0..g.cells_per_side {
            let (x1, y1) = (i * g.big, j * g.big);
            let part = r.restrict(|x, y| x >= x1 && x < x1 + g.big && y >= y1 && y < y1 + g.big);
            if part.is_empty() {
                continue;
            }
            for c in part.components() {
                out.push(CellPiece { cell: (i, j), region: c });
            }
        }
    }
    out
}

/// Checks that no grid vertex lies inside and that every per-cell piece is
/// an open rectangle or L-shape meeting at most two cell edges.
pub fn narrowness(r: &Region, g: &Grid) -> Result<(), String> {
    for j in 1..g.cells_per_side {
        for i in 1..g.cells_per_side {
            if r.point_inside((i * g.big, j * g.big)) {
                return Err(format!("grid vertex ({}, {}) inside", i * g.big, j * g.big));
            }
        }
    }
    for piece in cell_pieces(r, g) {
        let p = &piece.region;
        if p.walls().iter().any(|e| e.cells().iter().all(|&(x, y)| p.has(x, y))) {
            return Err(format!("slit inside cell {:?}", piece.cell));
        }
        let loops = p.loops();
        if loops.len() != 1 || !(loops[0].len() == 4 || loops[0].len() == 6) {
            return Err(format!("cell {:?} piece is not a rectangle or L-shape", piece.cell));
        }
        let touched = touched_sides(r, g, &piece);
        if touched.iter().filter(|&&t| t).count() > 2 {
            return Err(format!("cell {:?} piece meets more than two cell edges", piece.cell));
        }
    }
    Ok(())
}

/// Which cell edges (east, north, west, south) the piece crosses through
/// open edges of `r`.
fn touched_sides(r: &Region, g: &Grid, piece: &CellPiece) -> [bool; 4] {
    let (i, j) = piece.cell;
    let (x1, y1) = (i * g.big, j * g.big);
    let (x2, y2) = (x1 + g.big, y1 + g.big);
    let mut t = [false; 4];
    for (x, y) in piece.region.cells() {
        if x == x2 - 1 && r.edge_open(&UnitEdge::vertical(x2, y)) {
            t[0] = true;
        }
        if y == y2 - 1 && r.edge_open(&UnitEdge::horizontal(x, y2)) {
            t[1] = true;
        }
        if x == x1 && r.edge_open(&UnitEdge::vertical(x1, y)) {
            t[2] = true;
        }
        if y == y1 && r.edge_open(&UnitEdge::horizontal(x, y1)) {
            t[3] = true;
        }
    }
    t
}

/// Adjacency of per-cell pieces: pieces plus one entry per maximal run of
/// open edges joining two pieces.
pub fn piece_graph(r: &Region, g: &Grid) -> (usize, Vec<(usize, usize)>) {
    let pieces = cell_pieces(r, g);
    let mut owner: HashMap<(i64, i64), usize> = HashMap::new();
    for (k, p) in pieces.iter().enumerate() {
        for c in p.region.cells() {
            owner.insert(c, k);
        }
    }
    // (pair, vertical, line, position)
    let mut crossings: Vec<((usize, usize), bool, i64, i64)> = Vec::new();
    for (x, y) in r.cells() {
        for e in [UnitEdge::vertical(x + 1, y), UnitEdge::horizontal(x, y + 1)] {
            if !r.edge_open(&e) {
                continue;
            }
            let [a, b] = e.cells();
            let (pa, pb) = (owner[&a], owner[&b]);
            if pa != pb {
                let pair = (pa.min(pb), pa.max(pb));
                if e.vertical {
                    crossings.push((pair, true, e.x, e.y));
                } else {
                    crossings.push((pair, false, e.y, e.x));
                }
            }
        }
    }
    crossings.sort();
    let mut links = Vec::new();
    for (k, c) in crossings.iter().enumerate() {
        let continues = k > 0 && {
            let p = crossings[k - 1];
            p.0 == c.0 && p.1 == c.1 && p.2 == c.2 && p.3 + 1 == c.3
        };
        if !continues {
            links.push(c.0);
        }
    }
    (pieces.len(), links)
}

/// Piece graph of a trail is a path; of a ring, a cycle.
pub fn piece_graph_is(r: &Region, g: &Grid, cycle: bool) -> bool {
    let (k, links) = piece_graph(r, g);
    let mut deg = vec![0usize; k];
    for &(a, b) in &links {
        deg[a] += 1;
        deg[b] += 1;
    }
    if cycle {
        links.len() == k && deg.iter().all(|&d| d == 2)
    } else {
        links.len() + 1 == k && deg.iter().all(|&d| d <= 2)
    }
}

/// Faces of the segment arrangement inside `[0, n]^2`.
pub fn faces(n: i64, segs: &[Seg]) -> Vec<Region> {
    let covered: HashSet<UnitEdge> = segs.iter().flat_map(|s| s.unit_edges().collect::<Vec<_>>()).collect();
    let sq = Region::square(n).with_walls(covered.iter().copied());
    let mut fs = sq.components();
    fs.sort_by_key(|f| f.cells().next());
    fs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::build_grid;

    #[test]
    fn rectangle_and_l_shape_boundaries() {
        let r = Region::rect(6, 0, 3, 0, 2);
        assert_eq!(r.loops(), vec![vec![(3, 0), (3, 2), (0, 2), (0, 0)]]);
        assert_eq!(r.canonical(), vec![vec![(0, 0), (3, 0), (3, 2), (0, 2)]]);
        let l = Region::rect(6, 0, 4, 0, 1).union(&Region::rect(6, 0, 1, 0, 4));
        assert_eq!(l.corner_count(), 6);
        assert_eq!(l.holes(), 0);
    }

    #[test]
    fn annulus_has_one_hole_and_two_loops() {
        let outer = Region::rect(6, 1, 5, 1, 5);
        let ring = outer.restrict(|x, y| !(x >= 2 && x < 4 && y >= 2 && y < 4));
        assert_eq!(ring.holes(), 1);
        assert_eq!(ring.loops().len(), 2);
        // a slit from outside to the hole turns it into a trail
        let cut = ring.clone().with_walls([UnitEdge::vertical(3, 1)]);
        assert_eq!(cut.holes(), 0);
        assert_eq!(cut.loops().len(), 1);
        assert!(cut.is_connected());
    }

    #[test]
    fn pinched_cells_stay_separate_loops() {
        let r = Region::from_cells(4, [(0, 0), (1, 1)]);
        assert_eq!(r.components().len(), 2);
        assert_eq!(r.loops().len(), 2);
    }

    #[test]
    fn narrow_examples() {
        let g = build_grid(6, 0.5).unwrap();
        assert!(Region::rect(6, 0, 6, 0, 2).is_trail(&g));
        assert!(!Region::rect(6, 0, 6, 0, 4).is_trail(&g));
        let ring = Region::square(6).restrict(|x, y| !(x >= 1 && x < 5 && y >= 1 && y < 5));
        let s = ring.shape(&g);
        assert_eq!(s.kind, ShapeKind::Ring);
        assert!(piece_graph_is(&ring, &g, true));
        assert!(piece_graph_is(&Region::rect(6, 0, 6, 0, 2), &g, false));
    }

    #[test]
    fn faces_of_a_cross() {
        let n = 4;
        let segs = vec![
            Seg::new(true, 0, 0, 4),
            Seg::new(true, 4, 0, 4),
            Seg::new(false, 0, 0, 4),
            Seg::new(false, 4, 0, 4),
            Seg::new(true, 2, 0, 4),
            Seg::new(false, 1, 0, 2),
        ];
        let fs = faces(n, &segs);
        assert_eq!(fs.len(), 3);
        assert_eq!(fs.iter().map(|f| f.len()).sum::<usize>(), 16);
    }
}
