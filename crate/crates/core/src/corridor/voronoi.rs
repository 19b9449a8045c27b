//! L-infinity Voronoi regions of disjoint polygons and the frame, computed as
//! the exact minimization diagram of piecewise-linear distance functions.

use super::pl::{clip, clip_convex, DistFn, Kind, Lin};
use crate::error::{Error, Result};
use crate::geom::{is_convex, on_segment, orient, BBox, Id, Point, Rect, SegHit, WeightedPolygon};
use crate::num::Rat;
use std::collections::HashMap;

pub const FRAME: Id = Id::MAX;

/// One convex piece of a site (a polygon, a piece of a non-convex polygon,
/// or the frame).
#[derive(Clone, Debug)]
pub struct Atom {
    pub site: Id,
    pub f: DistFn,
    pub bbox: BBox,
}

pub struct Sites<'a> {
    pub polys: &'a [WeightedPolygon],
    pub frame: &'a Rect,
    pub atoms: Vec<Atom>,
    by_id: HashMap<Id, usize>,
}

/// Ear-clipping triangulation of a counterclockwise simple polygon.
pub fn triangulate(poly: &[Point]) -> Vec<Vec<Point>> {
    let mut idx: Vec<usize> = (0..poly.len()).collect();
    let mut out = Vec::new();
    while idx.len() > 3 {
        let n = idx.len();
        let mut cut = None;
        for k in 0..n {
            let (a, b, c) = (&poly[idx[(k + n - 1) % n]], &poly[idx[k]], &poly[idx[(k + 1) % n]]);
            if orient(a, b, c) <= 0 {
                continue;
            }
            let blocked = idx.iter().any(|&j| {
                let p = &poly[j];
                p != a && p != b && p != c && orient(a, b, p) >= 0 && orient(b, c, p) >= 0 && orient(c, a, p) >= 0
            });
            if !blocked {
                cut = Some(k);
                break;
            }
        }
        let k = cut.expect("simple polygon has an ear");
        out.push(vec![poly[idx[(k + n - 1) % n]].clone(), poly[idx[k]].clone(), poly[idx[(k + 1) % n]].clone()]);
        idx.remove(k);
    }
    out.push(idx.iter().map(|&i| poly[i].clone()).collect());
    out
}

impl<'a> Sites<'a> {
    pub fn new(polys: &'a [WeightedPolygon], frame: &'a Rect) -> Sites<'a> {
        let mut atoms = Vec::new();
        for p in polys {
            let pieces = if is_convex(&p.vertices) { vec![p.vertices.clone()] } else { triangulate(&p.vertices) };
            for piece in pieces {
                atoms.push(Atom { site: p.id, f: DistFn::convex(&piece, frame), bbox: BBox::of(&piece) });
            }
        }
        atoms.push(Atom { site: FRAME, f: DistFn::frame(frame), bbox: BBox::of(&frame.corners()) });
        let by_id = polys.iter().enumerate().map(|(i, p)| (p.id, i)).collect();
        Sites { polys, frame, atoms, by_id }
    }

    pub fn poly(&self, id: Id) -> &WeightedPolygon {
        &self.polys[self.by_id[&id]]
    }

    /// L-infinity distance from `p` to site `s` (to the frame boundary for FRAME).
    pub fn dist(&self, s: Id, p: &Point) -> Rat {
        self.atoms.iter().filter(|a| a.site == s).map(|a| a.f.eval(p)).min().expect("known site")
    }

    /// Boundary of a site traversed with the site on the right: clockwise
    /// for polygons, counterclockwise around the frame.
    pub fn loop_with_site_on_right(&self, s: Id) -> Vec<Point> {
        if s == FRAME {
            self.frame.corners()
        } else {
            let mut v = self.poly(s).vertices.clone();
            v.reverse();
            v
        }
    }

    /// Points where the square of half side `r` around `c` touches site
    /// `s`. For the frame these are perpendicular feet on the touched sides,
    /// or the corner when two adjacent sides are touched.
    pub fn contacts(&self, s: Id, c: &Point, r: &Rat) -> Result<Vec<Point>> {
        if s == FRAME {
            let f = self.frame;
            let sides = [
                (&c.x - &f.x1, Point::new(f.x1.clone(), c.y.clone())),
                (&f.x2 - &c.x, Point::new(f.x2.clone(), c.y.clone())),
                (&c.y - &f.y1, Point::new(c.x.clone(), f.y1.clone())),
                (&f.y2 - &c.y, Point::new(c.x.clone(), f.y2.clone())),
            ];
            let hit: Vec<usize> = (0..4).filter(|&k| &sides[k].0 == r).collect();
            // two adjacent sides: the contact set is connected through their corner
            if let [i, j] = hit[..] {
                if i < 2 && j >= 2 {
                    let x = if i == 0 { f.x1.clone() } else { f.x2.clone() };
                    let y = if j == 2 { f.y1.clone() } else { f.y2.clone() };
                    return Ok(vec![Point::new(x, y)]);
                }
            }
            return Ok(hit.into_iter().map(|k| sides[k].1.clone()).collect());
        }
        let sq = super::pl::square(c, r);
        let poly = &self.poly(s).vertices;
        let mut pts: Vec<Point> = Vec::new();
        let n = poly.len();
        for i in 0..n {
            for j in 0..4 {
                match crate::geom::seg_intersection(&poly[i], &poly[(i + 1) % n], &sq[j], &sq[(j + 1) % 4]) {
                    SegHit::None => {}
                    SegHit::Point(p) => pts.push(p),
                    SegHit::Overlap(..) => {
                        return Err(Error::GeneralPositionViolated(format!(
                            "polygon {s} touches the critical square at {c:?} along a segment"
                        )))
                    }
                }
            }
        }
        pts.sort();
        pts.dedup();
        Ok(pts)
    }

    /// The unique contact of site `s` with the square.
    pub fn contact(&self, s: Id, c: &Point, r: &Rat) -> Result<Point> {
        let mut pts = self.contacts(s, c, r)?;
        match pts.len() {
            1 => Ok(pts.pop().unwrap()),
            0 => Err(Error::Structural(format!("site {s} does not touch the square at {c:?} radius {r}"))),
            k => Err(Error::GeneralPositionViolated(format!("site {s} has {k} contacts with the square at {c:?}"))),
        }
    }
}

type Cell = (Vec<Point>, usize);

fn keep_against_min(cells: Vec<Cell>, own: &DistFn, other: &DistFn, own_wins: bool) -> Vec<Cell> {
    let mut out = Vec::new();
    'cells: for (mut poly, li) in cells {
        let l = &own.lins[li];
        for g in &other.lins {
            let h = g.sub(l);
            if h.is_constant() {
                if h.c.is_negative() || (h.c.is_zero() && !own_wins) {
                    continue 'cells;
                }
                continue;
            }
            poly = clip(&poly, &h);
            if poly.is_empty() {
                continue 'cells;
            }
        }
        out.push((poly, li));
    }
    out
}

fn keep_against_max(cells: Vec<Cell>, own: &DistFn, other: &DistFn, own_wins: bool) -> Vec<Cell> {
    let mut out = Vec::new();
    for (poly, li) in cells {
        let l = &own.lins[li];
        let diffs: Vec<Lin> = other.lins.iter().map(|g| g.sub(l)).collect();
        let whole = diffs.iter().any(|h| {
            if h.is_constant() {
                h.c.is_positive() || (h.c.is_zero() && own_wins)
            } else {
                poly.iter().all(|v| !h.eval(v).is_negative())
            }
        });
        if whole {
            out.push((poly, li));
            continue;
        }
        let identical = diffs.iter().any(|h| h.is_constant() && h.c.is_zero());
        let lost = !identical && poly.iter().all(|v| diffs.iter().all(|h| !h.eval(v).is_positive()));
        if lost {
            continue;
        }
        let bb = BBox::of(&poly);
        for (k, (cell, gi)) in other.cells.iter().enumerate() {
            if !other.cell_boxes[k].meets(&bb) {
                continue;
            }
            let h = &diffs[*gi];
            if h.is_constant() && (h.c.is_negative() || (h.c.is_zero() && !own_wins)) {
                continue;
            }
            let mut q = clip_convex(&poly, cell);
            if q.is_empty() {
                continue;
            }
            if !h.is_constant() {
                q = clip(&q, h);
            }
            if !q.is_empty() {
                out.push((q, li));
            }
        }
    }
    out
}

/// Voronoi cells of atom `i`: where its distance is no larger than every
/// other atom's (ties to the lower atom index).
pub fn region(sites: &Sites, i: usize) -> Vec<Cell> {
    let atoms = &sites.atoms;
    let own = &atoms[i];
    let mut cells: Vec<Cell> = own.f.cells.clone();
    let frame_idx = atoms.len() - 1;
    let mut order: Vec<(Rat, usize)> = (0..atoms.len())
        .filter(|&j| j != i && j != frame_idx)
        .map(|j| (own.bbox.linf_gap(&atoms[j].bbox), j))
        .collect();
    order.sort();
    let mut seq: Vec<usize> = Vec::with_capacity(atoms.len());
    if i != frame_idx {
        seq.push(frame_idx);
    }
    seq.extend(order.into_iter().map(|(_, j)| j));
    for j in seq {
        if cells.is_empty() {
            break;
        }
        let other = &atoms[j];
        let ub = cells
            .iter()
            .flat_map(|(poly, li)| poly.iter().map(move |v| own.f.lins[*li].eval(v)))
            .max()
            .unwrap();
        let bb = cells.iter().skip(1).fold(BBox::of(&cells[0].0), |b, (c, _)| b.union(&BBox::of(c)));
        let lb = match other.f.kind {
            Kind::Max => bb.linf_gap(&other.bbox),
            Kind::Min => {
                let f = sites.frame;
                (&bb.lo.x - &f.x1).min(&f.x2 - &bb.hi.x).min(&bb.lo.y - &f.y1).min(&f.y2 - &bb.hi.y)
            }
        };
        if lb >= ub {
            continue;
        }
        let own_wins = i < j;
        cells = match other.f.kind {
            Kind::Min => keep_against_min(cells, &own.f, &other.f, own_wins),
            Kind::Max => keep_against_max(cells, &own.f, &other.f, own_wins),
        };
    }
    cells
}

/// Elementary boundary piece between two cells.
#[derive(Clone, Debug)]
pub struct RawPiece {
    pub a: Point,
    pub b: Point,
    /// (site, atom) on the left of a -> b
    pub left: (Id, usize),
    pub right: (Id, usize),
    pub left_lin: usize,
    pub right_lin: usize,
}

struct Interval {
    t0: Rat,
    t1: Rat,
    atom: usize,
    lin: usize,
    /// +1 if the owning cell is on the left of the canonical direction
    sign: i32,
}

/// Cancel shared cell edges and split the rest into elementary pieces
/// labelled by the cells on either side. Pieces with a cell on only one
/// side (the frame's outline) are dropped.
pub fn boundary_pieces(sites: &Sites, regions: &[Vec<Cell>]) -> Vec<RawPiece> {
    type Key = (Rat, Rat, Rat);
    let mut lines: HashMap<Key, (Vec<Interval>, Vec<(Rat, Point)>)> = HashMap::new();
    for (atom, cells) in regions.iter().enumerate() {
        for (poly, lin) in cells {
            let n = poly.len();
            for k in 0..n {
                let (p, q) = (&poly[k], &poly[(k + 1) % n]);
                let mut la = &q.y - &p.y;
                let mut lb = &p.x - &q.x;
                let mut lc = -(&(&la * &p.x) + &(&lb * &p.y));
                let s = if !la.is_zero() { la.clone() } else { lb.clone() };
                la = la / &s;
                lb = lb / &s;
                lc = lc / &s;
                // canonical direction (-lb, la)
                let t = |r: &Point| &(&la * &r.y) - &(&lb * &r.x);
                let (tp, tq) = (t(p), t(q));
                let (sign, t0, t1) = if tp < tq { (1, tp.clone(), tq.clone()) } else { (-1, tq.clone(), tp.clone()) };
                let e = lines.entry((la.clone(), lb.clone(), lc)).or_default();
                e.0.push(Interval { t0, t1, atom, lin: *lin, sign });
                e.1.push((tp, p.clone()));
                e.1.push((tq, q.clone()));
            }
        }
    }
    let mut out = Vec::new();
    let mut keys: Vec<&Key> = lines.keys().collect();
    keys.sort();
    for key in keys {
        let (ivs, pts) = &lines[key];
        let mut pts = pts.clone();
        pts.sort_by(|a, b| a.0.cmp(&b.0));
        pts.dedup_by(|a, b| a.0 == b.0);
        for w in pts.windows(2) {
            let (ta, tb) = (&w[0].0, &w[1].0);
            let mut net: Vec<(Id, i32, usize, usize)> = Vec::new();
            let mut entries: Vec<(usize, usize, i32)> = Vec::new();
            for iv in ivs.iter().filter(|iv| &iv.t0 <= ta && tb <= &iv.t1) {
                entries.push((iv.atom, iv.lin, iv.sign));
                let site = sites.atoms[iv.atom].site;
                match net.iter_mut().find(|e| e.0 == site) {
                    Some(e) => e.1 += iv.sign,
                    None => net.push((site, iv.sign, iv.atom, iv.lin)),
                }
            }
            let pos: Vec<&(Id, i32, usize, usize)> = net.iter().filter(|e| e.1 > 0).collect();
            let neg: Vec<&(Id, i32, usize, usize)> = net.iter().filter(|e| e.1 < 0).collect();
            let pick = |site: Id, sign: i32| {
                entries.iter().find(|e| sites.atoms[e.0].site == site && e.2 == sign).map(|e| (e.0, e.1)).unwrap()
            };
            if pos.len() == 1 && neg.len() == 1 {
                let (la, ll) = pick(pos[0].0, 1);
                let (ra, rl) = pick(neg[0].0, -1);
                out.push(RawPiece {
                    a: w[0].1.clone(),
                    b: w[1].1.clone(),
                    left: (pos[0].0, la),
                    right: (neg[0].0, ra),
                    left_lin: ll,
                    right_lin: rl,
                });
            } else if pos.is_empty() && neg.is_empty() {
                // internal edge of one site: keep the pair of cells
                let l = entries.iter().find(|e| e.2 > 0);
                let r = entries.iter().find(|e| e.2 < 0);
                if let (Some(l), Some(r)) = (l, r) {
                    let site = sites.atoms[l.0].site;
                    out.push(RawPiece {
                        a: w[0].1.clone(),
                        b: w[1].1.clone(),
                        left: (site, l.0),
                        right: (site, r.0),
                        left_lin: l.1,
                        right_lin: r.1,
                    });
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub struct AxisPiece {
    pub a: Point,
    pub b: Point,
    /// Site on the left of a -> b; equal to `right` for tendrils inside one
    /// Voronoi region.
    pub left: Id,
    pub right: Id,
}

/// Keep Voronoi pieces and internal pieces whose two sides see different
/// contacts (frame side switches, reflex pockets of non-convex polygons).
pub fn axis_pieces(sites: &Sites, raw: Vec<RawPiece>) -> Vec<AxisPiece> {
    raw.into_iter()
        .filter(|p| {
            if p.left.0 != p.right.0 {
                return true;
            }
            if p.left.0 == FRAME {
                return p.left_lin != p.right_lin;
            }
            if p.left.1 == p.right.1 {
                return false;
            }
            let m = p.a.midpoint(&p.b);
            let r = sites.dist(p.left.0, &m);
            r.is_positive() && sites.contacts(p.left.0, &m, &r).map_or(true, |c| c.len() > 1)
        })
        .map(|p| AxisPiece { a: p.a, b: p.b, left: p.left.0, right: p.right.0 })
        .collect()
}

/// Region cells of every atom.
pub fn all_regions(sites: &Sites) -> Vec<Vec<Cell>> {
    crate::par::map_range(sites.atoms.len(), |i| region(sites, i))
}

/// Check the preconditions shared by the corridor operations.
pub fn validate(polys: &[WeightedPolygon], frame: &Rect) -> Result<()> {
    for p in polys {
        if !p.vertices.iter().all(|v| frame.contains_open(v)) {
            return Err(Error::OutsideFrame(p.id));
        }
        let n = p.vertices.len();
        for i in 0..n {
            let (a, b) = (&p.vertices[i], &p.vertices[(i + 1) % n]);
            if a.x == b.x || a.y == b.y {
                return Err(Error::GeneralPositionViolated(format!("polygon {} has an axis-parallel edge", p.id)));
            }
        }
    }
    let boxes: Vec<BBox> = polys.iter().map(|p| p.bbox()).collect();
    for i in 0..polys.len() {
        for j in i + 1..polys.len() {
            if !boxes[i].meets(&boxes[j]) {
                continue;
            }
            let (a, b) = (&polys[i].vertices, &polys[j].vertices);
            if crate::geom::interiors_intersect(a, b) {
                return Err(Error::InputsNotDisjoint(polys[i].id, polys[j].id));
            }
            if crate::geom::closures_intersect(a, b) {
                return Err(Error::GeneralPositionViolated(format!(
                    "polygons {} and {} touch",
                    polys[i].id, polys[j].id
                )));
            }
        }
    }
    Ok(())
}

/// `p` lies on the boundary of the frame rectangle.
pub fn on_frame(frame: &Rect, p: &Point) -> bool {
    let c = frame.corners();
    (0..4).any(|i| on_segment(p, &c[i], &c[(i + 1) % 4]))
}
