//! L-infinity medial axis of disjoint polygons inside a frame, its reduction
//! to the Voronoi boundary, and the corridor decomposition built from the
//! spokes of its vertices.

pub mod pl;
pub mod voronoi;

use crate::error::{Error, Result};
use crate::geom::{interiors_intersect, locate, on_segment, BBox, Loc, signed_area2, Id, Point, Rect, WeightedPolygon};
use crate::num::Rat;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap};
pub use voronoi::{AxisPiece, Sites, FRAME};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriticalSquare {
    pub center: Point,
    pub radius: Rat,
    /// `(site, contact)`, sorted by site; FRAME stands for the frame.
    pub contacts: Vec<(Id, Point)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MedialAxis {
    pub pieces: Vec<AxisPiece>,
}

impl MedialAxis {
    pub fn degrees(&self) -> BTreeMap<Point, usize> {
        let mut d = BTreeMap::new();
        for p in &self.pieces {
            *d.entry(p.a.clone()).or_insert(0) += 1;
            *d.entry(p.b.clone()).or_insert(0) += 1;
        }
        d
    }

    /// Nodes of degree other than two.
    pub fn vertices(&self) -> Vec<(Point, usize)> {
        self.degrees().into_iter().filter(|(_, d)| *d != 2).collect()
    }

    /// Pieces oriented from the smaller endpoint, merged across degree-two
    /// nodes along the same line and site pair, and sorted.
    pub fn canonical(&self) -> Vec<AxisPiece> {
        let deg = self.degrees();
        let mut groups: BTreeMap<(Rat, Rat, Rat, Id, Id), Vec<AxisPiece>> = BTreeMap::new();
        for p in &self.pieces {
            let q = if p.a <= p.b {
                p.clone()
            } else {
                AxisPiece { a: p.b.clone(), b: p.a.clone(), left: p.right, right: p.left }
            };
            let (la, lb, lc) = line_key(&q.a, &q.b);
            groups.entry((la, lb, lc, q.left, q.right)).or_default().push(q);
        }
        let mut out = Vec::new();
        for (_, mut g) in groups {
            g.sort();
            let mut cur: Option<AxisPiece> = None;
            for p in g {
                cur = match cur {
                    Some(mut c) if c.b == p.a && deg[&p.a] == 2 => {
                        c.b = p.b;
                        Some(c)
                    }
                    Some(c) => {
                        out.push(c);
                        Some(p)
                    }
                    None => Some(p),
                };
            }
            out.extend(cur);
        }
        out.sort();
        out
    }

    /// One segment per line: `x1 y1 x2 y2 tag`.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for p in &self.pieces {
            let tag = if p.left == p.right { "tendril".to_string() } else { format!("bisector:{}|{}", site_name(p.left), site_name(p.right)) };
            s.push_str(&seg_line(&p.a, &p.b, &tag));
        }
        s
    }
}

fn site_name(s: Id) -> String {
    if s == FRAME {
        "frame".into()
    } else {
        s.to_string()
    }
}

fn seg_line(a: &Point, b: &Point, tag: &str) -> String {
    let (x1, y1) = a.to_f64();
    let (x2, y2) = b.to_f64();
    format!("{x1} {y1} {x2} {y2} {tag}\n")
}

fn line_key(p: &Point, q: &Point) -> (Rat, Rat, Rat) {
    let la = &q.y - &p.y;
    let lb = &p.x - &q.x;
    let lc = -(&(&la * &p.x) + &(&lb * &p.y));
    let s = if !la.is_zero() { la.clone() } else { lb.clone() };
    (la / &s, lb / &s, lc / &s)
}

/// The full L-infinity medial axis: Voronoi boundary plus the tendrils that
/// end at frame corners or reflex pockets.
pub fn medial_axis(sample: &[WeightedPolygon], frame: &Rect) -> Result<MedialAxis> {
    voronoi::validate(sample, frame)?;
    let sites = Sites::new(sample, frame);
    Ok(axis_of(&sites))
}

fn axis_of(sites: &Sites) -> MedialAxis {
    let regions = voronoi::all_regions(sites);
    let raw = voronoi::boundary_pieces(sites, &regions);
    MedialAxis { pieces: voronoi::axis_pieces(sites, raw) }
}

/// Largest empty square centered at `p` and all its contacts.
pub fn critical_square(sample: &[WeightedPolygon], frame: &Rect, p: &Point) -> Result<CriticalSquare> {
    let sites = Sites::new(sample, frame);
    critical_square_in(&sites, p)
}

fn critical_square_in(sites: &Sites, p: &Point) -> Result<CriticalSquare> {
    let mut ids: Vec<Id> = sites.polys.iter().map(|q| q.id).collect();
    ids.push(FRAME);
    let d: Vec<(Id, Rat)> = ids.iter().map(|&s| (s, sites.dist(s, p))).collect();
    let r = d.iter().map(|x| x.1.clone()).min().unwrap();
    let mut contacts = Vec::new();
    for (s, ds) in d {
        if ds == r {
            contacts.extend(sites.contacts(s, p, &r)?.into_iter().map(|c| (s, c)));
        }
    }
    contacts.sort();
    Ok(CriticalSquare { center: p.clone(), radius: r, contacts })
}

/// Remove degree-one nodes (and their pieces) until none remain, in
/// coordinate order.
pub fn reduce(axis: &MedialAxis) -> MedialAxis {
    let mut inc: BTreeMap<Point, Vec<usize>> = BTreeMap::new();
    for (i, p) in axis.pieces.iter().enumerate() {
        inc.entry(p.a.clone()).or_default().push(i);
        inc.entry(p.b.clone()).or_default().push(i);
    }
    let mut alive = vec![true; axis.pieces.len()];
    let mut queue: BTreeSet<Point> = inc.iter().filter(|(_, v)| v.len() == 1).map(|(k, _)| k.clone()).collect();
    while let Some(node) = queue.pop_first() {
        let Some(list) = inc.get(&node) else { continue };
        let live: Vec<usize> = list.iter().copied().filter(|&i| alive[i]).collect();
        if live.len() != 1 {
            continue;
        }
        let i = live[0];
        alive[i] = false;
        let p = &axis.pieces[i];
        let other = if p.a == node { &p.b } else { &p.a };
        let deg = inc[other].iter().filter(|&&j| alive[j]).count();
        if deg == 1 {
            queue.insert(other.clone());
        }
    }
    MedialAxis { pieces: axis.pieces.iter().zip(alive).filter(|(_, a)| *a).map(|(p, _)| p.clone()).collect() }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Spoke {
    pub from: Point,
    pub to: Point,
    pub site: Id,
}

/// Identifies a corridor across decompositions of different samples: the
/// two sites and the endpoints of its Voronoi edge, `from < to`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CorridorKey {
    pub left: Id,
    pub right: Id,
    pub from: Option<Point>,
    pub to: Option<Point>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Corridor {
    pub key: CorridorKey,
    /// Counterclockwise outer boundary.
    pub boundary: Vec<Point>,
    /// Inner boundary of an annulus corridor.
    pub hole: Option<Vec<Point>>,
    /// Chain on the right site of the edge, in edge direction.
    pub floor: Vec<Point>,
    /// Chain on the left site, against edge direction.
    pub ceiling: Vec<Point>,
    pub spokes: Vec<Spoke>,
    /// Polygons among the sites at the two edge endpoints, sorted.
    pub defining_set: Vec<Id>,
    /// The Voronoi edge with its radius at each breakpoint.
    pub edge: Vec<(Point, Rat)>,
    pub conflict_list: Vec<Id>,
}

impl Corridor {
    pub fn area(&self) -> Rat {
        let outer = signed_area2(&self.boundary).abs();
        let inner = self.hole.as_ref().map_or(Rat::zero(), |h| signed_area2(h).abs());
        (outer - inner) / Rat::int(2)
    }

    /// Same corridor: equal key and boundary.
    pub fn same_as(&self, o: &Corridor) -> bool {
        self.key == o.key && self.boundary == o.boundary && self.hole == o.hole
    }

    /// Union of the critical squares along the edge as convex pieces.
    pub fn swept_squares(&self) -> Vec<Vec<Point>> {
        if self.edge.len() == 1 {
            let (p, r) = &self.edge[0];
            return vec![pl::square(p, r)];
        }
        self.edge
            .windows(2)
            .map(|w| {
                let mut pts = pl::square(&w[0].0, &w[0].1);
                pts.extend(pl::square(&w[1].0, &w[1].1));
                pl::convex_hull(pts)
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorridorDecomposition {
    pub corridors: Vec<Corridor>,
    pub source_sample: Vec<Id>,
    pub frame: Rect,
    /// Critical squares of the degree-three-or-more vertices.
    pub vertices: Vec<CriticalSquare>,
    pub axis: MedialAxis,
}

impl CorridorDecomposition {
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for (i, c) in self.corridors.iter().enumerate() {
            let b = &c.boundary;
            for k in 0..b.len() {
                s.push_str(&seg_line(&b[k], &b[(k + 1) % b.len()], &format!("corridor:{i}")));
            }
            if let Some(h) = &c.hole {
                for k in 0..h.len() {
                    s.push_str(&seg_line(&h[k], &h[(k + 1) % h.len()], &format!("hole:{i}")));
                }
            }
            for sp in &c.spokes {
                s.push_str(&seg_line(&sp.from, &sp.to, &format!("spoke:{}", site_name(sp.site))));
            }
        }
        s
    }

    pub fn find(&self, key: &CorridorKey) -> Option<&Corridor> {
        self.corridors.iter().find(|c| &c.key == key)
    }
}

/// Position of `p` on a closed polyline: edge index and distance from the
/// edge start, with `p` in `[L_i, L_i+1)`.
pub(crate) fn locate_on_loop(lp: &[Point], p: &Point) -> Option<(usize, Rat)> {
    let n = lp.len();
    (0..n).find_map(|i| {
        let (a, b) = (&lp[i], &lp[(i + 1) % n]);
        (on_segment(p, a, b) && p != b).then(|| (i, p.linf(a)))
    })
}

/// Walk along the loop from `s` to `e`; the whole loop when `full` and
/// `s == e`.
pub(crate) fn walk(lp: &[Point], s: &Point, e: &Point, full: bool) -> Result<Vec<Point>> {
    let miss = || Error::Structural(format!("contact {s:?} or {e:?} is not on its site boundary"));
    let (i, ps) = locate_on_loop(lp, s).ok_or_else(miss)?;
    let (j, pe) = locate_on_loop(lp, e).ok_or_else(miss)?;
    let mut out = vec![s.clone()];
    if !(i == j && ps <= pe && !(full && s == e)) {
        let n = lp.len();
        let mut k = i;
        loop {
            k = (k + 1) % n;
            out.push(lp[k].clone());
            if k == j {
                break;
            }
        }
    }
    out.push(e.clone());
    out.dedup();
    Ok(out)
}

fn close_ring(mut v: Vec<Point>) -> Vec<Point> {
    v.dedup();
    while v.len() > 1 && v.first() == v.last() {
        v.pop();
    }
    v
}

struct Edge {
    from: usize,
    to: usize,
    pts: Vec<Point>,
    left: Id,
    right: Id,
}

/// Trace maximal chains between nodes of degree at least three; loops with
/// no such node come back with `from == to == usize::MAX`.
fn trace(axis: &MedialAxis) -> Result<(Vec<Point>, Vec<Edge>)> {
    let mut inc: BTreeMap<Point, Vec<usize>> = BTreeMap::new();
    for (i, p) in axis.pieces.iter().enumerate() {
        inc.entry(p.a.clone()).or_default().push(i);
        inc.entry(p.b.clone()).or_default().push(i);
    }
    let verts: Vec<Point> = inc.iter().filter(|(_, v)| v.len() >= 3).map(|(k, _)| k.clone()).collect();
    let vidx: HashMap<&Point, usize> = verts.iter().enumerate().map(|(i, p)| (p, i)).collect();
    if let Some((p, _)) = inc.iter().find(|(_, v)| v.len() == 1) {
        return Err(Error::Structural(format!("reduced axis has a dangling node at {p:?}")));
    }
    let mut used = vec![false; axis.pieces.len()];
    let mut edges = Vec::new();
    let run = |start: &Point, first: usize, used: &mut Vec<bool>| -> Result<Edge> {
        let mut pts = vec![start.clone()];
        let mut cur = start.clone();
        let mut piece = first;
        let mut sides: Option<(Id, Id)> = None;
        loop {
            used[piece] = true;
            let p = &axis.pieces[piece];
            let (next, lr) = if p.a == cur { (p.b.clone(), (p.left, p.right)) } else { (p.a.clone(), (p.right, p.left)) };
            match sides {
                None => sides = Some(lr),
                Some(s) if s != lr => {
                    return Err(Error::GeneralPositionViolated(format!("site pair changes at degree-two node {cur:?}")))
                }
                _ => {}
            }
            pts.push(next.clone());
            cur = next;
            if vidx.contains_key(&cur) || &cur == start {
                break;
            }
            let l = &inc[&cur];
            piece = if l[0] == piece { l[1] } else { l[0] };
            if used[piece] {
                break;
            }
        }
        let (left, right) = sides.unwrap();
        let from = vidx.get(start).copied().unwrap_or(usize::MAX);
        let to = vidx.get(&cur).copied().unwrap_or(usize::MAX);
        Ok(Edge { from, to, pts, left, right })
    };
    for v in &verts {
        for &first in &inc[v] {
            if !used[first] {
                edges.push(run(v, first, &mut used)?);
            }
        }
    }
    for i in 0..axis.pieces.len() {
        if !used[i] {
            let start = axis.pieces[i].a.clone();
            edges.push(run(&start, i, &mut used)?);
        }
    }
    Ok((verts, edges))
}

/// The edge together with the two spokes to a shared contact `c` encloses
/// polygon `s`, so the chain on `s` is its whole boundary.
fn edge_wraps(sites: &Sites, edge: &[Point], s: Id, c: &Point) -> bool {
    if s == FRAME {
        return false;
    }
    let tri = &voronoi::triangulate(&sites.poly(s).vertices)[0];
    let third = Rat::new(1, 3);
    let inner = Point::new(
        &(&(&tri[0].x + &tri[1].x) + &tri[2].x) * &third,
        &(&(&tri[0].y + &tri[1].y) + &tri[2].y) * &third,
    );
    let mut ring = edge.to_vec();
    ring.push(c.clone());
    let ring = close_ring(ring);
    ring.len() >= 3 && locate(&inner, &ring) == Loc::Inside
}

/// Corridor decomposition of the frame minus the sample polygons.
pub fn build_corridors(sample: &[WeightedPolygon], frame: &Rect) -> Result<CorridorDecomposition> {
    voronoi::validate(sample, frame)?;
    if sample.is_empty() {
        let key = CorridorKey { left: FRAME, right: FRAME, from: None, to: None };
        let whole = Corridor {
            key,
            boundary: frame.corners(),
            hole: None,
            floor: Vec::new(),
            ceiling: frame.corners(),
            spokes: Vec::new(),
            defining_set: Vec::new(),
            edge: Vec::new(),
            conflict_list: Vec::new(),
        };
        return Ok(CorridorDecomposition {
            corridors: vec![whole],
            source_sample: Vec::new(),
            frame: frame.clone(),
            vertices: Vec::new(),
            axis: MedialAxis::default(),
        });
    }
    let sites = Sites::new(sample, frame);
    let axis = reduce(&axis_of(&sites));
    let (verts, edges) = trace(&axis)?;
    let mut squares = Vec::with_capacity(verts.len());
    for v in &verts {
        let sq = critical_square_in(&sites, v)?;
        if sq.contacts.len() < 3 || sq.contacts.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::GeneralPositionViolated(format!("axis vertex {v:?} has contacts {:?}", sq.contacts)));
        }
        squares.push(sq);
    }
    let contact = |vi: usize, s: Id| -> Result<Point> {
        squares[vi]
            .contacts
            .iter()
            .find(|c| c.0 == s)
            .map(|c| c.1.clone())
            .ok_or_else(|| Error::Structural(format!("site {} missing at vertex {:?}", site_name(s), verts[vi])))
    };
    let mut corridors = Vec::new();
    for e in &edges {
        let radii: Vec<(Point, Rat)> = e.pts.iter().map(|p| (p.clone(), sites.dist(e.left, p))).collect();
        if e.from == usize::MAX {
            if sample.len() != 1 {
                return Err(Error::GeneralPositionViolated("Voronoi loop without vertices among several polygons".into()));
            }
            let poly = &sample[0];
            corridors.push(Corridor {
                key: CorridorKey { left: e.left.min(e.right), right: e.left.max(e.right), from: None, to: None },
                boundary: frame.corners(),
                hole: Some(poly.vertices.clone()),
                floor: poly.vertices.clone(),
                ceiling: frame.corners(),
                spokes: Vec::new(),
                defining_set: vec![poly.id],
                edge: radii,
                conflict_list: Vec::new(),
            });
            continue;
        }
        let (v1, v2) = (e.from, e.to);
        let (a, b) = (e.left, e.right);
        let (a1, b1, a2, b2) = (contact(v1, a)?, contact(v1, b)?, contact(v2, a)?, contact(v2, b)?);
        let floor = walk(&sites.loop_with_site_on_right(b), &b1, &b2, edge_wraps(&sites, &e.pts, b, &b1))?;
        let ceiling = walk(&sites.loop_with_site_on_right(a), &a2, &a1, edge_wraps(&sites, &e.pts, a, &a1))?;
        let mut boundary = vec![verts[v1].clone()];
        boundary.extend(floor.iter().cloned());
        boundary.push(verts[v2].clone());
        boundary.extend(ceiling.iter().cloned());
        let boundary = close_ring(boundary);
        let spokes = vec![
            Spoke { from: verts[v1].clone(), to: b1.clone(), site: b },
            Spoke { from: verts[v2].clone(), to: b2.clone(), site: b },
            Spoke { from: verts[v2].clone(), to: a2.clone(), site: a },
            Spoke { from: verts[v1].clone(), to: a1.clone(), site: a },
        ];
        let mut defining: Vec<Id> = squares[v1]
            .contacts
            .iter()
            .chain(squares[v2].contacts.iter())
            .map(|c| c.0)
            .filter(|&s| s != FRAME)
            .collect();
        defining.sort_unstable();
        defining.dedup();
        let key = if verts[v1] <= verts[v2] {
            CorridorKey { left: a, right: b, from: Some(verts[v1].clone()), to: Some(verts[v2].clone()) }
        } else {
            CorridorKey { left: b, right: a, from: Some(verts[v2].clone()), to: Some(verts[v1].clone()) }
        };
        corridors.push(Corridor {
            key,
            boundary,
            hole: None,
            floor,
            ceiling,
            spokes,
            defining_set: defining,
            edge: radii,
            conflict_list: Vec::new(),
        });
    }
    corridors.sort_by(|x, y| x.key.cmp(&y.key));
    let mut source_sample: Vec<Id> = sample.iter().map(|p| p.id).collect();
    source_sample.sort_unstable();
    Ok(CorridorDecomposition { corridors, source_sample, frame: frame.clone(), vertices: squares, axis })
}

/// Precomputed conflict test for one corridor: σ kills the corridor when it
/// enters an empty square along the Voronoi edge or the corridor itself.
pub struct ConflictTest<'a> {
    c: &'a Corridor,
    squares: Vec<(Vec<Point>, BBox)>,
    bbox: BBox,
}

impl<'a> ConflictTest<'a> {
    pub fn new(c: &'a Corridor) -> ConflictTest<'a> {
        let squares: Vec<(Vec<Point>, BBox)> = c
            .swept_squares()
            .into_iter()
            .map(|q| {
                let b = BBox::of(&q);
                (q, b)
            })
            .collect();
        let bbox = squares.iter().fold(BBox::of(&c.boundary), |b, (_, q)| b.union(q));
        ConflictTest { c, squares, bbox }
    }

    pub fn conflicts(&self, sigma: &WeightedPolygon) -> bool {
        if self.c.defining_set.contains(&sigma.id) {
            return false;
        }
        if self.c.hole.is_some() {
            // an annulus is the whole frame outside one polygon
            return true;
        }
        let sb = sigma.bbox();
        if !sb.meets(&self.bbox) {
            return false;
        }
        let v = &sigma.vertices;
        self.squares.iter().any(|(q, b)| b.meets(&sb) && interiors_intersect(v, q)) || interiors_intersect(v, &self.c.boundary)
    }
}

pub fn conflicts(c: &Corridor, sigma: &WeightedPolygon) -> bool {
    ConflictTest::new(c).conflicts(sigma)
}

/// Ids of the polygons of `universe` in conflict with `c`, sorted.
pub fn conflict_list(c: &Corridor, universe: &[WeightedPolygon]) -> Vec<Id> {
    let t = ConflictTest::new(c);
    let mut out: Vec<Id> = universe.iter().filter(|s| t.conflicts(s)).map(|s| s.id).collect();
    out.sort_unstable();
    out
}

/// Conflict by definition: σ conflicts unless the corridor survives in the
/// decomposition of its defining set plus σ.
pub fn conflicts_by_rebuild(c: &Corridor, sigma: &WeightedPolygon, universe: &[WeightedPolygon], frame: &Rect) -> Result<bool> {
    if c.defining_set.contains(&sigma.id) {
        return Ok(false);
    }
    let mut local: Vec<WeightedPolygon> =
        universe.iter().filter(|p| c.defining_set.contains(&p.id)).cloned().collect();
    local.push(sigma.clone());
    let cd = build_corridors(&local, frame)?;
    Ok(!cd.corridors.iter().any(|d| d.same_as(c)))
}

#[cfg(test)]
mod tests;
