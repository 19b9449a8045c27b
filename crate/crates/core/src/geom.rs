//! Exact planar primitives. Polygons and rectangles are open sets, segments
//! are closed unless flagged otherwise.

use crate::error::{Error, Result};
use crate::num::{common_denominator, pow2_exceeding, Rat};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

pub type Id = u32;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Point {
    pub x: Rat,
    pub y: Rat,
}

impl std::fmt::Debug for Point {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Point {
    pub fn new(x: Rat, y: Rat) -> Point {
        Point { x, y }
    }

    pub fn int(x: i64, y: i64) -> Point {
        Point { x: Rat::int(x), y: Rat::int(y) }
    }

    pub fn add(&self, dx: &Rat, dy: &Rat) -> Point {
        Point { x: &self.x + dx, y: &self.y + dy }
    }

    pub fn sub(&self, o: &Point) -> (Rat, Rat) {
        (&self.x - &o.x, &self.y - &o.y)
    }

    pub fn linf(&self, o: &Point) -> Rat {
        let (dx, dy) = self.sub(o);
        dx.abs().max(dy.abs())
    }

    /// Point at parameter `t` on the segment from `self` to `o`.
    pub fn lerp(&self, o: &Point, t: &Rat) -> Point {
        Point { x: &self.x + &(t * &(&o.x - &self.x)), y: &self.y + &(t * &(&o.y - &self.y)) }
    }

    pub fn midpoint(&self, o: &Point) -> Point {
        let h = Rat::new(1, 2);
        Point { x: &(&self.x + &o.x) * &h, y: &(&self.y + &o.y) * &h }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }
}

pub fn cross(ax: &Rat, ay: &Rat, bx: &Rat, by: &Rat) -> Rat {
    ax * by - ay * bx
}

/// Sign of the turn a -> b -> c: 1 left, -1 right, 0 collinear.
pub fn orient(a: &Point, b: &Point, c: &Point) -> i32 {
    let (ux, uy) = b.sub(a);
    let (vx, vy) = c.sub(a);
    // compare instead of subtracting: saves one rational subtraction
    (&ux * &vy).cmp(&(&uy * &vx)) as i32
}

fn between(v: &Rat, a: &Rat, b: &Rat) -> bool {
    if a <= b {
        a <= v && v <= b
    } else {
        b <= v && v <= a
    }
}

/// `p` on the closed segment [a, b].
pub fn on_segment(p: &Point, a: &Point, b: &Point) -> bool {
    orient(a, b, p) == 0 && between(&p.x, &a.x, &b.x) && between(&p.y, &a.y, &b.y)
}

/// `p` in the relative interior of [a, b].
pub fn in_segment_interior(p: &Point, a: &Point, b: &Point) -> bool {
    on_segment(p, a, b) && p != a && p != b
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SegHit {
    None,
    Point(Point),
    Overlap(Point, Point),
}

/// Intersection of closed segments [a, b] and [c, d].
pub fn seg_intersection(a: &Point, b: &Point, c: &Point, d: &Point) -> SegHit {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if o1 == 0 && o2 == 0 {
        // collinear: intersect parameter ranges along the dominant axis
        let key = |p: &Point| if a.x != b.x { p.x.clone() } else { p.y.clone() };
        let (mut s0, mut s1) = (a.clone(), b.clone());
        if key(&s0) > key(&s1) {
            std::mem::swap(&mut s0, &mut s1);
        }
        let (mut t0, mut t1) = (c.clone(), d.clone());
        if key(&t0) > key(&t1) {
            std::mem::swap(&mut t0, &mut t1);
        }
        let lo = if key(&s0) >= key(&t0) { s0 } else { t0 };
        let hi = if key(&s1) <= key(&t1) { s1 } else { t1 };
        return match key(&lo).cmp(&key(&hi)) {
            Ordering::Less => SegHit::Overlap(lo, hi),
            Ordering::Equal => SegHit::Point(lo),
            Ordering::Greater => SegHit::None,
        };
    }
    if o1 * o2 <= 0 && o3 * o4 <= 0 {
        if o1 == 0 {
            return SegHit::Point(c.clone());
        }
        if o2 == 0 {
            return SegHit::Point(d.clone());
        }
        if o3 == 0 {
            return SegHit::Point(a.clone());
        }
        if o4 == 0 {
            return SegHit::Point(b.clone());
        }
        return SegHit::Point(line_intersection(a, b, c, d).expect("crossing segments are not parallel"));
    }
    SegHit::None
}

/// Intersection point of the lines through (a, b) and (c, d), if not parallel.
pub fn line_intersection(a: &Point, b: &Point, c: &Point, d: &Point) -> Option<Point> {
    let (rx, ry) = b.sub(a);
    let (sx, sy) = d.sub(c);
    let den = cross(&rx, &ry, &sx, &sy);
    if den.is_zero() {
        return None;
    }
    let (qx, qy) = c.sub(a);
    let t = cross(&qx, &qy, &sx, &sy) / den;
    Some(a.lerp(b, &t))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    Horizontal,
    Vertical,
    General,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
    /// Open segments exclude their endpoints.
    #[serde(default)]
    pub open: bool,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Segment {
        assert!(a != b, "degenerate segment");
        Segment { a, b, open: false }
    }

    pub fn open(a: Point, b: Point) -> Segment {
        assert!(a != b, "degenerate segment");
        Segment { a, b, open: true }
    }

    pub fn orientation(&self) -> Orientation {
        if self.a.y == self.b.y {
            Orientation::Horizontal
        } else if self.a.x == self.b.x {
            Orientation::Vertical
        } else {
            Orientation::General
        }
    }

    pub fn contains(&self, p: &Point) -> bool {
        if self.open {
            in_segment_interior(p, &self.a, &self.b)
        } else {
            on_segment(p, &self.a, &self.b)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rect {
    pub x1: Rat,
    pub x2: Rat,
    pub y1: Rat,
    pub y2: Rat,
    #[serde(default = "one")]
    pub weight: u64,
    #[serde(default = "yes")]
    pub open: bool,
}

fn one() -> u64 {
    1
}

fn yes() -> bool {
    true
}

impl Rect {
    pub fn new(x1: Rat, x2: Rat, y1: Rat, y2: Rat) -> Rect {
        assert!(x1 < x2 && y1 < y2, "empty rectangle");
        Rect { x1, x2, y1, y2, weight: 1, open: true }
    }

    pub fn int(x1: i64, x2: i64, y1: i64, y2: i64) -> Rect {
        Rect::new(Rat::int(x1), Rat::int(x2), Rat::int(y1), Rat::int(y2))
    }

    pub fn weighted(mut self, w: u64) -> Rect {
        self.weight = w;
        self
    }

    pub fn width(&self) -> Rat {
        &self.x2 - &self.x1
    }

    pub fn height(&self) -> Rat {
        &self.y2 - &self.y1
    }

    pub fn area(&self) -> Rat {
        self.width() * self.height()
    }

    /// Counterclockwise corner list starting at the lower-left corner.
    pub fn corners(&self) -> Vec<Point> {
        vec![
            Point::new(self.x1.clone(), self.y1.clone()),
            Point::new(self.x2.clone(), self.y1.clone()),
            Point::new(self.x2.clone(), self.y2.clone()),
            Point::new(self.x1.clone(), self.y2.clone()),
        ]
    }

    pub fn contains_open(&self, p: &Point) -> bool {
        self.x1 < p.x && p.x < self.x2 && self.y1 < p.y && p.y < self.y2
    }

    pub fn contains_closed(&self, p: &Point) -> bool {
        self.x1 <= p.x && p.x <= self.x2 && self.y1 <= p.y && p.y <= self.y2
    }

    /// Open rectangles share an interior point.
    pub fn overlaps(&self, o: &Rect) -> bool {
        self.x1 < o.x2 && o.x1 < self.x2 && self.y1 < o.y2 && o.y1 < self.y2
    }

    /// Parameter interval of the line through `s` inside the open rectangle,
    /// as `(t0, t1)` with `t0 < t1`, or `None` if the line misses it.
    fn line_chord(&self, s: &Segment) -> Option<(Rat, Rat)> {
        let (dx, dy) = s.b.sub(&s.a);
        let mut lo: Option<Rat> = None;
        let mut hi: Option<Rat> = None;
        for (d, p, a, b) in [(&dx, &s.a.x, &self.x1, &self.x2), (&dy, &s.a.y, &self.y1, &self.y2)] {
            if d.is_zero() {
                if !(a < p && p < b) {
                    return None;
                }
                continue;
            }
            let ta = (a - p) / d;
            let tb = (b - p) / d;
            let (t0, t1) = if ta < tb { (ta, tb) } else { (tb, ta) };
            lo = Some(match lo {
                Some(l) => l.max(t0),
                None => t0,
            });
            hi = Some(match hi {
                Some(h) => h.min(t1),
                None => t1,
            });
        }
        let (lo, hi) = (lo?, hi?);
        if lo < hi {
            Some((lo, hi))
        } else {
            None
        }
    }
}

/// `r \ s` has exactly two connected components.
pub fn cuts(s: &Segment, r: &Rect) -> bool {
    match r.line_chord(s) {
        Some((t0, t1)) => {
            if s.open {
                t0 > Rat::zero() && t1 < Rat::one()
            } else {
                t0 >= Rat::zero() && t1 <= Rat::one()
            }
        }
        None => false,
    }
}

/// `s` touches the closure of `r` without entering `r`, and its spanning
/// line cuts `r`.
pub fn hits_rect(s: &Segment, r: &Rect) -> bool {
    match r.line_chord(s) {
        Some((t0, t1)) => {
            let (z, o) = (Rat::zero(), Rat::one());
            let enters = t0 < o && t1 > z;
            let touches = t0 <= o && t1 >= z;
            touches && !enters && (!s.open || (t0 != o && t1 != z))
        }
        None => false,
    }
}

/// `s` and `t` are perpendicular axis-parallel segments and an endpoint of
/// `s` lies in the relative interior of `t`.
pub fn hits_segment(s: &Segment, t: &Segment) -> bool {
    let perpendicular = matches!(
        (s.orientation(), t.orientation()),
        (Orientation::Horizontal, Orientation::Vertical) | (Orientation::Vertical, Orientation::Horizontal)
    );
    perpendicular && (in_segment_interior(&s.a, &t.a, &t.b) || in_segment_interior(&s.b, &t.a, &t.b))
}

/// Twice the signed area (positive for counterclockwise).
pub fn signed_area2(pts: &[Point]) -> Rat {
    let n = pts.len();
    let mut acc = Rat::zero();
    for i in 0..n {
        let p = &pts[i];
        let q = &pts[(i + 1) % n];
        acc += &p.x * &q.y - &q.x * &p.y;
    }
    acc
}

pub fn area(pts: &[Point]) -> Rat {
    signed_area2(pts).abs() * Rat::new(1, 2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Loc {
    Inside,
    Outside,
    /// On the boundary, with the index of an edge containing the point.
    Boundary(usize),
}

/// Exact point location by winding number.
pub fn locate(p: &Point, poly: &[Point]) -> Loc {
    let n = poly.len();
    let mut wind = 0i32;
    for i in 0..n {
        let a = &poly[i];
        let b = &poly[(i + 1) % n];
        if on_segment(p, a, b) {
            return Loc::Boundary(i);
        }
        if a.y <= p.y {
            if b.y > p.y && orient(a, b, p) > 0 {
                wind += 1;
            }
        } else if b.y <= p.y && orient(a, b, p) < 0 {
            wind -= 1;
        }
    }
    if wind != 0 {
        Loc::Inside
    } else {
        Loc::Outside
    }
}

/// Simple (non-self-intersecting, non-degenerate) closed polygon.
pub fn is_simple(pts: &[Point]) -> bool {
    let n = pts.len();
    if n < 3 || signed_area2(pts).is_zero() {
        return false;
    }
    for i in 0..n {
        if pts[i] == pts[(i + 1) % n] {
            return false;
        }
    }
    for i in 0..n {
        let (a, b) = (&pts[i], &pts[(i + 1) % n]);
        for j in i + 1..n {
            let (c, d) = (&pts[j], &pts[(j + 1) % n]);
            let adjacent_next = j == i + 1;
            let adjacent_prev = i == 0 && j == n - 1;
            match seg_intersection(a, b, c, d) {
                SegHit::None => {}
                SegHit::Overlap(..) => return false,
                SegHit::Point(p) => {
                    let shared = if adjacent_next {
                        Some(b)
                    } else if adjacent_prev {
                        Some(a)
                    } else {
                        None
                    };
                    if shared != Some(&p) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

pub fn is_convex(pts: &[Point]) -> bool {
    let n = pts.len();
    let s = signed_area2(pts).signum();
    (0..n).all(|i| orient(&pts[i], &pts[(i + 1) % n], &pts[(i + 2) % n]) * s >= 0)
}

/// Vertex list in counterclockwise order.
pub fn ccw(mut pts: Vec<Point>) -> Vec<Point> {
    if signed_area2(&pts).is_negative() {
        pts.reverse();
    }
    pts
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeightedPolygon {
    pub id: Id,
    pub vertices: Vec<Point>,
    pub weight: u64,
}

impl WeightedPolygon {
    /// Normalizes to counterclockwise order; checks simplicity and weight.
    pub fn new(id: Id, vertices: Vec<Point>, weight: u64) -> Result<WeightedPolygon> {
        if weight == 0 {
            return Err(Error::InvalidInput(format!("polygon {id} has zero weight")));
        }
        if !is_simple(&vertices) {
            return Err(Error::InvalidInput(format!("polygon {id} is not simple")));
        }
        Ok(WeightedPolygon { id, vertices: ccw(vertices), weight })
    }

    pub fn from_rect(id: Id, r: &Rect) -> WeightedPolygon {
        WeightedPolygon { id, vertices: r.corners(), weight: r.weight }
    }

    pub fn area(&self) -> Rat {
        area(&self.vertices)
    }

    pub fn bbox(&self) -> BBox {
        BBox::of(&self.vertices)
    }

    /// Leftmost vertex, ties broken by smaller y.
    pub fn leftmost(&self) -> &Point {
        self.vertices.iter().min().expect("non-empty polygon")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BBox {
    pub lo: Point,
    pub hi: Point,
}

impl BBox {
    pub fn of(pts: &[Point]) -> BBox {
        let mut lo = pts[0].clone();
        let mut hi = pts[0].clone();
        for p in &pts[1..] {
            if p.x < lo.x {
                lo.x = p.x.clone();
            }
            if p.y < lo.y {
                lo.y = p.y.clone();
            }
            if p.x > hi.x {
                hi.x = p.x.clone();
            }
            if p.y > hi.y {
                hi.y = p.y.clone();
            }
        }
        BBox { lo, hi }
    }

    pub fn union(&self, o: &BBox) -> BBox {
        BBox {
            lo: Point::new(self.lo.x.clone().min(o.lo.x.clone()), self.lo.y.clone().min(o.lo.y.clone())),
            hi: Point::new(self.hi.x.clone().max(o.hi.x.clone()), self.hi.y.clone().max(o.hi.y.clone())),
        }
    }

    /// Closed boxes intersect.
    pub fn meets(&self, o: &BBox) -> bool {
        self.lo.x <= o.hi.x && o.lo.x <= self.hi.x && self.lo.y <= o.hi.y && o.lo.y <= self.hi.y
    }

    /// L-infinity distance between the boxes (0 when they meet).
    pub fn linf_gap(&self, o: &BBox) -> Rat {
        let z = Rat::zero();
        let gx = (&o.lo.x - &self.hi.x).max(&self.lo.x - &o.hi.x).max(z.clone());
        let gy = (&o.lo.y - &self.hi.y).max(&self.lo.y - &o.hi.y).max(z);
        gx.max(gy)
    }
}

/// Parameters in (0, 1) where edge [p, q] meets the boundary of `poly`.
fn split_params(p: &Point, q: &Point, poly: &[Point]) -> Vec<Rat> {
    let (dx, dy) = q.sub(p);
    let use_x = !dx.is_zero();
    let param = |r: &Point| if use_x { (&r.x - &p.x) / &dx } else { (&r.y - &p.y) / &dy };
    let mut ts = vec![Rat::zero(), Rat::one()];
    let n = poly.len();
    for i in 0..n {
        let (c, d) = (&poly[i], &poly[(i + 1) % n]);
        match seg_intersection(p, q, c, d) {
            SegHit::None => {}
            SegHit::Point(r) => ts.push(param(&r)),
            SegHit::Overlap(r, s) => {
                ts.push(param(&r));
                ts.push(param(&s));
            }
        }
    }
    ts.sort();
    ts.dedup();
    ts
}

/// How the open region of `a` meets the open interior and the exterior of
/// region `b` (both simple polygons, any orientation).
pub fn region_relation(a: &[Point], b: &[Point]) -> (bool, bool) {
    let a_ccw = signed_area2(a).is_positive();
    let b_ccw = signed_area2(b).is_positive();
    let mut meets_int = false;
    let mut meets_ext = false;
    let n = a.len();
    for i in 0..n {
        let (p, q) = (&a[i], &a[(i + 1) % n]);
        let ts = split_params(p, q, b);
        for w in ts.windows(2) {
            let m = p.lerp(q, &((&w[0] + &w[1]) * Rat::new(1, 2)));
            match locate(&m, b) {
                Loc::Inside => meets_int = true,
                Loc::Outside => meets_ext = true,
                Loc::Boundary(j) => {
                    let (c, d) = (&b[j], &b[(j + 1) % b.len()]);
                    let (ux, uy) = q.sub(p);
                    let (vx, vy) = d.sub(c);
                    let same = (&ux * &vx + &uy * &vy).is_positive();
                    // interiors lie on the same side iff traversal senses agree
                    if same == (a_ccw == b_ccw) {
                        meets_int = true;
                    } else {
                        meets_ext = true;
                    }
                }
            }
            if meets_int && meets_ext {
                return (true, true);
            }
        }
    }
    // b's boundary passing through a's interior puts a on both sides
    let m = b.len();
    for j in 0..m {
        let (p, q) = (&b[j], &b[(j + 1) % m]);
        let ts = split_params(p, q, a);
        for w in ts.windows(2) {
            let mid = p.lerp(q, &((&w[0] + &w[1]) * Rat::new(1, 2)));
            if locate(&mid, a) == Loc::Inside {
                return (true, true);
            }
        }
    }
    (meets_int, meets_ext)
}

/// Open-set intersection of two simple polygons.
pub fn interiors_intersect(a: &[Point], b: &[Point]) -> bool {
    if !BBox::of(a).meets(&BBox::of(b)) {
        return false;
    }
    region_relation(a, b).0
}

/// Closed-set intersection of two simple polygons.
pub fn closures_intersect(a: &[Point], b: &[Point]) -> bool {
    if !BBox::of(a).meets(&BBox::of(b)) {
        return false;
    }
    let (n, m) = (a.len(), b.len());
    for i in 0..n {
        for j in 0..m {
            if seg_intersection(&a[i], &a[(i + 1) % n], &b[j], &b[(j + 1) % m]) != SegHit::None {
                return true;
            }
        }
    }
    locate(&a[0], b) != Loc::Outside || locate(&b[0], a) != Loc::Outside
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub inside: Vec<Id>,
    pub outside: Vec<Id>,
    pub intersecting: Vec<Id>,
}

/// Partition polygons by a closed simple polygon `gamma`: inside polygons lie
/// in its closure, outside ones avoid its interior, the rest cross it.
pub fn classify_against(polys: &[WeightedPolygon], gamma: &[Point]) -> Result<Classification> {
    if gamma.len() < 3 || signed_area2(gamma).is_zero() {
        return Err(Error::DegenerateSeparator);
    }
    let gb = BBox::of(gamma);
    let mut out = Classification::default();
    for p in polys {
        if !p.bbox().meets(&gb) {
            out.outside.push(p.id);
            continue;
        }
        match region_relation(&p.vertices, gamma) {
            (true, true) => out.intersecting.push(p.id),
            (true, false) => out.inside.push(p.id),
            _ => out.outside.push(p.id),
        }
    }
    Ok(out)
}

/// The fixed invertible map (x, y) -> (x + y/K, y + x/K).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Shear {
    pub k: Rat,
}

impl Shear {
    pub fn apply(&self, p: &Point) -> Point {
        Point::new(&p.x + &(&p.y / &self.k), &p.y + &(&p.x / &self.k))
    }

    pub fn invert(&self, p: &Point) -> Point {
        let det = Rat::one() - (&self.k * &self.k).recip();
        let x = (&p.x - &(&p.y / &self.k)) / &det;
        let y = (&p.y - &(&p.x / &self.k)) / &det;
        Point::new(x, y)
    }
}

/// Shear every polygon so that no edge is axis-parallel and vertex
/// coordinates are pairwise distinct (up to shared points).
pub fn general_position(polys: &[WeightedPolygon]) -> (Vec<WeightedPolygon>, Shear) {
    let coords: Vec<&Rat> = polys.iter().flat_map(|p| p.vertices.iter().flat_map(|v| [&v.x, &v.y])).collect();
    let den = Rat::from_bigint(common_denominator(coords.iter().copied()));
    let (lo, hi) = coords.iter().fold((None::<&Rat>, None::<&Rat>), |(lo, hi), c| {
        (Some(lo.map_or(*c, |l| if *c < l { *c } else { l })), Some(hi.map_or(*c, |h| if *c > h { *c } else { h })))
    });
    let range = match (lo, hi) {
        (Some(l), Some(h)) => (h - l) * &den,
        _ => Rat::zero(),
    };
    let size = Rat::from(coords.len().max(1));
    let bound = Rat::int(4) * range.max(Rat::one()) * size;
    let k = Rat::pow2(pow2_exceeding(&bound)) * &den;
    let shear = Shear { k };
    let out = polys
        .iter()
        .map(|p| WeightedPolygon {
            id: p.id,
            vertices: ccw(p.vertices.iter().map(|v| shear.apply(v)).collect()),
            weight: p.weight,
        })
        .collect();
    (out, shear)
}

/// No axis-parallel edge, and no two distinct vertices share an x or a y.
pub fn in_general_position(polys: &[WeightedPolygon]) -> bool {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for p in polys {
        let n = p.vertices.len();
        for i in 0..n {
            let (a, b) = (&p.vertices[i], &p.vertices[(i + 1) % n]);
            if a.x == b.x || a.y == b.y {
                return false;
            }
            xs.push(a.x.clone());
            ys.push(a.y.clone());
        }
    }
    let mut pts: Vec<Point> = polys.iter().flat_map(|p| p.vertices.iter().cloned()).collect();
    pts.sort();
    pts.dedup();
    xs.sort();
    ys.sort();
    let distinct = |v: &Vec<Rat>| v.windows(2).filter(|w| w[0] == w[1]).count();
    // shared vertices between touching polygons are the only allowed repeats
    let repeats = polys.iter().map(|p| p.vertices.len()).sum::<usize>() - pts.len();
    distinct(&xs) == repeats && distinct(&ys) == repeats
}

/// A closed-form frame: an axis-parallel rectangle enclosing everything.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Frame {
    pub square: Rect,
}

impl Frame {
    pub fn square(n: i64) -> Frame {
        Frame { square: Rect::int(0, n, 0, n) }
    }

    pub fn corners(&self) -> Vec<Point> {
        self.square.corners()
    }

    pub fn area(&self) -> Rat {
        self.square.area()
    }

    pub fn strictly_contains(&self, p: &WeightedPolygon) -> bool {
        p.vertices.iter().all(|v| self.square.contains_open(v))
    }

    /// Frame enclosing the image of this frame under a shear.
    pub fn sheared(&self, s: &Shear) -> Frame {
        let img: Vec<Point> = self.corners().iter().map(|c| s.apply(c)).collect();
        let b = BBox::of(&img);
        Frame { square: Rect::new(b.lo.x, b.hi.x, b.lo.y, b.hi.y) }
    }
}
