//! Linear functions, convex clipping and piecewise-linear L-infinity distance
//! functions of convex pieces and of the frame.

use crate::geom::{orient, BBox, Point, Rect};
use crate::num::Rat;

/// a*x + b*y + c
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lin {
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
}

impl Lin {
    pub fn eval(&self, p: &Point) -> Rat {
        &(&self.a * &p.x) + &(&(&self.b * &p.y) + &self.c)
    }

    pub fn sub(&self, o: &Lin) -> Lin {
        Lin { a: &self.a - &o.a, b: &self.b - &o.b, c: &self.c - &o.c }
    }

    pub fn is_constant(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Half-plane `{p : self(p) >= 0}` bounded by the line through a -> b
    /// with the region on the left.
    pub fn left_of(a: &Point, b: &Point) -> Lin {
        let (dx, dy) = b.sub(a);
        let na = -&dy;
        let nb = dx;
        let c = -(&(&na * &a.x) + &(&nb * &a.y));
        Lin { a: na, b: nb, c }
    }
}

/// Drop repeated and collinear vertices of a convex polygon.
fn tidy(mut pts: Vec<Point>) -> Vec<Point> {
    pts.dedup();
    while pts.len() > 1 && pts.first() == pts.last() {
        pts.pop();
    }
    loop {
        let n = pts.len();
        if n < 3 {
            return Vec::new();
        }
        let mut removed = false;
        for i in 0..n {
            if orient(&pts[(i + n - 1) % n], &pts[i], &pts[(i + 1) % n]) == 0 {
                pts.remove(i);
                removed = true;
                break;
            }
        }
        if !removed {
            return pts;
        }
    }
}

/// Clip a convex polygon to `{h >= 0}`; empty result when the remainder has
/// zero area.
pub fn clip(pts: &[Point], h: &Lin) -> Vec<Point> {
    let vals: Vec<Rat> = pts.iter().map(|p| h.eval(p)).collect();
    if vals.iter().all(|v| !v.is_negative()) {
        return pts.to_vec();
    }
    if vals.iter().all(|v| !v.is_positive()) {
        return Vec::new();
    }
    let n = pts.len();
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..n {
        let j = (i + 1) % n;
        let (vi, vj) = (&vals[i], &vals[j]);
        if !vi.is_negative() {
            out.push(pts[i].clone());
        }
        if (vi.is_negative() && vj.is_positive()) || (vi.is_positive() && vj.is_negative()) {
            let t = vi / &(vi - vj);
            out.push(pts[i].lerp(&pts[j], &t));
        }
    }
    tidy(out)
}

/// Intersection of two convex polygons (both counterclockwise).
pub fn clip_convex(p: &[Point], q: &[Point]) -> Vec<Point> {
    let mut cur = p.to_vec();
    let n = q.len();
    for i in 0..n {
        if cur.is_empty() {
            break;
        }
        cur = clip(&cur, &Lin::left_of(&q[i], &q[(i + 1) % n]));
    }
    cur
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    /// pointwise maximum of the pieces (distance to a convex piece)
    Max,
    /// pointwise minimum of the pieces (distance to the frame boundary)
    Min,
}

/// A distance function as max or min of linear pieces, together with the
/// linearity cells (clipped to the frame).
#[derive(Clone, Debug)]
pub struct DistFn {
    pub kind: Kind,
    pub lins: Vec<Lin>,
    /// `(cell polygon, piece index)`
    pub cells: Vec<(Vec<Point>, usize)>,
    pub cell_boxes: Vec<BBox>,
}

impl DistFn {
    pub fn eval(&self, p: &Point) -> Rat {
        let mut it = self.lins.iter().map(|l| l.eval(p));
        let first = it.next().expect("at least one piece");
        match self.kind {
            Kind::Max => it.fold(first, Rat::max),
            Kind::Min => it.fold(first, Rat::min),
        }
    }

    fn with_cells(kind: Kind, lins: Vec<Lin>, frame: &Rect) -> DistFn {
        let mut cells = Vec::new();
        for (i, li) in lins.iter().enumerate() {
            let mut poly = frame.corners();
            for (j, lj) in lins.iter().enumerate() {
                if i == j || poly.is_empty() {
                    continue;
                }
                let h = match kind {
                    Kind::Max => li.sub(lj),
                    Kind::Min => lj.sub(li),
                };
                if h.is_constant() {
                    // duplicate piece: the lower index owns the cell
                    if h.c.is_negative() || (h.c.is_zero() && j < i) {
                        poly.clear();
                    }
                    continue;
                }
                poly = clip(&poly, &h);
            }
            if !poly.is_empty() {
                cells.push((poly, i));
            }
        }
        let cell_boxes = cells.iter().map(|(c, _)| BBox::of(c)).collect();
        DistFn { kind, lins, cells, cell_boxes }
    }

    /// L-infinity distance to a convex polygon (counterclockwise), negative
    /// inside it.
    pub fn convex(poly: &[Point], frame: &Rect) -> DistFn {
        let n = poly.len();
        let mut normals: Vec<(Rat, Rat)> = Vec::new();
        for i in 0..n {
            let (dx, dy) = poly[(i + 1) % n].sub(&poly[i]);
            normals.push((dy, -dx));
        }
        for (ux, uy) in [(1, 0), (0, 1), (-1, 0), (0, -1)] {
            normals.push((Rat::int(ux), Rat::int(uy)));
        }
        let mut lins: Vec<Lin> = Vec::new();
        for (ux, uy) in normals {
            let h = poly.iter().map(|v| &(&ux * &v.x) + &(&uy * &v.y)).max().unwrap();
            let norm = &ux.abs() + &uy.abs();
            let l = Lin { a: &ux / &norm, b: &uy / &norm, c: -(h / &norm) };
            if !lins.contains(&l) {
                lins.push(l);
            }
        }
        DistFn::with_cells(Kind::Max, lins, frame)
    }

    /// Distance to the boundary of the frame, for points inside it.
    pub fn frame(frame: &Rect) -> DistFn {
        let one = Rat::one();
        let z = Rat::zero();
        let lins = vec![
            Lin { a: one.clone(), b: z.clone(), c: -&frame.x1 },
            Lin { a: -&one, b: z.clone(), c: frame.x2.clone() },
            Lin { a: z.clone(), b: one.clone(), c: -&frame.y1 },
            Lin { a: z, b: -&one, c: frame.y2.clone() },
        ];
        DistFn::with_cells(Kind::Min, lins, frame)
    }
}

/// Monotone-chain convex hull, counterclockwise, no collinear points.
pub fn convex_hull(mut pts: Vec<Point>) -> Vec<Point> {
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<Point> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && orient(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Point> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && orient(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Axis-parallel square of half side `r` around `c`, counterclockwise.
pub fn square(c: &Point, r: &Rat) -> Vec<Point> {
    vec![
        Point::new(&c.x - r, &c.y - r),
        Point::new(&c.x + r, &c.y - r),
        Point::new(&c.x + r, &c.y + r),
        Point::new(&c.x - r, &c.y + r),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{area, signed_area2};
    use proptest::prelude::*;

    fn brute_linf(p: &Point, poly: &[Point]) -> f64 {
        // sample the boundary densely; good to ~1e-3 for small coordinates
        let (px, py) = p.to_f64();
        let n = poly.len();
        let mut best = f64::INFINITY;
        for i in 0..n {
            let (ax, ay) = poly[i].to_f64();
            let (bx, by) = poly[(i + 1) % n].to_f64();
            for k in 0..=2000 {
                let t = k as f64 / 2000.0;
                let (x, y) = (ax + t * (bx - ax), ay + t * (by - ay));
                best = best.min((px - x).abs().max((py - y).abs()));
            }
        }
        best
    }

    #[test]
    fn clip_halves_square() {
        let sq = square(&Point::int(0, 0), &Rat::int(1));
        let h = Lin { a: Rat::one(), b: Rat::zero(), c: Rat::zero() };
        let half = clip(&sq, &h);
        assert_eq!(area(&half), Rat::int(2));
        assert!(signed_area2(&half).is_positive());
        let miss = Lin { a: Rat::one(), b: Rat::zero(), c: Rat::int(-1) };
        assert!(clip(&sq, &miss).is_empty());
    }

    #[test]
    fn frame_cells_tile() {
        let f = Rect::int(0, 10, 0, 6);
        let d = DistFn::frame(&f);
        let total: Rat = d.cells.iter().map(|(c, _)| area(c)).sum();
        assert_eq!(total, Rat::int(60));
        assert_eq!(d.eval(&Point::int(3, 2)), Rat::int(2));
    }

    proptest! {
        #[test]
        fn convex_distance_matches_sampling(px in -30i64..30, py in -30i64..30, a in 1i64..6, b in 1i64..6) {
            // sheared square with side vector (a, b)
            let poly = vec![Point::int(0, 0), Point::int(a, b), Point::int(a - b, a + b), Point::int(-b, a)];
            let f = Rect::int(-40, 40, -40, 40);
            let d = DistFn::convex(&poly, &f);
            let p = Point::int(px, py);
            let exact = d.eval(&p).to_f64();
            if crate::geom::locate(&p, &poly) == crate::geom::Loc::Outside {
                prop_assert!((exact - brute_linf(&p, &poly)).abs() < 0.02);
            } else {
                prop_assert!(exact <= 0.0);
            }
            let total: Rat = d.cells.iter().map(|(c, _)| area(c)).sum();
            prop_assert_eq!(total, Rat::int(6400));
        }
    }
}
