//! Seeded instance generators.

use crate::error::{Error, Result};
use crate::num::Rat;
use crate::geom::{closures_intersect, in_general_position, is_convex, BBox, Id, Point, Rect, WeightedPolygon};
use crate::corridor::pl::convex_hull as pl_hull;
use crate::rng::{child, rng};
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    /// Tilted squares with integer side vector (a, b), a != b, both nonzero.
    Squares,
    /// Convex hulls of a few random lattice points.
    Convex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Weights {
    Equal,
    Uniform { lo: u64, hi: u64 },
}

impl Weights {
    pub fn draw<R: Rng>(&self, r: &mut R) -> u64 {
        match *self {
            Weights::Equal => 1,
            Weights::Uniform { lo, hi } => r.gen_range(lo..=hi),
        }
    }
}

const ATTEMPTS_PER_POLYGON: usize = 2000;

fn draw_shape<R: Rng>(r: &mut R, shape: Shape, size: i64, g: i64, pt: &impl Fn(i64, i64) -> Point) -> Vec<Point> {
    match shape {
        Shape::Squares => {
            let a = r.gen_range(1..=size);
            let b = r.gen_range(1..=size);
            if a == b {
                return Vec::new();
            }
            let (x, y) = (r.gen_range(1..g), r.gen_range(1..g));
            vec![pt(x, y), pt(x + a, y + b), pt(x + a - b, y + a + b), pt(x - b, y + a)]
        }
        Shape::Convex => {
            let (x, y) = (r.gen_range(1..g), r.gen_range(1..g));
            let k = r.gen_range(3..=6);
            let pts = (0..k).map(|_| pt(x + r.gen_range(0..=size), y + r.gen_range(0..=size))).collect();
            pl_hull(pts)
        }
    }
}

/// `m` convex polygons with integer coordinates strictly inside `[0, n]^2`
/// that may overlap; side length up to `size`.
pub fn overlapping_polygons(m: usize, n: i64, size: i64, seed: u64, shape: Shape, weights: Weights) -> Result<Vec<WeightedPolygon>> {
    if n < 4 || size < 2 {
        return Err(Error::InvalidInput(format!("frame {n} and size {size} too small")));
    }
    let mut r = rng(child(seed, 1));
    let frame = Rect::int(0, n, 0, n);
    let mut out = Vec::with_capacity(m);
    let mut attempts = 0usize;
    while out.len() < m {
        attempts += 1;
        if attempts > ATTEMPTS_PER_POLYGON * m.max(1) {
            return Err(Error::InvalidInput(format!("placed {} of {m} polygons in [0,{n}]^2", out.len())));
        }
        let verts = draw_shape(&mut r, shape, size, n, &Point::int);
        if verts.len() < 3 || !is_convex(&verts) || !verts.iter().all(|v| frame.contains_open(v)) {
            continue;
        }
        let w = weights.draw(&mut r);
        if let Ok(p) = WeightedPolygon::new(out.len() as Id, verts, w) {
            out.push(p);
        }
    }
    Ok(out)
}

/// `m` pairwise disjoint (non-touching) polygons strictly inside `[0, n]^2`,
/// in general position: no axis-parallel edge and no shared coordinates.
/// Coordinates are integers, or multiples of 1/2^k when `n < 8m`.
pub fn disjoint_polygons(m: usize, n: i64, seed: u64, shape: Shape, weights: Weights) -> Result<Vec<WeightedPolygon>> {
    // distinct coordinates need about 4m grid lines per axis: refine the grid
    // by a power of two when the frame is too coarse
    let mut d = 1i64;
    while n * d < 8 * m as i64 {
        d *= 2;
    }
    let g = n * d;
    let size = ((g as f64) / (3.0 * (m.max(1) as f64).sqrt())).clamp(2.0, (g / 4).max(2) as f64) as i64;
    let pt = |x: i64, y: i64| Point::new(Rat::new(x as i128, d as i128), Rat::new(y as i128, d as i128));
    let mut r = rng(child(seed, 0));
    let mut out: Vec<WeightedPolygon> = Vec::with_capacity(m);
    let mut boxes: Vec<BBox> = Vec::with_capacity(m);
    let mut used_x = std::collections::HashSet::new();
    let mut used_y = std::collections::HashSet::new();
    let mut attempts = 0usize;
    while out.len() < m {
        attempts += 1;
        if attempts > ATTEMPTS_PER_POLYGON * m.max(1) {
            let covered: f64 = out.iter().map(|p| p.area().to_f64()).sum();
            return Err(Error::InvalidInput(format!(
                "placed {} of {m} polygons in [0,{n}]^2 after {attempts} attempts (covered area fraction {:.3})",
                out.len(),
                covered / (n * n) as f64
            )));
        }
        let verts = draw_shape(&mut r, shape, size, g, &pt);
        if verts.len() < 3 || !is_convex(&verts) {
            continue;
        }
        let id = out.len() as Id;
        let w = weights.draw(&mut r);
        let Ok(p) = WeightedPolygon::new(id, verts, w) else { continue };
        let frame = Rect::int(0, n, 0, n);
        if !p.vertices.iter().all(|v| frame.contains_open(v)) || !in_general_position(std::slice::from_ref(&p)) {
            continue;
        }
        if p.vertices.iter().any(|v| used_x.contains(&v.x) || used_y.contains(&v.y)) {
            continue;
        }
        let bb = p.bbox();
        if out.iter().zip(&boxes).any(|(q, qb)| qb.meets(&bb) && closures_intersect(&q.vertices, &p.vertices)) {
            continue;
        }
        for v in &p.vertices {
            used_x.insert(v.x.clone());
            used_y.insert(v.y.clone());
        }
        boxes.push(bb);
        out.push(p);
    }
    Ok(out)
}
