//! Outer boundary of a union of regions, repaired at pinch points.

use super::planar::{Label, PlanarMap};
use crate::error::{Error, Result};
use crate::geom::{orient, signed_area2, Point};
use std::collections::BTreeMap;

const MAX_REPAIRS: usize = 32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Traced {
    /// Counterclockwise loop; each point carries the label of the segment
    /// leaving it.
    pub ring: Vec<(Point, Label)>,
    /// Regions whose union the loop bounds, before holes are filled.
    pub regions: Vec<usize>,
    pub diagnostics: Vec<String>,
}

/// Directed boundary pieces of the region set, keeping it on the left.
fn boundary(map: &PlanarMap, inr: &[bool]) -> BTreeMap<Point, Vec<(Point, Label)>> {
    let mut out: BTreeMap<Point, Vec<(Point, Label)>> = BTreeMap::new();
    for p in &map.pieces {
        let l = p.left.as_ref().filter(|x| inr[x.0]);
        let r = p.right.as_ref().filter(|x| inr[x.0]);
        match (l, r) {
            (Some(l), None) => out.entry(p.a.clone()).or_default().push((p.b.clone(), l.1.clone())),
            (None, Some(r)) => out.entry(p.b.clone()).or_default().push((p.a.clone(), r.1.clone())),
            _ => {}
        }
    }
    out
}

/// Lowest-index region outside the set that touches `at`.
fn region_at(map: &PlanarMap, inr: &[bool], at: &Point) -> Option<usize> {
    map.pieces
        .iter()
        .filter(|p| &p.a == at || &p.b == at)
        .flat_map(|p| [p.left.as_ref(), p.right.as_ref()])
        .flatten()
        .map(|x| x.0)
        .filter(|&r| !inr[r])
        .min()
}

/// Boundary of the union of `set`; pinch points are removed by adding a
/// touching region, and of several loops the one of largest area is kept.
pub fn trace_regions(map: &PlanarMap, set: &[usize]) -> Result<Traced> {
    let mut inr = vec![false; map.regions.len()];
    for &r in set {
        inr[r] = true;
    }
    let mut diagnostics = Vec::new();
    for _ in 0..=MAX_REPAIRS {
        let out = boundary(map, &inr);
        if out.is_empty() {
            return Err(Error::DegenerateSeparator);
        }
        if let Some((p, _)) = out.iter().find(|(_, v)| v.len() > 1) {
            let Some(r) = region_at(map, &inr, p) else {
                return Err(Error::Structural(format!("pinch at {p:?} has no region to absorb")));
            };
            diagnostics.push(format!("absorbed region {r} at pinch point {p:?}"));
            inr[r] = true;
            continue;
        }
        let mut used: BTreeMap<&Point, bool> = out.keys().map(|k| (k, false)).collect();
        let mut loops: Vec<Vec<(Point, Label)>> = Vec::new();
        for start in out.keys() {
            if used[start] {
                continue;
            }
            let mut lp = Vec::new();
            let mut cur = start;
            while !used[cur] {
                used.insert(cur, true);
                let (next, label) = &out[cur][0];
                lp.push((cur.clone(), label.clone()));
                cur = out.get_key_value(next).map(|(k, _)| k).ok_or_else(|| {
                    Error::Structural(format!("region boundary is not closed at {next:?}"))
                })?;
            }
            if cur != start {
                return Err(Error::Structural("region boundary does not close into loops".into()));
            }
            loops.push(lp);
        }
        let area = |lp: &[(Point, Label)]| signed_area2(&lp.iter().map(|x| x.0.clone()).collect::<Vec<_>>());
        let best = (0..loops.len()).max_by(|&i, &j| area(&loops[i]).cmp(&area(&loops[j]))).unwrap();
        if !area(&loops[best]).is_positive() {
            return Err(Error::DegenerateSeparator);
        }
        if loops.len() > 1 {
            diagnostics.push(format!("kept the outer loop, discarded {} other loops", loops.len() - 1));
        }
        let regions = (0..inr.len()).filter(|&r| inr[r]).collect();
        return Ok(Traced { ring: loops.swap_remove(best), regions, diagnostics });
    }
    Err(Error::Structural(format!("pinch points remain after {MAX_REPAIRS} repairs")))
}

/// Drop repeated and collinear points of a closed loop and start it at its
/// smallest point.
pub fn canonical_ring(pts: &[Point]) -> Vec<Point> {
    let mut v: Vec<Point> = pts.to_vec();
    v.dedup();
    while v.len() > 1 && v.first() == v.last() {
        v.pop();
    }
    let mut changed = true;
    while changed && v.len() >= 3 {
        changed = false;
        let n = v.len();
        for i in 0..n {
            if orient(&v[(i + n - 1) % n], &v[i], &v[(i + 1) % n]) == 0 {
                v.remove(i);
                changed = true;
                break;
            }
        }
    }
    if let Some(i) = (0..v.len()).min_by(|&i, &j| v[i].cmp(&v[j])) {
        v.rotate_left(i);
    }
    v
}

/// Drop collinear interior points of an open polyline.
pub fn canonical_path(pts: &[Point]) -> Vec<Point> {
    let mut v: Vec<Point> = pts.to_vec();
    v.dedup();
    let mut i = 1;
    while i + 1 < v.len() {
        if orient(&v[i - 1], &v[i], &v[i + 1]) == 0 {
            v.remove(i);
            i = i.saturating_sub(1).max(1);
        } else {
            i += 1;
        }
    }
    v
}
