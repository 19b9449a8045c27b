//! Segment partitions of the square around an independent set of blocks.

use crate::grid::{Grid, Item, Seg};
use crate::region::{faces, piece_graph_is, Region, ShapeKind};
use geomis_core::{Error, Result};
use serde::{Deserialize, Serialize};

pub fn frame(n: i64) -> Vec<Seg> {
    vec![Seg::new(false, 0, 0, n), Seg::new(true, n, 0, n), Seg::new(false, n, 0, n), Seg::new(true, 0, 0, n)]
}

/// Open intervals of the line `at` (vertical when `vertical`) covered by
/// items.
fn forbidden(items: &[Item], vertical: bool, at: i64) -> Vec<(i64, i64)> {
    items
        .iter()
        .filter_map(|r| {
            if vertical {
                (r.x1 < at && at < r.x2).then_some((r.y1, r.y2))
            } else {
                (r.y1 < at && at < r.y2).then_some((r.x1, r.x2))
            }
        })
        .collect()
}

/// Parameters where perpendicular segments cross the line in their interior.
fn stoppers<'a>(segs: impl IntoIterator<Item = &'a Seg>, vertical: bool, at: i64) -> Vec<i64> {
    segs.into_iter().filter(|s| s.vertical != vertical && s.lo < at && at < s.hi).map(|s| s.at).collect()
}

/// Largest `[lo, hi]` on the line through `t0` that stays out of the
/// forbidden intervals and does not pass a stopper. When `t0` is itself a
/// stopper the segment ends there, on the side given by `up`.
fn max_free(n: i64, forb: &[(i64, i64)], stops: &[i64], t0: i64, up: bool) -> Option<(i64, i64)> {
    if forb.iter().any(|&(a, b)| a < t0 && t0 < b) {
        return None;
    }
    let mut hi = n;
    let mut lo = 0;
    for &(a, b) in forb {
        if a >= t0 {
            hi = hi.min(a);
        }
        if b <= t0 {
            lo = lo.max(b);
        }
    }
    for &s in stops {
        if s > t0 {
            hi = hi.min(s);
        }
        if s < t0 {
            lo = lo.max(s);
        }
        if s == t0 {
            if up {
                lo = t0;
            } else {
                hi = t0;
            }
        }
    }
    Some((lo, hi))
}

/// The initial segments: the frame, then per cell edge the admissible
/// segments with smallest and largest offset and the ones reaching
/// furthest into the cell; vertical segments first, then horizontal.
pub fn construct_x(g: &Grid, blocks: &[Item]) -> Vec<Seg> {
    let n = g.n;
    let mut x = frame(n);
    for vertical in [true, false] {
        for j in 0..g.cells_per_side {
            for i in 0..g.cells_per_side {
                // (cell range along the candidate lines, cell range across them)
                let (along, across) = if vertical { ((i * g.big, (i + 1) * g.big), (j * g.big, (j + 1) * g.big)) } else { ((j * g.big, (j + 1) * g.big), (i * g.big, (i + 1) * g.big)) };
                for (edge, up) in [(across.0, true), (across.1, false)] {
                    let mut adm: Vec<(i64, Seg)> = Vec::new();
                    for c in along.0..=along.1 {
                        if c == 0 || c == n {
                            continue;
                        }
                        let forb = forbidden(blocks, vertical, c);
                        let stops = stoppers(&x, vertical, c);
                        let Some((lo, hi)) = max_free(n, &forb, &stops, edge, up) else { continue };
                        let into = if up { hi > edge } else { lo < edge };
                        if !into || hi - lo <= g.big {
                            continue;
                        }
                        let reach = hi.min(across.1) - lo.max(across.0);
                        adm.push((reach, Seg::new(vertical, c, lo, hi)));
                    }
                    if adm.is_empty() {
                        continue;
                    }
                    let best = adm.iter().map(|a| a.0).max().unwrap();
                    let reach: Vec<&Seg> = adm.iter().filter(|a| a.0 == best).map(|a| &a.1).collect();
                    for s in [adm[0].1, adm[adm.len() - 1].1, *reach[0], *reach[reach.len() - 1]] {
                        if !x.contains(&s) {
                            x.push(s);
                        }
                    }
                }
            }
        }
    }
    x
}

/// A point is attached when a perpendicular segment contains it.
fn attached(p: (i64, i64), s: &Seg, segs: &[Seg]) -> bool {
    segs.iter().any(|t| t.vertical != s.vertical && t.contains(p))
}

/// The block whose long edge stops segment `s` at its endpoint `p`.
fn stopping_block(s: &Seg, p: (i64, i64), blocks: &[Item]) -> Option<Item> {
    let at_hi = s.point(s.hi) == p;
    blocks
        .iter()
        .find(|b| {
            if s.vertical {
                b.x1 < s.at && s.at < b.x2 && if at_hi { b.y1 == p.1 } else { b.y2 == p.1 }
            } else {
                b.y1 < s.at && s.at < b.y2 && if at_hi { b.x1 == p.0 } else { b.x2 == p.0 }
            }
        })
        .copied()
}

/// Direction along the block's long side: toward the end lying outside the
/// grid cell of `p`, else toward the farther end.
fn along_block(g: &Grid, b: &Item, p: (i64, i64)) -> bool {
    let (lo, hi, t) = if b.horizontal() { (b.x1, b.x2, p.0) } else { (b.y1, b.y2, p.1) };
    if t % g.big != 0 {
        let c0 = t.div_euclid(g.big) * g.big;
        let (out_lo, out_hi) = (lo < c0, hi > c0 + g.big);
        if out_hi != out_lo {
            return out_hi;
        }
    }
    hi - t >= t - lo
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Partition {
    pub n: i64,
    pub x: Vec<Seg>,
    pub y: Vec<Seg>,
    pub shortcuts: Vec<Seg>,
    /// Y segments replaced by longer collinear ones.
    pub replaced: usize,
    pub longest_walk: usize,
    pub max_walk: usize,
    /// Construction steps that fell outside the expected cases.
    pub anomalies: Vec<String>,
}

impl Partition {
    pub fn segments(&self) -> Vec<Seg> {
        self.x.iter().chain(&self.y).copied().collect()
    }
}

/// Walk budget `ceil(64 / (eps * delta^2))` before a shortcut is taken.
pub fn walk_budget(g: &Grid, eps: f64) -> usize {
    let k = g.cells_per_side as f64;
    (64.0 * k * k / eps).ceil() as usize
}

/// `X` followed by the walks that attach every loose endpoint.
pub fn build_partition(g: &Grid, blocks: &[Item], eps: f64, max_walk: Option<usize>) -> Result<Partition> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidInput(format!("eps = {eps} must lie in (0, 1)")));
    }
    for b in blocks {
        if !b.is_block(g) || !b.inside_square(g.n) {
            return Err(Error::InvalidInput(format!("item {} is not a delta-large block inside the square", b.id)));
        }
    }
    if !crate::grid::pairwise_disjoint(blocks) {
        return Err(Error::InvalidInput("reference blocks overlap".into()));
    }
    let x = construct_x(g, blocks);
    let mut p = Partition { n: g.n, x, max_walk: max_walk.unwrap_or_else(|| walk_budget(g, eps)), ..Default::default() };
    construct_y(g, blocks, &mut p);
    Ok(p)
}

fn construct_y(g: &Grid, blocks: &[Item], part: &mut Partition) {
    let n = g.n;
    let mut loose: Vec<((i64, i64), usize)> = Vec::new();
    for (k, s) in part.x.iter().enumerate().skip(4) {
        for p in s.endpoints() {
            if !attached(p, s, &part.x) {
                loose.push((p, k));
            }
        }
    }
    loose.sort();
    for (p0, k) in loose {
        let s0 = part.x[k];
        let all = part.segments();
        if !attached(p0, &s0, &all) {
            walk_from(g, n, blocks, part, s0, p0);
        }
    }
}

enum Outcome {
    Done,
    Continue(Item),
    Stuck(String),
}

fn walk_from(g: &Grid, n: i64, blocks: &[Item], part: &mut Partition, s0: Seg, p0: (i64, i64)) {
    let Some(mut b) = stopping_block(&s0, p0, blocks) else {
        part.anomalies.push(format!("loose endpoint {p0:?} not on a block"));
        return;
    };
    let mut path: Vec<Seg> = Vec::new();
    let mut pts = vec![p0];
    let mut prev = s0;
    let mut p = p0;
    for _ in 0..part.max_walk {
        let vertical = !prev.vertical;
        let at = if vertical { p.0 } else { p.1 };
        let t0 = if vertical { p.1 } else { p.0 };
        let forb = forbidden(blocks, vertical, at);
        let existing = part.segments();
        let stops = stoppers(existing.iter().chain(&path), vertical, at);
        let forward = along_block(g, &b, p);
        let Some((lo, hi)) = max_free(n, &forb, &stops, t0, forward) else {
            part.anomalies.push(format!("walk from {p0:?} entered a block"));
            return;
        };
        let t1 = if forward { hi } else { lo };
        if t1 == t0 {
            part.anomalies.push(format!("walk from {p0:?} stuck at {p:?}"));
            return;
        }
        let si = Seg::new(vertical, at, t0, t1);
        let q = si.point(t1);
        path.push(si);
        part.longest_walk = part.longest_walk.max(path.len());
        match step_outcome(blocks, part, &path, si, q) {
            Outcome::Done => {
                commit(part, path);
                return;
            }
            Outcome::Continue(nb) => {
                b = nb;
                prev = si;
                p = q;
                pts.push(q);
            }
            Outcome::Stuck(msg) => {
                part.anomalies.push(msg);
                return;
            }
        }
    }
    shortcut(g, blocks, part, path, &pts);
}

fn step_outcome(blocks: &[Item], part: &Partition, path: &[Seg], si: Seg, q: (i64, i64)) -> Outcome {
    let existing = part.segments();
    let before = &path[..path.len() - 1];
    if attached(q, &si, &existing) || attached(q, &si, before) {
        return Outcome::Done;
    }
    // joining a collinear segment whose span covers the endpoint
    let joins = |t: &Seg| t.vertical == si.vertical && t.at == si.at && t.lo.max(si.lo) < t.hi.min(si.hi) && t.contains(q);
    if existing.iter().any(joins) || before.iter().any(joins) {
        return Outcome::Done;
    }
    match stopping_block(&si, q, blocks) {
        Some(nb) => Outcome::Continue(nb),
        None => Outcome::Stuck(format!("walk segment {si:?} ends at {q:?} without a block")),
    }
}

/// Adds walk segments to `Y`, fusing collinear overlapping segments.
fn commit(part: &mut Partition, path: Vec<Seg>) {
    for s in path {
        let mut cur = s;
        loop {
            let overlaps = |t: &Seg| t.vertical == cur.vertical && t.at == cur.at && t.lo.max(cur.lo) < t.hi.min(cur.hi);
            if let Some(k) = part.y.iter().position(overlaps) {
                let t = part.y.remove(k);
                cur = Seg::new(cur.vertical, cur.at, cur.lo.min(t.lo), cur.hi.max(t.hi));
                part.replaced += 1;
            } else if let Some(k) = part.x.iter().position(overlaps) {
                let t = part.x[k];
                part.anomalies.push(format!("walk segment {cur:?} overlaps initial segment {t:?}"));
                part.x[k] = Seg::new(cur.vertical, cur.at, cur.lo.min(t.lo), cur.hi.max(t.hi));
                break;
            } else {
                part.y.push(cur);
                break;
            }
        }
    }
}

/// Ends an overlong walk with a piece of a grid-cell edge between the walk
/// and the existing segments, of least cut weight.
fn shortcut(g: &Grid, blocks: &[Item], part: &mut Partition, path: Vec<Seg>, pts: &[(i64, i64)]) {
    let existing = part.segments();
    // (weight, piece, path index, anchor on that path segment)
    let mut best: Option<(u64, Seg, usize, (i64, i64))> = None;
    for vertical in [true, false] {
        for line in 0..=g.cells_per_side {
            let at = line * g.big;
            for cell in 0..g.cells_per_side {
                let (a, b) = (cell * g.big, (cell + 1) * g.big);
                let edge = Seg::new(vertical, at, a, b);
                // (parameter, path index if on the walk)
                let mut anchors: Vec<(i64, Option<usize>)> = Vec::new();
                for (k, s) in path.iter().enumerate() {
                    if s.vertical != vertical && s.lo <= at && at <= s.hi && a <= s.at && s.at <= b {
                        anchors.push((s.at, Some(k)));
                    }
                }
                for s in &existing {
                    if s.vertical != vertical && s.lo <= at && at <= s.hi && a <= s.at && s.at <= b {
                        anchors.push((s.at, None));
                    }
                }
                anchors.sort();
                for w in anchors.windows(2) {
                    let ((t1, i1), (t2, i2)) = (w[0], w[1]);
                    if t1 == t2 || (i1.is_none() && i2.is_none()) {
                        continue;
                    }
                    let piece = Seg::new(vertical, at, t1, t2);
                    if existing.iter().chain(&path).any(|s| s.crosses(&piece)) {
                        continue;
                    }
                    let (k, t) = match (i1, i2) {
                        (Some(x), Some(y)) if y > x => (y, t2),
                        (Some(x), Some(_)) => (x, t1),
                        (Some(x), None) => (x, t1),
                        (None, Some(y)) => (y, t2),
                        (None, None) => unreachable!(),
                    };
                    let weight: u64 = blocks.iter().filter(|bl| piece.intersects_item(bl)).map(|bl| bl.weight).sum();
                    let cand = (weight, piece, k, edge.point(t));
                    if best.as_ref().is_none_or(|bst| (cand.0, cand.1) < (bst.0, bst.1)) {
                        best = Some(cand);
                    }
                }
            }
        }
    }
    let Some((_, piece, k, anchor)) = best else {
        part.anomalies.push("no shortcut available".into());
        return;
    };
    let mut kept: Vec<Seg> = path[..k].to_vec();
    let clipped = Seg::between(pts[k], anchor);
    if !clipped.is_empty() {
        kept.push(clipped);
    }
    kept.push(piece);
    part.shortcuts.push(piece);
    commit(part, kept);
}

/// Violations of: no two segments cross, and every endpoint lies on a
/// perpendicular segment.
pub fn nicely_connected(segs: &[Seg]) -> Vec<String> {
    let mut out = Vec::new();
    for i in 0..segs.len() {
        for j in i + 1..segs.len() {
            if segs[i].crosses(&segs[j]) {
                out.push(format!("segments {:?} and {:?} cross", segs[i], segs[j]));
            }
        }
        for p in segs[i].endpoints() {
            if !attached(p, &segs[i], segs) {
                out.push(format!("endpoint {p:?} of {:?} is loose", segs[i]));
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FaceReport {
    pub kind: ShapeKind,
    pub cells: usize,
    pub corners: usize,
    pub holes: i64,
    pub reference_blocks: usize,
    pub piece_graph_ok: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PartitionReport {
    pub x_count: usize,
    pub x_bound: usize,
    pub y_count: usize,
    pub shortcuts: usize,
    pub reference_weight: u64,
    pub cut_weight: u64,
    pub faces: Vec<FaceReport>,
    pub max_face_corners: usize,
    pub violations: Vec<String>,
}

impl PartitionReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the structural claims about a partition built around the
/// independent set `reference`.
pub fn verify_partition(g: &Grid, part: &Partition, reference: &[Item], eps: f64) -> PartitionReport {
    let segs = part.segments();
    let mut violations: Vec<String> = part.anomalies.clone();
    let k = g.cells_per_side as usize;
    let x_bound = 16 * k * k + 4;
    if part.x.len() > x_bound {
        violations.push(format!("|X| = {} exceeds {x_bound}", part.x.len()));
    }
    violations.extend(nicely_connected(&segs));
    for s in &part.shortcuts {
        if !g.within_grid_edge(s) {
            violations.push(format!("shortcut {s:?} leaves its grid edge"));
        }
    }
    for s in &segs {
        if !part.shortcuts.contains(s) && reference.iter().any(|b| s.intersects_item(b)) {
            violations.push(format!("segment {s:?} meets a reference block"));
        }
    }
    for s in part.x.iter().skip(4) {
        if s.len() <= g.big {
            violations.push(format!("initial segment {s:?} is not longer than delta * N"));
        }
    }
    let reference_weight: u64 = reference.iter().map(|b| b.weight).sum();
    let cut_weight: u64 = reference.iter().filter(|b| segs.iter().any(|s| s.intersects_item(b))).map(|b| b.weight).sum();
    if cut_weight as f64 > eps * reference_weight as f64 {
        violations.push(format!("cut weight {cut_weight} exceeds eps * {reference_weight}"));
    }
    let fs = faces(g.n, &segs);
    let total: usize = fs.iter().map(|f| f.len()).sum();
    if total as i64 != g.n * g.n {
        violations.push(format!("faces cover {total} of {} unit cells", g.n * g.n));
    }
    let mut reports = Vec::new();
    for f in &fs {
        let shape = f.shape(g);
        let held = reference.iter().filter(|b| f.contains_item(b)).count();
        let graph_ok = match shape.kind {
            ShapeKind::Trail => piece_graph_is(f, g, false),
            ShapeKind::Ring => piece_graph_is(f, g, true),
            ShapeKind::Other => false,
        };
        if held > 0 && shape.kind == ShapeKind::Other {
            violations.push(format!("face at {:?} with {held} reference blocks is neither trail nor ring", f.cells().next()));
        }
        if held > 0 && !graph_ok && shape.kind != ShapeKind::Other {
            violations.push(format!("face at {:?} has a malformed piece graph", f.cells().next()));
        }
        reports.push(FaceReport { kind: shape.kind, cells: f.len(), corners: shape.corners, holes: shape.holes, reference_blocks: held, piece_graph_ok: graph_ok });
    }
    let max_face_corners = reports.iter().map(|r| r.corners).max().unwrap_or(0);
    PartitionReport {
        x_count: part.x.len(),
        x_bound,
        y_count: part.y.len(),
        shortcuts: part.shortcuts.len(),
        reference_weight,
        cut_weight,
        faces: reports,
        max_face_corners,
        violations,
    }
}

/// Faces of the partition as regions.
pub fn partition_faces(part: &Partition) -> Vec<Region> {
    faces(part.n, &part.segments())
}
