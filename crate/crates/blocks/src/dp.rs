//! Split dynamic program over regions, trail splitting and ring splitting.

use crate::grid::{mwis_items, pairwise_disjoint, Dir, Grid, Item, Seg, UnitEdge};
use crate::region::{cell_pieces, piece_graph, Region, ShapeKind};
use crate::walk::{walks, walks_from, Walk, WalkOptions};
use geomis_core::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Value {
    pub weight: u64,
    pub ids: Vec<u32>,
}

#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize)]
pub struct DpStats {
    pub regions: usize,
    pub trail_regions: usize,
    pub walks: usize,
}

/// Memoized recursion: the value of a region is the best single item in it
/// or the best sum over a cut path splitting it in two parts that each keep
/// an item. Trails (at most `trail_corners` corners) only split into trails
/// of at most that many corners; other regions split into pieces of at most
/// `max_corners`. Splits are tried in order of their clique-cover bound and
/// pruned against the best value found.
pub struct RegionDp<'a> {
    grid: Grid,
    items: &'a [Item],
    trail_corners: usize,
    max_corners: usize,
    max_turns: usize,
    greedy_start: bool,
    memo: HashMap<Region, Value>,
    pub stats: DpStats,
}

/// Upper bound on an independent set: greedy cover by pairwise overlapping
/// groups, each contributing its heaviest member.
pub fn clique_bound(items: &[Item]) -> u64 {
    let mut sorted: Vec<&Item> = items.iter().collect();
    sorted.sort_by_key(|it| (std::cmp::Reverse(it.weight), it.id));
    let mut groups: Vec<Vec<&Item>> = Vec::new();
    for it in sorted {
        match groups.iter_mut().find(|g| g.iter().all(|o| o.overlaps(it))) {
            Some(g) => g.push(it),
            None => groups.push(vec![it]),
        }
    }
    groups.iter().map(|g| g[0].weight).sum()
}

/// Heaviest-first maximal independent set.
pub fn greedy(items: &[Item]) -> Value {
    let mut sorted: Vec<&Item> = items.iter().collect();
    sorted.sort_by_key(|it| (std::cmp::Reverse(it.weight), it.id));
    let mut chosen: Vec<&Item> = Vec::new();
    for it in sorted {
        if !chosen.iter().any(|o| o.overlaps(it)) {
            chosen.push(it);
        }
    }
    let mut ids: Vec<u32> = chosen.iter().map(|it| it.id).collect();
    ids.sort();
    Value { weight: chosen.iter().map(|it| it.weight).sum(), ids }
}

impl<'a> RegionDp<'a> {
    pub fn new(grid: Grid, items: &'a [Item], trail_corners: usize, max_corners: usize) -> RegionDp<'a> {
        RegionDp {
            grid,
            items,
            trail_corners,
            max_corners,
            max_turns: trail_corners.max(max_corners) / 2,
            greedy_start: false,
            memo: HashMap::new(),
            stats: DpStats::default(),
        }
    }

    /// Also takes the greedy independent set of each region as a candidate.
    pub fn with_greedy_start(mut self) -> Self {
        self.greedy_start = true;
        self
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    fn live(&self, r: &Region) -> Vec<Item> {
        self.items.iter().copied().filter(|it| r.contains_item(it)).collect()
    }

    pub fn value(&mut self, r: &Region) -> Value {
        let live = self.live(r);
        if live.is_empty() {
            return Value::default();
        }
        if pairwise_disjoint(&live) {
            let mut ids: Vec<u32> = live.iter().map(|it| it.id).collect();
            ids.sort();
            return Value { weight: live.iter().map(|it| it.weight).sum(), ids };
        }
        if let Some(v) = self.memo.get(r) {
            return v.clone();
        }
        self.stats.regions += 1;
        let shape = r.shape(&self.grid);
        let trail = shape.kind == ShapeKind::Trail && shape.corners <= self.trail_corners;
        if trail {
            self.stats.trail_regions += 1;
        }
        let top = live.iter().max_by_key(|it| (it.weight, std::cmp::Reverse(it.id))).unwrap();
        let mut best = Value { weight: top.weight, ids: vec![top.id] };
        if self.greedy_start {
            let g = greedy(&live);
            if g.weight > best.weight {
                best = g;
            }
        }
        let bound = clique_bound(&live);
        if best.weight < bound {
            self.split(r, &live, trail, &mut best);
        }
        self.memo.insert(r.clone(), best.clone());
        best
    }

    fn split(&mut self, r: &Region, live: &[Item], trail: bool, best: &mut Value) {
        let opts = WalkOptions { allow_pass: true, max_turns: self.max_turns, limit: usize::MAX };
        let ws = walks(r, live, opts);
        self.stats.walks += ws.len();
        let mut splits: Vec<(u64, Region, Region)> = Vec::new();
        for w in &ws {
            let parts = r.cut(w.edges.iter().copied());
            if parts.len() != 2 {
                continue;
            }
            let inside: Vec<Vec<Item>> = parts.iter().map(|p| live.iter().copied().filter(|it| p.contains_item(it)).collect()).collect();
            if inside.iter().any(|v| v.is_empty()) {
                continue;
            }
            let ub = clique_bound(&inside[0]) + clique_bound(&inside[1]);
            if ub <= best.weight {
                continue;
            }
            let ok = parts.iter().all(|p| {
                if trail {
                    let s = p.shape(&self.grid);
                    s.kind == ShapeKind::Trail && s.corners <= self.trail_corners
                } else {
                    p.corner_count() <= self.max_corners
                }
            });
            if !ok {
                continue;
            }
            let mut it = parts.into_iter();
            splits.push((ub, it.next().unwrap(), it.next().unwrap()));
        }
        splits.sort_by(|x, y| y.0.cmp(&x.0));
        for (ub, a, b) in splits {
            if ub <= best.weight {
                break;
            }
            let va = self.value(&a);
            let vb = self.value(&b);
            if va.weight + vb.weight > best.weight {
                let mut ids = va.ids;
                ids.extend(vb.ids);
                ids.sort();
                *best = Value { weight: va.weight + vb.weight, ids };
            }
        }
    }
}

/// Optimal weight of the blocks inside a trail of at most `k` corners,
/// through the split recursion restricted to trails.
pub struct TrailDp<'a> {
    dp: RegionDp<'a>,
    k: usize,
}

impl<'a> TrailDp<'a> {
    pub fn new(grid: Grid, k: usize, blocks: &'a [Item]) -> TrailDp<'a> {
        TrailDp { dp: RegionDp::new(grid, blocks, k, k), k }
    }

    pub fn value(&mut self, trail: &Region) -> Result<Value> {
        let s = trail.shape(&self.dp.grid);
        if s.kind != ShapeKind::Trail {
            return Err(Error::InvalidInput("region is not a trail".into()));
        }
        if s.corners > self.k {
            return Err(Error::InvalidInput(format!("trail has {} corners, more than k = {}", s.corners, self.k)));
        }
        Ok(self.dp.value(trail))
    }

    pub fn memo_len(&self) -> usize {
        self.dp.memo_len()
    }

    pub fn stats(&self) -> DpStats {
        self.dp.stats
    }
}

pub fn trail_dp(grid: Grid, k: usize, blocks: &[Item], trail: &Region) -> Result<Value> {
    TrailDp::new(grid, k, blocks).value(trail)
}

/// Splits a trail into two trails of at most `k` corners along a path that
/// avoids the given independent blocks.
pub fn trail_split(grid: &Grid, trail: &Region, blocks: &[Item], k: usize) -> Result<(Region, Region)> {
    if !pairwise_disjoint(blocks) {
        return Err(Error::InvalidInput("blocks are not independent".into()));
    }
    if trail.shape(grid).kind != ShapeKind::Trail {
        return Err(Error::InvalidInput("region is not a trail".into()));
    }
    let opts = WalkOptions { allow_pass: false, max_turns: k, limit: usize::MAX };
    let mut ws = walks(trail, blocks, opts);
    ws.sort_by_key(|w| (w.turns, w.edges.len()));
    for w in ws {
        let parts = trail.cut(w.edges.iter().copied());
        if parts.len() == 2
            && parts.iter().all(|p| {
                let s = p.shape(grid);
                s.kind == ShapeKind::Trail && s.corners <= k
            })
        {
            let mut it = parts.into_iter();
            return Ok((it.next().unwrap(), it.next().unwrap()));
        }
    }
    Err(Error::Structural("no split of the trail avoids the blocks".into()))
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub enum RingSplit {
    /// Same closure cut open along a block-free path.
    TrailRewrite { trail: RegionData },
    /// Two trails or rings, no block cut.
    TwoPieces { pieces: [RegionData; 2] },
    /// Trails obtained by cutting along a sparse ladder of cell-edge
    /// segments; `cut` lists the blocks those segments meet.
    Ladder { trails: Vec<RegionData>, segments: Vec<Seg>, cut: Vec<u32>, cut_weight: u64, total_weight: u64, stride: usize },
}

/// Serializable snapshot of a region.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct RegionData {
    pub cells: Vec<(i64, i64)>,
    pub walls: Vec<UnitEdge>,
}

impl RegionData {
    pub fn of(r: &Region) -> RegionData {
        RegionData { cells: r.cells().collect(), walls: r.walls().to_vec() }
    }

    pub fn region(&self, n: i64) -> Region {
        Region::from_cells(n, self.cells.iter().copied()).with_walls(self.walls.iter().copied())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct RingParams {
    /// A cut-open trail with at most `trail_factor * k / eps` corners is
    /// returned as a rewrite; longer ones get a ladder.
    pub trail_factor: f64,
}

impl Default for RingParams {
    fn default() -> Self {
        RingParams { trail_factor: 2.0 }
    }
}

/// Runs of open edges of `r` along grid-cell edges, one per maximal run.
fn grid_edge_runs(r: &Region, g: &Grid) -> Vec<Seg> {
    let mut out = Vec::new();
    for vertical in [true, false] {
        for line in 0..=g.cells_per_side {
            let at = line * g.big;
            for cell in 0..g.cells_per_side {
                let mut start = None;
                for t in cell * g.big..=(cell + 1) * g.big {
                    let open = t < (cell + 1) * g.big && {
                        let e = if vertical { UnitEdge::vertical(at, t) } else { UnitEdge::horizontal(t, at) };
                        r.edge_open(&e)
                    };
                    match (open, start) {
                        (true, None) => start = Some(t),
                        (false, Some(s)) => {
                            out.push(Seg::new(vertical, at, s, t));
                            start = None;
                        }
                        _ => {}
                    }
                }
            }
        }
    }
    out
}

/// The ray walk from the outer corner of the leftmost piece: along the
/// nearest block crossing the piece's open side, turning at every block
/// toward its farther end.
fn guided_walk(r: &Region, g: &Grid, blocks: &[Item]) -> Option<Walk> {
    let corner = r.cells().min_by_key(|&(x, y)| (x, y))?;
    let pieces = cell_pieces(r, g);
    let piece = pieces.iter().find(|p| p.region.has(corner.0, corner.1))?;
    let (ci, cj) = piece.cell;
    let (cx2, cy2) = ((ci + 1) * g.big, (cj + 1) * g.big);
    let crossing: Vec<&Item> = blocks
        .iter()
        .filter(|b| {
            let right = b.x1 < cx2 && cx2 < b.x2 && piece.region.cells().any(|(x, y)| x == cx2 - 1 && y >= b.y1 && y < b.y2);
            let top = b.y1 < cy2 && cy2 < b.y2 && piece.region.cells().any(|(x, y)| y == cy2 - 1 && x >= b.x1 && x < b.x2);
            right || top
        })
        .collect();
    let p = (corner.0, corner.1);
    let b = crossing.into_iter().min_by_key(|b| ((b.x1 - p.0).abs() + (b.y1 - p.1).abs(), b.id))?;
    // start on the piece boundary level with the block's far long edge
    let (start, dir) = if b.horizontal() {
        let y = b.y2;
        let mut x = b.x1;
        while r.edge_open(&UnitEdge::horizontal(x - 1, y)) {
            x -= 1;
        }
        ((x, y), Dir::East)
    } else {
        let x = b.x2;
        let mut y = b.y1;
        while r.edge_open(&UnitEdge::vertical(x, y - 1)) {
            y -= 1;
        }
        ((x, y), Dir::North)
    };
    if r.point_inside(start) {
        return None;
    }
    let mut q = start;
    let mut d = dir;
    let mut edges = Vec::new();
    let mut visited = std::collections::HashSet::new();
    visited.insert(q);
    let mut turns = 0;
    let mut turned = false;
    loop {
        let e = UnitEdge::step(q, d);
        if !r.edge_open(&e) {
            return None;
        }
        if let Some(hit) = blocks.iter().find(|b| e.inside(b)) {
            if turned {
                return None;
            }
            d = farther_turn(hit, q, d);
            turns += 1;
            turned = true;
            continue;
        }
        turned = false;
        let q2 = d.apply(q);
        edges.push(e);
        if !visited.insert(q2) || !r.point_inside(q2) {
            return Some(Walk { start, end: q2, edges, cut: Vec::new(), turns });
        }
        q = q2;
    }
}

fn farther_turn(b: &Item, q: (i64, i64), d: Dir) -> Dir {
    let (l, rt) = (d.left(), d.right());
    let reach = |nd: Dir| match nd {
        Dir::East => b.x2 - q.0,
        Dir::West => q.0 - b.x1,
        Dir::North => b.y2 - q.1,
        Dir::South => q.1 - b.y1,
    };
    if reach(l) >= reach(rt) {
        l
    } else {
        rt
    }
}

fn is_trail_or_ring(p: &Region, g: &Grid, k: usize) -> bool {
    let s = p.shape(g);
    s.kind != ShapeKind::Other && s.corners <= k
}

/// Splits a ring into a trail, two smaller pieces, or a family of trails
/// cut along a sparse ladder.
pub fn ring_split(grid: &Grid, ring: &Region, blocks: &[Item], eps: f64, params: &RingParams) -> Result<RingSplit> {
    if !pairwise_disjoint(blocks) {
        return Err(Error::InvalidInput("blocks are not independent".into()));
    }
    let shape = ring.shape(grid);
    if shape.kind != ShapeKind::Ring {
        return Err(Error::InvalidInput("region is not a ring".into()));
    }
    let k = shape.corners;
    let runs = grid_edge_runs(ring, grid);
    for s in &runs {
        if blocks.iter().any(|b| s.intersects_item(b)) {
            continue;
        }
        let parts = ring.cut(s.unit_edges());
        if parts.len() == 1 && parts[0].holes() == 0 {
            return Ok(RingSplit::TrailRewrite { trail: RegionData::of(&parts[0]) });
        }
    }
    let walk = guided_walk(ring, grid, blocks);
    let mut candidates: Vec<Walk> = walk.into_iter().collect();
    if candidates.is_empty() {
        let opts = WalkOptions { allow_pass: false, max_turns: 4 * k, limit: 10_000 };
        let starts = crate::walk::boundary_points(ring);
        candidates = walks_from(ring, blocks, opts, &starts);
        candidates.sort_by_key(|w| (w.turns, w.edges.len()));
    }
    let limit = (params.trail_factor * k as f64 / eps).ceil() as usize;
    let mut long: Option<Region> = None;
    for w in &candidates {
        let parts = ring.cut(w.edges.iter().copied());
        match parts.len() {
            2 if parts.iter().all(|p| is_trail_or_ring(p, grid, 2 * k)) => {
                let mut it = parts.iter().map(RegionData::of);
                return Ok(RingSplit::TwoPieces { pieces: [it.next().unwrap(), it.next().unwrap()] });
            }
            1 if parts[0].holes() == 0 => {
                let phi = &parts[0];
                if phi.corner_count() <= limit {
                    return Ok(RingSplit::TrailRewrite { trail: RegionData::of(phi) });
                }
                if long.is_none() {
                    long = Some(phi.clone());
                }
            }
            _ => {}
        }
    }
    let Some(phi) = long else {
        return Err(Error::Structural("no block-free path splits the ring".into()));
    };
    Ok(ladder(grid, &phi, blocks, eps))
}

/// Cuts a long trail along every `t`-th piece link, `t = ceil(8/eps)`,
/// choosing the offset whose links meet the least block weight.
pub fn ladder(grid: &Grid, phi: &Region, blocks: &[Item], eps: f64) -> RingSplit {
    let t = (8.0 / eps).ceil() as usize;
    let links = ordered_links(phi, grid);
    let total_weight: u64 = blocks.iter().map(|b| b.weight).sum();
    let mut best: Option<(u64, usize)> = None;
    for i in 0..t {
        let w: u64 = blocks.iter().filter(|b| links.iter().skip(i).step_by(t).any(|s| s.intersects_item(b))).map(|b| b.weight).sum();
        if best.is_none_or(|(bw, _)| w < bw) {
            best = Some((w, i));
        }
    }
    let (cut_weight, offset) = best.unwrap_or((0, 0));
    let segments: Vec<Seg> = links.iter().skip(offset).step_by(t).copied().collect();
    let mut cut: Vec<u32> = blocks.iter().filter(|b| segments.iter().any(|s| s.intersects_item(b))).map(|b| b.id).collect();
    cut.sort();
    let trails = phi.cut(segments.iter().flat_map(|s| s.unit_edges().collect::<Vec<_>>())).iter().map(RegionData::of).collect();
    RingSplit::Ladder { trails, segments, cut, cut_weight, total_weight, stride: t }
}

/// Links between consecutive per-cell pieces of a trail, in order along it.
fn ordered_links(phi: &Region, g: &Grid) -> Vec<Seg> {
    let (k, _) = piece_graph(phi, g);
    let pieces = cell_pieces(phi, g);
    let mut owner = HashMap::new();
    for (i, p) in pieces.iter().enumerate() {
        for c in p.region.cells() {
            owner.insert(c, i);
        }
    }
    let mut runs: Vec<((usize, usize), Seg)> = Vec::new();
    for (x, y) in phi.cells() {
        for e in [UnitEdge::vertical(x + 1, y), UnitEdge::horizontal(x, y + 1)] {
            if !phi.edge_open(&e) {
                continue;
            }
            let [a, b] = e.cells();
            let (pa, pb) = (owner[&a], owner[&b]);
            if pa == pb {
                continue;
            }
            let pair = (pa.min(pb), pa.max(pb));
            let (at, pos) = if e.vertical { (e.x, e.y) } else { (e.y, e.x) };
            if let Some(run) = runs.iter_mut().find(|(p, s)| *p == pair && s.vertical == e.vertical && s.at == at && (s.hi == pos || s.lo == pos + 1)) {
                run.1 = Seg::new(e.vertical, at, run.1.lo.min(pos), run.1.hi.max(pos + 1));
            } else {
                runs.push((pair, Seg::new(e.vertical, at, pos, pos + 1)));
            }
        }
    }
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); k];
    for (i, (p, _)) in runs.iter().enumerate() {
        adj[p.0].push((p.1, i));
        adj[p.1].push((p.0, i));
    }
    let Some(start) = (0..k).find(|&i| adj[i].len() <= 1) else {
        return runs.into_iter().map(|r| r.1).collect();
    };
    let mut order = Vec::new();
    let mut used = vec![false; runs.len()];
    let mut cur = start;
    while let Some(&(next, ri)) = adj[cur].iter().find(|(_, ri)| !used[*ri]) {
        used[ri] = true;
        order.push(runs[ri].1);
        cur = next;
    }
    order
}

/// Exact optimum restricted to the blocks inside a region.
pub fn exact_in(r: &Region, items: &[Item]) -> Result<Value> {
    let live: Vec<Item> = items.iter().copied().filter(|it| r.contains_item(it)).collect();
    let (weight, mut ids) = mwis_items(&live)?;
    ids.sort();
    Ok(Value { weight, ids })
}
