//! Entry points: the region recursion over the whole square for blocks and
//! for delta-large rectangles, and the evaluation of a partition built
//! around a known independent set.

use crate::dp::{ring_split, RegionDp, RingParams, RingSplit, TrailDp, Value};
use crate::grid::{build_grid, pairwise_disjoint, Grid, Item};
use crate::partition::{build_partition, partition_faces, Partition};
use crate::region::{Region, ShapeKind};
use geomis_core::{par, Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct BlockCaps {
    pub max_n: i64,
    pub max_inv_eps_delta: f64,
    pub max_items: usize,
    /// Corner bound for trails handled by the trail recursion.
    pub trail_corners: usize,
    /// Corner bound for the other regions of the recursion.
    pub max_corners: usize,
}

impl Default for BlockCaps {
    fn default() -> Self {
        BlockCaps { max_n: 8, max_inv_eps_delta: 4.0, max_items: 24, trail_corners: 8, max_corners: 16 }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct BlocksSolution {
    pub ids: Vec<u32>,
    pub weight: u64,
    /// Distinct regions evaluated.
    pub regions: usize,
    pub trail_regions: usize,
    pub walks: usize,
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidInput(format!("eps = {eps} must lie in (0, 1)")));
    }
    Ok(())
}

fn check_caps(g: &Grid, items: &[Item], eps: f64, delta: f64, caps: &BlockCaps) -> Result<()> {
    if g.n > caps.max_n {
        return Err(Error::CapExceeded(format!("N = {} exceeds {}; use the guided mode for larger squares", g.n, caps.max_n)));
    }
    let r = 1.0 / (eps * delta);
    if r > caps.max_inv_eps_delta + 1e-9 {
        return Err(Error::CapExceeded(format!("1/(eps*delta) = {r} exceeds {}", caps.max_inv_eps_delta)));
    }
    if items.len() > caps.max_items {
        return Err(Error::CapExceeded(format!("{} items exceed {}", items.len(), caps.max_items)));
    }
    Ok(())
}

fn run(g: Grid, items: &[Item], caps: &BlockCaps) -> BlocksSolution {
    let mut dp = RegionDp::new(g, items, caps.trail_corners, caps.max_corners).with_greedy_start();
    let v = dp.value(&Region::square(g.n));
    BlocksSolution { ids: v.ids, weight: v.weight, regions: dp.stats.regions, trail_regions: dp.stats.trail_regions, walks: dp.stats.walks }
}

/// Best independent set of delta-large blocks found by recursively
/// splitting the square along cut paths.
pub fn solve_blocks(items: &[Item], n: i64, eps: f64, delta: f64, caps: &BlockCaps) -> Result<BlocksSolution> {
    check_eps(eps)?;
    let g = build_grid(n, delta)?;
    for it in items {
        if !it.inside_square(n) || !it.is_block(&g) {
            return Err(Error::InvalidInput(format!("item {} is not a delta-large block inside [0,{n}]^2", it.id)));
        }
    }
    check_caps(&g, items, eps, delta, caps)?;
    Ok(run(g, items, caps))
}

/// Same recursion with delta-large rectangles of any thickness as items.
pub fn solve_rectangles(items: &[Item], n: i64, eps: f64, delta: f64, caps: &BlockCaps) -> Result<BlocksSolution> {
    check_eps(eps)?;
    let g = build_grid(n, delta)?;
    for it in items {
        if !it.inside_square(n) || !it.is_large(&g) {
            return Err(Error::InvalidInput(format!("item {} is not delta-large inside [0,{n}]^2", it.id)));
        }
    }
    check_caps(&g, items, eps, delta, caps)?;
    Ok(run(g, items, caps))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FaceSolution {
    pub kind: ShapeKind,
    pub corners: usize,
    /// `trail`, `general`, or the ring case used.
    pub method: String,
    pub weight: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GuidedSolution {
    pub ids: Vec<u32>,
    pub weight: u64,
    pub reference_weight: u64,
    pub partition: Partition,
    pub faces: Vec<FaceSolution>,
}

/// Builds the partition around `reference` (an independent subset of
/// `items`) and solves every face on its own: trails by the trail
/// recursion, rings after splitting them, other faces by the general
/// recursion.
pub fn solve_guided(items: &[Item], n: i64, eps: f64, delta: f64, reference: &[u32], caps: &BlockCaps) -> Result<GuidedSolution> {
    check_eps(eps)?;
    let g = build_grid(n, delta)?;
    let refs: Vec<Item> = items.iter().copied().filter(|it| reference.contains(&it.id)).collect();
    if refs.len() != reference.len() {
        return Err(Error::InvalidInput("reference lists unknown items".into()));
    }
    if !pairwise_disjoint(&refs) {
        return Err(Error::InvalidInput("reference is not independent".into()));
    }
    let part = build_partition(&g, &refs, eps, None)?;
    let faces = partition_faces(&part);
    let solved: Vec<Result<(Value, FaceSolution)>> = par::map(&faces, |f| solve_face(&g, f, items, &refs, eps, caps));
    let mut ids = Vec::new();
    let mut weight = 0;
    let mut out = Vec::new();
    for s in solved {
        let (v, fs) = s?;
        weight += v.weight;
        ids.extend(v.ids);
        out.push(fs);
    }
    ids.sort();
    Ok(GuidedSolution { ids, weight, reference_weight: refs.iter().map(|b| b.weight).sum(), partition: part, faces: out })
}

fn solve_face(g: &Grid, f: &Region, items: &[Item], refs: &[Item], eps: f64, caps: &BlockCaps) -> Result<(Value, FaceSolution)> {
    let shape = f.shape(g);
    let inside: Vec<Item> = items.iter().copied().filter(|it| f.contains_item(it)).collect();
    let face = |method: &str, v: &Value| FaceSolution { kind: shape.kind, corners: shape.corners, method: method.into(), weight: v.weight };
    if inside.is_empty() {
        return Ok((Value::default(), face("empty", &Value::default())));
    }
    match shape.kind {
        ShapeKind::Trail => {
            let k = shape.corners.max(caps.trail_corners);
            let v = TrailDp::new(*g, k, &inside).value(f)?;
            Ok((v.clone(), face("trail", &v)))
        }
        ShapeKind::Ring => {
            let o: Vec<Item> = refs.iter().copied().filter(|b| f.contains_item(b)).collect();
            let split = ring_split(g, f, &o, eps, &RingParams::default())?;
            let (pieces, method) = match &split {
                RingSplit::TrailRewrite { trail } => (vec![trail.region(g.n)], "ring-rewrite"),
                RingSplit::TwoPieces { pieces } => (pieces.iter().map(|p| p.region(g.n)).collect(), "ring-two-pieces"),
                RingSplit::Ladder { trails, .. } => (trails.iter().map(|p| p.region(g.n)).collect(), "ring-ladder"),
            };
            let mut total = Value::default();
            for p in &pieces {
                let (v, _) = solve_face(g, p, &inside, refs, eps, caps)?;
                total.weight += v.weight;
                total.ids.extend(v.ids);
            }
            Ok((total.clone(), face(method, &total)))
        }
        ShapeKind::Other => {
            let mut dp = RegionDp::new(*g, &inside, caps.trail_corners, shape.corners.max(caps.max_corners));
            let v = dp.value(f);
            Ok((v.clone(), face("general", &v)))
        }
    }
}
