//! Cheap balanced cuts: the dual graph of a cutting, a cycle separator of
//! its triangulation, and the traced, encoded separating polygon.

pub mod cycle;
pub mod encode;
pub mod planar;
pub mod trace;
pub mod tri;

pub use cycle::{cycle_separator, split_by_cycle, CycleSplit};
pub use encode::{decode, encode, Token, Universe};
pub use planar::{dual_graph, DualGraph, Label, RegionKind};
pub use tri::{fix_and_triangulate, PlaneGraph};

use crate::cuttings::{build_cutting, total_weight, Cutting, CuttingParams};
use crate::error::{Error, Result};
use crate::geom::{classify_against, is_simple, Classification, Id, Point, Rect, WeightedPolygon};
use crate::rng::child;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt::Write;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparatingPolygon {
    /// Counterclockwise, without repeated or collinear points, starting at
    /// its smallest point.
    pub boundary: Vec<Point>,
    pub tokens: Vec<Token>,
    /// Bit string as `0`/`1` characters.
    pub encoding: String,
    pub inside_weight: u64,
    pub outside_weight: u64,
    pub cut_weight: u64,
    /// Partition of the polygons the weights were measured on.
    pub classification: Classification,
    /// Regions of the cutting whose union the boundary encloses.
    pub regions: Vec<usize>,
    pub diagnostics: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Cut {
    /// A polygon of at least 2/3 of the total weight.
    Heavy(Id),
    Polygon(SeparatingPolygon),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CutParams {
    pub cutting: CuttingParams,
    /// Cuttings tried before giving up.
    pub attempts: usize,
    /// Candidate cycles traced per cutting.
    pub traced_per_cutting: usize,
    /// Polygon count `m` of the whole instance when cutting a subproblem;
    /// sets `log2 m` in the cheapness test and the cutting parameter.
    pub universe_size: Option<usize>,
}

impl Default for CutParams {
    fn default() -> Self {
        CutParams { cutting: CuttingParams::default(), attempts: 4, traced_per_cutting: 60, universe_size: None }
    }
}

/// Regions behind one side of a cycle: the original vertices on the cycle
/// and on that side.
pub fn side_regions(split: &CycleSplit, left: bool, originals: usize) -> Vec<usize> {
    let side = if left { &split.left } else { &split.right };
    let mut out: Vec<usize> = split.cycle.iter().chain(side).copied().filter(|&v| v < originals).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Outer boundary of the union of `regions`, classified against `assigned`
/// and encoded over `universe`.
pub fn trace_separating_polygon(
    regions: &[usize],
    dual: &DualGraph,
    cutting: &Cutting,
    universe: &Universe,
    assigned: &[WeightedPolygon],
) -> Result<SeparatingPolygon> {
    let traced = trace::trace_regions(&dual.map, regions)?;
    let pts: Vec<Point> = traced.ring.iter().map(|x| x.0.clone()).collect();
    let boundary = trace::canonical_ring(&pts);
    if !is_simple(&boundary) {
        return Err(Error::DegenerateSeparator);
    }
    let tokens = encode::tokenize(&traced.ring, &cutting.decomposition.vertices, universe)?;
    let encoding = encode(&tokens, &boundary, universe)?;
    let classification = classify_against(assigned, &boundary)?;
    let w: HashMap<Id, u64> = assigned.iter().map(|p| (p.id, p.weight)).collect();
    let sum = |ids: &[Id]| ids.iter().map(|i| w[i]).sum::<u64>();
    Ok(SeparatingPolygon {
        inside_weight: sum(&classification.inside),
        outside_weight: sum(&classification.outside),
        cut_weight: sum(&classification.intersecting),
        boundary,
        tokens,
        encoding,
        classification,
        regions: traced.regions,
        diagnostics: traced.diagnostics,
    })
}

/// Cut weight at most eps / log2(m) of the total and both sides at most 2/3
/// of it; with `floor`, both sides also at least a tenth.
pub fn is_cheap_balanced(sp: &SeparatingPolygon, total: u64, m: usize, eps: f64, floor: bool) -> bool {
    let t = total as u128;
    let cheap = (sp.cut_weight as f64) * (m.max(2) as f64).log2() <= eps * total as f64;
    let balanced = 3 * sp.inside_weight as u128 <= 2 * t && 3 * sp.outside_weight as u128 <= 2 * t;
    let floor_ok = !floor || (10 * sp.inside_weight as u128 >= t && 10 * sp.outside_weight as u128 >= t);
    cheap && balanced && floor_ok
}

/// `r = ceil((log2 m / eps)^3)`, at least 2.
pub fn cutting_parameter(m: usize, eps: f64) -> u64 {
    let l = (m.max(2) as f64).log2();
    ((l / eps).powi(3).ceil() as u64).max(2)
}

/// Candidate region sets from fundamental cycles, best graph balance first.
fn candidates(g: &PlaneGraph, originals: usize, limit: usize) -> Vec<Vec<usize>> {
    let n = g.len();
    let total = g.total_weight();
    if n <= 3 {
        return vec![(0..originals).collect()];
    }
    let mut scored: Vec<(u64, usize, Vec<usize>, bool)> = Vec::new();
    for root in cycle::roots(g, 3) {
        let t = cycle::bfs(g, root);
        for (c, l, r) in cycle::fundamental_cycles(g, &t) {
            let cw = total - l - r;
            for left in [true, false] {
                let (inside, outside) = if left { (l + cw, r) } else { (r + cw, l) };
                scored.push((inside.max(outside), c.len(), c.clone(), left));
            }
        }
    }
    scored.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
    let mut out: Vec<Vec<usize>> = Vec::new();
    for (_, _, c, left) in scored {
        if out.len() >= limit {
            break;
        }
        let Ok(split) = split_by_cycle(g, &c) else { continue };
        let set = side_regions(&split, left, originals);
        if !set.is_empty() && !out.contains(&set) {
            out.push(set);
        }
    }
    out
}

/// A cheap balanced cut of disjoint polygons, or a polygon holding at least
/// 2/3 of the weight.
pub fn cheap_balanced_cut(polys: &[WeightedPolygon], frame: &Rect, eps: f64, seed: u64, params: &CutParams) -> Result<Cut> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidInput(format!("eps = {eps} must lie in (0, 1)")));
    }
    if polys.is_empty() {
        return Err(Error::InvalidInput("no polygons to cut".into()));
    }
    let total = total_weight(polys);
    if let Some(p) = polys.iter().filter(|p| 3 * p.weight as u128 >= 2 * total as u128).max_by_key(|p| (p.weight, std::cmp::Reverse(p.id))) {
        return Ok(Cut::Heavy(p.id));
    }
    let m = params.universe_size.unwrap_or(0).max(polys.len());
    let r = cutting_parameter(m, eps);
    let universe = Universe::new(polys, frame);
    let mut best: Option<(u64, u64, u64)> = None;
    let mut last_err = None;
    for attempt in 0..params.attempts {
        let cutting = match build_cutting(polys, frame, r, child(seed, attempt as u64), &params.cutting) {
            Ok(c) => c,
            Err(e) => {
                last_err = Some(e);
                continue;
            }
        };
        let dual = dual_graph(&cutting, polys, polys)?;
        let g = fix_and_triangulate(&dual.graph);
        for set in candidates(&g, dual.graph.len(), params.traced_per_cutting) {
            let sp = match trace_separating_polygon(&set, &dual, &cutting, &universe, polys) {
                Ok(sp) => sp,
                Err(e) => {
                    log::debug!("candidate rejected: {e}");
                    last_err = Some(e);
                    continue;
                }
            };
            if is_cheap_balanced(&sp, total, m, eps, true) {
                return Ok(Cut::Polygon(sp));
            }
            let key = (sp.inside_weight.max(sp.outside_weight), sp.cut_weight, sp.inside_weight.min(sp.outside_weight));
            if best.is_none_or(|b| key < b) {
                best = Some(key);
            }
        }
    }
    let ratios = match best {
        Some((big, cut, small)) => format!(
            "best candidate: larger side {:.3} W, smaller side {:.3} W, cut {:.4} W",
            big as f64 / total as f64,
            small as f64 / total as f64,
            cut as f64 / total as f64
        ),
        None => format!("no candidate could be traced ({})", last_err.map_or("no cutting".into(), |e| e.to_string())),
    };
    Err(Error::CutFailed(format!(
        "m = {m}, eps = {eps}, r = {r}, {} cuttings; {ratios}; need cut <= {:.4} W and sides in [0.1, 0.667] W",
        params.attempts,
        eps / (m.max(2) as f64).log2()
    )))
}

/// Boundary edges as `x1 y1 x2 y2 tag` lines, tag `spoke` or `subchain`.
pub fn dump(sp: &SeparatingPolygon, universe: &Universe) -> Result<String> {
    let mut s = String::new();
    for (t, path) in sp.tokens.iter().zip(encode::token_paths(&sp.tokens, universe)?) {
        let tag = if t.is_spoke() { "spoke" } else { "subchain" };
        for w in path.windows(2) {
            let (ax, ay) = w[0].to_f64();
            let (bx, by) = w[1].to_f64();
            writeln!(s, "{ax} {ay} {bx} {by} {tag}").unwrap();
        }
    }
    Ok(s)
}
