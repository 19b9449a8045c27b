//! Recursive independent-set scheme on cheap balanced cuts: weight
//! normalization, a reference-guided mode that audits the weight lost to
//! cuts, a grid-cut branch and bound, and a toy-scale exhaustive mode.

use crate::cuttings::total_weight;
use crate::error::{Error, Result};
use crate::geom::{classify_against, interiors_intersect, Id, Point, Rect, WeightedPolygon};
use crate::oracle::{is_independent_set, mwis_polygons, MAX_VERTICES};
use crate::par;
use crate::rng::child;
use crate::separator::{cheap_balanced_cut, Cut, CutParams};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

/// `floor(m / eps)`, the largest weight after normalization. Quotients
/// within 1e-9 of an integer are rounded to it, so `eps = 0.2` gives `5m`.
pub fn weight_cap(m: usize, eps: f64) -> u64 {
    let q = m as f64 / eps;
    let r = q.round();
    if (q - r).abs() <= 1e-9 * r.max(1.0) {
        r as u64
    } else {
        q.floor() as u64
    }
}

/// Scale weights so the largest becomes `floor(m / eps)`, floor each, and
/// drop polygons that round to zero. Ids and vertices are kept.
pub fn normalize_weights(polys: &[WeightedPolygon], eps: f64) -> Result<Vec<WeightedPolygon>> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidInput(format!("eps = {eps} must lie in (0, 1)")));
    }
    if polys.iter().any(|p| p.weight == 0) {
        return Err(Error::InvalidInput("weights must be positive".into()));
    }
    let Some(max) = polys.iter().map(|p| p.weight).max() else { return Ok(Vec::new()) };
    let cap = weight_cap(polys.len(), eps) as u128;
    Ok(polys
        .iter()
        .filter_map(|p| {
            let w = (p.weight as u128 * cap / max as u128) as u64;
            (w > 0).then(|| WeightedPolygon { weight: w, ..p.clone() })
        })
        .collect())
}

/// One step of a subproblem's region: a cut and the side kept.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RegionStep {
    /// Hex of the cut's bit encoding, or `heavy:<id>` for a heavy polygon.
    pub cut: String,
    pub inside: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subproblem {
    pub region: Vec<RegionStep>,
    /// Polygons classified inside every cut of `region`, sorted.
    pub active: Vec<Id>,
    pub depth: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    Leaf,
    Cut,
    Heavy,
    DepthCap,
    /// The cut could not be built; the subproblem was solved exactly.
    Fallback,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditNode {
    pub region: Vec<RegionStep>,
    pub depth: usize,
    pub active: usize,
    pub reference_weight: u64,
    /// Reference weight crossing this node's cut.
    pub lost_weight: u64,
    pub kind: NodeKind,
    pub solution_weight: u64,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelAudit {
    pub depth: usize,
    pub reference_weight: u64,
    pub lost_weight: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Audit {
    pub eps: f64,
    pub m: usize,
    pub depth_cap: usize,
    pub max_depth: usize,
    /// Normalized reference weight at the root.
    pub reference_weight: u64,
    /// Reference polygons whose weight rounded to zero.
    pub dropped_by_normalization: Vec<Id>,
    pub total_lost: u64,
    pub levels: Vec<LevelAudit>,
    /// Sorted by region.
    pub nodes: Vec<AuditNode>,
    pub fallbacks: usize,
}

impl Audit {
    pub fn depth_ok(&self) -> bool {
        self.max_depth <= self.depth_cap
    }

    /// `1 - (1 - eps / log2 m)^depth`, the allowed lost fraction.
    pub fn loss_bound(&self) -> f64 {
        let l = (self.m.max(2) as f64).log2();
        1.0 - (1.0 - self.eps / l).powi(self.max_depth as i32)
    }

    pub fn loss_ok(&self) -> bool {
        self.total_lost as f64 <= self.loss_bound() * self.reference_weight as f64 + 1e-9
    }

    /// Every level loses at most `eps / log2 m` of the reference weight
    /// reaching it.
    pub fn levels_ok(&self) -> bool {
        let l = (self.m.max(2) as f64).log2();
        self.levels.iter().all(|v| v.lost_weight as f64 * l <= self.eps * v.reference_weight as f64 + 1e-9)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QptasSolution {
    /// Sorted.
    pub ids: Vec<Id>,
    /// Weight under the input weights.
    pub weight: u64,
    pub normalized_weight: u64,
    pub audit: Audit,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QptasParams {
    pub leaf_size: usize,
    /// Depth cap is `ceil(depth_factor * log2(m / eps))`.
    pub depth_factor: f64,
    pub cut: CutParams,
    pub seed: u64,
}

impl Default for QptasParams {
    fn default() -> Self {
        QptasParams { leaf_size: 12, depth_factor: 4.0, cut: CutParams::default(), seed: 0 }
    }
}

pub fn depth_cap(m: usize, eps: f64, factor: f64) -> usize {
    (factor * (m.max(1) as f64 / eps).log2()).ceil().max(0.0) as usize
}

fn region_seed(seed: u64, region: &[RegionStep]) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for s in region {
        for b in s.cut.bytes().chain([s.inside as u8]) {
            h = (h ^ b as u64).wrapping_mul(0x100_0000_01b3);
        }
    }
    child(seed, h)
}

fn bits_to_hex(bits: &str) -> String {
    let mut bytes = Vec::with_capacity(bits.len().div_ceil(8) + 1);
    for chunk in bits.as_bytes().chunks(8) {
        let mut b = 0u8;
        for (i, &c) in chunk.iter().enumerate() {
            b |= ((c == b'1') as u8) << (7 - i);
        }
        bytes.push(b);
    }
    format!("{}:{}", bits.len(), hex::encode(bytes))
}

/// Heaviest-first greedy independent set, for subproblems too large to
/// solve exactly.
fn greedy(polys: &[WeightedPolygon]) -> Vec<Id> {
    let mut order: Vec<&WeightedPolygon> = polys.iter().collect();
    order.sort_by_key(|p| (std::cmp::Reverse(p.weight), p.id));
    let mut chosen: Vec<&WeightedPolygon> = Vec::new();
    for p in order {
        if chosen.iter().all(|q| !interiors_intersect(&q.vertices, &p.vertices)) {
            chosen.push(p);
        }
    }
    let mut ids: Vec<Id> = chosen.iter().map(|p| p.id).collect();
    ids.sort_unstable();
    ids
}

/// Exact when small enough, greedy otherwise; the flag reports the greedy case.
fn solve_leaf(polys: &[WeightedPolygon]) -> Result<(Vec<Id>, bool)> {
    if polys.len() <= MAX_VERTICES {
        Ok((mwis_polygons(polys)?.ids, false))
    } else {
        Ok((greedy(polys), true))
    }
}

struct Guided<'a> {
    polys: HashMap<Id, &'a WeightedPolygon>,
    reference: Vec<bool>,
    frame: &'a Rect,
    eps: f64,
    m: usize,
    cap: usize,
    params: &'a QptasParams,
    nodes: Mutex<Vec<AuditNode>>,
    memo: Mutex<HashMap<Vec<Id>, Vec<Id>>>,
}

impl Guided<'_> {
    fn weight(&self, ids: &[Id]) -> u64 {
        ids.iter().map(|i| self.polys[i].weight).sum()
    }

    fn record(&self, sub: &Subproblem, reference_weight: u64, lost: u64, kind: NodeKind, sol: &[Id], note: Option<String>) {
        self.nodes.lock().unwrap().push(AuditNode {
            region: sub.region.clone(),
            depth: sub.depth,
            active: sub.active.len(),
            reference_weight,
            lost_weight: lost,
            kind,
            solution_weight: self.weight(sol),
            note,
        });
    }

    fn leaf(&self, sub: &Subproblem, rw: u64, kind: NodeKind, note: Option<String>) -> Result<Vec<Id>> {
        if let Some(s) = self.memo.lock().unwrap().get(&sub.active) {
            self.record(sub, rw, 0, kind, s, note);
            return Ok(s.clone());
        }
        let polys: Vec<WeightedPolygon> = sub.active.iter().map(|i| self.polys[i].clone()).collect();
        let (sol, greedy) = solve_leaf(&polys)?;
        let note = match (note, greedy) {
            (n, false) => n,
            (Some(n), true) => Some(format!("{n}; greedy leaf over {} polygons", polys.len())),
            (None, true) => Some(format!("greedy leaf over {} polygons", polys.len())),
        };
        self.memo.lock().unwrap().insert(sub.active.clone(), sol.clone());
        self.record(sub, rw, 0, kind, &sol, note);
        Ok(sol)
    }

    fn solve(&self, sub: Subproblem) -> Result<Vec<Id>> {
        let refs: Vec<WeightedPolygon> =
            sub.active.iter().filter(|&&i| self.reference[i as usize]).map(|i| self.polys[i].clone()).collect();
        let rw = total_weight(&refs);
        if sub.active.len() <= self.params.leaf_size || refs.is_empty() {
            return self.leaf(&sub, rw, NodeKind::Leaf, None);
        }
        if sub.depth >= self.cap {
            return self.leaf(&sub, rw, NodeKind::DepthCap, None);
        }
        let params = CutParams { universe_size: Some(self.m), ..self.params.cut.clone() };
        let seed = region_seed(self.params.seed, &sub.region);
        let (code, gamma, kind) = match cheap_balanced_cut(&refs, self.frame, self.eps, seed, &params) {
            Ok(Cut::Heavy(id)) => (format!("heavy:{id}"), self.polys[&id].vertices.clone(), NodeKind::Heavy),
            Ok(Cut::Polygon(sp)) => (bits_to_hex(&sp.encoding), sp.boundary, NodeKind::Cut),
            Err(e) => return self.leaf(&sub, rw, NodeKind::Fallback, Some(e.to_string())),
        };
        let active: Vec<WeightedPolygon> = sub.active.iter().map(|i| self.polys[i].clone()).collect();
        let cls = classify_against(&active, &gamma)?;
        let lost = cls.intersecting.iter().filter(|&&i| self.reference[i as usize]).map(|i| self.polys[i].weight).sum();
        let child = |ids: &[Id], inside: bool| {
            let mut region = sub.region.clone();
            region.push(RegionStep { cut: code.clone(), inside });
            let mut active = ids.to_vec();
            active.sort_unstable();
            Subproblem { region, active, depth: sub.depth + 1 }
        };
        let (a, b) = (child(&cls.inside, true), child(&cls.outside, false));
        let (ra, rb) = par::join(|| self.solve(a), || self.solve(b));
        let mut sol = ra?;
        sol.extend(rb?);
        sol.sort_unstable();
        self.record(&sub, rw, lost, kind, &sol, None);
        Ok(sol)
    }
}

/// Recursion on cheap balanced cuts of `reference` restricted to each
/// subproblem. Polygons crossing a cut are discarded, and leaves are solved
/// exactly. Weights are normalized first.
pub fn solve_oracle_guided(
    polys: &[WeightedPolygon],
    frame: &Rect,
    eps: f64,
    reference: &[Id],
    params: &QptasParams,
) -> Result<QptasSolution> {
    let by_id: HashMap<Id, &WeightedPolygon> = polys.iter().map(|p| (p.id, p)).collect();
    if by_id.len() != polys.len() {
        return Err(Error::InvalidInput("duplicate polygon ids".into()));
    }
    let refs: Vec<WeightedPolygon> = reference
        .iter()
        .map(|i| by_id.get(i).map(|p| (*p).clone()).ok_or_else(|| Error::InvalidInput(format!("unknown reference id {i}"))))
        .collect::<Result<_>>()?;
    if !is_independent_set(&refs) {
        return Err(Error::InvalidInput("reference is not an independent set".into()));
    }
    let norm = normalize_weights(polys, eps)?;
    let mut is_ref = vec![false; polys.iter().map(|p| p.id as usize + 1).max().unwrap_or(0)];
    for &i in reference {
        is_ref[i as usize] = true;
    }
    let kept: HashMap<Id, &WeightedPolygon> = norm.iter().map(|p| (p.id, p)).collect();
    let dropped: Vec<Id> = {
        let mut d: Vec<Id> = reference.iter().copied().filter(|i| !kept.contains_key(i)).collect();
        d.sort_unstable();
        d
    };
    let m = polys.len();
    let g = Guided {
        polys: kept,
        reference: is_ref,
        frame,
        eps,
        m,
        cap: depth_cap(m, eps, params.depth_factor),
        params,
        nodes: Mutex::new(Vec::new()),
        memo: Mutex::new(HashMap::new()),
    };
    let mut active: Vec<Id> = norm.iter().map(|p| p.id).collect();
    active.sort_unstable();
    let ids = g.solve(Subproblem { region: Vec::new(), active, depth: 0 })?;
    let mut nodes = g.nodes.into_inner().unwrap();
    nodes.sort_by(|a, b| a.region.cmp(&b.region));
    let mut levels: BTreeMap<usize, LevelAudit> = BTreeMap::new();
    for n in &nodes {
        let l = levels.entry(n.depth).or_insert(LevelAudit { depth: n.depth, reference_weight: 0, lost_weight: 0 });
        l.reference_weight += n.reference_weight;
        l.lost_weight += n.lost_weight;
    }
    let chosen: Vec<WeightedPolygon> = ids.iter().map(|i| by_id[i].clone()).collect();
    if !is_independent_set(&chosen) {
        return Err(Error::Structural("recursion returned intersecting polygons".into()));
    }
    let audit = Audit {
        eps,
        m,
        depth_cap: g.cap,
        max_depth: nodes.iter().map(|n| n.depth).max().unwrap_or(0),
        reference_weight: reference.iter().filter_map(|i| g.polys.get(i)).map(|p| p.weight).sum(),
        dropped_by_normalization: dropped,
        total_lost: nodes.iter().map(|n| n.lost_weight).sum(),
        levels: levels.into_values().collect(),
        fallbacks: nodes.iter().filter(|n| n.kind == NodeKind::Fallback || n.note.is_some()).count(),
        nodes,
    };
    Ok(QptasSolution {
        normalized_weight: ids.iter().map(|i| g.polys[i].weight).sum(),
        weight: total_weight(&chosen),
        ids,
        audit,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeuristicSolution {
    pub ids: Vec<Id>,
    pub weight: u64,
    /// Subproblems expanded.
    pub nodes: usize,
}

/// Axis-parallel line through a vertex coordinate; polygons crossing it are
/// discarded and each side is solved on its own.
#[derive(Clone, Debug)]
struct LineCut {
    crossing: u64,
    low: Vec<usize>,
    high: Vec<usize>,
    low_w: u64,
    high_w: u64,
}

struct Heuristic<'a> {
    polys: &'a [WeightedPolygon],
    bounds: Vec<[(f64, f64); 2]>,
    coords: [Vec<crate::num::Rat>; 2],
    budget: usize,
    leaf: usize,
    eps: f64,
    log_m: f64,
    expanded: AtomicUsize,
    work_cap: usize,
    memo: Mutex<HashMap<Vec<usize>, (u64, Vec<usize>)>>,
}

impl Heuristic<'_> {
    fn weight(&self, set: &[usize]) -> u64 {
        set.iter().map(|&i| self.polys[i].weight).sum()
    }

    fn exact(&self, set: &[usize]) -> Result<(u64, Vec<usize>)> {
        let sub: Vec<WeightedPolygon> = set.iter().map(|&i| self.polys[i].clone()).collect();
        let (ids, _) = solve_leaf(&sub)?;
        let pick: Vec<usize> = set.iter().copied().filter(|&i| ids.contains(&self.polys[i].id)).collect();
        Ok((self.weight(&pick), pick))
    }

    fn lines(&self, set: &[usize]) -> Vec<LineCut> {
        let mut out = Vec::new();
        for axis in 0..2 {
            let lo = set.iter().map(|&i| self.bounds[i][axis].0).fold(f64::INFINITY, f64::min);
            let hi = set.iter().map(|&i| self.bounds[i][axis].1).fold(f64::NEG_INFINITY, f64::max);
            for c in &self.coords[axis] {
                let cf = c.to_f64();
                if cf <= lo || cf >= hi {
                    continue;
                }
                let mut cut = LineCut { crossing: 0, low: Vec::new(), high: Vec::new(), low_w: 0, high_w: 0 };
                for &i in set {
                    let p = &self.polys[i];
                    let get = |v: &Point| if axis == 0 { v.x.clone() } else { v.y.clone() };
                    let below = p.vertices.iter().all(|v| get(v) <= *c);
                    let above = p.vertices.iter().all(|v| get(v) >= *c);
                    if below {
                        cut.low.push(i);
                        cut.low_w += p.weight;
                    } else if above {
                        cut.high.push(i);
                        cut.high_w += p.weight;
                    } else {
                        cut.crossing += p.weight;
                    }
                }
                if !cut.low.is_empty() && !cut.high.is_empty() {
                    out.push(cut);
                }
            }
        }
        let total = self.weight(set) as f64;
        let cheap = |c: &LineCut| c.crossing as f64 * self.log_m <= self.eps * total;
        out.sort_by(|a, b| {
            let ka = (!cheap(a), if cheap(a) { a.low_w.max(a.high_w) } else { a.crossing }, a.crossing);
            let kb = (!cheap(b), if cheap(b) { b.low_w.max(b.high_w) } else { b.crossing }, b.crossing);
            ka.cmp(&kb)
        });
        out.dedup_by(|a, b| a.low == b.low && a.high == b.high);
        out
    }

    fn solve(&self, set: Vec<usize>) -> Result<(u64, Vec<usize>)> {
        if let Some(r) = self.memo.lock().unwrap().get(&set) {
            return Ok(r.clone());
        }
        let total = self.weight(&set);
        let r = if set.len() <= self.leaf {
            self.exact(&set)?
        } else {
            let n = self.expanded.fetch_add(1, Ordering::Relaxed);
            let width = if n < self.work_cap { self.budget } else { 1 };
            let cuts = self.lines(&set);
            let mut best: Option<(u64, Vec<usize>)> = None;
            for c in cuts.into_iter().take(width) {
                let floor = best.as_ref().map_or(0, |b| b.0);
                if total - c.crossing <= floor && best.is_some() {
                    continue;
                }
                let (a, b) = par::join(|| self.solve(c.low.clone()), || self.solve(c.high.clone()));
                let (a, b) = (a?, b?);
                if best.as_ref().is_none_or(|x| a.0 + b.0 > x.0) {
                    let mut pick = a.1;
                    pick.extend(b.1);
                    best = Some((a.0 + b.0, pick));
                }
                if best.as_ref().is_some_and(|x| x.0 == total) {
                    break;
                }
            }
            match best {
                Some(b) => b,
                None => self.exact(&set)?,
            }
        };
        self.memo.lock().unwrap().insert(set, r.clone());
        Ok(r)
    }
}

/// Branch and bound over axis-parallel cuts through vertex coordinates, up
/// to `budget` candidates per subproblem, with exact leaves. Returns a
/// feasible set without an approximation guarantee.
pub fn solve_heuristic(polys: &[WeightedPolygon], eps: f64, budget: usize) -> Result<HeuristicSolution> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidInput(format!("eps = {eps} must lie in (0, 1)")));
    }
    if budget == 0 {
        let r = mwis_polygons(polys)?;
        return Ok(HeuristicSolution { ids: r.ids, weight: r.weight, nodes: 0 });
    }
    let mut coords: [Vec<crate::num::Rat>; 2] = [Vec::new(), Vec::new()];
    for p in polys {
        for v in &p.vertices {
            coords[0].push(v.x.clone());
            coords[1].push(v.y.clone());
        }
    }
    for c in &mut coords {
        c.sort();
        c.dedup();
    }
    let bounds = polys
        .iter()
        .map(|p| {
            let b = p.bbox();
            [(b.lo.x.to_f64(), b.hi.x.to_f64()), (b.lo.y.to_f64(), b.hi.y.to_f64())]
        })
        .collect();
    let h = Heuristic {
        polys,
        bounds,
        coords,
        budget,
        leaf: 12,
        eps,
        log_m: (polys.len().max(2) as f64).log2(),
        expanded: AtomicUsize::new(0),
        work_cap: 64 * budget,
        memo: Mutex::new(HashMap::new()),
    };
    let (weight, pick) = h.solve((0..polys.len()).collect())?;
    let mut ids: Vec<Id> = pick.iter().map(|&i| polys[i].id).collect();
    ids.sort_unstable();
    Ok(HeuristicSolution { ids, weight, nodes: h.expanded.load(Ordering::Relaxed) })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationCaps {
    pub max_polygons: usize,
    pub max_coordinate: i64,
}

impl Default for EnumerationCaps {
    fn default() -> Self {
        EnumerationCaps { max_polygons: 8, max_coordinate: 16 }
    }
}

/// Every axis-parallel rectangle with integer corners in the bounding grid
/// is tried as a cut of every subproblem, recursing on both sides down to
/// independent sets. Toy scale only.
pub fn solve_enumerative(polys: &[WeightedPolygon], eps: f64, caps: &EnumerationCaps) -> Result<HeuristicSolution> {
    let m = polys.len();
    if m > caps.max_polygons {
        return Err(Error::CapExceeded(format!("enumeration allows {} polygons, got {m}", caps.max_polygons)));
    }
    let n = caps.max_coordinate;
    let in_grid = |v: &Point| v.x.is_integer() && v.y.is_integer() && v.x.to_f64() >= 0.0 && v.y.to_f64() >= 0.0
        && v.x.to_f64() <= n as f64 && v.y.to_f64() <= n as f64;
    if !polys.iter().all(|p| p.vertices.iter().all(in_grid)) {
        return Err(Error::CapExceeded(format!("enumeration needs integer coordinates in [0, {n}]")));
    }
    let norm = normalize_weights(polys, eps)?;
    let cap = depth_cap(m, eps, 4.0);
    let boxes: Vec<Rect> = (0..=n)
        .flat_map(|x1| (x1 + 1..=n).flat_map(move |x2| (0..=n).flat_map(move |y1| (y1 + 1..=n).map(move |y2| Rect::int(x1, x2, y1, y2)))))
        .collect();
    let masks: Vec<(u64, u64)> = par::map(&boxes, |r| {
        let ring = r.corners();
        let (mut inside, mut outside) = (0u64, 0u64);
        for (i, p) in norm.iter().enumerate() {
            let b = p.bbox();
            if b.lo.x >= r.x1 && b.hi.x <= r.x2 && b.lo.y >= r.y1 && b.hi.y <= r.y2 {
                inside |= 1 << i;
            } else if !interiors_intersect(&p.vertices, &ring) {
                outside |= 1 << i;
            }
        }
        (inside, outside)
    });
    let mut splits: Vec<(u64, u64)> = masks;
    splits.sort_unstable();
    splits.dedup();
    let adj: Vec<u64> = (0..norm.len())
        .map(|i| (0..norm.len()).filter(|&j| j != i && interiors_intersect(&norm[i].vertices, &norm[j].vertices)).fold(0, |a, j| a | 1 << j))
        .collect();
    let w = |s: u64| (0..norm.len()).filter(|&i| s >> i & 1 == 1).map(|i| norm[i].weight).sum::<u64>();
    let nodes = AtomicUsize::new(0);
    fn go(
        s: u64,
        depth: usize,
        cap: usize,
        splits: &[(u64, u64)],
        adj: &[u64],
        w: &dyn Fn(u64) -> u64,
        norm: &[WeightedPolygon],
        memo: &mut HashMap<u64, (u64, u64)>,
        nodes: &AtomicUsize,
    ) -> Result<(u64, u64)> {
        if let Some(&r) = memo.get(&s) {
            return Ok(r);
        }
        let independent = (0..adj.len()).all(|i| s >> i & 1 == 0 || adj[i] & s == 0);
        let r = if independent {
            (w(s), s)
        } else if depth >= cap {
            let sub: Vec<WeightedPolygon> = (0..norm.len()).filter(|&i| s >> i & 1 == 1).map(|i| norm[i].clone()).collect();
            let ids = mwis_polygons(&sub)?.ids;
            let pick = (0..norm.len()).filter(|&i| ids.contains(&norm[i].id)).fold(0, |a, i| a | 1 << i);
            (w(pick), pick)
        } else {
            nodes.fetch_add(1, Ordering::Relaxed);
            let mut best = (0, 0);
            let mut seen = std::collections::HashSet::new();
            for &(i, o) in splits {
                let (a, b) = (i & s, o & s);
                if a == 0 || b == 0 || !seen.insert((a, b)) {
                    continue;
                }
                let x = go(a, depth + 1, cap, splits, adj, w, norm, memo, nodes)?;
                let y = go(b, depth + 1, cap, splits, adj, w, norm, memo, nodes)?;
                if x.0 + y.0 > best.0 {
                    best = (x.0 + y.0, x.1 | y.1);
                }
            }
            best
        };
        memo.insert(s, r);
        Ok(r)
    }
    let all = if norm.is_empty() { 0 } else { u64::MAX >> (64 - norm.len()) };
    let (_, pick) = go(all, 0, cap, &splits, &adj, &w, &norm, &mut HashMap::new(), &nodes)?;
    let chosen: Vec<&WeightedPolygon> = (0..norm.len()).filter(|&i| pick >> i & 1 == 1).map(|i| &norm[i]).collect();
    let mut ids: Vec<Id> = chosen.iter().map(|p| p.id).collect();
    ids.sort_unstable();
    let weight = polys.iter().filter(|p| ids.contains(&p.id)).map(|p| p.weight).sum();
    Ok(HeuristicSolution { ids, weight, nodes: nodes.load(Ordering::Relaxed) })
}
