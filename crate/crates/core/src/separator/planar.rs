//! Regions of a cutting as a planar map: labelled boundary loops, elementary
//! boundary pieces shared by neighbouring regions, and the dual graph whose
//! rotation system follows each region's boundary.

use super::tri::PlaneGraph;
use crate::corridor::{Corridor, FRAME};
use crate::cuttings::Cutting;
use crate::error::{Error, Result};
use crate::geom::{locate, BBox, Id, Loc, Point, WeightedPolygon};
use crate::num::Rat;
use serde::{Deserialize, Serialize};
use std::collections::{HashMap, HashSet};

/// What a boundary segment of a region is made of.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    /// Spoke from an axis vertex to its contact on `site`.
    Spoke { vertex: Point, site: Id },
    /// Part of the boundary of `site` (a polygon or the frame).
    Chain { site: Id },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegionKind {
    /// Index into the decomposition's corridor list.
    Corridor(usize),
    Island(Id),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    pub kind: RegionKind,
    /// Boundary loops with the region on the left; the first one is outer.
    pub loops: Vec<Vec<Point>>,
    /// Label of the segment leaving each loop point.
    pub labels: Vec<Vec<Label>>,
    pub bbox: BBox,
}

impl Region {
    /// Closed-set membership.
    pub fn contains(&self, p: &Point) -> bool {
        if !self.bbox.meets(&BBox { lo: p.clone(), hi: p.clone() }) || locate(p, &self.loops[0]) == Loc::Outside {
            return false;
        }
        self.loops[1..].iter().all(|h| locate(p, h) != Loc::Inside)
    }
}

fn corridor_region(i: usize, c: &Corridor) -> Result<Region> {
    let kind = RegionKind::Corridor(i);
    let bbox = BBox::of(&c.boundary);
    let frame_chain = |n: usize| vec![Label::Chain { site: FRAME }; n];
    if let Some(h) = &c.hole {
        let site = c.defining_set[0];
        let hole: Vec<Point> = h.iter().rev().cloned().collect();
        let labels = vec![frame_chain(c.boundary.len()), vec![Label::Chain { site }; hole.len()]];
        return Ok(Region { kind, loops: vec![c.boundary.clone(), hole], labels, bbox });
    }
    if c.spokes.is_empty() {
        return Ok(Region { kind, loops: vec![c.boundary.clone()], labels: vec![frame_chain(c.boundary.len())], bbox });
    }
    let (v1, b) = (&c.spokes[0].from, c.spokes[0].site);
    let (v2, a) = (&c.spokes[1].from, c.spokes[2].site);
    let mut seq: Vec<(Point, Label)> = vec![(v1.clone(), Label::Spoke { vertex: v1.clone(), site: b })];
    for (k, p) in c.floor.iter().enumerate() {
        let l = if k + 1 < c.floor.len() { Label::Chain { site: b } } else { Label::Spoke { vertex: v2.clone(), site: b } };
        seq.push((p.clone(), l));
    }
    seq.push((v2.clone(), Label::Spoke { vertex: v2.clone(), site: a }));
    for (k, p) in c.ceiling.iter().enumerate() {
        let l = if k + 1 < c.ceiling.len() { Label::Chain { site: a } } else { Label::Spoke { vertex: v1.clone(), site: a } };
        seq.push((p.clone(), l));
    }
    // a repeated point keeps the label of its later copy
    let mut out: Vec<(Point, Label)> = Vec::with_capacity(seq.len());
    for (p, l) in seq {
        if out.last().is_some_and(|q| q.0 == p) {
            out.pop();
        }
        out.push((p, l));
    }
    while out.len() > 1 && out[0].0 == out[out.len() - 1].0 {
        out.pop();
    }
    let (pts, labels): (Vec<Point>, Vec<Label>) = out.into_iter().unzip();
    if pts != c.boundary {
        return Err(Error::Structural(format!("corridor {i} boundary does not match its spokes and chains")));
    }
    Ok(Region { kind, loops: vec![pts], labels: vec![labels], bbox })
}

/// Corridors in decomposition order, then islands by id.
pub fn regions(cutting: &Cutting, universe: &[WeightedPolygon]) -> Result<Vec<Region>> {
    let mut out = Vec::new();
    for (i, c) in cutting.decomposition.corridors.iter().enumerate() {
        out.push(corridor_region(i, c)?);
    }
    let by_id: HashMap<Id, &WeightedPolygon> = universe.iter().map(|p| (p.id, p)).collect();
    let mut islands = cutting.islands.clone();
    islands.sort_unstable();
    for id in islands {
        let p = by_id.get(&id).ok_or_else(|| Error::InvalidInput(format!("island {id} missing from the polygon list")))?;
        out.push(Region {
            kind: RegionKind::Island(id),
            loops: vec![p.vertices.clone()],
            labels: vec![vec![Label::Chain { site: id }; p.vertices.len()]],
            bbox: p.bbox(),
        });
    }
    Ok(out)
}

/// Maximal boundary segment between two consecutive breakpoints of its line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Piece {
    pub a: Point,
    pub b: Point,
    /// Region walking a -> b, with the label of its segment.
    pub left: Option<(usize, Label)>,
    /// Region walking b -> a.
    pub right: Option<(usize, Label)>,
}

impl Piece {
    /// The region across the piece from `r`, walking in direction `forward`.
    pub fn across(&self, forward: bool) -> Option<usize> {
        if forward {
            self.right.as_ref().map(|x| x.0)
        } else {
            self.left.as_ref().map(|x| x.0)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanarMap {
    pub regions: Vec<Region>,
    pub pieces: Vec<Piece>,
    /// Per region and loop: pieces in walking order, `true` when walked a -> b.
    pub walks: Vec<Vec<Vec<(usize, bool)>>>,
    /// Position `(loop, index)` of each piece in the walks of its left and
    /// right region.
    pub at: Vec<[Option<(usize, usize)>; 2]>,
}

type LineKey = (Rat, Rat, Rat);

/// Supporting line of p -> q with a parameter increasing along a fixed
/// direction of that line.
fn line_of(p: &Point, q: &Point) -> (LineKey, Rat, Rat) {
    let (dx, dy) = q.sub(p);
    let (ux, uy) = if !dx.is_zero() { (Rat::one(), &dy / &dx) } else { (Rat::zero(), Rat::one()) };
    let off = &(&uy * &p.x) - &(&ux * &p.y);
    let t = |z: &Point| &(&ux * &z.x) + &(&uy * &z.y);
    let (tp, tq) = (t(p), t(q));
    ((ux, uy, off), tp, tq)
}

impl PlanarMap {
    pub fn new(regions: Vec<Region>) -> Result<PlanarMap> {
        struct Seg {
            lo: Rat,
            hi: Rat,
            forward: bool,
            region: usize,
            lp: usize,
            k: usize,
        }
        let mut lines: HashMap<LineKey, (Vec<Seg>, HashMap<Rat, Point>)> = HashMap::new();
        for (ri, r) in regions.iter().enumerate() {
            for (li, lp) in r.loops.iter().enumerate() {
                let n = lp.len();
                for k in 0..n {
                    let (p, q) = (&lp[k], &lp[(k + 1) % n]);
                    let (key, tp, tq) = line_of(p, q);
                    let e = lines.entry(key).or_default();
                    e.1.insert(tp.clone(), p.clone());
                    e.1.insert(tq.clone(), q.clone());
                    let forward = tp < tq;
                    let (lo, hi) = if forward { (tp, tq) } else { (tq, tp) };
                    e.0.push(Seg { lo, hi, forward, region: ri, lp: li, k });
                }
            }
        }
        let mut per_seg: Vec<Vec<Vec<Vec<(Rat, usize, bool)>>>> =
            regions.iter().map(|r| r.loops.iter().map(|lp| vec![Vec::new(); lp.len()]).collect()).collect();
        let mut pieces = Vec::new();
        let mut keys: Vec<&LineKey> = lines.keys().collect();
        keys.sort();
        for key in keys {
            let (segs, pts) = &lines[key];
            let mut ts: Vec<&Rat> = pts.keys().collect();
            ts.sort();
            for w in ts.windows(2) {
                let (t0, t1) = (w[0], w[1]);
                let mut piece = Piece { a: pts[t0].clone(), b: pts[t1].clone(), left: None, right: None };
                let id = pieces.len();
                let mut any = false;
                for s in segs.iter().filter(|s| &s.lo <= t0 && &s.hi >= t1) {
                    any = true;
                    let label = regions[s.region].labels[s.lp][s.k].clone();
                    let slot = if s.forward { &mut piece.left } else { &mut piece.right };
                    if slot.is_some() {
                        return Err(Error::Structural(format!(
                            "regions overlap along the segment {:?} - {:?}",
                            piece.a, piece.b
                        )));
                    }
                    *slot = Some((s.region, label));
                    let order = if s.forward { t0.clone() } else { -t0 };
                    per_seg[s.region][s.lp][s.k].push((order, id, s.forward));
                }
                if any {
                    pieces.push(piece);
                }
            }
        }
        let walks = per_seg
            .into_iter()
            .map(|loops| {
                loops
                    .into_iter()
                    .map(|segs| {
                        segs.into_iter()
                            .flat_map(|mut v| {
                                v.sort_by(|x, y| x.0.cmp(&y.0));
                                v.into_iter().map(|(_, id, f)| (id, f))
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect::<Vec<Vec<Vec<(usize, bool)>>>>();
        let mut at = vec![[None, None]; pieces.len()];
        for r in &walks {
            for (li, w) in r.iter().enumerate() {
                for (i, &(p, f)) in w.iter().enumerate() {
                    at[p][usize::from(!f)] = Some((li, i));
                }
            }
        }
        Ok(PlanarMap { regions, pieces, walks, at })
    }

    /// Consecutive pieces `x, y` of a walk are also consecutive, as `y, x`,
    /// in the walk of the region across them.
    fn continues(&self, x: (usize, bool), y: (usize, bool)) -> bool {
        let slot = usize::from(x.1);
        let (Some((lx, ix)), Some((ly, iy))) = (self.at[x.0][slot], self.at[y.0][usize::from(y.1)]) else {
            return false;
        };
        let Some(q) = self.pieces[x.0].across(x.1) else { return false };
        lx == ly && ix == (iy + 1) % self.walks[q][lx].len()
    }

    /// Maximal runs of a region loop along one neighbour that are also
    /// contiguous on the neighbour's side: `(neighbour, pieces)`. Runs along
    /// the frame outline have no neighbour.
    pub fn runs(&self, r: usize, lp: usize) -> Vec<(Option<usize>, Vec<usize>)> {
        let walk = &self.walks[r][lp];
        let nb: Vec<Option<usize>> = walk.iter().map(|&(p, f)| self.pieces[p].across(f)).collect();
        let n = walk.len();
        let breaks = |i: usize| {
            let j = (i + n - 1) % n;
            nb[i] != nb[j] || (nb[i].is_some() && !self.continues(walk[j], walk[i]))
        };
        let Some(start) = (0..n).find(|&i| breaks(i)) else {
            return vec![(nb[0], walk.iter().map(|x| x.0).collect())];
        };
        let mut out: Vec<(Option<usize>, Vec<usize>)> = Vec::new();
        for k in 0..n {
            let i = (start + k) % n;
            if k == 0 || breaks(i) {
                out.push((nb[i], vec![walk[i].0]));
            } else {
                out.last_mut().unwrap().1.push(walk[i].0);
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualGraph {
    pub map: PlanarMap,
    /// Vertex `i` is region `i`; weights come from the assigned polygons.
    pub graph: PlaneGraph,
    /// Region credited with each assigned polygon.
    pub assignment: Vec<(Id, usize)>,
}

/// Region whose closure holds the leftmost vertex of `p` (lowest index on
/// ties); sample polygons map to their own island.
fn assign(map: &PlanarMap, island_of: &HashMap<Id, usize>, p: &WeightedPolygon) -> Result<usize> {
    if let Some(&r) = island_of.get(&p.id) {
        return Ok(r);
    }
    let v = p.leftmost();
    map.regions
        .iter()
        .position(|r| r.contains(v))
        .ok_or_else(|| Error::Structural(format!("leftmost vertex of polygon {} lies in no region", p.id)))
}

/// Dual graph of a cutting: a vertex per region, an edge per maximal shared
/// boundary run, neighbours ordered counterclockwise along each boundary.
pub fn dual_graph(cutting: &Cutting, universe: &[WeightedPolygon], assigned: &[WeightedPolygon]) -> Result<DualGraph> {
    let map = PlanarMap::new(regions(cutting, universe)?)?;
    let n = map.regions.len();
    let mut half: HashMap<usize, Vec<(usize, usize)>> = HashMap::new();
    let mut order: Vec<Vec<usize>> = vec![Vec::new(); n];
    for r in 0..n {
        for lp in 0..map.regions[r].loops.len() {
            for (nb, run) in map.runs(r, lp) {
                if nb.is_none() {
                    continue;
                }
                let key = *run.iter().min().expect("runs are non-empty");
                let slot = half.entry(key).or_default();
                slot.push((r, order[r].len()));
                order[r].push(key);
            }
        }
    }
    let mut keys: Vec<usize> = half.keys().copied().collect();
    keys.sort_unstable();
    let mut edges = Vec::with_capacity(keys.len());
    let mut dart_of: HashMap<(usize, usize), usize> = HashMap::new();
    for key in keys {
        let ends = &half[&key];
        if ends.len() != 2 {
            return Err(Error::Structural(format!("boundary run starting at piece {key} is shared by {} regions", ends.len())));
        }
        let e = edges.len();
        edges.push([ends[0].0, ends[1].0]);
        dart_of.insert(ends[0], 2 * e);
        dart_of.insert(ends[1], 2 * e + 1);
    }
    let rot: Vec<Vec<usize>> = (0..n).map(|r| (0..order[r].len()).map(|i| dart_of[&(r, i)]).collect()).collect();
    let island_of: HashMap<Id, usize> = map
        .regions
        .iter()
        .enumerate()
        .filter_map(|(i, r)| match r.kind {
            RegionKind::Island(id) => Some((id, i)),
            _ => None,
        })
        .collect();
    let mut weight = vec![0u64; n];
    let mut assignment = Vec::with_capacity(assigned.len());
    let mut seen = HashSet::new();
    for p in assigned {
        if !seen.insert(p.id) {
            return Err(Error::InvalidInput(format!("polygon id {} assigned twice", p.id)));
        }
        let r = assign(&map, &island_of, p)?;
        weight[r] += p.weight;
        assignment.push((p.id, r));
    }
    let graph = PlaneGraph { edges, rot, weight, origin: (0..n).collect() };
    Ok(DualGraph { map, graph, assignment })
}
