//! Versioned JSON instance files and the seeded generators that emit them.

use crate::error::{CliError, Result};
use geomis_blocks::grid::{build_grid, Item};
use geomis_core::gen::{self, Shape, Weights};
use geomis_core::geom::{closures_intersect, general_position, in_general_position, is_simple, Frame};
use geomis_core::{Point, Rat, WeightedPolygon};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::HashSet;
use std::path::Path;

pub const VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Polygons,
    Rectangles,
    Blocks,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolygonEntry {
    pub id: u32,
    pub vertices: Vec<[Rat; 2]>,
    pub weight: u64,
}

/// Open rectangle `(x1, x2) x (y1, y2)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RectEntry {
    pub id: u32,
    pub x1: Rat,
    pub x2: Rat,
    pub y1: Rat,
    pub y2: Rat,
    pub weight: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Polygon(PolygonEntry),
    Rect(RectEntry),
}

impl Entry {
    pub fn id(&self) -> u32 {
        match self {
            Entry::Polygon(p) => p.id,
            Entry::Rect(r) => r.id,
        }
    }

    pub fn weight(&self) -> u64 {
        match self {
            Entry::Polygon(p) => p.weight,
            Entry::Rect(r) => r.weight,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub version: u32,
    pub kind: Kind,
    /// Side of the frame `[0, n]^2`.
    pub n: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    pub items: Vec<Entry>,
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

impl Instance {
    pub fn from_polygons(n: i64, polys: &[WeightedPolygon]) -> Instance {
        let items = polys
            .iter()
            .map(|p| Entry::Polygon(PolygonEntry { id: p.id, vertices: p.vertices.iter().map(|v| [v.x.clone(), v.y.clone()]).collect(), weight: p.weight }))
            .collect();
        Instance { version: VERSION, kind: Kind::Polygons, n, delta: None, eps: None, items }
    }

    pub fn from_items(kind: Kind, n: i64, delta: Option<f64>, items: &[Item]) -> Instance {
        let items = items
            .iter()
            .map(|it| {
                Entry::Rect(RectEntry { id: it.id, x1: Rat::int(it.x1), x2: Rat::int(it.x2), y1: Rat::int(it.y1), y2: Rat::int(it.y2), weight: it.weight })
            })
            .collect();
        Instance { version: VERSION, kind, n, delta, eps: None, items }
    }

    pub fn parse(text: &str) -> Result<Instance> {
        let inst: Instance = serde_json::from_str(text)?;
        inst.validate()?;
        Ok(inst)
    }

    pub fn read(path: &Path) -> Result<Instance> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
        Instance::parse(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serializes")
    }

    /// First 16 hex digits of the SHA-256 of the compact JSON form.
    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("instance serializes");
        hex::encode(&Sha256::digest(&bytes)[..8])
    }

    pub fn ids(&self) -> Vec<u32> {
        self.items.iter().map(Entry::id).collect()
    }

    pub fn frame(&self) -> Frame {
        Frame::square(self.n)
    }

    /// Schema checks: version, unique ids, positive weights, item shapes
    /// matching the kind, items inside the frame.
    pub fn validate(&self) -> Result<()> {
        if self.version != VERSION {
            return Err(bad(format!("unsupported instance version {} (expected {VERSION})", self.version)));
        }
        if self.n <= 0 {
            return Err(bad(format!("frame size n = {} must be positive", self.n)));
        }
        let mut ids = HashSet::new();
        for e in &self.items {
            if !ids.insert(e.id()) {
                return Err(bad(format!("duplicate item id {}", e.id())));
            }
            if e.weight() == 0 {
                return Err(bad(format!("item {} has zero weight", e.id())));
            }
        }
        match self.kind {
            Kind::Polygons => {
                for p in self.polygons()? {
                    if !self.frame().strictly_contains(&p) {
                        return Err(geomis_core::Error::OutsideFrame(p.id).into());
                    }
                }
            }
            Kind::Rectangles | Kind::Blocks => {
                let items = self.rects()?;
                if let Some(delta) = self.delta {
                    let g = build_grid(self.n, delta)?;
                    for it in &items {
                        let ok = if self.kind == Kind::Blocks { it.is_block(&g) } else { it.is_large(&g) };
                        if !ok {
                            return Err(bad(format!("item {} is not {} for delta = {delta}", it.id, if self.kind == Kind::Blocks { "a delta-large block" } else { "delta-large" })));
                        }
                    }
                } else if self.kind == Kind::Blocks {
                    return Err(bad("block instances need delta"));
                }
            }
        }
        Ok(())
    }

    /// Items as polygons; rectangles become four-vertex polygons.
    pub fn polygons(&self) -> Result<Vec<WeightedPolygon>> {
        self.items
            .iter()
            .map(|e| match e {
                Entry::Polygon(p) => {
                    let vs = p.vertices.iter().map(|[x, y]| Point::new(x.clone(), y.clone())).collect();
                    Ok(WeightedPolygon::new(p.id, vs, p.weight)?)
                }
                Entry::Rect(r) => {
                    let rect = geomis_core::Rect::new(r.x1.clone(), r.x2.clone(), r.y1.clone(), r.y2.clone()).weighted(r.weight);
                    Ok(WeightedPolygon::from_rect(r.id, &rect))
                }
            })
            .collect()
    }

    /// Items as integer rectangles inside `[0, n]^2`.
    pub fn rects(&self) -> Result<Vec<Item>> {
        let int = |v: &Rat, id: u32| v.to_i64().ok_or_else(|| bad(format!("item {id}: rectangle coordinate {v} is not an integer")));
        self.items
            .iter()
            .map(|e| match e {
                Entry::Rect(r) => {
                    let it = Item::new(r.id, int(&r.x1, r.id)?, int(&r.x2, r.id)?, int(&r.y1, r.id)?, int(&r.y2, r.id)?, r.weight);
                    if it.x1 >= it.x2 || it.y1 >= it.y2 {
                        return Err(bad(format!("item {} is empty", r.id)));
                    }
                    if !it.inside_square(self.n) {
                        return Err(bad(format!("item {} is not inside [0,{}]^2", r.id, self.n)));
                    }
                    Ok(it)
                }
                Entry::Polygon(p) => Err(bad(format!("item {} is a polygon in a {:?} instance", p.id, self.kind))),
            })
            .collect()
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()).map_err(|source| CliError::Io { path: path.into(), source })
    }
}

/// `equal` or `uniform:lo:hi`.
pub fn parse_weights(s: &str) -> Result<Weights> {
    if s == "equal" {
        return Ok(Weights::Equal);
    }
    let parts: Vec<&str> = s.split(':').collect();
    if let ["uniform", lo, hi] = parts[..] {
        let lo: u64 = lo.parse().map_err(|_| bad(format!("bad weight bound {lo:?}")))?;
        let hi: u64 = hi.parse().map_err(|_| bad(format!("bad weight bound {hi:?}")))?;
        if lo == 0 || lo > hi {
            return Err(bad(format!("weights need 1 <= lo <= hi, got {lo}..{hi}")));
        }
        return Ok(Weights::Uniform { lo, hi });
    }
    Err(bad(format!("weights must be `equal` or `uniform:lo:hi`, got {s:?}")))
}

/// Applies the general-position shear, then scales by `K / (K + 1)` so the
/// image of the frame stays inside `[0, n]^2`. Integer inputs can still tie
/// in L-infinity distance (a critical square touching four sites); the
/// shear breaks such ties.
pub fn shear_into_frame(polys: &[WeightedPolygon]) -> Vec<WeightedPolygon> {
    let (sheared, shear) = general_position(polys);
    let scale = &shear.k / &(&shear.k + &Rat::one());
    sheared
        .into_iter()
        .map(|p| WeightedPolygon { vertices: p.vertices.iter().map(|v| Point::new(&v.x * &scale, &v.y * &scale)).collect(), ..p })
        .collect()
}

/// `m` pairwise disjoint polygons strictly inside the frame, in general
/// position, checked exactly before they are returned. With `shear`, the
/// coordinates are sheared and become rationals.
pub fn gen_disjoint_polygons(m: usize, n: i64, seed: u64, shape: Shape, weights: Weights, shear: bool) -> Result<Instance> {
    if m == 0 {
        return Err(bad("m must be at least 1"));
    }
    let mut polys = gen::disjoint_polygons(m, n, seed, shape, weights)?;
    if shear {
        polys = shear_into_frame(&polys);
    }
    let frame = Frame::square(n);
    for (i, p) in polys.iter().enumerate() {
        if !is_simple(&p.vertices) || !frame.strictly_contains(p) {
            return Err(geomis_core::Error::Structural(format!("generated polygon {} failed validation", p.id)).into());
        }
        for q in &polys[i + 1..] {
            if closures_intersect(&p.vertices, &q.vertices) {
                return Err(geomis_core::Error::Structural(format!("generated polygons {} and {} meet", p.id, q.id)).into());
            }
        }
    }
    if !in_general_position(&polys) {
        return Err(geomis_core::Error::Structural("generated instance is not in general position".into()).into());
    }
    Ok(Instance::from_polygons(n, &polys))
}

/// `m` convex polygons with sides up to `size` that may overlap.
pub fn gen_overlapping_polygons(m: usize, n: i64, size: i64, seed: u64, shape: Shape, weights: Weights) -> Result<Instance> {
    let polys = gen::overlapping_polygons(m, n, size, seed, shape, weights)?;
    let inst = Instance::from_polygons(n, &polys);
    inst.validate()?;
    Ok(inst)
}

/// `m` delta-large rectangles (unit-thickness blocks when `blocks_only`)
/// with integer coordinates in `[0, n]^2`; they may overlap.
pub fn gen_delta_large(m: usize, n: i64, delta: f64, seed: u64, blocks_only: bool, max_weight: u64) -> Result<Instance> {
    let items = geomis_blocks::grid::gen_delta_large(m, n, delta, seed, blocks_only, max_weight)?;
    let kind = if blocks_only { Kind::Blocks } else { Kind::Rectangles };
    let inst = Instance::from_items(kind, n, Some(delta), &items);
    inst.validate().map_err(|e| geomis_core::Error::Structural(format!("generated instance failed validation: {e}")))?;
    Ok(inst)
}
