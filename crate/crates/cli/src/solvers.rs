//! Algorithm keys shared by the subcommands and the benchmark harness.

use crate::error::{CliError, Result};
use crate::instance::{Instance, Kind};
use geomis_blocks::grid::{mwis_items, pairwise_disjoint, Item};
use geomis_blocks::solve::{solve_blocks, solve_guided, solve_rectangles, BlockCaps};
use geomis_core::geom::{general_position, in_general_position, Rect};
use geomis_core::oracle::{is_independent_set, mwis_polygons};
use geomis_core::qptas::{solve_enumerative, solve_heuristic, solve_oracle_guided, EnumerationCaps, QptasParams};
use geomis_core::{Error, WeightedPolygon};
use serde::{Deserialize, Serialize};

/// Largest instance the exact oracle accepts.
pub const ORACLE_LIMIT: usize = 60;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Exact,
    QptasOracle,
    QptasHeuristic,
    QptasEnumerate,
    Blocks,
    BlocksGuided,
    Rects,
}

impl Algorithm {
    pub fn key(self) -> &'static str {
        match self {
            Algorithm::Exact => "exact",
            Algorithm::QptasOracle => "qptas-oracle",
            Algorithm::QptasHeuristic => "qptas-heuristic",
            Algorithm::QptasEnumerate => "qptas-enumerate",
            Algorithm::Blocks => "blocks",
            Algorithm::BlocksGuided => "blocks-guided",
            Algorithm::Rects => "rects",
        }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Caps {
    pub blocks: BlockCaps,
    pub enumeration: EnumerationCaps,
    pub leaf_size: Option<usize>,
}

/// Comma-separated `key=value` overrides, e.g. `max_items=30,max_n=10`.
pub fn parse_caps(s: &str) -> Result<Caps> {
    let mut caps = Caps::default();
    for kv in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let (k, v) = kv.split_once('=').ok_or_else(|| CliError::Input(format!("cap {kv:?} is not key=value")))?;
        let num = |v: &str| v.parse::<f64>().map_err(|_| CliError::Input(format!("cap {k} = {v:?} is not a number")));
        let int = |v: &str| v.parse::<usize>().map_err(|_| CliError::Input(format!("cap {k} = {v:?} is not a count")));
        match k {
            "max_n" => caps.blocks.max_n = int(v)? as i64,
            "max_inv_eps_delta" => caps.blocks.max_inv_eps_delta = num(v)?,
            "max_items" => caps.blocks.max_items = int(v)?,
            "trail_corners" => caps.blocks.trail_corners = int(v)?,
            "max_corners" => caps.blocks.max_corners = int(v)?,
            "max_polygons" => caps.enumeration.max_polygons = int(v)?,
            "max_coordinate" => caps.enumeration.max_coordinate = int(v)? as i64,
            "leaf_size" => caps.leaf_size = Some(int(v)?),
            _ => return Err(CliError::Input(format!("unknown cap {k:?}"))),
        }
    }
    Ok(caps)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Params {
    pub eps: f64,
    pub seed: u64,
    /// Cut candidates branched on per node by the heuristic.
    pub budget: usize,
    pub caps: Caps,
}

impl Default for Params {
    fn default() -> Self {
        Params { eps: 0.5, seed: 0, budget: 4, caps: Caps::default() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Outcome {
    pub algorithm: &'static str,
    pub ids: Vec<u32>,
    pub weight: u64,
    /// One-line audit for CSV output.
    pub summary: String,
    /// Full solver output.
    pub detail: serde_json::Value,
}

fn rect_items(inst: &Instance) -> Result<Vec<Item>> {
    if inst.kind == Kind::Polygons {
        return Err(CliError::Input("this algorithm needs a rectangles or blocks instance".into()));
    }
    inst.rects()
}

fn delta(inst: &Instance) -> Result<f64> {
    inst.delta.ok_or_else(|| CliError::Input("instance has no delta".into()))
}

/// Exact optimum over the instance's intersection graph.
pub fn exact(inst: &Instance) -> Result<(u64, Vec<u32>)> {
    match inst.kind {
        Kind::Polygons => {
            let m = mwis_polygons(&inst.polygons()?)?;
            Ok((m.weight, m.ids))
        }
        _ => Ok(mwis_items(&inst.rects()?)?),
    }
}

/// Reference solution for the guided modes: the exact optimum when the
/// oracle accepts the instance, otherwise all items if they are independent.
pub fn reference(inst: &Instance) -> Result<(Vec<u32>, &'static str)> {
    if inst.items.len() <= ORACLE_LIMIT {
        return Ok((exact(inst)?.1, "exact"));
    }
    let independent = match inst.kind {
        Kind::Polygons => is_independent_set(&inst.polygons()?),
        _ => pairwise_disjoint(&inst.rects()?),
    };
    if !independent {
        return Err(Error::CapExceeded(format!(
            "no reference: {} items exceed the exact oracle's {ORACLE_LIMIT} and are not independent",
            inst.items.len()
        ))
        .into());
    }
    let mut ids = inst.ids();
    ids.sort_unstable();
    Ok((ids, "all"))
}

fn check_feasible(inst: &Instance, ids: &[u32]) -> Result<u64> {
    let (ok, weight) = match inst.kind {
        Kind::Polygons => {
            let chosen: Vec<WeightedPolygon> = inst.polygons()?.into_iter().filter(|p| ids.contains(&p.id)).collect();
            (chosen.len() == ids.len() && is_independent_set(&chosen), chosen.iter().map(|p| p.weight).sum())
        }
        _ => {
            let chosen: Vec<Item> = inst.rects()?.into_iter().filter(|p| ids.contains(&p.id)).collect();
            (chosen.len() == ids.len() && pairwise_disjoint(&chosen), chosen.iter().map(|p| p.weight).sum())
        }
    };
    if !ok {
        return Err(Error::Structural("solver returned an infeasible set".into()).into());
    }
    Ok(weight)
}

/// Polygons and frame for the corridor machinery: sheared into general
/// position when the input is not; the flag says whether that happened.
pub fn prepared(inst: &Instance) -> Result<(Vec<WeightedPolygon>, Rect, bool)> {
    let polys = inst.polygons()?;
    if in_general_position(&polys) {
        return Ok((polys, Rect::int(0, inst.n, 0, inst.n), false));
    }
    let (sheared, shear) = general_position(&polys);
    Ok((sheared, inst.frame().sheared(&shear).square, true))
}

/// Runs `alg` on `inst`; the returned set is checked for feasibility and
/// its weight recomputed from the input weights.
pub fn run(inst: &Instance, alg: Algorithm, p: &Params) -> Result<Outcome> {
    let (ids, summary, detail) = match alg {
        Algorithm::Exact => {
            let (w, ids) = exact(inst)?;
            (ids.clone(), format!("m={}", inst.items.len()), serde_json::json!({ "weight": w, "ids": ids }))
        }
        Algorithm::QptasOracle => {
            let (polys, frame, _) = prepared(inst)?;
            let (refs, source) = reference(inst)?;
            let mut params = QptasParams { seed: p.seed, ..Default::default() };
            if let Some(l) = p.caps.leaf_size {
                params.leaf_size = l;
            }
            let s = solve_oracle_guided(&polys, &frame, p.eps, &refs, &params)?;
            let a = &s.audit;
            let summary = format!(
                "reference={source};depth={}/{};lost={}/{};loss_ok={};fallbacks={}",
                a.max_depth, a.depth_cap, a.total_lost, a.reference_weight, a.loss_ok(), a.fallbacks
            );
            (s.ids.clone(), summary, serde_json::to_value(&s)?)
        }
        Algorithm::QptasHeuristic => {
            let s = solve_heuristic(&inst.polygons()?, p.eps, p.budget)?;
            (s.ids.clone(), format!("nodes={}", s.nodes), serde_json::to_value(&s)?)
        }
        Algorithm::QptasEnumerate => {
            let s = solve_enumerative(&inst.polygons()?, p.eps, &p.caps.enumeration)?;
            (s.ids.clone(), format!("nodes={}", s.nodes), serde_json::to_value(&s)?)
        }
        Algorithm::Blocks | Algorithm::Rects => {
            let items = rect_items(inst)?;
            let s = if alg == Algorithm::Blocks {
                solve_blocks(&items, inst.n, p.eps, delta(inst)?, &p.caps.blocks)?
            } else {
                solve_rectangles(&items, inst.n, p.eps, delta(inst)?, &p.caps.blocks)?
            };
            (s.ids.clone(), format!("regions={};trail_regions={};walks={}", s.regions, s.trail_regions, s.walks), serde_json::to_value(&s)?)
        }
        Algorithm::BlocksGuided => {
            let items = rect_items(inst)?;
            let (refs, source) = reference(inst)?;
            let s = solve_guided(&items, inst.n, p.eps, delta(inst)?, &refs, &p.caps.blocks)?;
            let summary = format!("reference={source};reference_weight={};faces={}", s.reference_weight, s.faces.len());
            (s.ids.clone(), summary, serde_json::to_value(&s)?)
        }
    };
    let weight = check_feasible(inst, &ids)?;
    Ok(Outcome { algorithm: alg.key(), ids, weight, summary, detail })
}
