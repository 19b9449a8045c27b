//! Run plans: generator settings, an algorithm and a list of seeds per
//! entry, expanded to one CSV row per run.

use crate::error::{CliError, Result};
use crate::instance::{gen_delta_large, gen_disjoint_polygons, gen_overlapping_polygons, Instance};
use crate::solvers::{self, parse_caps, Algorithm, Params};
use geomis_core::gen::{Shape, Weights};
use geomis_core::par;
use serde::{Deserialize, Serialize};
use std::time::Instant;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Generator {
    Polygons {
        m: usize,
        n: i64,
        #[serde(default = "default_shape")]
        shape: Shape,
        #[serde(default = "default_weights")]
        weights: String,
        /// Side bound of overlapping polygons; disjoint when absent.
        #[serde(default)]
        overlap: Option<i64>,
        #[serde(default)]
        shear: bool,
    },
    Rectangles {
        m: usize,
        n: i64,
        delta: f64,
        #[serde(default = "default_max_weight")]
        max_weight: u64,
    },
    Blocks {
        m: usize,
        n: i64,
        delta: f64,
        #[serde(default = "default_max_weight")]
        max_weight: u64,
    },
}

fn default_shape() -> Shape {
    Shape::Squares
}

fn default_weights() -> String {
    "uniform:1:9".into()
}

fn default_max_weight() -> u64 {
    20
}

impl Generator {
    pub fn generate(&self, seed: u64) -> Result<Instance> {
        match self {
            Generator::Polygons { m, n, shape, weights, overlap, shear } => {
                let w: Weights = crate::instance::parse_weights(weights)?;
                match overlap {
                    Some(size) => gen_overlapping_polygons(*m, *n, *size, seed, *shape, w),
                    None => gen_disjoint_polygons(*m, *n, seed, *shape, w, *shear),
                }
            }
            Generator::Rectangles { m, n, delta, max_weight } => gen_delta_large(*m, *n, *delta, seed, false, *max_weight),
            Generator::Blocks { m, n, delta, max_weight } => gen_delta_large(*m, *n, *delta, seed, true, *max_weight),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlanParams {
    #[serde(default = "default_eps")]
    pub eps: f64,
    #[serde(default = "default_budget")]
    pub budget: usize,
    #[serde(default)]
    pub caps: String,
}

impl Default for PlanParams {
    fn default() -> Self {
        PlanParams { eps: default_eps(), budget: default_budget(), caps: String::new() }
    }
}

fn default_eps() -> f64 {
    0.5
}

fn default_budget() -> usize {
    4
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlanEntry {
    pub generator: Generator,
    pub algorithm: Algorithm,
    #[serde(default)]
    pub params: PlanParams,
    pub seeds: Vec<u64>,
    /// Also run the exact oracle and report the gap.
    #[serde(default)]
    pub oracle: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Plan {
    pub version: u32,
    pub runs: Vec<PlanEntry>,
}

impl Plan {
    /// Parses and checks the whole plan (algorithm keys, caps, eps) before
    /// anything runs.
    pub fn parse(text: &str) -> Result<Plan> {
        let plan: Plan = serde_json::from_str(text).map_err(|e| CliError::Input(format!("run plan: {e}")))?;
        if plan.version != crate::instance::VERSION {
            return Err(CliError::Input(format!("unsupported plan version {}", plan.version)));
        }
        for (i, e) in plan.runs.iter().enumerate() {
            parse_caps(&e.params.caps)?;
            if !(e.params.eps > 0.0 && e.params.eps < 1.0) {
                return Err(CliError::Input(format!("run {i}: eps = {} must lie in (0, 1)", e.params.eps)));
            }
        }
        Ok(plan)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub instance_hash: String,
    pub algorithm: String,
    pub seed: u64,
    pub params: String,
    pub weight: u64,
    pub oracle_weight: Option<u64>,
    /// `oracle_weight / weight`.
    pub gap: Option<f64>,
    pub wall_ms: f64,
    pub audit: String,
}

fn run_one(e: &PlanEntry, seed: u64) -> Result<RunRecord> {
    let inst = e.generator.generate(seed)?;
    let params = Params { eps: e.params.eps, seed, budget: e.params.budget, caps: parse_caps(&e.params.caps)? };
    let t = Instant::now();
    let out = solvers::run(&inst, e.algorithm, &params)?;
    let wall_ms = t.elapsed().as_secs_f64() * 1e3;
    let oracle_weight = if e.oracle { Some(solvers::exact(&inst)?.0) } else { None };
    let gap = oracle_weight.map(|o| match (o, out.weight) {
        (0, 0) => 1.0,
        (_, 0) => f64::INFINITY,
        (o, w) => o as f64 / w as f64,
    });
    let mut p = format!("eps={};budget={}", e.params.eps, e.params.budget);
    if !e.params.caps.is_empty() {
        p.push_str(&format!(";caps={}", e.params.caps));
    }
    Ok(RunRecord {
        instance_hash: inst.hash(),
        algorithm: out.algorithm.into(),
        seed,
        params: p,
        weight: out.weight,
        oracle_weight,
        gap,
        wall_ms,
        audit: out.summary,
    })
}

/// Runs every (entry, seed) pair, in parallel when enabled; rows come back
/// in plan order.
pub fn run_plan(plan: &Plan) -> Result<Vec<RunRecord>> {
    let jobs: Vec<(&PlanEntry, u64)> = plan.runs.iter().flat_map(|e| e.seeds.iter().map(move |&s| (e, s))).collect();
    par::map(&jobs, |(e, s)| run_one(e, *s)).into_iter().collect()
}

pub fn to_csv(rows: &[RunRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| CliError::Input(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Input(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv is utf-8"))
}
