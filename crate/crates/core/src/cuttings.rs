//! Weighted random samples, heavy corridors and 1/r-cuttings.

use crate::corridor::{build_corridors, conflict_list, Corridor, CorridorDecomposition};
use crate::error::{Error, Result};
use crate::geom::{Id, Rect, WeightedPolygon};
use crate::num::Rat;
use crate::par;
use crate::rng::{child, rng};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleParams {
    pub rho: Rat,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sample {
    /// Sampled ids in input order.
    pub ids: Vec<Id>,
    /// Polygons whose inclusion probability exceeded one and was clamped.
    pub clamped: Vec<Id>,
}

pub fn total_weight(polys: &[WeightedPolygon]) -> u64 {
    polys.iter().map(|p| p.weight).sum()
}

/// Include each polygon independently with probability `rho * w / W`.
pub fn rho_sample(polys: &[WeightedPolygon], params: &SampleParams) -> Result<Sample> {
    if params.rho.is_negative() || params.rho > Rat::from(polys.len()) {
        return Err(Error::InvalidInput(format!("rho = {} must lie in [0, m = {}]", params.rho, polys.len())));
    }
    let out = sample_unchecked(polys, &params.rho, params.seed);
    if !out.clamped.is_empty() {
        log::warn!("clamped inclusion probability of {} polygons to 1", out.clamped.len());
    }
    Ok(out)
}

fn sample_unchecked(polys: &[WeightedPolygon], rho: &Rat, seed: u64) -> Sample {
    let w = Rat::from(total_weight(polys).max(1));
    let mut r = rng(seed);
    let mut out = Sample { ids: Vec::new(), clamped: Vec::new() };
    for p in polys {
        let prob = &(rho * &Rat::from(p.weight)) / &w;
        if prob > Rat::one() {
            out.clamped.push(p.id);
        }
        let keep = if prob >= Rat::one() {
            true
        } else if prob.is_zero() {
            false
        } else {
            r.gen_bool(prob.to_f64())
        };
        if keep {
            out.ids.push(p.id);
        }
    }
    out
}

/// Union of two independent rho-samples, as used by the decay lemma and the
/// cutting construction.
pub fn double_sample(polys: &[WeightedPolygon], rho: &Rat, seed: u64) -> Result<Vec<WeightedPolygon>> {
    if rho.is_negative() {
        return Err(Error::InvalidInput(format!("rho = {rho} must be non-negative")));
    }
    let a = sample_unchecked(polys, rho, child(seed, 1));
    let b = sample_unchecked(polys, rho, child(seed, 2));
    Ok(polys.iter().filter(|p| a.ids.contains(&p.id) || b.ids.contains(&p.id)).cloned().collect())
}

/// Fill each corridor's conflict list against `universe` and return the
/// conflict weights.
pub fn attach_conflicts(decomp: &mut CorridorDecomposition, universe: &[WeightedPolygon]) -> Vec<u64> {
    let weight: HashMap<Id, u64> = universe.iter().map(|p| (p.id, p.weight)).collect();
    let lists = par::map(&decomp.corridors, |c| conflict_list(c, universe));
    let mut ws = Vec::with_capacity(lists.len());
    for (c, l) in decomp.corridors.iter_mut().zip(lists) {
        ws.push(l.iter().map(|id| weight[id]).sum());
        c.conflict_list = l;
    }
    ws
}

/// Corridors whose conflict weight is at least `t * W / rho`.
pub fn heavy_corridors(decomp: &CorridorDecomposition, universe: &[WeightedPolygon], t: &Rat, rho: &Rat) -> Vec<Corridor> {
    let mut d = decomp.clone();
    let ws = attach_conflicts(&mut d, universe);
    let w = Rat::from(total_weight(universe));
    let threshold = &(t * &w) / rho;
    d.corridors.into_iter().zip(ws).filter(|(_, cw)| Rat::from(*cw) >= threshold).map(|(c, _)| c).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayRow {
    pub t: f64,
    pub trials: usize,
    pub mean_heavy: f64,
    pub stderr: f64,
}

/// Mean number of t-heavy corridors of CD(S1 + S2) over independent trials.
pub fn decay_experiment(
    polys: &[WeightedPolygon],
    frame: &Rect,
    rho: &Rat,
    t_values: &[Rat],
    trials: usize,
    seed: u64,
) -> Result<Vec<DecayRow>> {
    if trials == 0 {
        return Err(Error::InvalidInput("trials must be positive".into()));
    }
    let w = Rat::from(total_weight(polys));
    let counts: Vec<Result<Vec<usize>>> = par::map_range(trials, |k| {
        let s = double_sample(polys, rho, child(seed, k as u64))?;
        let mut cd = build_corridors(&s, frame)?;
        let ws = attach_conflicts(&mut cd, polys);
        Ok(t_values
            .iter()
            .map(|t| {
                let threshold = &(t * &w) / rho;
                ws.iter().filter(|&&cw| Rat::from(cw) >= threshold).count()
            })
            .collect())
    });
    let counts: Vec<Vec<usize>> = counts.into_iter().collect::<Result<_>>()?;
    Ok(t_values
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let xs: Vec<f64> = counts.iter().map(|c| c[i] as f64).collect();
            let n = xs.len() as f64;
            let mean = xs.iter().sum::<f64>() / n;
            let var = if xs.len() > 1 { xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
            DecayRow { t: t.to_f64(), trials, mean_heavy: mean, stderr: (var / n).sqrt() }
        })
        .collect())
}

pub fn decay_csv(rows: &[DecayRow]) -> String {
    let mut s = String::from("t,trials,mean_heavy,stderr\n");
    for r in rows {
        s.push_str(&format!("{},{},{},{}\n", r.t, r.trials, r.mean_heavy, r.stderr));
    }
    s
}

/// Least-squares slope of `ln(mean_heavy)` against `t`, over rows with a
/// positive mean.
pub fn decay_slope(rows: &[DecayRow]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = rows.iter().filter(|r| r.mean_heavy > 0.0).map(|r| (r.t, r.mean_heavy.ln())).collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some(sxy / sxx)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CuttingParams {
    /// Constant `c` in `rho = r (c ln r + ln u2)`.
    pub c: f64,
    /// Corridor count of a two-polygon decomposition.
    pub u2: f64,
    pub max_retries: usize,
}

impl Default for CuttingParams {
    fn default() -> Self {
        CuttingParams { c: 2.0, u2: 3.0, max_retries: 10 }
    }
}

impl CuttingParams {
    /// `r (c ln r + ln u2)`, rounded to three decimals.
    pub fn rho(&self, r: u64) -> Rat {
        let rf = r as f64;
        let v = rf * (self.c * rf.ln() + self.u2.ln());
        Rat::new((v * 1000.0).round() as i128, 1000)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cutting {
    pub decomposition: CorridorDecomposition,
    pub r: u64,
    /// Conflict weight of each corridor, aligned with `decomposition.corridors`.
    pub weights: Vec<u64>,
    pub retries: usize,
    /// Sample polygons, kept as regions of their own.
    pub islands: Vec<Id>,
    pub rho: Rat,
    pub total_weight: u64,
}

impl Cutting {
    pub fn size(&self) -> usize {
        self.decomposition.corridors.len() + self.islands.len()
    }

    /// Every corridor's conflict weight is at most W / r.
    pub fn is_valid(&self) -> bool {
        self.weights.iter().all(|&w| w as u128 * self.r as u128 <= self.total_weight as u128)
    }
}

/// A 1/r-cutting: corridors of CD(S1 + S2) whose conflict weight is at most
/// W / r, plus the sample polygons. Resamples on failure.
pub fn build_cutting(polys: &[WeightedPolygon], frame: &Rect, r: u64, seed: u64, params: &CuttingParams) -> Result<Cutting> {
    if r < 2 {
        return Err(Error::InvalidInput(format!("cutting parameter r = {r} must be at least 2")));
    }
    let m = polys.len();
    let rho = params.rho(r);
    let total = total_weight(polys);
    let mut worst = 0u64;
    for attempt in 0..=params.max_retries {
        let s = double_sample(polys, &rho, child(seed, attempt as u64))?;
        let mut decomposition = build_corridors(&s, frame)?;
        let weights = attach_conflicts(&mut decomposition, polys);
        let cut = Cutting {
            decomposition,
            r,
            weights,
            retries: attempt,
            islands: s.iter().map(|p| p.id).collect(),
            rho: rho.clone(),
            total_weight: total,
        };
        if cut.is_valid() {
            return Ok(cut);
        }
        worst = worst.max(cut.weights.iter().copied().max().unwrap_or(0));
    }
    Err(Error::CuttingFailed(format!(
        "no 1/{r}-cutting after {} attempts (m = {m}, rho = {rho}, W = {total}, worst conflict weight {worst} > W/r)",
        params.max_retries + 1
    )))
}
