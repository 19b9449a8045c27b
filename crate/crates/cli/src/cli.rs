//! Argument parsing and the subcommand bodies.

use crate::bench::{run_plan, to_csv, Plan};
use crate::error::{CliError, Result};
use crate::instance::{gen_delta_large, gen_disjoint_polygons, gen_overlapping_polygons, parse_weights, Instance, Kind};
use crate::solvers::{self, parse_caps, prepared, Algorithm, Params};
use clap::{Args, Parser, Subcommand, ValueEnum};
use geomis_blocks::dp::greedy;
use geomis_blocks::grid::{build_grid, mwis_items};
use geomis_blocks::partition::{build_partition, verify_partition};
use geomis_core::corridor::build_corridors;
use geomis_core::cuttings::{build_cutting, decay_csv, decay_experiment, decay_slope, CuttingParams};
use geomis_core::gen::Shape;
use geomis_core::separator::{cheap_balanced_cut, decode, is_cheap_balanced, Cut, CutParams, Universe};
use geomis_core::{Error, Rat};
use serde_json::json;
use std::path::{Path, PathBuf};

#[derive(Parser, Debug)]
#[command(name = "geomis", version, about = "Maximum weight independent set of polygons and rectangles")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Io {
    /// Instance file.
    #[arg(long)]
    pub input: PathBuf,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum QptasMode {
    Oracle,
    Heuristic,
    Enumerate,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum BlocksMode {
    /// Region recursion over the whole square.
    Dp,
    /// Partition around the exact optimum, then solve each face.
    Guided,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ReferenceMode {
    Exact,
    Greedy,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a seeded instance.
    Gen {
        #[arg(long, value_enum, default_value = "polygons")]
        kind: Kind,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Required for rectangles and blocks.
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long, value_parser = parse_shape, default_value = "squares")]
        shape: Shape,
        /// `equal` or `uniform:lo:hi`; rectangles and blocks need lo = 1.
        #[arg(long, default_value = "uniform:1:9")]
        weights: String,
        /// Allow overlaps, with polygon sides up to this size.
        #[arg(long)]
        overlap: Option<i64>,
        /// Shear disjoint polygons into general position (rational coordinates).
        #[arg(long)]
        shear: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Exact maximum weight independent set (at most 60 items).
    SolveExact {
        #[command(flatten)]
        io: Io,
    },
    /// Recursive scheme on cheap balanced cuts, or one of its practical variants.
    SolveQptas {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long, value_enum, default_value = "oracle")]
        mode: QptasMode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Cut candidates per node in heuristic mode.
        #[arg(long, default_value_t = 4)]
        budget: usize,
        #[arg(long, default_value = "")]
        caps: String,
    },
    /// Block instances: region recursion, or partition-guided.
    SolveBlocks {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long, value_enum, default_value = "dp")]
        mode: BlocksMode,
        #[arg(long, default_value = "")]
        caps: String,
    },
    /// Delta-large rectangles.
    SolveRects {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long, default_value = "")]
        caps: String,
    },
    /// L-infinity corridor decomposition of a disjoint polygon instance.
    Decompose {
        #[command(flatten)]
        io: Io,
    },
    /// Cheap balanced cut.
    Cut {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Weighted 1/r-cutting.
    Cutting {
        #[command(flatten)]
        io: Io,
        #[arg(long, default_value_t = 4)]
        r: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Mean number of t-heavy corridors, as CSV.
    Decay {
        #[command(flatten)]
        io: Io,
        /// Sampling rate, integer or `p/q`.
        #[arg(long)]
        rho: String,
        #[arg(long, value_delimiter = ',', default_value = "1,2,4,8")]
        t: Vec<String>,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Build and check the segment partition around a reference solution.
    VerifyPartition {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long, value_enum, default_value = "exact")]
        mode: ReferenceMode,
        /// Walk length before a shortcut replaces it.
        #[arg(long)]
        max_walk: Option<usize>,
    },
    /// Run a plan file and write one CSV row per run.
    Bench {
        #[command(flatten)]
        io: Io,
    },
}

fn parse_shape(s: &str) -> std::result::Result<Shape, String> {
    match s {
        "squares" => Ok(Shape::Squares),
        "convex" => Ok(Shape::Convex),
        _ => Err(format!("unknown shape {s:?} (squares, convex)")),
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Io { path: p.clone(), source }),
        None => {
            use std::io::Write;
            match writeln!(std::io::stdout().lock(), "{text}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::Io { path: "<stdout>".into(), source: e }),
                _ => Ok(()),
            }
        }
    }
}

fn emit_json(out: &Option<PathBuf>, v: &serde_json::Value) -> Result<()> {
    emit(out, &serde_json::to_string_pretty(v)?)
}

fn eps_of(flag: Option<f64>, inst: &Instance) -> Result<f64> {
    let eps = flag.or(inst.eps).unwrap_or(0.5);
    if !(eps > 0.0 && eps < 1.0) {
        return Err(CliError::Input(format!("eps = {eps} must lie in (0, 1)")));
    }
    Ok(eps)
}

fn with_delta(mut inst: Instance, delta: Option<f64>) -> Result<Instance> {
    if delta.is_some() {
        inst.delta = delta;
        inst.validate()?;
    }
    Ok(inst)
}

fn need_polygons(inst: &Instance) -> Result<()> {
    if inst.kind != Kind::Polygons {
        return Err(CliError::Input("this command needs a polygons instance".into()));
    }
    Ok(())
}

fn read(p: &Path) -> Result<Instance> {
    Instance::read(p)
}

fn solve(io: &Io, inst: &Instance, alg: Algorithm, params: &Params) -> Result<()> {
    let out = solvers::run(inst, alg, params)?;
    emit_json(&io.output, &json!({
        "algorithm": out.algorithm,
        "instance_hash": inst.hash(),
        "weight": out.weight,
        "ids": out.ids,
        "audit": out.summary,
        "detail": out.detail,
    }))
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Gen { kind, m, n, seed, delta, shape, weights, overlap, shear, output } => {
            let w = parse_weights(&weights)?;
            let inst = match kind {
                Kind::Polygons => match overlap {
                    Some(size) => gen_overlapping_polygons(m, n, size, seed, shape, w)?,
                    None => gen_disjoint_polygons(m, n, seed, shape, w, shear)?,
                },
                Kind::Rectangles | Kind::Blocks => {
                    let delta = delta.ok_or_else(|| CliError::Input("--delta is required for rectangles and blocks".into()))?;
                    let max_weight = match w {
                        geomis_core::gen::Weights::Equal => 1,
                        geomis_core::gen::Weights::Uniform { lo: 1, hi } => hi,
                        _ => return Err(CliError::Input("rectangle weights are uniform on 1..=hi".into())),
                    };
                    gen_delta_large(m, n, delta, seed, kind == Kind::Blocks, max_weight)?
                }
            };
            emit(&output, &inst.to_json())
        }
        Command::SolveExact { io } => {
            let inst = read(&io.input)?;
            solve(&io, &inst, Algorithm::Exact, &Params::default())
        }
        Command::SolveQptas { io, eps, mode, seed, budget, caps } => {
            let inst = read(&io.input)?;
            need_polygons(&inst)?;
            let params = Params { eps: eps_of(eps, &inst)?, seed, budget, caps: parse_caps(&caps)? };
            let alg = match mode {
                QptasMode::Oracle => Algorithm::QptasOracle,
                QptasMode::Heuristic => Algorithm::QptasHeuristic,
                QptasMode::Enumerate => Algorithm::QptasEnumerate,
            };
            solve(&io, &inst, alg, &params)
        }
        Command::SolveBlocks { io, eps, delta, mode, caps } => {
            let inst = with_delta(read(&io.input)?, delta)?;
            if inst.kind != Kind::Blocks {
                return Err(CliError::Input("solve-blocks needs a blocks instance; use solve-rects for rectangles".into()));
            }
            let params = Params { eps: eps_of(eps, &inst)?, caps: parse_caps(&caps)?, ..Default::default() };
            let alg = match mode {
                BlocksMode::Dp => Algorithm::Blocks,
                BlocksMode::Guided => Algorithm::BlocksGuided,
            };
            solve(&io, &inst, alg, &params)
        }
        Command::SolveRects { io, eps, delta, caps } => {
            let inst = with_delta(read(&io.input)?, delta)?;
            let params = Params { eps: eps_of(eps, &inst)?, caps: parse_caps(&caps)?, ..Default::default() };
            solve(&io, &inst, Algorithm::Rects, &params)
        }
        Command::Decompose { io } => {
            let inst = read(&io.input)?;
            need_polygons(&inst)?;
            let (polys, frame, sheared) = prepared(&inst)?;
            let cd = build_corridors(&polys, &frame)?;
            let m = polys.len();
            let covered: Rat = cd.corridors.iter().map(|c| c.area()).sum::<Rat>() + polys.iter().map(|p| p.area()).sum::<Rat>();
            emit_json(&io.output, &json!({
                "m": m,
                "corridors": cd.corridors.len(),
                "bound": (3 * m).saturating_sub(3),
                "tiles_frame": covered == frame.area(),
                "sheared": sheared,
                "decomposition": cd,
            }))
        }
        Command::Cut { io, eps, seed } => {
            let inst = read(&io.input)?;
            need_polygons(&inst)?;
            let eps = eps_of(eps, &inst)?;
            let (polys, frame, sheared) = prepared(&inst)?;
            let total: u64 = polys.iter().map(|p| p.weight).sum();
            let cut = cheap_balanced_cut(&polys, &frame, eps, seed, &CutParams::default())?;
            let checks = match &cut {
                Cut::Heavy(id) => json!({ "heavy": id }),
                Cut::Polygon(sp) => {
                    let u = Universe::new(&polys, &frame);
                    json!({
                        "cheap_balanced": is_cheap_balanced(sp, total, polys.len(), eps, false),
                        "round_trip": decode(&sp.encoding, &u)? == sp.boundary,
                        "bits": sp.encoding.len(),
                    })
                }
            };
            emit_json(&io.output, &json!({ "total_weight": total, "sheared": sheared, "checks": checks, "cut": cut }))
        }
        Command::Cutting { io, r, seed } => {
            let inst = read(&io.input)?;
            need_polygons(&inst)?;
            let (polys, frame, sheared) = prepared(&inst)?;
            let c = build_cutting(&polys, &frame, r, seed, &CuttingParams::default())?;
            emit_json(&io.output, &json!({
                "r": c.r,
                "rho": c.rho,
                "retries": c.retries,
                "corridors": c.decomposition.corridors.len(),
                "islands": c.islands.len(),
                "total_weight": c.total_weight,
                "max_conflict_weight": c.weights.iter().max(),
                "valid": c.is_valid(),
                "sheared": sheared,
                "conflict_weights": c.weights,
            }))
        }
        Command::Decay { io, rho, t, trials, seed } => {
            let inst = read(&io.input)?;
            need_polygons(&inst)?;
            let parse = |s: &str| s.parse::<Rat>().map_err(|e| CliError::Input(e.to_string()));
            let rho = parse(&rho)?;
            let ts = t.iter().map(|s| parse(s)).collect::<Result<Vec<_>>>()?;
            let (polys, frame, _) = prepared(&inst)?;
            let rows = decay_experiment(&polys, &frame, &rho, &ts, trials, seed)?;
            if let Some(s) = decay_slope(&rows) {
                eprintln!("slope of ln(mean heavy count) against t: {s:.4}");
            }
            emit(&io.output, decay_csv(&rows).trim_end())
        }
        Command::VerifyPartition { io, eps, delta, mode, max_walk } => {
            let inst = with_delta(read(&io.input)?, delta)?;
            if inst.kind != Kind::Blocks {
                return Err(CliError::Input("verify-partition needs a blocks instance".into()));
            }
            let eps = eps_of(eps, &inst)?;
            let g = build_grid(inst.n, inst.delta.unwrap_or_default())?;
            let items = inst.rects()?;
            let ids = match mode {
                ReferenceMode::Exact => mwis_items(&items)?.1,
                ReferenceMode::Greedy => greedy(&items).ids,
            };
            let reference: Vec<_> = items.iter().copied().filter(|b| ids.contains(&b.id)).collect();
            let part = build_partition(&g, &reference, eps, max_walk)?;
            let report = verify_partition(&g, &part, &reference, eps);
            emit_json(&io.output, &json!({ "ok": report.ok(), "report": report, "partition": part }))?;
            if !report.ok() {
                return Err(Error::Structural(report.violations.join("; ")).into());
            }
            Ok(())
        }
        Command::Bench { io } => {
            let text = std::fs::read_to_string(&io.input).map_err(|source| CliError::Io { path: io.input.clone(), source })?;
            let plan = Plan::parse(&text)?;
            let rows = run_plan(&plan)?;
            emit(&io.output, to_csv(&rows)?.trim_end())
        }
    }
}
