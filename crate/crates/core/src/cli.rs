//! Batch front end: `region`, `sweep`, `aperture`, `duals` and `check`,
//! with SVG, CSV and JSON emitters.
//!
//! Settings come from flags, optionally layered over a TOML file given with
//! `--config`; flags win. Every number written to CSV carries 17 significant
//! digits and JSON keys keep declaration order, so reruns are bit-identical.

use std::collections::BTreeSet;
use std::f64::consts::{FRAC_PI_2, PI};
use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::aperture::{
    aperture, aperture_point_refined, lemma11_check, nesting_check, refinement_vertex_counts, region_at, sweep_with,
    theta_grid, FINE_GRID,
};
use crate::curve::{parse_curve_spec, sample, tangent_line, ParametricCurve};
use crate::error::Error;
use crate::geom2d::{ConvexPolygon, Point2};
use crate::metric::hausdorff_polygons;
use crate::silhouette::{region_by_support, support_function, RegionApprox, SupportFn};
use crate::sphere::{maehara_check, random_hemispherical_set};
use crate::wulff::{diagnose_polygon, dual_wulff, support_polygon, wulff_from_support, WulffShape};

/// Curves checked when `check` runs without `--curve`.
pub const BUILTIN_CURVES: [&str; 3] = ["circle:1", "ellipse:2,1", "flower:4,0.35"];

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Geometry(#[from] Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0} check(s) failed")]
    ChecksFailed(usize),
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "nosil", version, about = "No-silhouette regions of rotated tangent lines")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Region, tangent family and seed at each angle.
    Region(JobArgs),
    /// Regions over an angle range with consecutive distances and nesting.
    Sweep(JobArgs),
    /// Aperture angle bracket, aperture point and the shrinking schedule.
    Aperture(JobArgs),
    /// Support function, Wulff shape and dual Wulff shape.
    Duals(JobArgs),
    /// Runs the property checks; exits nonzero when one fails.
    Check(JobArgs),
}

#[derive(Args, Debug, Default)]
struct JobArgs {
    /// TOML file with the same keys as the long flags (dashes as underscores).
    #[arg(long)]
    config: Option<PathBuf>,
    /// `circle:R`, `ellipse:A,B`, `flower:K,EPS` or `table:PATH`.
    #[arg(long)]
    curve: Option<String>,
    /// Angles such as `0.3`, `pi/4` or `3*pi/8`; comma separated or repeated.
    #[arg(long, value_delimiter = ',')]
    theta: Vec<String>,
    /// `START:STOP:COUNT`, inclusive.
    #[arg(long)]
    theta_range: Option<String>,
    /// Curve samples N.
    #[arg(long)]
    samples: Option<usize>,
    /// Support directions M.
    #[arg(long)]
    directions: Option<usize>,
    /// Seed-search lattice size.
    #[arg(long)]
    grid: Option<usize>,
    /// Aperture bracket width.
    #[arg(long)]
    tol: Option<f64>,
    /// Output directory, created if missing.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Any of `svg`, `csv`, `json`.
    #[arg(long, value_delimiter = ',')]
    emit: Vec<String>,
    /// Support values, one per uniform direction, in a column named `h`.
    #[arg(long)]
    support_csv: Option<PathBuf>,
    /// Random seed for the randomized checks.
    #[arg(long)]
    seed: Option<u64>,
    /// Random points per randomized check.
    #[arg(long)]
    trials: Option<usize>,
}

#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    curve: Option<String>,
    theta: Option<Vec<ThetaValue>>,
    theta_range: Option<String>,
    samples: Option<usize>,
    directions: Option<usize>,
    grid: Option<usize>,
    tol: Option<f64>,
    out: Option<PathBuf>,
    emit: Option<Vec<String>>,
    support_csv: Option<PathBuf>,
    seed: Option<u64>,
    trials: Option<usize>,
}

#[derive(Deserialize, Debug)]
#[serde(untagged)]
enum ThetaValue {
    Number(f64),
    Expr(String),
}

/// Fully resolved settings of one run.
#[derive(Debug)]
pub struct JobConfig {
    pub curve_spec: Option<String>,
    pub thetas: Vec<f64>,
    pub samples: usize,
    pub directions: usize,
    pub grid: usize,
    pub tol: f64,
    pub out: PathBuf,
    pub emit: Emit,
    pub support_csv: Option<PathBuf>,
    pub seed: u64,
    pub trials: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Emit {
    pub svg: bool,
    pub csv: bool,
    pub json: bool,
}

/// Parses `0.3`, `pi`, `pi/4`, `3*pi/8`, `2pi/3` and the like.
pub fn parse_theta(expr: &str) -> CliResult<f64> {
    let bad = || CliError::Config(format!("bad angle `{expr}`"));
    let s: String = expr.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(bad());
    }
    let mut value = 1.0;
    let mut divide = false;
    let mut rest = s.as_str();
    loop {
        let end = rest.find(['*', '/']).unwrap_or(rest.len());
        let token = &rest[..end];
        let factor = match token.to_ascii_lowercase().as_str() {
            "pi" | "π" => PI,
            t => match t.strip_suffix("pi").or_else(|| t.strip_suffix('π')) {
                Some(coef) => coef.parse::<f64>().map_err(|_| bad())? * PI,
                None => t.parse::<f64>().map_err(|_| bad())?,
            },
        };
        value = if divide { value / factor } else { value * factor };
        if end == rest.len() {
            break;
        }
        divide = rest.as_bytes()[end] == b'/';
        rest = &rest[end + 1..];
    }
    if value.is_finite() {
        Ok(value)
    } else {
        Err(bad())
    }
}

/// `START:STOP:COUNT` with angle expressions for the ends.
pub fn parse_theta_range(spec: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [a, b, n] = parts.as_slice() else {
        return Err(CliError::Config(format!("theta range `{spec}` is not START:STOP:COUNT")));
    };
    let n: usize = n.trim().parse().map_err(|_| CliError::Config(format!("theta range `{spec}`: bad count")))?;
    if n == 0 {
        return Err(CliError::Config(format!("theta range `{spec}`: count must be positive")));
    }
    Ok(theta_grid(parse_theta(a)?, parse_theta(b)?, n))
}

fn resolve(args: JobArgs) -> CliResult<JobConfig> {
    let file = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.clone(), source })?;
            toml::from_str::<FileConfig>(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
        }
        None => FileConfig::default(),
    };
    let mut thetas = Vec::new();
    if !args.theta.is_empty() {
        for t in &args.theta {
            thetas.push(parse_theta(t)?);
        }
    } else if let Some(list) = &file.theta {
        for t in list {
            thetas.push(match t {
                ThetaValue::Number(x) => *x,
                ThetaValue::Expr(e) => parse_theta(e)?,
            });
        }
    }
    if let Some(r) = args.theta_range.as_ref().or(file.theta_range.as_ref()) {
        thetas.extend(parse_theta_range(r)?);
    }
    if let Some(t) = thetas.iter().find(|t| !(0.0..=FRAC_PI_2 + 1e-12).contains(*t)) {
        return Err(CliError::Config(format!("theta = {t} is outside [0, pi/2]")));
    }
    let emit_list = if !args.emit.is_empty() { Some(args.emit.clone()) } else { file.emit.clone() };
    let emit = match emit_list {
        None => Emit { svg: true, csv: true, json: true },
        Some(list) => {
            let set: BTreeSet<String> = list.iter().map(|s| s.trim().to_ascii_lowercase()).collect();
            if let Some(x) = set.iter().find(|s| !["svg", "csv", "json"].contains(&s.as_str())) {
                return Err(CliError::Config(format!("unknown emitter `{x}`")));
            }
            Emit { svg: set.contains("svg"), csv: set.contains("csv"), json: set.contains("json") }
        }
    };
    let config = JobConfig {
        curve_spec: args.curve.or(file.curve),
        thetas,
        samples: args.samples.or(file.samples).unwrap_or(2048),
        directions: args.directions.or(file.directions).unwrap_or(1024),
        grid: args.grid.or(file.grid).unwrap_or(32),
        tol: args.tol.or(file.tol).unwrap_or(1e-4),
        out: args.out.or(file.out).unwrap_or_else(|| PathBuf::from("nosil-out")),
        emit,
        support_csv: args.support_csv.or(file.support_csv),
        seed: args.seed.or(file.seed).unwrap_or(1),
        trials: args.trials.or(file.trials).unwrap_or(500),
    };
    if config.samples < 512 {
        return Err(CliError::Config(format!("samples = {} is below 512", config.samples)));
    }
    if config.directions < 256 {
        return Err(CliError::Config(format!("directions = {} is below 256", config.directions)));
    }
    if config.grid < 32 {
        return Err(CliError::Config(format!("grid = {} is below 32", config.grid)));
    }
    if !(config.tol >= 1e-6) {
        return Err(CliError::Config(format!("tol = {} is below 1e-6", config.tol)));
    }
    Ok(config)
}

/// Runs the command line and returns the process exit status: 0 on
/// success, 1 when a check fails, 2 on bad input.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e @ CliError::ChecksFailed(_)) => {
            eprintln!("nosil: {e}");
            1
        }
        Err(e) => {
            eprintln!("nosil: {e}");
            2
        }
    }
}

fn execute(command: Command) -> CliResult<()> {
    match command {
        Command::Region(a) => cmd_region(&resolve(a)?),
        Command::Sweep(a) => cmd_sweep(&resolve(a)?),
        Command::Aperture(a) => cmd_aperture(&resolve(a)?),
        Command::Duals(a) => cmd_duals(&resolve(a)?),
        Command::Check(a) => cmd_check(&resolve(a)?),
    }
}

fn curve_of(config: &JobConfig) -> CliResult<(String, ParametricCurve)> {
    let spec = config.curve_spec.clone().unwrap_or_else(|| "circle:1".into());
    let curve = parse_curve_spec(&spec)?;
    Ok((spec, curve))
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn prepare_out(config: &JobConfig) -> CliResult<()> {
    fs::create_dir_all(&config.out).map_err(|source| CliError::Io { path: config.out.clone(), source })
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

/// CSV text with a header row and `{:.16e}` numbers.
pub fn csv_table(header: &[&str], rows: &[Vec<f64>]) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|x| format!("{x:.16e}")).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

/// Per-angle summary written by `region` and `sweep`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RegionRecord {
    pub theta: f64,
    pub empty: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub area: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diameter: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertex_count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edge_flat_runs: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dh_prev: Option<f64>,
}

fn record(theta: f64, region: Option<&RegionApprox>, m: usize, dh_prev: Option<f64>) -> RegionRecord {
    match region {
        None => RegionRecord {
            theta,
            empty: true,
            area: None,
            diameter: None,
            vertex_count: None,
            edge_flat_runs: None,
            margin: None,
            seed: None,
            dh_prev: None,
        },
        Some(r) => {
            let d = diagnose_polygon(&r.polygon, m);
            RegionRecord {
                theta,
                empty: false,
                area: Some(r.polygon.area()),
                diameter: Some(r.polygon.diameter()),
                vertex_count: Some(d.vertex_count),
                edge_flat_runs: Some(d.edge_flat_runs),
                margin: Some(r.margin),
                seed: Some([r.seed.x, r.seed.y]),
                dh_prev,
            }
        }
    }
}

fn vertices_csv(poly: &ConvexPolygon) -> String {
    let rows: Vec<Vec<f64>> = poly.vertices().iter().map(|v| vec![v.x, v.y]).collect();
    csv_table(&["x", "y"], &rows)
}

/// Minimal SVG 1.1 writer in curve coordinates (y up).
pub struct SvgScene {
    lo: Point2,
    hi: Point2,
    layers: Vec<(String, String)>,
}

impl SvgScene {
    pub fn new(lo: Point2, hi: Point2) -> Self {
        let pad = 0.05 * (hi - lo).norm().max(1e-9);
        SvgScene { lo: lo - Point2::new(pad, pad), hi: hi + Point2::new(pad, pad), layers: Vec::new() }
    }

    fn stroke(&self) -> f64 {
        2e-3 * (self.hi - self.lo).norm()
    }

    pub fn polygon(&mut self, id: &str, pts: &[Point2], style: &str) {
        let mut body = String::from("<polygon points=\"");
        for (i, p) in pts.iter().enumerate() {
            if i > 0 {
                body.push(' ');
            }
            let _ = write!(body, "{},{}", p.x, p.y);
        }
        let _ = write!(body, "\" {style} stroke-width=\"{}\"/>", self.stroke());
        self.layers.push((id.into(), body));
    }

    pub fn segments(&mut self, id: &str, segs: &[(Point2, Point2)], style: &str) {
        let mut body = String::new();
        for (a, b) in segs {
            let _ = write!(
                body,
                "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" {style} stroke-width=\"{}\"/>",
                a.x,
                a.y,
                b.x,
                b.y,
                0.5 * self.stroke()
            );
        }
        self.layers.push((id.into(), body));
    }

    pub fn marker(&mut self, id: &str, p: Point2, style: &str) {
        let body = format!("<circle cx=\"{}\" cy=\"{}\" r=\"{}\" {style}/>", p.x, p.y, 3.0 * self.stroke());
        self.layers.push((id.into(), body));
    }

    pub fn render(&self) -> String {
        let (w, h) = (self.hi.x - self.lo.x, self.hi.y - self.lo.y);
        let mut s = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
        let _ = writeln!(
            s,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"{} {} {} {}\" width=\"600\" height=\"{}\">",
            self.lo.x,
            -self.hi.y,
            w,
            h,
            (600.0 * h / w).round()
        );
        s.push_str("<g transform=\"scale(1,-1)\">\n");
        for (id, body) in &self.layers {
            let _ = writeln!(s, "<g id=\"{id}\">{body}</g>");
        }
        s.push_str("</g>\n</svg>\n");
        s
    }
}

fn curve_scene(curve: &ParametricCurve, n: usize) -> CliResult<SvgScene> {
    let (lo, hi) = curve.bbox();
    let mut scene = SvgScene::new(lo, hi);
    let pts = sample(curve, n.min(1024))?.points;
    scene.polygon("curve", &pts, "fill=\"none\" stroke=\"black\"");
    Ok(scene)
}

/// At most 256 rotated tangent lines, cut to the scene.
fn line_layer(scene: &mut SvgScene, curve: &ParametricCurve, theta: f64) -> CliResult<()> {
    let reach = 2.0 * curve.scale();
    let mut segs = Vec::new();
    for i in 0..256 {
        let s = std::f64::consts::TAU * i as f64 / 256.0;
        let line = tangent_line(curve, s, theta)?;
        segs.push((line.base() - line.dir() * reach, line.base() + line.dir() * reach));
    }
    scene.segments("lines", &segs, "stroke=\"#4a7ab5\" stroke-opacity=\"0.35\"");
    Ok(())
}

fn cmd_region(config: &JobConfig) -> CliResult<()> {
    let (_, curve) = curve_of(config)?;
    let thetas = if config.thetas.is_empty() { vec![0.0] } else { config.thetas.clone() };
    prepare_out(config)?;
    for (k, &theta) in thetas.iter().enumerate() {
        let region = region_at(&curve, theta, config.samples, config.grid)?;
        let stem = config.out.join(format!("region_{k:03}"));
        if config.emit.json {
            write_file(
                &stem.with_extension("json"),
                &to_json(&record(theta, region.as_ref(), config.directions, None)),
            )?;
        }
        if let Some(r) = &region {
            if config.emit.csv {
                write_file(&stem.with_extension("csv"), &vertices_csv(&r.polygon))?;
            }
        }
        if config.emit.svg {
            let mut scene = curve_scene(&curve, config.samples)?;
            line_layer(&mut scene, &curve, theta)?;
            if let Some(r) = &region {
                scene.polygon(
                    "region",
                    r.polygon.vertices(),
                    "fill=\"#e8a33d\" fill-opacity=\"0.6\" stroke=\"#a0522d\"",
                );
                scene.marker("seed", r.seed, "fill=\"red\"");
            }
            write_file(&stem.with_extension("svg"), &scene.render())?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct SweepReport {
    curve: String,
    records: Vec<RegionRecord>,
    max_consecutive_dh: f64,
    nesting_holds: bool,
    nesting_guaranteed: bool,
    nesting_worst_excess: f64,
}

fn cmd_sweep(config: &JobConfig) -> CliResult<()> {
    let (spec, curve) = curve_of(config)?;
    let thetas = if config.thetas.is_empty() { theta_grid(0.0, FRAC_PI_2, 19) } else { config.thetas.clone() };
    let sw = sweep_with(&curve, &thetas, config.samples, config.grid)?;
    let nest = nesting_check(&curve, &sw)?;
    let records: Vec<RegionRecord> = (0..thetas.len())
        .map(|i| record(thetas[i], sw.regions[i].as_ref(), config.directions, sw.consecutive_dh[i]))
        .collect();
    prepare_out(config)?;
    if config.emit.csv {
        let rows: Vec<Vec<f64>> = records
            .iter()
            .map(|r| {
                let seed = r.seed.unwrap_or([f64::NAN, f64::NAN]);
                vec![
                    r.theta,
                    if r.empty { 1.0 } else { 0.0 },
                    r.area.unwrap_or(0.0),
                    r.diameter.unwrap_or(0.0),
                    r.vertex_count.map_or(f64::NAN, |v| v as f64),
                    r.margin.unwrap_or(f64::NAN),
                    seed[0],
                    seed[1],
                    r.dh_prev.unwrap_or(f64::NAN),
                ]
            })
            .collect();
        let header = ["theta", "empty", "area", "diameter", "vertex_count", "margin", "seed_x", "seed_y", "dh_prev"];
        write_file(&config.out.join("sweep.csv"), &csv_table(&header, &rows))?;
    }
    if config.emit.json {
        let report = SweepReport {
            curve: spec,
            records,
            max_consecutive_dh: sw.max_consecutive_dh(),
            nesting_holds: nest.holds,
            nesting_guaranteed: nest.guaranteed,
            nesting_worst_excess: nest.worst_excess,
        };
        write_file(&config.out.join("sweep.json"), &to_json(&report))?;
    }
    if config.emit.svg {
        let mut scene = curve_scene(&curve, config.samples)?;
        for (i, r) in sw.regions.iter().enumerate() {
            if let Some(r) = r {
                scene.polygon(
                    &format!("region_{i:03}"),
                    r.polygon.vertices(),
                    "fill=\"#e8a33d\" fill-opacity=\"0.25\" stroke=\"#a0522d\"",
                );
            }
        }
        write_file(&config.out.join("sweep.svg"), &scene.render())?;
    }
    Ok(())
}

#[derive(Serialize)]
struct ScheduleEntry {
    theta: f64,
    centroid: Option<[f64; 2]>,
    diameter: Option<f64>,
}

#[derive(Serialize)]
struct ApertureReport {
    curve: String,
    theta_r: f64,
    theta_r_bracket: [f64; 2],
    non_monotone: bool,
    aperture_point: [f64; 2],
    final_diameter: f64,
    non_shrinking: bool,
    schedule: Vec<ScheduleEntry>,
    refined_theta: f64,
    refined_point: [f64; 2],
    refined_diameter: f64,
}

fn cmd_aperture(config: &JobConfig) -> CliResult<()> {
    let (spec, curve) = curve_of(config)?;
    let est = aperture(&curve, config.tol, config.samples)?;
    let (refined_theta, refined) = aperture_point_refined(&curve, &est.angle, config.samples, 30)?;
    let c = refined.polygon.centroid();
    let schedule: Vec<ScheduleEntry> = (0..est.point.thetas.len())
        .map(|i| ScheduleEntry {
            theta: est.point.thetas[i],
            centroid: est.point.centroids[i].map(|p| [p.x, p.y]),
            diameter: est.point.diameters[i],
        })
        .collect();
    prepare_out(config)?;
    if config.emit.csv {
        let rows: Vec<Vec<f64>> = schedule
            .iter()
            .map(|e| {
                let c = e.centroid.unwrap_or([f64::NAN, f64::NAN]);
                vec![e.theta, c[0], c[1], e.diameter.unwrap_or(f64::NAN)]
            })
            .collect();
        write_file(
            &config.out.join("aperture.csv"),
            &csv_table(&["theta", "centroid_x", "centroid_y", "diameter"], &rows),
        )?;
    }
    if config.emit.json {
        let report = ApertureReport {
            curve: spec,
            theta_r: est.theta_r,
            theta_r_bracket: [est.theta_r_bracket.0, est.theta_r_bracket.1],
            non_monotone: est.non_monotone,
            aperture_point: [est.aperture_point.x, est.aperture_point.y],
            final_diameter: est.final_diameter,
            non_shrinking: est.point.non_shrinking,
            schedule,
            refined_theta,
            refined_point: [c.x, c.y],
            refined_diameter: refined.polygon.diameter(),
        };
        write_file(&config.out.join("aperture.json"), &to_json(&report))?;
    }
    if config.emit.svg {
        for (i, &theta) in est.point.thetas.iter().enumerate() {
            let mut scene = curve_scene(&curve, config.samples)?;
            if let Some(r) = region_at(&curve, theta, config.samples, FINE_GRID)? {
                scene.polygon("region", r.polygon.vertices(), "fill=\"#e8a33d\" stroke=\"#a0522d\"");
            }
            scene.marker("aperture_point", est.aperture_point, "fill=\"red\"");
            write_file(&config.out.join(format!("frame_{i:02}.svg")), &scene.render())?;
        }
    }
    Ok(())
}

/// Reads support values from a CSV with an `h` column, one row per uniform
/// direction starting at angle 0.
pub fn read_support_csv(path: &Path) -> CliResult<SupportFn> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let headers = reader.headers().map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?.clone();
    let col = headers
        .iter()
        .position(|h| h.trim() == "h")
        .ok_or_else(|| CliError::Config(format!("{}: no `h` column", path.display())))?;
    let mut values = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let row = row.map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let v = row
            .get(col)
            .and_then(|x| x.trim().parse::<f64>().ok())
            .ok_or_else(|| CliError::Config(format!("{}: line {}: bad `h` value", path.display(), i + 2)))?;
        values.push(v);
    }
    Ok(SupportFn::new(Point2::ORIGIN, 0.0, values)?)
}

#[derive(Serialize)]
struct DualRecord {
    theta: f64,
    empty: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    support_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    support_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    dh_clipping_vs_support: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    dual_vertices: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    dh_double_dual: Option<f64>,
}

fn emit_duals(config: &JobConfig, stem: &Path, shape: &WulffShape, dual: &WulffShape) -> CliResult<()> {
    if config.emit.csv {
        let hd = support_polygon(&dual.polygon, shape.support.len())?;
        let rows: Vec<Vec<f64>> = (0..shape.support.len())
            .map(|i| vec![shape.support.direction(i).angle(), shape.support.values()[i], hd.values()[i]])
            .collect();
        write_file(&stem.with_extension("csv"), &csv_table(&["phi", "h", "h_dual"], &rows))?;
    }
    if config.emit.svg {
        let pts: Vec<Point2> = shape.polygon.vertices().iter().chain(dual.polygon.vertices()).cloned().collect();
        let (mut lo, mut hi) = (pts[0], pts[0]);
        for p in &pts {
            lo = Point2::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point2::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        let mut scene = SvgScene::new(lo, hi);
        scene.polygon("wulff", shape.polygon.vertices(), "fill=\"#e8a33d\" fill-opacity=\"0.5\" stroke=\"#a0522d\"");
        scene.polygon("dual", dual.polygon.vertices(), "fill=\"none\" stroke=\"#4a7ab5\"");
        scene.marker("origin", Point2::ORIGIN, "fill=\"red\"");
        write_file(&stem.with_extension("svg"), &scene.render())?;
    }
    Ok(())
}

fn cmd_duals(config: &JobConfig) -> CliResult<()> {
    let m = config.directions;
    prepare_out(config)?;
    if let Some(path) = &config.support_csv {
        let h = read_support_csv(path)?;
        let shape = wulff_from_support(&h, h.len().max(256))?;
        let dual = dual_wulff(&shape, m)?;
        let back = dual_wulff(&dual, m)?;
        let step = 1e-3 * shape.polygon.scale();
        let rec = DualRecord {
            theta: h.theta,
            empty: false,
            support_min: Some(h.values().iter().cloned().fold(f64::INFINITY, f64::min)),
            support_max: Some(h.values().iter().cloned().fold(0.0, f64::max)),
            dh_clipping_vs_support: None,
            dual_vertices: Some(dual.polygon.len()),
            dh_double_dual: Some(hausdorff_polygons(&shape.polygon, &back.polygon, step)),
        };
        let stem = config.out.join("support");
        if config.emit.json {
            write_file(&stem.with_extension("json"), &to_json(&rec))?;
        }
        return emit_duals(config, &stem, &shape, &dual);
    }
    let (_, curve) = curve_of(config)?;
    let thetas = if config.thetas.is_empty() { vec![0.0] } else { config.thetas.clone() };
    for (k, &theta) in thetas.iter().enumerate() {
        let stem = config.out.join(format!("duals_{k:03}"));
        let Some(region) = region_at(&curve, theta, config.samples, config.grid)? else {
            if config.emit.json {
                let rec = DualRecord {
                    theta,
                    empty: true,
                    support_min: None,
                    support_max: None,
                    dh_clipping_vs_support: None,
                    dual_vertices: None,
                    dh_double_dual: None,
                };
                write_file(&stem.with_extension("json"), &to_json(&rec))?;
            }
            continue;
        };
        let h = support_function(&curve, theta, region.seed, config.samples, m)?;
        let by_support = region_by_support(&h)?;
        let step = 1e-3 * curve.scale();
        let shape = wulff_from_support(&h, m)?;
        let dual = dual_wulff(&shape, m)?;
        let back = dual_wulff(&dual, m)?;
        let rec = DualRecord {
            theta,
            empty: false,
            support_min: Some(h.values().iter().cloned().fold(f64::INFINITY, f64::min)),
            support_max: Some(h.values().iter().cloned().fold(0.0, f64::max)),
            dh_clipping_vs_support: Some(hausdorff_polygons(&region.polygon, &by_support.polygon, step)),
            dual_vertices: Some(dual.polygon.len()),
            dh_double_dual: Some(hausdorff_polygons(&shape.polygon, &back.polygon, 1e-3 * shape.polygon.scale())),
        };
        if config.emit.json {
            write_file(&stem.with_extension("json"), &to_json(&rec))?;
        }
        emit_duals(config, &stem, &shape, &dual)?;
    }
    Ok(())
}

/// One line of the `check` report.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CheckOutcome {
    pub name: String,
    pub subject: String,
    pub passed: bool,
    /// False when the property is not promised for this subject; such a
    /// failure is reported but does not fail the run.
    pub guaranteed: bool,
    pub detail: String,
}

#[derive(Serialize)]
struct CheckReport {
    passed: bool,
    failures: usize,
    checks: Vec<CheckOutcome>,
}

fn outcome(name: &str, subject: &str, passed: bool, guaranteed: bool, detail: String) -> CheckOutcome {
    CheckOutcome { name: name.into(), subject: subject.into(), passed, guaranteed, detail }
}

/// Wraps a check so that a geometry error becomes a failed outcome.
fn guarded(name: &str, subject: &str, f: impl FnOnce() -> crate::Result<CheckOutcome>) -> CheckOutcome {
    f().unwrap_or_else(|e| outcome(name, subject, false, true, format!("error: {e}")))
}

fn curve_checks(spec: &str, config: &JobConfig) -> CliResult<Vec<CheckOutcome>> {
    let curve = parse_curve_spec(spec)?;
    let (n, m) = (config.samples, config.directions);
    let scale = curve.scale();
    let mut out = Vec::new();
    out.push(guarded("lemma11", spec, || {
        let r = lemma11_check(&curve, config.trials.max(100), n, config.seed)?;
        Ok(outcome("lemma11", spec, r.passed, true, format!("max margin {:e} over {} points", r.max_margin, r.trials)))
    }));
    let angle = match crate::aperture::aperture_angle(&curve, 1e-3, n) {
        Ok(a) => a,
        Err(e) => {
            out.push(outcome("aperture", spec, false, true, format!("error: {e}")));
            return Ok(out);
        }
    };
    let lo = angle.bracket.0;
    out.push(guarded("nesting", spec, || {
        let sw = sweep_with(&curve, &theta_grid(0.0, 0.9 * lo, 8), n, config.grid)?;
        let r = nesting_check(&curve, &sw)?;
        let label = if r.guaranteed { "guaranteed" } else { "not guaranteed" };
        Ok(outcome("nesting", spec, r.holds, r.guaranteed, format!("{label}; worst excess {:e}", r.worst_excess)))
    }));
    out.push(guarded("cross-construction", spec, || {
        let mut worst: f64 = 0.0;
        for f in [0.0, 0.3, 0.6] {
            let theta = f * lo;
            let Some(r) = region_at(&curve, theta, n, config.grid)? else {
                return Ok(outcome(
                    "cross-construction",
                    spec,
                    false,
                    true,
                    format!("empty region at theta = {theta}"),
                ));
            };
            let h = support_function(&curve, theta, r.seed, n, m)?;
            let s = region_by_support(&h)?;
            worst = worst.max(hausdorff_polygons(&r.polygon, &s.polygon, 1e-3 * scale) / scale);
        }
        Ok(outcome("cross-construction", spec, worst <= 1e-3, true, format!("max d_H / scale {worst:e}")))
    }));
    out.push(guarded("non-polygon", spec, || {
        // a polygon keeps its vertex count when the line family is refined
        let mut counts = Vec::new();
        for f in [0.25, 0.5, 0.75] {
            if let Some(c) = refinement_vertex_counts(&curve, f * lo, n, config.grid)? {
                counts.push(c);
            }
        }
        let ok = !counts.is_empty() && counts.iter().all(|&(a, b)| b as f64 >= 1.5 * a as f64);
        Ok(outcome(
            "non-polygon",
            spec,
            ok,
            true,
            format!("vertex counts with N and 2N lines {counts:?} at 0.25, 0.5, 0.75 of theta_r"),
        ))
    }));
    out.push(guarded("dual-involution", spec, || {
        let Some(r) = region_at(&curve, 0.0, n, config.grid)? else {
            return Ok(outcome("dual-involution", spec, false, true, "empty region at theta = 0".into()));
        };
        let h = support_function(&curve, 0.0, r.seed, n, m)?;
        let shape = wulff_from_support(&h, m)?;
        let back = dual_wulff(&dual_wulff(&shape, m)?, m)?;
        let d = hausdorff_polygons(&shape.polygon, &back.polygon, 1e-3 * shape.polygon.scale());
        Ok(outcome("dual-involution", spec, d <= 1e-3 * shape.polygon.scale(), true, format!("d_H {d:e}")))
    }));
    Ok(out)
}

fn shape_checks(config: &JobConfig) -> Vec<CheckOutcome> {
    let m = config.directions.max(1024);
    let mut out = Vec::new();
    let disk = ConvexPolygon::regular(4096, 1.0);
    let square = ConvexPolygon::square(Point2::ORIGIN, 2.0);
    let diamond = ConvexPolygon::from_ccw(vec![
        Point2::new(1.0, 0.0),
        Point2::new(0.0, 1.0),
        Point2::new(-1.0, 0.0),
        Point2::new(0.0, -1.0),
    ]);
    for (name, poly, expected) in [("disk", &disk, &disk), ("square", &square, &diamond)] {
        out.push(guarded("dual-wulff", name, || {
            let shape = WulffShape { polygon: poly.clone(), support: support_polygon(poly, m)? };
            let dual = dual_wulff(&shape, m)?;
            let back = dual_wulff(&dual, m)?;
            let d1 = hausdorff_polygons(&dual.polygon, expected, 1e-3);
            let d2 = hausdorff_polygons(&back.polygon, poly, 1e-3);
            Ok(outcome(
                "dual-wulff",
                name,
                d1 <= 1e-3 && d2 <= 1e-3,
                true,
                format!("dual d_H {d1:e}, double dual d_H {d2:e}"),
            ))
        }));
    }
    out.push(guarded("maehara", "random hemispherical sets", || {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let sets = 20;
        let mut agree = 0;
        for i in 0..sets {
            let w = random_hemispherical_set(&mut rng, 1 + i % 6);
            if maehara_check(&w, 10 * config.trials.max(100), &mut rng)? {
                agree += 1;
            }
        }
        Ok(outcome(
            "maehara",
            "random hemispherical sets",
            agree == sets,
            true,
            format!("{agree} of {sets} sets agree"),
        ))
    }));
    out
}

fn cmd_check(config: &JobConfig) -> CliResult<()> {
    let mut checks = Vec::new();
    if let Some(path) = &config.support_csv {
        let c = match read_support_csv(path) {
            Ok(h) => match wulff_from_support(&h, h.len()) {
                Ok(_) => outcome("support-validation", &path.display().to_string(), true, true, "valid".into()),
                Err(e) => outcome("support-validation", &path.display().to_string(), false, true, e.to_string()),
            },
            Err(e) => outcome("support-validation", &path.display().to_string(), false, true, e.to_string()),
        };
        checks.push(c);
    } else {
        let specs: Vec<String> = match &config.curve_spec {
            Some(s) => vec![s.clone()],
            None => BUILTIN_CURVES.iter().map(|s| s.to_string()).collect(),
        };
        for spec in &specs {
            checks.extend(curve_checks(spec, config)?);
        }
        checks.extend(shape_checks(config));
    }
    let failures = checks.iter().filter(|c| c.guaranteed && !c.passed).count();
    for c in &checks {
        let status = match (c.passed, c.guaranteed) {
            (true, _) => "PASS",
            (false, true) => "FAIL",
            (false, false) => "WARN",
        };
        println!("{status} {} [{}] {}", c.name, c.subject, c.detail);
    }
    if config.emit.json {
        prepare_out(config)?;
        let report = CheckReport { passed: failures == 0, failures, checks };
        write_file(&config.out.join("check.json"), &to_json(&report))?;
    }
    if failures > 0 {
        Err(CliError::ChecksFailed(failures))
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_expressions() {
        let close = |a: f64, b: f64| (a - b).abs() < 1e-15;
        assert!(close(parse_theta("pi/4").unwrap(), PI / 4.0));
        assert!(close(parse_theta("3*pi/8").unwrap(), 3.0 * PI / 8.0));
        assert!(close(parse_theta("2pi/3").unwrap(), 2.0 * PI / 3.0));
        assert!(close(parse_theta(" 0.3 ").unwrap(), 0.3));
        assert!(close(parse_theta("π/2").unwrap(), FRAC_PI_2));
        for bad in ["", "pie", "pi//2", "1/0", "x"] {
            assert!(parse_theta(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn theta_ranges() {
        let r = parse_theta_range("0:pi/2:3").unwrap();
        assert_eq!(r.len(), 3);
        assert!((r[1] - PI / 4.0).abs() < 1e-15);
        assert!(parse_theta_range("0:1").is_err());
        assert!(parse_theta_range("0:1:0").is_err());
    }

    #[test]
    fn config_merging_and_validation() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("job.toml");
        fs::write(&path, "curve = \"ellipse:2,1\"\ntheta = [0.1, \"pi/6\"]\nsamples = 1024\nemit = [\"json\"]\n")
            .unwrap();
        let args = JobArgs { config: Some(path.clone()), samples: Some(4096), ..Default::default() };
        let c = resolve(args).unwrap();
        assert_eq!(c.curve_spec.as_deref(), Some("ellipse:2,1"));
        assert_eq!(c.samples, 4096);
        assert_eq!(c.thetas.len(), 2);
        assert_eq!(c.emit, Emit { svg: false, csv: false, json: true });

        fs::write(&path, "curve = \"circle:1\"\nsamples = \"many\"\n").unwrap();
        let err = resolve(JobArgs { config: Some(path.clone()), ..Default::default() }).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("samples") && msg.contains("line 2"), "{msg}");

        fs::write(&path, "colour = 3\n").unwrap();
        assert!(resolve(JobArgs { config: Some(path), ..Default::default() }).is_err());
        assert!(resolve(JobArgs { theta: vec!["2".into()], ..Default::default() }).is_err());
        assert!(resolve(JobArgs { samples: Some(100), ..Default::default() }).is_err());
        assert!(resolve(JobArgs { emit: vec!["png".into()], ..Default::default() }).is_err());
    }

    #[test]
    fn csv_uses_seventeen_digits() {
        let s = csv_table(&["a"], &[vec![0.1]]);
        assert_eq!(s, "a\n1.0000000000000001e-1\n");
        assert_eq!(s.lines().nth(1).unwrap().parse::<f64>().unwrap(), 0.1);
    }

    #[test]
    fn empty_record_is_minimal() {
        let json = serde_json::to_string(&record(FRAC_PI_2, None, 1024, None)).unwrap();
        assert_eq!(json, format!("{{\"theta\":{},\"empty\":true}}", FRAC_PI_2));
    }

    #[test]
    fn svg_is_well_formed() {
        let mut scene = SvgScene::new(Point2::new(-1.0, -1.0), Point2::new(1.0, 1.0));
        scene.polygon("region", &[Point2::ORIGIN, Point2::new(1.0, 0.0), Point2::new(0.0, 1.0)], "fill=\"none\"");
        scene.marker("seed", Point2::ORIGIN, "fill=\"red\"");
        let s = scene.render();
        assert!(s.starts_with("<?xml") && s.contains("viewBox=") && s.trim_end().ends_with("</svg>"));
        assert_eq!(s.matches("<svg").count(), 1);
        assert_eq!(s.matches("<g").count(), s.matches("</g>").count());
    }
}
