//! Command-line front end: file formats, the `middle-curve` verbs and SVG
//! plots.
//!
//! Curve files are JSON (`{"dimension": d, "curves": [{"id", "points"}]}`);
//! a CSV import with columns `id,x1,..,xd` is accepted wherever a curve file
//! is read, selected by the `.csv` extension.

use std::collections::HashMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::Number;

use crate::approx::{ApproxParams, GridApprox};
use crate::error::{Error, Result};
use crate::frechet::{continuous_frechet_decision, discrete_frechet};
use crate::geometry::{Curve, CurveSet, Point};
use crate::middle::{verify, BruteForce, ProvenancedCurve, Variant, VertexRef};
use crate::reduction::{
    enumerate_it, reduction_equivalence_with, scs_brute_force, shortest_common_supersequence,
    ReductionInstance, ScsInstance,
};
use crate::search::DEFAULT_MAX_CANDIDATES;

/// Environment variable overriding the enumeration cap.
pub const MAX_CANDIDATES_VAR: &str = "MC_MAX_CANDIDATES";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveRecord {
    pub id: String,
    pub points: Vec<Vec<Number>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveFile {
    pub dimension: usize,
    pub curves: Vec<CurveRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefRecord {
    pub curve: String,
    pub index: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MiddleFile {
    pub refs: Vec<RefRecord>,
    pub delta: Number,
    pub variant: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScsFile {
    pub sequences: Vec<String>,
    pub t: usize,
}

/// Integral values as integer literals, everything else as the shortest
/// decimal that round-trips.
fn number(x: f64) -> Result<Number> {
    if x.fract() == 0.0 && x.abs() < 9_007_199_254_740_992.0 {
        Ok(Number::from(x as i64))
    } else {
        Number::from_f64(x).ok_or_else(|| Error::InvalidArgument(format!("cannot serialize {x}")))
    }
}

fn value(n: &Number) -> Result<f64> {
    n.as_f64()
        .ok_or_else(|| Error::InvalidArgument(format!("`{n}` is not a finite number")))
}

fn to_json<T: Serialize>(doc: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(doc)?;
    s.push('\n');
    Ok(s)
}

impl CurveFile {
    pub fn from_curves(ps: &CurveSet) -> Result<Self> {
        let curves = ps
            .iter()
            .map(|c| {
                let points = c
                    .vertices()
                    .iter()
                    .map(|p| p.coords().iter().map(|&x| number(x)).collect())
                    .collect::<Result<_>>()?;
                Ok(CurveRecord {
                    id: c.id().to_string(),
                    points,
                })
            })
            .collect::<Result<_>>()?;
        Ok(CurveFile {
            dimension: ps.dim(),
            curves,
        })
    }

    pub fn to_curve_set(&self) -> Result<CurveSet> {
        let curves = self
            .curves
            .iter()
            .map(|rec| {
                let vertices = rec
                    .points
                    .iter()
                    .map(|p| {
                        if p.len() != self.dimension {
                            return Err(Error::DimensionMismatch {
                                expected: self.dimension,
                                found: p.len(),
                            });
                        }
                        Point::new(p.iter().map(value).collect::<Result<_>>()?)
                    })
                    .collect::<Result<_>>()?;
                Curve::new(rec.id.clone(), vertices)
            })
            .collect::<Result<_>>()?;
        CurveSet::new(curves)
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        to_json(self)
    }
}

impl MiddleFile {
    pub fn new(m: &ProvenancedCurve, delta: f64, variant: Variant) -> Result<Self> {
        Ok(MiddleFile {
            refs: m
                .refs()
                .iter()
                .map(|r| RefRecord {
                    curve: r.curve_id.clone(),
                    index: r.index,
                })
                .collect(),
            delta: number(delta)?,
            variant: variant.to_string(),
        })
    }

    pub fn refs(&self) -> Vec<VertexRef> {
        self.refs
            .iter()
            .map(|r| VertexRef::new(r.curve.clone(), r.index))
            .collect()
    }

    pub fn delta(&self) -> Result<f64> {
        value(&self.delta)
    }

    pub fn variant(&self) -> Result<Variant> {
        self.variant.parse()
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        to_json(self)
    }
}

impl ScsFile {
    pub fn instance(&self) -> Result<ScsInstance> {
        ScsInstance::new(self.sequences.iter().cloned(), self.t)
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        to_json(self)
    }
}

/// Curves grouped by the `id` column, in order of first appearance.
pub fn parse_curve_csv(text: &str) -> Result<CurveSet> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut order: Vec<String> = Vec::new();
    let mut points: HashMap<String, Vec<Point>> = HashMap::new();
    for row in reader.records() {
        let row = row?;
        let id = row.get(0).unwrap_or_default().to_string();
        let coords = row
            .iter()
            .skip(1)
            .map(|f| {
                f.parse::<f64>().map_err(|_| {
                    Error::InvalidArgument(format!("bad coordinate `{f}` for curve `{id}`"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let p = Point::new(coords)?;
        if !points.contains_key(&id) {
            order.push(id.clone());
        }
        points.entry(id).or_default().push(p);
    }
    let curves = order
        .into_iter()
        .map(|id| {
            let vs = points.remove(&id).unwrap_or_default();
            Curve::new(id, vs)
        })
        .collect::<Result<_>>()?;
    CurveSet::new(curves)
}

pub fn read_curve_set(path: &Path) -> Result<CurveSet> {
    let text = fs::read_to_string(path)?;
    if path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"))
    {
        parse_curve_csv(&text)
    } else {
        CurveFile::parse(&text)?.to_curve_set()
    }
}

pub fn write_curve_set(path: &Path, ps: &CurveSet) -> Result<()> {
    fs::write(path, CurveFile::from_curves(ps)?.to_json()?)?;
    Ok(())
}

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

/// SVG rendering of 1-D or 2-D curves. 1-D curves use the vertex index
/// as the horizontal coordinate.
pub fn render_svg(curves: &[&Curve]) -> Result<String> {
    let first = curves
        .first()
        .ok_or_else(|| Error::InvalidArgument("nothing to plot".into()))?;
    let d = first.dim();
    if d > 2 {
        return Err(Error::InvalidArgument(format!(
            "cannot plot {d}-dimensional curves"
        )));
    }
    let lines: Vec<Vec<(f64, f64)>> = curves
        .iter()
        .map(|c| {
            if c.dim() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: c.dim(),
                });
            }
            Ok(c.vertices()
                .iter()
                .enumerate()
                .map(|(k, p)| match d {
                    1 => (k as f64, p.coords()[0]),
                    _ => (p.coords()[0], p.coords()[1]),
                })
                .collect())
        })
        .collect::<Result<_>>()?;

    let (w, h, margin) = (640.0, 480.0, 40.0);
    let all = lines.iter().flatten();
    let (mut x0, mut x1, mut y0, mut y1) = (
        f64::INFINITY,
        f64::NEG_INFINITY,
        f64::INFINITY,
        f64::NEG_INFINITY,
    );
    for &(x, y) in all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let sx = if x1 > x0 {
        (w - 2.0 * margin) / (x1 - x0)
    } else {
        1.0
    };
    let sy = if y1 > y0 {
        (h - 2.0 * margin) / (y1 - y0)
    } else {
        1.0
    };
    let map = |(x, y): (f64, f64)| (margin + (x - x0) * sx, h - margin - (y - y0) * sy);

    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    )
    .unwrap();
    writeln!(svg, r#"<rect width="{w}" height="{h}" fill="white"/>"#).unwrap();
    for (i, (curve, line)) in curves.iter().zip(&lines).enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let pts: Vec<String> = line
            .iter()
            .map(|&p| {
                let (x, y) = map(p);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        writeln!(svg, r#"<g id="{}">"#, xml_escape(curve.id())).unwrap();
        writeln!(
            svg,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#,
            pts.join(" ")
        )
        .unwrap();
        for &p in line {
            let (x, y) = map(p);
            writeln!(
                svg,
                r#"<circle cx="{x:.2}" cy="{y:.2}" r="3" fill="{color}"/>"#
            )
            .unwrap();
        }
        writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-size="12" fill="{color}">{}</text>"#,
            w - margin + 4.0,
            margin + 14.0 * i as f64,
            xml_escape(curve.id())
        )
        .unwrap();
        writeln!(svg, "</g>").unwrap();
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

#[derive(Debug, Parser)]
#[command(
    name = "middle-curve",
    version,
    about = "Middle curves under the discrete Fréchet distance"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Discrete,
    Continuous,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReduceAction {
    Encode,
    Check,
}

fn parse_variant(s: &str) -> std::result::Result<Variant, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fréchet distance between two curves of a file.
    Frechet {
        file: PathBuf,
        id_a: String,
        id_b: String,
        #[arg(long, value_enum, default_value = "discrete")]
        mode: Mode,
        #[arg(long)]
        delta: Option<f64>,
    },
    /// Exact middle-curve search.
    Solve {
        file: PathBuf,
        #[arg(long, value_parser = parse_variant, default_value = "unordered")]
        variant: Variant,
        #[arg(long, required_unless_present = "optimize")]
        delta: Option<f64>,
        #[arg(long)]
        ell: usize,
        #[arg(long, conflicts_with = "delta")]
        optimize: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Approximate middle curve via a grid center.
    Approx {
        file: PathBuf,
        #[arg(long)]
        ell: usize,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also compute the exact optimum and report the ratio.
        #[arg(long)]
        opt_check: bool,
    },
    /// Encode an SCS instance as middle-curve instances, or check both sides.
    Reduce {
        scsfile: PathBuf,
        #[arg(value_enum)]
        action: ReduceAction,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_parser = parse_variant, default_value = "unordered")]
        variant: Variant,
    },
    /// Shortest common supersequence of an SCS file.
    Scs { scsfile: PathBuf },
    /// Check a middle-curve file against a curve file.
    Verify {
        curvefile: PathBuf,
        middlefile: PathBuf,
    },
    /// Render curves as SVG.
    Plot {
        file: PathBuf,
        #[arg(long)]
        svg: PathBuf,
        /// Comma-separated ids to plot (default: all).
        #[arg(long, value_delimiter = ',')]
        ids: Option<Vec<String>>,
    },
}

/// Enumeration cap from `MC_MAX_CANDIDATES`, or the default.
pub fn max_candidates() -> Result<u64> {
    match std::env::var(MAX_CANDIDATES_VAR) {
        Ok(v) => v.trim().parse().map_err(|_| {
            Error::InvalidArgument(format!(
                "{MAX_CANDIDATES_VAR} must be a positive integer, got `{v}`"
            ))
        }),
        Err(_) => Ok(DEFAULT_MAX_CANDIDATES),
    }
}

fn refs_line(m: &ProvenancedCurve) -> String {
    m.refs()
        .iter()
        .map(|r| r.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn write_middle(path: &Path, m: &ProvenancedCurve, delta: f64, variant: Variant) -> Result<()> {
    fs::write(path, MiddleFile::new(m, delta, variant)?.to_json()?)?;
    Ok(())
}

fn read_scs(path: &Path) -> Result<ScsInstance> {
    ScsFile::parse(&fs::read_to_string(path)?)?.instance()
}

/// Runs one command, writing its report to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<()> {
    let limit = max_candidates()?;
    match cli.command {
        Command::Frechet {
            file,
            id_a,
            id_b,
            mode,
            delta,
        } => {
            let ps = read_curve_set(&file)?;
            let (a, b) = (ps.get(&id_a)?, ps.get(&id_b)?);
            match mode {
                Mode::Discrete => {
                    let r = discrete_frechet(a, b)?;
                    writeln!(out, "{}", r.value)?;
                    writeln!(out, "{}", r.witness)?;
                }
                Mode::Continuous => {
                    let delta = delta.ok_or_else(|| {
                        Error::InvalidArgument("continuous mode requires --delta".into())
                    })?;
                    writeln!(out, "{}", continuous_frechet_decision(a, b, delta)?)?;
                }
            }
        }
        Command::Solve {
            file,
            variant,
            delta,
            ell,
            optimize,
            out: path,
        } => {
            let ps = read_curve_set(&file)?;
            let solver = BruteForce::new(limit);
            let outcome = match delta {
                Some(delta) if !optimize => solver.solve(&ps, delta, ell, variant)?,
                _ => solver.optimize(&ps, ell, variant)?,
            };
            match (&outcome.witness, outcome.radius) {
                (Some(m), Some(radius)) => {
                    if optimize {
                        writeln!(out, "optimal radius: {radius}")?;
                    } else {
                        writeln!(out, "feasible")?;
                        writeln!(out, "radius: {radius}")?;
                    }
                    writeln!(out, "middle: {}", refs_line(m))?;
                    if let Some(path) = path {
                        write_middle(&path, m, delta.unwrap_or(radius), variant)?;
                    }
                }
                _ => writeln!(out, "infeasible")?,
            }
        }
        Command::Approx {
            file,
            ell,
            eps,
            out: path,
            opt_check,
        } => {
            let ps = read_curve_set(&file)?;
            let report = GridApprox::new(limit).middle(&ps, ApproxParams::new(ell, eps)?)?;
            writeln!(out, "center radius: {}", report.center.radius)?;
            writeln!(out, "middle radius: {}", report.radius)?;
            writeln!(out, "middle: {}", refs_line(&report.middle))?;
            if opt_check {
                let opt = BruteForce::new(limit)
                    .optimize(&ps, ell, Variant::Unordered)?
                    .radius
                    .expect("optimization always has a witness");
                writeln!(out, "optimum: {opt}")?;
                if opt > 0.0 {
                    writeln!(out, "ratio: {}", report.radius / opt)?;
                } else {
                    writeln!(out, "ratio: 1")?;
                }
            }
            if let Some(path) = path {
                write_middle(&path, &report.middle, report.radius, Variant::Unordered)?;
            }
        }
        Command::Reduce {
            scsfile,
            action,
            out: dir,
            variant,
        } => {
            let inst = read_scs(&scsfile)?;
            match action {
                ReduceAction::Encode => {
                    let dir = dir.unwrap_or_else(|| PathBuf::from("."));
                    fs::create_dir_all(&dir)?;
                    for (a, b) in enumerate_it(inst.t()) {
                        let ri = ReductionInstance::new(&inst, a, b)?;
                        let path = dir.join(format!("instance_a{a}_b{b}.json"));
                        write_curve_set(&path, ri.curve_set())?;
                        writeln!(out, "{}", path.display())?;
                    }
                }
                ReduceAction::Check => {
                    let r = reduction_equivalence_with(&inst, variant, &BruteForce::new(limit))?;
                    writeln!(out, "scs: {}", r.scs)?;
                    writeln!(out, "middle ({variant}): {}", r.middle)?;
                    if let Some(s) = &r.scs_witness {
                        writeln!(out, "supersequence: {s}")?;
                    }
                    if let (Some((a, b)), Some(m)) = (r.split, &r.witness) {
                        writeln!(out, "split: a={a} b={b}")?;
                        writeln!(out, "middle: {}", refs_line(m))?;
                    }
                }
            }
        }
        Command::Scs { scsfile } => {
            let inst = read_scs(&scsfile)?;
            let s = shortest_common_supersequence(inst.sequences())?;
            let (feasible, _) = scs_brute_force(&inst);
            writeln!(out, "{feasible}")?;
            writeln!(out, "length: {}", s.len())?;
            writeln!(out, "supersequence: {s}")?;
        }
        Command::Verify {
            curvefile,
            middlefile,
        } => {
            let ps = read_curve_set(&curvefile)?;
            let mf = MiddleFile::parse(&fs::read_to_string(&middlefile)?)?;
            let m = ProvenancedCurve::resolve(mf.refs(), &ps)?;
            writeln!(out, "{}", verify(&m, &ps, mf.delta()?, mf.variant()?)?)?;
        }
        Command::Plot { file, svg, ids } => {
            let ps = read_curve_set(&file)?;
            let selected: Vec<&Curve> = match &ids {
                None => ps.iter().collect(),
                Some(ids) => ids.iter().map(|id| ps.get(id)).collect::<Result<_>>()?,
            };
            fs::write(&svg, render_svg(&selected)?)?;
            writeln!(out, "{}", svg.display())?;
        }
    }
    Ok(())
}

/// Parses `args`, runs the command and returns the process exit code.
/// Usage errors exit with 1.
pub fn main_with(
    args: impl IntoIterator<Item = OsString>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                1
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    match run(cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
