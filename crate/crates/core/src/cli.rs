//! The `polyharm` command-line front end.
//!
//! Every subcommand prints JSON on stdout. Exit codes: 0 pass, 1 some check
//! failed, 2 only hypotheses were not met, 3 usage error, 4 unreadable or
//! malformed input, 5 numerical failure (no root, degenerate map, ...).

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::catalog::{self, BUILTIN_NAMES};
use crate::certificates::{
    self, arg_condition, area_schwarz, diameter_coefficient_bounds, hadamard_three_circles,
    length_coefficient_bounds, three_circles_area, ArgConditionKind,
};
use crate::geometry::{
    area_quadrature_with, area_series, curve_length_with, diameter_estimate_with, sup_length_with,
    uniform_grid, AreaQuadrature, DiameterSearch, SupLengthSearch,
};
use crate::landau::{self, LandauResult};
use crate::map::{dilatation, quasiregularity_search, wirtinger, SupSearch};
use crate::metrics::{self, contraction_check, harmonic_lipschitz_check, DiskDomain, PairSampler};
use crate::quadrature::TrapezoidControl;
use crate::render::{render, RenderOptions};
use crate::report::{CheckReport, Margin, TOL_REPORT};
use crate::{Error, MappingSpec, PolyharmonicMap, Verdict, C64};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_HYPOTHESES: i32 = 2;
pub const EXIT_USAGE: i32 = 3;
pub const EXIT_INPUT: i32 = 4;
pub const EXIT_NUMERIC: i32 = 5;

/// Agreement required between the two area routes in `verify`.
const AREA_CROSS_TOL: f64 = 1e-8;

#[derive(Debug, Parser)]
#[command(name = "polyharm", version, about = "Polyharmonic mappings in truncated Almansi form")]
pub struct Cli {
    #[command(flatten)]
    pub globals: Globals,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Globals {
    /// Report tolerance on inequality slack.
    #[arg(long, global = true, default_value_t = TOL_REPORT)]
    pub tol: f64,
    /// Number of radii in the grids used by area and three-circles checks.
    #[arg(long, global = true, default_value_t = 100)]
    pub grid: usize,
    /// Seed of the pair sampler.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Initial sample count of the periodic trapezoid rule.
    #[arg(long, global = true, default_value_t = 2048)]
    pub theta_samples: usize,
    /// Gauss-Legendre nodes in the radial direction of the area quadrature.
    #[arg(long, global = true, default_value_t = 64)]
    pub radial_nodes: usize,
}

#[derive(Debug, Clone, Args)]
pub struct MapArgs {
    /// Mapping file (JSON table or builtin spec).
    #[arg(long, conflicts_with = "builtin")]
    pub map: Option<PathBuf>,
    /// Builtin mapping name.
    #[arg(long)]
    pub builtin: Option<String>,
    /// Builtin parameters as a JSON object.
    #[arg(long, requires = "builtin")]
    pub params: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LandauMode {
    Diam,
    Length,
    Example1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CirclesKind {
    Area,
    Hadamard,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Value of F at a point.
    Eval {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        z: C64,
    },
    /// Wirtinger derivatives, Jacobian and dilatation at a point.
    Derive {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        z: C64,
    },
    /// Length of the image of |z| = r, or its supremum when r is omitted.
    Length {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long)]
        r: Option<f64>,
    },
    /// Normalized area S_F(r) by series and by quadrature.
    Area {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long)]
        r: f64,
    },
    /// Sampled diameter of F(D_r).
    Diam {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, default_value_t = 1.0)]
        r: f64,
    },
    /// Univalence and covering radii.
    Landau {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, value_enum)]
        mode: LandauMode,
        #[arg(long)]
        p: Option<usize>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        diam: Option<f64>,
        #[arg(long = "K")]
        k: Option<f64>,
        #[arg(long)]
        l1: Option<f64>,
    },
    /// Three-circles inequality for the area function or the maximum modulus.
    ThreeCircles {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, value_enum, default_value = "area")]
        kind: CirclesKind,
        #[arg(long)]
        r1: f64,
        /// Bound on S_F(r1) (area kind).
        #[arg(long)]
        m: Option<f64>,
        /// Outer radius (hadamard kind).
        #[arg(long)]
        r2: Option<f64>,
    },
    /// Monotonicity of S_F(r)/r².
    Schwarz {
        #[command(flatten)]
        map: MapArgs,
    },
    /// Distance-ratio metric of the disk of radius M.
    Jmetric {
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        z: C64,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        w: C64,
        #[arg(long = "M", default_value_t = 1.0)]
        m: f64,
    },
    /// Run every applicable check and emit a report document.
    Verify {
        #[command(flatten)]
        map: MapArgs,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long = "K")]
        k: Option<f64>,
        #[arg(long)]
        l1: Option<f64>,
        #[arg(long)]
        diam: Option<f64>,
        #[arg(long)]
        alpha: Option<f64>,
        /// Target disk radius for the contraction check.
        #[arg(long = "M")]
        m_target: Option<f64>,
        /// Inner radius for the area three-circles check.
        #[arg(long, requires = "m")]
        r1: Option<f64>,
        #[arg(long, requires = "r1")]
        m: Option<f64>,
    },
    /// SVG image of a polar grid under F.
    Render {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 8)]
        rings: usize,
        #[arg(long, default_value_t = 16)]
        rays: usize,
        #[arg(long, default_value_t = 512)]
        samples: usize,
    },
    /// List builtin names, or write the spec of one.
    Catalog {
        name: Option<String>,
        #[arg(long)]
        params: Option<String>,
        /// Write the explicit coefficient table instead of the builtin reference.
        #[arg(long)]
        expand: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Accepts `x`, `x,y` or `[x,y]`.
pub fn parse_complex(s: &str) -> std::result::Result<C64, String> {
    let trimmed = s.trim().trim_start_matches('[').trim_end_matches(']');
    let parts: Vec<&str> = trimmed.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<f64>().map_err(|e| format!("bad number {t:?}: {e}"));
    let z = match parts.as_slice() {
        [re] => C64::new(num(re)?, 0.0),
        [re, im] => C64::new(num(re)?, num(im)?),
        _ => return Err(format!("expected x, x,y or [x,y], got {s:?}")),
    };
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err("complex value must be finite".into())
    }
}

/// Failure of a subcommand with its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Io(_) | Error::Json(_) | Error::MalformedSpec(_) | Error::UnknownName(_) | Error::MalformedParams { .. } => {
                EXIT_INPUT
            }
            Error::InvalidParams(_) | Error::InvalidDiameter(_) => EXIT_USAGE,
            _ => EXIT_NUMERIC,
        };
        CliError { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> CliError {
    CliError { code: EXIT_USAGE, message: message.into() }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}

fn load_map(args: &MapArgs) -> CliResult<PolyharmonicMap> {
    let spec = match (&args.map, &args.builtin) {
        (Some(path), _) => MappingSpec::read(path)?,
        (None, Some(name)) => {
            let params = match &args.params {
                Some(text) => serde_json::from_str(text).map_err(|e| Error::MalformedParams {
                    name: name.clone(),
                    reason: e.to_string(),
                })?,
                None => json!({}),
            };
            MappingSpec::builtin(name, params)
        }
        (None, None) => return Err(usage("a mapping is required: pass --map FILE or --builtin NAME")),
    };
    Ok(spec.build()?)
}

fn complex_json(z: C64) -> Value {
    json!([z.re, z.im])
}

fn emit(out: &mut dyn Write, value: &impl Serialize) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value).map_err(Error::from)?;
    writeln!(out, "{text}").map_err(Error::from)?;
    Ok(())
}

fn verdict_code(verdicts: impl IntoIterator<Item = Verdict>) -> i32 {
    let mut code = EXIT_PASS;
    for v in verdicts {
        match v {
            Verdict::Fail => return EXIT_FAIL,
            Verdict::HypothesesNotMet => code = EXIT_HYPOTHESES,
            Verdict::Pass => {}
        }
    }
    code
}

impl Globals {
    fn trapezoid(&self) -> TrapezoidControl {
        TrapezoidControl { initial_samples: self.theta_samples.max(1), ..TrapezoidControl::default() }
    }

    fn sup_length(&self) -> SupLengthSearch {
        SupLengthSearch { quadrature: self.trapezoid(), ..SupLengthSearch::default() }
    }

    fn area_quadrature(&self) -> AreaQuadrature {
        AreaQuadrature { theta_samples: self.theta_samples.max(1), radial_nodes: self.radial_nodes.max(1) }
    }

    fn sampler(&self) -> PairSampler {
        PairSampler::with_seed(self.seed)
    }

    /// `grid` radii evenly spaced strictly inside (0, 1).
    fn interior_grid(&self) -> Vec<f64> {
        let g = self.grid.max(2);
        (1..=g).map(|k| k as f64 / (g + 1) as f64).collect()
    }

    fn check(&self) -> CliResult<()> {
        if !(self.tol >= 0.0 && self.tol.is_finite()) {
            return Err(usage("--tol must be a nonnegative number"));
        }
        Ok(())
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> CliResult<i32> {
    let g = &cli.globals;
    g.check()?;
    match &cli.command {
        Command::Eval { map, z } => {
            let f = load_map(map)?;
            emit(out, &json!({ "z": complex_json(*z), "F": complex_json(f.eval(*z)) }))?;
            Ok(EXIT_PASS)
        }
        Command::Derive { map, z } => {
            let f = load_map(map)?;
            let (fz, fzb) = wirtinger(&f, *z);
            let d = dilatation(&f, *z);
            emit(
                out,
                &json!({
                    "z": complex_json(*z),
                    "F_z": complex_json(fz),
                    "F_zbar": complex_json(fzb),
                    "jacobian": fz.norm_sqr() - fzb.norm_sqr(),
                    "lambda": d.lambda_small,
                    "Lambda": d.lambda_big,
                }),
            )?;
            Ok(EXIT_PASS)
        }
        Command::Length { map, r } => {
            let f = load_map(map)?;
            let value = match r {
                Some(r) => json!({ "r": r, "length": curve_length_with(&f, *r, &g.trapezoid())? }),
                None => json!({ "sup_length": sup_length_with(&f, &g.sup_length())? }),
            };
            emit(out, &value)?;
            Ok(EXIT_PASS)
        }
        Command::Area { map, r } => {
            let f = load_map(map)?;
            if !(*r > 0.0 && *r <= 1.0) {
                return Err(usage(format!("radius {r} not in (0, 1]")));
            }
            let series = area_series(&f, *r);
            let quad = area_quadrature_with(&f, *r, &g.area_quadrature())?;
            emit(out, &json!({ "r": r, "area_series": series, "area_quadrature": quad, "phi_area": series / (r * r) }))?;
            Ok(EXIT_PASS)
        }
        Command::Diam { map, r } => {
            let f = load_map(map)?;
            emit(out, &json!({ "r": r, "diameter": diameter_estimate_with(&f, *r, &DiameterSearch::default())? }))?;
            Ok(EXIT_PASS)
        }
        Command::Landau { map, mode, p, alpha, diam, k, l1 } => {
            let f = if map.map.is_some() || map.builtin.is_some() { Some(load_map(map)?) } else { None };
            let result = landau_command(g, f.as_ref(), *mode, *p, *alpha, *diam, *k, *l1)?;
            emit(out, &result)?;
            Ok(EXIT_PASS)
        }
        Command::ThreeCircles { map, kind, r1, m, r2 } => {
            let f = load_map(map)?;
            let report = match kind {
                CirclesKind::Area => {
                    let m = m.ok_or_else(|| usage("--m is required for the area kind"))?;
                    three_circles_area(&f, *r1, m, &uniform_grid(*r1, 1.0 - 1e-3, g.grid.max(2)))?
                }
                CirclesKind::Hadamard => {
                    let r2 = r2.ok_or_else(|| usage("--r2 is required for the hadamard kind"))?;
                    hadamard_three_circles(&f, *r1, r2, &uniform_grid(*r1, r2, g.grid.max(2)))?
                }
            }
            .retolerated(g.tol);
            emit(out, &report)?;
            Ok(verdict_code([report.verdict]))
        }
        Command::Schwarz { map } => {
            let f = load_map(map)?;
            let outcome = area_schwarz(&f, &g.interior_grid())?;
            let report = outcome.report.retolerated(g.tol);
            emit(out, &report)?;
            Ok(verdict_code([report.verdict]))
        }
        Command::Jmetric { z, w, m } => {
            let domain = DiskDomain::new(*m)?;
            let j = metrics::j_metric(*z, *w, domain)?;
            emit(out, &json!({ "z": complex_json(*z), "w": complex_json(*w), "M": m, "j": j }))?;
            Ok(EXIT_PASS)
        }
        Command::Verify { map, out: path, k, l1, diam, alpha, m_target, r1, m } => {
            let f = load_map(map)?;
            let overrides = Overrides { k: *k, l1: *l1, diam: *diam, alpha: *alpha, m_target: *m_target, r1: *r1, m: *m };
            let doc = verify(&f, g, &overrides)?;
            let text = serde_json::to_string_pretty(&doc).map_err(Error::from)? + "\n";
            match path {
                Some(path) => {
                    std::fs::write(path, &text).map_err(Error::from)?;
                    for c in &doc.checks {
                        let slack = c.min_slack().map_or("-".to_string(), |s| format!("{s:.3e}"));
                        writeln!(out, "{:<28} {:<20} min_slack={slack}", c.check, c.verdict.to_string()).map_err(Error::from)?;
                    }
                    writeln!(out, "verdict: {}", doc.verdict).map_err(Error::from)?;
                }
                None => out.write_all(text.as_bytes()).map_err(Error::from)?,
            }
            Ok(verdict_code([doc.verdict]))
        }
        Command::Render { map, out: path, rings, rays, samples } => {
            let f = load_map(map)?;
            let opts = RenderOptions { rings: *rings, rays: *rays, samples_per_curve: *samples, ..RenderOptions::default() };
            let fig = render(&f, &opts)?;
            std::fs::write(path, &fig.svg).map_err(Error::from)?;
            emit(out, &json!({ "out": path, "curves": fig.rings.len() + fig.rays.len() + 1 }))?;
            Ok(EXIT_PASS)
        }
        Command::Catalog { name, params, expand, out: path } => {
            let Some(name) = name else {
                for n in BUILTIN_NAMES {
                    writeln!(out, "{n}").map_err(Error::from)?;
                }
                return Ok(EXIT_PASS);
            };
            let params: Value = match params {
                Some(text) => serde_json::from_str(text)
                    .map_err(|e| Error::MalformedParams { name: name.clone(), reason: e.to_string() })?,
                None => json!({}),
            };
            let map = catalog::builtin(name, &params)?;
            let spec = if *expand { MappingSpec::from_map(&map) } else { MappingSpec::builtin(&name.to_ascii_lowercase(), params) };
            let text = spec.to_json() + "\n";
            match path {
                Some(path) => std::fs::write(path, text).map_err(Error::from)?,
                None => out.write_all(text.as_bytes()).map_err(Error::from)?,
            }
            Ok(EXIT_PASS)
        }
    }
}

#[derive(Debug, Serialize)]
struct LandauOutput {
    mode: &'static str,
    p: usize,
    alpha: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    diam: Option<f64>,
    #[serde(rename = "K", skip_serializing_if = "Option::is_none")]
    k: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    l1: Option<f64>,
    #[serde(flatten)]
    result: LandauResult,
}

#[allow(clippy::too_many_arguments)]
fn landau_command(
    g: &Globals,
    map: Option<&PolyharmonicMap>,
    mode: LandauMode,
    p: Option<usize>,
    alpha: Option<f64>,
    diam: Option<f64>,
    k: Option<f64>,
    l1: Option<f64>,
) -> CliResult<LandauOutput> {
    let need = |flag: &str| usage(format!("--{flag} is required without a mapping"));
    let p = match (p, map) {
        (Some(p), _) => p,
        (None, Some(f)) => f.p(),
        (None, None) if mode == LandauMode::Example1 => 2,
        (None, None) => return Err(need("p")),
    };
    let alpha = match (alpha, map) {
        (Some(a), _) => a,
        (None, Some(f)) => dilatation(f, C64::new(0.0, 0.0)).lambda_small,
        (None, None) if mode == LandauMode::Example1 => 1.0,
        (None, None) => return Err(need("alpha")),
    };
    let output = |diam, k, l1, result| LandauOutput {
        mode: match mode {
            LandauMode::Diam => "diam",
            LandauMode::Length => "length",
            LandauMode::Example1 => "example1",
        },
        p,
        alpha,
        diam,
        k,
        l1,
        result,
    };
    match mode {
        LandauMode::Diam | LandauMode::Example1 => {
            let diam = match (diam, map) {
                (Some(d), _) => d,
                (None, Some(f)) => diameter_estimate_with(f, 1.0, &DiameterSearch::default())?,
                (None, None) => return Err(need("diam")),
            };
            let result = if mode == LandauMode::Diam {
                landau::landau_from_diameter(p, alpha, diam)?
            } else {
                landau::landau_example1(diam)?
            };
            Ok(output(Some(diam), None, None, result))
        }
        LandauMode::Length => {
            let k = match (k, map) {
                (Some(k), _) => k,
                (None, Some(f)) => quasiregularity_search(f, 1.0, &SupSearch::default())?.value,
                (None, None) => return Err(need("K")),
            };
            let l1 = match (l1, map) {
                (Some(l), _) => l,
                (None, Some(f)) => sup_length_with(f, &g.sup_length())?,
                (None, None) => return Err(need("l1")),
            };
            let result = landau::landau_from_length(p, alpha, k, l1)?;
            Ok(output(None, Some(k), Some(l1), result))
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub k: Option<f64>,
    pub l1: Option<f64>,
    pub diam: Option<f64>,
    pub alpha: Option<f64>,
    pub m_target: Option<f64>,
    pub r1: Option<f64>,
    pub m: Option<f64>,
}

/// Structured output of `verify`.
#[derive(Debug, Clone, Serialize)]
pub struct ReportDocument {
    pub tool: &'static str,
    pub version: &'static str,
    /// SHA-256 of the canonical spec of the input map: the explicit
    /// table without its label.
    pub spec_digest: String,
    pub map: MapSummary,
    pub settings: Settings,
    /// Estimated or supplied constants used by the checks.
    pub derived: BTreeMap<String, f64>,
    /// Coefficient conditions gating the checks; informational.
    pub hypotheses: Vec<CheckReport>,
    pub checks: Vec<CheckReport>,
    pub landau: BTreeMap<String, Value>,
    pub notes: Vec<String>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Serialize)]
pub struct MapSummary {
    pub label: String,
    pub p: usize,
    #[serde(rename = "J")]
    pub j_max: usize,
    pub degree: usize,
    pub notes: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Settings {
    pub tol: f64,
    pub grid: usize,
    pub seed: u64,
    pub trapezoid: TrapezoidControl,
    pub sup_length: SupLengthSearch,
    pub area_quadrature: AreaQuadrature,
    pub quasiregularity: SupSearch,
    pub diameter: DiameterSearch,
    pub pairs: PairSampler,
    pub boundary_radius: f64,
}

pub fn spec_digest(map: &PolyharmonicMap) -> String {
    let mut spec = MappingSpec::from_map(map);
    if let MappingSpec::Table(t) = &mut spec {
        t.label = None;
    }
    let canonical = spec.to_json();
    Sha256::digest(canonical.as_bytes()).iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = std::fmt::Write::write_fmt(&mut s, format_args!("{b:02x}"));
        s
    })
}

/// Runs every check that applies to `map`.
///
/// Constants not given in `overrides` are estimated: `α = λ_F(0)`,
/// `Diam F(D)` by sampling, `K` by the dilatation search, `l_F(1)` by the
/// length supremum and `M` as the coefficient sum.
pub fn verify(map: &PolyharmonicMap, g: &Globals, overrides: &Overrides) -> CliResult<ReportDocument> {
    let settings = Settings {
        tol: g.tol,
        grid: g.grid,
        seed: g.seed,
        trapezoid: g.trapezoid(),
        sup_length: g.sup_length(),
        area_quadrature: g.area_quadrature(),
        quasiregularity: SupSearch::default(),
        diameter: DiameterSearch::default(),
        pairs: g.sampler(),
        boundary_radius: certificates::BOUNDARY_RADIUS,
    };
    let mut derived = BTreeMap::new();
    let mut notes = Vec::new();
    let t = map.table();

    let lambda0 = dilatation(map, C64::new(0.0, 0.0)).lambda_small;
    derived.insert("lambda(0)".to_string(), lambda0);
    let alpha = overrides.alpha.unwrap_or(lambda0);
    derived.insert("alpha".to_string(), alpha);
    let diam = match overrides.diam {
        Some(d) => d,
        None => diameter_estimate_with(map, 1.0, &settings.diameter)?,
    };
    derived.insert("diam".to_string(), diam);
    let coef_sum = t.coefficient_sum();
    derived.insert("coefficient_sum".to_string(), coef_sum);
    derived.insert("S(1-)".to_string(), area_series(map, certificates::BOUNDARY_RADIUS));

    let hypotheses: Vec<CheckReport> = [ArgConditionKind::DiamCond, ArgConditionKind::LengthCond, ArgConditionKind::AreaCond]
        .into_iter()
        .map(|kind| arg_condition(map, kind))
        .collect();
    let length_cond = hypotheses[1].passed();

    // K and l_F(1) feed only checks gated on the length condition.
    let (k, l1) = if length_cond {
        let k = match overrides.k {
            Some(k) => Some(k),
            None => match quasiregularity_search(map, 1.0, &settings.quasiregularity) {
                Ok(s) => Some(s.value),
                Err(Error::DegenerateMap { lambda, re, im, .. }) => {
                    notes.push(format!("lambda_F = {lambda:e} at ({re}, {im}): not quasiregular"));
                    None
                }
                Err(e) => return Err(e.into()),
            },
        };
        let l1 = match overrides.l1 {
            Some(l) => l,
            None => sup_length_with(map, &settings.sup_length)?,
        };
        (k, Some(l1))
    } else {
        (overrides.k, overrides.l1)
    };
    if let Some(k) = k {
        derived.insert("K".to_string(), k);
    }
    if let Some(l1) = l1 {
        derived.insert("l1".to_string(), l1);
    }

    let mut checks = Vec::new();
    if diam > 0.0 {
        checks.push(diameter_coefficient_bounds(map, diam)?);
    } else {
        notes.push("image diameter is zero: coefficient bounds skipped".to_string());
    }
    match (k, l1) {
        (Some(k), Some(l1)) if k >= 1.0 && l1 > 0.0 => checks.push(length_coefficient_bounds(map, k, l1)?),
        (Some(_), Some(_)) => notes.push("K < 1 or l1 = 0: length bounds skipped".to_string()),
        _ if !length_cond => checks.push(
            CheckReport::hypotheses_not_met("length-coefficient-bounds", Vec::new(), TOL_REPORT)
                .with_note("hypothesis length-cond not satisfied"),
        ),
        _ => checks.push(
            CheckReport::hypotheses_not_met("length-coefficient-bounds", Vec::new(), TOL_REPORT)
                .with_note("map is not quasiregular on the disk"),
        ),
    }

    let quad = settings.area_quadrature;
    let mut cross = Vec::new();
    for r in [0.5, 0.9, 1.0] {
        let series = area_series(map, r);
        let q = area_quadrature_with(map, r, &quad)?;
        let at = Some(crate::report::Location::Radius { r });
        cross.push(Margin::le("area-routes", (series - q).abs(), AREA_CROSS_TOL * (1.0 + series.abs()), at));
    }
    checks.push(CheckReport::from_margins("area-cross-check", cross, TOL_REPORT));

    let grid = g.interior_grid();
    checks.push(area_schwarz(map, &grid)?.report);
    if let (Some(r1), Some(m)) = (overrides.r1, overrides.m) {
        checks.push(three_circles_area(map, r1, m, &uniform_grid(r1, 1.0 - 1e-3, g.grid.max(2)))?);
    }

    let sampler = settings.pairs;
    let m_target = overrides.m_target.unwrap_or(coef_sum);
    if m_target > 0.0 {
        checks.push(contraction_check(map, m_target, &sampler)?.report);
    }
    if t.p() == 1 {
        match harmonic_lipschitz_check(map, &sampler) {
            Ok(r) => checks.push(r.report),
            Err(Error::NotIntoDisk(sup)) => checks.push(
                CheckReport::hypotheses_not_met("harmonic-lipschitz", Vec::new(), TOL_REPORT)
                    .with_value("boundary_sup", sup)
                    .with_note("f(D) is not contained in D"),
            ),
            Err(e) => return Err(e.into()),
        }
    }
    let checks: Vec<CheckReport> = checks.into_iter().map(|c| c.retolerated(g.tol)).collect();

    let mut landau_out = BTreeMap::new();
    let record = |res: crate::Result<LandauResult>| match res {
        Ok(r) => serde_json::to_value(r).expect("landau results serialize"),
        Err(e) => json!({ "error": e.to_string() }),
    };
    if alpha > 0.0 && diam > 0.0 && hypotheses[0].passed() {
        landau_out.insert("diam".to_string(), record(landau::landau_from_diameter(t.p(), alpha, diam)));
    }
    if let (Some(k), Some(l1), true) = (k, l1, length_cond) {
        if alpha > 0.0 && l1 > 0.0 && k >= 1.0 {
            landau_out.insert("length".to_string(), record(landau::landau_from_length(t.p(), alpha, k, l1)));
        }
    }

    let verdict = match verdict_code(checks.iter().map(|c| c.verdict)) {
        EXIT_FAIL => Verdict::Fail,
        EXIT_HYPOTHESES => Verdict::HypothesesNotMet,
        _ => Verdict::Pass,
    };
    Ok(ReportDocument {
        tool: "polyharm",
        version: env!("CARGO_PKG_VERSION"),
        spec_digest: spec_digest(map),
        map: MapSummary {
            label: map.label().to_string(),
            p: t.p(),
            j_max: t.j_max(),
            degree: t.degree(),
            notes: map.notes().iter().cloned().collect(),
        },
        settings,
        derived,
        hypotheses,
        checks,
        landau: landau_out,
        notes,
        verdict,
    })
}
