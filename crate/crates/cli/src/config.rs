//! Experiment configuration: one JSON document per run.
//!
//! ```json
//! {
//!   "name": "annulus",
//!   "domain": { "preset": "quarter_annulus", "r0": 1.0, "r1": 2.0 },
//!   "grid": { "ni": 21, "nj": 21 },
//!   "method": "pinn+hardbc",
//!   "train": { "epochs": 500 },
//!   "output_dir": "out"
//! }
//! ```
//!
//! `train` holds overrides on top of the selected profile. Relative paths
//! (point files, `output_dir`) resolve against the config file's directory.

use std::path::{Path, PathBuf};

use elastimesh::geometry::{fit_boundary_curve, read_points_csv, FitParams};
use elastimesh::training::TrainConfig;
use elastimesh::{presets, BoundaryCurve, DomainSpec, Point};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "tfi")]
    Tfi,
    #[serde(rename = "pinn")]
    Pinn,
    #[serde(rename = "pinn+hardbc")]
    PinnHardBc,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Tfi => "tfi",
            Method::Pinn => "pinn",
            Method::PinnHardBc => "pinn+hardbc",
        }
    }

    pub fn trains(self) -> bool {
        self != Method::Tfi
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Profile {
    #[default]
    Desk,
    Paper,
}

impl Profile {
    pub fn base(self) -> TrainConfig {
        match self {
            Profile::Desk => TrainConfig::desk(),
            Profile::Paper => TrainConfig::paper(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub ni: usize,
    pub nj: usize,
}

fn default_r0() -> f64 {
    1.0
}
fn default_r1() -> f64 {
    2.0
}
fn default_amplitude() -> f64 {
    0.1
}
fn default_waves() -> f64 {
    2.0
}
fn default_offset() -> f64 {
    0.5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
/// Written with its name under a `preset` key.
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Preset {
    UnitSquare {},
    QuarterAnnulus {
        #[serde(default = "default_r0")]
        r0: f64,
        #[serde(default = "default_r1")]
        r1: f64,
    },
    WavyChannel {
        #[serde(default = "default_amplitude")]
        amplitude: f64,
        #[serde(default = "default_waves")]
        waves: f64,
    },
    SDuct {
        #[serde(default = "default_offset")]
        offset: f64,
    },
    #[serde(rename = "polyline_L")]
    PolylineL {},
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitSettings {
    #[serde(default = "FitSettings::default_width")]
    pub kernel_width: f64,
    #[serde(default = "FitSettings::default_reg")]
    pub regularization: f64,
    #[serde(default)]
    pub epsilon: f64,
}

impl FitSettings {
    fn default_width() -> f64 {
        FitParams::default().kernel_width
    }
    fn default_reg() -> f64 {
        FitParams::default().regularization
    }
}

impl Default for FitSettings {
    fn default() -> Self {
        FitSettings {
            kernel_width: Self::default_width(),
            regularization: Self::default_reg(),
            epsilon: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
/// Written with its name under a `type` key.
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum CurveSpec {
    Segment {
        from: [f64; 2],
        to: [f64; 2],
    },
    /// Angles in radians.
    Arc {
        center: [f64; 2],
        radius: f64,
        start: f64,
        end: f64,
    },
    Polyline {
        points: Vec<[f64; 2]>,
    },
    /// Ordered `x,y` point file, regressed into a smooth curve.
    Csv {
        path: PathBuf,
        #[serde(default)]
        fit: FitSettings,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveSet {
    pub south: CurveSpec,
    pub east: CurveSpec,
    pub north: CurveSpec,
    pub west: CurveSpec,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DomainConfig {
    Preset(Preset),
    Curves { curves: CurveSet },
}

/// Config as written in the file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default = "default_name")]
    name: String,
    domain: Value,
    grid: Option<GridSpec>,
    #[serde(default = "default_method")]
    method: Method,
    #[serde(default)]
    train: serde_json::Map<String, Value>,
    #[serde(default = "default_output")]
    output_dir: PathBuf,
}

fn default_name() -> String {
    "model".into()
}
fn default_method() -> Method {
    Method::PinnHardBc
}
fn default_output() -> PathBuf {
    PathBuf::from("out")
}

/// Fully resolved experiment.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub name: String,
    pub domain: DomainSpec,
    pub method: Method,
    /// Training settings; `ni`/`nj` are the mesh resolution for every
    /// method.
    pub train: TrainConfig,
    pub output_dir: PathBuf,
}

/// Command-line overrides applied on top of the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub profile: Profile,
    pub seed: Option<u64>,
    pub output_dir: Option<PathBuf>,
}

fn parse_at<T: serde::de::DeserializeOwned>(value: Value, prefix: &str) -> Result<T, CliError> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        let path = match (prefix.is_empty(), path.as_str()) {
            (true, _) => path,
            (false, ".") => prefix.to_string(),
            (false, p) => format!("{prefix}.{p}"),
        };
        CliError::Config {
            path,
            detail: e.into_inner().to_string(),
        }
    })
}

pub fn load(path: &Path, ov: &Overrides) -> Result<Experiment, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input {
        detail: format!("cannot read config {}: {e}", path.display()),
    })?;
    let value: Value = serde_json::from_str(&text).map_err(|e| CliError::Config {
        path: ".".into(),
        detail: e.to_string(),
    })?;
    let base_dir = path.parent().unwrap_or(Path::new("."));
    resolve(value, base_dir, ov)
}

/// Resolves a parsed config document. Relative paths are taken against
/// `base_dir`.
pub fn resolve(value: Value, base_dir: &Path, ov: &Overrides) -> Result<Experiment, CliError> {
    let raw: RawConfig = parse_at(value, "")?;
    let domain_cfg: DomainConfig = parse_domain(raw.domain)?;
    let domain = build_domain(&domain_cfg, base_dir)?;

    let mut merged = serde_json::to_value(ov.profile.base()).expect("config serializes");
    let obj = merged.as_object_mut().expect("object");
    for (k, v) in raw.train {
        obj.insert(k, v);
    }
    if let Some(g) = raw.grid {
        obj.insert("ni".into(), g.ni.into());
        obj.insert("nj".into(), g.nj.into());
    }
    if let Some(seed) = ov.seed {
        obj.insert("seed".into(), seed.into());
    }
    let train: TrainConfig = parse_at(merged, "train")?;
    train.validate().map_err(|e| CliError::Config {
        path: "train".into(),
        detail: e.to_string(),
    })?;

    let output_dir = ov.output_dir.clone().unwrap_or(raw.output_dir);
    let output_dir = if output_dir.is_absolute() || ov.output_dir.is_some() {
        output_dir
    } else {
        base_dir.join(output_dir)
    };
    Ok(Experiment {
        name: raw.name,
        domain,
        method: raw.method,
        train,
        output_dir,
    })
}

fn config_err(path: impl Into<String>, detail: impl Into<String>) -> CliError {
    CliError::Config {
        path: path.into(),
        detail: detail.into(),
    }
}

/// Reads an enum written as `{tag: variant, ..fields}`. Serde's internally
/// tagged enums buffer their content and lose the field path of errors, so
/// the object is rewritten to the external form `{variant: {..fields}}`.
fn parse_tagged<T: serde::de::DeserializeOwned>(
    value: Value,
    tag: &str,
    prefix: &str,
) -> Result<T, CliError> {
    let Value::Object(mut obj) = value else {
        return Err(config_err(prefix, "expected an object"));
    };
    let Some(Value::String(variant)) = obj.remove(tag) else {
        return Err(config_err(format!("{prefix}.{tag}"), "missing or not a string"));
    };
    let wrapped = Value::Object([(variant, Value::Object(obj))].into_iter().collect());
    serde_path_to_error::deserialize(wrapped).map_err(|e| {
        // drop the variant segment the rewrite introduced
        let inner: Vec<String> = e.path().iter().skip(1).map(|s| s.to_string()).collect();
        let path = match inner.is_empty() {
            true if e.path().iter().next().is_none() => format!("{prefix}.{tag}"),
            true => prefix.to_string(),
            false => format!("{prefix}.{}", inner.join(".")),
        };
        config_err(path, e.into_inner().to_string())
    })
}

fn parse_domain(value: Value) -> Result<DomainConfig, CliError> {
    let Value::Object(mut obj) = value else {
        return Err(config_err("domain", "expected an object"));
    };
    let Some(curves) = obj.remove("curves") else {
        return Ok(DomainConfig::Preset(parse_tagged(Value::Object(obj), "preset", "domain")?));
    };
    if let Some(k) = obj.keys().next() {
        return Err(config_err(format!("domain.{k}"), "unknown field next to `curves`"));
    }
    let Value::Object(mut sides) = curves else {
        return Err(config_err("domain.curves", "expected an object"));
    };
    let mut side = |name: &str| match sides.remove(name) {
        Some(v) => parse_tagged::<CurveSpec>(v, "type", &format!("domain.curves.{name}")),
        None => Err(config_err("domain.curves", format!("missing field `{name}`"))),
    };
    let curves = CurveSet {
        south: side("south")?,
        east: side("east")?,
        north: side("north")?,
        west: side("west")?,
    };
    if let Some(k) = sides.keys().next() {
        return Err(config_err(format!("domain.curves.{k}"), "unknown curve side"));
    }
    Ok(DomainConfig::Curves { curves })
}

fn point(p: [f64; 2]) -> Point {
    Point::new(p[0], p[1])
}

pub fn build_domain(cfg: &DomainConfig, base_dir: &Path) -> Result<DomainSpec, CliError> {
    let domain = match cfg {
        DomainConfig::Preset(p) => match *p {
            Preset::UnitSquare {} => presets::unit_square(),
            Preset::QuarterAnnulus { r0, r1 } => {
                if !(r0 > 0.0 && r1 > r0) {
                    return Err(CliError::Config {
                        path: "domain".into(),
                        detail: format!("need 0 < r0 < r1, got r0={r0}, r1={r1}"),
                    });
                }
                presets::quarter_annulus(r0, r1)
            }
            Preset::WavyChannel { amplitude, waves } => presets::wavy_channel(amplitude, waves),
            Preset::SDuct { offset } => presets::s_duct(offset),
            Preset::PolylineL {} => presets::polyline_l(),
        },
        DomainConfig::Curves { curves } => {
            let side = |name: &str, c: &CurveSpec| {
                build_curve(c, base_dir).map_err(|e| match e {
                    CliError::Config { path, detail } => CliError::Config {
                        path: format!("domain.curves.{name}{path}"),
                        detail,
                    },
                    other => other,
                })
            };
            DomainSpec::new(
                side("south", &curves.south)?,
                side("east", &curves.east)?,
                side("north", &curves.north)?,
                side("west", &curves.west)?,
            )
        }
    };
    Ok(domain)
}

fn build_curve(c: &CurveSpec, base_dir: &Path) -> Result<BoundaryCurve, CliError> {
    let bad = |detail: String| CliError::Config {
        path: String::new(),
        detail,
    };
    match c {
        CurveSpec::Segment { from, to } => Ok(BoundaryCurve::segment(point(*from), point(*to))),
        CurveSpec::Arc {
            center,
            radius,
            start,
            end,
        } => {
            if !(*radius > 0.0) {
                return Err(bad(format!("arc radius must be positive, got {radius}")));
            }
            Ok(BoundaryCurve::arc(point(*center), *radius, *start, *end))
        }
        CurveSpec::Polyline { points } => {
            BoundaryCurve::polyline(points.iter().copied().map(point).collect())
                .map_err(|e| bad(e.to_string()))
        }
        CurveSpec::Csv { path, fit } => {
            let full = if path.is_absolute() {
                path.clone()
            } else {
                base_dir.join(path)
            };
            let pts = read_points_csv(&full).map_err(|e| CliError::Input {
                detail: format!("{}: {e}", full.display()),
            })?;
            let params = FitParams {
                kernel_width: fit.kernel_width,
                regularization: fit.regularization,
                epsilon: fit.epsilon,
                ..FitParams::default()
            };
            let curve = fit_boundary_curve(&pts, &params).map_err(|e| CliError::Input {
                detail: format!("{}: {e}", full.display()),
            })?;
            Ok(BoundaryCurve::Fitted(curve))
        }
    }
}
