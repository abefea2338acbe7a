//! Grid evaluation of [`run_point`] over one or two swept parameters.
//!
//! Axis values are given in configuration units: frequencies as ν = ω/2π in
//! Hz, temperature in K, power in W. Rows are produced in row-major order
//! with the first axis outermost, independent of how many worker threads
//! evaluate them.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::json;

use crate::error::{Error, Result};
use crate::gaussian::Bipartition;
use crate::model::{DetuningSpec, DriveSpec, SystemParams};
use crate::pipeline::{run_point, steady_state_si, CouplingOverride, PointOptions};

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "EXOPTO_THREADS";

const TWO_PI: f64 = std::f64::consts::TAU;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisParam {
    EffDelta1,
    EffDelta2,
    DeltaC,
    OmegaB,
    G0_1,
    G0_2,
    PhotonCoupling1,
    PhotonCoupling2,
    Kappa1,
    Kappa2,
    /// κ₁ and κ₂ together.
    KappaExcitons,
    KappaC,
    KappaB,
    Drive,
    Power,
    Temperature,
    /// |G₁| with the phase of the reference steady state.
    CouplingMag1,
    /// |G₂| with the phase of the reference steady state.
    CouplingMag2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    Frequency,
    Temperature,
    Power,
}

impl AxisParam {
    pub const ALL: [AxisParam; 18] = [
        AxisParam::EffDelta1,
        AxisParam::EffDelta2,
        AxisParam::DeltaC,
        AxisParam::OmegaB,
        AxisParam::G0_1,
        AxisParam::G0_2,
        AxisParam::PhotonCoupling1,
        AxisParam::PhotonCoupling2,
        AxisParam::Kappa1,
        AxisParam::Kappa2,
        AxisParam::KappaExcitons,
        AxisParam::KappaC,
        AxisParam::KappaB,
        AxisParam::Drive,
        AxisParam::Power,
        AxisParam::Temperature,
        AxisParam::CouplingMag1,
        AxisParam::CouplingMag2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AxisParam::EffDelta1 => "eff_delta_1",
            AxisParam::EffDelta2 => "eff_delta_2",
            AxisParam::DeltaC => "delta_c",
            AxisParam::OmegaB => "omega_b",
            AxisParam::G0_1 => "G0_1",
            AxisParam::G0_2 => "G0_2",
            AxisParam::PhotonCoupling1 => "g_1",
            AxisParam::PhotonCoupling2 => "g_2",
            AxisParam::Kappa1 => "kappa_1",
            AxisParam::Kappa2 => "kappa_2",
            AxisParam::KappaExcitons => "kappa_12",
            AxisParam::KappaC => "kappa_c",
            AxisParam::KappaB => "kappa_b",
            AxisParam::Drive => "omega_drive",
            AxisParam::Power => "power",
            AxisParam::Temperature => "temperature",
            AxisParam::CouplingMag1 => "G_1_mag",
            AxisParam::CouplingMag2 => "G_2_mag",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        AxisParam::ALL.into_iter().find(|p| p.name() == name).ok_or_else(|| {
            let known: Vec<_> = AxisParam::ALL.iter().map(|p| p.name()).collect();
            Error::Config(format!("unknown sweep parameter `{name}` (known: {})", known.join(", ")))
        })
    }

    pub fn quantity(self) -> Quantity {
        match self {
            AxisParam::Temperature => Quantity::Temperature,
            AxisParam::Power => Quantity::Power,
            _ => Quantity::Frequency,
        }
    }

    /// Writes `value` (configuration units) into `params`. Coupling-magnitude
    /// axes act through [`CouplingOverride`] instead and leave `params` alone.
    pub fn apply(self, params: &mut SystemParams, value: f64) -> Result<()> {
        let w = TWO_PI * value;
        match self {
            AxisParam::EffDelta1 | AxisParam::EffDelta2 => match &mut params.detuning {
                DetuningSpec::Effective {
                    eff_delta_1,
                    eff_delta_2,
                } => {
                    if self == AxisParam::EffDelta1 {
                        *eff_delta_1 = w;
                    } else {
                        *eff_delta_2 = w;
                    }
                }
                DetuningSpec::Bare { .. } => {
                    return Err(Error::Config(format!(
                        "axis `{}` needs effective detunings in the base parameters",
                        self.name()
                    )))
                }
            },
            AxisParam::DeltaC => params.delta_c = w,
            AxisParam::OmegaB => params.omega_b = w,
            AxisParam::G0_1 => params.g0_1 = w,
            AxisParam::G0_2 => params.g0_2 = w,
            AxisParam::PhotonCoupling1 => params.g_1 = w,
            AxisParam::PhotonCoupling2 => params.g_2 = w,
            AxisParam::Kappa1 => params.kappa_1 = w,
            AxisParam::Kappa2 => params.kappa_2 = w,
            AxisParam::KappaExcitons => {
                params.kappa_1 = w;
                params.kappa_2 = w;
            }
            AxisParam::KappaC => params.kappa_c = w,
            AxisParam::KappaB => params.kappa_b = w,
            AxisParam::Drive => params.drive = DriveSpec::Coupling { omega_drive: w },
            AxisParam::Power => params.drive = DriveSpec::Power { power: value },
            AxisParam::Temperature => params.temperature = value,
            AxisParam::CouplingMag1 | AxisParam::CouplingMag2 => {}
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub param: AxisParam,
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl Axis {
    pub fn new(param: AxisParam, min: f64, max: f64, points: usize) -> Self {
        Axis {
            param,
            min,
            max,
            points,
        }
    }

    /// Evenly spaced values, endpoints included exactly.
    pub fn values(&self) -> Vec<f64> {
        let n = self.points;
        (0..n)
            .map(|i| {
                if i + 1 == n {
                    self.max
                } else {
                    self.min + (self.max - self.min) * i as f64 / (n - 1) as f64
                }
            })
            .collect()
    }

    fn validate(&self) -> Result<()> {
        if self.points < 2 {
            return Err(Error::Config(format!(
                "axis `{}` needs at least 2 points, got {}",
                self.param.name(),
                self.points
            )));
        }
        if !(self.min < self.max) || !self.min.is_finite() || !self.max.is_finite() {
            return Err(Error::Config(format!(
                "axis `{}` needs finite min < max, got [{}, {}]",
                self.param.name(),
                self.min,
                self.max
            )));
        }
        Ok(())
    }
}

/// Where the effective couplings G₁, G₂ come from at each grid point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CouplingMode {
    /// Recomputed from the drive at every point.
    #[default]
    Derived,
    /// Held at the values of the base parameters' steady state.
    Pinned,
}

impl CouplingMode {
    pub fn name(self) -> &'static str {
        match self {
            CouplingMode::Derived => "derived",
            CouplingMode::Pinned => "pinned",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    CsvSvg,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub name: Option<String>,
    pub base: SystemParams,
    pub axes: Vec<Axis>,
    pub bipartitions: Vec<Bipartition>,
    pub coupling_mode: CouplingMode,
    pub output: Option<std::path::PathBuf>,
    pub format: OutputFormat,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.axes.is_empty() || self.axes.len() > 2 {
            return Err(Error::Config(format!("a sweep needs 1 or 2 axes, got {}", self.axes.len())));
        }
        for axis in &self.axes {
            axis.validate()?;
            axis.param.apply(&mut self.base.clone(), axis.min)?;
        }
        if self.axes.len() == 2 && self.axes[0].param == self.axes[1].param {
            return Err(Error::Config("both axes sweep the same parameter".into()));
        }
        if self.bipartitions.is_empty() {
            return Err(Error::Config("at least one bipartition is required".into()));
        }
        Ok(())
    }

    /// Replaces the point counts, one per axis.
    pub fn with_grid(mut self, points: &[usize]) -> Result<Self> {
        if points.len() != self.axes.len() {
            return Err(Error::Config(format!(
                "grid has {} dimensions but the sweep has {} axes",
                points.len(),
                self.axes.len()
            )));
        }
        for (axis, &n) in self.axes.iter_mut().zip(points) {
            axis.points = n;
        }
        Ok(self)
    }

    pub fn total_points(&self) -> usize {
        self.axes.iter().map(|a| a.points).product()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Status {
    Ok,
    Unstable,
    Error(String),
}

impl Status {
    pub fn as_csv(&self) -> String {
        match self {
            Status::Ok => "ok".into(),
            Status::Unstable => "unstable".into(),
            Status::Error(msg) => format!("error:{}", msg.replace([',', '\n', '\r'], ";")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridRow {
    /// Axis values in configuration units.
    pub coords: Vec<f64>,
    /// E_N per requested bipartition.
    pub log_neg: Vec<f64>,
    pub nu_min: f64,
    pub n_eff: f64,
    /// 1/s.
    pub max_re: f64,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridResult {
    pub name: Option<String>,
    pub axes: Vec<Axis>,
    pub bipartitions: Vec<Bipartition>,
    pub coupling_mode: CouplingMode,
    /// Reference couplings (rad/s) used for pinning and magnitude axes.
    pub reference_couplings: (Complex64, Complex64),
    pub rows: Vec<GridRow>,
}

/// Worker count: explicit request, else [`THREADS_ENV`], else available
/// parallelism.
pub fn resolve_threads(requested: Option<usize>) -> usize {
    requested
        .or_else(|| std::env::var(THREADS_ENV).ok().and_then(|s| s.trim().parse().ok()))
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn grid_coords(axes: &[Axis]) -> Vec<Vec<f64>> {
    let values: Vec<Vec<f64>> = axes.iter().map(Axis::values).collect();
    match values.as_slice() {
        [a] => a.iter().map(|&x| vec![x]).collect(),
        [a, b] => a
            .iter()
            .flat_map(|&x| b.iter().map(move |&y| vec![x, y]))
            .collect(),
        _ => Vec::new(),
    }
}

fn evaluate(
    config: &SweepConfig,
    reference: (Complex64, Complex64),
    coords: &[f64],
) -> GridRow {
    let n_pairs = config.bipartitions.len();
    let failed = |status: Status, max_re: f64| GridRow {
        coords: coords.to_vec(),
        log_neg: vec![f64::NAN; n_pairs],
        nu_min: f64::NAN,
        n_eff: f64::NAN,
        max_re,
        status,
    };

    let mut params = config.base.clone();
    let mut couplings = match config.coupling_mode {
        CouplingMode::Derived => CouplingOverride::default(),
        CouplingMode::Pinned => CouplingOverride {
            coupling_1: Some(reference.0),
            coupling_2: Some(reference.1),
        },
    };
    for (axis, &value) in config.axes.iter().zip(coords) {
        let with_phase = |z: Complex64| Complex64::from_polar(TWO_PI * value, z.arg());
        match axis.param {
            AxisParam::CouplingMag1 => couplings.coupling_1 = Some(with_phase(reference.0)),
            AxisParam::CouplingMag2 => couplings.coupling_2 = Some(with_phase(reference.1)),
            p => {
                if let Err(e) = p.apply(&mut params, value) {
                    return failed(Status::Error(e.to_string()), f64::NAN);
                }
            }
        }
    }

    let options = PointOptions {
        bipartitions: config.bipartitions.clone(),
        couplings,
    };
    match run_point(&params, &options) {
        Ok(report) if report.stable => GridRow {
            coords: coords.to_vec(),
            log_neg: report.entanglement.iter().map(|e| e.log_neg).collect(),
            nu_min: report.nu_min(),
            n_eff: report.n_eff,
            max_re: report.max_re,
            status: Status::Ok,
        },
        Ok(report) => failed(Status::Unstable, report.max_re),
        Err(e) => failed(Status::Error(e.to_string()), f64::NAN),
    }
}

/// Evaluates every grid point on `threads` workers. Per-point failures are
/// recorded in the row status; only an invalid configuration aborts.
pub fn run_sweep(config: &SweepConfig, threads: usize) -> Result<GridResult> {
    config.validate()?;
    let reference = steady_state_si(&config.base)?;
    let reference = (reference.coupling_1, reference.coupling_2);
    let coords = grid_coords(&config.axes);

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    let rows: Vec<GridRow> = pool.install(|| {
        coords
            .par_iter()
            .map(|c| evaluate(config, reference, c))
            .collect()
    });

    Ok(GridResult {
        name: config.name.clone(),
        axes: config.axes.clone(),
        bipartitions: config.bipartitions.clone(),
        coupling_mode: config.coupling_mode,
        reference_couplings: reference,
        rows,
    })
}

/// Nine significant digits, `nan` for missing values.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else {
        format!("{x:.8e}")
    }
}

impl GridResult {
    pub fn is_2d(&self) -> bool {
        self.axes.len() == 2
    }

    pub fn header(&self) -> Vec<String> {
        let mut h: Vec<String> = self.axes.iter().map(|a| a.param.name().to_string()).collect();
        h.extend(self.bipartitions.iter().map(|p| format!("E_N_{}", p.label())));
        h.extend(["nu_min", "n_eff", "max_re", "status"].map(String::from));
        h
    }

    /// Values of a numeric column by header name.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        if let Some(i) = self.axes.iter().position(|a| a.param.name() == name) {
            return Some(self.rows.iter().map(|r| r.coords[i]).collect());
        }
        if let Some(i) = self
            .bipartitions
            .iter()
            .position(|p| format!("E_N_{}", p.label()) == name)
        {
            return Some(self.rows.iter().map(|r| r.log_neg[i]).collect());
        }
        let pick: fn(&GridRow) -> f64 = match name {
            "nu_min" => |r| r.nu_min,
            "n_eff" => |r| r.n_eff,
            "max_re" => |r| r.max_re,
            _ => return None,
        };
        Some(self.rows.iter().map(pick).collect())
    }

    /// CSV text: header row, LF line endings, 9 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = self.header().join(",");
        out.push('\n');
        for row in &self.rows {
            let fields = row
                .coords
                .iter()
                .chain(&row.log_neg)
                .chain([&row.nu_min, &row.n_eff, &row.max_re])
                .map(|&x| format_number(x));
            let mut line = fields.collect::<Vec<_>>().join(",");
            let _ = write!(line, ",{}", row.status.as_csv());
            out.push_str(&line);
            out.push('\n');
        }
        out
    }

    /// Sweep description written next to the CSV.
    pub fn metadata(&self) -> serde_json::Value {
        let coupling = |z: Complex64| {
            json!({ "magnitude_hz": z.norm() / TWO_PI, "phase_rad": z.arg() })
        };
        json!({
            "scenario": self.name,
            "axes": self.axes.iter().map(|a| json!({
                "param": a.param.name(),
                "min": a.min,
                "max": a.max,
                "points": a.points,
            })).collect::<Vec<_>>(),
            "bipartitions": self.bipartitions.iter().map(|p| p.label()).collect::<Vec<_>>(),
            "coupling_mode": self.coupling_mode.name(),
            "reference_couplings": {
                "G_1": coupling(self.reference_couplings.0),
                "G_2": coupling(self.reference_couplings.1),
            },
            "note": "G_1_mag/G_2_mag axes and pinned mode keep the phases of the reference steady state",
            "rows": self.rows.len(),
        })
    }

    /// Writes `<path>` (CSV), `<path>.meta.json` and, if asked, an SVG heatmap
    /// of the first entanglement column next to it.
    pub fn write(&self, path: &Path, svg: bool) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        let meta = serde_json::to_string_pretty(&self.metadata()).expect("metadata serializes");
        std::fs::write(meta_path(path), meta + "\n")?;
        if svg {
            let column = format!("E_N_{}", self.bipartitions[0].label());
            let doc = crate::heatmap::render_heatmap(self, &column)?;
            std::fs::write(path.with_extension("svg"), doc)?;
        }
        Ok(())
    }
}

fn meta_path(path: &Path) -> std::path::PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".meta.json");
    s.into()
}
