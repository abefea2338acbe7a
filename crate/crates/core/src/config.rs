//! JSON configuration files.
//!
//! Frequencies and rates are written as ν = ω/2π in Hz, power in W,
//! temperature in K and the binding energy in J. See `docs/config.md` for
//! the full schema.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::{Bipartition, Mode};
use crate::model::{DetuningSpec, DriveSpec, PhononMean, SystemParams, DEFAULT_BINDING_ENERGY};
use crate::sweep::{Axis, AxisParam, CouplingMode, OutputFormat, SweepConfig};

const TWO_PI: f64 = std::f64::consts::TAU;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum DetuningConfig {
    Bare { delta_1: f64, delta_2: f64 },
    Effective { eff_delta_1: f64, eff_delta_2: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DriveConfig {
    OmegaDrive(f64),
    Power(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhononMeanConfig {
    #[default]
    Approximate,
    Damped,
}

/// [`SystemParams`] as written in a file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsConfig {
    pub omega_b: f64,
    pub kappa_b: f64,
    pub kappa_c: f64,
    pub kappa_1: f64,
    pub kappa_2: f64,
    pub g_1: f64,
    pub g_2: f64,
    #[serde(rename = "G0_1")]
    pub g0_1: f64,
    #[serde(rename = "G0_2")]
    pub g0_2: f64,
    pub delta_c: f64,
    pub detuning: DetuningConfig,
    pub drive: DriveConfig,
    pub omega_0: f64,
    pub temperature: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub binding_energy: Option<f64>,
    #[serde(default)]
    pub phonon_mean: PhononMeanConfig,
}

impl From<&ParamsConfig> for SystemParams {
    fn from(c: &ParamsConfig) -> Self {
        let w = |nu: f64| TWO_PI * nu;
        SystemParams {
            omega_b: w(c.omega_b),
            kappa_b: w(c.kappa_b),
            kappa_c: w(c.kappa_c),
            kappa_1: w(c.kappa_1),
            kappa_2: w(c.kappa_2),
            g_1: w(c.g_1),
            g_2: w(c.g_2),
            g0_1: w(c.g0_1),
            g0_2: w(c.g0_2),
            delta_c: w(c.delta_c),
            detuning: match c.detuning {
                DetuningConfig::Bare { delta_1, delta_2 } => DetuningSpec::Bare {
                    delta_1: w(delta_1),
                    delta_2: w(delta_2),
                },
                DetuningConfig::Effective {
                    eff_delta_1,
                    eff_delta_2,
                } => DetuningSpec::Effective {
                    eff_delta_1: w(eff_delta_1),
                    eff_delta_2: w(eff_delta_2),
                },
            },
            drive: match c.drive {
                DriveConfig::OmegaDrive(nu) => DriveSpec::Coupling { omega_drive: w(nu) },
                DriveConfig::Power(p) => DriveSpec::Power { power: p },
            },
            omega_0: w(c.omega_0),
            temperature: c.temperature,
            binding_energy: c.binding_energy.unwrap_or(DEFAULT_BINDING_ENERGY),
            phonon_mean: match c.phonon_mean {
                PhononMeanConfig::Approximate => PhononMean::Approximate,
                PhononMeanConfig::Damped => PhononMean::Damped,
            },
        }
    }
}

impl From<&SystemParams> for ParamsConfig {
    fn from(p: &SystemParams) -> Self {
        let nu = |w: f64| w / TWO_PI;
        ParamsConfig {
            omega_b: nu(p.omega_b),
            kappa_b: nu(p.kappa_b),
            kappa_c: nu(p.kappa_c),
            kappa_1: nu(p.kappa_1),
            kappa_2: nu(p.kappa_2),
            g_1: nu(p.g_1),
            g_2: nu(p.g_2),
            g0_1: nu(p.g0_1),
            g0_2: nu(p.g0_2),
            delta_c: nu(p.delta_c),
            detuning: match p.detuning {
                DetuningSpec::Bare { delta_1, delta_2 } => DetuningConfig::Bare {
                    delta_1: nu(delta_1),
                    delta_2: nu(delta_2),
                },
                DetuningSpec::Effective {
                    eff_delta_1,
                    eff_delta_2,
                } => DetuningConfig::Effective {
                    eff_delta_1: nu(eff_delta_1),
                    eff_delta_2: nu(eff_delta_2),
                },
            },
            drive: match p.drive {
                DriveSpec::Coupling { omega_drive } => DriveConfig::OmegaDrive(nu(omega_drive)),
                DriveSpec::Power { power } => DriveConfig::Power(power),
            },
            omega_0: nu(p.omega_0),
            temperature: p.temperature,
            binding_energy: Some(p.binding_energy),
            phonon_mean: match p.phonon_mean {
                PhononMean::Approximate => PhononMeanConfig::Approximate,
                PhononMean::Damped => PhononMeanConfig::Damped,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisConfig {
    pub param: String,
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum FormatConfig {
    #[default]
    #[serde(rename = "csv")]
    Csv,
    #[serde(rename = "csv+svg")]
    CsvSvg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CouplingModeConfig {
    #[default]
    Derived,
    Pinned,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub base: ParamsConfig,
    pub axes: Vec<AxisConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bipartitions: Option<Vec<[String; 2]>>,
    #[serde(default)]
    pub coupling_mode: CouplingModeConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub format: FormatConfig,
}

impl SweepFile {
    pub fn into_config(self) -> Result<SweepConfig> {
        let axes = self
            .axes
            .iter()
            .map(|a| Ok(Axis::new(AxisParam::from_name(&a.param)?, a.min, a.max, a.points)))
            .collect::<Result<Vec<_>>>()?;
        let bipartitions = match self.bipartitions {
            None => vec![Bipartition::EXCITONS],
            Some(pairs) => pairs
                .iter()
                .map(|[a, b]| Bipartition::new(a.parse::<Mode>()?, b.parse::<Mode>()?))
                .collect::<Result<Vec<_>>>()
                .map_err(|e| Error::Config(format!("bipartitions: {e}")))?,
        };
        let config = SweepConfig {
            name: self.name,
            base: SystemParams::from(&self.base),
            axes,
            bipartitions,
            coupling_mode: match self.coupling_mode {
                CouplingModeConfig::Derived => CouplingMode::Derived,
                CouplingModeConfig::Pinned => CouplingMode::Pinned,
            },
            output: self.output,
            format: match self.format {
                FormatConfig::Csv => OutputFormat::Csv,
                FormatConfig::CsvSvg => OutputFormat::CsvSvg,
            },
        };
        config.validate()?;
        Ok(config)
    }
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T> {
    // serde_json reports "... at line L column C"
    serde_json::from_str(text).map_err(|e| Error::Config(format!("{what}: {e}")))
}

pub fn parse_params(text: &str) -> Result<SystemParams> {
    let c: ParamsConfig = parse(text, "parameter file")?;
    Ok(SystemParams::from(&c))
}

pub fn parse_sweep(text: &str) -> Result<SweepConfig> {
    parse::<SweepFile>(text, "sweep file")?.into_config()
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))
}

pub fn load_params(path: &Path) -> Result<SystemParams> {
    parse_params(&read(path)?)
}

pub fn load_sweep(path: &Path) -> Result<SweepConfig> {
    parse_sweep(&read(path)?)
}

/// The reference parameters as a pretty-printed config file.
pub fn baseline_json() -> String {
    serde_json::to_string_pretty(&ParamsConfig::from(&SystemParams::baseline())).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASELINE: &str = r#"{
        "omega_b": 20e9, "kappa_b": 1e6, "kappa_c": 10e9,
        "kappa_1": 100e6, "kappa_2": 100e6, "g_1": 1e9, "g_2": 1e9,
        "G0_1": 10e6, "G0_2": 20e6, "delta_c": 20e9,
        "detuning": { "effective": { "eff_delta_1": -20e9, "eff_delta_2": 20e9 } },
        "drive": { "omega_drive": 5.5e12 },
        "omega_0": 300e12, "temperature": 1.0
    }"#;

    #[test]
    fn baseline_file_matches_preset() {
        let p = parse_params(BASELINE).unwrap();
        let b = SystemParams::baseline();
        assert!((p.omega_b / b.omega_b - 1.0).abs() < 1e-15);
        assert!((p.g0_2 / b.g0_2 - 1.0).abs() < 1e-15);
        assert_eq!(p.detuning, b.detuning);
        assert_eq!(p.binding_energy, DEFAULT_BINDING_ENERGY);
    }

    #[test]
    fn round_trips_through_json() {
        let p = parse_params(&baseline_json()).unwrap();
        let b = SystemParams::baseline();
        assert!((p.kappa_b - b.kappa_b).abs() < 1e-6);
        assert_eq!(p.temperature, b.temperature);
    }

    #[test]
    fn unknown_field_is_named_with_position() {
        let bad = BASELINE.replace("\"kappa_b\"", "\"kapa_b\"");
        let err = parse_params(&bad).unwrap_err().to_string();
        assert!(err.contains("kapa_b") && err.contains("line"), "{err}");
    }

    #[test]
    fn power_drive_is_accepted() {
        let text = BASELINE.replace(r#"{ "omega_drive": 5.5e12 }"#, r#"{ "power": 1.89e-3 }"#);
        let p = parse_params(&text).unwrap();
        assert_eq!(p.drive, DriveSpec::Power { power: 1.89e-3 });
    }

    #[test]
    fn sweep_file() {
        let text = format!(
            r#"{{ "base": {BASELINE},
                 "axes": [{{ "param": "G0_2", "min": 0, "max": 4e7, "points": 5 }}],
                 "bipartitions": [["x1", "x2"], ["x1", "b"]],
                 "format": "csv+svg" }}"#
        );
        let c = parse_sweep(&text).unwrap();
        assert_eq!(c.axes[0].param, AxisParam::G0_2);
        assert_eq!(c.bipartitions[1], Bipartition(Mode::X1, Mode::Phonon));
        assert_eq!(c.format, OutputFormat::CsvSvg);
        assert_eq!(c.coupling_mode, CouplingMode::Derived);

        let bad = text.replace("\"points\": 5", "\"points\": 1");
        assert!(parse_sweep(&bad).unwrap_err().to_string().contains("at least 2 points"));
        let bad = text.replace("[\"x1\", \"b\"]", "[\"x1\", \"x1\"]");
        assert!(parse_sweep(&bad).is_err());
    }
}
