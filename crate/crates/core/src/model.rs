//! Physical parameters of the exciton-optomechanics system.
//!
//! Everything here is in SI angular units (rad/s) unless a value has passed
//! through [`normalize`], after which every rate and frequency that enters the
//! linearized dynamics is expressed in units of the mechanical frequency.

use crate::error::{Error, Result};

/// Reduced Planck constant, J·s (CODATA 2018, exact).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant, J/K (CODATA 2018, exact).
pub const K_B: f64 = 1.380_649e-23;
/// Elementary charge, C (CODATA 2018, exact); converts eV to J.
pub const ELECTRON_VOLT: f64 = 1.602_176_634e-19;

/// Default exciton binding energy (10 meV, a GaAs quantum well).
pub const DEFAULT_BINDING_ENERGY: f64 = 10e-3 * ELECTRON_VOLT;

const TWO_PI: f64 = std::f64::consts::TAU;

/// The constants used throughout the crate, bundled for reporting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub k_b: f64,
}

pub const CODATA_2018: PhysicalConstants = PhysicalConstants { hbar: HBAR, k_b: K_B };

/// How the exciton-drive detunings are specified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DetuningSpec {
    /// Bare detunings Δₖ = ωₖ − ω₀; the deformation-potential shift is found
    /// self-consistently.
    Bare { delta_1: f64, delta_2: f64 },
    /// Effective detunings Δ̃ₖ, shift already included.
    Effective { eff_delta_1: f64, eff_delta_2: f64 },
}

impl DetuningSpec {
    fn scaled(self, s: f64) -> Self {
        match self {
            DetuningSpec::Bare { delta_1, delta_2 } => DetuningSpec::Bare {
                delta_1: delta_1 / s,
                delta_2: delta_2 / s,
            },
            DetuningSpec::Effective {
                eff_delta_1,
                eff_delta_2,
            } => DetuningSpec::Effective {
                eff_delta_1: eff_delta_1 / s,
                eff_delta_2: eff_delta_2 / s,
            },
        }
    }
}

/// How the cavity drive is specified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DriveSpec {
    /// Drive coupling Ω in rad/s.
    Coupling { omega_drive: f64 },
    /// Laser power in W; converted with the laser frequency `omega_0`.
    Power { power: f64 },
}

/// Model used for the classical phonon amplitude ⟨b⟩.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PhononMean {
    /// ⟨b⟩ ≈ −Σₖ G₀ₖ|⟨xₖ⟩|² / ω_b (real).
    #[default]
    Approximate,
    /// ⟨b⟩ = −i Σₖ G₀ₖ|⟨xₖ⟩|² / (iω_b + κ_b).
    Damped,
}

/// Raw user-facing parameters, all angular quantities in rad/s.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemParams {
    pub omega_b: f64,
    pub kappa_b: f64,
    pub kappa_c: f64,
    pub kappa_1: f64,
    pub kappa_2: f64,
    pub g_1: f64,
    pub g_2: f64,
    pub g0_1: f64,
    pub g0_2: f64,
    /// Cavity-drive detuning Δ_c = ω_c − ω₀.
    pub delta_c: f64,
    pub detuning: DetuningSpec,
    pub drive: DriveSpec,
    /// Drive laser frequency ω₀.
    pub omega_0: f64,
    /// Bath temperature in K.
    pub temperature: f64,
    /// Exciton binding energy in J.
    pub binding_energy: f64,
    pub phonon_mean: PhononMean,
}

impl SystemParams {
    /// The reference parameter set: ω_b/2π = 20 GHz, κ_b/2π = 1 MHz,
    /// κ_c/2π = 10 GHz, κ₁,₂/2π = 100 MHz, g₁,₂/2π = 1 GHz,
    /// G₀₁/2π = 10 MHz, G₀₂/2π = 20 MHz, Ω/2π = 5.5 THz, T = 1 K, at the
    /// optimal detunings Δ_c = Δ̃₂ = −Δ̃₁ = ω_b.
    pub fn baseline() -> Self {
        let omega_b = TWO_PI * 20e9;
        SystemParams {
            omega_b,
            kappa_b: TWO_PI * 1e6,
            kappa_c: TWO_PI * 10e9,
            kappa_1: TWO_PI * 100e6,
            kappa_2: TWO_PI * 100e6,
            g_1: TWO_PI * 1e9,
            g_2: TWO_PI * 1e9,
            g0_1: TWO_PI * 10e6,
            g0_2: TWO_PI * 20e6,
            delta_c: omega_b,
            detuning: DetuningSpec::Effective {
                eff_delta_1: -omega_b,
                eff_delta_2: omega_b,
            },
            drive: DriveSpec::Coupling {
                omega_drive: TWO_PI * 5.5e12,
            },
            omega_0: TWO_PI * 300e12,
            temperature: 1.0,
            binding_energy: DEFAULT_BINDING_ENERGY,
            phonon_mean: PhononMean::Approximate,
        }
    }
}

/// The rates and frequencies that enter the classical and linearized
/// dynamics, with the drive resolved to a coupling Ω.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rates {
    pub omega_b: f64,
    pub kappa_b: f64,
    pub kappa_c: f64,
    pub kappa_1: f64,
    pub kappa_2: f64,
    pub g_1: f64,
    pub g_2: f64,
    pub g0_1: f64,
    pub g0_2: f64,
    pub delta_c: f64,
    pub drive: f64,
}

impl Rates {
    fn scaled(&self, s: f64) -> Self {
        Rates {
            omega_b: self.omega_b / s,
            kappa_b: self.kappa_b / s,
            kappa_c: self.kappa_c / s,
            kappa_1: self.kappa_1 / s,
            kappa_2: self.kappa_2 / s,
            g_1: self.g_1 / s,
            g_2: self.g_2 / s,
            g0_1: self.g0_1 / s,
            g0_2: self.g0_2 / s,
            delta_c: self.delta_c / s,
            drive: self.drive / s,
        }
    }
}

/// A parameter set that passed [`validate`]. After [`normalize`] the same type
/// carries dimensionless rates and records the unit in `time_unit`.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidatedSystem {
    pub rates: Rates,
    pub detuning: DetuningSpec,
    /// Laser frequency in rad/s. Never rescaled; only used for bath
    /// occupations.
    pub omega_0: f64,
    pub temperature: f64,
    pub binding_energy: f64,
    pub phonon_mean: PhononMean,
    /// Angular frequency (rad/s) represented by one unit of `rates`.
    pub time_unit: f64,
}

/// A [`ValidatedSystem`] whose rates are measured in units of ω_b.
pub type DimensionlessSystem = ValidatedSystem;

/// Mean thermal excitation numbers of the four baths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathOccupations {
    pub n_x1: f64,
    pub n_x2: f64,
    pub n_c: f64,
    pub n_b: f64,
}

impl ValidatedSystem {
    /// Bath occupations at each mode's absolute frequency. Excitons and cavity
    /// sit at ω₀ plus their detuning; `eff_delta_*` are in the system's units.
    pub fn occupations(&self, eff_delta_1: f64, eff_delta_2: f64) -> Result<BathOccupations> {
        let u = self.time_unit;
        let t = self.temperature;
        Ok(BathOccupations {
            n_x1: thermal_occupation(self.omega_0 + eff_delta_1 * u, t)?,
            n_x2: thermal_occupation(self.omega_0 + eff_delta_2 * u, t)?,
            n_c: thermal_occupation(self.omega_0 + self.rates.delta_c * u, t)?,
            n_b: thermal_occupation(self.rates.omega_b * u, t)?,
        })
    }

    /// Temperature above which excitons ionize, k_B·T = binding energy.
    pub fn ionization_temperature(&self) -> f64 {
        self.binding_energy / K_B
    }
}

/// Non-fatal findings from [`validate`].
#[derive(Debug, Clone, PartialEq)]
pub enum Warning {
    /// k_B·T exceeds the exciton binding energy.
    Ionization { temperature: f64, threshold: f64 },
    /// κ₂ ≥ ω_b: outside the resolved-sideband regime, cooling is inefficient.
    UnresolvedSideband { kappa_2: f64, omega_b: f64 },
}

impl std::fmt::Display for Warning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Warning::Ionization {
                temperature,
                threshold,
            } => write!(
                f,
                "T = {temperature} K exceeds the exciton ionization temperature {threshold:.1} K"
            ),
            Warning::UnresolvedSideband { kappa_2, omega_b } => write!(
                f,
                "kappa_2 = {:.4e} Hz >= omega_b = {:.4e} Hz: not in the resolved-sideband limit",
                kappa_2 / TWO_PI,
                omega_b / TWO_PI
            ),
        }
    }
}

/// Bose-Einstein occupation N = 1/(exp(ħω/k_BT) − 1).
///
/// Returns exactly 0 at T = 0 and whenever the exponential overflows.
pub fn thermal_occupation(omega: f64, temperature: f64) -> Result<f64> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::Domain(format!(
            "thermal occupation needs a positive frequency, got {omega}"
        )));
    }
    if !(temperature >= 0.0) || !temperature.is_finite() {
        return Err(Error::Domain(format!(
            "temperature must be non-negative, got {temperature}"
        )));
    }
    if temperature == 0.0 {
        return Ok(0.0);
    }
    let x = HBAR * omega / (K_B * temperature);
    let denom = x.exp_m1();
    if denom.is_infinite() {
        return Ok(0.0);
    }
    Ok(1.0 / denom)
}

/// Drive coupling Ω = √(2Pκ_c/ħω₀).
pub fn drive_coupling_from_power(power: f64, kappa_c: f64, omega_0: f64) -> Result<f64> {
    if !(power >= 0.0) || !power.is_finite() {
        return Err(Error::Domain(format!("drive power must be non-negative, got {power}")));
    }
    if !(kappa_c > 0.0) || !(omega_0 > 0.0) {
        return Err(Error::Domain(format!(
            "kappa_c and omega_0 must be positive, got {kappa_c} and {omega_0}"
        )));
    }
    Ok((2.0 * power * kappa_c / (HBAR * omega_0)).sqrt())
}

fn positive(field: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            field,
            value,
            reason: "must be strictly positive",
        })
    }
}

fn non_negative(field: &'static str, value: f64) -> Result<()> {
    if value >= 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            field,
            value,
            reason: "must be non-negative",
        })
    }
}

fn finite(field: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            field,
            value,
            reason: "must be finite",
        })
    }
}

/// Checks every field and resolves the drive to a coupling Ω.
///
/// Damping rates, ω_b, ω₀ and the binding energy must be strictly positive.
/// Couplings, drive and temperature may be zero (the decoupled and undriven
/// limits are legitimate). Detunings take any finite value.
pub fn validate(params: &SystemParams) -> Result<(ValidatedSystem, Vec<Warning>)> {
    positive("omega_b", params.omega_b)?;
    positive("kappa_b", params.kappa_b)?;
    positive("kappa_c", params.kappa_c)?;
    positive("kappa_1", params.kappa_1)?;
    positive("kappa_2", params.kappa_2)?;
    positive("omega_0", params.omega_0)?;
    positive("binding_energy", params.binding_energy)?;
    non_negative("g_1", params.g_1)?;
    non_negative("g_2", params.g_2)?;
    non_negative("G0_1", params.g0_1)?;
    non_negative("G0_2", params.g0_2)?;
    non_negative("temperature", params.temperature)?;
    finite("delta_c", params.delta_c)?;
    match params.detuning {
        DetuningSpec::Bare { delta_1, delta_2 } => {
            finite("delta_1", delta_1)?;
            finite("delta_2", delta_2)?;
        }
        DetuningSpec::Effective {
            eff_delta_1,
            eff_delta_2,
        } => {
            finite("eff_delta_1", eff_delta_1)?;
            finite("eff_delta_2", eff_delta_2)?;
        }
    }
    let drive = match params.drive {
        DriveSpec::Coupling { omega_drive } => {
            non_negative("omega_drive", omega_drive)?;
            omega_drive
        }
        DriveSpec::Power { power } => {
            non_negative("power", power)?;
            drive_coupling_from_power(power, params.kappa_c, params.omega_0)?
        }
    };

    let mut warnings = Vec::new();
    if K_B * params.temperature > params.binding_energy {
        warnings.push(Warning::Ionization {
            temperature: params.temperature,
            threshold: params.binding_energy / K_B,
        });
    }
    if params.kappa_2 >= params.omega_b {
        warnings.push(Warning::UnresolvedSideband {
            kappa_2: params.kappa_2,
            omega_b: params.omega_b,
        });
    }

    let system = ValidatedSystem {
        rates: Rates {
            omega_b: params.omega_b,
            kappa_b: params.kappa_b,
            kappa_c: params.kappa_c,
            kappa_1: params.kappa_1,
            kappa_2: params.kappa_2,
            g_1: params.g_1,
            g_2: params.g_2,
            g0_1: params.g0_1,
            g0_2: params.g0_2,
            delta_c: params.delta_c,
            drive,
        },
        detuning: params.detuning,
        omega_0: params.omega_0,
        temperature: params.temperature,
        binding_energy: params.binding_energy,
        phonon_mean: params.phonon_mean,
        time_unit: 1.0,
    };
    Ok((system, warnings))
}

/// Rescales every rate and detuning by ω_b. Applying it twice is a no-op.
pub fn normalize(system: &ValidatedSystem) -> DimensionlessSystem {
    let s = system.rates.omega_b;
    ValidatedSystem {
        rates: system.rates.scaled(s),
        detuning: system.detuning.scaled(s),
        time_unit: system.time_unit * s,
        ..system.clone()
    }
}
