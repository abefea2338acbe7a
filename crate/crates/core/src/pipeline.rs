//! One full evaluation: parameters in, entanglement report out.

use num_complex::Complex64;

use crate::dynamics::{build_diffusion, build_drift, is_stable, solve_lyapunov, CovarianceMatrix};
use crate::error::Result;
use crate::gaussian::{effective_phonon_number, negativity, reduce, Bipartition};
use crate::model::{normalize, validate, SystemParams, Warning};
use crate::steady_state::{self, SteadyState};

/// Effective couplings (rad/s) imposed instead of the ones implied by the
/// drive. `None` keeps the derived value.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CouplingOverride {
    pub coupling_1: Option<Complex64>,
    pub coupling_2: Option<Complex64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointOptions {
    pub bipartitions: Vec<Bipartition>,
    pub couplings: CouplingOverride,
}

impl Default for PointOptions {
    fn default() -> Self {
        PointOptions {
            bipartitions: vec![Bipartition::EXCITONS],
            couplings: CouplingOverride::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairEntanglement {
    pub pair: Bipartition,
    /// NaN when the point is unstable.
    pub log_neg: f64,
    pub nu_min: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntanglementReport {
    pub stable: bool,
    /// Largest real part of the drift eigenvalues, 1/s.
    pub max_re: f64,
    pub entanglement: Vec<PairEntanglement>,
    /// NaN when the point is unstable.
    pub n_eff: f64,
    /// Steady state in SI units (rad/s for detunings and couplings).
    pub steady_state: SteadyState,
    /// Covariance matrix, absent when the point is unstable.
    pub covariance: Option<CovarianceMatrix>,
    pub warnings: Vec<Warning>,
}

impl EntanglementReport {
    pub fn log_neg(&self, pair: Bipartition) -> Option<f64> {
        self.entanglement.iter().find(|e| e.pair == pair).map(|e| e.log_neg)
    }

    /// ν̃₋ of the first requested bipartition.
    pub fn nu_min(&self) -> f64 {
        self.entanglement.first().map_or(f64::NAN, |e| e.nu_min)
    }
}

fn to_si(state: &SteadyState, unit: f64) -> SteadyState {
    SteadyState {
        eff_delta_1: state.eff_delta_1 * unit,
        eff_delta_2: state.eff_delta_2 * unit,
        coupling_1: state.coupling_1 * unit,
        coupling_2: state.coupling_2 * unit,
        ..*state
    }
}

/// Steady state of `params` in SI units, without the dynamics.
pub fn steady_state_si(params: &SystemParams) -> Result<SteadyState> {
    let (system, _) = validate(params)?;
    let system = normalize(&system);
    Ok(to_si(&steady_state::solve(&system)?, system.time_unit))
}

/// validate → normalize → steady state → drift/diffusion → stability →
/// Lyapunov → Gaussian measures.
pub fn run_point(params: &SystemParams, options: &PointOptions) -> Result<EntanglementReport> {
    let (system, warnings) = validate(params)?;
    let system = normalize(&system);
    let unit = system.time_unit;

    let mut state = steady_state::solve(&system)?;
    if let Some(c) = options.couplings.coupling_1 {
        state.coupling_1 = c / unit;
    }
    if let Some(c) = options.couplings.coupling_2 {
        state.coupling_2 = c / unit;
    }

    let drift = build_drift(&state, &system.rates);
    let occupations = system.occupations(state.eff_delta_1, state.eff_delta_2)?;
    let diffusion = build_diffusion(&system.rates, &occupations);
    let stability = is_stable(&drift)?;

    let mut report = EntanglementReport {
        stable: stability.stable,
        max_re: stability.max_re * unit,
        entanglement: Vec::with_capacity(options.bipartitions.len()),
        n_eff: f64::NAN,
        steady_state: to_si(&state, unit),
        covariance: None,
        warnings,
    };
    if !stability.stable {
        report.entanglement = options
            .bipartitions
            .iter()
            .map(|&pair| PairEntanglement {
                pair,
                log_neg: f64::NAN,
                nu_min: f64::NAN,
            })
            .collect();
        return Ok(report);
    }

    let cm = solve_lyapunov(&drift, &diffusion)?;
    for &pair in &options.bipartitions {
        let n = negativity(&reduce(&cm, pair.0, pair.1)?)?;
        report.entanglement.push(PairEntanglement {
            pair,
            log_neg: n.log_neg,
            nu_min: n.nu_min,
        });
    }
    report.n_eff = effective_phonon_number(&cm);
    report.covariance = Some(cm);
    Ok(report)
}
