//! Classical mean amplitudes around which the dynamics is linearized.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{DetuningSpec, PhononMean, Rates, ValidatedSystem};

pub const MAX_ITERATIONS: usize = 1000;
pub const RELATIVE_TOLERANCE: f64 = 1e-12;

/// First moments of the four modes and the derived linearization data.
///
/// Units follow the system the state was computed from (rad/s or ω_b units);
/// amplitudes are dimensionless either way.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyState {
    pub avg_c: Complex64,
    pub avg_x1: Complex64,
    pub avg_x2: Complex64,
    pub avg_b: Complex64,
    pub eff_delta_1: f64,
    pub eff_delta_2: f64,
    /// Effective exciton-phonon coupling G₁ = iG₀₁⟨x₁⟩.
    pub coupling_1: Complex64,
    /// Effective exciton-phonon coupling G₂ = iG₀₂⟨x₂⟩.
    pub coupling_2: Complex64,
}

impl SteadyState {
    /// Replaces the effective couplings, e.g. to pin them while other
    /// parameters vary.
    pub fn with_couplings(mut self, coupling_1: Complex64, coupling_2: Complex64) -> Self {
        self.coupling_1 = coupling_1;
        self.coupling_2 = coupling_2;
        self
    }
}

fn phonon_mean(rates: &Rates, model: PhononMean, x1: Complex64, x2: Complex64) -> Complex64 {
    let pressure = rates.g0_1 * x1.norm_sqr() + rates.g0_2 * x2.norm_sqr();
    match model {
        PhononMean::Approximate => Complex64::new(-pressure / rates.omega_b, 0.0),
        PhononMean::Damped => {
            -Complex64::i() * pressure / Complex64::new(rates.kappa_b, rates.omega_b)
        }
    }
}

/// Mean amplitudes at given effective detunings. No iteration: Δ̃ₖ already
/// include the deformation-potential shift.
pub fn solve_effective(system: &ValidatedSystem, eff_delta_1: f64, eff_delta_2: f64) -> SteadyState {
    let r = &system.rates;
    let l1 = Complex64::new(r.kappa_1, eff_delta_1);
    let l2 = Complex64::new(r.kappa_2, eff_delta_2);
    let lc = Complex64::new(r.kappa_c, r.delta_c);
    let denom = r.g_1 * r.g_1 * l2 + r.g_2 * r.g_2 * l1 + lc * l1 * l2;
    let avg_c = r.drive * l1 * l2 / denom;
    let minus_i = -Complex64::i();
    let avg_x1 = minus_i * r.g_1 * avg_c / l1;
    let avg_x2 = minus_i * r.g_2 * avg_c / l2;
    let avg_b = phonon_mean(r, system.phonon_mean, avg_x1, avg_x2);
    let mut state = SteadyState {
        avg_c,
        avg_x1,
        avg_x2,
        avg_b,
        eff_delta_1,
        eff_delta_2,
        coupling_1: Complex64::new(0.0, 0.0),
        coupling_2: Complex64::new(0.0, 0.0),
    };
    let (c1, c2) = effective_couplings(&state, r);
    state.coupling_1 = c1;
    state.coupling_2 = c2;
    state
}

/// Fixed-point iteration on ⟨b⟩ for bare detunings Δ₁, Δ₂.
pub fn solve_self_consistent(system: &ValidatedSystem, delta_1: f64, delta_2: f64) -> Result<SteadyState> {
    let r = &system.rates;
    let mut b = 0.0;
    let mut state = solve_effective(system, delta_1, delta_2);
    for _ in 0..MAX_ITERATIONS {
        state = solve_effective(system, delta_1 + 2.0 * r.g0_1 * b, delta_2 + 2.0 * r.g0_2 * b);
        let next = state.avg_b.re;
        let change = (next - b).abs();
        b = next;
        if change <= RELATIVE_TOLERANCE * next.abs() {
            return Ok(state);
        }
    }
    Err(Error::NoConvergence {
        iterations: MAX_ITERATIONS,
        last: Box::new(state),
    })
}

/// Steady state for whichever detuning convention the system carries.
pub fn solve(system: &ValidatedSystem) -> Result<SteadyState> {
    match system.detuning {
        DetuningSpec::Effective {
            eff_delta_1,
            eff_delta_2,
        } => Ok(solve_effective(system, eff_delta_1, eff_delta_2)),
        DetuningSpec::Bare { delta_1, delta_2 } => solve_self_consistent(system, delta_1, delta_2),
    }
}

/// Gₖ = iG₀ₖ⟨xₖ⟩.
pub fn effective_couplings(state: &SteadyState, rates: &Rates) -> (Complex64, Complex64) {
    let i = Complex64::i();
    (i * rates.g0_1 * state.avg_x1, i * rates.g0_2 * state.avg_x2)
}
