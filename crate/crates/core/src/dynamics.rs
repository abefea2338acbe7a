//! Linearized quadrature dynamics: drift and diffusion matrices, stability,
//! and the steady-state covariance matrix from the Lyapunov equation
//! A𝒱 + 𝒱Aᵀ = −D.
//!
//! Quadrature order throughout is (X_{x1}, Y_{x1}, X_{x2}, Y_{x2}, X_c, Y_c,
//! X_b, Y_b) with δX = (δj + δj†)/√2, so the vacuum has variance 1/2.

use nalgebra::{DMatrix, DVector, SMatrix};

use crate::error::{Error, Result};
use crate::model::{BathOccupations, Rates};
use crate::steady_state::SteadyState;

pub type Mat8 = SMatrix<f64, 8, 8>;

/// Eigenvalues with real part above −ε count as unstable.
pub const STABILITY_MARGIN: f64 = 1e-9;
/// Required relative Frobenius residual of the Lyapunov solution.
pub const LYAPUNOV_RESIDUAL: f64 = 1e-10;

const SCHUR_EPS: f64 = 1e-14;
const SCHUR_MAX_ITER: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftMatrix(pub Mat8);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffusionMatrix(pub Mat8);

/// Symmetric steady-state covariance matrix 𝒱ᵢⱼ = ⟨uᵢuⱼ + uⱼuᵢ⟩/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceMatrix(pub Mat8);

impl CovarianceMatrix {
    pub fn matrix(&self) -> &Mat8 {
        &self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stability {
    pub stable: bool,
    /// Largest real part among the eigenvalues of A, in A's units.
    pub max_re: f64,
}

/// Drift matrix of the linearized quantum Langevin equations.
pub fn build_drift(state: &SteadyState, rates: &Rates) -> DriftMatrix {
    let (d1, d2) = (state.eff_delta_1, state.eff_delta_2);
    let (k1, k2, kc, kb) = (rates.kappa_1, rates.kappa_2, rates.kappa_c, rates.kappa_b);
    let (g1, g2) = (rates.g_1, rates.g_2);
    let (dc, wb) = (rates.delta_c, rates.omega_b);
    let (re1, im1) = (2.0 * state.coupling_1.re, 2.0 * state.coupling_1.im);
    let (re2, im2) = (2.0 * state.coupling_2.re, 2.0 * state.coupling_2.im);

    #[rustfmt::skip]
    let a = Mat8::from_row_slice(&[
        -k1,  d1,  0.0, 0.0, 0.0, g1,  -re1, 0.0,
        -d1, -k1,  0.0, 0.0, -g1, 0.0, -im1, 0.0,
        0.0, 0.0, -k2,  d2,  0.0, g2,  -re2, 0.0,
        0.0, 0.0, -d2, -k2,  -g2, 0.0, -im2, 0.0,
        0.0, g1,  0.0, g2,  -kc,  dc,  0.0,  0.0,
        -g1, 0.0, -g2, 0.0, -dc, -kc,  0.0,  0.0,
        0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -kb,   wb,
        -im1, re1, -im2, re2, 0.0, 0.0, -wb, -kb,
    ]);
    DriftMatrix(a)
}

/// Diagonal diffusion matrix κⱼ(2Nⱼ + 1), two entries per mode.
pub fn build_diffusion(rates: &Rates, occupations: &BathOccupations) -> DiffusionMatrix {
    let entries = [
        rates.kappa_1 * (2.0 * occupations.n_x1 + 1.0),
        rates.kappa_2 * (2.0 * occupations.n_x2 + 1.0),
        rates.kappa_c * (2.0 * occupations.n_c + 1.0),
        rates.kappa_b * (2.0 * occupations.n_b + 1.0),
    ];
    let mut d = Mat8::zeros();
    for (mode, value) in entries.into_iter().enumerate() {
        d[(2 * mode, 2 * mode)] = value;
        d[(2 * mode + 1, 2 * mode + 1)] = value;
    }
    DiffusionMatrix(d)
}

/// Eigenvalues of the drift matrix via a real Schur decomposition.
pub fn drift_eigenvalues(a: &DriftMatrix) -> Result<Vec<num_complex::Complex64>> {
    let schur = a
        .0
        .try_schur(SCHUR_EPS, SCHUR_MAX_ITER)
        .ok_or_else(|| Error::Numerical("Schur iteration for the drift matrix did not converge".into()))?;
    Ok(schur.complex_eigenvalues().iter().copied().collect())
}

/// Stable iff every eigenvalue has real part below −[`STABILITY_MARGIN`].
pub fn is_stable(a: &DriftMatrix) -> Result<Stability> {
    let eig = drift_eigenvalues(a)?;
    let max_re = eig.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    if !max_re.is_finite() {
        return Err(Error::Numerical("non-finite eigenvalue of the drift matrix".into()));
    }
    Ok(Stability {
        stable: max_re < -STABILITY_MARGIN,
        max_re,
    })
}

fn lyapunov_operator(a: &Mat8) -> DMatrix<f64> {
    // column-major vec: vec(A𝒱) = (I ⊗ A) vec 𝒱, vec(𝒱Aᵀ) = (A ⊗ I) vec 𝒱
    let a = DMatrix::from_column_slice(8, 8, a.as_slice());
    let eye = DMatrix::<f64>::identity(8, 8);
    eye.kronecker(&a) + a.kronecker(&eye)
}

fn lyapunov_residual(a: &Mat8, v: &Mat8, d: &Mat8) -> Mat8 {
    a * v + v * a.transpose() + d
}

/// Solves A𝒱 + 𝒱Aᵀ = −D for a stable A.
///
/// The equation is vectorized into a 64×64 system and LU-factored; one step of
/// iterative refinement follows, and the result is symmetrized.
pub fn solve_lyapunov(a: &DriftMatrix, d: &DiffusionMatrix) -> Result<CovarianceMatrix> {
    let stability = is_stable(a)?;
    if !stability.stable {
        return Err(Error::Unstable {
            max_re: stability.max_re,
        });
    }
    let lu = lyapunov_operator(&a.0).lu();
    let rhs = -DVector::from_column_slice(d.0.as_slice());
    let x = lu
        .solve(&rhs)
        .ok_or_else(|| Error::Numerical("singular Lyapunov operator".into()))?;
    let mut v = Mat8::from_column_slice(x.as_slice());

    let r = lyapunov_residual(&a.0, &v, &d.0);
    if let Some(dx) = lu.solve(&-DVector::from_column_slice(r.as_slice())) {
        v += Mat8::from_column_slice(dx.as_slice());
    }
    let v = (v + v.transpose()) * 0.5;

    let residual = lyapunov_residual(&a.0, &v, &d.0).norm();
    let scale = d.0.norm();
    if !(residual <= LYAPUNOV_RESIDUAL * scale) {
        return Err(Error::Numerical(format!(
            "Lyapunov residual {residual:e} exceeds {:e}",
            LYAPUNOV_RESIDUAL * scale
        )));
    }
    Ok(CovarianceMatrix(v))
}

/// ‖A𝒱 + 𝒱Aᵀ + D‖_F.
pub fn residual_norm(a: &DriftMatrix, v: &CovarianceMatrix, d: &DiffusionMatrix) -> f64 {
    lyapunov_residual(&a.0, &v.0, &d.0).norm()
}
