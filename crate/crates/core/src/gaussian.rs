//! Gaussian-state quantities extracted from a covariance matrix: mode
//! reductions, symplectic spectra, logarithmic negativity and the effective
//! phonon occupation.
//!
//! Vacuum variance is 1/2, so a covariance matrix is physical iff every
//! symplectic eigenvalue is at least 1/2 and E_N = max(0, −ln 2ν̃₋).

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, Matrix2, Matrix4};

use crate::dynamics::CovarianceMatrix;
use crate::error::{Error, Result};

/// Agreement required between the closed-form and spectral routes.
pub const ROUTE_TOLERANCE: f64 = 1e-9;
/// Slack below 1/2 tolerated by [`check_physicality`].
pub const PHYSICALITY_TOLERANCE: f64 = 1e-9;
/// Slack below 1/2 tolerated on the input of [`logarithmic_negativity`].
pub const INPUT_PHYSICALITY_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    X1,
    X2,
    Cavity,
    Phonon,
}

impl Mode {
    pub const ALL: [Mode; 4] = [Mode::X1, Mode::X2, Mode::Cavity, Mode::Phonon];

    /// Row of the X quadrature in the 8×8 covariance matrix.
    pub fn offset(self) -> usize {
        2 * self as usize
    }

    pub fn label(self) -> &'static str {
        match self {
            Mode::X1 => "x1",
            Mode::X2 => "x2",
            Mode::Cavity => "c",
            Mode::Phonon => "b",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "x1" => Ok(Mode::X1),
            "x2" => Ok(Mode::X2),
            "c" => Ok(Mode::Cavity),
            "b" => Ok(Mode::Phonon),
            other => Err(Error::Config(format!(
                "unknown mode `{other}` (expected one of x1, x2, c, b)"
            ))),
        }
    }
}

/// An ordered pair of distinct modes. Partial transposition acts on `.0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Bipartition(pub Mode, pub Mode);

impl Bipartition {
    pub const EXCITONS: Bipartition = Bipartition(Mode::X1, Mode::X2);

    pub fn new(a: Mode, b: Mode) -> Result<Self> {
        if a == b {
            return Err(Error::Domain(format!("bipartition needs two distinct modes, got {a} twice")));
        }
        Ok(Bipartition(a, b))
    }

    pub fn label(&self) -> String {
        format!("{}_{}", self.0, self.1)
    }
}

/// Two-mode covariance matrix [[A, C], [Cᵀ, B]].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoModeCM(pub Matrix4<f64>);

/// 2×2 block (i, j) of a 4×4 matrix.
fn block(m: &Matrix4<f64>, i: usize, j: usize) -> Matrix2<f64> {
    m.fixed_view::<2, 2>(2 * i, 2 * j).into_owned()
}

impl TwoModeCM {
    pub fn local_a(&self) -> Matrix2<f64> {
        block(&self.0, 0, 0)
    }

    pub fn local_b(&self) -> Matrix2<f64> {
        block(&self.0, 1, 1)
    }

    pub fn correlations(&self) -> Matrix2<f64> {
        block(&self.0, 0, 1)
    }

    /// 𝒫V𝒫 with 𝒫 flipping the momentum of mode `party` (0 or 1).
    pub fn partial_transpose(&self, party: usize) -> TwoModeCM {
        let mut p = Matrix4::identity();
        p[(2 * party + 1, 2 * party + 1)] = -1.0;
        TwoModeCM(p * self.0 * p)
    }

    /// Seralian invariant Δ = det A + det B + 2 det C.
    pub fn seralian(&self) -> f64 {
        self.local_a().determinant() + self.local_b().determinant() + 2.0 * self.correlations().determinant()
    }
}

/// Ω = ⊕ᵢ iσ_y for `modes` modes.
pub fn symplectic_form(modes: usize) -> DMatrix<f64> {
    let mut omega = DMatrix::zeros(2 * modes, 2 * modes);
    for m in 0..modes {
        omega[(2 * m, 2 * m + 1)] = 1.0;
        omega[(2 * m + 1, 2 * m)] = -1.0;
    }
    omega
}

/// Keeps the rows and columns of modes `a` and `b`, in that order.
pub fn reduce(v: &CovarianceMatrix, a: Mode, b: Mode) -> Result<TwoModeCM> {
    let pair = Bipartition::new(a, b)?;
    let idx = [pair.0.offset(), pair.0.offset() + 1, pair.1.offset(), pair.1.offset() + 1];
    Ok(TwoModeCM(Matrix4::from_fn(|i, j| v.0[(idx[i], idx[j])])))
}

/// Symplectic eigenvalues from the moduli of the eigenvalues of iΩV (equal to
/// those of ΩV), ascending. Each value appears once.
pub fn symplectic_spectrum(v: &DMatrix<f64>) -> Result<Vec<f64>> {
    let n = v.nrows();
    if !n.is_multiple_of(2) || v.ncols() != n {
        return Err(Error::Domain(format!("expected an even square matrix, got {}x{}", n, v.ncols())));
    }
    let m = symplectic_form(n / 2) * v;
    let schur = m
        .try_schur(1e-15, 10_000)
        .ok_or_else(|| Error::Numerical("Schur iteration for iΩV did not converge".into()))?;
    let mut moduli: Vec<f64> = schur.complex_eigenvalues().iter().map(|z| z.norm()).collect();
    moduli.sort_by(f64::total_cmp);
    let scale = moduli.last().copied().unwrap_or(0.0).max(1.0);
    let mut out = Vec::with_capacity(n / 2);
    for pair in moduli.chunks(2) {
        if (pair[0] - pair[1]).abs() > ROUTE_TOLERANCE * scale {
            return Err(Error::Numerical(format!(
                "symplectic eigenvalues not doubly degenerate: {} vs {}",
                pair[0], pair[1]
            )));
        }
        out.push(0.5 * (pair[0] + pair[1]));
    }
    Ok(out)
}

/// Closed-form two-mode symplectic eigenvalues (ν₋, ν₊) with
/// ν±² = (Δ ± √(Δ² − 4 det V))/2.
pub fn symplectic_eigenvalues_closed_form(v4: &TwoModeCM) -> (f64, f64) {
    let delta = v4.seralian();
    let det = v4.0.determinant();
    let disc = (delta * delta - 4.0 * det).max(0.0).sqrt();
    let plus_sq = 0.5 * (delta + disc);
    // ν₋²ν₊² = det V; dividing avoids cancellation when ν₋ ≪ ν₊
    let minus_sq = if plus_sq > 0.0 { det / plus_sq } else { 0.0 };
    (minus_sq.max(0.0).sqrt(), plus_sq.max(0.0).sqrt())
}

/// Two-mode symplectic eigenvalues, checked against the spectral route.
///
/// The quadratic for ν² has a double root when ν₋ = ν₊, where the closed form
/// loses about half the working digits. Inside that band the spectral values
/// are returned; outside it the routes must agree to [`ROUTE_TOLERANCE`].
pub fn symplectic_eigenvalues(v4: &TwoModeCM) -> Result<(f64, f64)> {
    let (minus, plus) = symplectic_eigenvalues_closed_form(v4);
    let spectral = symplectic_spectrum(&DMatrix::from_column_slice(4, 4, v4.0.as_slice()))?;
    let (s_minus, s_plus) = (spectral[0], spectral[1]);
    let err = (s_minus - minus).abs().max((s_plus - plus).abs());
    let tol = ROUTE_TOLERANCE * plus.max(1.0);
    if err <= tol {
        return Ok((minus, plus));
    }
    let slack = 4.0 * f64::EPSILON.sqrt() * v4.seralian().abs() / s_minus.max(f64::MIN_POSITIVE);
    if (s_plus - s_minus) <= slack && err <= tol + slack {
        return Ok((s_minus, s_plus));
    }
    Err(Error::Numerical(format!(
        "closed-form ({minus}, {plus}) and spectral ({s_minus}, {s_plus}) symplectic eigenvalues disagree"
    )))
}

/// Logarithmic negativity together with the smallest partially transposed
/// symplectic eigenvalue ν̃₋.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Negativity {
    pub log_neg: f64,
    pub nu_min: f64,
}

/// E_N and ν̃₋ of a two-mode state.
pub fn negativity(v4: &TwoModeCM) -> Result<Negativity> {
    let (nu, _) = symplectic_eigenvalues(v4)?;
    if nu < 0.5 - INPUT_PHYSICALITY_TOLERANCE {
        return Err(Error::Domain(format!(
            "unphysical covariance matrix: smallest symplectic eigenvalue {nu} < 1/2"
        )));
    }
    let (nu_pt, _) = symplectic_eigenvalues(&v4.partial_transpose(0))?;
    Ok(Negativity {
        log_neg: (-(2.0 * nu_pt).ln()).max(0.0),
        nu_min: nu_pt,
    })
}

/// E_N = max(0, −ln 2ν̃₋) with the partial transpose acting on the first mode.
pub fn logarithmic_negativity(v4: &TwoModeCM) -> Result<f64> {
    Ok(negativity(v4)?.log_neg)
}

/// Mean phonon number (𝒱₇₇ + 𝒱₈₈ − 1)/2 from the phonon quadratures.
pub fn effective_phonon_number(v: &CovarianceMatrix) -> f64 {
    let o = Mode::Phonon.offset();
    0.5 * (v.0[(o, o)] + v.0[(o + 1, o + 1)] - 1.0)
}

/// Anything with a symplectic spectrum.
pub trait PhaseSpace {
    fn symplectic_spectrum(&self) -> Result<Vec<f64>>;
}

impl PhaseSpace for CovarianceMatrix {
    fn symplectic_spectrum(&self) -> Result<Vec<f64>> {
        symplectic_spectrum(&DMatrix::from_column_slice(8, 8, self.0.as_slice()))
    }
}

impl PhaseSpace for TwoModeCM {
    fn symplectic_spectrum(&self) -> Result<Vec<f64>> {
        symplectic_spectrum(&DMatrix::from_column_slice(4, 4, self.0.as_slice()))
    }
}

/// True iff every symplectic eigenvalue is ≥ 1/2 − 10⁻⁹.
pub fn check_physicality<C: PhaseSpace>(v: &C) -> bool {
    match v.symplectic_spectrum() {
        Ok(nu) => nu.iter().all(|&x| x >= 0.5 - PHYSICALITY_TOLERANCE),
        Err(_) => false,
    }
}
