//! Steady-state quantum correlations of a driven four-mode
//! exciton-optomechanics system: two quantum-well exciton modes, one cavity
//! mode and one phonon mode.
//!
//! The pipeline runs [`model::validate`] → [`model::normalize`] →
//! [`steady_state`] → [`dynamics`] (drift, diffusion, stability, Lyapunov) →
//! [`gaussian`] (logarithmic negativity, phonon occupation). [`pipeline`]
//! composes it for one parameter point and [`sweep`] evaluates grids.

// `!(x > 0.0)` is used on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod dynamics;
pub mod error;
pub mod gaussian;
pub mod heatmap;
pub mod model;
pub mod pipeline;
pub mod scenario;
pub mod steady_state;
pub mod sweep;

pub use error::{Error, Result};
pub use gaussian::{Bipartition, Mode};
pub use model::SystemParams;
pub use pipeline::{run_point, EntanglementReport, PointOptions};
pub use scenario::scenario;
pub use sweep::{run_sweep, GridResult, SweepConfig};
