//! Preset sweeps over the reference parameter set.

use crate::error::{Error, Result};
use crate::gaussian::{Bipartition, Mode};
use crate::model::SystemParams;
use crate::sweep::{Axis, AxisParam, CouplingMode, OutputFormat, SweepConfig};

/// (name, description) of every preset.
pub const SCENARIOS: [(&str, &str); 6] = [
    ("fig2a", "E_N(x1,x2) vs effective detunings, couplings pinned at the optimum"),
    ("fig2b", "E_N(x1,x2) and E_N(x1,b) vs bare coupling G0_2"),
    ("fig3a", "E_N(x1,x2) vs effective coupling magnitudes |G1|, |G2|"),
    ("fig3b", "E_N(x1,x2) vs exciton-photon couplings g1, g2"),
    ("fig4a", "E_N(x1,x2) vs exciton decay (kappa_1 = kappa_2) and cavity decay"),
    ("fig4b", "E_N(x1,x2) vs bath temperature and mechanical damping"),
];

fn preset(name: &str, axes: Vec<Axis>) -> SweepConfig {
    SweepConfig {
        name: Some(name.to_string()),
        base: SystemParams::baseline(),
        axes,
        bipartitions: vec![Bipartition::EXCITONS],
        coupling_mode: CouplingMode::Derived,
        output: None,
        format: OutputFormat::Csv,
    }
}

/// Preset by name. Axis bounds are in configuration units (Hz, K).
pub fn scenario(name: &str) -> Result<SweepConfig> {
    let cfg = match name {
        "fig2a" => SweepConfig {
            coupling_mode: CouplingMode::Pinned,
            ..preset(
                name,
                vec![
                    Axis::new(AxisParam::EffDelta1, -40e9, 40e9, 101),
                    Axis::new(AxisParam::EffDelta2, -40e9, 40e9, 101),
                ],
            )
        },
        "fig2b" => SweepConfig {
            bipartitions: vec![Bipartition::EXCITONS, Bipartition(Mode::X1, Mode::Phonon)],
            ..preset(name, vec![Axis::new(AxisParam::G0_2, 0.0, 40e6, 81)])
        },
        "fig3a" => preset(
            name,
            vec![
                Axis::new(AxisParam::CouplingMag1, 0.0, 500e6, 101),
                Axis::new(AxisParam::CouplingMag2, 0.0, 500e6, 101),
            ],
        ),
        "fig3b" => preset(
            name,
            vec![
                Axis::new(AxisParam::PhotonCoupling1, 0.0, 2e9, 101),
                Axis::new(AxisParam::PhotonCoupling2, 0.0, 2e9, 101),
            ],
        ),
        "fig4a" => preset(
            name,
            vec![
                Axis::new(AxisParam::KappaExcitons, 10e6, 1.2e9, 101),
                Axis::new(AxisParam::KappaC, 1e9, 60e9, 101),
            ],
        ),
        "fig4b" => preset(
            name,
            vec![
                Axis::new(AxisParam::Temperature, 0.0, 200.0, 101),
                Axis::new(AxisParam::KappaB, 0.1e6, 12e6, 101),
            ],
        ),
        other => {
            let names: Vec<_> = SCENARIOS.iter().map(|(n, _)| *n).collect();
            return Err(Error::Config(format!(
                "unknown scenario `{other}`; valid scenarios: {}",
                names.join(", ")
            )));
        }
    };
    Ok(cfg)
}
