use std::path::PathBuf;

use exopto::config::{baseline_json, load_params, load_sweep};
use exopto::heatmap::render_heatmap;
use exopto::scenario::scenario;
use exopto::sweep::{CouplingMode, Status};
use exopto::{run_point, run_sweep, Bipartition, Mode, PointOptions, SystemParams};
use proptest::prelude::*;

fn repo_file(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..").join(rel)
}

#[test]
fn shipped_baseline_config_is_the_preset() {
    let from_file = load_params(&repo_file("configs/baseline.json")).unwrap();
    let a = run_point(&from_file, &PointOptions::default()).unwrap();
    let b = run_point(&SystemParams::baseline(), &PointOptions::default()).unwrap();
    assert!((a.n_eff - b.n_eff).abs() < 1e-12);
    assert!((a.log_neg(Bipartition::EXCITONS).unwrap() - b.log_neg(Bipartition::EXCITONS).unwrap()).abs() < 1e-12);
}

#[test]
fn serialized_baseline_parses_back() {
    let text = baseline_json();
    assert!(text.contains("\"G0_2\""));
    let p = exopto::config::parse_params(&text).unwrap();
    let r = run_point(&p, &PointOptions::default()).unwrap();
    assert!((r.n_eff - 0.4423).abs() < 1e-3);
}

#[test]
fn shipped_sweep_config_uses_power_drive() {
    let cfg = load_sweep(&repo_file("configs/kappa_c_sweep.json")).unwrap();
    assert_eq!(cfg.bipartitions.len(), 3);
    assert_eq!(cfg.coupling_mode, CouplingMode::Derived);
    let grid = run_sweep(&cfg.with_grid(&[3]).unwrap(), 2).unwrap();
    assert_eq!(grid.header()[..4], ["kappa_c", "E_N_x1_x2", "E_N_x1_b", "E_N_x2_b"]);
}

#[test]
fn config_errors_point_at_the_problem() {
    let err = exopto::config::parse_params("{ \"omega_b\": 20e9,\n  \"kappa_b\": \"fast\" }")
        .unwrap_err()
        .to_string();
    assert!(err.contains("line 2"), "{err}");
    let err = exopto::config::parse_params("{}").unwrap_err().to_string();
    assert!(err.contains("missing field"), "{err}");
}

#[test]
fn csv_is_deterministic_and_well_formed() {
    let cfg = scenario("fig4a").unwrap().with_grid(&[4, 5]).unwrap();
    let a = run_sweep(&cfg, 1).unwrap().to_csv();
    let b = run_sweep(&cfg, 4).unwrap().to_csv();
    assert_eq!(a, b);
    assert!(a.ends_with('\n') && !a.contains('\r'));
    let lines: Vec<_> = a.lines().collect();
    assert_eq!(lines.len(), 21);
    for line in &lines[1..] {
        let fields: Vec<_> = line.split(',').collect();
        assert_eq!(fields.len(), 7);
        for f in &fields[..6] {
            assert!(*f == "nan" || f.parse::<f64>().is_ok(), "{f}");
            if *f != "nan" {
                // nine significant digits: d.dddddddde±x
                let mantissa = f.trim_start_matches('-').split('e').next().unwrap();
                assert_eq!(mantissa.len(), 10, "{f}");
            }
        }
    }
    // row-major, first axis outer
    let first: Vec<_> = lines[1..6].iter().map(|l| l.split(',').next().unwrap()).collect();
    assert!(first.iter().all(|x| *x == first[0]));
}

#[test]
fn fig3a_heatmap_hatches_unstable_cells() {
    let grid = run_sweep(&scenario("fig3a").unwrap().with_grid(&[9, 9]).unwrap(), 2).unwrap();
    let unstable = grid.rows.iter().filter(|r| r.status == Status::Unstable).count();
    assert!(unstable > 0);
    let svg = render_heatmap(&grid, "E_N_x1_x2").unwrap();
    // one hatched cell per unstable point plus the legend swatch
    assert_eq!(svg.matches("url(#hatch)").count(), unstable + 1);
    assert!(svg.contains("MHz"));
}

#[test]
fn unknown_column_is_rejected() {
    let grid = run_sweep(&scenario("fig4b").unwrap().with_grid(&[3, 3]).unwrap(), 1).unwrap();
    assert!(render_heatmap(&grid, "E_N_x1_b").is_err());
}

#[test]
fn partial_transpose_side_does_not_matter_on_physical_states() {
    let r = run_point(
        &SystemParams::baseline(),
        &PointOptions {
            bipartitions: vec![Bipartition(Mode::X1, Mode::X2), Bipartition(Mode::X2, Mode::X1)],
            ..Default::default()
        },
    )
    .unwrap();
    let (a, b) = (r.entanglement[0].log_neg, r.entanglement[1].log_neg);
    assert!((a - b).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn entanglement_is_finite_and_nonnegative_when_stable(
        d1 in -2.0f64..2.0, d2 in -2.0f64..2.0, t in 0.0f64..100.0,
    ) {
        let mut p = SystemParams::baseline();
        p.detuning = exopto::model::DetuningSpec::Effective {
            eff_delta_1: d1 * p.omega_b,
            eff_delta_2: d2 * p.omega_b,
        };
        p.temperature = t;
        let r = run_point(&p, &PointOptions::default()).unwrap();
        if r.stable {
            let e = r.log_neg(Bipartition::EXCITONS).unwrap();
            prop_assert!(e.is_finite() && e >= 0.0);
            prop_assert!(r.n_eff >= -1e-9);
        } else {
            prop_assert!(r.max_re >= 0.0 || r.max_re > -1e-9 * p.omega_b);
        }
    }
}
