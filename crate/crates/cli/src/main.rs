use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use exopto::config::{load_params, load_sweep};
use exopto::pipeline::{run_point, EntanglementReport, PointOptions};
use exopto::scenario::{scenario, SCENARIOS};
use exopto::sweep::{resolve_threads, run_sweep, OutputFormat, THREADS_ENV};
use exopto::{Bipartition, Error, Mode};
use num_complex::Complex64;
use serde_json::{json, Value};

const TWO_PI: f64 = std::f64::consts::TAU;

#[derive(Parser)]
#[command(name = "exopto", version, about = "Steady-state entanglement of a driven exciton-optomechanical system")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one parameter set and print a JSON report.
    Point {
        #[arg(long)]
        config: PathBuf,
        /// Mode pair to report, e.g. `x1,b`. Repeatable; defaults to x1,x2.
        #[arg(long = "pair", value_parser = parse_pair)]
        pairs: Vec<Bipartition>,
    },
    /// Run a 1D or 2D parameter sweep and write a CSV table.
    Sweep {
        #[arg(long, conflicts_with = "config", required_unless_present = "config")]
        scenario: Option<String>,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Grid size, `N` or `NxM`.
        #[arg(long, value_parser = parse_grid)]
        grid: Option<Grid>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also render an SVG heatmap (2D sweeps).
        #[arg(long)]
        svg: bool,
        /// Worker threads; overrides the EXOPTO_THREADS variable.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// List the preset sweeps.
    Scenarios,
}

fn parse_pair(s: &str) -> Result<Bipartition, String> {
    let (a, b) = s.split_once(',').ok_or("expected two modes, e.g. x1,x2")?;
    let mode = |m: &str| m.trim().parse::<Mode>().map_err(|e| e.to_string());
    Bipartition::new(mode(a)?, mode(b)?).map_err(|e| e.to_string())
}

#[derive(Clone)]
struct Grid(Vec<usize>);

fn parse_grid(s: &str) -> Result<Grid, String> {
    s.split(['x', 'X'])
        .map(|n| n.trim().parse::<usize>().map_err(|_| format!("bad grid size `{s}`, expected N or NxM")))
        .collect::<Result<_, _>>()
        .map(Grid)
}

/// 1 for anything the user can fix in the input, 2 for numerical failures.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NoConvergence { .. } | Error::Unstable { .. } | Error::Numerical(_) => 2,
        _ => 1,
    }
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(exit_code(e))
}

/// Prints to stdout; a closed pipe (`| head`) is not an error.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{text}");
}

fn coupling(z: Complex64) -> Value {
    json!({ "magnitude_hz": z.norm() / TWO_PI, "phase_rad": z.arg() })
}

fn report_json(r: &EntanglementReport) -> Value {
    let s = &r.steady_state;
    let entanglement: serde_json::Map<String, Value> = r
        .entanglement
        .iter()
        .map(|e| (e.pair.label(), json!({ "log_neg": e.log_neg, "nu_min": e.nu_min })))
        .collect();
    let pair = |z: Complex64| json!([z.re, z.im]);
    json!({
        "stable": r.stable,
        "max_re": r.max_re,
        "entanglement": entanglement,
        "n_eff": r.n_eff,
        "steady_state": {
            "eff_delta_1": s.eff_delta_1 / TWO_PI,
            "eff_delta_2": s.eff_delta_2 / TWO_PI,
            "G_1": coupling(s.coupling_1),
            "G_2": coupling(s.coupling_2),
            "c": pair(s.avg_c),
            "x1": pair(s.avg_x1),
            "x2": pair(s.avg_x2),
            "b": pair(s.avg_b),
        },
        "warnings": r.warnings.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
    })
}

fn point(config: PathBuf, pairs: Vec<Bipartition>) -> Result<(), Error> {
    let params = load_params(&config)?;
    let mut options = PointOptions::default();
    if !pairs.is_empty() {
        options.bipartitions = pairs;
    }
    let report = run_point(&params, &options)?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    emit(&serde_json::to_string_pretty(&report_json(&report)).expect("report serializes"));
    Ok(())
}

fn sweep(
    name: Option<String>,
    config: Option<PathBuf>,
    grid: Option<Grid>,
    out: Option<PathBuf>,
    svg: bool,
    threads: Option<usize>,
) -> Result<(), Error> {
    let mut cfg = match (name, config) {
        (Some(n), _) => scenario(&n)?,
        (None, Some(path)) => load_sweep(&path)?,
        (None, None) => unreachable!("clap requires one source"),
    };
    if let Some(Grid(points)) = grid {
        cfg = cfg.with_grid(&points)?;
    }
    let svg = svg || cfg.format == OutputFormat::CsvSvg;
    if svg && cfg.axes.len() != 2 {
        return Err(Error::Config(
            "--svg needs a 2D sweep; plot the CSV columns of a 1D sweep as lines instead".into(),
        ));
    }
    let out = out
        .or_else(|| cfg.output.clone())
        .unwrap_or_else(|| PathBuf::from(format!("{}.csv", cfg.name.as_deref().unwrap_or("sweep"))));

    let threads = resolve_threads(threads);
    eprintln!("{} points on {threads} threads ({THREADS_ENV} or --threads to change)", cfg.total_points());
    let result = run_sweep(&cfg, threads)?;
    result.write(&out, svg)?;

    let unstable = result.rows.iter().filter(|r| r.status.as_csv() == "unstable").count();
    let failed = result.rows.iter().filter(|r| r.status.as_csv().starts_with("error")).count();
    eprintln!(
        "wrote {} ({} rows, {unstable} unstable, {failed} failed)",
        out.display(),
        result.rows.len()
    );
    Ok(())
}

fn main() -> ExitCode {
    // usage errors share exit code 1 with bad config files; 2 is reserved
    // for numerical failures
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Point { config, pairs } => point(config, pairs),
        Command::Sweep {
            scenario,
            config,
            grid,
            out,
            svg,
            threads,
        } => sweep(scenario, config, grid, out, svg, threads).map_err(|e| match e {
            // numerical trouble in a sweep is a configuration problem: the
            // grid itself never aborts on a bad point
            e @ (Error::Numerical(_) | Error::NoConvergence { .. }) => Error::Config(e.to_string()),
            e => e,
        }),
        Command::Scenarios => {
            let list: String = SCENARIOS.iter().map(|(n, d)| format!("{n:<8}{d}\n")).collect();
            emit(list.trim_end());
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(&e),
    }
}
