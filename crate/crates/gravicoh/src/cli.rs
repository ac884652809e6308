//! Command-line front end: single experiment runs, parameter sweeps over any
//! input, and the classical-channel and two-mass entanglement checks.
//! Everything prints CSV by default; `--json` switches the single-run
//! commands to a structured report.
//!
//! Exit codes: 0 on success, 2 on usage or parameter-range errors, 3 when a
//! pipeline fails its internal closed-form validation, 1 for I/O trouble.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::experiments::{
    classical_identity_check, diagonal_hamiltonian_check, run_probe_mass,
    run_probe_mass_at_phase, run_single_mass, two_mass_entangling_run, ExperimentReport,
    TWO_MASS_DEFAULT_ENERGIES,
};
use crate::gridsim::{classical_channel_ensemble, ChannelConfig, Coupling};
use crate::physics::{InterferometerParams, PhysicalConstants};
use crate::qstate::{balanced_ket, density_from_ket, DensityOperator};
use crate::{Error, Result};

/// Parse the process arguments, dispatch, and map errors to exit codes.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.exit_code() == 0 { 0 } else { 2 };
        }
    };
    match dispatch(&cli) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err}");
            exit_code(&err)
        }
    }
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::NumericalValidation { .. } => 3,
        Error::InvalidGrid { .. } | Error::InvalidParameter { .. } | Error::InvalidState { .. } => 2,
        _ => 1,
    }
}

#[derive(Parser)]
#[command(
    name = "gravicoh",
    version,
    about = "Density-operator interferometer simulations with coherence witnesses"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Single mass through a splitter: the output is incoherent in the
    /// balanced basis for every depolarizing level
    Setup1(Setup1Args),
    /// Split mass with a probe mass running parallel: the output picks up a
    /// relative phase and becomes coherent
    Setup2(Setup2Args),
    /// Sweep one input over a range and write a CSV of both coherence
    /// measures against their closed forms
    Sweep(SweepArgs),
    /// Classical-model checks: identity-channel evolution, the diagonal
    /// two-level generator, and the stochastic-record grid channel
    Classical(ClassicalArgs),
    /// Two split masses under the conditional generator: entanglement from a
    /// product state
    Bmv(BmvArgs),
}

#[derive(Args)]
struct Setup1Args {
    /// Depolarizing survival weight in [0, 1]
    #[arg(long)]
    p: Option<f64>,
    /// Split mass, kg
    #[arg(long = "M")]
    split_mass: Option<f64>,
    /// Arm separation, m
    #[arg(long = "D")]
    arm_separation: Option<f64>,
    /// Transit time, s
    #[arg(long)]
    tau: Option<f64>,
    /// Emit a JSON report instead of CSV
    #[arg(long)]
    json: bool,
    /// JSON file mirroring the flags; explicit flags win
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct Setup2Args {
    /// Split mass, kg
    #[arg(long = "M")]
    split_mass: Option<f64>,
    /// Probe mass, kg
    #[arg(long = "m")]
    probe_mass: Option<f64>,
    /// Arm separation, m
    #[arg(long = "D")]
    arm_separation: Option<f64>,
    /// Probe-to-near-arm distance, m
    #[arg(long = "d")]
    probe_distance: Option<f64>,
    /// Transit time, s
    #[arg(long)]
    tau: Option<f64>,
    /// Depolarizing survival weight in [0, 1]
    #[arg(long)]
    p: Option<f64>,
    /// Drive the pipeline with this phase difference directly, skipping the
    /// physical parameters
    #[arg(long = "delta-phi")]
    delta_phi: Option<f64>,
    /// Emit a JSON report instead of CSV
    #[arg(long)]
    json: bool,
    /// JSON file mirroring the flags; explicit flags win
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SweepVar {
    #[value(name = "p")]
    Noise,
    #[value(name = "delta_phi")]
    DeltaPhi,
    #[value(name = "tau")]
    Tau,
    #[value(name = "d")]
    ProbeDistance,
    #[value(name = "D")]
    ArmSeparation,
    #[value(name = "M")]
    SplitMass,
    #[value(name = "m")]
    ProbeMass,
}

impl SweepVar {
    fn name(self) -> &'static str {
        match self {
            SweepVar::Noise => "p",
            SweepVar::DeltaPhi => "delta_phi",
            SweepVar::Tau => "tau",
            SweepVar::ProbeDistance => "d",
            SweepVar::ArmSeparation => "D",
            SweepVar::SplitMass => "M",
            SweepVar::ProbeMass => "m",
        }
    }
}

#[derive(Args)]
struct SweepArgs {
    /// Variable to sweep
    #[arg(long, value_enum)]
    var: SweepVar,
    #[arg(long)]
    from: f64,
    #[arg(long)]
    to: f64,
    /// Number of sweep points (inclusive endpoints), at least 2
    #[arg(long)]
    steps: usize,
    /// Fixed split mass, kg
    #[arg(long = "M")]
    split_mass: Option<f64>,
    /// Fixed probe mass, kg
    #[arg(long = "m")]
    probe_mass: Option<f64>,
    /// Fixed arm separation, m
    #[arg(long = "D")]
    arm_separation: Option<f64>,
    /// Fixed probe distance, m
    #[arg(long = "d")]
    probe_distance: Option<f64>,
    /// Fixed transit time, s
    #[arg(long)]
    tau: Option<f64>,
    /// Fixed depolarizing survival weight
    #[arg(long)]
    p: Option<f64>,
    /// Fixed phase difference; when present the physical parameters are
    /// ignored and the pipeline is phase-driven
    #[arg(long = "delta-phi")]
    delta_phi: Option<f64>,
    /// Output CSV path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON file mirroring the flags; explicit flags win
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ClassicalMode {
    /// Evolution under a multiple of the identity: nothing may change
    Identity,
    /// The diagonal two-level generator, which does create coherence
    Diagonal,
    /// Stochastic-record phases on position-grid wavepackets, averaged
    Grid,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CoupleArg {
    Both,
    Probe,
    Mass,
}

#[derive(Args)]
struct ClassicalArgs {
    #[arg(long, value_enum)]
    mode: ClassicalMode,
    /// Identity mode: arm energy, J (dimensionless when --hbar 1)
    #[arg(long, default_value_t = 1.0)]
    energy: f64,
    /// Evolution time, s (dimensionless when --hbar 1)
    #[arg(long, default_value_t = 1.0)]
    tau: f64,
    /// Diagonal mode: left-arm energy
    #[arg(long = "e-left", default_value_t = 1.0)]
    e_left: f64,
    /// Diagonal mode: right-arm energy
    #[arg(long = "e-right", default_value_t = 0.0)]
    e_right: f64,
    /// Planck constant used by the identity and diagonal modes; defaults to
    /// dimensionless units
    #[arg(long, default_value_t = 1.0)]
    hbar: f64,
    /// Grid mode: number of stochastic realizations
    #[arg(long, default_value_t = 1000)]
    runs: usize,
    /// Grid mode: root seed for the per-run record streams
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Grid mode: standard deviation of the accumulated impulse, kg m/s
    #[arg(long = "record-std", default_value_t = 0.0)]
    record_std: f64,
    /// Grid mode: which coordinates the record couples to
    #[arg(long, value_enum, default_value_t = CoupleArg::Both)]
    couple: CoupleArg,
    /// Grid mode: Gaussian width, m
    #[arg(long, default_value_t = 1e-6)]
    sigma: f64,
    /// Grid mode: branch separation, m (default 20 sigma)
    #[arg(long)]
    separation: Option<f64>,
    /// Grid mode: grid points
    #[arg(long, default_value_t = 4096)]
    points: usize,
    /// Emit JSON instead of CSV
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct BmvArgs {
    /// Dimensionless evolution time
    #[arg(long)]
    t: f64,
    /// Arm-pair energies E1,E2,E1',E2' of the conditional generator
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    energies: Option<Vec<f64>>,
    /// Emit JSON instead of CSV
    #[arg(long)]
    json: bool,
}

/// Optional config file mirroring the physical flags.
#[derive(Debug, Default, Deserialize)]
struct ConfigFile {
    #[serde(rename = "M")]
    split_mass: Option<f64>,
    #[serde(rename = "m")]
    probe_mass: Option<f64>,
    #[serde(rename = "D")]
    arm_separation: Option<f64>,
    #[serde(rename = "d")]
    probe_distance: Option<f64>,
    tau: Option<f64>,
    p: Option<f64>,
    delta_phi: Option<f64>,
}

fn load_config(path: &Option<PathBuf>) -> Result<ConfigFile> {
    match path {
        None => Ok(ConfigFile::default()),
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::InvalidState {
                detail: format!("cannot read config {}: {e}", path.display()),
            })?;
            serde_json::from_str(&text).map_err(|e| Error::InvalidState {
                detail: format!("cannot parse config {}: {e}", path.display()),
            })
        }
    }
}

fn dispatch(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Setup1(args) => cmd_setup1(args),
        Command::Setup2(args) => cmd_setup2(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Classical(args) => cmd_classical(args),
        Command::Bmv(args) => cmd_bmv(args),
    }
}

// --- report emission ----------------------------------------------------

#[derive(Serialize)]
struct JsonPhase {
    raw: f64,
    #[serde(rename = "mod")]
    reduced: f64,
    reduction_err: f64,
}

impl From<crate::physics::PhaseShift> for JsonPhase {
    fn from(p: crate::physics::PhaseShift) -> Self {
        Self {
            raw: p.raw,
            reduced: p.reduced,
            reduction_err: p.reduction_error,
        }
    }
}

#[derive(Serialize)]
struct JsonCoherencePair {
    c_l1: f64,
    c_rel_ent: f64,
}

#[derive(Serialize)]
struct JsonCoherences {
    simulated: JsonCoherencePair,
    #[serde(skip_serializing_if = "Option::is_none")]
    closed: Option<JsonCoherencePair>,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    label: &'a str,
    params: &'a BTreeMap<String, f64>,
    delta_phi: JsonPhase,
    coherences: JsonCoherences,
    #[serde(skip_serializing_if = "Option::is_none")]
    entanglement: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
}

#[derive(Serialize)]
struct ReportRow<'a> {
    label: &'a str,
    delta_phi_raw: f64,
    delta_phi_mod: f64,
    c_l1: f64,
    c_rel_ent: f64,
    c_l1_closed: Option<f64>,
    c_rel_closed: Option<f64>,
}

fn print_report(report: &ExperimentReport, json: bool) -> Result<()> {
    for warning in &report.warnings {
        eprintln!("warning: {warning}");
    }
    if json {
        let value = JsonReport {
            label: &report.label,
            params: &report.params,
            delta_phi: report.delta_phi.into(),
            coherences: JsonCoherences {
                simulated: JsonCoherencePair {
                    c_l1: report.simulated.c_l1,
                    c_rel_ent: report.simulated.c_rel_ent,
                },
                closed: report.closed_form.map(|c| JsonCoherencePair {
                    c_l1: c.c_l1,
                    c_rel_ent: c.c_rel_ent,
                }),
            },
            entanglement: report.entanglement,
            seed: report.seed,
        };
        println!(
            "{}",
            serde_json::to_string_pretty(&value).expect("report serializes")
        );
        return Ok(());
    }
    let mut writer = csv::Writer::from_writer(std::io::stdout());
    writer
        .serialize(ReportRow {
            label: &report.label,
            delta_phi_raw: report.delta_phi.raw,
            delta_phi_mod: report.delta_phi.reduced,
            c_l1: report.simulated.c_l1,
            c_rel_ent: report.simulated.c_rel_ent,
            c_l1_closed: report.closed_form.map(|c| c.c_l1),
            c_rel_closed: report.closed_form.map(|c| c.c_rel_ent),
        })
        .and_then(|_| writer.flush().map_err(csv::Error::from))
        .map_err(|e| Error::InvalidState {
            detail: format!("cannot write report: {e}"),
        })
}

// --- subcommands ----------------------------------------------------------

fn cmd_setup1(args: &Setup1Args) -> Result<()> {
    let config = load_config(&args.config)?;
    let p = args.p.or(config.p).unwrap_or(1.0);
    let split_mass = args.split_mass.or(config.split_mass).unwrap_or(1.0);
    let arm_separation = args.arm_separation.or(config.arm_separation).unwrap_or(1.0);
    let tau = args.tau.or(config.tau).unwrap_or(1.0);
    let report = run_single_mass(
        p,
        split_mass,
        arm_separation,
        tau,
        &PhysicalConstants::codata(),
    )?;
    print_report(&report, args.json)
}

struct EffectiveSetup2 {
    split_mass: f64,
    probe_mass: f64,
    arm_separation: f64,
    probe_distance: f64,
    tau: f64,
    p: f64,
    delta_phi: Option<f64>,
}

impl EffectiveSetup2 {
    fn params(&self) -> Result<InterferometerParams> {
        InterferometerParams::new(
            self.split_mass,
            self.probe_mass,
            self.arm_separation,
            self.probe_distance,
            self.tau,
            self.p,
        )
    }
}

fn merge_setup2(args: &Setup2Args) -> Result<EffectiveSetup2> {
    let config = load_config(&args.config)?;
    let delta_phi = args.delta_phi.or(config.delta_phi);
    let required = [
        ("--M", args.split_mass.or(config.split_mass)),
        ("--m", args.probe_mass.or(config.probe_mass)),
        ("--D", args.arm_separation.or(config.arm_separation)),
        ("--d", args.probe_distance.or(config.probe_distance)),
        ("--tau", args.tau.or(config.tau)),
    ];
    if delta_phi.is_none() {
        let missing: Vec<&str> = required
            .iter()
            .filter(|(_, v)| v.is_none())
            .map(|(name, _)| *name)
            .collect();
        if !missing.is_empty() {
            return Err(Error::InvalidState {
                detail: format!(
                    "missing physical parameters {} (or pass --delta-phi to drive the \
                     pipeline directly)",
                    missing.join(" ")
                ),
            });
        }
    }
    Ok(EffectiveSetup2 {
        split_mass: required[0].1.unwrap_or(1.0),
        probe_mass: required[1].1.unwrap_or(1.0),
        arm_separation: required[2].1.unwrap_or(1.0),
        probe_distance: required[3].1.unwrap_or(1.0),
        tau: required[4].1.unwrap_or(1.0),
        p: args.p.or(config.p).unwrap_or(1.0),
        delta_phi,
    })
}

fn cmd_setup2(args: &Setup2Args) -> Result<()> {
    let eff = merge_setup2(args)?;
    let report = match eff.delta_phi {
        Some(delta) => run_probe_mass_at_phase(delta, eff.p)?,
        None => run_probe_mass(&eff.params()?, &PhysicalConstants::codata())?,
    };
    print_report(&report, args.json)
}

#[derive(Serialize)]
struct SweepRow {
    var: &'static str,
    value: f64,
    delta_phi_raw: f64,
    delta_phi_mod: f64,
    c_l1: f64,
    c_rel_ent: f64,
    c_l1_closed: f64,
    c_rel_closed: f64,
}

fn sweep_point(var: SweepVar, value: f64, fixed: &EffectiveSetup2) -> Result<ExperimentReport> {
    let constants = PhysicalConstants::codata();
    let physical = |sub: SweepVar, value: f64| -> Result<ExperimentReport> {
        let params = InterferometerParams::new(
            if sub == SweepVar::SplitMass { value } else { fixed.split_mass },
            if sub == SweepVar::ProbeMass { value } else { fixed.probe_mass },
            if sub == SweepVar::ArmSeparation { value } else { fixed.arm_separation },
            if sub == SweepVar::ProbeDistance { value } else { fixed.probe_distance },
            if sub == SweepVar::Tau { value } else { fixed.tau },
            if sub == SweepVar::Noise { value } else { fixed.p },
        )?;
        run_probe_mass(&params, &constants)
    };
    match var {
        SweepVar::DeltaPhi => run_probe_mass_at_phase(value, fixed.p),
        SweepVar::Noise => match fixed.delta_phi {
            Some(delta) => run_probe_mass_at_phase(delta, value),
            None => physical(SweepVar::Noise, value),
        },
        other => physical(other, value),
    }
}

fn cmd_sweep(args: &SweepArgs) -> Result<()> {
    if args.steps < 2 {
        return Err(Error::InvalidParameter {
            name: "steps",
            value: args.steps as f64,
        });
    }
    let config = load_config(&args.config)?;
    let fixed = EffectiveSetup2 {
        split_mass: args.split_mass.or(config.split_mass).unwrap_or(1.0),
        probe_mass: args.probe_mass.or(config.probe_mass).unwrap_or(1.0),
        arm_separation: args.arm_separation.or(config.arm_separation).unwrap_or(1.0),
        probe_distance: args.probe_distance.or(config.probe_distance).unwrap_or(1.0),
        tau: args.tau.or(config.tau).unwrap_or(1.0),
        p: args.p.or(config.p).unwrap_or(1.0),
        delta_phi: args.delta_phi.or(config.delta_phi),
    };

    let step = (args.to - args.from) / (args.steps - 1) as f64;
    let values: Vec<f64> = (0..args.steps)
        .map(|i| args.from + i as f64 * step)
        .collect();

    // evaluate in parallel, emit in input order
    let rows: Vec<SweepRow> = values
        .par_iter()
        .map(|&value| -> Result<SweepRow> {
            let report = sweep_point(args.var, value, &fixed)?;
            let closed = report.closed_form.expect("sweep pipelines have closed forms");
            Ok(SweepRow {
                var: args.var.name(),
                value,
                delta_phi_raw: report.delta_phi.raw,
                delta_phi_mod: report.delta_phi.reduced,
                c_l1: report.simulated.c_l1,
                c_rel_ent: report.simulated.c_rel_ent,
                c_l1_closed: closed.c_l1,
                c_rel_closed: closed.c_rel_ent,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let io_err = |e: std::io::Error| Error::InvalidState {
        detail: format!("cannot write sweep output: {e}"),
    };
    let sink: Box<dyn Write> = match &args.out {
        Some(path) => Box::new(File::create(path).map_err(io_err)?),
        None => Box::new(std::io::stdout()),
    };
    let mut writer = csv::Writer::from_writer(sink);
    for row in &rows {
        writer.serialize(row).map_err(|e| Error::InvalidState {
            detail: format!("cannot write sweep row: {e}"),
        })?;
    }
    writer.flush().map_err(io_err)?;
    Ok(())
}

fn cmd_classical(args: &ClassicalArgs) -> Result<()> {
    match args.mode {
        ClassicalMode::Identity => {
            let plus = density_from_ket(&balanced_ket())?;
            let mixed = DensityOperator::maximally_mixed(vec![2])?;
            let a = classical_identity_check(&plus, args.energy, args.tau, args.hbar)?;
            let b = classical_identity_check(&mixed, args.energy, args.tau, args.hbar)?;
            let max_entry = a.max_entry_delta.max(b.max_entry_delta);
            let max_coherence = a.max_coherence_delta.max(b.max_coherence_delta);
            if args.json {
                println!(
                    "{}",
                    serde_json::json!({
                        "label": "classical-identity",
                        "params": {"energy": args.energy, "tau": args.tau, "hbar": args.hbar},
                        "max_entry_delta": max_entry,
                        "max_coherence_delta": max_coherence,
                        "global_phase": {
                            "raw": a.global_phase.raw,
                            "mod": a.global_phase.reduced,
                            "reduction_err": a.global_phase.reduction_error,
                        },
                    })
                );
            } else {
                println!(
                    "identity channel: state unchanged (max entry delta {max_entry:.1e}); \
                     coherence unchanged ({max_coherence:.1} delta within 1e-14)"
                );
            }
            Ok(())
        }
        ClassicalMode::Diagonal => {
            let report =
                diagonal_hamiltonian_check(args.e_left, args.e_right, args.tau, args.hbar)?;
            if args.json {
                println!(
                    "{}",
                    serde_json::json!({
                        "label": "classical-diagonal",
                        "params": {
                            "e_left": args.e_left, "e_right": args.e_right,
                            "tau": args.tau, "hbar": args.hbar,
                        },
                        "relative_phase": report.relative_phase,
                        "c_l1_pm": report.c_l1_pm,
                        "predicted": report.predicted,
                    })
                );
            } else {
                println!(
                    "diagonal generator: relative phase {:.6}, coherence created {:.6} \
                     (predicted |sin| = {:.6})",
                    report.relative_phase, report.c_l1_pm, report.predicted
                );
            }
            Ok(())
        }
        ClassicalMode::Grid => {
            let sigma = args.sigma;
            let config = ChannelConfig {
                record_std: args.record_std,
                runs: args.runs,
                seed: args.seed,
                coupling: match args.couple {
                    CoupleArg::Both => Coupling::Both,
                    CoupleArg::Probe => Coupling::ProbeOnly,
                    CoupleArg::Mass => Coupling::SplitMassOnly,
                },
                sigma,
                separation: args.separation.unwrap_or(20.0 * sigma),
                points: args.points,
                hbar: PhysicalConstants::codata().hbar,
            };
            let outcome = classical_channel_ensemble(&config)?;
            if args.json {
                println!(
                    "{}",
                    serde_json::json!({
                        "label": "classical-grid",
                        "params": {
                            "runs": outcome.runs, "record_std": config.record_std,
                            "sigma": config.sigma, "separation": config.separation,
                            "points": config.points,
                        },
                        "seed": outcome.seed,
                        "offdiag_initial": outcome.offdiag_initial,
                        "offdiag_mean": outcome.offdiag_mean,
                        "offdiag_std_err": outcome.offdiag_std_err,
                        "offdiag_predicted": outcome.predicted_offdiag,
                        "single_run_phase_delta": outcome.single_run_phase_delta,
                    })
                );
            } else {
                let io_err = |e| Error::InvalidState {
                    detail: format!("cannot write grid report: {e}"),
                };
                let mut writer = csv::Writer::from_writer(std::io::stdout());
                writer
                    .write_record([
                        "runs",
                        "seed",
                        "record_std",
                        "offdiag_initial",
                        "offdiag_mean",
                        "offdiag_std_err",
                        "offdiag_predicted",
                        "single_run_phase_delta",
                    ])
                    .map_err(|e| io_err(e.to_string()))?;
                writer
                    .serialize((
                        outcome.runs,
                        outcome.seed,
                        config.record_std,
                        outcome.offdiag_initial,
                        outcome.offdiag_mean,
                        outcome.offdiag_std_err,
                        outcome.predicted_offdiag,
                        outcome.single_run_phase_delta,
                    ))
                    .map_err(|e| io_err(e.to_string()))?;
                writer.flush().map_err(|e| io_err(e.to_string()))?;
            }
            Ok(())
        }
    }
}

fn cmd_bmv(args: &BmvArgs) -> Result<()> {
    let energies: [f64; 4] = match &args.energies {
        None => TWO_MASS_DEFAULT_ENERGIES,
        Some(list) => list.as_slice().try_into().map_err(|_| Error::InvalidState {
            detail: format!("--energies needs exactly 4 values, got {}", list.len()),
        })?,
    };
    let report = two_mass_entangling_run(args.t, energies)?;
    if args.json {
        println!(
            "{}",
            serde_json::json!({
                "label": "bmv",
                "params": {
                    "t": report.time,
                    "E1": energies[0], "E2": energies[1],
                    "E1p": energies[2], "E2p": energies[3],
                },
                "entanglement": report.entanglement,
            })
        );
    } else {
        let io_err = |e: String| Error::InvalidState {
            detail: format!("cannot write report: {e}"),
        };
        let mut writer = csv::Writer::from_writer(std::io::stdout());
        writer
            .write_record(["t", "e1", "e2", "e1p", "e2p", "entanglement_bits"])
            .map_err(|e| io_err(e.to_string()))?;
        writer
            .serialize((
                report.time,
                energies[0],
                energies[1],
                energies[2],
                energies[3],
                report.entanglement,
            ))
            .map_err(|e| io_err(e.to_string()))?;
        writer.flush().map_err(|e| io_err(e.to_string()))?;
    }
    Ok(())
}
