//! `dicke-mf`: ground states, trajectories, phase-diagram sweeps and CDT
//! amplitudes from the command line.
//!
//! Exit status is 0 on success, 2 for configuration, usage or I/O errors and
//! 3 when the integrator fails numerically.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dicke_mf::{Branch, DissipatorMode, Error, ModelKind};

use crate::config::RunConfig;

const WORKERS_ENV: &str = "DICKE_MF_WORKERS";

#[derive(Parser, Debug)]
#[command(name = "dicke-mf", version, about = "Mean-field driven dissipative Dicke / Tavis-Cummings simulator")]
struct Cli {
    /// JSON run configuration; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Print the effective configuration as JSON and exit.
    #[arg(long, global = true)]
    dump_config: bool,
    #[command(flatten)]
    overrides: Overrides,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Undriven stationary state at the given coupling.
    GroundState,
    /// Integrate one driven trajectory and classify it.
    Simulate,
    /// Classify every point of a (g, xi) grid.
    Sweep(SweepArgs),
    /// Drive amplitudes at which coherent destruction of tunneling occurs.
    Cdt(CdtArgs),
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long)]
    g_min: Option<f64>,
    #[arg(long)]
    g_max: Option<f64>,
    #[arg(long)]
    g_steps: Option<usize>,
    #[arg(long)]
    xi_min: Option<f64>,
    #[arg(long)]
    xi_max: Option<f64>,
    #[arg(long)]
    xi_steps: Option<usize>,
    /// Worker threads (also `DICKE_MF_WORKERS`).
    #[arg(long)]
    workers: Option<usize>,
    /// Keep rows already present in the output and compute only the rest.
    #[arg(long)]
    resume: bool,
    /// Suppress the per-row progress counter on stderr.
    #[arg(long)]
    quiet: bool,
}

#[derive(Args, Debug)]
struct CdtArgs {
    /// Number of amplitudes.
    #[arg(long, default_value_t = 3)]
    n: usize,
}

#[derive(Args, Debug, Default)]
struct Overrides {
    #[arg(long, global = true, value_parser = parse_model)]
    model: Option<ModelKind>,
    #[arg(long, global = true, value_parser = parse_mode)]
    mode: Option<DissipatorMode>,
    /// +1 or -1: sign of the superradiant photon amplitude.
    #[arg(long, global = true, allow_hyphen_values = true, value_parser = parse_branch)]
    branch: Option<Branch>,
    #[arg(long, global = true)]
    g: Option<f64>,
    #[arg(long, global = true)]
    xi: Option<f64>,
    #[arg(long, global = true)]
    kappa: Option<f64>,
    #[arg(long, global = true)]
    gamma_l: Option<f64>,
    #[arg(long, global = true)]
    gamma_g: Option<f64>,
    #[arg(long, global = true)]
    omega_p: Option<f64>,
    #[arg(long, global = true)]
    omega_a: Option<f64>,
    #[arg(long, global = true)]
    omega_e: Option<f64>,
    #[arg(long, global = true)]
    dt: Option<f64>,
    #[arg(long, global = true)]
    t_end: Option<f64>,
    #[arg(long, global = true)]
    sample_stride: Option<usize>,
    #[arg(long, global = true)]
    discard_fraction: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    perturbation: Option<f64>,
    #[arg(long, global = true)]
    eps_order: Option<f64>,
    #[arg(long, global = true)]
    eps_sigma: Option<f64>,
    /// Trajectory CSV for `simulate`, result CSV for `sweep`.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

fn parse_json_name<T: serde::de::DeserializeOwned>(s: &str) -> Result<T, String> {
    serde_json::from_value(serde_json::Value::String(s.replace('-', "_"))).map_err(|e| e.to_string())
}

fn parse_model(s: &str) -> Result<ModelKind, String> {
    parse_json_name(s)
}

fn parse_mode(s: &str) -> Result<DissipatorMode, String> {
    parse_json_name(s)
}

fn parse_branch(s: &str) -> Result<Branch, String> {
    let v: i8 = s.trim_start_matches('+').parse().map_err(|_| format!("branch must be +1 or -1, got {s}"))?;
    Branch::try_from(v)
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

impl Overrides {
    fn apply(&self, c: &mut RunConfig) {
        set(&mut c.model, self.model);
        set(&mut c.mode, self.mode);
        set(&mut c.branch, self.branch);
        let p = &mut c.params;
        set(&mut p.g, self.g);
        set(&mut p.xi, self.xi);
        set(&mut p.kappa, self.kappa);
        set(&mut p.gamma_l, self.gamma_l);
        set(&mut p.gamma_g, self.gamma_g);
        set(&mut p.omega_p, self.omega_p);
        set(&mut p.omega_a, self.omega_a);
        set(&mut p.omega_e, self.omega_e);
        let i = &mut c.integration;
        if self.dt.is_some() {
            i.dt = self.dt;
        }
        set(&mut i.t_end, self.t_end);
        set(&mut i.sample_stride, self.sample_stride);
        set(&mut i.discard_fraction, self.discard_fraction);
        set(&mut i.perturbation, self.perturbation);
        set(&mut c.thresholds.eps_order, self.eps_order);
        set(&mut c.thresholds.eps_sigma, self.eps_sigma);
    }
}

impl SweepArgs {
    fn apply(&self, c: &mut RunConfig) -> Result<(), Error> {
        let g = &mut c.grid;
        set(&mut g.g_min, self.g_min);
        set(&mut g.g_max, self.g_max);
        set(&mut g.g_steps, self.g_steps);
        set(&mut g.xi_min, self.xi_min);
        set(&mut g.xi_max, self.xi_max);
        set(&mut g.xi_steps, self.xi_steps);
        if let Ok(v) = std::env::var(WORKERS_ENV) {
            let n = v
                .trim()
                .parse()
                .map_err(|_| Error::InvalidConfig(format!("{WORKERS_ENV} must be a positive integer, got {v:?}")))?;
            g.workers = Some(n);
        }
        if self.workers.is_some() {
            g.workers = self.workers;
        }
        Ok(())
    }
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::NumericalFailure { .. } => 3,
        _ => 2,
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    cli.overrides.apply(&mut cfg);
    if let Some(Command::Sweep(args)) = &cli.command {
        args.apply(&mut cfg)?;
    }
    let output = cli.overrides.output.clone();
    if let Some(path) = &output {
        match cli.command {
            Some(Command::Sweep(_)) => cfg.output.sweep = path.clone(),
            _ => cfg.output.trajectory = path.clone(),
        }
    }
    cfg.resolve();
    cfg.validate()?;
    if cli.dump_config {
        return commands::emit(&cfg.to_json());
    }
    match cli.command {
        None => Err(Error::InvalidConfig("a subcommand is required unless --dump-config is given".into())),
        Some(Command::GroundState) => commands::ground_state(&cfg),
        Some(Command::Simulate) => commands::simulate(&cfg),
        Some(Command::Sweep(args)) => commands::sweep(&cfg, args.resume, args.quiet),
        Some(Command::Cdt(args)) => commands::cdt(&cfg, args.n),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
