use std::fs::File;
use std::io::{BufWriter, Write};

use dicke_mf::sweep::{format_sig, run_sweep};
use dicke_mf::{
    analyze, cdt_amplitudes, integrate_with, DissipatorMode, Error, Result, Sample, Trajectory,
};
use serde_json::json;

use crate::config::RunConfig;

/// Writes one document to stdout. A closed pipe is not an error.
pub fn emit(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{text}").and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn print_json(value: &serde_json::Value) -> Result<()> {
    emit(&serde_json::to_string_pretty(value).expect("json serializes"))
}

pub fn ground_state(cfg: &RunConfig) -> Result<()> {
    let params = cfg.system_params().with_xi(0.0);
    let s = dicke_mf::ground_state(cfg.model, &params, cfg.branch)?;
    let m = s.bloch();
    let phase = if params.g > params.critical_coupling(cfg.model) { "superradiant" } else { "normal" };
    print_json(&json!({
        "alpha_re": s.alpha.re,
        "alpha_im": s.alpha.im,
        "mx": m[0],
        "my": m[1],
        "mz": m[2],
        "phase": phase,
    }))
}

fn csv_row(s: &Sample) -> String {
    let cols = [s.t, s.alpha.re, s.alpha.im, s.m[0], s.m[1], s.m[2], s.sigma, s.rate_l];
    let mut line = cols.iter().map(|&x| format_sig(x, 12)).collect::<Vec<_>>().join(",");
    line.push('\n');
    line
}

/// Starts from the undriven stationary state, switches on the drive and
/// streams every recorded sample to the trajectory CSV.
pub fn simulate(cfg: &RunConfig) -> Result<()> {
    let params = cfg.system_params();
    let integration = cfg.integration_config();
    let thresholds = cfg.thresholds();
    let retained = integration.t_end * (1.0 - integration.discard_fraction);
    if retained < 17.0 * params.drive_period() {
        return Err(Error::InvalidConfig(
            "t_end·(1 − discard_fraction) must cover more than 17 drive periods".into(),
        ));
    }
    if cfg.mode == DissipatorMode::EffectiveSpin && params.kappa <= 0.0 {
        return Err(Error::InvalidConfig("effective spin mode requires kappa > 0".into()));
    }
    let initial = dicke_mf::ground_state(cfg.model, &params.with_xi(0.0), cfg.branch)?;
    let path = &cfg.output.trajectory;
    let mut out = BufWriter::new(File::create(path)?);
    out.write_all(b"t,alpha_re,alpha_im,mx,my,mz,sigma,rate_l\n")?;
    let mut samples = Vec::new();
    let mut io_error = None;
    let result = integrate_with(cfg.model, cfg.mode, &params, &initial, &integration, |s| {
        if io_error.is_none() {
            if let Err(e) = out.write_all(csv_row(s).as_bytes()) {
                io_error = Some(e);
            }
        }
        samples.push(*s);
    });
    out.flush()?;
    if let Some(e) = io_error {
        return Err(e.into());
    }
    let (_, stats) = result?;
    let traj = Trajectory { samples, model: cfg.model, mode: cfg.mode, params, config: integration, stats };
    let (op, phase) = analyze(&traj, &thresholds)?;
    print_json(&json!({
        "alpha_order_re": op.alpha_order.re,
        "alpha_order_im": op.alpha_order.im,
        "alpha_order_abs": op.alpha_order.norm(),
        "sigma_alpha": op.sigma_alpha,
        "phase": phase.as_str(),
        "steps": stats.steps,
        "samples": traj.samples.len(),
        "max_trace_deviation": stats.max_trace_deviation,
        "min_eigenvalue": stats.min_eigenvalue,
        "min_bloch_norm": stats.min_bloch_norm,
        "max_bloch_norm": stats.max_bloch_norm,
        "output": path.display().to_string(),
    }))
}

pub fn sweep(cfg: &RunConfig, resume: bool, quiet: bool) -> Result<()> {
    let spec = cfg.grid_spec();
    let workers = cfg
        .grid
        .workers
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1));
    let path = &cfg.output.sweep;
    let summary = run_sweep(&spec, path, resume, workers, |done, total, row| {
        if !quiet {
            eprintln!("[{done}/{total}] g={} xi={} {}", format_sig(row.g, 9), format_sig(row.xi, 9), row.phase);
        }
    })?;
    print_json(&json!({
        "rows": summary.total,
        "computed": summary.computed,
        "regular": summary.regular,
        "ordered": summary.ordered,
        "nonperiodic": summary.nonperiodic,
        "failed": summary.failed,
        "output": path.display().to_string(),
    }))
}

pub fn cdt(cfg: &RunConfig, n: usize) -> Result<()> {
    let xs = cdt_amplitudes(&cfg.system_params(), n)?;
    emit(&serde_json::to_string(&xs).expect("json serializes"))
}
