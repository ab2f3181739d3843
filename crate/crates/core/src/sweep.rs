//! Parallel `(g, ξ)` phase-diagram sweeps with a resumable CSV sink.
//!
//! Every completed point is appended to the sink as one LF-terminated line
//! and flushed immediately. Resuming skips points whose formatted `(g, xi)`
//! pair is already present. When all points are done the file is rewritten in
//! `(g, xi)` order, so the final bytes do not depend on scheduling.

use std::collections::HashSet;
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Seek, SeekFrom, Write};
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::analysis::{analyze, PhaseLabel, Thresholds, MIN_PERIODS};
use crate::dynamics::{integrate, IntegrationConfig};
use crate::error::{Error, Result};
use crate::model::{ground_state, Branch, DissipatorMode, ModelKind, SystemParams};

pub const CSV_HEADER: &str = "g,xi,alpha_order_re,alpha_order_im,alpha_order_abs,sigma_alpha,phase,status";

/// Rectangular grid of couplings and drive amplitudes sharing everything else.
#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec {
    pub g_min: f64,
    pub g_max: f64,
    pub g_steps: usize,
    pub xi_min: f64,
    pub xi_max: f64,
    pub xi_steps: usize,
    /// `g` and `xi` are overridden per point.
    pub template: SystemParams,
    pub model: ModelKind,
    pub mode: DissipatorMode,
    pub integration: IntegrationConfig,
    pub thresholds: Thresholds,
    pub branch: Branch,
}

impl GridSpec {
    /// A grid over the default parameters, dressed dissipation and default
    /// integration settings.
    pub fn new(model: ModelKind, g: (f64, f64, usize), xi: (f64, f64, usize)) -> Self {
        Self {
            g_min: g.0,
            g_max: g.1,
            g_steps: g.2,
            xi_min: xi.0,
            xi_max: xi.1,
            xi_steps: xi.2,
            template: SystemParams::default(),
            model,
            mode: DissipatorMode::Dressed,
            integration: IntegrationConfig::default(),
            thresholds: Thresholds::default(),
            branch: Branch::Positive,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let axis = |name: &str, lo: f64, hi: f64, n: usize| {
            if n == 0 {
                return Err(Error::InvalidConfig(format!("{name}_steps must be >= 1")));
            }
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(Error::InvalidConfig(format!("{name} range [{lo}, {hi}] is invalid")));
            }
            if lo < 0.0 {
                return Err(Error::InvalidConfig(format!("{name} must be non-negative")));
            }
            Ok(())
        };
        axis("g", self.g_min, self.g_max, self.g_steps)?;
        axis("xi", self.xi_min, self.xi_max, self.xi_steps)?;
        self.template.validate()?;
        self.integration.validate(&self.template)?;
        self.thresholds.validate()?;
        let retained = self.integration.t_end * (1.0 - self.integration.discard_fraction);
        if retained < (MIN_PERIODS as f64 + 1.0) * self.template.drive_period() {
            return Err(Error::InvalidConfig(format!(
                "t_end·(1 − discard_fraction) must cover more than {} drive periods",
                MIN_PERIODS + 1
            )));
        }
        if self.mode == DissipatorMode::EffectiveSpin {
            if self.model != ModelKind::Dicke {
                return Err(Error::InvalidConfig("effective spin mode requires the Dicke model".into()));
            }
            if self.template.kappa <= 0.0 {
                return Err(Error::InvalidConfig("effective spin mode requires kappa > 0".into()));
            }
        }
        Ok(())
    }

    fn axis_value(lo: f64, hi: f64, n: usize, i: usize) -> f64 {
        if n == 1 {
            lo
        } else {
            lo + (hi - lo) * i as f64 / (n - 1) as f64
        }
    }

    /// Grid points in `g`-major order.
    pub fn points(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::with_capacity(self.g_steps * self.xi_steps);
        for i in 0..self.g_steps {
            let g = Self::axis_value(self.g_min, self.g_max, self.g_steps, i);
            for j in 0..self.xi_steps {
                out.push((g, Self::axis_value(self.xi_min, self.xi_max, self.xi_steps, j)));
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RowStatus {
    Ok,
    NumericalFailure,
}

impl RowStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Ok => "ok",
            Self::NumericalFailure => "numerical-failure",
        }
    }
}

/// Result of one grid point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRow {
    pub g: f64,
    pub xi: f64,
    pub alpha_order: Complex64,
    pub alpha_order_abs: f64,
    pub sigma_alpha: f64,
    /// Failed points are labelled non-periodic.
    pub phase: PhaseLabel,
    pub status: RowStatus,
}

impl SweepRow {
    fn failed(g: f64, xi: f64) -> Self {
        Self {
            g,
            xi,
            alpha_order: Complex64::new(f64::NAN, f64::NAN),
            alpha_order_abs: f64::NAN,
            sigma_alpha: f64::NAN,
            phase: PhaseLabel::NonPeriodic,
            status: RowStatus::NumericalFailure,
        }
    }

    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}\n",
            format_sig(self.g, 9),
            format_sig(self.xi, 9),
            format_sig(self.alpha_order.re, 9),
            format_sig(self.alpha_order.im, 9),
            format_sig(self.alpha_order_abs, 9),
            format_sig(self.sigma_alpha, 9),
            self.phase,
            self.status.as_str()
        )
    }

    pub fn parse_csv(line: &str) -> Result<Self> {
        let bad = || Error::MalformedRow(line.to_string());
        let fields: Vec<&str> = line.trim_end_matches('\n').split(',').collect();
        if fields.len() != 8 {
            return Err(bad());
        }
        let num = |s: &str| s.parse::<f64>().map_err(|_| bad());
        let status = match fields[7] {
            "ok" => RowStatus::Ok,
            "numerical-failure" => RowStatus::NumericalFailure,
            _ => return Err(bad()),
        };
        Ok(Self {
            g: num(fields[0])?,
            xi: num(fields[1])?,
            alpha_order: Complex64::new(num(fields[2])?, num(fields[3])?),
            alpha_order_abs: num(fields[4])?,
            sigma_alpha: num(fields[5])?,
            phase: fields[6].parse()?,
            status,
        })
    }
}

/// Resume key: the formatted `(g, xi)` pair as written to the sink.
pub fn row_key(g: f64, xi: f64) -> (String, String) {
    (format_sig(g, 9), format_sig(xi, 9))
}

/// C-style `%.{sig}g` formatting.
pub fn format_sig(x: f64, sig: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sig = sig.max(1);
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{:.*e}", sig - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent in {:e} output");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if exp < -4 || exp >= sig as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim(mantissa), sign, exp.abs())
    } else {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        trim(&format!("{:.*}", decimals, x))
    }
}

/// Simulates one grid point: start from the undriven stationary state,
/// switch on the drive, integrate and classify.
pub fn run_point(spec: &GridSpec, g: f64, xi: f64) -> SweepRow {
    let undriven = spec.template.with_g(g).with_xi(0.0);
    let driven = undriven.with_xi(xi);
    let result = ground_state(spec.model, &undriven, spec.branch)
        .and_then(|init| integrate(spec.model, spec.mode, &driven, &init, &spec.integration))
        .and_then(|traj| analyze(&traj, &spec.thresholds));
    match result {
        Ok((op, phase)) if op.alpha_order.re.is_finite() && op.sigma_alpha.is_finite() => SweepRow {
            g,
            xi,
            alpha_order: op.alpha_order,
            alpha_order_abs: op.alpha_order.norm(),
            sigma_alpha: op.sigma_alpha,
            phase,
            status: RowStatus::Ok,
        },
        _ => SweepRow::failed(g, xi),
    }
}

/// Per-label counts over every row in the sink after a sweep.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SweepSummary {
    pub total: usize,
    pub computed: usize,
    pub regular: usize,
    pub ordered: usize,
    pub nonperiodic: usize,
    pub failed: usize,
}

impl SweepSummary {
    fn tally(rows: &[SweepRow], computed: usize) -> Self {
        let mut s = Self { total: rows.len(), computed, ..Self::default() };
        for r in rows {
            if r.status == RowStatus::NumericalFailure {
                s.failed += 1;
                continue;
            }
            match r.phase {
                PhaseLabel::RegularOscillating => s.regular += 1,
                PhaseLabel::Ordered => s.ordered += 1,
                PhaseLabel::NonPeriodic => s.nonperiodic += 1,
            }
        }
        s
    }
}

/// Reads the complete rows of an existing sink, truncating a trailing partial
/// line left by an interrupted run.
fn load_sink(path: &Path) -> Result<Vec<SweepRow>> {
    let mut file = OpenOptions::new().read(true).write(true).open(path)?;
    let mut reader = BufReader::new(&mut file);
    let mut rows = Vec::new();
    let mut line = String::new();
    let mut complete_len = 0u64;
    let mut first = true;
    loop {
        line.clear();
        let n = reader.read_line(&mut line)?;
        if n == 0 || !line.ends_with('\n') {
            break;
        }
        if first {
            if line.trim_end() != CSV_HEADER {
                return Err(Error::MalformedRow(format!("unexpected header {:?}", line.trim_end())));
            }
            first = false;
        } else {
            rows.push(SweepRow::parse_csv(&line)?);
        }
        complete_len += n as u64;
    }
    drop(reader);
    if first {
        // empty or header-less partial file: start over
        file.set_len(0)?;
        file.seek(SeekFrom::Start(0))?;
        file.write_all(format!("{CSV_HEADER}\n").as_bytes())?;
    } else if file.metadata()?.len() != complete_len {
        file.set_len(complete_len)?;
    }
    file.sync_all()?;
    Ok(rows)
}

fn sort_rows(rows: &mut [SweepRow]) {
    rows.sort_by(|a, b| a.g.total_cmp(&b.g).then(a.xi.total_cmp(&b.xi)));
}

fn rewrite_sorted(path: &Path, rows: &[SweepRow]) -> Result<()> {
    let mut body = String::with_capacity(64 * (rows.len() + 1));
    body.push_str(CSV_HEADER);
    body.push('\n');
    for r in rows {
        body.push_str(&r.to_csv());
    }
    if fs::read_to_string(path).map(|s| s == body).unwrap_or(false) {
        return Ok(());
    }
    let tmp = path.with_extension("csv.tmp");
    {
        let mut f = File::create(&tmp)?;
        f.write_all(body.as_bytes())?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Evaluates every grid point missing from `sink` on `workers` threads.
/// `progress` is called once per completed row with `(done, pending)`.
pub fn run_sweep<P>(spec: &GridSpec, sink: &Path, resume: bool, workers: usize, progress: P) -> Result<SweepSummary>
where
    P: Fn(usize, usize, &SweepRow) + Sync,
{
    spec.validate()?;
    let existing = if resume && sink.exists() {
        load_sink(sink)?
    } else {
        let mut f = File::create(sink)?;
        f.write_all(format!("{CSV_HEADER}\n").as_bytes())?;
        f.sync_all()?;
        Vec::new()
    };
    let done: HashSet<(String, String)> = existing.iter().map(|r| row_key(r.g, r.xi)).collect();
    let pending: Vec<(f64, f64)> = spec
        .points()
        .into_iter()
        .filter(|&(g, xi)| !done.contains(&row_key(g, xi)))
        .collect();

    let file = Mutex::new(OpenOptions::new().append(true).open(sink)?);
    let counter = AtomicUsize::new(0);
    let total = pending.len();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
    let new_rows: Vec<SweepRow> = pool.install(|| {
        pending
            .par_iter()
            .map(|&(g, xi)| -> Result<SweepRow> {
                let row = run_point(spec, g, xi);
                {
                    let mut f = file.lock().expect("sink lock poisoned");
                    f.write_all(row.to_csv().as_bytes())?;
                    f.flush()?;
                }
                let n = counter.fetch_add(1, Ordering::SeqCst) + 1;
                progress(n, total, &row);
                Ok(row)
            })
            .collect::<Result<Vec<_>>>()
    })?;
    drop(file);

    let mut rows = existing;
    rows.extend(new_rows);
    sort_rows(&mut rows);
    rewrite_sorted(sink, &rows)?;
    Ok(SweepSummary::tally(&rows, total))
}
