//! Acceptance criteria, one PASS/FAIL line each. Runs as a plain binary so
//! the report prints in order; exits non-zero if any criterion fails.

use std::collections::HashMap;
use std::f64::consts::{PI, TAU};
use std::time::Instant;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use dicke_mf::sweep::{run_point, run_sweep, GridSpec, RowStatus, SweepRow};
use dicke_mf::{
    bessel_j0, cdt_amplitudes, ground_state, integrate, rhs, z2_map, AtomState, Branch, DissipatorMode,
    IntegrationConfig, MeanFieldState, ModelKind, PhaseLabel, StateVector, SystemParams,
};

struct Report {
    failures: usize,
}

impl Report {
    fn record(&mut self, id: &str, name: &str, pass: bool, detail: String, started: Instant) {
        if !pass {
            self.failures += 1;
        }
        println!(
            "{} [{id}] {name}: {detail} ({:.1}s)",
            if pass { "PASS" } else { "FAIL" },
            started.elapsed().as_secs_f64()
        );
    }
}

/// Closed-form superradiant photon amplitude of the Dicke model at unit
/// frequencies.
fn exact_alpha(g: f64) -> f64 {
    0.5 * (4.0 * g * g - 1.0 / (4.0 * g * g)).sqrt()
}

fn base(g: f64) -> SystemParams {
    SystemParams::default().with_g(g)
}

fn scan_spec(model: ModelKind, params: SystemParams) -> GridSpec {
    let mut spec = GridSpec::new(model, (params.g, params.g, 1), (0.0, 0.0, 1));
    spec.template = params;
    spec.integration = IntegrationConfig::default().with_t_end(2000.0 * PI).with_discard(0.8);
    spec
}

fn scan_xis() -> Vec<f64> {
    (36..=100).map(|k| k as f64 / 100.0).collect()
}

fn scan(model: ModelKind, params: SystemParams, xis: &[f64]) -> Vec<SweepRow> {
    let spec = scan_spec(model, params);
    xis.par_iter().map(|&xi| run_point(&spec, params.g, xi)).collect()
}

/// Maximal runs of consecutive `Ordered` rows, as closed `[first, last]` ξ
/// intervals.
fn ordered_intervals(rows: &[SweepRow]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut open: Option<(f64, f64)> = None;
    for r in rows {
        if r.phase == PhaseLabel::Ordered {
            open = Some(open.map_or((r.xi, r.xi), |(a, _)| (a, r.xi)));
        } else if let Some(iv) = open.take() {
            out.push(iv);
        }
    }
    out.extend(open);
    out
}

fn final_alpha(mode: DissipatorMode, params: &SystemParams, init: &MeanFieldState, t_end: f64) -> Complex64 {
    let cfg = IntegrationConfig::default().with_t_end(t_end);
    integrate(ModelKind::Dicke, mode, params, init, &cfg).unwrap().last().unwrap().alpha
}

fn c1(report: &mut Report) {
    let t = Instant::now();
    // unstable normal state nudged toward the positive branch
    let init = MeanFieldState::vacuum().perturbed(1e-3);
    let results: Vec<(f64, f64)> = [0.6, 0.8, 1.0]
        .par_iter()
        .map(|&g| (g, final_alpha(DissipatorMode::Dressed, &base(g), &init, 10000.0 * PI).norm()))
        .collect();
    let worst = results.iter().map(|&(g, a)| (a - exact_alpha(g)).abs()).fold(0.0, f64::max);
    let detail = results
        .iter()
        .map(|&(g, a)| format!("g={g}: |a|={a:.6} exact={:.6}", exact_alpha(g)))
        .collect::<Vec<_>>()
        .join("; ");
    report.record("1", "dressed superradiant amplitude", worst < 1e-3, format!("{detail}; max err {worst:.2e} < 1e-3"), t);
}

fn c2(report: &mut Report) {
    let t = Instant::now();
    let g = 0.8;
    let values: Vec<f64> = [0.1, 0.01, 0.001]
        .par_iter()
        .map(|&rate| {
            let p = base(g).with_kappa(rate).with_gammas(rate, 0.0);
            let init = ground_state(ModelKind::Dicke, &p, Branch::Positive).unwrap();
            final_alpha(DissipatorMode::Bare, &p, &init, 10000.0 * PI).norm()
        })
        .collect();
    let d1 = (values[0] - values[1]).abs();
    let d2 = (values[1] - values[2]).abs();
    let dev = (values[2] - exact_alpha(g)).abs();
    let pass = d1 < 5e-3 && d2 < 5e-3 && dev > 0.01;
    report.record(
        "2",
        "bare-mode deviation",
        pass,
        format!(
            "|a| = {:.6}, {:.6}, {:.6} for rate 0.1/0.01/0.001; successive diffs {d1:.2e}, {d2:.2e} < 5e-3; deviation from {:.6} is {dev:.4} > 0.01",
            values[0],
            values[1],
            values[2],
            exact_alpha(g)
        ),
        t,
    );
}

fn fmt_intervals(iv: &[(f64, f64)]) -> String {
    iv.iter().map(|(a, b)| format!("[{a:.2}, {b:.2}]")).collect::<Vec<_>>().join(" ")
}

fn c3(report: &mut Report, dicke: &[SweepRow]) -> Vec<(f64, f64)> {
    let t = Instant::now();
    let intervals = ordered_intervals(dicke);
    let cdt = cdt_amplitudes(&base(0.35), 10).unwrap();
    let near_cdt = |&(a, b): &(f64, f64)| cdt.iter().any(|&x| b >= x - 0.1 && a <= x + 0.1);
    let pass = intervals.len() >= 2 && intervals.iter().all(near_cdt);
    let cdt_in_range: Vec<String> = cdt.iter().filter(|&&x| x < 1.1).map(|x| format!("{x:.4}")).collect();
    report.record(
        "3",
        "Dicke ordered belts",
        pass,
        format!(
            "{} ordered intervals {} ; CDT amplitudes {} ; every interval within 0.1 of one",
            intervals.len(),
            fmt_intervals(&intervals),
            cdt_in_range.join(", ")
        ),
        t,
    );
    intervals
}

fn c4(report: &mut Report, tc: &[SweepRow]) {
    let t = Instant::now();
    let count = |l: PhaseLabel| tc.iter().filter(|r| r.phase == l).count();
    let ordered = count(PhaseLabel::Ordered);
    report.record(
        "4",
        "Tavis-Cummings contrast",
        ordered == 0,
        format!(
            "{} points: {ordered} ordered, {} regular, {} nonperiodic",
            tc.len(),
            count(PhaseLabel::RegularOscillating),
            count(PhaseLabel::NonPeriodic)
        ),
        t,
    );
}

fn c5(report: &mut Report, dicke: &[SweepRow]) {
    let t = Instant::now();
    // interior belt points: |alpha_order| vanishes at the belt edges, where a
    // relative comparison is ill-conditioned
    let ordered: Vec<&SweepRow> = dicke
        .windows(3)
        .filter(|w| w.iter().all(|r| r.phase == PhaseLabel::Ordered))
        .map(|w| &w[1])
        .collect();
    if ordered.len() < 5 {
        report.record("5", "global-bath insensitivity", false, format!("only {} interior ordered points", ordered.len()), t);
        return;
    }
    let picks: Vec<&SweepRow> = (0..5).map(|i| ordered[i * (ordered.len() - 1) / 4]).collect();
    let with_global = base(0.35).with_gammas(0.1, 0.2);
    let spec = scan_spec(ModelKind::Dicke, with_global);
    let other: Vec<SweepRow> = picks.par_iter().map(|r| run_point(&spec, 0.35, r.xi)).collect();
    let mut worst = 0.0f64;
    let mut parts = Vec::new();
    for (a, b) in picks.iter().zip(&other) {
        let rel = (a.alpha_order_abs - b.alpha_order_abs).abs() / a.alpha_order_abs;
        worst = worst.max(rel);
        parts.push(format!("xi={:.2}: {:.5} vs {:.5}", a.xi, a.alpha_order_abs, b.alpha_order_abs));
    }
    report.record(
        "5",
        "global-bath insensitivity",
        worst < 0.05,
        format!("{}; max relative diff {:.2}% < 5%", parts.join("; "), 100.0 * worst),
        t,
    );
}

fn c6(report: &mut Report) {
    let t = Instant::now();
    let runs: Vec<(f64, f64, f64)> = [(0.35, 0.2), (0.35, 0.62), (0.8, 0.3)]
        .par_iter()
        .map(|&(g, xi)| {
            let p = base(g).with_gammas(0.0, 0.1).with_xi(xi);
            let init = ground_state(ModelKind::Dicke, &p.with_xi(0.0), Branch::Positive).unwrap();
            // RK4 does not conserve |m| exactly; its drift at T_e/1000 under
            // strong drive is ~1e-5 over this span
            let mut cfg = IntegrationConfig::default().with_t_end(2000.0 * PI);
            cfg.dt /= 4.0;
            let s = integrate(ModelKind::Dicke, DissipatorMode::Dressed, &p, &init, &cfg).unwrap().stats;
            (g, xi, (s.max_bloch_norm - 0.5).abs().max((s.min_bloch_norm - 0.5).abs()))
        })
        .collect();
    let worst = runs.iter().map(|r| r.2).fold(0.0, f64::max);
    let detail = runs.iter().map(|(g, xi, d)| format!("g={g} xi={xi}: {d:.1e}")).collect::<Vec<_>>().join("; ");
    report.record(
        "6",
        "global-bath Bloch-length conservation",
        worst < 1e-6,
        format!("max ||m|-1/2| over every step, dt=T_e/4000, 2000π: {detail}; < 1e-6"),
        t,
    );
}

fn c7(report: &mut Report, dicke: &[SweepRow]) {
    let t = Instant::now();
    let by_xi: HashMap<i64, PhaseLabel> = dicke.iter().map(|r| ((r.xi * 100.0).round() as i64, r.phase)).collect();
    let sample: Vec<i64> = (0..10).map(|k| 40 + 6 * k).collect();
    let half = base(0.35).with_kappa(0.05);
    let spec = scan_spec(ModelKind::Dicke, half);
    let scaled: Vec<PhaseLabel> = sample.par_iter().map(|&k| run_point(&spec, 0.35, k as f64 / 200.0).phase).collect();
    let mut mismatches = Vec::new();
    for (k, l) in sample.iter().zip(&scaled) {
        if by_xi[k] != *l {
            mismatches.push(format!("xi={:.2}: {} vs {}", *k as f64 / 100.0, by_xi[k], l));
        }
    }
    let labels: Vec<String> = sample.iter().map(|k| format!("{:.2}:{}", *k as f64 / 100.0, by_xi[k])).collect();
    report.record(
        "7",
        "xi/kappa scaling",
        mismatches.len() <= 1,
        format!("labels {} ; {} mismatch(es) {:?} (<= 1 allowed)", labels.join(" "), mismatches.len(), mismatches),
        t,
    );
}

fn random_state(rng: &mut rand::rngs::StdRng) -> MeanFieldState {
    let alpha = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
    let r: f64 = rng.gen_range(0.0..0.5);
    let theta: f64 = rng.gen_range(0.0..PI);
    let phi: f64 = rng.gen_range(0.0..TAU);
    let m = [r * theta.sin() * phi.cos(), r * theta.sin() * phi.sin(), r * theta.cos()];
    MeanFieldState::new(alpha, AtomState::from_bloch(m).unwrap(), rng.gen_range(0.0..TAU))
}

fn z2_derivative(d: &StateVector) -> StateVector {
    let mut rho = d.rho;
    rho.m[0][1] = -rho.m[0][1];
    rho.m[1][0] = -rho.m[1][0];
    StateVector { alpha: -d.alpha, rho }
}

fn derivative_gap(a: &StateVector, b: &StateVector) -> f64 {
    let mut gap = (a.alpha - b.alpha).norm();
    for i in 0..2 {
        for j in 0..2 {
            gap = gap.max((a.rho.m[i][j] - b.rho.m[i][j]).norm());
        }
    }
    gap
}

fn series_oracle(num: i64, den: i64) -> f64 {
    let x = BigRational::new(BigInt::from(num), BigInt::from(den));
    let q = &x * &x / BigRational::from_integer(BigInt::from(4));
    let mut term = BigRational::from_integer(BigInt::from(1));
    let mut sum = term.clone();
    for k in 1..160i64 {
        term = -term * &q / BigRational::from_integer(BigInt::from(k * k));
        sum += &term;
    }
    sum.to_f64().unwrap()
}

fn c8(report: &mut Report) {
    let t = Instant::now();
    let mut notes = Vec::new();
    let mut pass = true;

    // density-matrix bounds along driven runs
    let bound_runs: Vec<_> = [(ModelKind::Dicke, DissipatorMode::Dressed), (ModelKind::Dicke, DissipatorMode::Bare), (ModelKind::TavisCummings, DissipatorMode::Dressed)]
        .par_iter()
        .map(|&(model, mode)| {
            let p = base(0.6).with_xi(0.62).with_gammas(0.1, 0.1);
            let init = ground_state(model, &p.with_xi(0.0), Branch::Positive).unwrap();
            let cfg = IntegrationConfig::default().with_t_end(200.0 * PI);
            let traj = integrate(model, mode, &p, &init, &cfg).unwrap();
            traj.stats
        })
        .collect();
    let trace_dev = bound_runs.iter().map(|s| s.max_trace_deviation).fold(0.0, f64::max);
    let min_eig = bound_runs.iter().map(|s| s.min_eigenvalue).fold(f64::INFINITY, f64::min);
    let max_norm = bound_runs.iter().map(|s| s.max_bloch_norm).fold(0.0, f64::max);
    let ok = trace_dev < 1e-12 && min_eig > -1e-12 && max_norm < 0.5 + 1e-12;
    pass &= ok;
    notes.push(format!("trace dev {trace_dev:.1e}, min eig {min_eig:.1e}, max |m| - 1/2 {:.1e}", max_norm - 0.5));

    // every derivative is Hermitian and traceless
    let mut rng = rand::rngs::StdRng::seed_from_u64(20);
    let mut herm = 0.0f64;
    for _ in 0..100 {
        let s = random_state(&mut rng);
        for model in [ModelKind::Dicke, ModelKind::TavisCummings] {
            for mode in [DissipatorMode::Dressed, DissipatorMode::Bare] {
                let d = rhs(model, mode, &base(0.7).with_xi(0.3).with_gammas(0.1, 0.2), &s).unwrap().rho;
                herm = herm.max((d.m[0][1] - d.m[1][0].conj()).norm());
                herm = herm.max(d.m[0][0].im.abs()).max(d.m[1][1].im.abs());
                herm = herm.max((d.m[0][0] + d.m[1][1]).norm());
            }
        }
    }
    pass &= herm < 1e-13;
    notes.push(format!("derivative anti-Hermitian/trace part {herm:.1e}"));

    // RK4 step halving
    let halving: Vec<f64> = [(0.3, 0.05), (0.6, 0.0), (0.8, 0.0), (1.0, 0.0), (0.35, 0.62)]
        .par_iter()
        .map(|&(g, xi)| {
            let p = base(g).with_xi(xi);
            let init = MeanFieldState::vacuum().perturbed(1e-3);
            let mut cfg = IntegrationConfig::default().with_t_end(50.0 * TAU);
            let fine = |cfg: &IntegrationConfig| {
                let traj = integrate(ModelKind::Dicke, DissipatorMode::Dressed, &p, &init, cfg).unwrap();
                let s = *traj.last().unwrap();
                (s.alpha, s.m)
            };
            let (a1, m1) = fine(&cfg);
            cfg.dt /= 2.0;
            let (a2, m2) = fine(&cfg);
            (a1 - a2).norm().max((0..3).map(|i| (m1[i] - m2[i]).abs()).fold(0.0, f64::max))
        })
        .collect();
    let worst_halving = halving.iter().cloned().fold(0.0, f64::max);
    pass &= worst_halving < 1e-6;
    notes.push(format!("dt-halving gap {worst_halving:.1e}"));

    // Z2 equivariance, undriven and with a half-period time shift when driven
    let mut z2 = 0.0f64;
    for _ in 0..100 {
        let s = random_state(&mut rng);
        for mode in [DissipatorMode::Dressed, DissipatorMode::Bare] {
            for xi in [0.0, 0.4] {
                let p = base(0.7).with_xi(xi).with_gammas(0.1, 0.2);
                let mut mapped = z2_map(&s);
                mapped.t += PI;
                let lhs = rhs(ModelKind::Dicke, mode, &p, &mapped).unwrap();
                let rhs_ = z2_derivative(&rhs(ModelKind::Dicke, mode, &p, &s).unwrap());
                z2 = z2.max(derivative_gap(&lhs, &rhs_));
            }
        }
    }
    pass &= z2 < 1e-12;
    notes.push(format!("Z2 gap {z2:.1e}"));

    // J0 against the exact rational power series on [0, 20]
    let mut bessel = 0.0f64;
    for k in 0..=160i64 {
        let x = k as f64 / 8.0;
        bessel = bessel.max((bessel_j0(x).unwrap() - series_oracle(k, 8)).abs());
    }
    pass &= bessel < 1e-12;
    notes.push(format!("J0 series gap {bessel:.1e}"));

    // sweep output across worker counts
    let dir = tempfile::tempdir().unwrap();
    let mut spec = GridSpec::new(ModelKind::Dicke, (0.3, 0.9, 3), (0.0, 0.6, 3));
    spec.integration = IntegrationConfig::default().with_t_end(60.0 * TAU).with_discard(0.5);
    let mut bytes = Vec::new();
    for workers in [1, 2, 8] {
        let path = dir.path().join(format!("w{workers}.csv"));
        run_sweep(&spec, &path, false, workers, |_, _, _| {}).unwrap();
        bytes.push(std::fs::read(&path).unwrap());
    }
    let same = bytes.windows(2).all(|w| w[0] == w[1]);
    let complete = String::from_utf8(bytes[0].clone())
        .unwrap()
        .lines()
        .skip(1)
        .filter(|l| SweepRow::parse_csv(l).map(|r| r.status == RowStatus::Ok).unwrap_or(false))
        .count()
        == 9;
    pass &= same && complete;
    notes.push(format!("sweep 1/2/8 workers byte-identical: {same}"));

    report.record("8", "invariant suite", pass, notes.join("; "), t);
}

fn main() {
    let mut report = Report { failures: 0 };
    c1(&mut report);
    c2(&mut report);
    let t = Instant::now();
    let xis = scan_xis();
    let dicke = scan(ModelKind::Dicke, base(0.35), &xis);
    let tc = scan(ModelKind::TavisCummings, base(0.35), &xis);
    println!("# scans over {} drive amplitudes finished in {:.1}s", xis.len(), t.elapsed().as_secs_f64());
    c3(&mut report, &dicke);
    c4(&mut report, &tc);
    c5(&mut report, &dicke);
    c6(&mut report);
    c7(&mut report, &dicke);
    c8(&mut report);
    println!("{} of 8 criteria passed", 8 - report.failures);
    if report.failures > 0 {
        std::process::exit(1);
    }
}
