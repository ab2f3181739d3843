//! Relaxes the undriven system from the exact superradiant state and prints
//! the late-time photon amplitude.
//!
//! `cargo run --release --example relax -- [dressed|bare] g rate t_end_over_pi`

use dicke_mf::{ground_state, integrate, Branch, DissipatorMode, IntegrationConfig, ModelKind, SystemParams};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let num = |i: usize, d: f64| args.get(i).and_then(|s| s.parse().ok()).unwrap_or(d);
    let mode = match args.first().map(String::as_str) {
        Some("bare") => DissipatorMode::Bare,
        _ => DissipatorMode::Dressed,
    };
    let (g, rate) = (num(1, 0.8), num(2, 0.1));
    let t_end = num(3, 10000.0) * std::f64::consts::PI;
    let p = SystemParams::default().with_g(g).with_kappa(rate).with_gammas(rate, 0.0);
    let init = ground_state(ModelKind::Dicke, &p, Branch::Positive).unwrap();
    let cfg = IntegrationConfig { sample_stride: 1000, ..IntegrationConfig::default().with_t_end(t_end) };
    let traj = integrate(ModelKind::Dicke, mode, &p, &init, &cfg).unwrap();
    let n = traj.samples.len();
    for s in traj.samples.iter().skip(n.saturating_sub(5)) {
        println!("t={:.1} |alpha|={:.8} alpha={:.6} m={:?}", s.t, s.alpha.norm(), s.alpha, s.m);
    }
    println!("exact {:.8}", init.alpha.norm());
}
