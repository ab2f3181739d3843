//! Scans the drive amplitude at fixed coupling and prints the order
//! parameters of each stationary state.
//!
//! `cargo run --release --example xi_scan -- [dicke|tc] g xi_min xi_max xi_step t_end_over_pi`

use std::time::Instant;

use dicke_mf::{
    analyze, ground_state, integrate, Branch, DissipatorMode, IntegrationConfig, ModelKind, SystemParams, Thresholds,
};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let num = |i: usize, d: f64| args.get(i).and_then(|s| s.parse().ok()).unwrap_or(d);
    let model = match args.first().map(String::as_str) {
        Some("tc") => ModelKind::TavisCummings,
        _ => ModelKind::Dicke,
    };
    let g = num(1, 0.35);
    let (lo, hi, step) = (num(2, 0.36), num(3, 1.0), num(4, 0.02));
    let t_end = num(5, 2000.0) * std::f64::consts::PI;
    let gamma_g = num(6, 0.0);
    let kappa = num(7, 0.1);
    let base = SystemParams::default().with_g(g).with_kappa(kappa).with_gammas(0.1, gamma_g);
    let cfg = IntegrationConfig::default().with_t_end(t_end);
    let n = ((hi - lo) / step).round() as usize;
    for k in 0..=n {
        let xi = lo + step * k as f64;
        let start = Instant::now();
        let init = ground_state(model, &base, Branch::Positive).unwrap();
        let p = base.with_xi(xi);
        match integrate(model, DissipatorMode::Dressed, &p, &init, &cfg)
            .and_then(|tr| analyze(&tr, &Thresholds::default()).map(|r| (r, tr.stats)))
        {
            Ok(((op, label), st)) => println!(
                "xi={xi:.3} |a|={:.5} a=({:+.5},{:+.5}) sigma={:.2e} {label:<12} mineig={:.1e} {:.2}s",
                op.alpha_order.norm(),
                op.alpha_order.re,
                op.alpha_order.im,
                op.sigma_alpha,
                st.min_eigenvalue,
                start.elapsed().as_secs_f64()
            ),
            Err(e) => println!("xi={xi:.3} error {e}"),
        }
    }
}
