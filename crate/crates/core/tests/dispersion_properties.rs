use fwsw::dispersion::{
    build_update_matrix, sweep_curve, DispersionCurve, DispersionScheme, SpatialSymbol, WaveParams,
};
use fwsw::quadrature::QuadratureRule;
use num_complex::Complex64;
use std::f64::consts::PI;

fn grid(n: usize, max: f64) -> Vec<f64> {
    (1..=n).map(|i| max * i as f64 / n as f64).collect()
}

fn sdc(m: usize, k: usize) -> DispersionScheme {
    DispersionScheme::FwswSdc { rule: QuadratureRule::radau(m), sweeps: k }
}

fn curve(base: &WaveParams, kappas: &[f64], scheme: &DispersionScheme) -> DispersionCurve {
    sweep_curve(base, kappas, scheme).unwrap()
}

#[test]
fn long_waves_travel_at_continuous_speeds() {
    let base = WaveParams::new(0.05, 1.0, 0.0, 1.0);
    let kappas: Vec<f64> = (1..=128).map(|i| 1e-4 * i as f64 / 128.0).collect();
    for scheme in [sdc(3, 3), sdc(3, 5), DispersionScheme::Midpoint, DispersionScheme::Bdf2] {
        let c = curve(&base, &kappas, &scheme);
        assert!(((c.phase_speed(0, 0) - 1.05) / 1.05).abs() < 1e-6);
        assert!(((c.phase_speed(1, 0) + 0.95) / 0.95).abs() < 1e-6);
    }
}

#[test]
fn roots_solve_the_determinant_everywhere() {
    let base = WaveParams::new(0.05, 1.0, 0.0, 1.0);
    let rule = QuadratureRule::radau(3);
    for kappa in grid(128, PI / 2.0) {
        let p = WaveParams { kappa, ..base };
        let z = build_update_matrix(&p, &rule, 3).unwrap();
        let c = curve(&base, &[kappa], &sdc(3, 3));
        for b in 0..2 {
            let r = c.roots[b][0];
            let det = (z[(0, 0)] - r) * (z[(1, 1)] - r) - z[(0, 1)] * z[(1, 0)];
            assert!(det.norm() < 1e-10);
            // z = e^{-iωΔt}
            assert!(((Complex64::new(0.0, -1.0) * c.omega[b][0] * base.dt).exp() - r).norm() < 1e-12);
        }
    }
}

#[test]
fn standing_sound_waves_mirror() {
    let base = WaveParams::new(0.0, 1.0, 0.0, 0.5);
    let kappas = grid(200, 2.0);
    let c = curve(&base, &kappas, &sdc(3, 4));
    for i in 0..kappas.len() {
        assert!((c.omega[1][i] + c.omega[0][i].conj()).norm() < 1e-10);
    }
}

#[test]
fn converged_sdc_matches_exponential_for_small_steps() {
    let base = WaveParams::new(0.0, 1.0, 0.0, 0.01);
    let rule = QuadratureRule::radau(3);
    for kappa in [0.5, 1.0, 2.0] {
        let z = build_update_matrix(&WaveParams { kappa, ..base }, &rule, 20).unwrap();
        let c = curve(&base, &[kappa], &sdc(3, 20));
        for b in 0..2 {
            assert!(c.amplification(b, 0) <= 1.0 + 1e-12);
        }
        let expect = (Complex64::new(0.0, -kappa * 0.01)).exp();
        let tr = z[(0, 0)] + z[(1, 1)];
        assert!((tr - (expect + expect.conj())).norm() < 1e-10);
    }
}

#[test]
fn sdc_damps_short_waves_slightly() {
    let base = WaveParams::new(0.05, 1.0, 0.0, 1.0);
    let kappas = grid(256, PI / 2.0);
    let c = curve(&base, &kappas, &sdc(3, 3));
    for i in 0..kappas.len() {
        for b in 0..2 {
            assert!(c.amplification(b, i) <= 1.0 + 1e-10, "κ={} b={b}", kappas[i]);
        }
    }
    let last = kappas.len() - 1;
    assert!(c.amplification(0, last) < 1.0 && c.amplification(1, last) < 1.0);
    assert!(c.wrapped.is_empty() && c.ambiguous.is_empty());
}

#[test]
fn more_sweeps_reduce_phase_error() {
    let base = WaveParams::new(0.05, 1.0, 0.0, 1.0);
    let kappas = grid(256, PI / 2.0);
    let e3 = curve(&base, &kappas, &sdc(3, 3)).max_phase_error(&base, 0..kappas.len());
    let e5 = curve(&base, &kappas, &sdc(3, 5)).max_phase_error(&base, 0..kappas.len());
    assert!(e5 <= e3, "K=5 {e5} vs K=3 {e3}");
}

#[test]
fn bdf2_damps_and_midpoint_does_not() {
    let base = WaveParams::new(0.05, 1.0, 0.0, 1.0);
    let kappas = grid(128, PI / 2.0);
    let bdf = curve(&base, &kappas, &DispersionScheme::Bdf2);
    let mid = curve(&base, &kappas, &DispersionScheme::Midpoint);
    let last = kappas.len() - 1;
    assert!(bdf.amplification(0, last) < 0.9);
    assert!((mid.amplification(0, last) - 1.0).abs() < 1e-12);
}

#[test]
fn finite_difference_symbol_slows_short_waves() {
    let dx = 0.1;
    let fd = WaveParams { symbol: SpatialSymbol::CenteredFd { order: 2, dx }, ..WaveParams::new(0.0, 1.0, 0.0, 0.01) };
    let exact = WaveParams::new(0.0, 1.0, 0.0, 0.01);
    let kappas = grid(64, 20.0);
    let a = curve(&fd, &kappas, &DispersionScheme::Midpoint);
    let b = curve(&exact, &kappas, &DispersionScheme::Midpoint);
    let last = kappas.len() - 1;
    assert!(a.phase_speed(0, last) < b.phase_speed(0, last));
    // the 2nd-order symbol is i sin(κΔx)/Δx
    let s = fd.ikappa().unwrap();
    assert_eq!(s, Complex64::new(0.0, 0.0));
    let s = WaveParams { kappa: 3.0, ..fd }.ikappa().unwrap();
    assert!((s.im - (0.3f64).sin() / dx).abs() < 1e-12);
}
