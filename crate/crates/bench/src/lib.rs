//! Fixtures shared by the benchmarks.

use fwsw::problems::{gravity_wave_initial_data, multiscale_initial_data, GravityWaveBubble, MultiscalePart};
use fwsw::{AcousticAdvection, Boussinesq, BoussinesqParams, GmresConfig};

pub fn acoustic(points: usize) -> (AcousticAdvection, Vec<f64>) {
    let gmres = GmresConfig { tolerance: 1e-10, restart: 50, max_iters: 10_000 };
    let sys = AcousticAdvection::new(points, 0.05, 1.0).expect("valid grid").with_gmres(gmres);
    (sys, multiscale_initial_data(points, MultiscalePart::Both))
}

/// Half-resolution gravity wave channel and its initial state.
pub fn gravity_waves() -> (Boussinesq, Vec<f64>) {
    let params = BoussinesqParams { nx: 150, nz: 15, ..Default::default() };
    let sys = Boussinesq::new(params).expect("valid grid");
    let u0 = gravity_wave_initial_data(&sys, &GravityWaveBubble::default());
    (sys, u0)
}
