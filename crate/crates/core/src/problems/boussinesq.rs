//! Linearised compressible Boussinesq equations in a periodic channel:
//!
//! ```text
//! u_t + U u_x + p_x = 0
//! w_t + U w_x + p_z = b
//! b_t + U b_x + N² w = 0
//! p_t + U p_x + c² (u_x + w_z) = 0
//! ```
//!
//! Acoustic and gravity terms are fast (implicit), advection is slow
//! (explicit). The grid stores both wall rows; `w` vanishes on them.

use super::acoustic::ProblemError;
use super::stencil::{fd_weights, Stencil1D};
use crate::linalg::{gmres_solve, FnOperator, GmresConfig};
use crate::sdc::{ImplicitSolve, LinearSplitSystem, SolveError, SplitSystem};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Field {
    U = 0,
    W = 1,
    B = 2,
    P = 3,
}

impl Field {
    pub const ALL: [Field; 4] = [Field::U, Field::W, Field::B, Field::P];

    pub fn name(self) -> &'static str {
        match self {
            Field::U => "u",
            Field::W => "w",
            Field::B => "b",
            Field::P => "p",
        }
    }
}

/// Closure of the vertical centered stencils at the walls.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum WallTreatment {
    /// Ghost rows mirror the interior: `w` odd, `u`, `b`, `p` even.
    #[default]
    Reflect,
    /// Fourth-order one-sided stencils near the walls.
    OneSided,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BoussinesqParams {
    /// Background wind U (m/s).
    pub u_adv: f64,
    /// Sound speed (m/s).
    pub c_s: f64,
    /// Buoyancy frequency N (1/s).
    pub n_buoy: f64,
    /// Channel length (m).
    pub lx: f64,
    /// Channel height (m).
    pub lz: f64,
    /// Left end of the periodic x-range (m).
    pub x_min: f64,
    /// Periodic columns.
    pub nx: usize,
    /// Rows strictly between the walls.
    pub nz: usize,
    pub wall: WallTreatment,
}

impl Default for BoussinesqParams {
    fn default() -> Self {
        Self {
            u_adv: 20.0,
            c_s: 300.0,
            n_buoy: 0.01,
            lx: 300e3,
            lz: 10e3,
            x_min: -150e3,
            nx: 300,
            nz: 30,
            wall: WallTreatment::Reflect,
        }
    }
}

impl BoussinesqParams {
    /// The reduced grid used for quick checks.
    pub fn smoke() -> Self {
        Self { nx: 150, nz: 15, ..Self::default() }
    }

    pub fn dx(&self) -> f64 {
        self.lx / self.nx as f64
    }

    pub fn dz(&self) -> f64 {
        self.lz / (self.nz + 1) as f64
    }

    /// Stored rows including both walls.
    pub fn rows(&self) -> usize {
        self.nz + 2
    }

    pub fn x(&self) -> Vec<f64> {
        (0..self.nx).map(|i| self.x_min + i as f64 * self.dx()).collect()
    }

    pub fn z(&self) -> Vec<f64> {
        let dz = self.dz();
        (0..self.rows())
            .map(|j| if j + 1 == self.rows() { self.lz } else { j as f64 * dz })
            .collect()
    }

    /// Acoustic CFL numbers `(c Δt/Δx, c Δt/Δz)` and the advective one `U Δt/Δx`.
    pub fn cfl(&self, dt: f64) -> (f64, f64, f64) {
        (self.c_s * dt / self.dx(), self.c_s * dt / self.dz(), self.u_adv * dt / self.dx())
    }

    fn validate(&self) -> Result<(), ProblemError> {
        if !(self.c_s > 0.0 && self.n_buoy >= 0.0 && self.lx > 0.0 && self.lz > 0.0) {
            return Err(ProblemError::InvalidParameter("c_s, lx, lz must be positive and N non-negative"));
        }
        if self.nx < 7 {
            return Err(ProblemError::GridTooSmall { points: self.nx, needed: 7 });
        }
        if self.nz < 3 {
            return Err(ProblemError::GridTooSmall { points: self.nz, needed: 3 });
        }
        Ok(())
    }
}

/// `(row, weight)` lists of one vertical derivative per output row.
type RowStencils = Vec<Vec<(usize, f64)>>;

#[derive(Debug, Clone)]
pub struct Boussinesq {
    pub params: BoussinesqParams,
    centered: Stencil1D,
    upwind: Stencil1D,
    vertical_even: RowStencils,
    vertical_odd: RowStencils,
    pub gmres: GmresConfig,
}

impl Boussinesq {
    pub fn new(params: BoussinesqParams) -> Result<Self, ProblemError> {
        params.validate()?;
        let centered = Stencil1D::centered(4).expect("fourth-order centered stencil exists");
        let upwind = Stencil1D::upwind(5, params.u_adv).expect("fifth-order upwind stencil exists");
        let rows = params.rows();
        let (vertical_even, vertical_odd) = match params.wall {
            WallTreatment::Reflect => (
                reflected_rows(&centered, rows, 1.0),
                reflected_rows(&centered, rows, -1.0),
            ),
            WallTreatment::OneSided => {
                let s = one_sided_rows(&centered, rows);
                (s.clone(), s)
            }
        };
        Ok(Self { params, centered, upwind, vertical_even, vertical_odd, gmres: GmresConfig::default() })
    }

    pub fn with_gmres(mut self, gmres: GmresConfig) -> Self {
        self.gmres = gmres;
        self
    }

    fn plane(&self) -> usize {
        self.params.nx * self.params.rows()
    }

    pub fn index(&self, field: Field, i: usize, j: usize) -> usize {
        field as usize * self.plane() + j * self.params.nx + i
    }

    pub fn field<'a>(&self, state: &'a [f64], field: Field) -> &'a [f64] {
        let n = self.plane();
        &state[field as usize * n..(field as usize + 1) * n]
    }

    fn zero_wall_w(&self, out: &mut [f64]) {
        let nx = self.params.nx;
        let last = self.params.rows() - 1;
        let w = self.plane();
        out[w..w + nx].fill(0.0);
        out[w + last * nx..w + (last + 1) * nx].fill(0.0);
    }

    /// `out_row += scale/dx · D f_row` for every row of a field plane.
    fn add_dx(&self, stencil: &Stencil1D, f: &[f64], scale: f64, out: &mut [f64]) {
        let nx = self.params.nx;
        let dx = self.params.dx();
        out.par_chunks_mut(nx)
            .zip(f.par_chunks(nx))
            .for_each(|(o, row)| stencil.apply_periodic(row, dx, scale, o));
    }

    fn add_dz(&self, stencils: &RowStencils, f: &[f64], scale: f64, out: &mut [f64]) {
        let nx = self.params.nx;
        let factor = scale / self.params.dz();
        out.par_chunks_mut(nx).enumerate().for_each(|(j, o)| {
            for &(row, w) in &stencils[j] {
                let src = &f[row * nx..(row + 1) * nx];
                let c = factor * w;
                for (oi, si) in o.iter_mut().zip(src) {
                    *oi += c * si;
                }
            }
        });
    }

    fn apply_fast(&self, x: &[f64], out: &mut [f64]) {
        let n = self.plane();
        let c2 = self.params.c_s * self.params.c_s;
        let n2 = self.params.n_buoy * self.params.n_buoy;
        let (u, rest) = x.split_at(n);
        let (w, rest) = rest.split_at(n);
        let (b, p) = rest.split_at(n);
        let (du, rest) = out.split_at_mut(n);
        let (dw, rest) = rest.split_at_mut(n);
        let (db, dp) = rest.split_at_mut(n);
        du.fill(0.0);
        self.add_dx(&self.centered, p, -1.0, du);
        dw.copy_from_slice(b);
        self.add_dz(&self.vertical_even, p, -1.0, dw);
        for (d, wi) in db.iter_mut().zip(w) {
            *d = -n2 * wi;
        }
        dp.fill(0.0);
        self.add_dx(&self.centered, u, -c2, dp);
        self.add_dz(&self.vertical_odd, w, -c2, dp);
        self.zero_wall_w(out);
    }

    /// Horizontal-only advection, so no wall closure is involved.
    fn apply_slow(&self, x: &[f64], out: &mut [f64]) {
        let n = self.plane();
        out.fill(0.0);
        for (f, o) in x.chunks(n).zip(out.chunks_mut(n)) {
            self.add_dx(&self.upwind, f, -self.params.u_adv, o);
        }
        self.zero_wall_w(out);
    }
}

fn reflected_rows(stencil: &Stencil1D, rows: usize, parity: f64) -> RowStencils {
    let last = (rows - 1) as i64;
    (0..rows as i64)
        .map(|j| {
            let mut acc: Vec<(usize, f64)> = Vec::new();
            for (&k, &w) in stencil.offsets.iter().zip(&stencil.weights) {
                let mut jj = j + k as i64;
                let mut sign = 1.0;
                if jj < 0 {
                    jj = -jj;
                    sign = parity;
                } else if jj > last {
                    jj = 2 * last - jj;
                    sign = parity;
                }
                push_weight(&mut acc, jj as usize, sign * w);
            }
            acc
        })
        .collect()
}

fn one_sided_rows(stencil: &Stencil1D, rows: usize) -> RowStencils {
    let reach = stencil.reach() as i64;
    let width = stencil.offsets.len() as i64;
    let last = (rows - 1) as i64;
    (0..rows as i64)
        .map(|j| {
            let lo = (j - reach).clamp(0, last + 1 - width) - j;
            let offsets: Vec<i32> = (lo..lo + width).map(|o| o as i32).collect();
            let weights = fd_weights(&offsets, 1).expect("distinct offsets");
            offsets
                .iter()
                .zip(weights)
                .map(|(&o, w)| ((j + o as i64) as usize, w))
                .collect()
        })
        .collect()
}

fn push_weight(acc: &mut Vec<(usize, f64)>, row: usize, w: f64) {
    match acc.iter_mut().find(|(r, _)| *r == row) {
        Some(entry) => entry.1 += w,
        None => acc.push((row, w)),
    }
}

impl SplitSystem<f64> for Boussinesq {
    fn dimension(&self) -> usize {
        4 * self.plane()
    }

    fn eval_fast(&self, u: &[f64], out: &mut [f64]) {
        self.apply_fast(u, out);
    }

    fn eval_slow(&self, u: &[f64], out: &mut [f64]) {
        self.apply_slow(u, out);
    }

    fn solve_implicit(
        &self,
        alpha: f64,
        rhs: &[f64],
        guess: &[f64],
        tol: f64,
    ) -> Result<ImplicitSolve<f64>, SolveError> {
        if alpha == 0.0 {
            return Ok(ImplicitSolve { solution: rhs.to_vec(), iterations: 0 });
        }
        let op = FnOperator::new(self.dimension(), |x: &[f64], y: &mut [f64]| {
            self.apply_fast(x, y);
            for (yi, xi) in y.iter_mut().zip(x) {
                *yi = xi - alpha * *yi;
            }
        });
        let out = gmres_solve(&op, rhs, guess, &self.gmres.with_tolerance(tol))?;
        let mut solution = out.solution;
        self.zero_wall_w(&mut solution);
        Ok(ImplicitSolve { solution, iterations: out.iterations })
    }
}

impl LinearSplitSystem<f64> for Boussinesq {}

/// Buoyancy bubble parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GravityWaveBubble {
    pub amplitude: f64,
    pub height: f64,
    pub half_width: f64,
    pub center: f64,
}

impl Default for GravityWaveBubble {
    fn default() -> Self {
        Self { amplitude: 0.01, height: 10e3, half_width: 5e3, center: -50e3 }
    }
}

impl GravityWaveBubble {
    pub fn buoyancy(&self, x: f64, z: f64) -> f64 {
        let d = (x - self.center) / self.half_width;
        self.amplitude * (PI * z / self.height).sin() / (1.0 + d * d)
    }
}

/// `u = w = p = 0` and the bubble in `b`.
pub fn gravity_wave_initial_data(sys: &Boussinesq, bubble: &GravityWaveBubble) -> Vec<f64> {
    let p = &sys.params;
    let mut state = vec![0.0; sys.dimension()];
    let (xs, zs) = (p.x(), p.z());
    for (j, &z) in zs.iter().enumerate() {
        for (i, &x) in xs.iter().enumerate() {
            state[sys.index(Field::B, i, j)] = bubble.buoyancy(x, z);
        }
    }
    state
}

/// `b` at height `z` by linear interpolation between rows.
pub fn buoyancy_cross_section(sys: &Boussinesq, state: &[f64], z: f64) -> Vec<f64> {
    let p = &sys.params;
    let pos = (z / p.dz()).clamp(0.0, (p.rows() - 1) as f64);
    let j0 = (pos.floor() as usize).min(p.rows() - 2);
    let t = pos - j0 as f64;
    (0..p.nx)
        .map(|i| {
            let a = state[sys.index(Field::B, i, j0)];
            let b = state[sys.index(Field::B, i, j0 + 1)];
            (1.0 - t) * a + t * b
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> Boussinesq {
        Boussinesq::new(BoussinesqParams { nx: 24, nz: 8, ..BoussinesqParams::default() }).unwrap()
    }

    #[test]
    fn zero_state_has_zero_tendency() {
        let sys = small();
        let x = vec![0.0; sys.dimension()];
        let mut f = vec![1.0; sys.dimension()];
        sys.eval_fast(&x, &mut f);
        assert!(f.iter().all(|&v| v == 0.0));
        sys.eval_slow(&x, &mut f);
        assert!(f.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn constant_buoyancy_drives_only_w() {
        let sys = small();
        let mut x = vec![0.0; sys.dimension()];
        let n = sys.plane();
        x[2 * n..3 * n].fill(0.3);
        let mut f = vec![0.0; sys.dimension()];
        sys.eval_fast(&x, &mut f);
        let rows = sys.params.rows();
        for j in 0..rows {
            for i in 0..sys.params.nx {
                let dw = f[sys.index(Field::W, i, j)];
                let expect = if j == 0 || j == rows - 1 { 0.0 } else { 0.3 };
                assert!((dw - expect).abs() < 1e-15);
                assert_eq!(f[sys.index(Field::U, i, j)], 0.0);
                assert_eq!(f[sys.index(Field::B, i, j)], 0.0);
                assert_eq!(f[sys.index(Field::P, i, j)], 0.0);
            }
        }
    }

    #[test]
    fn grid_spacing_counts_interior_rows() {
        let p = BoussinesqParams::default();
        assert_eq!(p.rows(), 32);
        assert!((p.dz() - 10e3 / 31.0).abs() < 1e-9);
        assert_eq!(*p.z().last().unwrap(), 10e3);
        let (cx, cz, cu) = p.cfl(30.0);
        assert!((cx - 9.0).abs() < 1e-12 && (cu - 0.6).abs() < 1e-12);
        assert!((cz - 27.9).abs() < 1e-12);
    }

    #[test]
    fn reflected_stencil_is_exact_for_even_and_odd_profiles() {
        let sys = small();
        let p = &sys.params;
        let n = sys.plane();
        let zs = p.z();
        let lz = p.lz;
        // cos(πz/H) is even about both walls, sin(πz/H) odd
        let mut x = vec![0.0; sys.dimension()];
        for (j, &z) in zs.iter().enumerate() {
            for i in 0..p.nx {
                x[sys.index(Field::P, i, j)] = (PI * z / lz).cos();
                x[sys.index(Field::W, i, j)] = (PI * z / lz).sin();
            }
        }
        let mut dz_p = vec![0.0; n];
        sys.add_dz(&sys.vertical_even, &x[3 * n..], 1.0, &mut dz_p);
        let mut dz_w = vec![0.0; n];
        sys.add_dz(&sys.vertical_odd, &x[n..2 * n], 1.0, &mut dz_w);
        let k = PI / lz;
        let h = p.dz();
        // fourth-order symbol error bound
        let tol = 0.05 * k.powi(5) * h.powi(4);
        for (j, &z) in zs.iter().enumerate() {
            assert!((dz_p[j * p.nx] + k * (k * z).sin()).abs() < tol, "row {j}");
            assert!((dz_w[j * p.nx] - k * (k * z).cos()).abs() < tol, "row {j}");
        }
    }

    #[test]
    fn one_sided_rows_stay_inside() {
        let st = Stencil1D::centered(4).unwrap();
        let rows = one_sided_rows(&st, 10);
        for r in &rows {
            assert!(r.iter().all(|&(row, _)| row < 10));
            assert!(r.iter().map(|(_, w)| w).sum::<f64>().abs() < 1e-12);
        }
        let sys = Boussinesq::new(BoussinesqParams { nx: 24, nz: 8, wall: WallTreatment::OneSided, ..BoussinesqParams::default() }).unwrap();
        // linear pressure in z is differentiated exactly
        let mut x = vec![0.0; sys.dimension()];
        let zs = sys.params.z();
        for (j, &z) in zs.iter().enumerate() {
            for i in 0..sys.params.nx {
                x[sys.index(Field::P, i, j)] = 2.0 * z;
            }
        }
        let mut f = vec![0.0; sys.dimension()];
        sys.eval_fast(&x, &mut f);
        for j in 1..zs.len() - 1 {
            assert!((f[sys.index(Field::W, 0, j)] + 2.0).abs() < 1e-9);
        }
    }

    #[test]
    fn horizontal_mode_matches_acoustic_symbol() {
        // with w = b = 0 and fields constant in z, the fast operator is the
        // 1-D acoustic operator in x (unit sound speed in the u equation)
        let sys = small();
        let p = &sys.params;
        let kappa = 2.0 * PI * 2.0 / p.lx;
        let mut x = vec![0.0; sys.dimension()];
        for j in 0..p.rows() {
            for (i, &xi) in p.x().iter().enumerate() {
                x[sys.index(Field::U, i, j)] = (kappa * xi).cos();
            }
        }
        let mut f = vec![0.0; sys.dimension()];
        sys.eval_fast(&x, &mut f);
        let sym = Stencil1D::centered(4).unwrap().symbol(kappa * p.dx()) / p.dx();
        let c2 = p.c_s * p.c_s;
        for j in 0..p.rows() {
            for (i, &xi) in p.x().iter().enumerate() {
                // d/dx cos(κx) → Re(sym · e^{iκx})
                let d = (sym * num_complex::Complex64::from_polar(1.0, kappa * xi)).re;
                assert!((f[sys.index(Field::P, i, j)] + c2 * d).abs() < 1e-9 * c2 * kappa);
            }
        }
    }

    #[test]
    fn implicit_solve_keeps_walls_still() {
        let sys = small();
        let bubble = GravityWaveBubble { center: 0.0, ..GravityWaveBubble::default() };
        let rhs = gravity_wave_initial_data(&sys, &bubble);
        let out = sys.solve_implicit(30.0, &rhs, &rhs, 1e-10).unwrap();
        let nx = sys.params.nx;
        let last = sys.params.rows() - 1;
        for i in 0..nx {
            assert_eq!(out.solution[sys.index(Field::W, i, 0)], 0.0);
            assert_eq!(out.solution[sys.index(Field::W, i, last)], 0.0);
        }
    }

    #[test]
    fn bubble_shape() {
        let b = GravityWaveBubble::default();
        assert_eq!(b.buoyancy(-50e3, 0.0), 0.0);
        assert!(b.buoyancy(-50e3, 10e3).abs() < 1e-17);
        assert!((b.buoyancy(-50e3, 5e3) - 0.01).abs() < 1e-15);
        assert!((b.buoyancy(-45e3, 5e3) - 0.005).abs() < 1e-15);
    }

    #[test]
    fn cross_section_interpolates() {
        let sys = small();
        let state = gravity_wave_initial_data(&sys, &GravityWaveBubble::default());
        let section = buoyancy_cross_section(&sys, &state, 5e3);
        let xs = sys.params.x();
        // linear interpolation error h²/8 · max|∂²b/∂z²|
        let k = PI / sys.params.lz;
        let bound = sys.params.dz().powi(2) / 8.0 * k * k * 0.01;
        for (s, &x) in section.iter().zip(&xs) {
            let exact = GravityWaveBubble::default().buoyancy(x, 5e3);
            assert!((s - exact).abs() <= bound * (1.0 + 1e-9));
        }
    }
}
