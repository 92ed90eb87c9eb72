//! Finite-difference derivative stencils on uniform grids.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StencilError {
    #[error("offset {0} appears more than once")]
    DuplicateOffset(i32),
    #[error("{points} points cannot resolve derivative order {order}")]
    TooFewPoints { points: usize, order: usize },
    #[error("no stencil of order {0} is available")]
    UnsupportedOrder(usize),
}

/// Weights of the derivative of order `derivative` at 0 from samples at
/// integer `offsets`, unit spacing. Fornberg's recursion.
pub fn fd_weights(offsets: &[i32], derivative: usize) -> Result<Vec<f64>, StencilError> {
    for (i, a) in offsets.iter().enumerate() {
        if offsets[..i].contains(a) {
            return Err(StencilError::DuplicateOffset(*a));
        }
    }
    let n = offsets.len();
    if n <= derivative {
        return Err(StencilError::TooFewPoints { points: n, order: derivative });
    }
    let x: Vec<f64> = offsets.iter().map(|&o| o as f64).collect();
    let md = derivative;
    // c[j][k]: weight of point j for derivative k
    let mut c = vec![vec![0.0; md + 1]; n];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = x[0];
    for i in 1..n {
        let mn = i.min(md);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = x[i];
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    Ok(c.into_iter().map(|row| row[md]).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StencilBias {
    Centered,
    /// Biased towards negative offsets, for transport in the +x direction.
    UpwindPositive,
    UpwindNegative,
}

/// First-derivative stencil.
#[derive(Debug, Clone, PartialEq)]
pub struct Stencil1D {
    pub offsets: Vec<i32>,
    pub weights: Vec<f64>,
    pub order: usize,
    pub bias: StencilBias,
}

impl Stencil1D {
    /// Centered first derivative of even `order`.
    pub fn centered(order: usize) -> Result<Self, StencilError> {
        if order == 0 || order % 2 == 1 {
            return Err(StencilError::UnsupportedOrder(order));
        }
        let h = (order / 2) as i32;
        let offsets: Vec<i32> = (-h..=h).collect();
        let weights = fd_weights(&offsets, 1)?;
        Ok(Self { offsets, weights, order, bias: StencilBias::Centered })
    }

    /// Odd-order upwind first derivative for transport speed of sign `sign(speed)`.
    pub fn upwind(order: usize, speed: f64) -> Result<Self, StencilError> {
        if order % 2 == 0 {
            return Err(StencilError::UnsupportedOrder(order));
        }
        let h = order.div_ceil(2) as i32;
        let (offsets, bias): (Vec<i32>, _) = if speed >= 0.0 {
            ((-h..h).collect(), StencilBias::UpwindPositive)
        } else {
            ((-h + 1..=h).collect(), StencilBias::UpwindNegative)
        };
        let weights = fd_weights(&offsets, 1)?;
        Ok(Self { offsets, weights, order, bias })
    }

    /// Largest absolute offset.
    pub fn reach(&self) -> usize {
        self.offsets.iter().map(|o| o.unsigned_abs() as usize).max().unwrap_or(0)
    }

    /// Fourier symbol per unit spacing: `Σ_k w_k e^{i k θ}` with θ = κΔx.
    pub fn symbol(&self, theta: f64) -> Complex64 {
        self.offsets
            .iter()
            .zip(&self.weights)
            .map(|(&o, &w)| Complex64::from_polar(w, o as f64 * theta))
            .sum()
    }

    /// `out[i] += scale/dx · Σ_k w_k u[i+k]` on a periodic grid.
    pub fn apply_periodic(&self, u: &[f64], dx: f64, scale: f64, out: &mut [f64]) {
        let n = u.len() as i64;
        let f = scale / dx;
        for (i, o) in out.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (&k, &w) in self.offsets.iter().zip(&self.weights) {
                acc += w * u[(i as i64 + k as i64).rem_euclid(n) as usize];
            }
            *o += f * acc;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close_all(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    /// Weights by solving the moment conditions Σ w_j x_j^k = k! δ_{k,d}.
    fn vandermonde_oracle(offsets: &[i32], d: usize) -> Vec<f64> {
        let n = offsets.len();
        let mut a: Vec<Vec<f64>> = (0..n)
            .map(|k| offsets.iter().map(|&o| (o as f64).powi(k as i32)).collect())
            .collect();
        let mut b: Vec<f64> = (0..n).map(|k| if k == d { (1..=d).product::<usize>() as f64 } else { 0.0 }).collect();
        for col in 0..n {
            let piv = (col..n).max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap()).unwrap();
            a.swap(col, piv);
            b.swap(col, piv);
            for r in 0..n {
                if r != col {
                    let f = a[r][col] / a[col][col];
                    for c in col..n {
                        a[r][c] -= f * a[col][c];
                    }
                    b[r] -= f * b[col];
                }
            }
        }
        (0..n).map(|i| b[i] / a[i][i]).collect()
    }

    #[test]
    fn second_order_centered() {
        assert!(close_all(&fd_weights(&[-1, 0, 1], 1).unwrap(), &[-0.5, 0.0, 0.5], 1e-15));
    }

    #[test]
    fn fourth_order_centered() {
        let w = fd_weights(&[-2, -1, 0, 1, 2], 1).unwrap();
        assert!(close_all(&w, &[1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0], 1e-14));
        assert!(close_all(&w, &vandermonde_oracle(&[-2, -1, 0, 1, 2], 1), 1e-12));
    }

    #[test]
    fn fifth_order_upwind_is_exact_on_quintics() {
        let offsets = [-3, -2, -1, 0, 1, 2];
        let w = fd_weights(&offsets, 1).unwrap();
        assert!(close_all(&w, &vandermonde_oracle(&offsets, 1), 1e-12));
        for p in 0..=5 {
            let d: f64 = offsets.iter().zip(&w).map(|(&o, wi)| wi * (o as f64).powi(p)).sum();
            let expect = if p == 1 { 1.0 } else { 0.0 };
            assert!((d - expect).abs() < 1e-10, "x^{p}: {d}");
        }
        assert_eq!(Stencil1D::upwind(5, 1.0).unwrap().offsets, offsets.to_vec());
        assert_eq!(Stencil1D::upwind(5, -1.0).unwrap().offsets, vec![-2, -1, 0, 1, 2, 3]);
    }

    #[test]
    fn second_derivative_weights() {
        assert!(close_all(&fd_weights(&[-1, 0, 1], 2).unwrap(), &[1.0, -2.0, 1.0], 1e-14));
    }

    #[test]
    fn errors() {
        assert_eq!(fd_weights(&[0, 1, 1], 1), Err(StencilError::DuplicateOffset(1)));
        assert!(matches!(fd_weights(&[0], 1), Err(StencilError::TooFewPoints { .. })));
        assert!(Stencil1D::centered(3).is_err());
        assert!(Stencil1D::upwind(4, 1.0).is_err());
    }

    #[test]
    fn weights_sum_to_zero_and_symbols_match() {
        for st in [
            Stencil1D::centered(2).unwrap(),
            Stencil1D::centered(4).unwrap(),
            Stencil1D::centered(6).unwrap(),
            Stencil1D::upwind(5, 1.0).unwrap(),
        ] {
            assert!(st.weights.iter().sum::<f64>().abs() < 1e-13);
            for k in 0..st.weights.len() {
                let exact = vandermonde_oracle(&st.offsets, 1)[k];
                assert!((st.weights[k] - exact).abs() < 1e-12);
            }
        }
        let c2 = Stencil1D::centered(2).unwrap();
        for &t in &[0.1, 0.7, 2.0] {
            let s = c2.symbol(t);
            assert!((s - Complex64::new(0.0, f64::sin(t))).norm() < 1e-12);
            let c4 = Stencil1D::centered(4).unwrap().symbol(t);
            let expect = (8.0 * t.sin() - (2.0 * t).sin()) / 6.0;
            assert!((c4 - Complex64::new(0.0, expect)).norm() < 1e-12);
        }
    }

    #[test]
    fn periodic_application_matches_symbol() {
        let n = 32;
        let dx = 1.0 / n as f64;
        let kappa = 2.0 * std::f64::consts::PI * 3.0;
        let st = Stencil1D::upwind(5, 1.0).unwrap();
        let re: Vec<f64> = (0..n).map(|i| (kappa * i as f64 * dx).cos()).collect();
        let im: Vec<f64> = (0..n).map(|i| (kappa * i as f64 * dx).sin()).collect();
        let mut dre = vec![0.0; n];
        let mut dim = vec![0.0; n];
        st.apply_periodic(&re, dx, 1.0, &mut dre);
        st.apply_periodic(&im, dx, 1.0, &mut dim);
        let sym = st.symbol(kappa * dx) / dx;
        for i in 0..n {
            let got = Complex64::new(dre[i], dim[i]);
            let want = sym * Complex64::new(re[i], im[i]);
            assert!((got - want).norm() < 1e-10);
        }
    }
}
