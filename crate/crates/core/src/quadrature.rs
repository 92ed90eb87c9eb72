//! Collocation nodes and the quadrature matrices of one time step.
//!
//! All weight matrices are stored divided by the step length, so `Q` for a
//! step `[t0, t0 + dt]` is the same as for `[0, 1]`. Node sets are found as
//! roots of Legendre-type polynomials by bracketing on a dense grid and
//! polishing with safeguarded Newton iterations.

use crate::linalg::CMatrix;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum NodeFamily {
    /// Gauss-Radau with the right endpoint included.
    #[default]
    #[serde(rename = "radau", alias = "radau-right", alias = "gauss-radau-right")]
    GaussRadauRight,
    #[serde(rename = "lobatto", alias = "gauss-lobatto")]
    GaussLobatto,
    #[serde(rename = "legendre", alias = "gauss-legendre")]
    GaussLegendre,
}

impl NodeFamily {
    /// Classical order of the full-interval quadrature with `m` nodes.
    pub fn order(self, m: usize) -> usize {
        match self {
            NodeFamily::GaussRadauRight => 2 * m - 1,
            NodeFamily::GaussLobatto => 2 * m - 2,
            NodeFamily::GaussLegendre => 2 * m,
        }
    }

    pub fn includes_right_endpoint(self) -> bool {
        matches!(self, NodeFamily::GaussRadauRight | NodeFamily::GaussLobatto)
    }

    pub const ALL: [NodeFamily; 3] = [
        NodeFamily::GaussRadauRight,
        NodeFamily::GaussLobatto,
        NodeFamily::GaussLegendre,
    ];
}

impl fmt::Display for NodeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NodeFamily::GaussRadauRight => "radau",
            NodeFamily::GaussLobatto => "lobatto",
            NodeFamily::GaussLegendre => "legendre",
        })
    }
}

impl FromStr for NodeFamily {
    type Err = QuadratureError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "radau" | "radau-right" | "gauss-radau-right" => Ok(NodeFamily::GaussRadauRight),
            "lobatto" | "gauss-lobatto" => Ok(NodeFamily::GaussLobatto),
            "legendre" | "gauss-legendre" => Ok(NodeFamily::GaussLegendre),
            _ => Err(QuadratureError::UnknownFamily(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QuadratureError {
    #[error("{family} nodes are not defined for M = {m}")]
    UnsupportedNodeCount { family: NodeFamily, m: usize },
    #[error("invalid interval [{t_start}, {t_end}]")]
    InvalidInterval { t_start: f64, t_end: f64 },
    #[error("unknown node family '{0}'")]
    UnknownFamily(String),
    #[error("root finder located {found} of {expected} roots")]
    RootCount { found: usize, expected: usize },
}

/// Nodes and weights of one collocation step.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub family: NodeFamily,
    pub t_start: f64,
    pub t_end: f64,
    /// Node positions normalised to `[0, 1]`.
    pub nodes: Vec<f64>,
    /// Node times τ_m.
    pub taus: Vec<f64>,
    /// Spacings Δτ_m in time units, with Δτ₁ = τ₁ − t_start.
    pub dtau: Vec<f64>,
    /// q_{m,j} / Δt
    pub q: Vec<Vec<f64>>,
    /// Node-to-node weights s_{m,j} / Δt.
    pub s: Vec<Vec<f64>>,
    /// Implicit Euler matrix, lower triangular.
    pub q_fast: Vec<Vec<f64>>,
    /// Explicit Euler matrix, strictly lower triangular.
    pub q_slow: Vec<Vec<f64>>,
    /// End-update weights q_j / Δt.
    pub q_end: Vec<f64>,
}

/// Nodes of `family` with `m` points mapped from `[-1, 1]` to `[t_start, t_end]`.
pub fn make_nodes(
    family: NodeFamily,
    m: usize,
    t_start: f64,
    t_end: f64,
) -> Result<Vec<f64>, QuadratureError> {
    check_interval(t_start, t_end)?;
    let x = reference_nodes(family, m)?;
    Ok(map_nodes(&x, t_start, t_end))
}

fn check_interval(t_start: f64, t_end: f64) -> Result<(), QuadratureError> {
    if !(t_end > t_start) || !t_start.is_finite() || !t_end.is_finite() {
        return Err(QuadratureError::InvalidInterval { t_start, t_end });
    }
    Ok(())
}

fn map_nodes(x: &[f64], t_start: f64, t_end: f64) -> Vec<f64> {
    let dt = t_end - t_start;
    x.iter()
        .map(|&xi| {
            if xi == 1.0 {
                t_end
            } else if xi == -1.0 {
                t_start
            } else {
                t_start + 0.5 * (xi + 1.0) * dt
            }
        })
        .collect()
}

/// Nodes on `[-1, 1]`, sorted ascending.
pub fn reference_nodes(family: NodeFamily, m: usize) -> Result<Vec<f64>, QuadratureError> {
    match family {
        NodeFamily::GaussLegendre => {
            if m == 0 {
                return Err(QuadratureError::UnsupportedNodeCount { family, m });
            }
            interior_roots(m, |x| {
                let (p, dp, _) = legendre(m, x);
                (p, dp)
            })
        }
        NodeFamily::GaussRadauRight => {
            if m == 0 {
                return Err(QuadratureError::UnsupportedNodeCount { family, m });
            }
            // roots of P_M - P_{M-1}: x = 1 and M-1 interior points
            let mut roots = if m == 1 {
                Vec::new()
            } else {
                interior_roots(m - 1, |x| {
                    let (pm, dpm, _) = legendre(m, x);
                    let (pl, dpl, _) = legendre(m - 1, x);
                    (pm - pl, dpm - dpl)
                })?
            };
            roots.push(1.0);
            Ok(roots)
        }
        NodeFamily::GaussLobatto => {
            if m < 2 {
                return Err(QuadratureError::UnsupportedNodeCount { family, m });
            }
            let mut roots = vec![-1.0];
            if m > 2 {
                roots.extend(interior_roots(m - 2, |x| {
                    let (_, dp, ddp) = legendre(m - 1, x);
                    (dp, ddp)
                })?);
            }
            roots.push(1.0);
            Ok(roots)
        }
    }
}

/// Legendre polynomial `P_n` with first and second derivatives.
fn legendre(n: usize, x: f64) -> (f64, f64, f64) {
    if n == 0 {
        return (1.0, 0.0, 0.0);
    }
    // P_{k+1} = ((2k+1) x P_k - k P_{k-1}) / (k+1)
    // P'_{k+1} = P'_{k-1} + (2k+1) P_k,  P''_{k+1} = P''_{k-1} + (2k+1) P'_k
    let (mut p0, mut p1) = (1.0, x);
    let (mut d0, mut d1) = (0.0, 1.0);
    let (mut s0, mut s1) = (0.0, 0.0);
    for k in 1..n {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
        let d2 = d0 + (2.0 * kf + 1.0) * p1;
        let s2 = s0 + (2.0 * kf + 1.0) * d1;
        p0 = p1;
        p1 = p2;
        d0 = d1;
        d1 = d2;
        s0 = s1;
        s1 = s2;
    }
    (p1, d1, s1)
}

/// The `count` simple roots of `f` strictly inside `(-1, 1)`.
fn interior_roots(
    count: usize,
    f: impl Fn(f64) -> (f64, f64),
) -> Result<Vec<f64>, QuadratureError> {
    let samples = 400 * (count + 1) * (count + 1).min(8) + 1;
    let h = 2.0 / samples as f64;
    let mut roots = Vec::with_capacity(count);
    let mut a = -1.0 + 0.5 * h;
    let mut fa = f(a).0;
    for i in 1..samples {
        let b = -1.0 + (i as f64 + 0.5) * h;
        let fb = f(b).0;
        if fb == 0.0 {
            roots.push(b);
        } else if fa * fb < 0.0 {
            roots.push(polish(&f, a, b));
        }
        a = b;
        fa = fb;
    }
    if roots.len() != count {
        return Err(QuadratureError::RootCount {
            found: roots.len(),
            expected: count,
        });
    }
    Ok(roots)
}

/// Newton inside a sign-change bracket, falling back to bisection whenever the
/// step leaves the bracket.
fn polish(f: &impl Fn(f64) -> (f64, f64), mut lo: f64, mut hi: f64) -> f64 {
    let f_lo = f(lo).0;
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let (fx, dfx) = f(x);
        if fx == 0.0 {
            return x;
        }
        if (fx < 0.0) == (f_lo < 0.0) {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - fx / dfx;
        let next = if dfx != 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - x).abs() <= 1e-16 * (1.0 + x.abs()) || hi - lo <= 1e-15 {
            return next;
        }
        x = next;
    }
    x
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub(crate) fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    reference_nodes(NodeFamily::GaussLegendre, n)
        .expect("Gauss-Legendre nodes exist for n >= 1")
        .into_iter()
        .map(|x| {
            let (_, dp, _) = legendre(n, x);
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

/// Lagrange basis polynomial `j` on `nodes`, evaluated at `x`.
pub fn lagrange_basis(nodes: &[f64], j: usize, x: f64) -> f64 {
    nodes
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != j)
        .fold(1.0, |acc, (_, &xk)| acc * (x - xk) / (nodes[j] - xk))
}

/// Exact integral of the Lagrange basis over `[a, b]` using an embedded
/// Gauss-Legendre rule of ⌈M/2⌉+1 points.
fn integrate_basis(nodes: &[f64], j: usize, a: f64, b: f64, gl: &[(f64, f64)]) -> f64 {
    if b == a {
        return 0.0;
    }
    let half = 0.5 * (b - a);
    let mid = 0.5 * (b + a);
    half * gl
        .iter()
        .map(|&(x, w)| w * lagrange_basis(nodes, j, mid + half * x))
        .sum::<f64>()
}

impl QuadratureRule {
    pub fn new(
        family: NodeFamily,
        m: usize,
        t_start: f64,
        t_end: f64,
    ) -> Result<Self, QuadratureError> {
        make_rule(family, m, t_start, t_end)
    }

    /// Radau-right rule on `[0, 1]`.
    pub fn radau(m: usize) -> Self {
        make_rule(NodeFamily::GaussRadauRight, m, 0.0, 1.0).expect("Radau nodes exist for m >= 1")
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn dt(&self) -> f64 {
        self.t_end - self.t_start
    }

    /// Δτ_m / Δt
    pub fn dtau_normalized(&self) -> Vec<f64> {
        let dt = self.dt();
        self.dtau.iter().map(|d| d / dt).collect()
    }

    /// The same nodes and weights on another interval.
    pub fn rescaled(&self, t_start: f64, t_end: f64) -> Result<Self, QuadratureError> {
        check_interval(t_start, t_end)?;
        let dt = t_end - t_start;
        let taus: Vec<f64> = self
            .nodes
            .iter()
            .map(|&c| if c == 1.0 { t_end } else { t_start + c * dt })
            .collect();
        Ok(Self {
            t_start,
            t_end,
            dtau: spacings(&taus, t_start),
            taus,
            ..self.clone()
        })
    }

    pub fn q_matrix(&self) -> CMatrix {
        to_cmatrix(&self.q)
    }

    pub fn s_matrix(&self) -> CMatrix {
        to_cmatrix(&self.s)
    }

    pub fn q_fast_matrix(&self) -> CMatrix {
        to_cmatrix(&self.q_fast)
    }

    pub fn q_slow_matrix(&self) -> CMatrix {
        to_cmatrix(&self.q_slow)
    }

    /// Lebesgue constant of the nodes mapped to `[-1, 1]`.
    pub fn lebesgue_constant(&self) -> f64 {
        lebesgue_constant(self, 20_001)
    }
}

fn to_cmatrix(rows: &[Vec<f64>]) -> CMatrix {
    let n = rows.len();
    let m = rows.first().map_or(0, |r| r.len());
    CMatrix::from_fn(n, m, |i, j| num_complex::Complex64::new(rows[i][j], 0.0))
}

fn spacings(taus: &[f64], t_start: f64) -> Vec<f64> {
    let mut prev = t_start;
    taus.iter()
        .map(|&t| {
            let d = t - prev;
            prev = t;
            d
        })
        .collect()
}

pub fn make_rule(
    family: NodeFamily,
    m: usize,
    t_start: f64,
    t_end: f64,
) -> Result<QuadratureRule, QuadratureError> {
    check_interval(t_start, t_end)?;
    let x = reference_nodes(family, m)?;
    let nodes: Vec<f64> = x.iter().map(|&xi| 0.5 * (xi + 1.0)).collect();
    let taus = map_nodes(&x, t_start, t_end);
    let dtau = spacings(&taus, t_start);
    let gl = gauss_legendre(m.div_ceil(2) + 1);

    let q: Vec<Vec<f64>> = nodes
        .iter()
        .map(|&c| (0..m).map(|j| integrate_basis(&nodes, j, 0.0, c, &gl)).collect())
        .collect();
    let q_end: Vec<f64> = (0..m)
        .map(|j| integrate_basis(&nodes, j, 0.0, 1.0, &gl))
        .collect();
    let s: Vec<Vec<f64>> = (0..m)
        .map(|row| {
            (0..m)
                .map(|j| if row == 0 { q[0][j] } else { q[row][j] - q[row - 1][j] })
                .collect()
        })
        .collect();

    let dt = t_end - t_start;
    let dn: Vec<f64> = dtau.iter().map(|d| d / dt).collect();
    // implicit part: column j carries Δτ_j
    let q_fast: Vec<Vec<f64>> = (0..m)
        .map(|row| (0..m).map(|j| if j <= row { dn[j] } else { 0.0 }).collect())
        .collect();
    // explicit part evaluates at the previous node: column j carries Δτ_{j+1}
    let q_slow: Vec<Vec<f64>> = (0..m)
        .map(|row| (0..m).map(|j| if j < row { dn[j + 1] } else { 0.0 }).collect())
        .collect();

    Ok(QuadratureRule {
        family,
        t_start,
        t_end,
        nodes,
        taus,
        dtau,
        q,
        s,
        q_fast,
        q_slow,
        q_end,
    })
}

/// Maximum of `Σ_j |l̃_j(x)|` over `samples` equispaced points of `[-1, 1]`.
pub fn lebesgue_constant(rule: &QuadratureRule, samples: usize) -> f64 {
    let x: Vec<f64> = rule.nodes.iter().map(|c| 2.0 * c - 1.0).collect();
    let samples = samples.max(2);
    (0..samples)
        .map(|i| {
            let xi = -1.0 + 2.0 * i as f64 / (samples - 1) as f64;
            (0..x.len()).map(|j| lagrange_basis(&x, j, xi).abs()).sum::<f64>()
        })
        .fold(0.0, f64::max)
}
