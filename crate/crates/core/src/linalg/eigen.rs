//! Eigenvalues of small dense complex matrices: Householder reduction to
//! upper Hessenberg form followed by Wilkinson-shifted QR sweeps with
//! deflation.

use super::{CMatrix, LinalgError};
use num_complex::Complex64;

pub(crate) const DEFAULT_MAX_ITERATIONS: usize = 200;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

pub(crate) fn eigenvalues(a: &CMatrix, max_iter_per_eig: usize) -> Result<Vec<Complex64>, LinalgError> {
    let n = a.rows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut h = hessenberg(a);
    let eps = f64::EPSILON;
    let mut hi = n - 1;
    let mut iter = 0usize;
    let mut total = 0usize;
    while hi > 0 {
        // locate the start of the unreduced block ending at `hi`
        let mut lo = hi;
        while lo > 0 {
            let scale = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            let sub = h[(lo, lo - 1)].norm();
            if sub <= eps * scale || sub < f64::MIN_POSITIVE {
                h[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        total += 1;
        if iter > max_iter_per_eig {
            return Err(LinalgError::NoConvergence { iterations: total });
        }
        let shift = if iter % 11 == 0 {
            // exceptional shift to break cycles
            h[(hi, hi)] + Complex64::new(h[(hi, hi - 1)].norm(), 0.0)
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };
        qr_step(&mut h, lo, hi, shift);
    }
    Ok((0..n).map(|i| h[(i, i)]).collect())
}

/// Eigenvalue of the trailing 2x2 block closest to its last diagonal entry.
fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mid = (a + d) * 0.5;
    let (l1, l2) = (mid + disc, mid - disc);
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Complex Givens rotation `[c s; -conj(s) c]` mapping `(x, y)` to `(r, 0)`.
fn givens(x: Complex64, y: Complex64) -> (f64, Complex64) {
    let ax = x.norm();
    let ay = y.norm();
    if ay == 0.0 {
        return (1.0, ZERO);
    }
    if ax == 0.0 {
        return (0.0, y.conj() / ay);
    }
    let r = ax.hypot(ay);
    let c = ax / r;
    let s = (x / ax) * y.conj() / r;
    (c, s)
}

/// One explicit shifted QR sweep on the active block `lo..=hi`.
fn qr_step(h: &mut CMatrix, lo: usize, hi: usize, shift: Complex64) {
    for i in lo..=hi {
        h[(i, i)] -= shift;
    }
    let mut rotations = Vec::with_capacity(hi - lo);
    for k in lo..hi {
        let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
        for j in k..=hi {
            let (x, y) = (h[(k, j)], h[(k + 1, j)]);
            h[(k, j)] = x * c + s * y;
            h[(k + 1, j)] = -s.conj() * x + y * c;
        }
        rotations.push((c, s));
    }
    for (offset, &(c, s)) in rotations.iter().enumerate() {
        let k = lo + offset;
        let last = (k + 2).min(hi);
        for i in lo..=last {
            let (x, y) = (h[(i, k)], h[(i, k + 1)]);
            h[(i, k)] = x * c + y * s.conj();
            h[(i, k + 1)] = -x * s + y * c;
        }
    }
    for i in lo..=hi {
        h[(i, i)] += shift;
    }
}

/// Unitary similarity reduction to upper Hessenberg form.
fn hessenberg(a: &CMatrix) -> CMatrix {
    let n = a.rows();
    let mut h = a.clone();
    if n < 3 {
        return h;
    }
    for k in 0..n - 2 {
        let x: Vec<Complex64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let xnorm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if xnorm == 0.0 {
            continue;
        }
        let phase = if x[0].norm() > 0.0 {
            x[0] / x[0].norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let alpha = -phase * xnorm;
        let mut v = x;
        v[0] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for z in &mut v {
            *z /= vnorm;
        }
        // left: H[k+1.., :] -= 2 v (v^H H[k+1.., :])
        for j in 0..n {
            let s: Complex64 = v
                .iter()
                .enumerate()
                .map(|(idx, vi)| vi.conj() * h[(k + 1 + idx, j)])
                .sum();
            for (idx, vi) in v.iter().enumerate() {
                h[(k + 1 + idx, j)] -= *vi * s * 2.0;
            }
        }
        // right: H[:, k+1..] -= 2 (H[:, k+1..] v) v^H
        for i in 0..n {
            let s: Complex64 = v
                .iter()
                .enumerate()
                .map(|(idx, vi)| h[(i, k + 1 + idx)] * vi)
                .sum();
            for (idx, vi) in v.iter().enumerate() {
                h[(i, k + 1 + idx)] -= s * vi.conj() * 2.0;
            }
        }
        for i in k + 2..n {
            h[(i, k)] = ZERO;
        }
    }
    h
}
