use super::{eigen, LinalgError};
use num_complex::Complex64;
use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a real-valued matrix from row slices.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let n = rows.len();
        let m = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == m), "ragged rows");
        Self::from_fn(n, m, |i, j| Complex64::new(rows[i][j], 0.0))
    }

    pub fn from_rows(rows: &[&[Complex64]]) -> Self {
        let n = rows.len();
        let m = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == m), "ragged rows");
        Self::from_fn(n, m, |i, j| rows[i][j])
    }

    pub fn diag(entries: &[Complex64]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| x * factor).collect(),
        }
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.cols, "matvec dimension mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(&a, &b)| a * b).sum())
            .collect()
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &CMatrix) -> Self {
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        Self::from_fn(r, c, |i, j| {
            self[(i / other.rows, j / other.cols)] * other[(i % other.rows, j % other.cols)]
        })
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, x| acc.max(x.norm()))
    }

    /// Maximum absolute row sum.
    pub fn inf_norm(&self) -> f64 {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.re.is_finite() && x.im.is_finite())
    }

    /// Matrix power by repeated squaring.
    pub fn pow(&self, k: u32) -> Self {
        assert!(self.is_square());
        let mut result = Self::identity(self.rows);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        result
    }

    /// Inverse by Gauss-Jordan elimination with partial pivoting.
    ///
    /// A pivot below `1e-14` times the largest entry of the input is
    /// treated as singular.
    pub fn inverse(&self) -> Result<Self, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let threshold = 1e-14 * self.max_abs();
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let (pivot_row, magnitude) = (col..n)
                .map(|r| (r, a[(r, col)].norm()))
                .fold((col, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if magnitude <= threshold || magnitude == 0.0 {
                return Err(LinalgError::Singular { pivot: col, magnitude });
            }
            if pivot_row != col {
                a.swap_rows(pivot_row, col);
                inv.swap_rows(pivot_row, col);
            }
            let p = ONE / a[(col, col)];
            for j in 0..n {
                a[(col, j)] *= p;
                inv[(col, j)] *= p;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a[(r, col)];
                if f == ZERO {
                    continue;
                }
                for j in 0..n {
                    let (ac, ic) = (a[(col, j)], inv[(col, j)]);
                    a[(r, j)] -= f * ac;
                    inv[(r, j)] -= f * ic;
                }
            }
        }
        Ok(inv)
    }

    /// Solves `self · x = b` through the inverse; matrices here are small.
    pub fn solve(&self, b: &[Complex64]) -> Result<Vec<Complex64>, LinalgError> {
        if b.len() != self.rows {
            return Err(LinalgError::DimensionMismatch {
                left: self.rows,
                right: b.len(),
            });
        }
        Ok(self.inverse()?.matvec(b))
    }

    /// All eigenvalues, via Hessenberg reduction and shifted QR.
    pub fn eigenvalues(&self) -> Result<Vec<Complex64>, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        eigen::eigenvalues(self, eigen::DEFAULT_MAX_ITERATIONS)
    }

    /// Largest eigenvalue modulus.
    pub fn spectral_radius(&self) -> Result<f64, LinalgError> {
        Ok(self
            .eigenvalues()?
            .iter()
            .fold(0.0, |acc, z| acc.max(z.norm())))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, rhs.rows, "matmul dimension mismatch");
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for z in self.row(i) {
                write!(f, "{:>12.5e}{:+.5e}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}
