//! Small fixed-size dense real linear algebra.
//!
//! Everything the library needs lives in 2×2 and 4×4 matrices, plus one
//! 10×10 linear solve behind the Lyapunov equation. Matrices are plain
//! `Copy` values backed by stack arrays.

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Absolute pivot magnitude below which elimination reports a singular system.
pub const PIVOT_THRESHOLD: f64 = 1e-13;

/// Scaling-and-squaring reduces the argument until its 1-norm is at most this.
const EXPM_NORM_TARGET: f64 = 0.5;
/// Number of Taylor terms summed after scaling.
const EXPM_TAYLOR_ORDER: usize = 18;

/// Square `N`×`N` real matrix stored row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix<const N: usize>(pub [[f64; N]; N]);

pub type Mat2 = Matrix<2>;
pub type Mat4 = Matrix<4>;

impl<const N: usize> Default for Matrix<N> {
    fn default() -> Self {
        Self::zeros()
    }
}

impl<const N: usize> Matrix<N> {
    pub const fn zeros() -> Self {
        Matrix([[0.0; N]; N])
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            m.0[i][i] = 1.0;
        }
        m
    }

    pub const fn from_rows(rows: [[f64; N]; N]) -> Self {
        Matrix(rows)
    }

    pub fn from_diagonal(diag: [f64; N]) -> Self {
        let mut m = Self::zeros();
        for (i, d) in diag.into_iter().enumerate() {
            m.0[i][i] = d;
        }
        m
    }

    pub fn rows(&self) -> &[[f64; N]; N] {
        &self.0
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                t.0[j][i] = self.0[i][j];
            }
        }
        t
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = *self;
        out.0.iter_mut().flatten().for_each(|x| *x *= s);
        out
    }

    pub fn trace(&self) -> f64 {
        (0..N).map(|i| self.0[i][i]).sum()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().fold(0.0, |acc, x| acc.max(x.abs()))
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> f64 {
        (0..N)
            .map(|j| (0..N).map(|i| self.0[i][j].abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|x| x.is_finite())
    }

    /// Largest absolute difference between mirrored entries.
    pub fn asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..N {
            for j in (i + 1)..N {
                worst = worst.max((self.0[i][j] - self.0[j][i]).abs());
            }
        }
        worst
    }

    /// `(M + Mᵀ) / 2`.
    pub fn symmetrized(&self) -> Self {
        let mut out = *self;
        for i in 0..N {
            for j in (i + 1)..N {
                let avg = 0.5 * (self.0[i][j] + self.0[j][i]);
                out.0[i][j] = avg;
                out.0[j][i] = avg;
            }
        }
        out
    }

    /// `M·S·Mᵀ`, the congruence used throughout covariance propagation.
    pub fn congruence(&self, s: &Self) -> Self {
        *self * *s * self.transpose()
    }

    /// Determinant by LU factorisation with partial pivoting.
    ///
    /// Returns exactly zero when a column has no nonzero pivot candidate.
    pub fn det(&self) -> f64 {
        let mut a = self.0;
        let mut det = 1.0;
        for col in 0..N {
            let pivot_row = (col..N)
                .max_by(|&p, &q| a[p][col].abs().total_cmp(&a[q][col].abs()))
                .unwrap_or(col);
            let pivot = a[pivot_row][col];
            if pivot == 0.0 {
                return 0.0;
            }
            if pivot_row != col {
                a.swap(pivot_row, col);
                det = -det;
            }
            det *= pivot;
            for row in (col + 1)..N {
                let factor = a[row][col] / pivot;
                if factor != 0.0 {
                    for k in col..N {
                        a[row][k] -= factor * a[col][k];
                    }
                }
            }
        }
        det
    }
}

impl<const N: usize> Index<(usize, usize)> for Matrix<N> {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.0[i][j]
    }
}

impl<const N: usize> IndexMut<(usize, usize)> for Matrix<N> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.0[i][j]
    }
}

impl<const N: usize> Add for Matrix<N> {
    type Output = Self;

    fn add(mut self, rhs: Self) -> Self {
        for i in 0..N {
            for j in 0..N {
                self.0[i][j] += rhs.0[i][j];
            }
        }
        self
    }
}

impl<const N: usize> Sub for Matrix<N> {
    type Output = Self;

    fn sub(mut self, rhs: Self) -> Self {
        for i in 0..N {
            for j in 0..N {
                self.0[i][j] -= rhs.0[i][j];
            }
        }
        self
    }
}

impl<const N: usize> Neg for Matrix<N> {
    type Output = Self;

    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

impl<const N: usize> Mul for Matrix<N> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zeros();
        for i in 0..N {
            for k in 0..N {
                let a = self.0[i][k];
                if a == 0.0 {
                    continue;
                }
                for j in 0..N {
                    out.0[i][j] += a * rhs.0[k][j];
                }
            }
        }
        out
    }
}

impl<const N: usize> Mul<[f64; N]> for Matrix<N> {
    type Output = [f64; N];

    fn mul(self, v: [f64; N]) -> [f64; N] {
        let mut out = [0.0; N];
        for i in 0..N {
            out[i] = (0..N).map(|k| self.0[i][k] * v[k]).sum();
        }
        out
    }
}

impl Mat4 {
    /// Assembles `[[a, c], [cᵀ, b]]`.
    pub fn from_blocks(a: &Mat2, b: &Mat2, c: &Mat2) -> Self {
        let mut m = Self::zeros();
        for i in 0..2 {
            for j in 0..2 {
                m.0[i][j] = a.0[i][j];
                m.0[i + 2][j + 2] = b.0[i][j];
                m.0[i][j + 2] = c.0[i][j];
                m.0[i + 2][j] = c.0[j][i];
            }
        }
        m
    }

    pub fn block_diagonal(upper: &Mat2, lower: &Mat2) -> Self {
        Self::from_blocks(upper, lower, &Mat2::zeros())
    }

    /// The 2×2 block at block-row `bi`, block-column `bj`.
    pub fn block(&self, bi: usize, bj: usize) -> Mat2 {
        let (r, c) = (2 * bi, 2 * bj);
        Mat2::from_rows([
            [self.0[r][c], self.0[r][c + 1]],
            [self.0[r + 1][c], self.0[r + 1][c + 1]],
        ])
    }
}

pub fn det2(m: &Mat2) -> f64 {
    m.0[0][0] * m.0[1][1] - m.0[0][1] * m.0[1][0]
}

pub fn det4(m: &Mat4) -> f64 {
    m.det()
}

/// Solves `a·x = b` by Gaussian elimination with partial pivoting.
///
/// Fails with [`Error::SingularMatrix`] when the best available pivot is
/// smaller than [`PIVOT_THRESHOLD`] in magnitude.
pub fn solve_linear<const N: usize>(a: &[[f64; N]; N], b: &[f64; N]) -> Result<[f64; N]> {
    let mut a = *a;
    let mut b = *b;
    for col in 0..N {
        let pivot_row = (col..N)
            .max_by(|&p, &q| a[p][col].abs().total_cmp(&a[q][col].abs()))
            .unwrap_or(col);
        let pivot = a[pivot_row][col];
        if !(pivot.abs() >= PIVOT_THRESHOLD) {
            return Err(Error::SingularMatrix { column: col, pivot });
        }
        a.swap(pivot_row, col);
        b.swap(pivot_row, col);
        for row in (col + 1)..N {
            let factor = a[row][col] / pivot;
            if factor == 0.0 {
                continue;
            }
            for k in col..N {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = [0.0; N];
    for row in (0..N).rev() {
        let tail: f64 = ((row + 1)..N).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - tail) / a[row][row];
    }
    Ok(x)
}

/// Matrix exponential by scaling and squaring with a truncated Taylor series.
///
/// The argument is halved until its 1-norm is at most 0.5, the series is
/// summed to order 18 and the result squared back up.
pub fn expm_generic<const N: usize>(m: &Matrix<N>) -> Matrix<N> {
    let norm = m.norm_one();
    if norm == 0.0 {
        return Matrix::identity();
    }
    let squarings = if norm > EXPM_NORM_TARGET {
        (norm / EXPM_NORM_TARGET).log2().ceil() as i32
    } else {
        0
    };
    let scaled = m.scale(0.5f64.powi(squarings));

    // Horner form: I + A(I + A/2(I + A/3(...)))
    let mut acc = Matrix::identity();
    for k in (1..=EXPM_TAYLOR_ORDER).rev() {
        acc = Matrix::identity() + (scaled * acc).scale(1.0 / k as f64);
    }
    for _ in 0..squarings {
        acc = acc * acc;
    }
    acc
}
