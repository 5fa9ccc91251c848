//! Dense complex square matrices and a cyclic Jacobi Hermitian eigensolver.
//!
//! The matrices in this crate are small (spin dimensions up to about a dozen,
//! position grids up to a few hundred sites), so a plain row-major `Vec` is
//! all the storage needed.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::{Error, Result};

/// Deviation from Hermiticity tolerated by [`hermitian_eigendecomposition`].
pub const HERMITIAN_TOLERANCE: f64 = 1e-10;

/// Jacobi stops once the off-diagonal Frobenius norm falls below this
/// fraction of the input's Frobenius norm.
pub const JACOBI_RELATIVE_TOLERANCE: f64 = 1e-13;

/// Maximum number of full Jacobi sweeps before giving up.
pub const JACOBI_MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// Builds a matrix from rows. Fails unless the rows form a square array of
    /// finite entries.
    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::domain("matrix rows do not form a square array"));
        }
        let data: Vec<Complex64> = rows.into_iter().flatten().collect();
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::domain("matrix has non-finite entries"));
        }
        Ok(Self { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - self†`.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.dim {
            for j in i..self.dim {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        (&self.adjoint() * self).max_abs_diff(&Self::identity(self.dim)) <= tol
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim, "dimension mismatch");
        self.data
            .chunks_exact(self.dim)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let d = self.dim;
        let mut out = ComplexMatrix::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..d {
                    out.data[i * d + j] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Spectrum and eigenbasis of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the unit eigenvector for `eigenvalues[k]`.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigen {
    /// `V · diag(f(λ)) · V†`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> Complex64) -> ComplexMatrix {
        let d = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let fl: Vec<Complex64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        ComplexMatrix::from_fn(d, |i, j| (0..d).map(|k| v[(i, k)] * fl[k] * v[(j, k)].conj()).sum())
    }
}

fn off_diagonal_norm(h: &ComplexMatrix) -> f64 {
    let d = h.dim();
    let mut acc = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                acc += h[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Diagonalizes a Hermitian matrix with cyclic complex Jacobi rotations.
///
/// Each pivot `(p, q)` first removes the phase of `h[p][q]` with a diagonal
/// unitary and then zeroes it with a real plane rotation. Sweeps continue
/// until the off-diagonal Frobenius norm is at most
/// [`JACOBI_RELATIVE_TOLERANCE`] times the input norm, failing with
/// [`Error::Numeric`] after [`JACOBI_MAX_SWEEPS`].
pub fn hermitian_eigendecomposition(h: &ComplexMatrix) -> Result<HermitianEigen> {
    let defect = h.hermiticity_defect();
    if !(defect <= HERMITIAN_TOLERANCE) {
        return Err(Error::domain(format!("matrix is not Hermitian (defect {defect:e})")));
    }
    let d = h.dim();
    // Symmetrize so rounding in the input cannot stall convergence.
    let mut a = ComplexMatrix::from_fn(d, |i, j| {
        if i == j {
            Complex64::new(h[(i, i)].re, 0.0)
        } else {
            0.5 * (h[(i, j)] + h[(j, i)].conj())
        }
    });
    let mut v = ComplexMatrix::identity(d);
    let threshold = JACOBI_RELATIVE_TOLERANCE * a.frobenius_norm();

    let mut converged = off_diagonal_norm(&a) <= threshold;
    let mut sweeps = 0;
    while !converged {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::Numeric(format!(
                "Jacobi eigensolver did not converge in {JACOBI_MAX_SWEEPS} sweeps"
            )));
        }
        for p in 0..d {
            for q in (p + 1)..d {
                rotate(&mut a, &mut v, p, q);
            }
        }
        sweeps += 1;
        converged = off_diagonal_norm(&a) <= threshold;
    }

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let eigenvalues = order.iter().map(|&k| a[(k, k)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(d, |i, j| v[(i, order[j])]);
    Ok(HermitianEigen {
        eigenvalues,
        eigenvectors,
    })
}

fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let modulus = apq.norm();
    if modulus == 0.0 {
        return;
    }
    let d = a.dim();
    let phase = apq / modulus; // e^{iα}
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = 0.5 * (2.0 * modulus).atan2(aqq - app);
    let (s, c) = theta.sin_cos();

    // U = [[c, s], [-s e^{-iα}, c e^{-iα}]] on the (p, q) plane.
    let upp = Complex64::new(c, 0.0);
    let upq = Complex64::new(s, 0.0);
    let uqp = -s * phase.conj();
    let uqq = c * phase.conj();

    // A <- A U, V <- V U
    for m in [&mut *a, &mut *v] {
        for i in 0..d {
            let xp = m[(i, p)];
            let xq = m[(i, q)];
            m[(i, p)] = xp * upp + xq * uqp;
            m[(i, q)] = xp * upq + xq * uqq;
        }
    }
    // A <- U† A
    for j in 0..d {
        let xp = a[(p, j)];
        let xq = a[(q, j)];
        a[(p, j)] = upp.conj() * xp + uqp.conj() * xq;
        a[(q, j)] = upq.conj() * xp + uqq.conj() * xq;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)].im = 0.0;
    a[(q, q)].im = 0.0;
}
