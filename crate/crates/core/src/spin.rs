//! Spin-s kinematics: measurement axes, spin matrices and rotations.
//!
//! Basis ordering for every spin matrix is `m = s, s-1, ..., -s`, so row `i`
//! carries `m = s - i`. Matrices are in units of ħ (ħ = 1).
//!
//! A rotation about axis `a` by `φ` is available in two forms:
//! [`rotation_operator`] is the matrix `exp(-i S_a φ)`, and [`rotation_phase`]
//! is the scalar `exp(-i m φ)` it reduces to on an eigenket of `S_a` with
//! eigenvalue `m`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::linalg::{hermitian_eigendecomposition, ComplexMatrix};
use crate::{Error, Result};

/// Inputs whose norm is within this distance of 1 are renormalized;
/// anything further away is rejected.
pub const DIRECTION_NORM_TOLERANCE: f64 = 1e-6;

/// Unit 3-vector naming a measurement axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction {
    x: f64,
    y: f64,
    z: f64,
}

impl Direction {
    pub const X: Direction = Direction { x: 1.0, y: 0.0, z: 0.0 };
    pub const Y: Direction = Direction { x: 0.0, y: 1.0, z: 0.0 };
    pub const Z: Direction = Direction { x: 0.0, y: 0.0, z: 1.0 };

    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > DIRECTION_NORM_TOLERANCE {
            return Err(Error::domain(format!(
                "direction ({x}, {y}, {z}) has norm {norm}, expected 1"
            )));
        }
        Ok(Self {
            x: x / norm,
            y: y / norm,
            z: z / norm,
        })
    }

    /// Axis in the x-y plane at `angle` radians from x.
    pub fn in_plane(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self { x: c, y: s, z: 0.0 }
    }

    /// Axis at polar angle `theta` from z and azimuth `phi` from x.
    pub fn from_spherical(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Self {
            x: st * cp,
            y: st * sp,
            z: ct,
        }
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn dot(&self, other: &Direction) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    /// Rigid rotation of this axis by `angle` about `axis` (Rodrigues).
    pub fn rotated_about(&self, axis: &Direction, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        let k = axis;
        let kxv = (
            k.y * self.z - k.z * self.y,
            k.z * self.x - k.x * self.z,
            k.x * self.y - k.y * self.x,
        );
        let kv = k.dot(self) * (1.0 - c);
        let (x, y, z) = (
            self.x * c + kxv.0 * s + k.x * kv,
            self.y * c + kxv.1 * s + k.y * kv,
            self.z * c + kxv.2 * s + k.z * kv,
        );
        let norm = (x * x + y * y + z * z).sqrt();
        Self {
            x: x / norm,
            y: y / norm,
            z: z / norm,
        }
    }
}

/// Angle between two measurement axes, in `[0, π]`.
///
/// Evaluated as `atan2(|a × b|, a · b)`, which stays accurate near 0 and π
/// where `acos` of the dot product loses half its digits.
pub fn angle_between(a: &Direction, b: &Direction) -> f64 {
    let cross = (a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x);
    let sine = (cross.0 * cross.0 + cross.1 * cross.1 + cross.2 * cross.2).sqrt();
    sine.atan2(a.dot(b)).clamp(0.0, std::f64::consts::PI)
}

/// Spin quantum number `s`, stored as `2s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpinQuantumNumber {
    twice_s: u32,
}

impl SpinQuantumNumber {
    pub const ZERO: Self = Self { twice_s: 0 };
    pub const HALF: Self = Self { twice_s: 1 };
    pub const ONE: Self = Self { twice_s: 2 };

    pub const fn from_twice(twice_s: u32) -> Self {
        Self { twice_s }
    }

    pub fn twice_s(&self) -> u32 {
        self.twice_s
    }

    pub fn value(&self) -> f64 {
        f64::from(self.twice_s) / 2.0
    }

    /// Matrix dimension `2s + 1`.
    pub fn dim(&self) -> usize {
        self.twice_s as usize + 1
    }

    pub fn is_integer(&self) -> bool {
        self.twice_s.is_multiple_of(2)
    }

    /// Eigenvalues `m = s, s-1, ..., -s` in basis order.
    pub fn eigenvalues(&self) -> impl Iterator<Item = SpinEigenvalue> {
        let ts = self.twice_s as i32;
        (0..=ts).map(move |i| SpinEigenvalue { twice_m: ts - 2 * i })
    }
}

/// Spin projection `m` along an axis, stored as `2m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpinEigenvalue {
    twice_m: i32,
}

impl SpinEigenvalue {
    pub const UP: Self = Self { twice_m: 1 };
    pub const DOWN: Self = Self { twice_m: -1 };

    /// Checks `|m| <= s` and that `m - s` is an integer.
    pub fn new(s: SpinQuantumNumber, twice_m: i32) -> Result<Self> {
        let ts = s.twice_s as i64;
        let tm = twice_m as i64;
        if tm.abs() > ts || (ts - tm) % 2 != 0 {
            return Err(Error::domain(format!(
                "2m = {twice_m} is not a projection of spin 2s = {ts}"
            )));
        }
        Ok(Self { twice_m })
    }

    pub fn twice_m(&self) -> i32 {
        self.twice_m
    }

    pub fn value(&self) -> f64 {
        f64::from(self.twice_m) / 2.0
    }
}

/// `(S_x, S_y, S_z)` for one spin.
#[derive(Debug, Clone)]
pub struct SpinMatrices {
    pub x: ComplexMatrix,
    pub y: ComplexMatrix,
    pub z: ComplexMatrix,
}

/// Spin matrices from the ladder operators
/// `S± |m⟩ = sqrt(s(s+1) - m(m±1)) |m±1⟩`,
/// `S_x = (S+ + S-)/2`, `S_y = (S+ - S-)/(2i)`, `S_z = diag(s, ..., -s)`.
pub fn spin_matrices(s: SpinQuantumNumber) -> SpinMatrices {
    let d = s.dim();
    let ts = s.twice_s as i64;
    // Row i has 2m = ts - 2i. S+ maps column i (m) to row i-1 (m+1).
    let raise = |i: usize| -> f64 {
        let tm = ts - 2 * i as i64;
        // s(s+1) - m(m+1) = (ts(ts+2) - tm(tm+2)) / 4
        (((ts * (ts + 2) - tm * (tm + 2)) as f64) / 4.0).sqrt()
    };
    let mut plus = ComplexMatrix::zeros(d);
    for i in 1..d {
        plus[(i - 1, i)] = Complex64::new(raise(i), 0.0);
    }
    let minus = plus.adjoint();

    let x = (&plus + &minus).scale(Complex64::new(0.5, 0.0));
    // 1/(2i) = -i/2
    let y = (&plus - &minus).scale(Complex64::new(0.0, -0.5));
    let z = ComplexMatrix::from_fn(d, |i, j| {
        if i == j {
            Complex64::new((ts - 2 * i as i64) as f64 / 2.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    SpinMatrices { x, y, z }
}

/// `S_a = a_x S_x + a_y S_y + a_z S_z`.
pub fn spin_component(s: SpinQuantumNumber, a: &Direction) -> ComplexMatrix {
    let m = spin_matrices(s);
    let sx = m.x.scale(Complex64::new(a.x, 0.0));
    let sy = m.y.scale(Complex64::new(a.y, 0.0));
    let sz = m.z.scale(Complex64::new(a.z, 0.0));
    &(&sx + &sy) + &sz
}

/// `D_a(φ) = exp(-i S_a φ)`, evaluated through the eigendecomposition of `S_a`.
pub fn rotation_operator(s: SpinQuantumNumber, a: &Direction, phi: f64) -> Result<ComplexMatrix> {
    let eig = hermitian_eigendecomposition(&spin_component(s, a))?;
    Ok(eig.map_spectrum(|m| Complex64::from_polar(1.0, -m * phi)))
}

/// `exp(-i m φ)`: the rotation acting on an eigenket with projection `m`.
pub fn rotation_phase(m: SpinEigenvalue, phi: f64) -> Complex64 {
    if m.twice_m == 0 {
        return Complex64::new(1.0, 0.0);
    }
    // m φ = (2m)(φ/2); reduce modulo 2π to keep the phase accurate for large φ.
    let angle = (f64::from(m.twice_m) * (phi / 2.0)).rem_euclid(2.0 * PI);
    Complex64::from_polar(1.0, -angle)
}
