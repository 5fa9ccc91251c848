//! Position on a periodic 1-D grid.
//!
//! Momentum is spectral: diagonal in the discrete Fourier basis with
//! eigenvalues `k_m = 2πm / (L h)` for `m ∈ {−⌊L/2⌋, …, ⌈L/2⌉ − 1}`. The exact
//! translation `exp(−i p δ)` is applied as a phase per Fourier mode, and the
//! first-order form `1 − i p δ` uses the dense momentum matrix, so the two
//! routes share no code beyond the grid.
//!
//! The hidden position is `x' + δ_n` with the displacement sequence confined
//! to `[−Δ/2, Δ/2]`. Measuring replaces the aperture `Δ`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::eprb::TickTime;
use crate::linalg::ComplexMatrix;
use crate::sampler::{derive_seed, rng_from_seed};
use crate::{Error, Result};

/// Fresh samples averaged to re-centre the state in [`measure_position`].
pub const RECENTER_SAMPLES: u64 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PositionGrid {
    sites: usize,
    spacing: f64,
}

impl PositionGrid {
    pub fn new(sites: usize, spacing: f64) -> Result<Self> {
        if sites < 2 {
            return Err(Error::domain(format!("grid needs at least 2 sites, got {sites}")));
        }
        if !(spacing > 0.0) || !spacing.is_finite() {
            return Err(Error::domain(format!("grid spacing must be positive, got {spacing}")));
        }
        Ok(Self { sites, spacing })
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn length(&self) -> f64 {
        self.sites as f64 * self.spacing
    }

    /// Signed mode number carried by FFT bin `b`.
    pub fn mode_of_bin(&self, bin: usize) -> i64 {
        let l = self.sites;
        if bin < l - l / 2 {
            bin as i64
        } else {
            bin as i64 - l as i64
        }
    }

    pub fn wavenumber(&self, mode: i64) -> f64 {
        TAU * mode as f64 / self.length()
    }

    /// Momentum eigenvalues in ascending order.
    pub fn momentum_spectrum(&self) -> Vec<f64> {
        let l = self.sites as i64;
        (-(l / 2)..(l - l / 2)).map(|m| self.wavenumber(m)).collect()
    }
}

/// Complex amplitudes on the grid sites.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveVector {
    amps: Vec<Complex64>,
}

impl WaveVector {
    /// Normalizes the given amplitudes to unit norm.
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        let norm = l2_norm(&amps);
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::domain("wave vector must have finite nonzero norm"));
        }
        Ok(Self {
            amps: amps.into_iter().map(|a| a / norm).collect(),
        })
    }

    pub fn spike(grid: &PositionGrid, site: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); grid.sites];
        amps[site % grid.sites] = Complex64::new(1.0, 0.0);
        Self { amps }
    }

    pub fn plane_wave(grid: &PositionGrid, mode: i64) -> Self {
        Self::band_limited(grid, &[(mode, Complex64::new(1.0, 0.0))]).expect("a single plane wave is nonzero")
    }

    /// Normalized `Σ c_m exp(2πi m j / L)` over the given `(m, c_m)`.
    pub fn band_limited(grid: &PositionGrid, modes: &[(i64, Complex64)]) -> Result<Self> {
        let l = grid.sites as i64;
        let amps = (0..l)
            .map(|j| {
                modes
                    .iter()
                    .map(|&(m, c)| c * unit_phase((m * j).rem_euclid(l) as f64 / l as f64))
                    .sum()
            })
            .collect();
        Self::new(amps)
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        l2_norm(&self.amps)
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }
}

pub fn l2_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `exp(2πi t)`.
fn unit_phase(t: f64) -> Complex64 {
    Complex64::from_polar(1.0, TAU * t)
}

/// Dense spectral momentum matrix (ħ = 1).
#[derive(Debug, Clone)]
pub struct MomentumOperator {
    grid: PositionGrid,
    matrix: ComplexMatrix,
}

impl MomentumOperator {
    pub fn grid(&self) -> &PositionGrid {
        &self.grid
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.matrix.mul_vec(v)
    }
}

/// `p_{jl} = (1/L) Σ_m k_m exp(2πi m (j − l) / L)`, a Hermitian circulant.
pub fn momentum_operator(grid: &PositionGrid) -> MomentumOperator {
    let l = grid.sites;
    let li = l as i64;
    let column: Vec<Complex64> = (0..li)
        .map(|r| {
            (0..l)
                .map(|bin| {
                    let m = grid.mode_of_bin(bin);
                    grid.wavenumber(m) * unit_phase((m * r).rem_euclid(li) as f64 / l as f64)
                })
                .sum::<Complex64>()
                / l as f64
        })
        .collect();
    let matrix = ComplexMatrix::from_fn(l, |j, k| column[(j + l - k) % l]);
    MomentumOperator { grid: *grid, matrix }
}

/// `exp(−i p δ) v`, applied mode by mode in Fourier space.
///
/// For `δ = j h` this is a circular shift by `j` sites.
pub fn translate_exact(v: &WaveVector, delta: f64, grid: &PositionGrid) -> WaveVector {
    let l = grid.sites;
    assert_eq!(v.len(), l, "wave vector does not match grid");
    let shift_in_cells = delta / grid.spacing;
    let periods = shift_in_cells / l as f64;
    if periods == periods.round() {
        // whole periods of the ring: the operator is the identity
        return v.clone();
    }
    let mut planner = FftPlanner::<f64>::new();
    let mut buf = v.amps.clone();
    planner.plan_fft_forward(l).process(&mut buf);
    // k_m δ = 2π m δ / (L h); reduce m δ / (L h) to (−1/2, 1/2] turns first.
    for (bin, z) in buf.iter_mut().enumerate() {
        let turns = grid.mode_of_bin(bin) as f64 * shift_in_cells / l as f64;
        *z *= unit_phase(-(turns - turns.round()));
    }
    planner.plan_fft_inverse(l).process(&mut buf);
    let scale = 1.0 / l as f64;
    WaveVector {
        amps: buf.into_iter().map(|z| z * scale).collect(),
    }
}

/// `(1 − i p δ) v`. Not unitary: the norm drifts at order `(δ ‖p‖)²`.
pub fn translate_first_order(v: &WaveVector, delta: f64, p: &MomentumOperator) -> Vec<Complex64> {
    let pv = p.apply(&v.amps);
    v.amps
        .iter()
        .zip(pv)
        .map(|(&a, b)| a - Complex64::new(0.0, delta) * b)
        .collect()
}

/// `‖exp(−i p δ) v − (1 − i p δ) v‖`.
pub fn first_order_error(v: &WaveVector, delta: f64, p: &MomentumOperator) -> f64 {
    let exact = translate_exact(v, delta, p.grid());
    let approx = translate_first_order(v, delta, p);
    let diff: Vec<Complex64> = exact.amps.iter().zip(&approx).map(|(a, b)| a - b).collect();
    l2_norm(&diff)
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn fit_loglog_slope(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::domain("slope fit needs at least two paired points"));
    }
    if xs.iter().chain(ys).any(|&v| !(v > 0.0)) {
        return Err(Error::domain("log-log fit needs positive values"));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::domain("slope fit needs distinct x values"));
    }
    Ok(sxy / sxx)
}

/// How the hidden displacement `δ_n` is produced.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum DisplacementRule {
    /// Uniform on `[−Δ/2, Δ/2]`, drawn from the stream `derive_seed(seed, n)`.
    Uniform,
    /// `(Δ/2) sin(2πn / period)`; ignores the seed.
    Sinusoidal { period: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HiddenPositionState {
    x_center: f64,
    delta_cap: f64,
    rule: DisplacementRule,
}

impl HiddenPositionState {
    pub fn new(x_center: f64, delta_cap: f64, rule: DisplacementRule) -> Result<Self> {
        if !x_center.is_finite() {
            return Err(Error::domain(format!("centre must be finite, got {x_center}")));
        }
        if !(delta_cap > 0.0) || !delta_cap.is_finite() {
            return Err(Error::domain(format!("aperture must be positive, got {delta_cap}")));
        }
        if let DisplacementRule::Sinusoidal { period: 0 } = rule {
            return Err(Error::domain("sinusoidal rule needs a positive period"));
        }
        Ok(Self {
            x_center,
            delta_cap,
            rule,
        })
    }

    pub fn x_center(&self) -> f64 {
        self.x_center
    }

    pub fn delta_cap(&self) -> f64 {
        self.delta_cap
    }

    pub fn rule(&self) -> DisplacementRule {
        self.rule
    }

    /// `[x' − Δ/2, x' + Δ/2]`
    pub fn interval(&self) -> (f64, f64) {
        let half = self.delta_cap / 2.0;
        (self.x_center - half, self.x_center + half)
    }

    /// `δ_n`, always within `[−Δ/2, Δ/2]`.
    pub fn displacement(&self, n: TickTime, seed: u64) -> f64 {
        let half = self.delta_cap / 2.0;
        let raw = match self.rule {
            DisplacementRule::Uniform => {
                let u: f64 = rng_from_seed(derive_seed(seed, n.get())).random();
                (2.0 * u - 1.0) * half
            }
            DisplacementRule::Sinusoidal { period } => {
                let phase = (n.get() % period) as f64 / period as f64;
                half * (TAU * phase).sin()
            }
        };
        raw.clamp(-half, half)
    }
}

/// Hidden position `x' + δ_n` at tick `n`.
pub fn step_hidden_position(state: &HiddenPositionState, n: TickTime, seed: u64) -> f64 {
    state.x_center + state.displacement(n, seed)
}

/// Hidden positions for ticks `0..count`.
pub fn sample_hidden_positions(state: &HiddenPositionState, count: u64, seed: u64) -> Vec<f64> {
    (0..count)
        .into_par_iter()
        .map(|n| step_hidden_position(state, TickTime(n), seed))
        .collect()
}

/// A position measurement: the aperture becomes `new_delta_cap` and the
/// centre becomes the mean of [`RECENTER_SAMPLES`] positions drawn from the
/// old state at ticks `0..RECENTER_SAMPLES` of `seed`.
pub fn measure_position(state: &HiddenPositionState, new_delta_cap: f64, seed: u64) -> Result<HiddenPositionState> {
    if !(new_delta_cap > 0.0) || !new_delta_cap.is_finite() {
        return Err(Error::domain(format!(
            "new aperture must be positive, got {new_delta_cap}"
        )));
    }
    let sum: f64 = (0..RECENTER_SAMPLES)
        .map(|n| step_hidden_position(state, TickTime(n), seed))
        .sum();
    HiddenPositionState::new(sum / RECENTER_SAMPLES as f64, new_delta_cap, state.rule)
}
