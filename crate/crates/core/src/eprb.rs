//! Singlet probability laws on the tick grid.
//!
//! For a singlet pair, with particle 1 found `+` along `a`, the chance that
//! particle 2 is found `+` along `b` is `sin²(θ/2)`. In the oscillating-eigenket
//! picture the spin keeps rotating with frequency `ω`, giving
//! `sin²(ωt/2 + φ + θ/2)`; with `ω = 2π` per tick and time restricted to whole
//! ticks `n` this becomes `sin²(πn + θ/2)`, which is the same law.

use std::f64::consts::{PI, TAU};

use rand::Rng;
use serde::Serialize;

use crate::sampler::{rng_from_seed, RunningStats};
use crate::spin::SpinQuantumNumber;
use crate::{Error, Result};

/// Whole number of ticks. There is no fractional tick in the discrete API.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct TickTime(pub u64);

impl TickTime {
    pub fn get(self) -> u64 {
        self.0
    }

    fn is_odd(self) -> bool {
        self.0 % 2 == 1
    }
}

/// Hidden oscillation variables.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OscillationParams {
    omega: f64,
    phi: f64,
    tau_seconds: Option<f64>,
}

impl OscillationParams {
    /// `ω = 2π` per tick, `φ = 0`, unknown tick length.
    pub fn canonical() -> Self {
        Self {
            omega: TAU,
            phi: 0.0,
            tau_seconds: None,
        }
    }

    /// `omega` in radians per tick (must be positive); `phi` is wrapped into `[0, 2π)`.
    pub fn new(omega: f64, phi: f64) -> Result<Self> {
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(Error::domain(format!("omega must be positive, got {omega}")));
        }
        if !phi.is_finite() {
            return Err(Error::domain(format!("phi must be finite, got {phi}")));
        }
        Ok(Self {
            omega,
            phi: phi.rem_euclid(TAU),
            tau_seconds: None,
        })
    }

    /// Attaches a tick length in seconds. Only used to convert times for display.
    pub fn with_tau_seconds(mut self, tau: f64) -> Result<Self> {
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(Error::domain(format!("tau must be positive, got {tau}")));
        }
        self.tau_seconds = Some(tau);
        Ok(self)
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn tau_seconds(&self) -> Option<f64> {
        self.tau_seconds
    }

    /// Converts a time in ticks to seconds, if the tick length is known.
    pub fn ticks_to_seconds(&self, t: f64) -> Option<f64> {
        self.tau_seconds.map(|tau| t * tau)
    }
}

impl Default for OscillationParams {
    fn default() -> Self {
        Self::canonical()
    }
}

fn sin_sq(x: f64) -> f64 {
    let s = x.sin();
    s * s
}

/// `sin²(θ/2)`.
pub fn p_standard(theta: f64) -> f64 {
    sin_sq(theta / 2.0)
}

/// `sin²(πn + θ/2)`.
///
/// `πn` is reduced modulo `2π` in integer arithmetic before it meets the
/// floating-point angle, so the result does not lose accuracy as `n` grows.
pub fn p_discrete(theta: f64, n: TickTime) -> f64 {
    let turn = if n.is_odd() { PI } else { 0.0 };
    sin_sq(turn + theta / 2.0)
}

/// `sin²(ωt/2 + φ + θ/2)` at a real time `t ≥ 0` measured in ticks.
///
/// With canonical parameters and `t = n` this agrees with [`p_discrete`];
/// between ticks it exhibits the underlying oscillation.
pub fn p_continuous(theta: f64, t: f64, params: &OscillationParams) -> Result<f64> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::domain(format!("time must be finite and >= 0, got {t}")));
    }
    Ok(sin_sq(params.omega * t / 2.0 + params.phi + theta / 2.0))
}

/// Spin-s law `sin²(2πsn + sθ)`.
pub fn p_spin_s(s: SpinQuantumNumber, theta: f64, n: TickTime) -> f64 {
    // 2πsn = π·(2s)·n; only its parity survives modulo 2π.
    let odd = s.twice_s() % 2 == 1 && n.is_odd();
    let turn = if odd { PI } else { 0.0 };
    sin_sq(turn + s.value() * theta)
}

/// Joint outcome law for the pair `(σ1, σ2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JointDistribution {
    pub p_pp: f64,
    pub p_pm: f64,
    pub p_mp: f64,
    pub p_mm: f64,
}

impl JointDistribution {
    pub fn total(&self) -> f64 {
        self.p_pp + self.p_pm + self.p_mp + self.p_mm
    }

    /// `E[σ1 σ2]`.
    pub fn correlation(&self) -> f64 {
        self.p_pp + self.p_mm - self.p_pm - self.p_mp
    }
}

/// Each particle's outcome is `±` with probability 1/2; the conditional law
/// [`p_discrete`] fixes how often the two agree.
pub fn joint_distribution(theta: f64, n: TickTime) -> JointDistribution {
    let same = 0.5 * p_discrete(theta, n);
    let differ = 0.5 * (1.0 - p_discrete(theta, n));
    JointDistribution {
        p_pp: same,
        p_pm: differ,
        p_mp: differ,
        p_mm: same,
    }
}

/// `E(a, b) = 2 p_discrete − 1 = −cos θ`.
pub fn correlation(theta: f64, n: TickTime) -> f64 {
    2.0 * p_discrete(theta, n) - 1.0
}

/// Average of `sin²(φ)` over a hidden phase, against its closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseAverage {
    /// `(1/2π) ∫ sin²φ dφ = 1/2`, which equals `|1/√2|²`.
    pub closed_form: f64,
    pub estimate: f64,
    pub stderr: f64,
    pub samples: u64,
}

/// Closed-form phase average of `sin²`.
pub const PHASE_AVERAGE_CLOSED_FORM: f64 = 0.5;

/// Monte Carlo average of `sin²(φ)` with `φ` uniform on `[0, 2π)`.
pub fn phase_averaged_probability(samples: u64, seed: u64) -> Result<PhaseAverage> {
    if samples == 0 {
        return Err(Error::domain("phase average needs at least one sample"));
    }
    let mut rng = rng_from_seed(seed);
    let mut stats = RunningStats::default();
    for _ in 0..samples {
        let phi: f64 = rng.random_range(0.0..TAU);
        stats.push(sin_sq(phi));
    }
    Ok(summarize(&stats))
}

/// Average of `sin²(φ)` over explicitly given phases.
pub fn phase_average_of(phases: &[f64]) -> Result<PhaseAverage> {
    if phases.is_empty() {
        return Err(Error::domain("phase average needs at least one sample"));
    }
    let mut stats = RunningStats::default();
    for &phi in phases {
        stats.push(sin_sq(phi));
    }
    Ok(summarize(&stats))
}

fn summarize(stats: &RunningStats) -> PhaseAverage {
    PhaseAverage {
        closed_form: PHASE_AVERAGE_CLOSED_FORM,
        estimate: stats.mean(),
        stderr: stats.stderr(),
        samples: stats.count(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    #[test]
    fn standard_law() {
        assert_eq!(p_standard(0.0), 0.0);
        assert_eq!(p_standard(PI), 1.0);
        assert!((p_standard(FRAC_PI_2) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn discrete_law() {
        assert!((p_discrete(FRAC_PI_2, TickTime(0)) - 0.5).abs() < 1e-15);
        assert!((p_discrete(FRAC_PI_2, TickTime(3)) - p_standard(FRAC_PI_2)).abs() < 1e-15);
        assert!(p_discrete(0.0, TickTime(7)) < 1e-30);
        // direct unreduced evaluation as an independent check
        let naive = (3.0 * PI + FRAC_PI_4).sin().powi(2);
        assert!((p_discrete(FRAC_PI_2, TickTime(3)) - naive).abs() < 1e-14);
    }

    #[test]
    fn continuous_law() {
        let canon = OscillationParams::canonical();
        assert_eq!(p_continuous(0.0, 0.0, &canon).unwrap(), 0.0);
        let p = p_continuous(FRAC_PI_2, 5.0, &canon).unwrap();
        assert!((p - p_discrete(FRAC_PI_2, TickTime(5))).abs() < 1e-14);
        assert!((p_continuous(0.0, 0.5, &canon).unwrap() - 1.0).abs() < 1e-15);
        assert!(p_continuous(0.0, -1.0, &canon).is_err());
        assert!(p_continuous(0.0, f64::NAN, &canon).is_err());
    }

    #[test]
    fn continuous_law_carries_phase() {
        let params = OscillationParams::new(TAU, FRAC_PI_2).unwrap();
        // sin²(π/2) = 1 at t = 0, θ = 0
        assert!((p_continuous(0.0, 0.0, &params).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn params_validation() {
        assert!(OscillationParams::new(0.0, 0.0).is_err());
        assert!(OscillationParams::new(-1.0, 0.0).is_err());
        let p = OscillationParams::new(1.0, -FRAC_PI_2).unwrap();
        assert!((p.phi() - 1.5 * PI).abs() < 1e-15);
        let p = OscillationParams::new(1.0, TAU).unwrap();
        assert_eq!(p.phi(), 0.0);
        let p = OscillationParams::canonical().with_tau_seconds(1e-20).unwrap();
        assert!((p.ticks_to_seconds(3.0).unwrap() - 3e-20).abs() < 1e-34);
        assert!(OscillationParams::canonical().with_tau_seconds(0.0).is_err());
    }

    #[test]
    fn spin_s_law() {
        let half = SpinQuantumNumber::HALF;
        assert!((p_spin_s(half, FRAC_PI_2, TickTime(2)) - 0.5).abs() < 1e-15);
        for n in 0..5 {
            assert_eq!(p_spin_s(SpinQuantumNumber::ZERO, 1.234, TickTime(n)), 0.0);
        }
        let one = p_spin_s(SpinQuantumNumber::ONE, FRAC_PI_4, TickTime(1));
        assert!((one - 0.5).abs() < 1e-15);
        let naive = (TAU + FRAC_PI_4).sin().powi(2);
        assert!((one - naive).abs() < 1e-14);
    }

    #[test]
    fn joint_distribution_cases() {
        let j = joint_distribution(0.0, TickTime(0));
        assert_eq!((j.p_pp, j.p_pm, j.p_mp, j.p_mm), (0.0, 0.5, 0.5, 0.0));
        let j = joint_distribution(PI, TickTime(0));
        assert_eq!((j.p_pp, j.p_pm, j.p_mp, j.p_mm), (0.5, 0.0, 0.0, 0.5));
        let j = joint_distribution(FRAC_PI_2, TickTime(1));
        for p in [j.p_pp, j.p_pm, j.p_mp, j.p_mm] {
            assert!((p - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn correlation_cases() {
        assert_eq!(correlation(0.0, TickTime(0)), -1.0);
        assert!(correlation(FRAC_PI_2, TickTime(0)).abs() < 1e-15);
        let e = correlation(FRAC_PI_4, TickTime(0));
        let oracle = 2.0 * (PI / 8.0).sin().powi(2) - 1.0;
        assert!((e - oracle).abs() < 1e-15);
        assert!((e + std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-10);
    }

    #[test]
    fn phase_average() {
        let forced = phase_average_of(&[FRAC_PI_2]).unwrap();
        assert_eq!(forced.estimate, 1.0);
        assert_eq!(forced.stderr, 0.0);
        assert_eq!(forced.closed_form, 0.5);
        assert!(phase_averaged_probability(0, 1).is_err());
        assert!(phase_average_of(&[]).is_err());
    }
}
