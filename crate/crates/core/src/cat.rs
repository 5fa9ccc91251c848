//! The caged-cat thought experiment as an absorbing discrete-time process.
//!
//! A spin-triggered gun fires at tick `n ≥ 1` with probability
//! `sin²(ωn/2 + φ)`. A shot kills the cat and death is absorbing. Closed-form
//! survival and simulation are both provided; the degenerate `ω = 2π, φ = 0`
//! case (the gun never fires) is kept reproducible rather than averaged away.

use std::f64::consts::PI;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::sampler::{derive_seed, rng_from_seed};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CatConfig {
    omega: f64,
    phi: f64,
    ticks: u64,
}

impl CatConfig {
    /// `omega` in radians per tick (positive), `phi` in radians, `ticks` = N.
    pub fn new(omega: f64, phi: f64, ticks: u64) -> Result<Self> {
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(Error::domain(format!("omega must be positive, got {omega}")));
        }
        if !phi.is_finite() {
            return Err(Error::domain(format!("phi must be finite, got {phi}")));
        }
        Ok(Self { omega, phi, ticks })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn ticks(&self) -> u64 {
        self.ticks
    }

    pub fn with_ticks(self, ticks: u64) -> Self {
        Self { ticks, ..self }
    }

    pub fn fire_probability(&self, n: u64) -> f64 {
        fire_probability(n, self.omega, self.phi)
    }
}

/// `sin²(ωn/2 + φ)`.
///
/// The phase is measured in half turns and reduced modulo one before the
/// sine is taken (`sin²` has period π), so phases that are whole multiples of
/// π give exactly zero.
pub fn fire_probability(n: u64, omega: f64, phi: f64) -> f64 {
    let half_turns = (omega / PI) * (n as f64) / 2.0 + phi / PI;
    let reduced = half_turns - half_turns.floor();
    let s = (PI * reduced).sin();
    (s * s).clamp(0.0, 1.0)
}

/// `∏_{n=1..N} (1 − p_n)`.
pub fn survival_probability(config: &CatConfig) -> f64 {
    (1..=config.ticks).map(|n| 1.0 - config.fire_probability(n)).product()
}

/// Closed-form survival after each tick `0..=N`.
pub fn survival_curve(config: &CatConfig) -> Vec<f64> {
    let mut curve = Vec::with_capacity(config.ticks as usize + 1);
    let mut alive = 1.0;
    curve.push(alive);
    for n in 1..=config.ticks {
        alive *= 1.0 - config.fire_probability(n);
        curve.push(alive);
    }
    curve
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CatOutcome {
    Alive,
    Dead,
}

/// One simulated cage. A dead cat carries its death tick in `1..=N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CatRunResult {
    Alive,
    Dead { tick: u64 },
}

impl CatRunResult {
    pub fn outcome(&self) -> CatOutcome {
        match self {
            CatRunResult::Alive => CatOutcome::Alive,
            CatRunResult::Dead { .. } => CatOutcome::Dead,
        }
    }

    pub fn death_tick(&self) -> Option<u64> {
        match *self {
            CatRunResult::Alive => None,
            CatRunResult::Dead { tick } => Some(tick),
        }
    }

    /// Whether the cat is still alive after tick `n`.
    pub fn alive_after(&self, n: u64) -> bool {
        self.death_tick().is_none_or(|t| t > n)
    }
}

/// Bernoulli draws at ticks `1..=N`; the first hit is absorbing.
pub fn simulate_cat(config: &CatConfig, seed: u64) -> CatRunResult {
    let mut rng = rng_from_seed(seed);
    for n in 1..=config.ticks {
        if rng.random_bool(config.fire_probability(n)) {
            return CatRunResult::Dead { tick: n };
        }
    }
    CatRunResult::Alive
}

/// `runs` independent cages; cage `i` is seeded with `derive_seed(master_seed, i)`.
pub fn simulate_cats(config: &CatConfig, runs: u64, master_seed: u64) -> Vec<CatRunResult> {
    (0..runs)
        .into_par_iter()
        .map(|i| simulate_cat(config, derive_seed(master_seed, i)))
        .collect()
}

/// Fraction of runs alive after each tick `0..=ticks`.
pub fn empirical_survival_curve(results: &[CatRunResult], ticks: u64) -> Vec<f64> {
    let total = results.len() as f64;
    let mut deaths = vec![0u64; ticks as usize + 1];
    for r in results {
        if let Some(t) = r.death_tick() {
            if t <= ticks {
                deaths[t as usize] += 1;
            }
        }
    }
    let mut alive = results.len() as u64;
    deaths
        .iter()
        .map(|&d| {
            alive -= d;
            alive as f64 / total
        })
        .collect()
}

/// Truncated first moment of the death tick.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum DeathTickSummary {
    /// `partial_mean = Σ_{n ≤ N} n · P(death at n)`; `survivor_mass` is the
    /// probability of still being alive after tick N.
    Finite {
        partial_mean: f64,
        death_mass: f64,
        survivor_mass: f64,
    },
    /// No probability of death within the horizon.
    Divergent,
}

pub fn expected_death_tick(config: &CatConfig) -> DeathTickSummary {
    let mut alive = 1.0;
    let mut mean = 0.0;
    let mut death_mass = 0.0;
    for n in 1..=config.ticks {
        let p = config.fire_probability(n);
        let die_now = alive * p;
        mean += n as f64 * die_now;
        death_mass += die_now;
        alive *= 1.0 - p;
        if alive == 0.0 {
            break;
        }
    }
    if death_mass == 0.0 {
        DeathTickSummary::Divergent
    } else {
        DeathTickSummary::Finite {
            partial_mean: mean,
            death_mass,
            survivor_mass: alive,
        }
    }
}
