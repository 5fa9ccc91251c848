//! Bell-type inequalities evaluated against the tick-grid singlet law.
//!
//! Two readings of "Bell's inequality" are covered:
//!
//! - the three-axis form `P(a+;b+) ≤ P(a+;c+) + P(c+;b+)`, with `c` the
//!   coplanar bisector of `a` and `b`;
//! - CHSH, `S = |E(a,b) − E(a,b')| + |E(a',b) + E(a',b')| ≤ 2` for every local
//!   deterministic strategy.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::eprb::{correlation, p_discrete, p_spin_s, TickTime};
use crate::spin::{angle_between, Direction, SpinQuantumNumber};
use crate::{Error, Result};

/// A report counts as a violation only when `lhs` exceeds the bound by more
/// than this.
pub const VIOLATION_TOLERANCE: f64 = 1e-12;

/// Classical CHSH bound.
pub const CLASSICAL_CHSH_BOUND: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BellReport {
    pub lhs: f64,
    pub rhs_or_bound: f64,
    pub violated: bool,
    /// `lhs − rhs_or_bound`
    pub margin: f64,
}

impl BellReport {
    pub fn new(lhs: f64, rhs_or_bound: f64) -> Self {
        let margin = lhs - rhs_or_bound;
        Self {
            lhs,
            rhs_or_bound,
            violated: margin > VIOLATION_TOLERANCE,
            margin,
        }
    }
}

fn check_half_turn(theta: f64) -> Result<()> {
    if !(0.0..=PI).contains(&theta) {
        return Err(Error::domain(format!("theta must lie in [0, π], got {theta}")));
    }
    Ok(())
}

/// Three-axis check with `θ_ab = θ` and `θ_ac = θ_cb = θ/2`:
/// `lhs = P(θ)`, `rhs = 2 P(θ/2)`.
pub fn bell_original_check(theta: f64, n: TickTime) -> Result<BellReport> {
    check_half_turn(theta)?;
    Ok(BellReport::new(p_discrete(theta, n), 2.0 * p_discrete(theta / 2.0, n)))
}

/// Three-axis check using the spin-s law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpinBellReport {
    pub report: BellReport,
    /// Set for integer `s`: the spin-s law is then not the singlet law, and
    /// which inequality geometry applies is a matter of interpretation.
    pub interpretation_dependent: bool,
}

pub fn bell_spin_s_check(s: SpinQuantumNumber, theta: f64, n: TickTime) -> Result<SpinBellReport> {
    check_half_turn(theta)?;
    Ok(SpinBellReport {
        report: BellReport::new(p_spin_s(s, theta, n), 2.0 * p_spin_s(s, theta / 2.0, n)),
        interpretation_dependent: s.is_integer(),
    })
}

/// Four measurement axes: `a`, `a'` on one side and `b`, `b'` on the other.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChshConfig {
    pub a: Direction,
    pub a_prime: Direction,
    pub b: Direction,
    pub b_prime: Direction,
}

impl ChshConfig {
    pub fn new(a: Direction, a_prime: Direction, b: Direction, b_prime: Direction) -> Self {
        Self { a, a_prime, b, b_prime }
    }

    /// Coplanar axes given by their angles in the x-y plane.
    pub fn coplanar(a: f64, a_prime: f64, b: f64, b_prime: f64) -> Self {
        Self::new(
            Direction::in_plane(a),
            Direction::in_plane(a_prime),
            Direction::in_plane(b),
            Direction::in_plane(b_prime),
        )
    }

    /// The angles (0°, 90°, 45°, 135°) at which the singlet reaches `2√2`.
    pub fn optimal() -> Self {
        Self::coplanar(0.0, PI / 2.0, PI / 4.0, 3.0 * PI / 4.0)
    }

    /// `[(a,b), (a,b'), (a',b), (a',b')]`
    pub fn pairs(&self) -> [(Direction, Direction); 4] {
        [
            (self.a, self.b),
            (self.a, self.b_prime),
            (self.a_prime, self.b),
            (self.a_prime, self.b_prime),
        ]
    }
}

fn chsh_combine(e_ab: f64, e_abp: f64, e_apb: f64, e_apbp: f64) -> f64 {
    (e_ab - e_abp).abs() + (e_apb + e_apbp).abs()
}

/// Closed-form CHSH statistic from the model's correlation function.
pub fn chsh_value(config: &ChshConfig, n: TickTime) -> f64 {
    let [e0, e1, e2, e3] = config.pairs().map(|(x, y)| correlation(angle_between(&x, &y), n));
    chsh_combine(e0, e1, e2, e3)
}

/// Result of an exhaustive coplanar grid search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChshScan {
    pub best_config: ChshConfig,
    /// Angles of `(a, a', b, b')` in radians.
    pub best_angles: [f64; 4],
    pub best_s: f64,
    pub grid_points: usize,
}

/// Searches all coplanar `(a, a', b, b')` on the grid `k·step ∈ [0, π)`.
///
/// Rows of the search are evaluated in parallel. Among equal maxima the
/// lexicographically smallest index tuple wins, so the result does not depend
/// on how rows are split across threads.
pub fn chsh_scan(step: f64, n: TickTime) -> Result<ChshScan> {
    if !(step > 0.0 && step <= PI / 4.0 + 1e-15) {
        return Err(Error::domain(format!("scan step must lie in (0, π/4], got {step}")));
    }
    let points = (PI / step - 1e-9).ceil() as usize;
    let angles: Vec<f64> = (0..points).map(|k| k as f64 * step).collect();
    let dirs: Vec<Direction> = angles.iter().map(|&t| Direction::in_plane(t)).collect();
    let table: Vec<Vec<f64>> = dirs
        .iter()
        .map(|x| dirs.iter().map(|y| correlation(angle_between(x, y), n)).collect())
        .collect();

    type Candidate = (f64, [usize; 4]);
    fn better(x: Candidate, y: Candidate) -> Candidate {
        match x.0.total_cmp(&y.0) {
            std::cmp::Ordering::Greater => x,
            std::cmp::Ordering::Less => y,
            std::cmp::Ordering::Equal => {
                if x.1 <= y.1 {
                    x
                } else {
                    y
                }
            }
        }
    }

    let (best_s, idx) = (0..points)
        .into_par_iter()
        .map(|a| {
            let mut best: Candidate = (f64::NEG_INFINITY, [usize::MAX; 4]);
            for ap in 0..points {
                for b in 0..points {
                    for bp in 0..points {
                        let s = chsh_combine(table[a][b], table[a][bp], table[ap][b], table[ap][bp]);
                        best = better(best, (s, [a, ap, b, bp]));
                    }
                }
            }
            best
        })
        .reduce(|| (f64::NEG_INFINITY, [usize::MAX; 4]), better);

    let best_angles = idx.map(|k| angles[k]);
    Ok(ChshScan {
        best_config: ChshConfig::new(dirs[idx[0]], dirs[idx[1]], dirs[idx[2]], dirs[idx[3]]),
        best_angles,
        best_s,
        grid_points: points,
    })
}

/// Fixed ±1 answers for each of the four settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LocalStrategy {
    pub a: i8,
    pub a_prime: i8,
    pub b: i8,
    pub b_prime: i8,
}

impl LocalStrategy {
    pub fn chsh(&self) -> f64 {
        let (a, ap, b, bp) = (
            f64::from(self.a),
            f64::from(self.a_prime),
            f64::from(self.b),
            f64::from(self.b_prime),
        );
        chsh_combine(a * b, a * bp, ap * b, ap * bp)
    }
}

/// All 16 local deterministic strategies.
pub fn local_deterministic_strategies() -> Vec<LocalStrategy> {
    let sign = |bit: u8| if bit == 0 { 1 } else { -1 };
    (0u8..16)
        .map(|mask| LocalStrategy {
            a: sign(mask & 1),
            a_prime: sign((mask >> 1) & 1),
            b: sign((mask >> 2) & 1),
            b_prime: sign((mask >> 3) & 1),
        })
        .collect()
}

/// Largest CHSH value over every local deterministic strategy.
pub fn local_deterministic_bound() -> f64 {
    local_deterministic_strategies()
        .iter()
        .map(LocalStrategy::chsh)
        .fold(f64::NEG_INFINITY, f64::max)
}
