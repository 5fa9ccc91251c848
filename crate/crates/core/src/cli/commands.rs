use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use oscillating_eigenket::bell::{
    bell_spin_s_check, chsh_scan, chsh_value, ChshConfig, CLASSICAL_CHSH_BOUND, VIOLATION_TOLERANCE,
};
use oscillating_eigenket::cat::{empirical_survival_curve, simulate_cats, survival_curve, CatConfig};
use oscillating_eigenket::eprb::{correlation, p_continuous, p_discrete, p_standard, OscillationParams, TickTime};
use oscillating_eigenket::position::{
    first_order_error, fit_loglog_slope, measure_position, momentum_operator, sample_hidden_positions,
    DisplacementRule, HiddenPositionState, PositionGrid, WaveVector,
};
use oscillating_eigenket::sampler::estimate_chsh;
use oscillating_eigenket::spin::SpinQuantumNumber;
use oscillating_eigenket::Error as ModelError;

use super::output::render;
use super::{BellArgs, CatArgs, ChshArgs, Cli, Command, EprbArgs, HiddenArgs, PositionArgs, RuleArg};

const MAX_SWEEP_ROWS: usize = 1_000_000;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("{0}")]
    Invalid(String),
    #[error("cannot format output: {0}")]
    Output(String),
}

#[derive(Serialize)]
struct Meta<'a> {
    command: &'static str,
    version: &'static str,
    config: &'a Cli,
    #[serde(skip_serializing_if = "Option::is_none")]
    summary: Option<serde_json::Value>,
}

fn emit<R: Serialize>(cli: &Cli, summary: Option<serde_json::Value>, rows: &[R]) -> Result<Vec<u8>, CliError> {
    let meta = Meta {
        command: cli.command.name(),
        version: env!("CARGO_PKG_VERSION"),
        config: cli,
        summary,
    };
    render(cli.format, &meta, rows).map_err(CliError::Output)
}

pub fn execute(cli: &Cli) -> Result<Vec<u8>, CliError> {
    match &cli.command {
        Command::Eprb(a) => emit(cli, None, &cmd_eprb(a)?),
        Command::Chsh(a) => emit(cli, None, &[cmd_chsh(a)?]),
        Command::Bell(a) => emit(cli, None, &[cmd_bell(a)?]),
        Command::Cat(a) => emit(cli, None, &cmd_cat(a)?),
        Command::Position(a) => {
            let rows = cmd_position(a)?;
            let (xs, ys): (Vec<f64>, Vec<f64>) = rows
                .iter()
                .filter(|r| r.delta > 0.0 && r.error_norm > 0.0)
                .map(|r| (r.delta, r.error_norm))
                .unzip();
            let summary = fit_loglog_slope(&xs, &ys)
                .ok()
                .map(|slope| serde_json::json!({ "loglog_slope": slope }));
            emit(cli, summary, &rows)
        }
        Command::Hidden(a) => emit(cli, None, &cmd_hidden(a)?),
    }
}

fn sweep(start: f64, stop: f64, step: f64) -> Result<Vec<f64>, CliError> {
    if !(step > 0.0) || !start.is_finite() || !stop.is_finite() || stop < start {
        return Err(CliError::Invalid(format!("invalid sweep {start}..{stop} step {step}")));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    if count > MAX_SWEEP_ROWS {
        return Err(CliError::Invalid(format!("sweep would produce {count} rows")));
    }
    Ok((0..count).map(|i| start + i as f64 * step).collect())
}

#[derive(Debug, Serialize)]
pub struct EprbRow {
    pub theta_deg: f64,
    pub p_standard: f64,
    pub p_discrete: f64,
    pub p_continuous: f64,
    pub correlation: f64,
}

fn cmd_eprb(a: &EprbArgs) -> Result<Vec<EprbRow>, CliError> {
    let thetas = match a.theta_deg {
        Some(t) if t.is_finite() => vec![t],
        Some(t) => return Err(CliError::Invalid(format!("theta must be finite, got {t}"))),
        None => sweep(a.theta_start_deg, a.theta_stop_deg, a.theta_step_deg)?,
    };
    let params = OscillationParams::new(a.phase.omega_rad(), a.phase.phi_rad())?;
    let n = TickTime(a.n);
    let t = a.t.unwrap_or(a.n as f64);
    thetas
        .into_iter()
        .map(|deg| {
            let theta = deg.to_radians();
            Ok(EprbRow {
                theta_deg: deg,
                p_standard: p_standard(theta),
                p_discrete: p_discrete(theta, n),
                p_continuous: p_continuous(theta, t, &params)?,
                correlation: correlation(theta, n),
            })
        })
        .collect()
}

#[derive(Debug, Serialize)]
pub struct ChshRow {
    pub a_deg: f64,
    pub a_prime_deg: f64,
    pub b_deg: f64,
    pub b_prime_deg: f64,
    pub s_closed_form: f64,
    pub classical_bound: f64,
    pub margin: f64,
    pub violated: bool,
    pub trials_per_pair: u64,
    pub s_monte_carlo: Option<f64>,
    pub s_stderr: Option<f64>,
}

fn cmd_chsh(a: &ChshArgs) -> Result<ChshRow, CliError> {
    let n = TickTime(a.n);
    let (config, angles) = if a.scan {
        let scan = chsh_scan(a.step_deg.to_radians(), n)?;
        (scan.best_config, scan.best_angles.map(f64::to_degrees))
    } else {
        let angles = [a.a_deg, a.a_prime_deg, a.b_deg, a.b_prime_deg];
        if angles.iter().any(|x| !x.is_finite()) {
            return Err(CliError::Invalid("axis angles must be finite".into()));
        }
        let [x, xp, y, yp] = angles.map(f64::to_radians);
        (ChshConfig::coplanar(x, xp, y, yp), angles)
    };
    let s = chsh_value(&config, n);
    let mc = if a.trials > 0 {
        Some(estimate_chsh(&config, n, a.trials, a.seed)?)
    } else {
        None
    };
    let margin = s - CLASSICAL_CHSH_BOUND;
    Ok(ChshRow {
        a_deg: angles[0],
        a_prime_deg: angles[1],
        b_deg: angles[2],
        b_prime_deg: angles[3],
        s_closed_form: s,
        classical_bound: CLASSICAL_CHSH_BOUND,
        margin,
        violated: margin > VIOLATION_TOLERANCE,
        trials_per_pair: a.trials,
        s_monte_carlo: mc.map(|r| r.estimate),
        s_stderr: mc.map(|r| r.stderr),
    })
}

#[derive(Debug, Serialize)]
pub struct BellRow {
    pub theta_deg: f64,
    pub twice_s: u32,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub violated: bool,
    pub interpretation_dependent: bool,
}

fn cmd_bell(a: &BellArgs) -> Result<BellRow, CliError> {
    let r = bell_spin_s_check(
        SpinQuantumNumber::from_twice(a.twice_s),
        a.theta_deg.to_radians(),
        TickTime(a.n),
    )?;
    Ok(BellRow {
        theta_deg: a.theta_deg,
        twice_s: a.twice_s,
        lhs: r.report.lhs,
        rhs: r.report.rhs_or_bound,
        margin: r.report.margin,
        violated: r.report.violated,
        interpretation_dependent: r.interpretation_dependent,
    })
}

#[derive(Debug, Serialize)]
pub struct CatRow {
    pub tick: u64,
    pub closed_form_survival: f64,
    pub empirical_survival: Option<f64>,
}

fn cmd_cat(a: &CatArgs) -> Result<Vec<CatRow>, CliError> {
    if a.ticks as usize >= MAX_SWEEP_ROWS {
        return Err(CliError::Invalid(format!("ticks must be below {MAX_SWEEP_ROWS}")));
    }
    let config = CatConfig::new(a.phase.omega_rad(), a.phase.phi_rad(), a.ticks)?;
    let closed = survival_curve(&config);
    let empirical = (a.runs > 0).then(|| empirical_survival_curve(&simulate_cats(&config, a.runs, a.seed), a.ticks));
    Ok(closed
        .into_iter()
        .enumerate()
        .map(|(tick, s)| CatRow {
            tick: tick as u64,
            closed_form_survival: s,
            empirical_survival: empirical.as_ref().map(|e| e[tick]),
        })
        .collect())
}

#[derive(Debug, Serialize)]
pub struct PositionRow {
    pub delta: f64,
    pub error_norm: f64,
    /// `(δ k_max)² / 2`
    pub taylor_bound: f64,
}

fn cmd_position(a: &PositionArgs) -> Result<Vec<PositionRow>, CliError> {
    let grid = PositionGrid::new(a.grid_l, a.grid_h)?;
    let max_mode = (a.grid_l as i64 - 1) / 2;
    if a.modes < 1 || a.modes > max_mode {
        return Err(CliError::Invalid(format!("modes must lie in 1..={max_mode}")));
    }
    let deltas = if a.delta.is_empty() {
        if !(a.delta_min > 0.0 && a.delta_max > a.delta_min && a.delta_max.is_finite()) || a.points < 2 {
            return Err(CliError::Invalid(
                "log sweep needs 0 < delta-min < delta-max and at least 2 points".into(),
            ));
        }
        if a.points > MAX_SWEEP_ROWS {
            return Err(CliError::Invalid(format!("points must be at most {MAX_SWEEP_ROWS}")));
        }
        let (lo, hi) = (a.delta_min.ln(), a.delta_max.ln());
        (0..a.points)
            .map(|i| (lo + (hi - lo) * i as f64 / (a.points - 1) as f64).exp())
            .collect()
    } else {
        if a.delta.iter().any(|d| !d.is_finite()) {
            return Err(CliError::Invalid("displacements must be finite".into()));
        }
        a.delta.clone()
    };

    let modes: Vec<(i64, Complex64)> = (1..=a.modes)
        .map(|m| (m, Complex64::from_polar(1.0 / m as f64, m as f64)))
        .collect();
    let v = WaveVector::band_limited(&grid, &modes)?;
    let p = momentum_operator(&grid);
    let k_max = grid.wavenumber(a.modes);
    Ok(deltas
        .into_iter()
        .map(|delta| PositionRow {
            delta,
            error_norm: first_order_error(&v, delta, &p),
            taylor_bound: 0.5 * (delta * k_max).powi(2),
        })
        .collect())
}

#[derive(Debug, Serialize)]
pub struct HiddenRow {
    pub tick: u64,
    pub position: f64,
    pub lower: f64,
    pub upper: f64,
    pub inside: bool,
}

fn cmd_hidden(a: &HiddenArgs) -> Result<Vec<HiddenRow>, CliError> {
    if a.samples as usize > MAX_SWEEP_ROWS {
        return Err(CliError::Invalid(format!("samples must be at most {MAX_SWEEP_ROWS}")));
    }
    let rule = match a.rule {
        RuleArg::Uniform => DisplacementRule::Uniform,
        RuleArg::Sinusoidal => DisplacementRule::Sinusoidal { period: a.period },
    };
    let mut state = HiddenPositionState::new(a.x_center, a.delta_cap, rule)?;
    if let Some(cap) = a.measure_delta_cap {
        state = measure_position(&state, cap, a.seed)?;
    }
    let (lower, upper) = state.interval();
    // Samples after a measurement use a stream distinct from the one that re-centred the state.
    let seed = if a.measure_delta_cap.is_some() {
        a.seed.wrapping_add(1)
    } else {
        a.seed
    };
    Ok(sample_hidden_positions(&state, a.samples, seed)
        .into_iter()
        .enumerate()
        .map(|(tick, position)| HiddenRow {
            tick: tick as u64,
            position,
            lower,
            upper,
            inside: lower <= position && position <= upper,
        })
        .collect())
}
