//! Discrete-tick oscillating-eigenket model of spin and position.
//!
//! Spin states are eigenkets rotating about their measurement axis with an
//! angular frequency `omega`; time only advances in whole ticks of length
//! `tau`. On the tick grid the model reproduces the singlet correlation law
//! `sin²(θ/2)`, so it violates Bell-type inequalities while every state stays
//! an eigenket. Position is modelled by a bounded hidden displacement
//! sequence and a spectral translation operator.
//!
//! Units: `ħ = 1` throughout. Angles are radians, times are in ticks.
//!
//! Modules, bottom-up:
//! - [`linalg`]: small dense complex matrices and a cyclic Jacobi eigensolver.
//! - [`spin`]: directions, spin-s matrices, rotation operators.
//! - [`eprb`]: the singlet probability laws, joint distributions, correlations.
//! - [`bell`]: three-axis Bell and CHSH evaluation, local deterministic bound.
//! - [`sampler`]: seeded, partition-independent Monte Carlo estimators.
//! - [`cat`]: the discretely-firing gun as an absorbing process.
//! - [`position`]: periodic position grid, translations, hidden displacements.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

pub mod bell;
pub mod cat;
pub mod eprb;
mod error;
pub mod linalg;
pub mod position;
pub mod sampler;
pub mod spin;

pub use error::{Error, Result};
