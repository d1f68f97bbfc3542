//! Classical and quantum caustics for 1-D quadratic Lagrangians
//! `L = x'^2/2 - lambda(t) x^2/2 - mu(t) x` (mass fixed at 1).
//!
//! The crate provides:
//! * [`timefun`] — time-dependent coefficient profiles `lambda(t)`, `mu(t)`;
//! * [`classical`] — fundamental solutions, Jacobi fields, caustic detection,
//!   Morse index and the classical action in quadratic form;
//! * [`spectral`] — Dirichlet spectrum of the fluctuation operator
//!   `-[d^2/dt^2 + lambda(t)]` and the Morse index cross-check;
//! * [`kernel`] — the semiclassical transition kernel, regular and critical
//!   (on-caustic) branches, plus forced-harmonic-oscillator references;
//! * [`slit`] — the Gaussian slit experiment: evolved packet, variance,
//!   optimal slit width and momentum susceptibility;
//! * [`oracle`] — a Crank–Nicolson grid propagator used as independent
//!   ground truth;
//! * [`cli`] — config-driven experiment runner emitting CSV/JSON reports.

pub mod classical;
pub mod cli;
pub mod kernel;
pub mod oracle;
pub mod slit;
pub mod spectral;
pub mod timefun;

pub use classical::{ActionQuadraticForm, CausticReport, ClassicalTrajectory, FundamentalPair};
pub use kernel::Kernel;
pub use slit::{GaussianState, SlitSetup};
pub use timefun::CoefficientProfile;

use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("time {t} outside the profile domain [0, {horizon}]")]
    OutOfDomain { t: f64, horizon: f64 },
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error("profile parse error: {0}")]
    Parse(String),
    #[error("integrator failure at t = {t}: {reason}")]
    Integrator { t: f64, reason: String },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("potential is critical (|u(T)| below threshold); use the critical kernel")]
    CriticalPotential,
    #[error("potential is not critical; use the regular kernel")]
    NotCritical,
    #[error("tangential (even-order) zero of the Jacobi field near t = {t}; Morse counting undefined")]
    TangentialZero { t: f64 },
    #[error("eigensolver failed to converge after {iterations} iterations")]
    EigenNonConvergence { iterations: usize },
    #[error("lambda must be bounded (non-finite value on the sample grid)")]
    UnboundedCoefficient,
    #[error("boundary leak: |psi| = {amplitude:.3e} at the box edge (limit {limit:.3e})")]
    BoundaryLeak { amplitude: f64, limit: f64 },
    #[error("infinite concentration: x_cl(T) = 0, variance is purely quantum")]
    InfiniteConcentration,
    #[error("config error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
