//! Config-driven experiment runner: caustic scans, spectrum reports, kernel
//! evaluations, slit experiments, susceptibility scans and oracle
//! comparisons, emitting deterministic CSV plus a JSON summary.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::classical::{self, SolverSettings};
use crate::timefun::CoefficientProfile;
use crate::{kernel, oracle, slit, spectral, Error, Result};

/// Bumped on any CSV/JSON schema change.
pub const REPORT_SCHEMA_VERSION: &str = "1.0.0";

pub fn report_schema_version() -> &'static str {
    REPORT_SCHEMA_VERSION
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    CausticScan,
    Spectrum,
    Kernel,
    Slit,
    SusceptibilityScan,
    OracleCompare,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScanAxis {
    pub parameter: String,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct Numerics {
    /// RK4 steps for the classical solver.
    pub ode_steps: usize,
    /// Interior points for the Sturm–Liouville discretization.
    pub grid_points: usize,
    /// Eigenvalues reported by spectrum experiments.
    pub n_max: usize,
    /// Spatial points / time steps for the grid oracle.
    pub spatial_points: usize,
    pub time_steps: usize,
    pub hbar: f64,
    pub eps_caustic: f64,
    pub tol_wronskian: f64,
}

impl Default for Numerics {
    fn default() -> Self {
        Numerics {
            ode_steps: 2048,
            grid_points: 1024,
            n_max: 8,
            spatial_points: 2048,
            time_steps: 4096,
            hbar: 1.0,
            eps_caustic: 1e-8,
            tol_wronskian: 1e-9,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SlitParams {
    pub a: f64,
    #[serde(default)]
    pub sigma0: Option<f64>,
    #[serde(default)]
    pub tau: Option<f64>,
    #[serde(default)]
    pub p: Option<f64>,
    /// Permit `p` independent of `tau` (susceptibility scans).
    #[serde(default)]
    pub decoupled: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KernelParams {
    pub a: f64,
    pub b: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    #[serde(default)]
    pub lambda: Option<CoefficientProfile>,
    #[serde(default)]
    pub mu: Option<CoefficientProfile>,
    /// Time horizon for experiments that synthesize lambda from the scan
    /// axis (caustic scans).
    #[serde(default)]
    pub horizon: Option<f64>,
    #[serde(default)]
    pub scan: Option<ScanAxis>,
    #[serde(default)]
    pub numerics: Numerics,
    #[serde(default)]
    pub slit: Option<SlitParams>,
    #[serde(default)]
    pub kernel: Option<KernelParams>,
}

impl ExperimentConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let config: ExperimentConfig =
            serde_json::from_str(&text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(scan) = &self.scan {
            if scan.steps < 2 {
                return Err(Error::Config("scan needs steps >= 2".into()));
            }
            if !(scan.max > scan.min) {
                return Err(Error::Config("scan needs max > min".into()));
            }
            let known = ["omega_t", "sigma0", "p"];
            if !known.contains(&scan.parameter.as_str()) {
                return Err(Error::Config(format!(
                    "unknown scan parameter '{}' (known: {})",
                    scan.parameter,
                    known.join(", ")
                )));
            }
        }
        match self.experiment {
            ExperimentKind::CausticScan => {
                let scan = self
                    .scan
                    .as_ref()
                    .ok_or_else(|| Error::Config("caustic_scan requires 'scan'".into()))?;
                if scan.parameter != "omega_t" {
                    return Err(Error::Config("caustic_scan scans 'omega_t'".into()));
                }
                if self.horizon.is_none() && self.lambda.is_none() {
                    return Err(Error::Config(
                        "caustic_scan requires 'horizon' (or a lambda carrying one)".into(),
                    ));
                }
            }
            ExperimentKind::Spectrum => {
                if self.lambda.is_none() {
                    return Err(Error::Config("spectrum requires 'lambda'".into()));
                }
            }
            ExperimentKind::Kernel => {
                if self.lambda.is_none() {
                    return Err(Error::Config("kernel requires 'lambda'".into()));
                }
                if self.kernel.is_none() {
                    return Err(Error::Config("kernel requires 'kernel' endpoints".into()));
                }
            }
            ExperimentKind::Slit => {
                if self.lambda.is_none() {
                    return Err(Error::Config("slit requires 'lambda'".into()));
                }
                if self.slit.is_none() {
                    return Err(Error::Config("slit requires 'slit' parameters".into()));
                }
            }
            ExperimentKind::SusceptibilityScan => {
                if self.lambda.is_none() || self.slit.is_none() {
                    return Err(Error::Config(
                        "susceptibility_scan requires 'lambda' and 'slit'".into(),
                    ));
                }
                match &self.scan {
                    Some(scan) if scan.parameter == "p" => {}
                    _ => {
                        return Err(Error::Config(
                            "susceptibility_scan scans 'p'".into(),
                        ))
                    }
                }
            }
            ExperimentKind::OracleCompare => {
                if self.lambda.is_none() || self.slit.is_none() {
                    return Err(Error::Config(
                        "oracle_compare requires 'lambda' and 'slit'".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    fn mu_or_zero(&self, horizon: f64) -> CoefficientProfile {
        self.mu
            .clone()
            .unwrap_or_else(|| CoefficientProfile::zero(horizon))
    }

    fn slit_setup(&self) -> Result<slit::SlitSetup> {
        let params = self
            .slit
            .as_ref()
            .ok_or_else(|| Error::Config("missing slit parameters".into()))?;
        let sigma0 = params.sigma0.unwrap_or(1.0);
        let hbar = self.numerics.hbar;
        if params.decoupled || (params.p.is_some() && params.tau.is_none()) {
            slit::SlitSetup::with_momentum(params.a, sigma0, params.p.unwrap_or(0.0), hbar)
        } else {
            slit::SlitSetup::new(params.a, sigma0, params.tau.unwrap_or(1.0), hbar)
        }
    }
}

/// Paths of the artifacts a run produced.
#[derive(Debug, Clone)]
pub struct RunArtifacts {
    pub csv_path: PathBuf,
    pub json_path: PathBuf,
}

fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

struct CsvReport {
    columns: Vec<&'static str>,
    descriptions: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

fn write_outputs(
    out_dir: &Path,
    name: &str,
    config: &ExperimentConfig,
    report: &CsvReport,
    summary: serde_json::Value,
) -> Result<RunArtifacts> {
    std::fs::create_dir_all(out_dir)?;
    let csv_path = out_dir.join(format!("{name}.csv"));
    let mut csv = Vec::new();
    writeln!(csv, "{}", report.columns.join(","))?;
    for row in &report.rows {
        writeln!(csv, "{}", row.join(","))?;
    }
    std::fs::write(&csv_path, csv)?;

    let json_path = out_dir.join(format!("{name}.json"));
    let columns: serde_json::Map<String, serde_json::Value> = report
        .columns
        .iter()
        .zip(&report.descriptions)
        .map(|(c, d)| (c.to_string(), json!(d)))
        .collect();
    let document = json!({
        "schema_version": REPORT_SCHEMA_VERSION,
        "experiment": config.experiment,
        "settings": config,
        "columns": columns,
        "summary": summary,
    });
    std::fs::write(&json_path, serde_json::to_string_pretty(&document)?.as_bytes())?;
    Ok(RunArtifacts {
        csv_path,
        json_path,
    })
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Config(e.to_string())
    }
}

/// Execute the configured experiment, writing `<experiment>.csv` and
/// `<experiment>.json` into `out_dir`.
pub fn run(config: &ExperimentConfig, out_dir: &Path, threads: Option<usize>) -> Result<RunArtifacts> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| Error::Config(e.to_string()))?;
    pool.install(|| match config.experiment {
        ExperimentKind::CausticScan => run_caustic_scan(config, out_dir),
        ExperimentKind::Spectrum => run_spectrum(config, out_dir),
        ExperimentKind::Kernel => run_kernel(config, out_dir),
        ExperimentKind::Slit => run_slit(config, out_dir),
        ExperimentKind::SusceptibilityScan => run_susceptibility(config, out_dir),
        ExperimentKind::OracleCompare => run_oracle_compare(config, out_dir),
    })
}

fn solver_settings(numerics: &Numerics) -> SolverSettings {
    SolverSettings {
        steps: numerics.ode_steps,
        eps_caustic: numerics.eps_caustic,
        ..SolverSettings::default()
    }
}

/// `u(T)` and the caustic report for a constant `lambda = (theta/T)^2`.
fn harmonic_point(
    theta: f64,
    horizon: f64,
    mu: &CoefficientProfile,
    numerics: &Numerics,
) -> Result<(classical::FundamentalPair, classical::CausticReport)> {
    let omega = theta / horizon;
    let lambda = CoefficientProfile::constant(omega * omega, horizon);
    let pair = classical::solve_fundamental(&lambda, mu, &solver_settings(numerics))?;
    let report = classical::caustic_report(&pair, numerics.eps_caustic)?;
    Ok((pair, report))
}

fn run_caustic_scan(config: &ExperimentConfig, out_dir: &Path) -> Result<RunArtifacts> {
    use rayon::prelude::*;
    let scan = config.scan.as_ref().unwrap();
    let horizon = config
        .horizon
        .or_else(|| config.lambda.as_ref().map(|l| l.horizon))
        .unwrap();
    let mu = config.mu_or_zero(horizon);
    let thetas: Vec<f64> = (0..scan.steps)
        .map(|i| scan.min + (scan.max - scan.min) * i as f64 / (scan.steps - 1) as f64)
        .collect();
    let points: Vec<(f64, classical::CausticReport)> = thetas
        .par_iter()
        .map(|&theta| {
            harmonic_point(theta, horizon, &mu, &config.numerics)
                .map(|(_, report)| (theta, report))
        })
        .collect::<Result<_>>()?;

    let rows = points
        .iter()
        .map(|(theta, report)| {
            vec![
                fmt(*theta),
                fmt(report.u_t),
                report.critical.to_string(),
                report.k.map(fmt).unwrap_or_default(),
                report.morse_index.to_string(),
            ]
        })
        .collect();

    // Refine critical omega_T values by bisection on u(T) sign changes.
    let mut critical_points = Vec::new();
    for w in points.windows(2) {
        let (t0, r0) = (&w[0].0, &w[0].1);
        let (t1, r1) = (&w[1].0, &w[1].1);
        if r0.u_t * r1.u_t < 0.0 {
            let (mut lo, mut hi, mut f_lo) = (*t0, *t1, r0.u_t);
            while hi - lo > 1e-12 {
                let mid = 0.5 * (lo + hi);
                let (_, r) = harmonic_point(mid, horizon, &mu, &config.numerics)?;
                if f_lo * r.u_t <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                    f_lo = r.u_t;
                }
            }
            let theta_star = 0.5 * (lo + hi);
            let (_, report) = harmonic_point(theta_star, horizon, &mu, &config.numerics)?;
            critical_points.push(json!({
                "omega_t": theta_star,
                "critical": report.critical,
                "k": report.k,
                "morse_index": report.morse_index,
                "focal_intercept": report.focal_intercept,
            }));
        }
    }

    write_outputs(
        out_dir,
        "caustic_scan",
        config,
        &CsvReport {
            columns: vec!["omega_t", "u_t", "critical", "k", "morse_index"],
            descriptions: vec![
                "dimensionless omega*T of the constant harmonic potential",
                "Jacobi field value u(T)",
                "criticality flag (|u(T)| <= eps_caustic * max|u|)",
                "stretching factor v(T) (empty when non-critical)",
                "zeros of u on (0, T]",
            ],
            rows,
        },
        json!({ "critical_points": critical_points }),
    )
}

fn run_spectrum(config: &ExperimentConfig, out_dir: &Path) -> Result<RunArtifacts> {
    let lambda = config.lambda.as_ref().unwrap();
    let report = spectral::sturm_liouville_spectrum(
        lambda,
        config.numerics.n_max,
        config.numerics.grid_points,
    )?;
    let rows = report
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(i, &e)| vec![(i + 1).to_string(), fmt(e)])
        .collect();
    write_outputs(
        out_dir,
        "spectrum",
        config,
        &CsvReport {
            columns: vec!["n", "eigenvalue"],
            descriptions: vec![
                "mode number (1-based, ascending)",
                "Dirichlet eigenvalue of -[d^2/dt^2 + lambda(t)]",
            ],
            rows,
        },
        json!({
            "grid_points": report.grid_points,
            "negative_count": report.negative_count,
            "zero_count": report.zero_count,
            "index": report.index,
            "eps_zero": report.eps_zero,
        }),
    )
}

fn run_kernel(config: &ExperimentConfig, out_dir: &Path) -> Result<RunArtifacts> {
    let lambda = config.lambda.as_ref().unwrap();
    let endpoints = config.kernel.as_ref().unwrap();
    let mu = config.mu_or_zero(lambda.horizon);
    let hbar = config.numerics.hbar;
    let pair = classical::solve_fundamental(lambda, &mu, &solver_settings(&config.numerics))?;
    let report = classical::caustic_report(&pair, config.numerics.eps_caustic)?;

    if report.critical {
        let critical = kernel::critical_kernel(&report, &pair, hbar)?;
        let action = critical.action_at(endpoints.a);
        let rows = vec![vec![
            fmt(endpoints.a),
            fmt(critical.focal_point(endpoints.a)),
            fmt(critical.k),
            fmt(critical.s_t),
            critical.morse_index.to_string(),
            fmt(action),
            fmt(action / hbar - std::f64::consts::FRAC_PI_2 * critical.morse_index as f64),
        ]];
        write_outputs(
            out_dir,
            "kernel",
            config,
            &CsvReport {
                columns: vec![
                    "a",
                    "focal_point",
                    "k",
                    "s_t",
                    "morse_index",
                    "action",
                    "phase",
                ],
                descriptions: vec![
                    "initial position",
                    "conjugate point b = k a + s(T)",
                    "stretching factor",
                    "focal intercept s(T)",
                    "Morse index",
                    "classical action I(a)",
                    "total phase exponent I/hbar - pi m/2",
                ],
                rows,
            },
            json!({ "branch": "critical", "k": critical.k, "s_t": critical.s_t,
                    "morse_index": critical.morse_index }),
        )
    } else {
        let form = classical::action_coefficients(&pair, config.numerics.eps_caustic)?;
        let value = kernel::regular_kernel(&form, report.morse_index, hbar, endpoints.a, endpoints.b)?;
        let rows = vec![vec![
            fmt(endpoints.a),
            fmt(endpoints.b),
            fmt(value.re),
            fmt(value.im),
            fmt(value.norm()),
            fmt(value.arg()),
        ]];
        write_outputs(
            out_dir,
            "kernel",
            config,
            &CsvReport {
                columns: vec!["a", "b", "re", "im", "modulus", "phase"],
                descriptions: vec![
                    "initial position",
                    "final position",
                    "Re K(b,T;a,0)",
                    "Im K(b,T;a,0)",
                    "|K|",
                    "arg K",
                ],
                rows,
            },
            json!({ "branch": "regular", "morse_index": report.morse_index,
                    "form": { "a": form.a, "b": form.b, "c": form.c,
                              "d": form.d, "e": form.e, "f": form.f } }),
        )
    }
}

fn run_slit(config: &ExperimentConfig, out_dir: &Path) -> Result<RunArtifacts> {
    let lambda = config.lambda.as_ref().unwrap();
    let mu = config.mu_or_zero(lambda.horizon);
    let pair = classical::solve_fundamental(lambda, &mu, &solver_settings(&config.numerics))?;
    let caustics = classical::caustic_report(&pair, config.numerics.eps_caustic)?;
    let form = classical::action_coefficients(&pair, config.numerics.eps_caustic)?;
    let base = config.slit_setup()?;

    let sigma0s: Vec<f64> = match &config.scan {
        Some(scan) if scan.parameter == "sigma0" => (0..scan.steps)
            .map(|i| scan.min + (scan.max - scan.min) * i as f64 / (scan.steps - 1) as f64)
            .collect(),
        _ => vec![base.sigma0],
    };
    let rows = sigma0s
        .iter()
        .map(|&sigma0| {
            let setup = slit::SlitSetup { sigma0, ..base };
            let state = slit::evolve(&setup, &form, caustics.morse_index)?;
            Ok(vec![
                fmt(sigma0),
                fmt(state.center),
                fmt(state.sigma()),
                fmt(state.variance),
            ])
        })
        .collect::<Result<_>>()?;

    let optimal = slit::optimal_slit(&base, &form);
    let summary = match optimal {
        Ok(opt) => json!({
            "sigma0_star": opt.sigma0_star,
            "sigma_min": opt.sigma_min,
            "sigma_at_star": opt.sigma_at_star,
            "infinite_concentration": false,
        }),
        Err(Error::InfiniteConcentration) => json!({ "infinite_concentration": true }),
        Err(e) => return Err(e),
    };
    write_outputs(
        out_dir,
        "slit",
        config,
        &CsvReport {
            columns: vec!["sigma0", "center", "sigma_t", "variance"],
            descriptions: vec![
                "slit width parameter",
                "final packet center x_cl(T)",
                "final spread sigma(T)",
                "final position variance sigma(T)^2",
            ],
            rows,
        },
        summary,
    )
}

fn run_susceptibility(config: &ExperimentConfig, out_dir: &Path) -> Result<RunArtifacts> {
    use rayon::prelude::*;
    let lambda = config.lambda.as_ref().unwrap();
    let scan = config.scan.as_ref().unwrap();
    let mu = config.mu_or_zero(lambda.horizon);
    let pair = classical::solve_fundamental(lambda, &mu, &solver_settings(&config.numerics))?;
    let form = classical::action_coefficients(&pair, config.numerics.eps_caustic)?;
    let base = config.slit_setup()?;

    let momenta: Vec<f64> = (0..scan.steps)
        .map(|i| scan.min + (scan.max - scan.min) * i as f64 / (scan.steps - 1) as f64)
        .collect();
    let rows: Vec<Vec<String>> = momenta
        .par_iter()
        .map(|&p| {
            let setup = slit::SlitSetup {
                p,
                decoupled: true,
                ..base
            };
            let out = slit::susceptibility(&setup, &form)?;
            Ok(vec![
                fmt(p),
                fmt(out.s),
                fmt(out.finite_difference),
                fmt(out.jacobi_abs),
                out.purely_quantum.to_string(),
            ])
        })
        .collect::<Result<_>>()?;
    write_outputs(
        out_dir,
        "susceptibility_scan",
        config,
        &CsvReport {
            columns: vec!["p", "s", "s_finite_difference", "jacobi_abs", "purely_quantum"],
            descriptions: vec![
                "initial average momentum",
                "closed-form susceptibility S(p,T)",
                "central finite difference (a/sigma0) d sigma/d p",
                "|J(p,T)| = 1/|B| (classical limit)",
                "x_cl(T) = 0 flag (S vanishes)",
            ],
            rows,
        },
        json!({ "jacobi_abs": 1.0 / form.b.abs() }),
    )
}

fn run_oracle_compare(config: &ExperimentConfig, out_dir: &Path) -> Result<RunArtifacts> {
    let lambda = config.lambda.as_ref().unwrap();
    let mu = config.mu_or_zero(lambda.horizon);
    let hbar = config.numerics.hbar;
    let pair = classical::solve_fundamental(lambda, &mu, &solver_settings(&config.numerics))?;
    let caustics = classical::caustic_report(&pair, config.numerics.eps_caustic)?;
    let form = classical::action_coefficients(&pair, config.numerics.eps_caustic)?;
    let setup = config.slit_setup()?;
    let predicted = slit::evolve(&setup, &form, caustics.morse_index)?;

    let initial = slit::initial_state(&setup);
    let sigma_max = initial.sigma().max(predicted.sigma());
    let (lo, hi) = oracle::GridState::default_box(&[initial.center, predicted.center], sigma_max);
    let grid = oracle::GridState::from_gaussian(&initial, lo, hi, config.numerics.spatial_points);
    let propagated = oracle::propagate(
        &grid,
        lambda,
        &mu,
        hbar,
        0.0,
        lambda.horizon,
        config.numerics.time_steps,
    )?;
    let measured = oracle::moments(&propagated, hbar);

    let center_err = (predicted.center - measured.center).abs()
        / measured.variance.sqrt().max(measured.center.abs());
    let variance_err = (predicted.variance - measured.variance).abs() / measured.variance;
    let rows = vec![vec![
        fmt(predicted.center),
        fmt(measured.center),
        fmt(center_err),
        fmt(predicted.variance),
        fmt(measured.variance),
        fmt(variance_err),
    ]];
    write_outputs(
        out_dir,
        "oracle_compare",
        config,
        &CsvReport {
            columns: vec![
                "center_closed",
                "center_oracle",
                "center_rel_error",
                "variance_closed",
                "variance_oracle",
                "variance_rel_error",
            ],
            descriptions: vec![
                "closed-form final center",
                "Crank-Nicolson final center",
                "center deviation relative to the packet scale",
                "closed-form final variance",
                "Crank-Nicolson final variance",
                "relative variance deviation",
            ],
            rows,
        },
        json!({
            "oracle_norm": measured.norm,
            "morse_index": caustics.morse_index,
            "critical": caustics.critical,
        }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schema_version_constant() {
        assert_eq!(report_schema_version(), "1.0.0");
    }

    #[test]
    fn missing_lambda_rejected() {
        let config: ExperimentConfig =
            serde_json::from_str(r#"{"experiment":"spectrum"}"#).unwrap();
        let err = config.validate().unwrap_err();
        assert!(err.to_string().contains("lambda"), "{err}");
    }

    #[test]
    fn scan_steps_guard() {
        let config: ExperimentConfig = serde_json::from_str(
            r#"{"experiment":"caustic_scan","horizon":3.14,
                "scan":{"parameter":"omega_t","min":1.0,"max":2.0,"steps":1}}"#,
        )
        .unwrap();
        assert!(config.validate().is_err());
    }

    #[test]
    fn unknown_scan_parameter_rejected() {
        let config: ExperimentConfig = serde_json::from_str(
            r#"{"experiment":"caustic_scan","horizon":3.14,
                "scan":{"parameter":"bogus","min":1.0,"max":2.0,"steps":3}}"#,
        )
        .unwrap();
        let err = config.validate().unwrap_err();
        assert!(err.to_string().contains("bogus"));
    }
}
