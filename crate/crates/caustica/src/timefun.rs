//! Time-dependent coefficient profiles on `[0, T]`.
//!
//! `lambda(t)` and `mu(t)` (and the force `f(t) = -mu(t)`) are represented as
//! [`CoefficientProfile`] values. Profiles are immutable after construction
//! and safe to share across threads.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A time-dependent real coefficient defined on `[0, T]`.
///
/// Evaluation is exact for `Constant`, `PiecewiseConstant` and `Polynomial`,
/// and linear interpolation for `Tabulated`. At `PiecewiseConstant`
/// breakpoints the left-continuous convention applies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProfileKind {
    Constant {
        value: f64,
    },
    /// `values[i]` holds on `(breakpoints[i], breakpoints[i+1]]`; the first
    /// piece also covers `t = 0`. `breakpoints` are strictly increasing with
    /// first `0` and last `T`.
    PiecewiseConstant {
        breakpoints: Vec<f64>,
        values: Vec<f64>,
    },
    /// A single polynomial in `t` over all of `[0, T]`, or one polynomial per
    /// piece when `breakpoints` is given (same convention as above).
    Polynomial {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        breakpoints: Option<Vec<f64>>,
        /// Coefficient lists, lowest order first, one per piece.
        pieces: Vec<Vec<f64>>,
    },
    /// Linear interpolation of `(t, v)` samples; `t` strictly increasing and
    /// covering `[0, T]`.
    Tabulated {
        t: Vec<f64>,
        v: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientProfile {
    #[serde(flatten)]
    kind: ProfileKind,
    /// End of the time domain, `T > 0`.
    pub horizon: f64,
}

impl CoefficientProfile {
    pub fn new(kind: ProfileKind, horizon: f64) -> Result<Self> {
        let profile = CoefficientProfile { kind, horizon };
        profile.validate()?;
        Ok(profile)
    }

    pub fn constant(value: f64, horizon: f64) -> Self {
        CoefficientProfile::new(ProfileKind::Constant { value }, horizon).expect("constant profile")
    }

    pub fn zero(horizon: f64) -> Self {
        CoefficientProfile::constant(0.0, horizon)
    }

    pub fn polynomial(coefficients: Vec<f64>, horizon: f64) -> Result<Self> {
        CoefficientProfile::new(
            ProfileKind::Polynomial {
                breakpoints: None,
                pieces: vec![coefficients],
            },
            horizon,
        )
    }

    pub fn tabulated(t: Vec<f64>, v: Vec<f64>, horizon: f64) -> Result<Self> {
        CoefficientProfile::new(ProfileKind::Tabulated { t, v }, horizon)
    }

    pub fn kind(&self) -> &ProfileKind {
        &self.kind
    }

    fn validate(&self) -> Result<()> {
        if !(self.horizon > 0.0) || !self.horizon.is_finite() {
            return Err(Error::InvalidProfile(format!(
                "horizon must be positive and finite, got {}",
                self.horizon
            )));
        }
        let check_finite = |vals: &[f64], what: &str| -> Result<()> {
            if vals.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidProfile(format!("non-finite {what}")));
            }
            Ok(())
        };
        let check_breaks = |b: &[f64]| -> Result<()> {
            if b.len() < 2 {
                return Err(Error::InvalidProfile("need at least 2 breakpoints".into()));
            }
            if b[0] != 0.0 || (b[b.len() - 1] - self.horizon).abs() > 1e-12 * self.horizon {
                return Err(Error::InvalidProfile(
                    "breakpoints must start at 0 and end at T".into(),
                ));
            }
            if b.windows(2).any(|w| w[1] <= w[0]) {
                return Err(Error::InvalidProfile(
                    "breakpoints must be strictly increasing".into(),
                ));
            }
            Ok(())
        };
        match &self.kind {
            ProfileKind::Constant { value } => check_finite(&[*value], "constant value"),
            ProfileKind::PiecewiseConstant {
                breakpoints,
                values,
            } => {
                check_breaks(breakpoints)?;
                check_finite(values, "piece value")?;
                if values.len() != breakpoints.len() - 1 {
                    return Err(Error::InvalidProfile(format!(
                        "{} breakpoints require {} values, got {}",
                        breakpoints.len(),
                        breakpoints.len() - 1,
                        values.len()
                    )));
                }
                Ok(())
            }
            ProfileKind::Polynomial {
                breakpoints,
                pieces,
            } => {
                if pieces.is_empty() || pieces.iter().any(|p| p.is_empty()) {
                    return Err(Error::InvalidProfile("empty polynomial piece".into()));
                }
                for p in pieces {
                    check_finite(p, "polynomial coefficient")?;
                }
                match breakpoints {
                    None => {
                        if pieces.len() != 1 {
                            return Err(Error::InvalidProfile(
                                "multiple pieces require breakpoints".into(),
                            ));
                        }
                        Ok(())
                    }
                    Some(b) => {
                        check_breaks(b)?;
                        if pieces.len() != b.len() - 1 {
                            return Err(Error::InvalidProfile(format!(
                                "{} breakpoints require {} pieces, got {}",
                                b.len(),
                                b.len() - 1,
                                pieces.len()
                            )));
                        }
                        Ok(())
                    }
                }
            }
            ProfileKind::Tabulated { t, v } => {
                if t.len() < 2 || t.len() != v.len() {
                    return Err(Error::InvalidProfile(
                        "tabulated profile needs matching t/v arrays of length >= 2".into(),
                    ));
                }
                check_finite(t, "sample time")?;
                check_finite(v, "sample value")?;
                if t.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(Error::InvalidProfile(
                        "sample times must be strictly increasing".into(),
                    ));
                }
                if t[0] > 0.0 || t[t.len() - 1] < self.horizon * (1.0 - 1e-12) {
                    return Err(Error::InvalidProfile(
                        "samples must cover [0, T]".into(),
                    ));
                }
                Ok(())
            }
        }
    }

    /// Evaluate the profile at `t in [0, T]`.
    pub fn eval(&self, t: f64) -> Result<f64> {
        // Tiny slack for accumulated grid arithmetic at the endpoints.
        let slack = 1e-12 * self.horizon.max(1.0);
        if t < -slack || t > self.horizon + slack {
            return Err(Error::OutOfDomain {
                t,
                horizon: self.horizon,
            });
        }
        let t = t.clamp(0.0, self.horizon);
        Ok(match &self.kind {
            ProfileKind::Constant { value } => *value,
            ProfileKind::PiecewiseConstant {
                breakpoints,
                values,
            } => values[piece_index(breakpoints, t)],
            ProfileKind::Polynomial {
                breakpoints,
                pieces,
            } => {
                let idx = match breakpoints {
                    None => 0,
                    Some(b) => piece_index(b, t),
                };
                horner(&pieces[idx], t)
            }
            ProfileKind::Tabulated { t: ts, v } => {
                // Exact at sample times; linear in between.
                match ts.binary_search_by(|s| s.partial_cmp(&t).unwrap()) {
                    Ok(i) => v[i],
                    Err(i) => {
                        let i = i.clamp(1, ts.len() - 1);
                        let w = (t - ts[i - 1]) / (ts[i] - ts[i - 1]);
                        v[i - 1] + w * (v[i] - v[i - 1])
                    }
                }
            }
        })
    }

    /// Parse a profile from its JSON representation.
    pub fn parse(spec: &str) -> Result<Self> {
        let profile: CoefficientProfile =
            serde_json::from_str(spec).map_err(|e| Error::Parse(e.to_string()))?;
        profile.validate()?;
        Ok(profile)
    }

    /// Parse from an already-deserialized JSON value.
    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let profile: CoefficientProfile =
            serde_json::from_value(value.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        profile.validate()?;
        Ok(profile)
    }

    /// The negated profile, `f(t) = -mu(t)`.
    pub fn negated(&self) -> Self {
        let kind = match &self.kind {
            ProfileKind::Constant { value } => ProfileKind::Constant { value: -value },
            ProfileKind::PiecewiseConstant {
                breakpoints,
                values,
            } => ProfileKind::PiecewiseConstant {
                breakpoints: breakpoints.clone(),
                values: values.iter().map(|v| -v).collect(),
            },
            ProfileKind::Polynomial {
                breakpoints,
                pieces,
            } => ProfileKind::Polynomial {
                breakpoints: breakpoints.clone(),
                pieces: pieces
                    .iter()
                    .map(|p| p.iter().map(|c| -c).collect())
                    .collect(),
            },
            ProfileKind::Tabulated { t, v } => ProfileKind::Tabulated {
                t: t.clone(),
                v: v.iter().map(|x| -x).collect(),
            },
        };
        CoefficientProfile {
            kind,
            horizon: self.horizon,
        }
    }

    /// Largest `|value|` over a uniform sample grid; errors on non-finite
    /// values (the spectral module requires bounded coefficients).
    pub fn sup_abs_on_grid(&self, n: usize) -> Result<f64> {
        let mut sup: f64 = 0.0;
        for i in 0..=n {
            let t = self.horizon * i as f64 / n as f64;
            let v = self.eval(t)?;
            if !v.is_finite() {
                return Err(Error::UnboundedCoefficient);
            }
            sup = sup.max(v.abs());
        }
        Ok(sup)
    }
}

/// Index of the piece containing `t` under the left-continuous convention:
/// piece `i` covers `(b[i], b[i+1]]`, with piece 0 also covering `t = 0`.
fn piece_index(breakpoints: &[f64], t: f64) -> usize {
    if t <= breakpoints[0] {
        return 0;
    }
    match breakpoints.partition_point(|b| *b < t) {
        0 => 0,
        i => (i - 1).min(breakpoints.len() - 2),
    }
}

fn horner(coeffs: &[f64], t: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c)
}
