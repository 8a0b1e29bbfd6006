//! Serialized artifact shapes: the calibrated model file and the analysis
//! report bundle (see `schemas/report.schema.json`).

use leverage_alarm::calibration::derive_model;
use leverage_alarm::FirmModel;
use serde::{Deserialize, Serialize};

use crate::io::CliError;

/// On-disk model: the five primitive parameters plus derived quantities and
/// calibration diagnostics. Only `nu`, `sigma`, `r`, `a0`, `d0` are needed
/// to load one; any derived fields present are cross-checked against the
/// values they must take.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub firm: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_date: Option<String>,
    /// Annualized drift of log assets.
    pub nu: f64,
    /// Annualized volatility of log assets.
    pub sigma: f64,
    /// Annualized risk-free rate.
    pub r: f64,
    /// Asset value at the reference date.
    pub a0: f64,
    /// Debt value at the reference date.
    pub d0: f64,
    /// Standardized drift (ν − r)/σ.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    /// Killing level ln(D0/A0)/σ.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    /// Initial leverage ratio A0/D0.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub se_nu: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub se_sigma: Option<f64>,
    /// Market beta of the equity over the calibration window.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<usize>,
}

impl ModelFile {
    pub fn to_model(&self) -> Result<FirmModel, CliError> {
        let model = derive_model(self.nu, self.sigma, self.r, self.a0, self.d0)?;
        let spec = model.spec();
        for (name, file_value, derived) in [
            ("mu", self.mu, spec.mu()),
            ("c", self.c, spec.c()),
            ("r0", self.r0, model.r0()),
        ] {
            if let Some(v) = file_value {
                if (v - derived).abs() > 1e-6 * (1.0 + derived.abs()) {
                    return Err(CliError::input(format!(
                        "model file `{name}` = {v} disagrees with {derived} \
                         derived from (nu, sigma, r, a0, d0)"
                    )));
                }
            }
        }
        Ok(model)
    }
}

/// Report header: firm identity and the full parameter echo.
#[derive(Debug, Clone, Serialize)]
pub struct Metadata {
    pub firm: Option<String>,
    pub reference_date: Option<String>,
    pub nu: f64,
    pub sigma: f64,
    pub r: f64,
    pub a0: f64,
    pub d0: f64,
    pub mu: f64,
    pub c: f64,
    pub r0: f64,
}

impl Metadata {
    pub fn new(file: &ModelFile, model: &FirmModel) -> Self {
        Metadata {
            firm: file.firm.clone(),
            reference_date: file.reference_date.clone(),
            nu: model.nu(),
            sigma: model.sigma(),
            r: model.r(),
            a0: model.a0(),
            d0: model.d0(),
            mu: model.spec().mu(),
            c: model.spec().c(),
            r0: model.r0(),
        }
    }
}

/// One (R*, t) line of the alarm/insolvency probability table.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct AnalyzeRow {
    pub rstar: f64,
    pub t: f64,
    pub alpha: f64,
    /// P(alarm sounds for the last time within [0, t], insolvency follows).
    pub lp_within: f64,
    /// P(the alarm level is never visited again from the start).
    pub lp_atom: f64,
    /// P(insolvent by t).
    pub first_passage_cdf: f64,
    /// P(assets below debt at t) — the barrier-free comparison.
    pub default_probability_analytic: f64,
    /// P(alarm on at t — below R* since the last visit — and insolvency follows).
    pub q_joint_prob: f64,
    /// P(solvent at t, leverage between 1 and R*).
    pub occupancy_prob: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Table {
    pub name: String,
    pub rows: Vec<AnalyzeRow>,
}

#[derive(Debug, Clone, Serialize)]
pub struct NamedCurve {
    pub name: String,
    pub kind: String,
    pub points: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportBundle {
    pub metadata: Metadata,
    pub tables: Vec<Table>,
    pub curves: Vec<NamedCurve>,
}

/// Guard the report invariant that probability fields live in [0, 1]:
/// round-off just outside is clamped, anything worse is a numerical failure.
pub fn checked_prob(name: &str, v: f64) -> Result<f64, CliError> {
    if !v.is_finite() || !(-1e-9..=1.0 + 1e-9).contains(&v) {
        return Err(CliError::numeric(format!("{name} = {v} is not a probability")));
    }
    Ok(v.clamp(0.0, 1.0))
}
