//! Experiment configuration, read from JSON. Unknown keys are errors.

use std::path::Path;

use serde::{Deserialize, Serialize};
use theta_modular::{QuotientSpec, TruncationBudget};
use theta_pv::{m_schedule, QuadratureConfig};

use crate::CliError;

/// Quotient parameters as written in JSON: `{"eta": [[a, alpha], ...], "b": 2, "c": 1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecInput {
    pub eta: Vec<(u32, i32)>,
    pub b: u32,
    pub c: u32,
}

impl SpecInput {
    pub fn build(&self) -> Result<QuotientSpec, CliError> {
        QuotientSpec::new(self.eta.clone(), self.b, self.c).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn parse_inline(json: &str) -> Result<Self, CliError> {
        serde_json::from_str(json).map_err(|e| CliError::Config(format!("spec: {e}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Schedule {
    #[serde(default = "default_delta")]
    pub delta: f64,
}

fn default_delta() -> f64 {
    0.05
}

/// Either an explicit list of `m`, or `{"schedule": {"delta": δ}}` for the
/// largest admissible `m` at each `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MValues {
    List(Vec<f64>),
    Schedule { schedule: Schedule },
}

impl Default for MValues {
    fn default() -> Self {
        MValues::Schedule { schedule: Schedule { delta: default_delta() } }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuadInput {
    pub panels_per_segment: usize,
    pub nodes_per_panel: usize,
    pub theta_nodes: usize,
    pub r_sequence: Vec<f64>,
    pub rel_tol: f64,
    pub max_depth: u32,
}

impl Default for QuadInput {
    fn default() -> Self {
        let q = QuadratureConfig::default();
        QuadInput {
            panels_per_segment: q.panels_per_segment,
            nodes_per_panel: q.nodes_per_panel,
            theta_nodes: q.theta_nodes,
            r_sequence: q.r_sequence,
            rel_tol: q.rel_tol,
            max_depth: q.max_depth,
        }
    }
}

impl From<&QuadInput> for QuadratureConfig {
    fn from(q: &QuadInput) -> Self {
        QuadratureConfig {
            panels_per_segment: q.panels_per_segment,
            nodes_per_panel: q.nodes_per_panel,
            theta_nodes: q.theta_nodes,
            r_sequence: q.r_sequence.clone(),
            rel_tol: q.rel_tol,
            max_depth: q.max_depth,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TruncationInput {
    pub product_terms: usize,
    pub sum_radius: usize,
    pub target_rel_err: f64,
}

impl Default for TruncationInput {
    fn default() -> Self {
        let t = TruncationBudget::default();
        TruncationInput { product_terms: t.product_terms, sum_radius: t.sum_radius, target_rel_err: t.target_rel_err }
    }
}

impl From<TruncationInput> for TruncationBudget {
    fn from(t: TruncationInput) -> Self {
        TruncationBudget { product_terms: t.product_terms, sum_radius: t.sum_radius, target_rel_err: t.target_rel_err }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Outputs {
    pub coefficients: String,
    pub near_pole: String,
    pub report: String,
}

impl Default for Outputs {
    fn default() -> Self {
        Outputs { coefficients: "coefficients.csv".into(), near_pole: "near_pole.csv".into(), report: "report.txt".into() }
    }
}

/// Radius of the q-circle used for extraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BetaChoice {
    /// Minimizer of `ln|f_m(iβ/2π)| + βν`, found numerically.
    #[default]
    Measured,
    /// `π√(2/ν)`.
    Saddle,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_spec_id")]
    pub spec_id: String,
    pub spec: SpecInput,
    #[serde(default)]
    pub n_grid: Vec<f64>,
    #[serde(default)]
    pub m_values: MValues,
    #[serde(default)]
    pub quad: QuadInput,
    #[serde(default)]
    pub truncation: TruncationInput,
    #[serde(default)]
    pub outputs: Outputs,
    #[serde(default = "default_threads")]
    pub threads: usize,
    #[serde(default)]
    pub beta: BetaChoice,
    /// Also compare `f_m(iβ/2π)` with the near-pole main term.
    #[serde(default = "yes")]
    pub near_pole: bool,
    /// Fill `runtime_ms`; off by default because wall-clock time is not reproducible.
    #[serde(default)]
    pub timing: bool,
}

fn default_spec_id() -> String {
    "spec".into()
}

fn default_threads() -> usize {
    1
}

fn yes() -> bool {
    true
}

/// A grid point moved onto the exponent lattice `δ_q + ℤ_{≥0}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Snap {
    pub requested: f64,
    pub nu: f64,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: ExperimentConfig = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.spec.build()?;
        if self.threads == 0 {
            return Err(CliError::Config("threads must be positive".into()));
        }
        if let Some(n) = self.n_grid.iter().find(|n| !(n.is_finite() && **n > 0.0)) {
            return Err(CliError::Config(format!("n_grid entries must be positive, got {n}")));
        }
        match &self.m_values {
            MValues::List(ms) => {
                if let Some(m) = ms.iter().find(|m| !m.is_finite()) {
                    return Err(CliError::Config(format!("m_values entries must be finite, got {m}")));
                }
            }
            MValues::Schedule { schedule } => {
                if !(schedule.delta > 0.0 && schedule.delta < 0.5) {
                    return Err(CliError::Config(format!("schedule delta must lie in (0, 1/2), got {}", schedule.delta)));
                }
            }
        }
        let q = &self.quad;
        if q.nodes_per_panel < 2 || q.panels_per_segment == 0 || q.r_sequence.is_empty() || q.r_sequence.iter().any(|r| !(*r > 0.0)) || !(q.rel_tol > 0.0) {
            return Err(CliError::Config("quad: need nodes_per_panel >= 2, panels_per_segment >= 1, positive radii and rel_tol".into()));
        }
        let t = &self.truncation;
        if t.product_terms == 0 || t.sum_radius == 0 || !(t.target_rel_err > 0.0) {
            return Err(CliError::Config("truncation: all fields must be positive".into()));
        }
        self.snapped_grid()?;
        Ok(())
    }

    pub fn quadrature(&self) -> QuadratureConfig {
        (&self.quad).into()
    }

    pub fn budget(&self) -> TruncationBudget {
        self.truncation.into()
    }

    /// The grid moved onto `δ_q + ℤ_{≥0}`, nearest lattice point first.
    pub fn snapped_grid(&self) -> Result<Vec<Snap>, CliError> {
        let spec = self.spec.build()?;
        let dq = spec.delta_q();
        let base = *dq.numer() as f64 / *dq.denom() as f64;
        self.n_grid
            .iter()
            .map(|&n| {
                let k = (n - base).round();
                if k < 0.0 {
                    return Err(CliError::Config(format!("n = {n} is below the first exponent {base}")));
                }
                Ok(Snap { requested: n, nu: base + k })
            })
            .collect()
    }

    /// `m` values for the grid point `nu`.
    pub fn ms_at(&self, nu: f64) -> Vec<f64> {
        match &self.m_values {
            MValues::List(ms) => ms.clone(),
            MValues::Schedule { schedule } => vec![m_schedule(nu, schedule.delta) as f64],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_takes_defaults() {
        let cfg = ExperimentConfig::from_json(r#"{"spec": {"eta": [[1, -1]], "b": 2, "c": 1}, "n_grid": [400]}"#).unwrap();
        assert_eq!(cfg.threads, 1);
        assert_eq!(cfg.beta, BetaChoice::Measured);
        assert_eq!(cfg.m_values, MValues::default());
        let snaps = cfg.snapped_grid().unwrap();
        assert_eq!(snaps[0].nu, 400.0 - 1.0 / 24.0);
        assert_eq!(cfg.ms_at(snaps[0].nu), vec![3.0]);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let r = ExperimentConfig::from_json(r#"{"spec": {"eta": [[1, -1]], "b": 2, "c": 1}, "n_gird": [400]}"#);
        assert!(matches!(r, Err(CliError::Config(_))));
        let r = ExperimentConfig::from_json(r#"{"spec": {"eta": [[1, -1]], "b": 2, "c": 1, "d": 3}}"#);
        assert!(r.is_err());
        let r = ExperimentConfig::from_json(r#"{"spec": {"eta": [[1, -1]], "b": 2, "c": 1}, "quad": {"tol": 1}}"#);
        assert!(r.is_err());
    }

    #[test]
    fn explicit_m_list_and_schedule() {
        let cfg = ExperimentConfig::from_json(r#"{"spec": {"eta": [[1, -1]], "b": 4, "c": 3}, "m_values": [1, 2.5]}"#).unwrap();
        assert_eq!(cfg.ms_at(100.0), vec![1.0, 2.5]);
        let cfg = ExperimentConfig::from_json(r#"{"spec": {"eta": [[1, -1]], "b": 4, "c": 3}, "m_values": {"schedule": {"delta": 0.1}}}"#).unwrap();
        assert_eq!(cfg.ms_at(2500.0), vec![m_schedule(2500.0, 0.1) as f64]);
    }

    #[test]
    fn invalid_specs_and_grids() {
        assert!(ExperimentConfig::from_json(r#"{"spec": {"eta": [[1, 1]], "b": 2, "c": 1}}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"spec": {"eta": [[1, -1]], "b": 2, "c": 1}, "n_grid": [-3]}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"spec": {"eta": [[1, -1]], "b": 2, "c": 1}, "threads": 0}"#).is_err());
    }
}
