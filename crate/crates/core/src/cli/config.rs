//! Sweep configuration: JSON in, validated grids and tolerances out.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::num;
use super::CliError;
use crate::weights::{Branch, Symbol};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    On,
    C2,
    GenOn,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum BranchSel {
    Real,
    Imaginary,
    Both,
}

impl BranchSel {
    pub fn branches(self) -> Vec<Branch> {
        match self {
            BranchSel::Real => vec![Branch::Real],
            BranchSel::Imaginary => vec![Branch::Imaginary],
            BranchSel::Both => Branch::BOTH.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    DhBulk,
    DhBoundary,
    Solve,
    Reflection,
    Limits,
}

impl Check {
    pub fn name(self) -> &'static str {
        match self {
            Check::DhBulk => "dh-bulk",
            Check::DhBoundary => "dh-boundary",
            Check::Solve => "solve",
            Check::Reflection => "reflection",
            Check::Limits => "limits",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Grids {
    #[serde(serialize_with = "num::reals")]
    pub lambda: Vec<f64>,
    #[serde(serialize_with = "num::reals")]
    pub lambda1: Vec<f64>,
    #[serde(serialize_with = "num::reals")]
    pub x: Vec<f64>,
    #[serde(serialize_with = "num::reals")]
    pub y: Vec<f64>,
    #[serde(serialize_with = "num::reals")]
    pub k: Vec<f64>,
}

impl Default for Grids {
    fn default() -> Self {
        Self {
            lambda: vec![0.2, 0.3, 0.45],
            lambda1: vec![0.1, 0.2],
            x: vec![0.15, 0.4, 0.7],
            y: vec![0.1, 0.25],
            k: vec![0.0, 0.5, 2.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Relative residual of DH forms and reflection classes.
    #[serde(serialize_with = "num::real")]
    pub residual_tol: f64,
    /// Relative singular-value threshold.
    #[serde(serialize_with = "num::real")]
    pub rank_tol: f64,
    /// Projective deviation of solved against closed-form weights.
    #[serde(serialize_with = "num::real")]
    pub projective_tol: f64,
    /// Exact algebraic identities: fugacity relation, n₃ condition, blobbed rescaling, k → 0.
    #[serde(serialize_with = "num::real")]
    pub identity_tol: f64,
    /// Rescaled large-k limit.
    #[serde(serialize_with = "num::real")]
    pub limit_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            residual_tol: 1e-10,
            rank_tol: 1e-9,
            projective_tol: 1e-8,
            identity_tol: 1e-12,
            limit_tol: 1e-4,
        }
    }
}

/// Additive shift of one weight, applied at every slot where it appears.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Perturbation {
    pub symbol: Symbol,
    #[serde(serialize_with = "num::real")]
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub model: Option<Model>,
    pub branch: BranchSel,
    pub grids: Grids,
    /// Free fugacity scale: n₂ for O(n), n₁ for C₂⁽¹⁾ and the generalized model.
    #[serde(serialize_with = "num::real")]
    pub scale: f64,
    pub tolerances: Tolerances,
    pub checks: Option<Vec<Check>>,
    pub perturbation: Option<Perturbation>,
    pub out: Option<String>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            model: None,
            branch: BranchSel::Both,
            grids: Grids::default(),
            scale: 1.0,
            tolerances: Tolerances::default(),
            checks: None,
            perturbation: None,
            out: None,
        }
    }
}

impl SweepConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn model(&self) -> Model {
        self.model.unwrap_or(Model::On)
    }

    /// Structural checks; singular parameter points are handled per point.
    pub fn validate(&self) -> Result<(), CliError> {
        let g = &self.grids;
        let model = self.model();
        let mut needed: Vec<(&str, &Vec<f64>)> = vec![("lambda", &g.lambda), ("x", &g.x)];
        if model != Model::GenOn {
            needed.push(("lambda1", &g.lambda1));
        }
        let checks = self.checks.clone().unwrap_or_default();
        if checks.contains(&Check::Reflection) || self.checks.is_none() {
            needed.push(("y", &g.y));
        }
        if model == Model::GenOn {
            needed.push(("k", &g.k));
        }
        for (name, grid) in needed {
            if grid.is_empty() {
                return Err(CliError::Config(format!("grid `{name}` is empty")));
            }
        }
        for (name, grid) in [
            ("lambda", &g.lambda),
            ("lambda1", &g.lambda1),
            ("x", &g.x),
            ("y", &g.y),
            ("k", &g.k),
        ] {
            if grid.iter().any(|v| !v.is_finite()) {
                return Err(CliError::Config(format!(
                    "grid `{name}` has a non-finite entry"
                )));
            }
        }
        let t = &self.tolerances;
        for (name, v) in [
            ("residual_tol", t.residual_tol),
            ("rank_tol", t.rank_tol),
            ("projective_tol", t.projective_tol),
            ("identity_tol", t.identity_tol),
            ("limit_tol", t.limit_tol),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(CliError::Config(format!(
                    "tolerance `{name}` must be positive"
                )));
            }
        }
        if !self.scale.is_finite() {
            return Err(CliError::Config("scale must be finite".into()));
        }
        if let Some(c) = &self.checks {
            if c.is_empty() {
                return Err(CliError::Config("check list is empty".into()));
            }
            if c.contains(&Check::Limits) && model != Model::GenOn {
                return Err(CliError::Config("limits require model gen-on".into()));
            }
        }
        if let Some(p) = &self.perturbation {
            if !p.delta.is_finite() {
                return Err(CliError::Config("perturbation delta must be finite".into()));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        SweepConfig::default().validate().unwrap();
    }

    #[test]
    fn parses_partial_config() {
        let c: SweepConfig =
            serde_json::from_str(r#"{"model":"c2","grids":{"lambda":[0.25]}}"#).unwrap();
        assert_eq!(c.model(), Model::C2);
        assert_eq!(c.grids.lambda, vec![0.25]);
        assert_eq!(c.grids.x, Grids::default().x);
    }

    #[test]
    fn rejects_unknown_fields_and_empty_grids() {
        assert!(serde_json::from_str::<SweepConfig>(r#"{"modle":"on"}"#).is_err());
        let c: SweepConfig = serde_json::from_str(r#"{"grids":{"lambda":[]}}"#).unwrap();
        assert!(matches!(c.validate(), Err(CliError::Config(_))));
        let c: SweepConfig = serde_json::from_str(r#"{"tolerances":{"residual_tol":0}}"#).unwrap();
        assert!(c.validate().is_err());
        let c: SweepConfig = serde_json::from_str(r#"{"model":"on","checks":["limits"]}"#).unwrap();
        assert!(c.validate().is_err());
    }

    #[test]
    fn perturbation_round_trip() {
        let c: SweepConfig =
            serde_json::from_str(r#"{"perturbation":{"symbol":"beta1","delta":0.1}}"#).unwrap();
        let p = c.perturbation.clone().unwrap();
        assert_eq!(p.symbol, Symbol::Beta1);
        let back: SweepConfig = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(back, c);
    }
}
