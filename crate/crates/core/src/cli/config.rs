use std::collections::BTreeMap;

use serde::Deserialize;

use crate::families::{CaseId, CaseSpec, Family};
use crate::numerics::Grid;
use crate::spectrum::{SolveConfig, DEFAULT_E_TOL, DEFAULT_SCAN_POINTS};
use crate::numerics::DEFAULT_EIG_TOL;

pub const DEFAULT_MAX_LEVELS: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub r_min: f64,
    pub r_max: f64,
    pub n_points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    pub e_bracket_lo: Option<f64>,
    pub e_bracket_hi: Option<f64>,
    pub e_tol: Option<f64>,
    pub scan_points: Option<usize>,
    pub max_levels: Option<usize>,
    pub eig_tol: Option<f64>,
}

/// The JSON run configuration as written by the user.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub family: String,
    pub params: serde_json::Value,
    pub mass: f64,
    #[serde(default)]
    pub grid: Option<GridConfig>,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub output: OutputFormat,
}

/// A validated configuration ready for computation.
#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    pub family: Family,
    pub mass: f64,
    pub solve: SolveConfig,
    pub output: OutputFormat,
}

/// Configuration failure; the message names the offending field.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "config error: {}", self.0)
    }
}

fn positive(field: &str, v: Option<f64>, default: f64) -> Result<f64, ConfigError> {
    let v = v.unwrap_or(default);
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(ConfigError(format!("{field} must be positive, got {v}")))
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(text).map_err(|e| ConfigError(e.to_string()))
    }

    pub fn resolve(&self) -> Result<Problem, ConfigError> {
        let family = Family::from_params(&self.family, self.params.clone()).map_err(|e| {
            let field = if Family::TAGS.contains(&self.family.as_str()) { "params" } else { "family" };
            ConfigError(format!("{field}: {e}"))
        })?;
        if !(self.mass.is_finite() && self.mass > 0.0) {
            return Err(ConfigError(format!("mass must be positive, got {}", self.mass)));
        }
        family
            .validate(self.mass)
            .map_err(|e| ConfigError(format!("params: {e}")))?;

        let s = &self.solver;
        let (dlo, dhi) = family.default_bracket(self.mass);
        let bracket = (s.e_bracket_lo.unwrap_or(dlo), s.e_bracket_hi.unwrap_or(dhi));
        if !(bracket.0.is_finite() && bracket.1.is_finite() && bracket.0 < bracket.1) {
            return Err(ConfigError(format!(
                "solver.e_bracket_lo/e_bracket_hi: need lo < hi, got [{}, {}]",
                bracket.0, bracket.1
            )));
        }
        let max_levels = s.max_levels.unwrap_or(DEFAULT_MAX_LEVELS);
        let scan_points = s.scan_points.unwrap_or(DEFAULT_SCAN_POINTS);
        if scan_points < 2 {
            return Err(ConfigError(format!("solver.scan_points must be at least 2, got {scan_points}")));
        }
        let e_tol = positive("solver.e_tol", s.e_tol, DEFAULT_E_TOL)?;
        let eig_tol = positive("solver.eig_tol", s.eig_tol, DEFAULT_EIG_TOL)?;

        let grid = match self.grid {
            Some(g) => Grid::new(g.r_min, g.r_max, g.n_points)
                .map_err(|e| ConfigError(format!("grid: {e}")))?,
            None => family
                .default_grid(self.mass, bracket, max_levels)
                .map_err(|e| ConfigError(format!("grid (default): {e}")))?,
        };
        Ok(Problem {
            family,
            mass: self.mass,
            solve: SolveConfig {
                grid,
                e_bracket: bracket,
                e_tol,
                scan_points,
                max_levels,
                eig_tol,
            },
            output: self.output,
        })
    }
}

/// Case configuration for `specialize --config`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseConfig {
    pub case_id: String,
    pub target_params: serde_json::Value,
}

impl CaseConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(text).map_err(|e| ConfigError(e.to_string()))
    }

    pub fn from_pairs(case_id: &str, pairs: &[(String, f64)]) -> Self {
        let map: BTreeMap<String, f64> = pairs.iter().cloned().collect();
        Self {
            case_id: case_id.to_string(),
            target_params: serde_json::to_value(map).expect("string keys"),
        }
    }

    pub fn resolve(&self) -> Result<CaseSpec, ConfigError> {
        let id = CaseId::parse(&self.case_id).map_err(|e| ConfigError(format!("case_id: {e}")))?;
        CaseSpec::from_params(id, self.target_params.clone())
            .map_err(|e| ConfigError(format!("target_params: {e}")))
    }
}
