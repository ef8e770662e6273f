//! The three potential families, their effective Schrödinger-level
//! potentials and superpotentials, and the named special cases of the
//! five-parameter model.

mod cases;
mod five_param;
mod kg;

pub use cases::{
    eval_case_closed_form, eval_case_closed_form_complex, eval_case_shape, pt_scarf2_identity,
    round_trip, specialize, AbParams, CaseId, CaseMapping, CaseSpec, LambdaParams, RoundTrip,
    Tanh2Params, WellParams, ROUND_TRIP_SAMPLES,
};
pub use five_param::{eval_exponential, FiveParamExp};
pub use kg::{HarmonicKG, MorseKG, MorseSign};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{Grid, GridFunction};
use crate::susy::SuperpotentialSpec;

/// Default number of grid points for generated grids.
pub const DEFAULT_POINTS: usize = 6001;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", content = "params", rename_all = "snake_case")]
pub enum Family {
    FiveParamExp(FiveParamExp),
    Harmonic(HarmonicKG),
    Morse(MorseKG),
}

impl Family {
    pub const TAGS: [&'static str; 3] = ["five_param_exp", "harmonic", "morse"];

    /// Builds a family from its tag and a JSON object of parameters.
    pub fn from_params(tag: &str, params: serde_json::Value) -> Result<Self> {
        let bad = |e: serde_json::Error| Error::Inadmissible(format!("{tag} params: {e}"));
        match tag {
            "five_param_exp" => Ok(Family::FiveParamExp(serde_json::from_value(params).map_err(bad)?)),
            "harmonic" => Ok(Family::Harmonic(serde_json::from_value(params).map_err(bad)?)),
            "morse" => Ok(Family::Morse(serde_json::from_value(params).map_err(bad)?)),
            other => Err(Error::Unsupported(format!(
                "unknown family `{other}`, expected one of {:?}",
                Self::TAGS
            ))),
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Family::FiveParamExp(_) => "five_param_exp",
            Family::Harmonic(_) => "harmonic",
            Family::Morse(_) => "morse",
        }
    }

    pub fn validate(&self, mass: f64) -> Result<()> {
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::Inadmissible(format!("mass must be positive, got {mass}")));
        }
        match self {
            Family::FiveParamExp(p) => p.validate(),
            Family::Harmonic(p) => p.validate(),
            Family::Morse(p) => p.validate(),
        }
    }

    /// Whether the effective potential depends on the trial energy.
    pub fn is_energy_dependent(&self) -> bool {
        !matches!(self, Family::FiveParamExp(_))
    }

    /// Closed-form spectra are offered for the five-parameter family only when g = 0.
    pub fn supports_analytic(&self) -> bool {
        match self {
            Family::FiveParamExp(p) => p.g == 0.0,
            _ => true,
        }
    }

    /// Lower edge of the continuum in ε; `None` for confining potentials.
    pub fn continuum_threshold(&self) -> Option<f64> {
        match self {
            Family::FiveParamExp(p) => Some(p.continuum_threshold()),
            Family::Harmonic(_) => None,
            Family::Morse(_) => Some(0.0),
        }
    }

    pub fn effective_value(&self, mass: f64, energy: f64, r: f64) -> Result<f64> {
        match self {
            Family::FiveParamExp(p) => p.eval(r),
            Family::Harmonic(p) => Ok(p.effective_value(mass, energy, r)),
            Family::Morse(p) => Ok(p.effective_value(mass, energy, r, MorseSign::Attractive)),
        }
    }

    /// `U(r)` in `-u'' + U u = (E² - M²) u`.
    pub fn effective_potential(&self, mass: f64, energy: f64, grid: &Grid) -> Result<GridFunction> {
        self.effective_potential_signed(mass, energy, grid, MorseSign::Attractive)
    }

    /// As [`Family::effective_potential`], with an explicit Morse sign.
    pub fn effective_potential_signed(
        &self,
        mass: f64,
        energy: f64,
        grid: &Grid,
        sign: MorseSign,
    ) -> Result<GridFunction> {
        if !energy.is_finite() {
            return Err(Error::Inadmissible(format!("trial energy must be finite, got {energy}")));
        }
        let mut singular = Vec::new();
        let mut values = Vec::with_capacity(grid.len());
        for (i, r) in grid.nodes().enumerate() {
            let v = match self {
                Family::Morse(p) => Ok(p.effective_value(mass, energy, r, sign)),
                _ => self.effective_value(mass, energy, r),
            };
            match v {
                Ok(v) if v.is_finite() => values.push(v),
                _ => {
                    singular.push(i);
                    values.push(0.0);
                }
            }
        }
        if let Some(&first) = singular.first() {
            return Err(Error::SingularNodes {
                first_r: grid.node(first),
                nodes: singular,
            });
        }
        GridFunction::new(*grid, values)
    }

    pub fn superpotential_spec(&self, mass: f64, energy: f64) -> Result<SuperpotentialSpec> {
        match self {
            Family::FiveParamExp(p) => Ok(p.superpotential_spec()),
            Family::Harmonic(p) => Ok(SuperpotentialSpec::linear(p.param(mass, energy)?)),
            Family::Morse(p) => Ok(p.superpotential_spec(mass, energy)),
        }
    }

    /// `ε₀` in `U = W² - W' + ε₀`.
    pub fn ground_offset(&self, mass: f64, energy: f64) -> Result<f64> {
        match self {
            Family::FiveParamExp(p) => Ok(p.ground_offset()),
            Family::Harmonic(p) => p.param(mass, energy),
            Family::Morse(p) => Ok(-p.first_param(mass, energy).powi(2)),
        }
    }

    pub fn default_bracket(&self, mass: f64) -> (f64, f64) {
        match self {
            Family::Harmonic(_) => (mass + 1e-6, mass + 50.0),
            _ => (-mass + 1e-6, mass - 1e-6),
        }
    }

    /// Grid wide enough that the potential walls (or the exponential tails)
    /// contain the requested levels.
    pub fn default_grid(&self, mass: f64, bracket: (f64, f64), max_levels: usize) -> Result<Grid> {
        match self {
            Family::Harmonic(p) => {
                let a_lo = p.param(mass, bracket.0)?;
                let a_hi = p.param(mass, bracket.1)?;
                let target = (2.0 * max_levels as f64 + 1.0) * a_hi;
                let half = ((target + 40.0) / (a_lo * a_lo)).sqrt();
                Grid::new(-half, half, DEFAULT_POINTS)
            }
            Family::Morse(p) => {
                // Left wall where c²x² - 2bx = 40 with x = e^{-αr}.
                let b = p.drive(mass, bracket.0).abs().max(p.drive(mass, bracket.1).abs());
                let c2 = p.coupling().powi(2);
                let x = (b + (b * b + 40.0 * c2).sqrt()) / c2;
                let left = -x.ln() / p.alpha - 1.0 / p.alpha;
                Grid::new(left, 25.0 / p.alpha, DEFAULT_POINTS)
            }
            Family::FiveParamExp(p) => match p.singular_point() {
                Some(r_star) => Grid::new(r_star + 1e-3, r_star + 25.0 / p.alpha, DEFAULT_POINTS),
                None => Grid::new(-25.0 / p.alpha, 25.0 / p.alpha, DEFAULT_POINTS),
            },
        }
    }
}
