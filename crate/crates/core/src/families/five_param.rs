use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::susy::{SuperpotentialForm, SuperpotentialSpec};

/// Five-parameter exponential-type potential
///
/// ```text
/// V(r) = c1/(e^{2αr}+q) + c2/(e^{2αr}+q)² + (c3/(e^{2αr}+q) + c4/(e^{2αr}+q)²)·e^{αr}
/// c1 = Q3² + g - Q2²/q + 2αQ2      c2 = Q2² - qQ3² - 2αqQ2
/// c3 = gQ3/Q2 - Q2Q3/q + αQ3       c4 = 2Q2Q3 - 2αqQ3
/// ```
///
/// The parameters describe the Schrödinger-level effective potential
/// directly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiveParamExp {
    pub alpha: f64,
    pub q: f64,
    #[serde(default)]
    pub g: f64,
    #[serde(rename = "Q2")]
    pub q2: f64,
    #[serde(rename = "Q3", default)]
    pub q3: f64,
}

impl FiveParamExp {
    pub fn validate(&self) -> Result<()> {
        let all = [self.alpha, self.q, self.g, self.q2, self.q3];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::Inadmissible("five_param_exp: parameters must be finite".into()));
        }
        if !(self.alpha > 0.0) {
            return Err(Error::Inadmissible(format!(
                "five_param_exp: alpha must be positive, got {}",
                self.alpha
            )));
        }
        if !((-1.0..0.0).contains(&self.q) || self.q > 0.0) {
            return Err(Error::Inadmissible(format!(
                "five_param_exp: q must satisfy -1 <= q < 0 or q > 0, got {}",
                self.q
            )));
        }
        if self.g != 0.0 && self.q2 == 0.0 {
            return Err(Error::Inadmissible(
                "five_param_exp: g != 0 requires Q2 != 0 (g/Q2 term)".into(),
            ));
        }
        Ok(())
    }

    /// Zero of `e^{2αr} + q` when q < 0.
    pub fn singular_point(&self) -> Option<f64> {
        (self.q < 0.0).then(|| (-self.q).ln() / (2.0 * self.alpha))
    }

    pub fn eval(&self, r: f64) -> Result<f64> {
        eval_exponential(self.alpha, self.q, self.g, self.q2, Complex64::new(self.q3, 0.0), r)
            .map(|v| v.re)
    }

    /// `W²`-constant of the factorization: `g/(2a) - a/(2q)`.
    pub fn asymptote(&self, a: f64) -> f64 {
        let lead = if self.g == 0.0 { 0.0 } else { self.g / (2.0 * a) };
        lead - a / (2.0 * self.q)
    }

    /// Parameter of level k (0 = ground): `Q2 + 2kαq`.
    pub fn level_param(&self, k: usize) -> f64 {
        self.q2 + 2.0 * k as f64 * self.alpha * self.q
    }

    /// Whether `exp(-∫W(·; a))` is normalizable on the family's domain.
    pub fn ground_normalizable(&self, a: f64) -> bool {
        let at_infinity = self.asymptote(a);
        if !(at_infinity > 0.0) {
            return false;
        }
        if self.q > 0.0 {
            at_infinity + a / self.q < 0.0
        } else {
            // W ~ (a + Q3√(-q)) / (-2αq (r - r*)) near the singular point.
            a + self.q3 * (-self.q).sqrt() < 0.0
        }
    }

    /// Number of consecutive normalizable levels starting at the ground state.
    pub fn bound_levels(&self) -> usize {
        const CAP: usize = 100_000;
        (0..CAP)
            .take_while(|&k| self.ground_normalizable(self.level_param(k)))
            .count()
    }

    /// `ε₀` in `V = W² - W' + ε₀` at `a = Q2`.
    pub fn ground_offset(&self) -> f64 {
        -self.asymptote(self.q2).powi(2)
    }

    pub fn superpotential_spec(&self) -> SuperpotentialSpec {
        SuperpotentialSpec::new(
            SuperpotentialForm::Exponential {
                alpha: self.alpha,
                q: self.q,
                g: self.g,
                q3: self.q3,
            },
            self.q2,
            2.0 * self.alpha * self.q,
            Some(self.bound_levels()),
        )
    }

    /// Value approached as r → ∞ (always 0) and, for q > 0, as r → -∞ (g/q).
    pub fn continuum_threshold(&self) -> f64 {
        if self.q > 0.0 {
            (self.g / self.q).min(0.0)
        } else {
            0.0
        }
    }
}

/// Evaluates the exponential-type form with a possibly complex `Q3`.
pub fn eval_exponential(alpha: f64, q: f64, g: f64, q2: f64, q3: Complex64, r: f64) -> Result<Complex64> {
    let s = (alpha * r).exp();
    let den = s * s + q;
    if !den.is_finite() || den.abs() <= 1e-300 || !s.is_finite() {
        return Err(Error::SingularNodes {
            nodes: vec![0],
            first_r: r,
        });
    }
    let c1 = q3 * q3 + g - q2 * q2 / q + 2.0 * alpha * q2;
    let c2 = Complex64::new(q2 * q2 - 2.0 * alpha * q * q2, 0.0) - q * q3 * q3;
    let g_term = if g == 0.0 || q3 == Complex64::new(0.0, 0.0) {
        Complex64::new(0.0, 0.0)
    } else {
        g * q3 / q2
    };
    let c3 = g_term - q2 * q3 / q + alpha * q3;
    let c4 = 2.0 * q2 * q3 - 2.0 * alpha * q * q3;
    Ok(c1 / den + c2 / (den * den) + (c3 / den + c4 / (den * den)) * s)
}
