use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::susy::SuperpotentialSpec;

/// `V(r) = V0·r²/2` as equal scalar and vector potential.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HarmonicKG {
    #[serde(rename = "V0")]
    pub v0: f64,
}

impl HarmonicKG {
    pub fn validate(&self) -> Result<()> {
        if !(self.v0.is_finite() && self.v0 > 0.0) {
            return Err(Error::Inadmissible(format!("harmonic: V0 must be positive, got {}", self.v0)));
        }
        Ok(())
    }

    /// `a = sqrt((M+E)·V0)`; needs `M + E > 0`.
    pub fn param(&self, mass: f64, energy: f64) -> Result<f64> {
        let s = (mass + energy) * self.v0;
        if !(s > 0.0) {
            return Err(Error::Inadmissible(format!(
                "harmonic: (M+E)·V0 = {s} must be positive"
            )));
        }
        Ok(s.sqrt())
    }

    pub fn effective_value(&self, mass: f64, energy: f64, r: f64) -> f64 {
        (mass + energy) * self.v0 * r * r
    }
}

/// `S(r) = S0·e^{-αr}`, `V(r) = V0·e^{-αr}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorseKG {
    #[serde(rename = "S0")]
    pub s0: f64,
    #[serde(rename = "V0")]
    pub v0: f64,
    pub alpha: f64,
}

/// Sign of the linear exponential term in the Morse effective potential.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MorseSign {
    /// `-2(M·S0 + E·V0)e^{-αr}`, the sign that factorizes.
    #[default]
    Attractive,
    /// `+2(M·S0 + E·V0)e^{-αr}`.
    Literal,
}

impl MorseKG {
    pub fn validate(&self) -> Result<()> {
        if !(self.s0.is_finite() && self.v0.is_finite()) {
            return Err(Error::Inadmissible("morse: S0 and V0 must be finite".into()));
        }
        if !(self.alpha.is_finite() && self.alpha > 0.0) {
            return Err(Error::Inadmissible(format!(
                "morse: alpha must be positive, got {}",
                self.alpha
            )));
        }
        if !(self.s0 * self.s0 > self.v0 * self.v0) {
            return Err(Error::Inadmissible(format!(
                "morse: need S0^2 > V0^2 for a real coupling sqrt(S0^2 - V0^2), got S0 = {}, V0 = {}",
                self.s0, self.v0
            )));
        }
        Ok(())
    }

    /// `sqrt(S0² - V0²)`.
    pub fn coupling(&self) -> f64 {
        (self.s0 * self.s0 - self.v0 * self.v0).sqrt()
    }

    /// `M·S0 + E·V0`.
    pub fn drive(&self, mass: f64, energy: f64) -> f64 {
        mass * self.s0 + energy * self.v0
    }

    /// `a_1 = -α/2 + (M·S0 + E·V0)/sqrt(S0² - V0²)`.
    pub fn first_param(&self, mass: f64, energy: f64) -> f64 {
        -0.5 * self.alpha + self.drive(mass, energy) / self.coupling()
    }

    pub fn effective_value(&self, mass: f64, energy: f64, r: f64, sign: MorseSign) -> f64 {
        let x = (-self.alpha * r).exp();
        let c = self.coupling();
        let linear = 2.0 * self.drive(mass, energy) * x;
        let quadratic = c * c * x * x;
        match sign {
            MorseSign::Attractive => quadratic - linear,
            MorseSign::Literal => quadratic + linear,
        }
    }

    pub fn superpotential_spec(&self, mass: f64, energy: f64) -> SuperpotentialSpec {
        SuperpotentialSpec::morse(self.first_param(mass, energy), self.coupling(), self.alpha)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn morse() -> MorseKG {
        MorseKG {
            s0: 1.0,
            v0: 0.5,
            alpha: 1.0,
        }
    }

    #[test]
    fn harmonic_effective_value() {
        let h = HarmonicKG { v0: 1.0 };
        assert!((h.effective_value(1.0, 1.6169, 1.0) - 2.6169).abs() < 1e-12);
        assert!((h.param(1.0, 1.6169).unwrap() - 1.61768).abs() < 1e-4);
        assert!(h.param(1.0, -1.0).is_err());
    }

    #[test]
    fn morse_effective_value_at_zero_energy() {
        let m = morse();
        for r in [0.0f64, 0.5, 2.0] {
            let expected = 0.75 * (-2.0 * r).exp() - 2.0 * (-r).exp();
            let got = m.effective_value(1.0, 0.0, r, MorseSign::Attractive);
            assert!((got - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn morse_first_param_and_levels() {
        let m = morse();
        let a1 = m.first_param(1.0, 0.43);
        assert!((a1 - (-0.5 + 1.215 / 0.75f64.sqrt())).abs() < 1e-12);
        assert!((a1 - 0.9029).abs() < 1e-3);
        assert_eq!(m.superpotential_spec(1.0, 0.43).bound_levels(), Some(1));
    }

    #[test]
    fn morse_rejects_weak_scalar() {
        let m = MorseKG {
            s0: 0.5,
            v0: 0.5,
            alpha: 1.0,
        };
        assert!(m.validate().is_err());
    }
}
