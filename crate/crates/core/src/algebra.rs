//! Ladder operators on the parameter tower and the finite Lie algebras they
//! close into.
//!
//! A [`TowerState`] is a stack of grid functions; sheet `k` lives at parameter
//! `a_{k+1}`. The parameter shift `T` is an exact index shift, so
//! `(B₊F)_k = A†(a_{k+1}) F_{k+1}` and `(B₋F)_k = A(a_k) F_{k-1}`. Sheets that
//! would need data from beyond the stored tower are marked invalid and are
//! excluded from every residual.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{Grid, GridFunction};
use crate::susy::{apply_lowering, apply_raising, ground_state, SuperpotentialSpec};

/// Nodes skipped at each grid end when measuring residuals.
pub const EDGE_MARGIN: usize = 6;

#[derive(Debug, Clone, PartialEq)]
pub struct TowerState {
    grid: Grid,
    sheets: Vec<GridFunction>,
    valid: Vec<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shift {
    /// `T`: sheet k takes the contents of sheet k+1.
    Up,
    /// `T†`: sheet k takes the contents of sheet k-1.
    Down,
}

impl TowerState {
    pub fn new(sheets: Vec<GridFunction>) -> Result<Self> {
        if sheets.len() < 2 {
            return Err(Error::TowerTooShallow {
                required: 2,
                depth: sheets.len(),
            });
        }
        let grid = *sheets[0].grid();
        if sheets.iter().any(|s| !s.grid().same_as(&grid)) {
            return Err(Error::GridMismatch);
        }
        let valid = vec![true; sheets.len()];
        Ok(Self {
            grid,
            sheets,
            valid,
        })
    }

    /// The same function on every sheet.
    pub fn uniform(probe: &GridFunction, depth: usize) -> Result<Self> {
        Self::new(vec![probe.clone(); depth])
    }

    /// Sheet k holds the ground state `ψ₀(·; a_{k+1})`.
    pub fn ground(spec: &SuperpotentialSpec, depth: usize, grid: &Grid) -> Result<Self> {
        let sheets = (0..depth)
            .map(|k| ground_state(spec, k as i64 + 1, grid))
            .collect::<Result<Vec<_>>>()?;
        Self::new(sheets)
    }

    pub fn zeros(grid: Grid, depth: usize) -> Result<Self> {
        Self::new(vec![GridFunction::zeros(grid); depth])
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn depth(&self) -> usize {
        self.sheets.len()
    }

    pub fn sheet(&self, k: usize) -> &GridFunction {
        &self.sheets[k]
    }

    pub fn sheets(&self) -> &[GridFunction] {
        &self.sheets
    }

    pub fn is_valid(&self, k: usize) -> bool {
        self.valid[k]
    }

    pub fn valid_sheets(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.depth()).filter(|&k| self.valid[k])
    }

    fn map_sheets(&self, f: impl Fn(usize, &GridFunction) -> Result<GridFunction>) -> Result<Self> {
        let sheets = self
            .sheets
            .iter()
            .enumerate()
            .map(|(k, s)| f(k, s))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            grid: self.grid,
            sheets,
            valid: self.valid.clone(),
        })
    }

    /// `self + c·other`, valid where both are.
    pub fn add_scaled(&self, other: &TowerState, c: f64) -> Result<Self> {
        if self.depth() != other.depth() {
            return Err(Error::TowerTooShallow {
                required: self.depth(),
                depth: other.depth(),
            });
        }
        let sheets = self
            .sheets
            .iter()
            .zip(&other.sheets)
            .map(|(a, b)| a.zip_with(b, |x, y| x + c * y))
            .collect::<Result<Vec<_>>>()?;
        let valid = self
            .valid
            .iter()
            .zip(&other.valid)
            .map(|(a, b)| *a && *b)
            .collect();
        Ok(Self {
            grid: self.grid,
            sheets,
            valid,
        })
    }

    pub fn sub(&self, other: &TowerState) -> Result<Self> {
        self.add_scaled(other, -1.0)
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            grid: self.grid,
            sheets: self.sheets.iter().map(|s| s.scale(c)).collect(),
            valid: self.valid.clone(),
        }
    }

    /// Multiplies sheet k by `weights(k)`.
    pub fn scale_sheets(&self, weights: impl Fn(usize) -> f64) -> Self {
        Self {
            grid: self.grid,
            sheets: self
                .sheets
                .iter()
                .enumerate()
                .map(|(k, s)| s.scale(weights(k)))
                .collect(),
            valid: self.valid.clone(),
        }
    }

    /// Sheets valid in both towers.
    pub fn common_valid(&self, other: &TowerState) -> Vec<usize> {
        (0..self.depth().min(other.depth()))
            .filter(|&k| self.valid[k] && other.valid[k])
            .collect()
    }

    /// Max |value| over the given sheets, interior nodes only.
    pub fn max_abs_on(&self, sheets: &[usize]) -> f64 {
        sheets
            .iter()
            .map(|&k| self.sheets[k].max_abs_interior(EDGE_MARGIN))
            .fold(0.0, f64::max)
    }
}

pub fn shift_parameters(state: &TowerState, direction: Shift) -> TowerState {
    let depth = state.depth();
    let zero = GridFunction::zeros(state.grid);
    let mut sheets = Vec::with_capacity(depth);
    let mut valid = Vec::with_capacity(depth);
    for k in 0..depth {
        let source = match direction {
            Shift::Up => (k + 1 < depth).then_some(k + 1),
            Shift::Down => k.checked_sub(1),
        };
        match source {
            Some(j) => {
                sheets.push(state.sheets[j].clone());
                valid.push(state.valid[j]);
            }
            None => {
                sheets.push(zero.clone());
                valid.push(false);
            }
        }
    }
    TowerState {
        grid: state.grid,
        sheets,
        valid,
    }
}

/// `B₊ = A†(a₁) T`.
pub fn apply_b_plus(spec: &SuperpotentialSpec, state: &TowerState) -> Result<TowerState> {
    shift_parameters(state, Shift::Up).map_sheets(|k, s| apply_raising(spec, k as i64 + 1, s))
}

/// `B₋ = T† A(a₁)`.
pub fn apply_b_minus(spec: &SuperpotentialSpec, state: &TowerState) -> Result<TowerState> {
    let lowered = state.map_sheets(|k, s| apply_lowering(spec, k as i64 + 1, s))?;
    Ok(shift_parameters(&lowered, Shift::Down))
}

/// The operator `R(a₀)`: sheet k is multiplied by `R(a_k)`.
pub fn apply_remainder(spec: &SuperpotentialSpec, state: &TowerState) -> TowerState {
    state.scale_sheets(|k| spec.remainder(k as i64))
}

/// Relative sup-norm of `lhs - rhs` against `reference` on the sheets where
/// all three are valid.
fn relative_gap(lhs: &TowerState, rhs: &TowerState, reference: &TowerState) -> Result<f64> {
    let diff = lhs.sub(rhs)?;
    let sheets: Vec<usize> = diff.common_valid(reference);
    if sheets.is_empty() {
        return Err(Error::TowerTooShallow {
            required: lhs.depth() + 1,
            depth: lhs.depth(),
        });
    }
    let scale = reference.max_abs_on(&sheets);
    if scale == 0.0 {
        return Ok(diff.max_abs_on(&sheets));
    }
    Ok(diff.max_abs_on(&sheets) / scale)
}

/// `‖([B₋,B₊] - R(a₀)) P‖∞ / ‖P‖∞` on interior sheets and nodes.
pub fn commutator_residual(spec: &SuperpotentialSpec, probe: &TowerState) -> Result<f64> {
    if probe.depth() < 3 {
        return Err(Error::TowerTooShallow {
            required: 3,
            depth: probe.depth(),
        });
    }
    let bracket = commutator(
        |s| apply_b_minus(spec, s),
        |s| apply_b_plus(spec, s),
        probe,
    )?;
    relative_gap(&bracket, &apply_remainder(spec, probe), probe)
}

fn commutator(
    x: impl Fn(&TowerState) -> Result<TowerState>,
    y: impl Fn(&TowerState) -> Result<TowerState>,
    state: &TowerState,
) -> Result<TowerState> {
    let xy = x(&y(state)?)?;
    let yx = y(&x(state)?)?;
    xy.sub(&yx)
}

/// Remainders `R(a_1), …, R(a_N)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RSequence {
    pub values: Vec<f64>,
    pub start_param: f64,
    pub step: f64,
}

impl RSequence {
    pub fn new(values: Vec<f64>, start_param: f64, step: f64) -> Result<Self> {
        if values.len() < 3 {
            return Err(Error::ShortSequence(values.len()));
        }
        Ok(Self {
            values,
            start_param,
            step,
        })
    }

    /// A sequence given only by its values.
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        Self::new(values, f64::NAN, f64::NAN)
    }

    /// Length-`len` window starting at `start`.
    pub fn window(&self, start: usize, len: usize) -> Result<Self> {
        let end = (start + len).min(self.values.len());
        Self::new(
            self.values[start.min(end)..end].to_vec(),
            self.start_param + start as f64 * self.step,
            self.step,
        )
    }
}

pub fn r_sequence(spec: &SuperpotentialSpec, count: usize) -> Result<RSequence> {
    let values = (1..=count as i64).map(|n| spec.remainder(n)).collect();
    RSequence::new(values, spec.param_at(1), spec.step())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Classification {
    #[serde(rename = "heisenberg_weyl")]
    HeisenbergWeyl,
    #[serde(rename = "su_1_1")]
    Su11,
    #[serde(rename = "su_2")]
    Su2,
    #[serde(rename = "not_finite")]
    NotFinite,
}

impl Classification {
    pub fn tag(&self) -> &'static str {
        match self {
            Classification::HeisenbergWeyl => "heisenberg_weyl",
            Classification::Su11 => "su_1_1",
            Classification::Su2 => "su_2",
            Classification::NotFinite => "not_finite",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlgebraReport {
    pub mu: f64,
    pub nu: f64,
    /// Spectrum offset; zero until set from the factorization constant.
    pub kappa: f64,
    pub classification: Classification,
    pub max_second_difference: f64,
    pub commutator_residual: Option<f64>,
    /// `2μ`, the structure constant of `[B₊, R(a₀)] = 2μ B₊`.
    pub generator_scale: f64,
}

impl AlgebraReport {
    pub fn with_kappa(mut self, kappa: f64) -> Self {
        self.kappa = kappa;
        self
    }

    pub fn with_commutator_residual(mut self, residual: f64) -> Self {
        self.commutator_residual = Some(residual);
        self
    }

    /// `E_n = μn² + νn + κ`.
    pub fn level(&self, n: usize) -> f64 {
        let n = n as f64;
        self.mu * n * n + self.nu * n + self.kappa
    }
}

/// Default tolerance on second differences of R.
pub const SECOND_DIFFERENCE_TOL: f64 = 1e-10;

/// Fits `R(a_n) = 2μn + ν - μ` and classifies the algebra closed by
/// `B₊`, `B₋` and `R(a₀)`.
pub fn classify_algebra(seq: &RSequence, tol: f64) -> AlgebraReport {
    let r = &seq.values;
    let diffs: Vec<f64> = r.windows(2).map(|w| w[1] - w[0]).collect();
    let mu = diffs.iter().sum::<f64>() / diffs.len() as f64 / 2.0;
    let nu = r[0] - mu;
    let max_second_difference = diffs
        .windows(2)
        .map(|w| (w[1] - w[0]).abs())
        .fold(0.0, f64::max);
    let tol_mu = 1e-8 * r[0].abs().max(1.0);
    let classification = if max_second_difference > tol {
        Classification::NotFinite
    } else if mu.abs() <= tol_mu {
        Classification::HeisenbergWeyl
    } else if mu < 0.0 {
        Classification::Su11
    } else {
        Classification::Su2
    };
    AlgebraReport {
        mu,
        nu,
        kappa: 0.0,
        classification,
        max_second_difference,
        commutator_residual: None,
        generator_scale: 2.0 * mu,
    }
}

/// One checked bracket relation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelationResidual {
    pub relation: String,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StructureCheck {
    pub relations: Vec<RelationResidual>,
}

impl StructureCheck {
    pub fn max_residual(&self) -> f64 {
        self.relations.iter().map(|r| r.residual).fold(0.0, f64::max)
    }

    pub fn residual(&self, relation: &str) -> Option<f64> {
        self.relations
            .iter()
            .find(|r| r.relation == relation)
            .map(|r| r.residual)
    }
}

/// Checks the normalized generators `K₀, K±` of the classified algebra
/// against their bracket relations on `probe`, plus the raw relations
/// `[B₊, R(a₀)] = (R(a₁) - R(a₀)) B₊` and the vanishing second commutator.
pub fn verify_structure_constants(
    spec: &SuperpotentialSpec,
    report: &AlgebraReport,
    probe: &TowerState,
) -> Result<StructureCheck> {
    if report.classification == Classification::NotFinite {
        return Err(Error::NotFinite);
    }
    let mu = report.mu;
    let b_plus = |s: &TowerState| apply_b_plus(spec, s);
    let rem = |s: &TowerState| Ok(apply_remainder(spec, s));

    let mut relations = Vec::new();
    let mut push = |name: &str, value: f64| {
        relations.push(RelationResidual {
            relation: name.to_string(),
            residual: value,
        })
    };

    // [B₊, R(a₀)] = (R(a₁) - R(a₀)) B₊, per sheet (R(a_{k+1}) - R(a_k)).
    let bp = b_plus(probe)?;
    let lhs = commutator(b_plus, rem, probe)?;
    let rhs = bp.scale_sheets(|k| spec.remainder(k as i64 + 1) - spec.remainder(k as i64));
    push("[B+,R(a0)]=(R(a1)-R(a0))B+", relative_gap(&lhs, &rhs, &rhs)?);

    // [B₊, [B₊, R(a₀)]] vanishes when the second differences of R do.
    let second = commutator(b_plus, |s| commutator(b_plus, rem, s), probe)?;
    let bpbp = b_plus(&bp)?;
    let zero = bpbp.scale(0.0);
    push("[B+,[B+,R(a0)]]=0", relative_gap(&second, &zero, &bpbp)?);

    match report.classification {
        Classification::NotFinite => unreachable!("checked above"),
        Classification::HeisenbergWeyl => {
            let norm = spec.remainder(1).abs().sqrt();
            let k_plus = |s: &TowerState| Ok(apply_b_plus(spec, s)?.scale(1.0 / norm));
            let k_minus = |s: &TowerState| Ok(apply_b_minus(spec, s)?.scale(1.0 / norm));
            let k_zero = |s: &TowerState| {
                Ok(s.scale_sheets(|k| spec.remainder(k as i64) / (norm * norm)))
            };
            let kp = k_plus(probe)?;
            let km = k_minus(probe)?;

            let lhs = commutator(k_minus, k_plus, probe)?;
            push("[K-,K+]=I", relative_gap(&lhs, probe, probe)?);

            let lhs = commutator(k_zero, k_plus, probe)?;
            push("[K0,K+]=0", relative_gap(&lhs, &kp.scale(0.0), &kp)?);
            let lhs = commutator(k_zero, k_minus, probe)?;
            push("[K0,K-]=0", relative_gap(&lhs, &km.scale(0.0), &km)?);

            let number = |s: &TowerState| k_plus(&k_minus(s)?);
            let lhs = commutator(k_plus, number, probe)?;
            push("[K+,K+K-]=-K+", relative_gap(&lhs, &kp.scale(-1.0), &kp)?);
            let lhs = commutator(k_minus, number, probe)?;
            push("[K-,K+K-]=K-", relative_gap(&lhs, &km, &km)?);
        }
        Classification::Su11 | Classification::Su2 => {
            let norm = mu.abs().sqrt();
            let k_plus = |s: &TowerState| Ok(apply_b_plus(spec, s)?.scale(1.0 / norm));
            let k_minus = |s: &TowerState| Ok(apply_b_minus(spec, s)?.scale(1.0 / norm));
            let k_zero =
                |s: &TowerState| Ok(s.scale_sheets(|k| -spec.remainder(k as i64) / (2.0 * mu)));
            let kp = k_plus(probe)?;
            let km = k_minus(probe)?;
            let k0 = k_zero(probe)?;

            let lhs = commutator(k_plus, k_minus, probe)?;
            if report.classification == Classification::Su11 {
                push("[K+,K-]=-2K0", relative_gap(&lhs, &k0.scale(-2.0), &k0)?);
            } else {
                push("[K+,K-]=2K0", relative_gap(&lhs, &k0.scale(2.0), &k0)?);
            }
            let lhs = commutator(k_zero, k_plus, probe)?;
            push("[K0,K+]=K+", relative_gap(&lhs, &kp, &kp)?);
            let lhs = commutator(k_zero, k_minus, probe)?;
            push("[K0,K-]=-K-", relative_gap(&lhs, &km.scale(-1.0), &km)?);
        }
    }
    Ok(StructureCheck { relations })
}
