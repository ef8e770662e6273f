//! Superpotentials, partner potentials and the shape-invariance machinery.
//!
//! Conventions: `A = d/dx + W`, `A† = -d/dx + W`, `V∓ = W² ∓ W'`. Parameters
//! are indexed from 1: `a_n = a_1 + (n-1)·η`, and `R(a_n)` is the constant in
//! `V+(x; a_n) = V-(x; a_{n+1}) + R(a_n)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{cumulative_integral, derivative, Grid, GridFunction};

/// Closed-form shape of `W(r; a)`; `a` is supplied per level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum SuperpotentialForm {
    /// `W = a·r`.
    Linear,
    /// `W = a - c·e^{-αr}`.
    Morse { coupling: f64, alpha: f64 },
    /// `W = g/(2a) - a/(2q) + (a + Q3·e^{αr}) / (e^{2αr} + q)`.
    Exponential { alpha: f64, q: f64, g: f64, q3: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SlopeMode {
    ClosedForm,
    FiniteDifference,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SuperpotentialSpec {
    form: SuperpotentialForm,
    first_param: f64,
    step: f64,
    /// Number of normalizable levels; `None` when unbounded.
    bound_levels: Option<usize>,
    slope_mode: SlopeMode,
}

impl SuperpotentialSpec {
    pub fn new(
        form: SuperpotentialForm,
        first_param: f64,
        step: f64,
        bound_levels: Option<usize>,
    ) -> Self {
        Self {
            form,
            first_param,
            step,
            bound_levels,
            slope_mode: SlopeMode::ClosedForm,
        }
    }

    /// `W = a·r` with a fixed parameter (η = 0).
    pub fn linear(a: f64) -> Self {
        let bound = if a > 0.0 { None } else { Some(0) };
        Self::new(SuperpotentialForm::Linear, a, 0.0, bound)
    }

    /// `W = a_n - c·e^{-αr}` with `a_n = a_1 - (n-1)α`.
    pub fn morse(a1: f64, coupling: f64, alpha: f64) -> Self {
        let levels = if a1 > 0.0 {
            (a1 / alpha).ceil() as usize
        } else {
            0
        };
        Self::new(
            SuperpotentialForm::Morse { coupling, alpha },
            a1,
            -alpha,
            Some(levels),
        )
    }

    pub fn with_slope_mode(mut self, mode: SlopeMode) -> Self {
        self.slope_mode = mode;
        self
    }

    pub fn with_bound_levels(mut self, levels: Option<usize>) -> Self {
        self.bound_levels = levels;
        self
    }

    pub fn form(&self) -> SuperpotentialForm {
        self.form
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn bound_levels(&self) -> Option<usize> {
        self.bound_levels
    }

    pub fn slope_mode(&self) -> SlopeMode {
        self.slope_mode
    }

    /// Whether level `n` (0 = ground) has a normalizable ground state at `a_{n+1}`.
    pub fn level_is_bound(&self, n: usize) -> bool {
        self.bound_levels.is_none_or(|b| n < b)
    }

    pub fn param_at(&self, n: i64) -> f64 {
        self.first_param + (n - 1) as f64 * self.step
    }

    pub fn value_with_param(&self, r: f64, a: f64) -> f64 {
        match self.form {
            SuperpotentialForm::Linear => a * r,
            SuperpotentialForm::Morse { coupling, alpha } => a - coupling * (-alpha * r).exp(),
            SuperpotentialForm::Exponential { alpha, q, g, q3 } => {
                let s = (alpha * r).exp();
                let lead = if g == 0.0 { 0.0 } else { g / (2.0 * a) };
                lead - a / (2.0 * q) + (a + q3 * s) / (s * s + q)
            }
        }
    }

    pub fn slope_with_param(&self, r: f64, a: f64) -> f64 {
        match self.form {
            SuperpotentialForm::Linear => a,
            SuperpotentialForm::Morse { coupling, alpha } => {
                alpha * coupling * (-alpha * r).exp()
            }
            SuperpotentialForm::Exponential { alpha, q, q3, .. } => {
                let s = (alpha * r).exp();
                let den = s * s + q;
                alpha * q3 * s / den - (a + q3 * s) * 2.0 * alpha * s * s / (den * den)
            }
        }
    }

    pub fn eval(&self, r: f64, n: i64) -> f64 {
        self.value_with_param(r, self.param_at(n))
    }

    pub fn slope(&self, r: f64, n: i64) -> f64 {
        self.slope_with_param(r, self.param_at(n))
    }

    /// `R(a_n)` in closed form.
    pub fn remainder(&self, n: i64) -> f64 {
        let a = self.param_at(n);
        match self.form {
            SuperpotentialForm::Linear => 2.0 * a,
            SuperpotentialForm::Morse { alpha, .. } => (2.0 * a - alpha) * alpha,
            SuperpotentialForm::Exponential { q, g, .. } => {
                let asym = |a: f64| {
                    let lead = if g == 0.0 { 0.0 } else { g / (2.0 * a) };
                    lead - a / (2.0 * q)
                };
                let next = self.param_at(n + 1);
                asym(a).powi(2) - asym(next).powi(2)
            }
        }
    }

    /// `R(a_1) + … + R(a_n)`.
    pub fn cumulative_remainder(&self, n: usize) -> f64 {
        (1..=n as i64).map(|k| self.remainder(k)).sum()
    }

    /// `W(·; a_n)` on the grid; non-finite samples are reported as singular.
    pub fn sample(&self, n: i64, grid: &Grid) -> Result<GridFunction> {
        let a = self.param_at(n);
        sample_checked(grid, |r| self.value_with_param(r, a))
    }

    /// `W'(·; a_n)`, closed form or finite differences per the slope mode.
    pub fn sample_slope(&self, n: i64, grid: &Grid) -> Result<GridFunction> {
        match self.slope_mode {
            SlopeMode::ClosedForm => {
                let a = self.param_at(n);
                sample_checked(grid, |r| self.slope_with_param(r, a))
            }
            SlopeMode::FiniteDifference => Ok(derivative(&self.sample(n, grid)?)),
        }
    }
}

fn sample_checked(grid: &Grid, f: impl Fn(f64) -> f64) -> Result<GridFunction> {
    let values: Vec<f64> = grid.nodes().map(f).collect();
    let nodes: Vec<usize> = values
        .iter()
        .enumerate()
        .filter(|(_, v)| !v.is_finite())
        .map(|(i, _)| i)
        .collect();
    if let Some(&first) = nodes.first() {
        return Err(Error::SingularNodes {
            first_r: grid.node(first),
            nodes,
        });
    }
    GridFunction::new(*grid, values)
}

/// `V∓ = W² ∓ W'` at `a_n`, plus the parameters involved.
#[derive(Debug, Clone, PartialEq)]
pub struct PartnerPair {
    pub v_minus: GridFunction,
    pub v_plus: GridFunction,
    pub params_used: (f64, f64),
}

pub fn partner_potentials(spec: &SuperpotentialSpec, n: i64, grid: &Grid) -> Result<PartnerPair> {
    let w = spec.sample(n, grid)?;
    let dw = spec.sample_slope(n, grid)?;
    let v_minus = w.zip_with(&dw, |w, d| w * w - d)?;
    let v_plus = w.zip_with(&dw, |w, d| w * w + d)?;
    Ok(PartnerPair {
        v_minus,
        v_plus,
        params_used: (spec.param_at(n), spec.param_at(n + 1)),
    })
}

/// `max |V+(r; a_n) - V-(r; a_{n+1}) - R(a_n)|` over the grid.
pub fn shape_invariance_residual(spec: &SuperpotentialSpec, n: i64, grid: &Grid) -> Result<f64> {
    let here = partner_potentials(spec, n, grid)?;
    let next = partner_potentials(spec, n + 1, grid)?;
    let r = spec.remainder(n);
    let diff = here.v_plus.zip_with(&next.v_minus, |p, m| p - m - r)?;
    Ok(diff.max_abs())
}

/// The constant ε₀ in `U = W² - W' + ε₀` and how well it fits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Factorization {
    pub offset: f64,
    pub residual: f64,
}

impl Factorization {
    pub fn certifies(&self, tol: f64) -> bool {
        self.residual <= tol
    }
}

pub fn factorization_offset(
    spec: &SuperpotentialSpec,
    u_eff: &GridFunction,
    n: i64,
) -> Result<Factorization> {
    let pair = partner_potentials(spec, n, u_eff.grid())?;
    let gap = u_eff.zip_with(&pair.v_minus, |u, v| u - v)?;
    let mut sorted = gap.values().to_vec();
    sorted.sort_by(f64::total_cmp);
    let m = sorted.len();
    let offset = if m % 2 == 1 {
        sorted[m / 2]
    } else {
        0.5 * (sorted[m / 2 - 1] + sorted[m / 2])
    };
    let residual = gap.values().iter().fold(0.0_f64, |acc, g| acc.max((g - offset).abs()));
    Ok(Factorization { offset, residual })
}

/// `exp(-∫W)` anchored at the grid midpoint, unit-normalized.
pub fn ground_state(spec: &SuperpotentialSpec, n: i64, grid: &Grid) -> Result<GridFunction> {
    let w = spec.sample(n, grid)?;
    let integral = cumulative_integral(&w, grid.midpoint_index())?;
    let peak = integral
        .values()
        .iter()
        .fold(f64::NEG_INFINITY, |m, &v| m.max(-v));
    let psi = integral.map(|v| (-v - peak).exp());
    psi.normalized().ok_or_else(|| Error::LevelUnavailable {
        level: 0,
        reason: "ground state has zero norm on this grid".into(),
    })
}

/// `A†(a_n) f = -f' + W(·; a_n) f`.
pub fn apply_raising(spec: &SuperpotentialSpec, n: i64, f: &GridFunction) -> Result<GridFunction> {
    let w = spec.sample(n, f.grid())?;
    let df = derivative(f);
    let wf = w.zip_with(f, |w, v| w * v)?;
    wf.zip_with(&df, |a, b| a - b)
}

/// `A(a_n) f = f' + W(·; a_n) f`.
pub fn apply_lowering(spec: &SuperpotentialSpec, n: i64, f: &GridFunction) -> Result<GridFunction> {
    let w = spec.sample(n, f.grid())?;
    let df = derivative(f);
    let wf = w.zip_with(f, |w, v| w * v)?;
    wf.zip_with(&df, |a, b| a + b)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RejectedLevel {
    pub level: usize,
    pub reason: String,
}

/// Ladder-built eigenfunctions `ψ_0 … ψ_k` at parameters `a_1`.
#[derive(Debug, Clone)]
pub struct WavefunctionTower {
    pub levels: Vec<GridFunction>,
    /// `‖A†(a_1) ψ_{n-1}(a_2)‖` for n = 1, 2, …; equals `sqrt(R(a_1)+…+R(a_n))`
    /// in the continuum.
    pub raw_norms: Vec<f64>,
    pub rejected: Vec<RejectedLevel>,
}

/// `e_m(a_p) = R(a_p) + … + R(a_{p+m-1})`, the m-th level of `H-(a_p)`.
fn excitation(spec: &SuperpotentialSpec, p: usize, m: usize) -> f64 {
    (p..p + m).map(|k| spec.remainder(k as i64)).sum()
}

pub fn wavefunction_tower(
    spec: &SuperpotentialSpec,
    n_max: usize,
    grid: &Grid,
) -> Result<WavefunctionTower> {
    let mut accepted = 0;
    let mut rejected = Vec::new();
    for level in 0..=n_max {
        let reason = if !spec.level_is_bound(level) {
            Some(format!(
                "ground state at a_{} = {} is not normalizable",
                level + 1,
                spec.param_at(level as i64 + 1)
            ))
        } else if level > 0 && spec.cumulative_remainder(level) <= 0.0 {
            Some(format!(
                "cumulative remainder {} is not positive",
                spec.cumulative_remainder(level)
            ))
        } else {
            None
        };
        match reason {
            Some(reason) => {
                rejected.extend((level..=n_max).map(|l| RejectedLevel {
                    level: l,
                    reason: reason.clone(),
                }));
                break;
            }
            None => accepted += 1,
        }
    }
    if accepted == 0 {
        return Ok(WavefunctionTower {
            levels: Vec::new(),
            raw_norms: Vec::new(),
            rejected,
        });
    }

    let top = accepted - 1;
    // Shape invariance gives the derivative in closed form,
    // A(a_j) Φ_m(a_j) = e_m(a_j) Φ_{m-1}(a_{j+1}), so raising needs no
    // numerical differentiation:
    // A†(a_j) ψ_m(a_{j+1}) = (W_j + W_{j+1}) ψ_m(a_{j+1}) - sqrt(e_m(a_{j+1})) ψ_{m-1}(a_{j+2}).
    // Repeated finite differences would amplify roundoff by 1/h per level.
    let w = (0..=top)
        .map(|j| spec.sample(j as i64 + 1, grid))
        .collect::<Result<Vec<_>>>()?;
    // column[j] holds ψ_m(·; a_{j+1}) for the current m, previous the m-1 column.
    let mut column = (0..=top)
        .map(|j| ground_state(spec, j as i64 + 1, grid))
        .collect::<Result<Vec<_>>>()?;
    let mut previous: Vec<GridFunction> = Vec::new();
    let mut levels = vec![column[0].clone()];
    let mut raw_norms = Vec::with_capacity(top);
    for m in 1..=top {
        let mut next = Vec::with_capacity(column.len() - 1);
        for j in 0..column.len() - 1 {
            let pair = w[j].zip_with(&w[j + 1], |a, b| a + b)?;
            let mut raised = pair.zip_with(&column[j + 1], |s, v| s * v)?;
            if m >= 2 {
                let excitation = excitation(spec, j + 2, m - 1);
                let c = excitation.max(0.0).sqrt();
                raised = raised.zip_with(&previous[j + 2], |v, p| v - c * p)?;
            }
            let norm = raised.norm();
            if j == 0 {
                raw_norms.push(norm);
            }
            next.push(raised.normalized().ok_or_else(|| Error::LevelUnavailable {
                level: m,
                reason: "raised state vanished".into(),
            })?);
        }
        previous = std::mem::replace(&mut column, next);
        levels.push(column[0].clone());
    }
    Ok(WavefunctionTower {
        levels,
        raw_norms,
        rejected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::integrate;

    fn morse_coupling() -> f64 {
        // sqrt(S0² - V0²) for S0 = 1, V0 = 0.5
        0.75_f64.sqrt()
    }

    #[test]
    fn linear_partners_pointwise() {
        let g = Grid::new(-3.0, 3.0, 61).unwrap();
        let pair = partner_potentials(&SuperpotentialSpec::linear(2.0), 1, &g).unwrap();
        for (i, r) in g.nodes().enumerate() {
            assert!((pair.v_minus.values()[i] - (4.0 * r * r - 2.0)).abs() < 1e-12);
            assert!((pair.v_plus.values()[i] - (4.0 * r * r + 2.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn null_superpotential_partners_vanish() {
        let g = Grid::new(-3.0, 3.0, 61).unwrap();
        let pair = partner_potentials(&SuperpotentialSpec::linear(0.0), 1, &g).unwrap();
        assert_eq!(pair.v_minus.max_abs(), 0.0);
        assert_eq!(pair.v_plus.max_abs(), 0.0);
    }

    #[test]
    fn morse_partner_gap_is_twice_the_slope() {
        let g = Grid::new(-2.0, 20.0, 400).unwrap();
        let c = morse_coupling();
        let spec = SuperpotentialSpec::morse(0.9, c, 1.0);
        let pair = partner_potentials(&spec, 1, &g).unwrap();
        for (i, r) in g.nodes().enumerate() {
            let gap = pair.v_plus.values()[i] - pair.v_minus.values()[i];
            assert!((gap - 2.0 * c * (-r).exp()).abs() < 1e-12);
        }
    }

    #[test]
    fn shape_invariance_linear_and_morse() {
        let g = Grid::new(-8.0, 8.0, 801).unwrap();
        let res = shape_invariance_residual(&SuperpotentialSpec::linear(1.3), 1, &g).unwrap();
        assert!(res < 1e-12);

        let g = Grid::new(0.0, 20.0, 801).unwrap();
        let spec = SuperpotentialSpec::morse(0.9, morse_coupling(), 1.0);
        for n in 1..4 {
            assert!(shape_invariance_residual(&spec, n, &g).unwrap() < 1e-10);
        }
    }

    #[test]
    fn shape_invariance_exponential() {
        let spec = SuperpotentialSpec::new(
            SuperpotentialForm::Exponential {
                alpha: 1.0,
                q: 1.0,
                g: 0.0,
                q3: 1.0,
            },
            3.0,
            2.0,
            Some(0),
        );
        let g = Grid::new(-10.0, 10.0, 801).unwrap();
        for n in 1..4 {
            assert!(shape_invariance_residual(&spec, n, &g).unwrap() < 1e-9);
        }
    }

    #[test]
    fn finite_difference_slope_is_second_order() {
        let spec = SuperpotentialSpec::morse(1.7, 0.8, 1.0);
        let coarse = Grid::new(-2.0, 10.0, 601).unwrap();
        let fine = Grid::new(-2.0, 10.0, 1201).unwrap();
        let fd = spec.with_slope_mode(SlopeMode::FiniteDifference);
        let r1 = shape_invariance_residual(&fd, 1, &coarse).unwrap();
        let r2 = shape_invariance_residual(&fd, 1, &fine).unwrap();
        assert!(r1 > 1e-8, "finite differences should not be exact");
        assert!(r1 / r2 > 3.0, "ratio {}", r1 / r2);
    }

    #[test]
    fn singular_nodes_are_flagged() {
        let spec = SuperpotentialSpec::new(
            SuperpotentialForm::Exponential {
                alpha: 1.0,
                q: -1.0,
                g: 0.0,
                q3: -3.0,
            },
            2.0,
            -2.0,
            None,
        );
        let g = Grid::new(0.0, 5.0, 51).unwrap();
        match partner_potentials(&spec, 1, &g) {
            Err(Error::SingularNodes { nodes, first_r }) => {
                assert_eq!(nodes, vec![0]);
                assert_eq!(first_r, 0.0);
            }
            other => panic!("expected singular-node error, got {other:?}"),
        }
    }

    #[test]
    fn factorization_of_harmonic_and_exact_partner() {
        let a = 1.4;
        let g = Grid::new(-6.0, 6.0, 601).unwrap();
        let spec = SuperpotentialSpec::linear(a);
        let u = g.sample(|r| a * a * r * r).unwrap();
        let fac = factorization_offset(&spec, &u, 1).unwrap();
        assert!((fac.offset - a).abs() < 1e-12);
        assert!(fac.residual < 1e-12);

        let exact = partner_potentials(&spec, 1, &g).unwrap().v_minus;
        let fac = factorization_offset(&spec, &exact, 1).unwrap();
        assert_eq!(fac.offset, 0.0);
        assert_eq!(fac.residual, 0.0);
    }

    #[test]
    fn gaussian_ground_state() {
        let g = Grid::new(-8.0, 8.0, 1601).unwrap();
        let psi = ground_state(&SuperpotentialSpec::linear(1.0), 1, &g).unwrap();
        let at0 = psi.values()[g.nearest_index(0.0)];
        let at1 = psi.values()[g.nearest_index(1.0)];
        assert!((at1 / at0 - (-0.5_f64).exp()).abs() < 1e-6);
        let sq = psi.map(|v| v * v);
        assert!((integrate(&sq) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn null_superpotential_ground_state_is_flat() {
        let g = Grid::new(0.0, 4.0, 101).unwrap();
        let psi = ground_state(&SuperpotentialSpec::linear(0.0), 1, &g).unwrap();
        let v = psi.values();
        assert!(v.iter().all(|x| (x - v[0]).abs() < 1e-14));
    }

    #[test]
    fn raising_basics() {
        let g = Grid::new(-1.0, 1.0, 101).unwrap();
        let zero = GridFunction::zeros(g);
        let spec = SuperpotentialSpec::linear(0.0);
        assert_eq!(apply_raising(&spec, 1, &zero).unwrap().max_abs(), 0.0);
        let ramp = g.sample(|r| r).unwrap();
        let out = apply_raising(&spec, 1, &ramp).unwrap();
        assert!(out.values().iter().all(|v| (v + 1.0).abs() < 1e-12));
    }

    #[test]
    fn raised_ground_state_is_orthogonal() {
        let g = Grid::new(-8.0, 8.0, 2001).unwrap();
        let spec = SuperpotentialSpec::linear(1.2);
        let psi0 = ground_state(&spec, 1, &g).unwrap();
        let up = apply_raising(&spec, 1, &psi0).unwrap();
        assert!(up.inner(&psi0).unwrap().abs() < 1e-4);
    }

    #[test]
    fn harmonic_tower_parity_and_nodes() {
        let g = Grid::new(-8.0, 8.0, 3201).unwrap();
        let tower = wavefunction_tower(&SuperpotentialSpec::linear(1.0), 2, &g).unwrap();
        assert_eq!(tower.levels.len(), 3);
        assert!(tower.rejected.is_empty());
        let n = g.len();
        let psi1 = tower.levels[1].values();
        let psi2 = tower.levels[2].values();
        for i in 0..n / 2 {
            assert!((psi1[i] + psi1[n - 1 - i]).abs() < 1e-8, "ψ1 odd");
            assert!((psi2[i] - psi2[n - 1 - i]).abs() < 1e-8, "ψ2 even");
        }
        assert_eq!(tower.levels[1].sign_changes(1e-8), 1);
        assert_eq!(tower.levels[2].sign_changes(1e-8), 2);
        // ‖A†ψ_{n-1}‖² = R(a_1) + … + R(a_n) = 2n·a
        for (k, norm) in tower.raw_norms.iter().enumerate() {
            let expected = (2.0 * (k + 1) as f64).sqrt();
            assert!((norm - expected).abs() < 1e-4, "level {}", k + 1);
        }
        for i in 0..3 {
            for j in 0..i {
                let overlap = tower.levels[i].inner(&tower.levels[j]).unwrap();
                assert!(overlap.abs() < 5e-4);
            }
        }
    }

    #[test]
    fn tower_of_zero_levels_is_ground_state() {
        let g = Grid::new(-8.0, 8.0, 801).unwrap();
        let spec = SuperpotentialSpec::linear(0.7);
        let tower = wavefunction_tower(&spec, 0, &g).unwrap();
        assert_eq!(tower.levels.len(), 1);
        assert_eq!(tower.levels[0], ground_state(&spec, 1, &g).unwrap());
    }

    #[test]
    fn morse_tower_rejects_second_level() {
        let g = Grid::new(-4.0, 25.0, 2001).unwrap();
        let spec = SuperpotentialSpec::morse(0.9, morse_coupling(), 1.0);
        assert_eq!(spec.bound_levels(), Some(1));
        let tower = wavefunction_tower(&spec, 1, &g).unwrap();
        assert_eq!(tower.levels.len(), 1);
        assert_eq!(tower.rejected.len(), 1);
        assert_eq!(tower.rejected[0].level, 1);
    }
}
