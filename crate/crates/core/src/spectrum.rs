//! Bound-state energies of the reduced Klein-Gordon problem
//! `-u'' + U(r; E) u = (E² - M²) u`, analytically from the remainder
//! sequence and numerically from a finite-difference operator, both closed
//! by an outer root search on E.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::Family;
use crate::numerics::{
    apply_schrodinger, find_root_with, Grid, GridFunction, RootTolerance, TridiagonalOperator,
    DEFAULT_EIG_TOL,
};
use crate::susy::{wavefunction_tower, SuperpotentialSpec};

pub const DEFAULT_E_TOL: f64 = 1e-10;
pub const DEFAULT_SCAN_POINTS: usize = 200;
/// Fraction of `|u|²` allowed within ten steps of a grid end.
pub const TAIL_MASS_LIMIT: f64 = 1e-6;
/// Sign changes whose Brent residual stays above this are discontinuities.
const JUMP_LIMIT: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolveConfig {
    pub grid: Grid,
    pub e_bracket: (f64, f64),
    pub e_tol: f64,
    pub scan_points: usize,
    /// Levels `n = 0 .. max_levels-1` are attempted.
    pub max_levels: usize,
    pub eig_tol: f64,
}

impl SolveConfig {
    pub fn new(grid: Grid, e_bracket: (f64, f64), max_levels: usize) -> Result<Self> {
        let cfg = Self {
            grid,
            e_bracket,
            e_tol: DEFAULT_E_TOL,
            scan_points: DEFAULT_SCAN_POINTS,
            max_levels,
            eig_tol: DEFAULT_EIG_TOL,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.e_bracket;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidBracket(format!("need finite lo < hi, got [{lo}, {hi}]")));
        }
        if !(self.e_tol > 0.0 && self.eig_tol > 0.0) {
            return Err(Error::InvalidBracket("tolerances must be positive".into()));
        }
        if self.scan_points < 2 {
            return Err(Error::InvalidBracket("scan_points must be at least 2".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Analytic,
    Numeric,
}

impl Method {
    pub fn tag(&self) -> &'static str {
        match self {
            Method::Analytic => "analytic",
            Method::Numeric => "numeric",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyLevel {
    pub n: usize,
    /// Relativistic energy; absent when `ε + M² < 0`.
    #[serde(rename = "E")]
    pub energy: Option<f64>,
    pub epsilon: f64,
    pub method: Method,
    /// Self-consistency residual `|ε_n(E) - (E² - M²)|`.
    pub residual: f64,
    pub iterations: usize,
    /// `‖Hu - εu‖₂/‖u‖₂` of the discrete eigenvector (numeric levels only).
    pub eigen_residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumResult {
    pub family: Family,
    pub mass: f64,
    pub levels: Vec<EnergyLevel>,
    pub config: SolveConfig,
    pub warnings: Vec<String>,
}

impl SpectrumResult {
    pub fn levels_for(&self, method: Method) -> impl Iterator<Item = &EnergyLevel> + '_ {
        self.levels.iter().filter(move |l| l.method == method)
    }

    pub fn energy(&self, method: Method, n: usize) -> Option<f64> {
        self.levels_for(method).find(|l| l.n == n).and_then(|l| l.energy)
    }

    fn sort(&mut self) {
        self.levels.sort_by(|a, b| a.n.cmp(&b.n).then(a.method.cmp(&b.method)));
    }
}

/// `ε_n = ε₀ + R(a_1) + … + R(a_n)`.
pub fn analytic_epsilon(spec: &SuperpotentialSpec, eps0: f64, n: usize) -> Result<f64> {
    if !spec.level_is_bound(n) {
        return Err(Error::LevelUnavailable {
            level: n,
            reason: format!(
                "only {} normalizable level(s) at these parameters",
                spec.bound_levels().unwrap_or(0)
            ),
        });
    }
    Ok(eps0 + spec.cumulative_remainder(n))
}

/// `ε_n` of `family` at trial energy `energy`.
pub fn analytic_epsilon_at(family: &Family, mass: f64, energy: f64, n: usize) -> Result<f64> {
    let spec = family.superpotential_spec(mass, energy)?;
    analytic_epsilon(&spec, family.ground_offset(mass, energy)?, n)
}

/// A solved level plus anything worth telling the caller.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelSolution {
    pub level: EnergyLevel,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Copy)]
struct Crossing {
    x: f64,
    f: f64,
    iterations: usize,
}

fn scan_once<F>(f: &F, lo: f64, hi: f64, points: usize, e_tol: f64) -> Vec<Crossing>
where
    F: Fn(f64) -> Option<f64> + Sync,
{
    let xs: Vec<f64> = (0..=points)
        .map(|i| lo + (hi - lo) * i as f64 / points as f64)
        .collect();
    let fs: Vec<Option<f64>> = xs.par_iter().map(|&x| f(x).filter(|v| v.is_finite())).collect();
    let tol = RootTolerance {
        x_tol: 1e-300,
        f_tol: e_tol,
    };
    let mut out: Vec<Crossing> = Vec::new();
    for i in 0..points {
        let (Some(fa), Some(fb)) = (fs[i], fs[i + 1]) else {
            continue;
        };
        if fa == 0.0 {
            out.push(Crossing {
                x: xs[i],
                f: 0.0,
                iterations: 0,
            });
            continue;
        }
        if fb == 0.0 || fa.signum() == fb.signum() {
            continue;
        }
        let g = |x: f64| f(x).unwrap_or(f64::NAN);
        if let Ok(root) = find_root_with(g, xs[i], xs[i + 1], tol) {
            if root.f.is_finite() && root.f.abs() <= JUMP_LIMIT {
                out.push(Crossing {
                    x: root.x,
                    f: root.f,
                    iterations: root.iterations,
                });
            }
        }
    }
    if let Some(last) = fs[points] {
        if last == 0.0 {
            out.push(Crossing {
                x: xs[points],
                f: 0.0,
                iterations: 0,
            });
        }
    }
    out.dedup_by(|a, b| (a.x - b.x).abs() <= 1e-12 * a.x.abs().max(1.0));
    out
}

/// Sign-change scan over the bracket followed by Brent on each cell; the
/// scan is repeated once at double resolution when it finds nothing.
fn scan_roots<F>(f: &F, cfg: &SolveConfig) -> Vec<Crossing>
where
    F: Fn(f64) -> Option<f64> + Sync,
{
    let (lo, hi) = cfg.e_bracket;
    let found = scan_once(f, lo, hi, cfg.scan_points, cfg.e_tol);
    if found.is_empty() {
        scan_once(f, lo, hi, 2 * cfg.scan_points, cfg.e_tol)
    } else {
        found
    }
}

fn pick_root(n: usize, mut roots: Vec<Crossing>, warnings: &mut Vec<String>) -> Result<Crossing> {
    if roots.is_empty() {
        return Err(Error::LevelUnavailable {
            level: n,
            reason: format!("no level {n} in bracket"),
        });
    }
    roots.sort_by(|a, b| a.x.total_cmp(&b.x));
    let best = *roots.last().expect("nonempty");
    if roots.len() > 1 {
        let others: Vec<String> = roots[..roots.len() - 1].iter().map(|r| format!("{}", r.x)).collect();
        warnings.push(format!(
            "level {n}: {} self-consistent roots in bracket; reporting E = {}, others at E = [{}]",
            roots.len(),
            best.x,
            others.join(", ")
        ));
    }
    Ok(best)
}

fn energy_from_epsilon(n: usize, eps: f64, mass: f64, warnings: &mut Vec<String>) -> Option<f64> {
    let s = eps + mass * mass;
    if s >= 0.0 {
        Some(s.sqrt())
    } else {
        warnings.push(format!(
            "level {n}: epsilon + M^2 = {s} < 0, no real energy"
        ));
        None
    }
}

/// Self-consistent level `n` from the closed-form spectrum.
pub fn analytic_level(family: &Family, mass: f64, n: usize, cfg: &SolveConfig) -> Result<LevelSolution> {
    cfg.validate()?;
    family.validate(mass)?;
    if !family.supports_analytic() {
        return Err(Error::Unsupported(
            "closed-form spectrum needs g = 0 for the five-parameter family".into(),
        ));
    }
    let mut warnings = Vec::new();
    if !family.is_energy_dependent() {
        let eps = analytic_epsilon_at(family, mass, 0.0, n)?;
        let energy = energy_from_epsilon(n, eps, mass, &mut warnings);
        return Ok(LevelSolution {
            level: EnergyLevel {
                n,
                energy,
                epsilon: eps,
                method: Method::Analytic,
                residual: 0.0,
                iterations: 0,
                eigen_residual: None,
            },
            warnings,
        });
    }
    let f = |e: f64| {
        analytic_epsilon_at(family, mass, e, n)
            .ok()
            .map(|eps| eps - (e * e - mass * mass))
    };
    let root = pick_root(n, scan_roots(&f, cfg), &mut warnings)?;
    let eps = analytic_epsilon_at(family, mass, root.x, n)?;
    Ok(LevelSolution {
        level: EnergyLevel {
            n,
            energy: Some(root.x),
            epsilon: eps,
            method: Method::Analytic,
            residual: root.f.abs(),
            iterations: root.iterations,
            eigen_residual: None,
        },
        warnings,
    })
}

fn discrete_level(family: &Family, mass: f64, energy: f64, n: usize, cfg: &SolveConfig) -> Option<f64> {
    let u = family.effective_potential(mass, energy, &cfg.grid).ok()?;
    TridiagonalOperator::schrodinger(&u).eigenvalue(n, cfg.eig_tol).ok()
}

/// Eigenvector of the discrete operator, embedded with zero end nodes.
fn discrete_state(u: &GridFunction, lambda: f64) -> (GridFunction, f64) {
    let op = TridiagonalOperator::schrodinger(u);
    let v = op.eigenvector(lambda);
    let hv = op.apply(&v);
    let res = hv
        .iter()
        .zip(&v)
        .map(|(a, b)| (a - lambda * b).powi(2))
        .sum::<f64>()
        .sqrt();
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut values = Vec::with_capacity(v.len() + 2);
    values.push(0.0);
    values.extend_from_slice(&v);
    values.push(0.0);
    let state = GridFunction::new(*u.grid(), values).unwrap_or_else(|_| GridFunction::zeros(*u.grid()));
    (state, res / norm)
}

fn tail_fraction(state: &GridFunction) -> f64 {
    let v = state.values();
    let total: f64 = v.iter().map(|x| x * x).sum();
    if total == 0.0 {
        return 0.0;
    }
    let k = 10.min(v.len() / 2);
    let edge: f64 = v[..k].iter().chain(&v[v.len() - k..]).map(|x| x * x).sum();
    edge / total
}

fn numeric_level(family: &Family, mass: f64, n: usize, cfg: &SolveConfig) -> Result<LevelSolution> {
    let mut warnings = Vec::new();
    let (energy, eps, residual, iterations) = if family.is_energy_dependent() {
        let f = |e: f64| discrete_level(family, mass, e, n, cfg).map(|eps| eps - (e * e - mass * mass));
        let root = pick_root(n, scan_roots(&f, cfg), &mut warnings)?;
        let eps = discrete_level(family, mass, root.x, n, cfg).ok_or(Error::NotFinite)?;
        (Some(root.x), eps, root.f.abs(), root.iterations)
    } else {
        let eps = discrete_level(family, mass, 0.0, n, cfg).ok_or_else(|| Error::LevelUnavailable {
            level: n,
            reason: "operator could not be built on this grid".into(),
        })?;
        let energy = energy_from_epsilon(n, eps, mass, &mut warnings);
        if let Some(e) = energy {
            let (lo, hi) = cfg.e_bracket;
            if !(lo..=hi).contains(&e) {
                return Err(Error::LevelUnavailable {
                    level: n,
                    reason: format!("no level {n} in bracket (E = {e})"),
                });
            }
        }
        (energy, eps, 0.0, 0)
    };
    if let Some(threshold) = family.continuum_threshold() {
        if eps >= threshold {
            return Err(Error::LevelUnavailable {
                level: n,
                reason: format!("epsilon = {eps} is in the continuum (threshold {threshold})"),
            });
        }
    }
    let u = family.effective_potential(mass, energy.unwrap_or(0.0), &cfg.grid)?;
    let (state, eigen_residual) = discrete_state(&u, eps);
    if tail_fraction(&state) > TAIL_MASS_LIMIT {
        warnings.push(format!(
            "level {n}: truncation suspect, more than {TAIL_MASS_LIMIT:e} of the density lies within 10 steps of a grid end"
        ));
    }
    Ok(LevelSolution {
        level: EnergyLevel {
            n,
            energy,
            epsilon: eps,
            method: Method::Numeric,
            residual,
            iterations,
            eigen_residual: Some(eigen_residual),
        },
        warnings,
    })
}

fn collect(results: Vec<(usize, Result<LevelSolution>)>, levels: &mut Vec<EnergyLevel>, warnings: &mut Vec<String>, method: Method) {
    for (n, res) in results {
        match res {
            Ok(sol) => {
                levels.push(sol.level);
                warnings.extend(sol.warnings);
            }
            Err(e) => warnings.push(format!("{} level {n} skipped: {e}", method.tag())),
        }
    }
}

/// All levels `n < cfg.max_levels` that solve the analytic condition.
pub fn analytic_levels(family: &Family, mass: f64, cfg: &SolveConfig) -> Result<SpectrumResult> {
    cfg.validate()?;
    family.validate(mass)?;
    let results: Vec<(usize, Result<LevelSolution>)> = (0..cfg.max_levels)
        .into_par_iter()
        .map(|n| (n, analytic_level(family, mass, n, cfg)))
        .collect();
    let mut out = empty_result(family, mass, cfg);
    collect(results, &mut out.levels, &mut out.warnings, Method::Analytic);
    out.sort();
    Ok(out)
}

/// Levels of the finite-difference operator, one independent solve per `n`.
pub fn numeric_levels(family: &Family, mass: f64, cfg: &SolveConfig) -> Result<SpectrumResult> {
    cfg.validate()?;
    family.validate(mass)?;
    let max_index = cfg.grid.len().saturating_sub(2);
    let results: Vec<(usize, Result<LevelSolution>)> = (0..cfg.max_levels.min(max_index))
        .into_par_iter()
        .map(|n| (n, numeric_level(family, mass, n, cfg)))
        .collect();
    let mut out = empty_result(family, mass, cfg);
    collect(results, &mut out.levels, &mut out.warnings, Method::Numeric);
    out.sort();
    Ok(out)
}

/// Analytic and numeric levels in one result, ordered by `n` then method.
pub fn both_levels(family: &Family, mass: f64, cfg: &SolveConfig) -> Result<SpectrumResult> {
    let mut out = if family.supports_analytic() {
        analytic_levels(family, mass, cfg)?
    } else {
        let mut r = empty_result(family, mass, cfg);
        r.warnings.push("analytic spectrum skipped: family has g != 0".into());
        r
    };
    let numeric = numeric_levels(family, mass, cfg)?;
    out.levels.extend(numeric.levels);
    out.warnings.extend(numeric.warnings);
    out.sort();
    Ok(out)
}

fn empty_result(family: &Family, mass: f64, cfg: &SolveConfig) -> SpectrumResult {
    SpectrumResult {
        family: *family,
        mass,
        levels: Vec::new(),
        config: *cfg,
        warnings: Vec::new(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub n: usize,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub abs_diff: Option<f64>,
    pub rel_diff: Option<f64>,
    /// The level is present on one side only.
    pub gap: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub rows: Vec<ComparisonRow>,
    pub max_rel_diff: f64,
}

fn first_energies(levels: &[EnergyLevel]) -> std::collections::BTreeMap<usize, Option<f64>> {
    let mut map = std::collections::BTreeMap::new();
    for l in levels {
        map.entry(l.n).or_insert(l.energy);
    }
    map
}

/// Per-`n` differences of `E`; levels present on one side are flagged as gaps.
pub fn compare_levels(a: &[EnergyLevel], b: &[EnergyLevel]) -> Comparison {
    let ea = first_energies(a);
    let eb = first_energies(b);
    let mut ns: Vec<usize> = ea.keys().chain(eb.keys()).copied().collect();
    ns.sort_unstable();
    ns.dedup();
    let mut max_rel_diff = 0.0_f64;
    let rows = ns
        .into_iter()
        .map(|n| {
            let x = ea.get(&n).copied().flatten();
            let y = eb.get(&n).copied().flatten();
            let (abs_diff, rel_diff) = match (x, y) {
                (Some(x), Some(y)) => {
                    let d = (x - y).abs();
                    let scale = x.abs().max(y.abs());
                    let rel = if scale > 0.0 { d / scale } else { 0.0 };
                    max_rel_diff = max_rel_diff.max(rel);
                    (Some(d), Some(rel))
                }
                _ => (None, None),
            };
            ComparisonRow {
                n,
                a: x,
                b: y,
                abs_diff,
                rel_diff,
                gap: x.is_none() || y.is_none(),
            }
        })
        .collect();
    Comparison { rows, max_rel_diff }
}

pub fn compare_spectra(a: &SpectrumResult, b: &SpectrumResult) -> Result<Comparison> {
    if a.family != b.family || a.mass != b.mass {
        return Err(Error::Mismatch(format!(
            "{} at M = {} vs {} at M = {}",
            a.family.tag(),
            a.mass,
            b.family.tag(),
            b.mass
        )));
    }
    Ok(compare_levels(&a.levels, &b.levels))
}

/// Relative residual `‖Hψ_k - ε_k ψ_k‖/‖ε_k ψ_k‖` of each ladder-built state
/// at trial energy `energy`, on interior nodes.
pub fn tower_residuals(family: &Family, mass: f64, energy: f64, n_max: usize, grid: &Grid) -> Result<Vec<f64>> {
    let spec = family.superpotential_spec(mass, energy)?;
    let eps0 = family.ground_offset(mass, energy)?;
    let u = family.effective_potential(mass, energy, grid)?;
    let tower = wavefunction_tower(&spec, n_max, grid)?;
    tower
        .levels
        .iter()
        .enumerate()
        .map(|(k, psi)| {
            let eps = analytic_epsilon(&spec, eps0, k)?;
            let h = apply_schrodinger(&u, psi)?;
            let m = psi.len();
            let (mut num, mut den) = (0.0, 0.0);
            for i in 1..m - 1 {
                num += (h.values()[i] - eps * psi.values()[i]).powi(2);
                den += (eps * psi.values()[i]).powi(2);
            }
            Ok((num / den.max(f64::MIN_POSITIVE)).sqrt())
        })
        .collect()
}

/// Unit-normalized level `n` at its self-consistent energy: the ladder-built
/// state when a closed form exists, the discrete eigenvector otherwise.
pub fn wavefunction(family: &Family, mass: f64, n: usize, cfg: &SolveConfig) -> Result<GridFunction> {
    if family.supports_analytic() {
        let sol = analytic_level(family, mass, n, cfg)?;
        let energy = sol.level.energy.unwrap_or(0.0);
        let spec = family.superpotential_spec(mass, energy)?;
        let tower = wavefunction_tower(&spec, n, &cfg.grid)?;
        return tower.levels.get(n).cloned().ok_or_else(|| Error::LevelUnavailable {
            level: n,
            reason: tower
                .rejected
                .first()
                .map(|r| r.reason.clone())
                .unwrap_or_else(|| "not normalizable".into()),
        });
    }
    let sol = numeric_level(family, mass, n, cfg)?;
    let u = family.effective_potential(mass, sol.level.energy.unwrap_or(0.0), &cfg.grid)?;
    let (state, _) = discrete_state(&u, sol.level.epsilon);
    let first = state
        .values()
        .iter()
        .copied()
        .find(|v| v.abs() > 1e-8 * state.max_abs())
        .unwrap_or(1.0);
    let state = state.scale(first.signum());
    state.normalized().ok_or(Error::NotFinite)
}
