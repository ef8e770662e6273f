use std::fmt::Write as _;

use serde::Serialize;
use serde_json::json;

use super::config::{OutputFormat, Problem};
use crate::algebra::{
    classify_algebra, commutator_residual, r_sequence, verify_structure_constants, TowerState,
    SECOND_DIFFERENCE_TOL,
};
use crate::error::Error;
use crate::families::{pt_scarf2_identity, round_trip, specialize, CaseSpec, ROUND_TRIP_SAMPLES};
use crate::numerics::GridFunction;
use crate::spectrum::{
    analytic_level, analytic_levels, both_levels, numeric_levels, tower_residuals, wavefunction,
    SpectrumResult,
};
use crate::susy::{
    apply_lowering, factorization_offset, shape_invariance_residual, wavefunction_tower,
};

/// Residual bounds used by `verify`.
pub const SHAPE_TOL: f64 = 1e-9;
pub const FACTORIZATION_TOL: f64 = 1e-9;
pub const OPERATOR_TOL: f64 = 1e-3;
pub const ANNIHILATION_TOL: f64 = 1e-4;
pub const SPECIALIZE_TOL: f64 = 1e-9;

/// Exit status plus the text destined for standard output and standard error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    pub fn ok(stdout: String) -> Self {
        Self {
            code: 0,
            stdout,
            stderr: String::new(),
        }
    }

    pub fn config_error(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            stdout: String::new(),
            stderr: message.into() + "\n",
        }
    }

    pub fn failure(stdout: String, message: impl Into<String>) -> Self {
        Self {
            code: 2,
            stdout,
            stderr: message.into() + "\n",
        }
    }

    fn warn(mut self, warnings: &[String]) -> Self {
        for w in warnings {
            self.stderr.push_str("warning: ");
            self.stderr.push_str(w);
            self.stderr.push('\n');
        }
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum MethodArg {
    Analytic,
    Numeric,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Target {
    ShapeInvariance,
    Factorization,
    Algebra,
    Tower,
}

/// Shortest decimal that round-trips, with an exponent for very small or large values.
fn num(x: f64) -> String {
    format!("{x:?}")
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

pub fn spectrum_csv(result: &SpectrumResult) -> String {
    let mut out = String::from("n,method,E,epsilon,residual,iterations\n");
    for l in &result.levels {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            l.n,
            l.method.tag(),
            opt(l.energy),
            num(l.epsilon),
            num(l.residual),
            l.iterations
        );
    }
    out
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

pub fn cmd_spectrum(problem: &Problem, method: MethodArg) -> Outcome {
    let (family, mass, cfg) = (&problem.family, problem.mass, &problem.solve);
    let result = match method {
        MethodArg::Analytic => analytic_levels(family, mass, cfg),
        MethodArg::Numeric => numeric_levels(family, mass, cfg),
        MethodArg::Both => both_levels(family, mass, cfg),
    };
    let result = match result {
        Ok(r) => r,
        Err(e @ Error::Unsupported(_)) => return Outcome::config_error(format!("method: {e}")),
        Err(e) => return Outcome::config_error(e.to_string()),
    };
    let body = match problem.output {
        OutputFormat::Csv => spectrum_csv(&result),
        OutputFormat::Json => to_json(&result),
    };
    if result.levels.is_empty() {
        return Outcome::failure(body, "no levels in bracket").warn(&result.warnings);
    }
    Outcome::ok(body).warn(&result.warnings)
}

/// Trial energy at which E-dependent checks are made: the analytic ground
/// level when it is in the bracket, the bracket midpoint otherwise.
fn reference_energy(problem: &Problem) -> (f64, &'static str) {
    let cfg = &problem.solve;
    if problem.family.is_energy_dependent() {
        if let Ok(sol) = analytic_level(&problem.family, problem.mass, 0, cfg) {
            if let Some(e) = sol.level.energy {
                return (e, "ground level");
            }
        }
    }
    (0.5 * (cfg.e_bracket.0 + cfg.e_bracket.1), "bracket midpoint")
}

/// Smooth bump centred on the grid, width a twelfth of its span.
pub fn gaussian_probe(grid: &crate::numerics::Grid) -> GridFunction {
    let c = 0.5 * (grid.r_min() + grid.r_max());
    let w = (grid.r_max() - grid.r_min()) / 12.0;
    GridFunction::zeros(*grid).map_with_node(|r, _| (-((r - c) / w).powi(2)).exp())
}

#[derive(Debug, Serialize)]
struct Check {
    name: String,
    value: f64,
    tolerance: f64,
    pass: bool,
}

fn check(name: &str, value: f64, tolerance: f64) -> Check {
    Check {
        name: name.to_string(),
        value,
        tolerance,
        pass: value.is_finite() && value <= tolerance,
    }
}

pub fn cmd_verify(problem: &Problem, target: Target) -> Outcome {
    match verify(problem, target) {
        Ok((report, pass)) => {
            let body = to_json(&report);
            if pass {
                Outcome::ok(body)
            } else {
                Outcome::failure(body, "verification failed: a residual exceeds its tolerance")
            }
        }
        Err(e) => Outcome::config_error(e.to_string()),
    }
}

fn verify(problem: &Problem, target: Target) -> crate::Result<(serde_json::Value, bool)> {
    let (family, mass, cfg) = (&problem.family, problem.mass, &problem.solve);
    let grid = &cfg.grid;
    let (energy, energy_source) = reference_energy(problem);
    let spec = family.superpotential_spec(mass, energy)?;
    let mut checks = Vec::new();
    let mut extra = serde_json::Map::new();

    match target {
        Target::ShapeInvariance => {
            let worst = (1..=3)
                .map(|n| shape_invariance_residual(&spec, n, grid))
                .collect::<crate::Result<Vec<f64>>>()?
                .into_iter()
                .fold(0.0, f64::max);
            checks.push(check("shape_invariance_residual", worst, SHAPE_TOL));
        }
        Target::Factorization => {
            let u = family.effective_potential(mass, energy, grid)?;
            let fac = factorization_offset(&spec, &u, 1)?;
            let expected = family.ground_offset(mass, energy)?;
            checks.push(check("factorization_residual", fac.residual, FACTORIZATION_TOL));
            checks.push(check(
                "offset_minus_closed_form",
                (fac.offset - expected).abs(),
                FACTORIZATION_TOL,
            ));
            extra.insert("offset".into(), json!(fac.offset));
        }
        Target::Algebra => {
            let seq = r_sequence(&spec, 8)?;
            let report = classify_algebra(&seq, SECOND_DIFFERENCE_TOL)
                .with_kappa(family.ground_offset(mass, energy)?);
            let probe = TowerState::uniform(&gaussian_probe(grid), 5)?;
            let comm = commutator_residual(&spec, &probe)?;
            let report = report.with_commutator_residual(comm);
            checks.push(check(
                "max_second_difference",
                report.max_second_difference,
                SECOND_DIFFERENCE_TOL,
            ));
            checks.push(check("commutator_residual", comm, OPERATOR_TOL));
            if let Ok(structure) = verify_structure_constants(&spec, &report, &probe) {
                for r in &structure.relations {
                    checks.push(check(&r.relation, r.residual, OPERATOR_TOL));
                }
            }
            extra.insert("classification".into(), json!(report.classification.tag()));
            extra.insert("algebra".into(), serde_json::to_value(report).expect("serializable"));
            extra.insert("remainders".into(), json!(seq.values));
        }
        Target::Tower => {
            let levels = spec.bound_levels().unwrap_or(usize::MAX).min(cfg.max_levels);
            if levels == 0 {
                return Err(Error::LevelUnavailable {
                    level: 0,
                    reason: "no normalizable ground state".into(),
                });
            }
            let tower = wavefunction_tower(&spec, levels - 1, grid)?;
            let psi0 = &tower.levels[0];
            let lowered = apply_lowering(&spec, 1, psi0)?;
            let annihilation = lowered.max_abs_interior(crate::algebra::EDGE_MARGIN)
                / psi0.max_abs();
            checks.push(check("lowering_on_ground", annihilation, ANNIHILATION_TOL));
            let residuals = tower_residuals(family, mass, energy, levels - 1, grid)?;
            for (k, r) in residuals.iter().enumerate() {
                checks.push(check(&format!("eigen_residual_{k}"), *r, OPERATOR_TOL));
            }
            let floor = 1e-6;
            let nodes: Vec<usize> = tower
                .levels
                .iter()
                .map(|psi| psi.sign_changes(floor * psi.max_abs()))
                .collect();
            extra.insert("node_counts".into(), json!(nodes));
        }
    }
    let pass = checks.iter().all(|c| c.pass);
    let mut report = serde_json::Map::new();
    report.insert("family".into(), json!(family.tag()));
    report.insert("target".into(), json!(target_tag(target)));
    report.insert("energy".into(), json!(energy));
    report.insert("energy_source".into(), json!(energy_source));
    report.extend(extra);
    report.insert("checks".into(), serde_json::to_value(&checks).expect("serializable"));
    report.insert("pass".into(), json!(pass));
    Ok((serde_json::Value::Object(report), pass))
}

fn target_tag(t: Target) -> &'static str {
    match t {
        Target::ShapeInvariance => "shape_invariance",
        Target::Factorization => "factorization",
        Target::Algebra => "algebra",
        Target::Tower => "tower",
    }
}

pub fn cmd_specialize(case: &CaseSpec) -> Outcome {
    let mapping = match specialize(case) {
        Ok(m) => m,
        Err(e) => return Outcome::config_error(e.to_string()),
    };
    let rt = match round_trip(&mapping, ROUND_TRIP_SAMPLES) {
        Ok(rt) => rt,
        Err(e) => return Outcome::config_error(e.to_string()),
    };
    let f = &mapping.family;
    let mut report = json!({
        "case": case,
        "alpha": f.alpha,
        "q": f.q,
        "g": f.g,
        "Q2": f.q2,
        "Q3": f.q3,
        "Q3_imag": mapping.q3_imag,
        "shift": rt.measured_shift,
        "documented_shift": rt.documented_shift,
        "residual": rt.residual,
        "samples": rt.samples,
        "alternates": mapping.alternates.iter().map(|(a, b)| json!({"Q2": a, "Q3": b})).collect::<Vec<_>>(),
    });
    let mut pass = rt.residual < SPECIALIZE_TOL
        && (rt.measured_shift - rt.documented_shift).abs() < SPECIALIZE_TOL;
    if case.is_complex() {
        let identity = pt_scarf2_identity(&mapping).unwrap_or(f64::INFINITY);
        report["identity_residual"] = json!(identity);
        pass &= identity < SPECIALIZE_TOL;
    }
    let body = to_json(&report);
    if pass {
        Outcome::ok(body)
    } else {
        Outcome::failure(body, "round-trip residual exceeds 1e-9")
    }
}

pub fn wavefunction_csv(psi: &GridFunction) -> String {
    let mut out = String::from("r,psi\n");
    for (r, v) in psi.grid().nodes().zip(psi.values()) {
        let _ = writeln!(out, "{r:.16e},{v:.16e}");
    }
    out
}

pub fn cmd_wavefunction(problem: &Problem, n: usize) -> Outcome {
    match wavefunction(&problem.family, problem.mass, n, &problem.solve) {
        Ok(psi) => Outcome::ok(wavefunction_csv(&psi)),
        Err(e @ (Error::LevelUnavailable { .. } | Error::NoSignChange { .. })) => {
            Outcome::failure(String::new(), format!("level {n} absent: {e}"))
        }
        Err(e) => Outcome::config_error(e.to_string()),
    }
}
