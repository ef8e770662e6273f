use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::five_param::{eval_exponential, FiveParamExp};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseId {
    Tanh2,
    Scarf2,
    GenPoschlTeller,
    PoschlTeller2,
    PtScarf2,
    DoubleWell,
    Reflectionless,
}

impl CaseId {
    pub const ALL: [CaseId; 7] = [
        CaseId::Tanh2,
        CaseId::Scarf2,
        CaseId::GenPoschlTeller,
        CaseId::PoschlTeller2,
        CaseId::PtScarf2,
        CaseId::DoubleWell,
        CaseId::Reflectionless,
    ];

    pub fn tag(&self) -> &'static str {
        match self {
            CaseId::Tanh2 => "tanh2",
            CaseId::Scarf2 => "scarf2",
            CaseId::GenPoschlTeller => "gen_poschl_teller",
            CaseId::PoschlTeller2 => "poschl_teller2",
            CaseId::PtScarf2 => "pt_scarf2",
            CaseId::DoubleWell => "double_well",
            CaseId::Reflectionless => "reflectionless",
        }
    }

    pub fn parse(tag: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.tag() == tag)
            .ok_or_else(|| Error::Unsupported(format!("unknown case_id `{tag}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tanh2Params {
    #[serde(rename = "V0")]
    pub v0: f64,
    pub d: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AbParams {
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
    pub alpha: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WellParams {
    #[serde(rename = "V1")]
    pub v1: f64,
    #[serde(rename = "V2")]
    pub v2: f64,
    pub alpha: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LambdaParams {
    pub lambda: f64,
}

/// A named solvable potential with its own parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "case_id", content = "target_params", rename_all = "snake_case")]
pub enum CaseSpec {
    /// `V0·tanh²(r/d)`.
    Tanh2(Tanh2Params),
    /// `[B² - A(A+α)]sech²αr + B(2A+α)sech αr tanh αr`.
    Scarf2(AbParams),
    /// `[B² + A(A+α)]cosech²αr - B(2A+α)cosech αr coth αr`.
    GenPoschlTeller(AbParams),
    /// `-A(A+α)sech²αr + B(B-α)cosech²αr`.
    PoschlTeller2(AbParams),
    /// `-V1·sech²αr - i·V2·sech αr tanh αr`.
    PtScarf2(WellParams),
    /// `V1·tanh²αr - V2·sech²αr`.
    DoubleWell(WellParams),
    /// `-λ(λ+1)/2·sech²r`.
    Reflectionless(LambdaParams),
}

impl CaseSpec {
    /// Builds a case from its tag and a JSON object of target parameters.
    pub fn from_params(id: CaseId, params: serde_json::Value) -> Result<Self> {
        fn parse<T: serde::de::DeserializeOwned>(id: CaseId, v: serde_json::Value) -> Result<T> {
            serde_json::from_value(v)
                .map_err(|e| Error::Inadmissible(format!("{} params: {e}", id.tag())))
        }
        let case = match id {
            CaseId::Tanh2 => CaseSpec::Tanh2(parse(id, params)?),
            CaseId::Scarf2 => CaseSpec::Scarf2(parse(id, params)?),
            CaseId::GenPoschlTeller => CaseSpec::GenPoschlTeller(parse(id, params)?),
            CaseId::PoschlTeller2 => CaseSpec::PoschlTeller2(parse(id, params)?),
            CaseId::PtScarf2 => CaseSpec::PtScarf2(parse(id, params)?),
            CaseId::DoubleWell => CaseSpec::DoubleWell(parse(id, params)?),
            CaseId::Reflectionless => CaseSpec::Reflectionless(parse(id, params)?),
        };
        case.validate()?;
        Ok(case)
    }

    pub fn id(&self) -> CaseId {
        match self {
            CaseSpec::Tanh2(_) => CaseId::Tanh2,
            CaseSpec::Scarf2(_) => CaseId::Scarf2,
            CaseSpec::GenPoschlTeller(_) => CaseId::GenPoschlTeller,
            CaseSpec::PoschlTeller2(_) => CaseId::PoschlTeller2,
            CaseSpec::PtScarf2(_) => CaseId::PtScarf2,
            CaseSpec::DoubleWell(_) => CaseId::DoubleWell,
            CaseSpec::Reflectionless(_) => CaseId::Reflectionless,
        }
    }

    fn values(&self) -> Vec<f64> {
        match *self {
            CaseSpec::Tanh2(p) => vec![p.v0, p.d],
            CaseSpec::Scarf2(p) | CaseSpec::GenPoschlTeller(p) | CaseSpec::PoschlTeller2(p) => {
                vec![p.a, p.b, p.alpha]
            }
            CaseSpec::PtScarf2(p) | CaseSpec::DoubleWell(p) => vec![p.v1, p.v2, p.alpha],
            CaseSpec::Reflectionless(p) => vec![p.lambda],
        }
    }

    pub fn validate(&self) -> Result<()> {
        let tag = self.id().tag();
        if self.values().iter().any(|v| !v.is_finite()) {
            return Err(Error::Inadmissible(format!("{tag}: target parameters must be finite")));
        }
        let alpha = self.alpha();
        if !(alpha > 0.0) {
            let what = if matches!(self, CaseSpec::Tanh2(_)) { "d" } else { "alpha" };
            return Err(Error::Inadmissible(format!("{tag}: {what} must be positive")));
        }
        Ok(())
    }

    /// Inverse length of the target potential (`1/d` for tanh2, 1 for reflectionless).
    pub fn alpha(&self) -> f64 {
        match *self {
            CaseSpec::Tanh2(p) => 1.0 / p.d,
            CaseSpec::Scarf2(p) | CaseSpec::GenPoschlTeller(p) | CaseSpec::PoschlTeller2(p) => {
                p.alpha
            }
            CaseSpec::PtScarf2(p) | CaseSpec::DoubleWell(p) => p.alpha,
            CaseSpec::Reflectionless(_) => 1.0,
        }
    }

    /// Additive constant carried by the five-parameter image.
    pub fn documented_shift(&self) -> f64 {
        match *self {
            CaseSpec::Tanh2(p) => -p.v0,
            CaseSpec::DoubleWell(p) => -p.v1,
            _ => 0.0,
        }
    }

    /// Whether the case has a cosech/coth singularity at the origin.
    pub fn singular_at_origin(&self) -> bool {
        matches!(self, CaseSpec::GenPoschlTeller(_) | CaseSpec::PoschlTeller2(_))
    }

    pub fn is_complex(&self) -> bool {
        matches!(self, CaseSpec::PtScarf2(_))
    }
}

/// Result of mapping a case onto the five-parameter family.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseMapping {
    pub case: CaseSpec,
    pub family: FiveParamExp,
    /// Imaginary part of `Q3`; nonzero only for pt_scarf2, where `family.q3` is 0.
    pub q3_imag: f64,
    pub documented_shift: f64,
    /// Other real `(Q2, Q3)` solutions of the defining relations.
    pub alternates: Vec<(f64, f64)>,
}

impl CaseMapping {
    pub fn q3(&self) -> Complex64 {
        Complex64::new(self.family.q3, self.q3_imag)
    }

    pub fn eval(&self, r: f64) -> Result<Complex64> {
        let f = &self.family;
        eval_exponential(f.alpha, f.q, f.g, f.q2, self.q3(), r)
    }
}

/// Roots of `x² - 2αx = k`.
fn quadratic_roots(case: &str, relation: &str, alpha: f64, k: f64) -> Result<[f64; 2]> {
    let disc = alpha * alpha + k;
    if disc < 0.0 {
        return Err(Error::Inadmissible(format!(
            "{case}: discriminant alpha^2 + K = {disc} < 0 (K = {k}), so {relation} has no real root"
        )));
    }
    let s = disc.sqrt();
    Ok([alpha + s, alpha - s])
}

/// Real `(x, y)` with `x² + y² = s` and `x·y = t`, from `x ± y = ±sqrt(s ± 2t)`.
fn circle_hyperbola(case: &str, relation: &str, s: f64, t: f64) -> Result<Vec<(f64, f64)>> {
    let plus = s + 2.0 * t;
    let minus = s - 2.0 * t;
    // Tolerate rounding when the target sits exactly on the boundary.
    let slack = 1e-14 * s.abs().max(1.0);
    if plus < -slack || minus < -slack {
        return Err(Error::Inadmissible(format!(
            "{case}: {relation} has no real solution (needs sum of squares >= 2|cross term|, got {s} vs {})",
            2.0 * t.abs()
        )));
    }
    let u = plus.max(0.0).sqrt();
    let v = minus.max(0.0).sqrt();
    let mut out = Vec::new();
    for su in [1.0, -1.0] {
        for sv in [1.0, -1.0] {
            let (uu, vv) = (su * u, sv * v);
            out.push((0.5 * (uu + vv), 0.5 * (uu - vv)));
        }
    }
    Ok(out)
}

/// Real `(x, y)` with `x² - y² = s` and `x·y = t`: `x + iy = ±sqrt(s + 2it)`.
fn hyperbola_pair(s: f64, t: f64) -> Vec<(f64, f64)> {
    let z = Complex64::new(s, 2.0 * t).sqrt();
    vec![(z.re, z.im), (-z.re, -z.im)]
}

fn dedup(candidates: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = Vec::new();
    for c in candidates {
        let close = |o: &(f64, f64)| {
            let scale = 1e-12 * (1.0 + c.0.abs() + c.1.abs());
            (o.0 - c.0).abs() <= scale && (o.1 - c.1).abs() <= scale
        };
        if !out.iter().any(close) {
            out.push(c);
        }
    }
    out
}

/// Picks the normalizable candidate with the most regular ground state;
/// falls back to the largest `Q2` when none is normalizable.
fn choose(template: FiveParamExp, candidates: Vec<(f64, f64)>) -> (FiveParamExp, Vec<(f64, f64)>) {
    let candidates = dedup(candidates);
    let with = |(q2, q3): (f64, f64)| FiveParamExp { q2, q3, ..template };
    let regularity = |c: &(f64, f64)| {
        let p = with(*c);
        if p.q < 0.0 {
            -(p.q2 + p.q3 * (-p.q).sqrt())
        } else {
            -p.ground_offset()
        }
    };
    let normalizable: Vec<&(f64, f64)> = candidates
        .iter()
        .filter(|c| with(**c).ground_normalizable(c.0))
        .collect();
    let chosen = if normalizable.is_empty() {
        *candidates
            .iter()
            .max_by(|a, b| a.0.total_cmp(&b.0))
            .expect("at least one candidate")
    } else {
        **normalizable
            .iter()
            .max_by(|a, b| regularity(a).total_cmp(&regularity(b)))
            .expect("nonempty")
    };
    let alternates = candidates.into_iter().filter(|c| *c != chosen).collect();
    (with(chosen), alternates)
}

/// Maps a named potential onto the five-parameter family.
pub fn specialize(case: &CaseSpec) -> Result<CaseMapping> {
    case.validate()?;
    let tag = case.id().tag();
    let template = |alpha: f64, q: f64| FiveParamExp {
        alpha,
        q,
        g: 0.0,
        q2: 0.0,
        q3: 0.0,
    };
    let single_well = |alpha: f64, k: f64, relation: &str| -> Result<(FiveParamExp, Vec<(f64, f64)>)> {
        let roots = quadratic_roots(tag, relation, alpha, k)?;
        Ok(choose(template(alpha, 1.0), roots.iter().map(|&r| (r, 0.0)).collect()))
    };

    let mut q3_imag = 0.0;
    let (family, alternates) = match *case {
        CaseSpec::Tanh2(p) => single_well(1.0 / p.d, 4.0 * p.v0, "Q2^2 - 2*alpha*Q2 = 4*V0")?,
        CaseSpec::DoubleWell(p) => {
            single_well(p.alpha, 4.0 * (p.v1 + p.v2), "Q2^2 - 2*alpha*Q2 = 4*(V1 + V2)")?
        }
        CaseSpec::Reflectionless(p) => single_well(
            1.0,
            2.0 * p.lambda * (p.lambda + 1.0),
            "Q2^2 - 2*Q2 = 2*lambda*(lambda + 1)",
        )?,
        CaseSpec::Scarf2(p) => {
            // P = Q2 - α: P² - Q3² = (2A+α)² - 4B², P·Q3 = -2B(2A+α).
            let w = 2.0 * p.a + p.alpha;
            let pairs = hyperbola_pair(w * w - 4.0 * p.b * p.b, -2.0 * p.b * w);
            let cands = pairs.into_iter().map(|(x, y)| (x + p.alpha, y)).collect();
            choose(template(p.alpha, 1.0), cands)
        }
        CaseSpec::GenPoschlTeller(p) => {
            // P = Q2 + α: P² + Q3² = 4[B² + A(A+α)] + α², P·Q3 = -2B(2A+α).
            let s = 4.0 * (p.b * p.b + p.a * (p.a + p.alpha)) + p.alpha * p.alpha;
            let t = -2.0 * p.b * (2.0 * p.a + p.alpha);
            let pairs = circle_hyperbola(
                tag,
                "Q2^2 + Q3^2 + 2*alpha*Q2 = 4[B^2 + A(A+alpha)] with Q3*(Q2 + alpha) = -2B(2A+alpha)",
                s,
                t,
            )?;
            let cands = pairs.into_iter().map(|(x, y)| (x - p.alpha, y)).collect();
            choose(template(p.alpha, -1.0), cands)
        }
        CaseSpec::PoschlTeller2(p) => {
            // Family inverse length 2α; P = Q2 + 2α.
            let aa = p.a * (p.a + p.alpha);
            let bb = p.b * (p.b - p.alpha);
            let s = 8.0 * (aa + bb) + 4.0 * p.alpha * p.alpha;
            let t = -4.0 * (aa - bb);
            let pairs = circle_hyperbola(
                tag,
                "Q2^2 + Q3^2 + 4*alpha*Q2 = 8[A(A+alpha) + B(B-alpha)] with Q3*(Q2 + 2*alpha) = -4[A(A+alpha) - B(B-alpha)]",
                s,
                t,
            )?;
            let cands = pairs.into_iter().map(|(x, y)| (x - 2.0 * p.alpha, y)).collect();
            choose(template(2.0 * p.alpha, -1.0), cands)
        }
        CaseSpec::PtScarf2(p) => {
            // Q3 = i·t, P = Q2 - α: P² + t² = 4V1 + α², P·t = 2V2.
            let s = 4.0 * p.v1 + p.alpha * p.alpha;
            let pairs = circle_hyperbola(
                tag,
                "Q2^2 - Q3^2 - 2*alpha*Q2 = 4*V1 with Q3*(Q2 - alpha) = 2i*V2",
                s,
                2.0 * p.v2,
            )?;
            let cands: Vec<(f64, f64)> =
                dedup(pairs.into_iter().map(|(x, y)| (x + p.alpha, y)).collect());
            let best = *cands
                .iter()
                .max_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)))
                .expect("four candidates");
            q3_imag = best.1;
            let family = FiveParamExp {
                q2: best.0,
                ..template(p.alpha, 1.0)
            };
            (family, cands.into_iter().filter(|c| *c != best).collect())
        }
    };
    Ok(CaseMapping {
        case: *case,
        family,
        q3_imag,
        documented_shift: case.documented_shift(),
        alternates,
    })
}

fn check_domain(case: &CaseSpec, r: f64) -> Result<()> {
    if !r.is_finite() || (case.singular_at_origin() && r == 0.0) {
        return Err(Error::Inadmissible(format!(
            "{}: r = {r} is outside the domain",
            case.id().tag()
        )));
    }
    Ok(())
}

/// Target potential without the additive constant.
pub fn eval_case_shape(case: &CaseSpec, r: f64) -> Result<Complex64> {
    check_domain(case, r)?;
    let re = |v: f64| Ok(Complex64::new(v, 0.0));
    match *case {
        CaseSpec::Tanh2(p) => re(p.v0 * (r / p.d).tanh().powi(2)),
        CaseSpec::Scarf2(p) => {
            let x = p.alpha * r;
            let sech = 1.0 / x.cosh();
            re((p.b * p.b - p.a * (p.a + p.alpha)) * sech * sech
                + p.b * (2.0 * p.a + p.alpha) * sech * x.tanh())
        }
        CaseSpec::GenPoschlTeller(p) => {
            let x = p.alpha * r;
            let cosech = 1.0 / x.sinh();
            re((p.b * p.b + p.a * (p.a + p.alpha)) * cosech * cosech
                - p.b * (2.0 * p.a + p.alpha) * cosech / x.tanh())
        }
        CaseSpec::PoschlTeller2(p) => {
            let x = p.alpha * r;
            re(-p.a * (p.a + p.alpha) / x.cosh().powi(2)
                + p.b * (p.b - p.alpha) / x.sinh().powi(2))
        }
        CaseSpec::PtScarf2(p) => {
            let x = p.alpha * r;
            let sech = 1.0 / x.cosh();
            Ok(Complex64::new(-p.v1 * sech * sech, -p.v2 * sech * x.tanh()))
        }
        CaseSpec::DoubleWell(p) => {
            let x = p.alpha * r;
            re(p.v1 * x.tanh().powi(2) - p.v2 / x.cosh().powi(2))
        }
        CaseSpec::Reflectionless(p) => {
            re(-0.5 * p.lambda * (p.lambda + 1.0) / r.cosh().powi(2))
        }
    }
}

/// Target potential in closed form, additive constant included.
pub fn eval_case_closed_form_complex(case: &CaseSpec, r: f64) -> Result<Complex64> {
    Ok(eval_case_shape(case, r)? + case.documented_shift())
}

/// Real-valued target potential; refuses the complex pt_scarf2 case.
pub fn eval_case_closed_form(case: &CaseSpec, r: f64) -> Result<f64> {
    if case.is_complex() {
        return Err(Error::Unsupported(
            "pt_scarf2 is complex-valued; use the complex evaluator".into(),
        ));
    }
    Ok(eval_case_closed_form_complex(case, r)?.re)
}

/// Pointwise agreement between a mapping and its target.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RoundTrip {
    /// `image - shape` far from the origin.
    pub measured_shift: f64,
    pub documented_shift: f64,
    /// Max over samples of `|image - shape - measured_shift|`.
    pub residual: f64,
    pub samples: usize,
}

pub const ROUND_TRIP_SAMPLES: usize = 64;

/// Samples `[0.1/α, 8/α]` of the target's inverse length.
pub fn round_trip(mapping: &CaseMapping, samples: usize) -> Result<RoundTrip> {
    let alpha = mapping.case.alpha();
    let far = 30.0 / alpha;
    let measured = mapping.eval(far)? - eval_case_shape(&mapping.case, far)?;
    let (lo, hi) = (0.1 / alpha, 8.0 / alpha);
    let mut residual = 0.0_f64;
    for i in 0..samples {
        let r = lo + (hi - lo) * i as f64 / (samples.max(2) - 1) as f64;
        let gap = mapping.eval(r)? - eval_case_shape(&mapping.case, r)? - measured.re;
        residual = residual.max(gap.norm());
    }
    Ok(RoundTrip {
        measured_shift: measured.re,
        documented_shift: mapping.documented_shift,
        residual,
        samples,
    })
}

/// Residuals of the two defining relations of pt_scarf2 with complex `Q3`:
/// `Q2² - Q3² - 2αQ2 = 4V1` and `Q3(Q2 - α) = 2iV2`.
pub fn pt_scarf2_identity(mapping: &CaseMapping) -> Result<f64> {
    let CaseSpec::PtScarf2(p) = mapping.case else {
        return Err(Error::Unsupported("identity check applies to pt_scarf2 only".into()));
    };
    let q2 = Complex64::new(mapping.family.q2, 0.0);
    let q3 = mapping.q3();
    let first = q2 * q2 - q3 * q3 - 2.0 * p.alpha * q2 - 4.0 * p.v1;
    let second = q3 * (q2 - p.alpha) - Complex64::new(0.0, 2.0 * p.v2);
    Ok(first.norm().max(second.norm()))
}
