//! Bracketed scalar root finding (Brent's method with a bisection guard).

use crate::error::{Error, Result};

const MAX_ITERATIONS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub f: f64,
    pub iterations: usize,
}

/// Stopping rule: either `|f(x)| <= f_tol` or bracket width `<= x_tol`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootTolerance {
    pub x_tol: f64,
    pub f_tol: f64,
}

impl RootTolerance {
    pub fn uniform(tol: f64) -> Self {
        Self {
            x_tol: tol,
            f_tol: tol,
        }
    }
}

pub fn find_root_bracketed(f: impl FnMut(f64) -> f64, lo: f64, hi: f64, tol: f64) -> Result<Root> {
    find_root_with(f, lo, hi, RootTolerance::uniform(tol))
}

pub fn find_root_with(
    mut f: impl FnMut(f64) -> f64,
    lo: f64,
    hi: f64,
    tol: RootTolerance,
) -> Result<Root> {
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidBracket(format!("need finite lo < hi, got [{lo}, {hi}]")));
    }
    if !(tol.x_tol > 0.0 && tol.f_tol > 0.0) {
        return Err(Error::InvalidBracket("tolerances must be positive".into()));
    }
    let mut a = lo;
    let mut b = hi;
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(Root { x: a, f: fa, iterations: 0 });
    }
    if fb == 0.0 {
        return Ok(Root { x: b, f: fb, iterations: 0 });
    }
    if !(fa.is_finite() && fb.is_finite()) || fa.signum() == fb.signum() {
        return Err(Error::NoSignChange {
            lo,
            hi,
            f_lo: fa,
            f_hi: fb,
        });
    }

    // b is the best estimate, a the previous one, c the contrapoint.
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for iteration in 1..=MAX_ITERATIONS {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let slack = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol.x_tol;
        let half = 0.5 * (c - b);
        if fb.abs() <= tol.f_tol || half.abs() <= slack || fb == 0.0 {
            return Ok(Root {
                x: b,
                f: fb,
                iterations: iteration,
            });
        }
        if e.abs() >= slack && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * half * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * half * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * half * q - (slack * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = half;
                e = d;
            }
        } else {
            d = half;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > slack { d } else { slack.copysign(half) };
        fb = f(b);
    }
    Ok(Root {
        x: b,
        f: fb,
        iterations: MAX_ITERATIONS,
    })
}
