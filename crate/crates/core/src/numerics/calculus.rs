//! Finite differences and quadrature on uniform grids.

use super::grid::GridFunction;
use crate::error::{Error, Result};

/// Second-order derivative: central differences inside, one-sided
/// three-point stencils at the two end nodes. Exact for quadratics.
pub fn derivative(f: &GridFunction) -> GridFunction {
    let v = f.values();
    let n = v.len();
    let h = f.grid().spacing();
    let mut out = vec![0.0; n];
    out[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
    for i in 1..n - 1 {
        out[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
    }
    out[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
    GridFunction::from_parts(*f.grid(), out)
}

/// Composite Simpson rule; the last panel pair is replaced by Simpson's 3/8
/// rule when the panel count is odd.
pub fn integrate(f: &GridFunction) -> f64 {
    simpson(f.values(), f.grid().spacing())
}

fn simpson(v: &[f64], h: f64) -> f64 {
    let panels = v.len() - 1;
    if panels < 2 {
        return 0.5 * h * (v[0] + v[panels]);
    }
    let (even_end, tail) = if panels.is_multiple_of(2) {
        (panels, 0.0)
    } else {
        let k = panels - 3;
        let tail = 3.0 * h / 8.0 * (v[k] + 3.0 * v[k + 1] + 3.0 * v[k + 2] + v[k + 3]);
        (panels - 3, tail)
    };
    if even_end == 0 {
        return tail;
    }
    let mut s = v[0] + v[even_end];
    for (i, &x) in v.iter().enumerate().take(even_end).skip(1) {
        s += if i % 2 == 1 { 4.0 * x } else { 2.0 * x };
    }
    s * h / 3.0 + tail
}

/// Running trapezoid integral anchored at `anchor_index`, where it is zero.
pub fn cumulative_integral(f: &GridFunction, anchor_index: usize) -> Result<GridFunction> {
    let v = f.values();
    let n = v.len();
    if anchor_index >= n {
        return Err(Error::IndexOutOfRange {
            index: anchor_index,
            len: n,
        });
    }
    let h = f.grid().spacing();
    let mut out = vec![0.0; n];
    for i in anchor_index + 1..n {
        out[i] = out[i - 1] + 0.5 * h * (v[i - 1] + v[i]);
    }
    for i in (0..anchor_index).rev() {
        out[i] = out[i + 1] - 0.5 * h * (v[i] + v[i + 1]);
    }
    Ok(GridFunction::from_parts(*f.grid(), out))
}
