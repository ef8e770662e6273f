//! Symmetric tridiagonal eigenproblems by Sturm-sequence bisection.

use super::grid::{Grid, GridFunction};
use crate::error::{Error, Result};

pub const DEFAULT_EIG_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalOperator {
    diagonal: Vec<f64>,
    off_diagonal: Vec<f64>,
}

impl TridiagonalOperator {
    pub fn new(diagonal: Vec<f64>, off_diagonal: Vec<f64>) -> Result<Self> {
        if diagonal.is_empty() {
            return Err(Error::InvalidOperator("empty diagonal".into()));
        }
        if off_diagonal.len() + 1 != diagonal.len() {
            return Err(Error::InvalidOperator(format!(
                "off-diagonal has {} entries, expected {}",
                off_diagonal.len(),
                diagonal.len() - 1
            )));
        }
        if diagonal.iter().chain(&off_diagonal).any(|v| !v.is_finite()) {
            return Err(Error::InvalidOperator("non-finite entry".into()));
        }
        Ok(Self {
            diagonal,
            off_diagonal,
        })
    }

    /// `-d²/dr² + U(r)` with the three-point Laplacian on the interior nodes
    /// of `potential`'s grid; the end nodes carry the Dirichlet condition.
    pub fn schrodinger(potential: &GridFunction) -> Self {
        let grid = potential.grid();
        let h2 = grid.spacing() * grid.spacing();
        let u = potential.values();
        let n = grid.len() - 2;
        let diagonal = (1..=n).map(|i| 2.0 / h2 + u[i]).collect();
        let off_diagonal = vec![-1.0 / h2; n - 1];
        Self {
            diagonal,
            off_diagonal,
        }
    }

    pub fn size(&self) -> usize {
        self.diagonal.len()
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    pub fn off_diagonal(&self) -> &[f64] {
        &self.off_diagonal
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.size();
        assert_eq!(x.len(), n, "vector length must match operator size");
        let d = &self.diagonal;
        let e = &self.off_diagonal;
        (0..n)
            .map(|i| {
                let mut y = d[i] * x[i];
                if i > 0 {
                    y += e[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    y += e[i] * x[i + 1];
                }
                y
            })
            .collect()
    }

    /// Interval containing the whole spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.size();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.off_diagonal[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { self.off_diagonal[i].abs() } else { 0.0 };
            lo = lo.min(self.diagonal[i] - left - right);
            hi = hi.max(self.diagonal[i] + left + right);
        }
        (lo, hi)
    }

    fn pivot_floor(&self) -> f64 {
        let emax = self.off_diagonal.iter().fold(1.0_f64, |m, e| m.max(e * e));
        f64::MIN_POSITIVE * emax
    }

    /// Number of eigenvalues strictly below `lambda`.
    pub fn sturm_count(&self, lambda: f64) -> usize {
        let pivmin = self.pivot_floor();
        let mut count = 0;
        let mut q = self.diagonal[0] - lambda;
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
        for (d, e) in self.diagonal[1..].iter().zip(&self.off_diagonal) {
            q = (d - lambda) - e * e / q;
            if q.abs() < pivmin {
                q = -pivmin;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The `index`-th smallest eigenvalue (0-based) to absolute tolerance `tol`.
    pub fn eigenvalue(&self, index: usize, tol: f64) -> Result<f64> {
        if index >= self.size() {
            return Err(Error::EigenCount {
                requested: index + 1,
                size: self.size(),
            });
        }
        let (lo, hi) = self.gershgorin();
        let pad = 1e-12 * (lo.abs() + hi.abs()).max(1.0);
        Ok(self.bisect(index, lo - pad, hi + pad, tol))
    }

    fn bisect(&self, index: usize, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
        if self.size() == 1 {
            return self.diagonal[0];
        }
        loop {
            let mid = 0.5 * (lo + hi);
            let floor = 4.0 * f64::EPSILON * mid.abs().max(f64::MIN_POSITIVE);
            if hi - lo <= tol.max(floor) || mid <= lo || mid >= hi {
                return mid;
            }
            if self.sturm_count(mid) <= index {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }

    /// Unit eigenvector for an eigenvalue estimate, by inverse iteration.
    pub fn eigenvector(&self, lambda: f64) -> Vec<f64> {
        let n = self.size();
        if n == 1 {
            return vec![1.0];
        }
        let (lo, hi) = self.gershgorin();
        let scale = lo.abs().max(hi.abs()).max(1.0);
        let lu = ShiftedLu::factor(self, lambda, scale);
        // Deterministic start vector with no special symmetry.
        let mut x: Vec<f64> = (0..n)
            .map(|i| 1.0 + 0.5 * ((i as f64) * 0.7548776662466927).fract())
            .collect();
        for _ in 0..4 {
            lu.solve(&mut x);
            let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            if !(norm > 0.0 && norm.is_finite()) {
                break;
            }
            x.iter_mut().for_each(|v| *v /= norm);
        }
        x
    }
}

/// LU factors of `T - σI` with partial pivoting.
struct ShiftedLu {
    dl: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swapped: Vec<bool>,
}

impl ShiftedLu {
    fn factor(op: &TridiagonalOperator, sigma: f64, scale: f64) -> Self {
        let n = op.size();
        let mut d: Vec<f64> = op.diagonal.iter().map(|v| v - sigma).collect();
        let mut dl = op.off_diagonal.clone();
        let mut du = op.off_diagonal.clone();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n - 1];
        for i in 0..n - 1 {
            if d[i].abs() >= dl[i].abs() {
                if d[i] != 0.0 {
                    let fact = dl[i] / d[i];
                    dl[i] = fact;
                    d[i + 1] -= fact * du[i];
                }
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -fact;
                }
                swapped[i] = true;
            }
        }
        let tiny = f64::EPSILON * scale;
        for v in &mut d {
            if v.abs() < tiny {
                *v = if *v < 0.0 { -tiny } else { tiny };
            }
        }
        Self {
            dl,
            d,
            du,
            du2,
            swapped,
        }
    }

    fn solve(&self, b: &mut [f64]) {
        let n = self.d.len();
        for i in 0..n - 1 {
            if self.swapped[i] {
                let temp = b[i] - self.dl[i] * b[i + 1];
                b[i] = b[i + 1];
                b[i + 1] = temp;
            } else {
                b[i + 1] -= self.dl[i] * b[i];
            }
        }
        b[n - 1] /= self.d[n - 1];
        b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.d[n - 2];
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
    }
}

/// The `k` smallest eigenvalues, ascending, at the default tolerance.
pub fn eigenvalues_lowest(op: &TridiagonalOperator, k: usize) -> Result<Vec<f64>> {
    eigenvalues_lowest_with_tol(op, k, DEFAULT_EIG_TOL)
}

pub fn eigenvalues_lowest_with_tol(
    op: &TridiagonalOperator,
    k: usize,
    tol: f64,
) -> Result<Vec<f64>> {
    if k == 0 || k > op.size() {
        return Err(Error::EigenCount {
            requested: k,
            size: op.size(),
        });
    }
    let (lo, hi) = op.gershgorin();
    let pad = 1e-12 * (lo.abs() + hi.abs()).max(1.0);
    let mut out = Vec::with_capacity(k);
    let mut floor = lo - pad;
    for index in 0..k {
        let ev = op.bisect(index, floor, hi + pad, tol);
        out.push(ev);
        floor = (ev - 2.0 * tol).max(lo - pad);
    }
    Ok(out)
}

/// Applies the Dirichlet Schrödinger stencil of `potential` to `f` on the
/// interior nodes; end nodes of the result are zero.
pub fn apply_schrodinger(potential: &GridFunction, f: &GridFunction) -> Result<GridFunction> {
    let grid: &Grid = potential.grid();
    if !grid.same_as(f.grid()) {
        return Err(Error::GridMismatch);
    }
    let h2 = grid.spacing() * grid.spacing();
    let u = potential.values();
    let v = f.values();
    let n = grid.len();
    let mut out = vec![0.0; n];
    for i in 1..n - 1 {
        out[i] = (-v[i - 1] + 2.0 * v[i] - v[i + 1]) / h2 + u[i] * v[i];
    }
    Ok(GridFunction::from_parts(*grid, out))
}
