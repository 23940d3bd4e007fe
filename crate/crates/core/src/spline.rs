//! Variational quadratic segmentary interpolation on a uniform grid.
//!
//! On each piece `I_k = [x_{k-1}, x_k]` the interpolant is
//!
//! ```text
//! P_k(x) = p_k(x) + a_k (x - x_{k-1}) (x - x_k)
//! ```
//!
//! where `p_k` is the linear interpolant through the two end samples. First
//! derivative continuity ties every `a_k` to `a_1` through
//! `a_k = (-1)^{k+1} a_1 + r_k`, and `a_1` is picked as the minimiser of
//! `∫ (S - s)^2`, with `s` the piecewise linear interpolant. Every
//! coefficient is therefore an explicit linear combination of the samples;
//! no linear system is solved anywhere in this module.

use crate::error::{invalid, Error, Result};

/// Relative slack used when deciding whether a point lies on the grid's span.
const DOMAIN_SLACK: f64 = 1e-12;

/// Uniform partition of `[a, b]` into `n` pieces.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    a: f64,
    b: f64,
    n: usize,
    h: f64,
    nodes: Vec<f64>,
}

impl Grid {
    pub fn new(a: f64, b: f64, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(invalid("n must be ≥ 1"));
        }
        if !(a.is_finite() && b.is_finite()) || a >= b {
            return Err(invalid(format!("grid endpoints must satisfy a < b (got a = {a}, b = {b})")));
        }
        let h = (b - a) / n as f64;
        let mut nodes: Vec<f64> = (0..=n).map(|k| a + k as f64 * h).collect();
        nodes[n] = b;
        Ok(Self { a, b, n, h, nodes })
    }

    /// Builds a grid from explicit nodes, rejecting anything that is not
    /// uniformly spaced to within `1e-9` relative.
    pub fn from_nodes(nodes: &[f64]) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(invalid("a grid needs at least two nodes"));
        }
        let n = nodes.len() - 1;
        let grid = Self::new(nodes[0], nodes[n], n)?;
        for (k, w) in nodes.windows(2).enumerate() {
            let found = w[1] - w[0];
            if found <= 0.0 {
                return Err(invalid(format!("nodes must be strictly increasing (piece {})", k + 1)));
            }
            if (found - grid.h).abs() > 1e-9 * grid.h {
                return Err(Error::NonUniformGrid {
                    piece: k + 1,
                    expected: grid.h,
                    found,
                });
            }
        }
        Ok(grid)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// Number of pieces.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Length `b - a` of the covered interval.
    pub fn span(&self) -> f64 {
        self.b - self.a
    }
}

fn check_samples(samples: &[f64], grid: &Grid) -> Result<()> {
    if samples.len() != grid.n + 1 {
        return Err(invalid(format!(
            "expected {} samples for a grid of {} pieces, found {}",
            grid.n + 1,
            grid.n,
            samples.len()
        )));
    }
    if let Some(k) = samples.iter().position(|y| !y.is_finite()) {
        return Err(invalid(format!("sample {k} is not finite")));
    }
    Ok(())
}

/// Particular solution `r_1 … r_n` of the continuity recurrence with `a_1 = 0`.
///
/// `r_1 = 0` and `r_{k+1} = (y_{k+1} - 2 y_k + y_{k-1}) / h² - r_k`.
pub fn compute_r(samples: &[f64], grid: &Grid) -> Result<Vec<f64>> {
    check_samples(samples, grid)?;
    let h2 = grid.h * grid.h;
    let mut r = vec![0.0; grid.n];
    for k in 1..grid.n {
        let second = samples[k + 1] - 2.0 * samples[k] + samples[k - 1];
        r[k] = second / h2 - r[k - 1];
    }
    Ok(r)
}

/// Minimiser of `(h⁵/30) Σ a_k²` over `a_1`, computed as `(1/n) Σ (-1)^k r_k`.
pub fn variational_a1(samples: &[f64], grid: &Grid) -> Result<f64> {
    let r = compute_r(samples, grid)?;
    Ok(a1_from_r(&r))
}

fn a1_from_r(r: &[f64]) -> f64 {
    // r[i] holds r_{i+1}, whose sign weight is (-1)^{i+1}.
    let sum: f64 = r
        .iter()
        .enumerate()
        .map(|(i, rk)| if i % 2 == 0 { -rk } else { *rk })
        .sum();
    sum / r.len() as f64
}

/// Integer weights `w_j` with `a_1 = (1/(n h²)) Σ w_j y_j`.
fn a1_weights(n: usize) -> Vec<f64> {
    let nf = n as f64;
    let mut w = vec![0.0; n + 1];
    w[0] += nf - 1.0;
    w[1] -= 3.0 * nf - 4.0;
    for (j, wj) in w.iter_mut().enumerate().take(n).skip(2) {
        *wj += 4.0 * sign(j) * (n - j) as f64;
    }
    w[n] += sign(n);
    w
}

fn sign(k: usize) -> f64 {
    if k.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Closed form of the variational `a_1` directly in terms of the samples.
pub fn variational_a1_closed_form(samples: &[f64], grid: &Grid) -> Result<f64> {
    check_samples(samples, grid)?;
    let w = a1_weights(grid.n);
    let acc: f64 = w.iter().zip(samples).map(|(w, y)| w * y).sum();
    Ok(acc / (grid.n as f64 * grid.h * grid.h))
}

/// The `n × (n+1)` matrix `C` with `a_k = (1/h²) Σ_j c_{k,j} y_j`.
///
/// `C` depends only on `n`. Rows are indexed from 0 (piece `I_1`) and
/// columns from 0 (sample `y_0`).
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl CoefficientMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row * (self.n + 1) + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        let w = self.n + 1;
        &self.entries[row * w..(row + 1) * w]
    }

    /// `(1/h²) C Y`, i.e. the per-piece corrections for samples `Y`.
    pub fn apply(&self, samples: &[f64], h: f64) -> Result<Vec<f64>> {
        if samples.len() != self.n + 1 {
            return Err(invalid(format!(
                "expected {} samples, found {}",
                self.n + 1,
                samples.len()
            )));
        }
        let h2 = h * h;
        Ok((0..self.n)
            .map(|k| self.row(k).iter().zip(samples).map(|(c, y)| c * y).sum::<f64>() / h2)
            .collect())
    }
}

pub fn coefficient_matrix(n: usize) -> Result<CoefficientMatrix> {
    if n == 0 {
        return Err(invalid("n must be ≥ 1"));
    }
    let w = n + 1;
    let nf = n as f64;
    let first: Vec<f64> = a1_weights(n).into_iter().map(|c| c / nf).collect();

    // Rows of r_k as linear functionals of Y (already multiplied by h²).
    let mut r_prev = vec![0.0; w];
    let mut entries = Vec::with_capacity(n * w);
    entries.extend_from_slice(&first);
    for k in 1..n {
        let mut r = vec![0.0; w];
        r[k - 1] += 1.0;
        r[k] -= 2.0;
        r[k + 1] += 1.0;
        for (rj, pj) in r.iter_mut().zip(&r_prev) {
            *rj -= pj;
        }
        // row k holds a_{k+1} = (-1)^k a_1 + r_{k+1}
        let s = sign(k);
        entries.extend(first.iter().zip(&r).map(|(f, rj)| s * f + rj));
        r_prev = r;
    }
    Ok(CoefficientMatrix { n, entries })
}

/// Variational quadratic spline through uniformly spaced samples.
#[derive(Debug, Clone, PartialEq)]
pub struct SplineInterpolant {
    grid: Grid,
    samples: Vec<f64>,
    a_coeffs: Vec<f64>,
    r_coeffs: Vec<f64>,
}

impl SplineInterpolant {
    pub fn fit(samples: &[f64], grid: &Grid) -> Result<Self> {
        let r = compute_r(samples, grid)?;
        let a1 = a1_from_r(&r);
        let a = corrections(a1, &r);
        Ok(Self {
            grid: grid.clone(),
            samples: samples.to_vec(),
            a_coeffs: a,
            r_coeffs: r,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    /// Quadratic corrections `a_1 … a_n`.
    pub fn a_coeffs(&self) -> &[f64] {
        &self.a_coeffs
    }

    pub fn r_coeffs(&self) -> &[f64] {
        &self.r_coeffs
    }

    /// Index (0-based) of the piece used for `x`. A node `x_k` with `k ≥ 1`
    /// belongs to the piece it closes on the right.
    fn piece_index(&self, x: f64) -> Result<usize> {
        let g = &self.grid;
        let slack = DOMAIN_SLACK * (g.b - g.a);
        if !(x >= g.a - slack && x <= g.b + slack) {
            return Err(Error::OutOfDomain { x, a: g.a, b: g.b });
        }
        let t = ((x - g.a) / g.h).ceil();
        Ok((t.max(1.0) as usize - 1).min(g.n - 1))
    }

    pub fn evaluate(&self, x: f64) -> Result<f64> {
        let k = self.piece_index(x)?;
        let x0 = self.grid.nodes[k];
        let x1 = self.grid.nodes[k + 1];
        let h = self.grid.h;
        let (y0, y1) = (self.samples[k], self.samples[k + 1]);
        let linear = (x - x0) / h * y1 - (x - x1) / h * y0;
        Ok(linear + self.a_coeffs[k] * (x - x0) * (x - x1))
    }

    /// `S'(x)`, using the same piece assignment as [`evaluate`](Self::evaluate).
    pub fn derivative(&self, x: f64) -> Result<f64> {
        let k = self.piece_index(x)?;
        Ok(self.piece_derivative(k, x))
    }

    /// `P'_{k+1}(x)` for the 0-based piece `k`, without any domain check.
    pub fn piece_derivative(&self, k: usize, x: f64) -> f64 {
        let x0 = self.grid.nodes[k];
        let x1 = self.grid.nodes[k + 1];
        let slope = (self.samples[k + 1] - self.samples[k]) / self.grid.h;
        slope + self.a_coeffs[k] * (2.0 * x - x0 - x1)
    }

    /// Coefficients `[q0, q1, q2]` of `P(x_start + t) = q0 + q1 t + q2 t²`
    /// for the 0-based piece `k`.
    pub fn local_coefficients(&self, k: usize) -> [f64; 3] {
        let h = self.grid.h;
        let a = self.a_coeffs[k];
        let y0 = self.samples[k];
        let y1 = self.samples[k + 1];
        [y0, (y1 - y0) / h - a * h, a]
    }

    /// `∫ (S - s)² = (h⁵/30) Σ a_k²`.
    pub fn objective(&self) -> f64 {
        objective_of(&self.a_coeffs, self.grid.h)
    }

    /// The objective with `a_1` replaced by `a1` and the remaining
    /// corrections rebuilt from the continuity recurrence.
    pub fn objective_with_a1(&self, a1: f64) -> f64 {
        objective_of(&corrections(a1, &self.r_coeffs), self.grid.h)
    }
}

fn corrections(a1: f64, r: &[f64]) -> Vec<f64> {
    r.iter()
        .enumerate()
        .map(|(i, rk)| if i % 2 == 0 { a1 + rk } else { -a1 + rk })
        .collect()
}

fn objective_of(a: &[f64], h: f64) -> f64 {
    h.powi(5) / 30.0 * a.iter().map(|v| v * v).sum::<f64>()
}
