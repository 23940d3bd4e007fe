//! Error metrics, reference Mathieu characteristic values, trigonometric
//! fits of eigenfunctions and the interpolation experiments.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::floquet::{EigenSolution, FloquetProblem, Parity};
use crate::potentials::Potential;
use crate::spline::{Grid, SplineInterpolant};

/// Simpson subintervals per piece in [`mean_square_interp_error`].
const SIMPSON_PER_PIECE: usize = 10;

/// Series order and piece count of the reference eigenfunctions.
pub const REFERENCE_ORDER: usize = 10;
pub const REFERENCE_PIECES: usize = 1000;

/// `(1/(b-a)) ∫_a^b (approx - reference)² dx` by composite Simpson with
/// ten subintervals on each of `pieces` equal pieces.
pub fn mean_square_interp_error(
    approx: impl Fn(f64) -> f64,
    reference: impl Fn(f64) -> f64,
    (a, b): (f64, f64),
    pieces: usize,
) -> Result<f64> {
    if !(a < b) || pieces == 0 {
        return Err(invalid("need a < b and at least one piece"));
    }
    let m = pieces * SIMPSON_PER_PIECE;
    let dx = (b - a) / m as f64;
    let sq = |x: f64| (approx(x) - reference(x)).powi(2);
    let mut sum = sq(a) + sq(b);
    for i in 1..m {
        // pin node positions so kinks at piece boundaries are hit exactly
        let x = if i % SIMPSON_PER_PIECE == 0 {
            a + (b - a) * (i / SIMPSON_PER_PIECE) as f64 / pieces as f64
        } else {
            a + i as f64 * dx
        };
        sum += if i % 2 == 1 { 4.0 } else { 2.0 } * sq(x);
    }
    Ok(sum * dx / 3.0 / (b - a))
}

/// Mean-square error of the variational spline through `n + 1` equidistant
/// samples of `target`.
pub fn spline_interp_error(target: impl Fn(f64) -> f64, interval: (f64, f64), n: usize) -> Result<f64> {
    let grid = Grid::new(interval.0, interval.1, n)?;
    let samples: Vec<f64> = grid.nodes().iter().map(|&x| target(x)).collect();
    let spline = SplineInterpolant::fit(&samples, &grid)?;
    let (a, b) = interval;
    mean_square_interp_error(
        |x| spline.evaluate(x.clamp(a, b)).unwrap_or(f64::NAN),
        &target,
        interval,
        n,
    )
}

/// Mean-square error of the single degree-`n` polynomial through `n + 1`
/// equidistant samples of `target`.
pub fn lagrange_global_error(target: impl Fn(f64) -> f64, interval: (f64, f64), n: usize) -> Result<f64> {
    if n < 2 {
        return Err(invalid("global interpolation needs n ≥ 2"));
    }
    let grid = Grid::new(interval.0, interval.1, n)?;
    let nodes = grid.nodes().to_vec();
    let values: Vec<f64> = nodes.iter().map(|&x| target(x)).collect();
    // barycentric weights for equidistant nodes: (-1)^j C(n, j)
    let mut weights = vec![1.0; n + 1];
    for j in 1..=n {
        weights[j] = -weights[j - 1] * (n - j + 1) as f64 / j as f64;
    }
    let poly = |x: f64| {
        let (mut num, mut den) = (0.0, 0.0);
        for j in 0..=n {
            let d = x - nodes[j];
            if d == 0.0 {
                return values[j];
            }
            let t = weights[j] / d;
            num += t * values[j];
            den += t;
        }
        num / den
    };
    mean_square_interp_error(poly, &target, interval, 20 * n)
}

/// `|exact - approx| / |exact| · 100`.
pub fn relative_percent_error(exact: f64, approx: f64) -> Result<f64> {
    if exact == 0.0 {
        return Err(invalid("relative error undefined for exact = 0"));
    }
    Ok(((exact - approx) / exact).abs() * 100.0)
}

/// `Σ_k (y_k - ref_k)²`.
pub fn discrete_l2_error(samples: &[f64], reference: &[f64]) -> Result<f64> {
    if samples.len() != reference.len() {
        return Err(invalid(format!(
            "length mismatch: {} samples against {} reference values",
            samples.len(),
            reference.len()
        )));
    }
    Ok(samples.iter().zip(reference).map(|(y, r)| (y - r).powi(2)).sum())
}

/// Truncated small-`q` series for the Mathieu characteristic values of the
/// 2π-periodic solutions of `y'' + (r - 2q cos 2x) y = 0`, `k ∈ {1, 2, 3}`.
///
/// The odd `k = 1` and `k = 3` series are the printed right-hand sides
/// evaluated at `q` itself, which are the values tabulated for `q = 0.2`.
pub fn mathieu_reference(q: f64, k: usize, parity: Parity) -> Result<f64> {
    if !(q.abs() < 1.0) {
        return Err(invalid(format!("series needs |q| < 1 (got {q})")));
    }
    let (q2, q3, q4) = (q * q, q * q * q, q * q * q * q);
    let q5 = q4 * q;
    let q6 = q3 * q3;
    let r = match (k, parity) {
        (1, Parity::Even) => 1.0 + q - q2 / 8.0 - q3 / 64.0 - q4 / 1536.0,
        (1, Parity::Odd) => 1.0 - q - q2 / 8.0 + q3 / 64.0 - q4 / 1536.0,
        (2, Parity::Even) => 4.0 + 5.0 / 12.0 * q2 - 763.0 / 13824.0 * q4 + 1002401.0 / 79626240.0 * q6,
        (2, Parity::Odd) => 4.0 - q2 / 12.0 + 5.0 / 13824.0 * q4 - 289.0 / 79626240.0 * q6,
        (3, Parity::Even) => 9.0 + q2 / 16.0 + q3 / 64.0 + 13.0 / 20480.0 * q4 - 5.0 / 16384.0 * q5,
        (3, Parity::Odd) => 9.0 + q2 / 16.0 - q3 / 64.0 + 13.0 / 20480.0 * q4 + 5.0 / 16384.0 * q5,
        _ => return Err(invalid(format!("reference series only for k = 1, 2, 3 (got {k})"))),
    };
    Ok(r)
}

/// One basis function of a trigonometric fit, with `θ = 2π(x - x₀)/T`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FourierTerm {
    Constant,
    Cos(usize),
    Sin(usize),
}

impl FourierTerm {
    fn eval(self, theta: f64) -> f64 {
        match self {
            FourierTerm::Constant => 1.0,
            FourierTerm::Cos(k) => (k as f64 * theta).cos(),
            FourierTerm::Sin(k) => (k as f64 * theta).sin(),
        }
    }

    fn harmonic(self) -> usize {
        match self {
            FourierTerm::Constant => 0,
            FourierTerm::Cos(k) | FourierTerm::Sin(k) => k,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FourierFit {
    pub period: f64,
    /// Phase origin `x₀`, the first sample abscissa.
    pub origin: f64,
    pub terms: Vec<(FourierTerm, f64)>,
    /// Discrete L2 error of the fit at the samples.
    pub residual: f64,
}

impl FourierFit {
    pub fn coefficient(&self, term: FourierTerm) -> f64 {
        self.terms.iter().find(|(t, _)| *t == term).map_or(0.0, |(_, c)| *c)
    }

    pub fn constant(&self) -> f64 {
        self.coefficient(FourierTerm::Constant)
    }

    pub fn cosine(&self, k: usize) -> f64 {
        self.coefficient(FourierTerm::Cos(k))
    }

    pub fn sine(&self, k: usize) -> f64 {
        self.coefficient(FourierTerm::Sin(k))
    }

    pub fn evaluate(&self, x: f64) -> f64 {
        let theta = 2.0 * PI * (x - self.origin) / self.period;
        self.terms.iter().map(|(t, c)| c * t.eval(theta)).sum()
    }
}

/// Least-squares fit by a constant plus `n_harmonics` cosine/sine pairs.
pub fn fourier_fit(samples: &[(f64, f64)], period: f64, n_harmonics: usize) -> Result<FourierFit> {
    let mut terms = vec![FourierTerm::Constant];
    for k in 1..=n_harmonics {
        terms.push(FourierTerm::Cos(k));
        terms.push(FourierTerm::Sin(k));
    }
    fourier_fit_terms(samples, period, &terms)
}

/// Least-squares fit restricted to the given basis terms.
pub fn fourier_fit_terms(samples: &[(f64, f64)], period: f64, terms: &[FourierTerm]) -> Result<FourierFit> {
    if !(period > 0.0) {
        return Err(invalid("period must be positive"));
    }
    if samples.is_empty() || terms.is_empty() {
        return Err(invalid("need at least one sample and one term"));
    }
    let max_harmonic = terms.iter().map(|t| t.harmonic()).max().unwrap_or(0);
    if 2 * max_harmonic > samples.len() || terms.len() > samples.len() {
        return Err(invalid(format!(
            "{} samples cannot resolve harmonic {max_harmonic} with {} terms",
            samples.len(),
            terms.len()
        )));
    }
    let origin = samples[0].0;
    let design = DMatrix::from_fn(samples.len(), terms.len(), |i, j| {
        terms[j].eval(2.0 * PI * (samples[i].0 - origin) / period)
    });
    let rhs = DVector::from_iterator(samples.len(), samples.iter().map(|s| s.1));
    let coeffs = design
        .clone()
        .svd(true, true)
        .solve(&rhs, 1e-12)
        .map_err(|e| invalid(format!("least-squares solve failed: {e}")))?;
    let fitted = &design * &coeffs;
    let residual = discrete_l2_error(fitted.as_slice(), rhs.as_slice())?;
    Ok(FourierFit {
        period,
        origin,
        terms: terms.iter().copied().zip(coeffs.iter().copied()).collect(),
        residual,
    })
}

/// Fit the node values of an eigenfunction over its period.
pub fn fit_eigenfunction(solution: &EigenSolution, terms: &[FourierTerm]) -> Result<FourierFit> {
    let samples: Vec<(f64, f64)> = solution.nodes.iter().map(|s| (s.x, s.y)).collect();
    let period = samples[samples.len() - 1].0 - samples[0].0;
    fourier_fit_terms(&samples, period, terms)
}

/// High-accuracy eigenfunction at the eigenvalue nearest `energy`, from the exact-Taylor
/// propagator at order 10 on 1000 pieces.
pub fn reference_eigenfunction(potential: &Potential, energy: f64, lambda: Complex64) -> Result<EigenSolution> {
    let problem = FloquetProblem::cac(potential.clone(), REFERENCE_PIECES, REFERENCE_ORDER)?;
    let own = problem.nearest_eigenvalue(lambda, energy, 0.05)?.unwrap_or(energy);
    problem.eigenfunction(own, lambda)
}

/// `Σ_k (y_k - w(x_k))²` over the nodes of `solution`, reading `w` off a
/// reference on a grid refined by an integer factor.
pub fn error_against_reference(solution: &EigenSolution, reference: &EigenSolution) -> Result<f64> {
    let n = solution.nodes.len() - 1;
    let big = reference.nodes.len() - 1;
    if n == 0 || !big.is_multiple_of(n) {
        return Err(invalid(format!("reference grid ({big} pieces) does not refine {n} pieces")));
    }
    let stride = big / n;
    let w: Vec<f64> = reference.nodes.iter().step_by(stride).map(|s| s.y).collect();
    for (s, r) in solution.nodes.iter().zip(reference.nodes.iter().step_by(stride)) {
        if (s.x - r.x).abs() > 1e-9 * (1.0 + s.x.abs()) {
            return Err(invalid("solution and reference nodes do not coincide"));
        }
    }
    discrete_l2_error(&solution.values(), &w)
}

/// One cell of the Mathieu eigenvalue comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MathieuCell {
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub parity: Parity,
    pub reference: f64,
    /// Nearest computed eigenvalue, if any lies within 10 % of the reference.
    pub computed: Option<f64>,
    pub percent_error: Option<f64>,
    /// Published relative percent error for this cell, if tabulated.
    pub published: Option<f64>,
    /// Error exceeds ten times the published value (a published 0.0 is
    /// read as below 5e-5).
    pub flagged: bool,
}

/// Published relative percent errors for `q = 0.2` on `[0, 2π]`, indexed as
/// `(m, n, parity, [k=1, k=2, k=3])`.
pub const PUBLISHED_MATHIEU_ERRORS: [(usize, usize, Parity, [f64; 3]); 12] = [
    (3, 50, Parity::Even, [2.3e-1, 1.1, 2.1]),
    (3, 100, Parity::Even, [5.8e-1, 2.8e-1, 5.9e-1]),
    (3, 50, Parity::Odd, [3.4e-1, 1.0, 2.2]),
    (3, 100, Parity::Odd, [8.6e-2, 2.6e-1, 5.8e-1]),
    (5, 50, Parity::Even, [0.0, 1.0e-2, 1.4e-2]),
    (5, 100, Parity::Even, [0.0, 1.9e-3, 9.9e-4]),
    (5, 50, Parity::Odd, [7.5e-4, 3.2e-3, 1.7e-2]),
    (5, 100, Parity::Odd, [5.0e-4, 2.5e-4, 1.0e-3]),
    (7, 50, Parity::Even, [8.0e-4, 0.0, 1.0e-4]),
    (7, 100, Parity::Even, [0.0, 0.0, 0.0]),
    (7, 50, Parity::Odd, [5.0e-4, 0.0, 1.1e-4]),
    (7, 100, Parity::Odd, [0.0, 0.0, 0.0]),
];

/// A published "0.0" stands for anything below half a display unit.
pub const PUBLISHED_ZERO: f64 = 5e-5;

pub fn published_mathieu_error(m: usize, n: usize, k: usize, parity: Parity) -> Option<f64> {
    PUBLISHED_MATHIEU_ERRORS
        .iter()
        .find(|(mm, nn, p, _)| *mm == m && *nn == n && *p == parity)
        .and_then(|(_, _, _, row)| row.get(k.wrapping_sub(1)).copied())
}

/// Periodic eigenvalues in `range` for the Mathieu problem, counting a
/// narrow gap pair that the model lifts off `Δ = 2` by at most 1e-3 as one
/// eigenvalue at its tangency point.
pub fn mathieu_eigenvalues(q: f64, m: usize, n: usize, range: (f64, f64)) -> Result<Vec<f64>> {
    let problem = FloquetProblem::spline(Potential::mathieu(q)?, n, m)?;
    Ok(problem
        .find_roots_with_tangency(Complex64::new(0.0, 0.0), range, crate::floquet::DEFAULT_SCAN_STEP, 1e-3)?
        .into_iter()
        .map(|r| r.energy)
        .collect())
}

/// Relative percent error of every `(m, n, k, parity)` cell against the
/// reference series, each reference matched to the nearest computed root.
pub fn mathieu_table(q: f64, ms: &[usize], ns: &[usize]) -> Result<Vec<MathieuCell>> {
    let mut cells = Vec::new();
    for &m in ms {
        for &n in ns {
            let roots = mathieu_eigenvalues(q, m, n, (0.0, 12.0))?;
            for parity in [Parity::Even, Parity::Odd] {
                for k in 1..=3 {
                    let reference = mathieu_reference(q, k, parity)?;
                    let computed = roots
                        .iter()
                        .copied()
                        .min_by(|a, b| (a - reference).abs().total_cmp(&(b - reference).abs()))
                        .filter(|e| (e - reference).abs() <= 0.1 * reference);
                    let percent_error = computed.map(|e| relative_percent_error(reference, e)).transpose()?;
                    let published = if q == 0.2 { published_mathieu_error(m, n, k, parity) } else { None };
                    let flagged = match (percent_error, published) {
                        (None, _) => true,
                        (Some(err), Some(p)) => err > 10.0 * p.max(PUBLISHED_ZERO),
                        (Some(_), None) => false,
                    };
                    cells.push(MathieuCell {
                        m,
                        n,
                        k,
                        parity,
                        reference,
                        computed,
                        percent_error,
                        published,
                        flagged,
                    });
                }
            }
        }
    }
    Ok(cells)
}

/// How a node solution was produced for the eigenfunction error table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Method {
    /// Spline potential, Taylor series of the given order.
    Spline(usize),
    /// Exact local Taylor potential, series of the given order.
    Cac(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorCell {
    pub method: Method,
    pub target: f64,
    /// Eigenvalue of the model itself, nearest the target; `None` when the
    /// model has no eigenstate there.
    pub energy: Option<f64>,
    /// `Σ (w(x_k) - g(x_k))²` against the reference eigenfunction.
    pub error: Option<f64>,
}

/// Node-error table for the eigenstates near `energies` with `λ = 0`.
pub fn eigenfunction_error_table(
    potential: &Potential,
    energies: &[f64],
    n: usize,
    methods: &[Method],
) -> Result<Vec<ErrorCell>> {
    let zero = Complex64::new(0.0, 0.0);
    let mut cells = Vec::new();
    for &e in energies {
        let reference = reference_eigenfunction(potential, e, zero)?;
        for &method in methods {
            let problem = match method {
                Method::Spline(m) => FloquetProblem::spline(potential.clone(), n, m)?,
                Method::Cac(order) => FloquetProblem::cac(potential.clone(), n, order)?,
            };
            // each model is evaluated at its own eigenvalue nearest the target
            let own = problem.nearest_eigenvalue(zero, e, 0.05)?.unwrap_or(e);
            let cell = match problem.eigenfunction(own, zero) {
                Ok(solution) => ErrorCell {
                    method,
                    target: e,
                    energy: Some(solution.energy),
                    error: Some(error_against_reference(&solution, &reference)?),
                },
                Err(Error::NoEigenfunction { .. }) => ErrorCell {
                    method,
                    target: e,
                    energy: None,
                    error: None,
                },
                Err(e) => return Err(e),
            };
            cells.push(cell);
        }
    }
    Ok(cells)
}
