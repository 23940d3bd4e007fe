//! Floquet analysis over one period: monodromy, discriminant, eigenvalues
//! for a given exponent, band structure and Bloch eigenfunctions.
//!
//! A solution with Floquet exponent `λ = iα` exists at energy `E` exactly
//! when the trace `Δ(E)` of the monodromy matrix equals `2 cos(αT)`. Energies
//! with `|Δ| ≤ 2` carry bounded solutions and make up the allowed bands;
//! `|Δ| > 2` gives a real part `Re λ ≠ 0` and no bounded solution.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::potentials::Potential;
use crate::propagator::{FundamentalPair, NodeState, TransferMatrix};
use crate::spline::{Grid, SplineInterpolant};

/// Default spacing of the energy scan used to bracket roots.
pub const DEFAULT_SCAN_STEP: f64 = 0.05;

/// `|Δ ∓ 2|` below this at a local extremum counts as a double root.
const DOUBLE_ROOT_TOL: f64 = 1e-8;

/// Roots closer than this are reported once.
const MERGE_TOL: f64 = 1e-8;
/// Relative spacing below which band edges are treated as one point.
const EDGE_CLUSTER_TOL: f64 = 1e-6;

/// Which local model of the potential feeds the transfer matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Variational quadratic spline through the node samples.
    Spline,
    /// Exact Taylor coefficients of the potential, series of the given order.
    Cac { order: usize },
}

#[derive(Debug, Clone, PartialEq)]
struct LocalPiece {
    x_start: f64,
    width: f64,
    potential: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FloquetProblem {
    potential: Potential,
    grid: Grid,
    taylor_order: usize,
    mode: Mode,
    node_potential: Vec<f64>,
    pieces: Vec<LocalPiece>,
}

impl FloquetProblem {
    /// Sets up the piecewise model of `potential` on `grid`, which must span
    /// exactly one period.
    pub fn new(potential: Potential, grid: Grid, taylor_order: usize, mode: Mode) -> Result<Self> {
        let samples = potential.sample(&grid)?;
        let nodes = grid.nodes();
        let (pieces, order) = match mode {
            Mode::Spline => {
                let spline = SplineInterpolant::fit(&samples, &grid)?;
                let pieces = (0..grid.n())
                    .map(|k| LocalPiece {
                        x_start: nodes[k],
                        width: grid.h(),
                        potential: spline.local_coefficients(k).to_vec(),
                    })
                    .collect();
                (pieces, taylor_order)
            }
            Mode::Cac { order } => {
                let mut pieces = Vec::with_capacity(grid.n());
                for k in 0..grid.n() {
                    pieces.push(LocalPiece {
                        x_start: nodes[k],
                        width: grid.h(),
                        potential: potential.local_taylor(nodes[k], order.saturating_sub(2))?,
                    });
                }
                (pieces, order)
            }
        };
        // validate the order once so that evaluation below cannot fail
        FundamentalPair::from_local_potential(&[], 0.0, order)?;
        Ok(Self {
            potential,
            grid,
            taylor_order: order,
            mode,
            node_potential: samples,
            pieces,
        })
    }

    /// Spline mode on the potential's own period with `n` pieces.
    pub fn spline(potential: Potential, n: usize, m: usize) -> Result<Self> {
        let grid = potential.grid(n)?;
        Self::new(potential, grid, m, Mode::Spline)
    }

    /// Exact-Taylor mode on the potential's own period with `n` pieces.
    pub fn cac(potential: Potential, n: usize, order: usize) -> Result<Self> {
        let grid = potential.grid(n)?;
        Self::new(potential, grid, order, Mode::Cac { order })
    }

    pub fn potential(&self) -> &Potential {
        &self.potential
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Order of the truncated series actually used.
    pub fn taylor_order(&self) -> usize {
        self.taylor_order
    }

    pub fn period(&self) -> f64 {
        self.grid.span()
    }

    fn piece_matrix(&self, piece: &LocalPiece, energy: f64) -> TransferMatrix {
        FundamentalPair::from_local_potential(&piece.potential, energy, self.taylor_order)
            .expect("order validated at construction")
            .transfer_matrix(piece.width)
    }

    /// Product `M_n ⋯ M_1` of the per-piece transfer matrices.
    pub fn monodromy(&self, energy: f64) -> TransferMatrix {
        self.pieces
            .iter()
            .fold(TransferMatrix::IDENTITY, |acc, p| self.piece_matrix(p, energy) * acc)
    }

    /// `Δ(E) = tr M(E)`.
    pub fn discriminant(&self, energy: f64) -> f64 {
        self.monodromy(energy).trace()
    }

    /// `(x, y, y')` at every node, starting from `(y0, dy0)` at `a`.
    pub fn propagate(&self, energy: f64, y0: f64, dy0: f64) -> Vec<NodeState> {
        let mut state = NodeState {
            x: self.grid.a(),
            y: y0,
            dy: dy0,
        };
        let mut out = Vec::with_capacity(self.pieces.len() + 1);
        out.push(state);
        for (k, p) in self.pieces.iter().enumerate() {
            let (y, dy) = self.piece_matrix(p, energy).apply(state.y, state.dy);
            state = NodeState {
                x: self.grid.nodes()[k + 1],
                y,
                dy,
            };
            out.push(state);
        }
        out
    }

    /// Floquet exponent at `E` with `Re λ ≥ 0` and `Im λ ∈ [0, π/T]`.
    ///
    /// Purely imaginary inside a band, with a positive real part in a gap.
    pub fn floquet_exponent(&self, energy: f64) -> Complex64 {
        let half = self.discriminant(energy) / 2.0;
        let t = self.period();
        if half.abs() <= 1.0 {
            Complex64::new(0.0, half.acos() / t)
        } else if half > 1.0 {
            Complex64::new(half.acosh() / t, 0.0)
        } else {
            Complex64::new((-half).acosh() / t, PI / t)
        }
    }

    /// Energies in `range` admitting a solution with exponent `lambda`,
    /// sorted and with near-coincident roots reported once.
    pub fn find_eigenvalues(&self, lambda: Complex64, range: (f64, f64), scan_step: f64) -> Result<Vec<f64>> {
        Ok(self
            .find_roots(lambda, range, scan_step)?
            .into_iter()
            .map(|r| r.energy)
            .collect())
    }

    /// Like [`find_eigenvalues`](Self::find_eigenvalues) but flags double
    /// roots, where two bands touch.
    pub fn find_roots(&self, lambda: Complex64, range: (f64, f64), scan_step: f64) -> Result<Vec<Root>> {
        self.find_roots_with_tangency(lambda, range, scan_step, DOUBLE_ROOT_TOL)
    }

    /// Also accepts local extrema of `Δ - 2cos(αT)` that stop within
    /// `tangency` of zero without reaching it, reported as degenerate roots
    /// with a non-zero residual. A coarse model can lift a narrow gap pair
    /// just off the target; this recovers its approximate location.
    pub fn find_roots_with_tangency(
        &self,
        lambda: Complex64,
        range: (f64, f64),
        scan_step: f64,
        tangency: f64,
    ) -> Result<Vec<Root>> {
        let alpha = bounded_alpha(lambda)?;
        let target = 2.0 * (alpha * self.period()).cos();
        self.roots_of(target, range, scan_step, tangency.max(DOUBLE_ROOT_TOL))
    }

    fn roots_of(&self, target: f64, range: (f64, f64), step: f64, tangency: f64) -> Result<Vec<Root>> {
        scan_roots(|e| self.discriminant(e) - target, range, step, tangency)
    }

    /// The root for `lambda` nearest `guess` within `guess ± window`,
    /// near-tangencies within 1e-3 included.
    pub fn nearest_eigenvalue(&self, lambda: Complex64, guess: f64, window: f64) -> Result<Option<f64>> {
        Ok(self
            .find_roots_with_tangency(lambda, (guess - window, guess + window), window / 10.0, 1e-3)?
            .into_iter()
            .map(|r| r.energy)
            .min_by(|a, b| (a - guess).abs().total_cmp(&(b - guess).abs())))
    }

    /// Allowed bands (`|Δ| ≤ 2`) and gaps inside `range`, with dispersion
    /// samples at `dispersion_points` interior energies of every branch.
    pub fn band_structure(&self, range: (f64, f64), scan_step: f64, dispersion_points: usize) -> Result<BandStructure> {
        let (lo, hi) = range;
        let mut edges: Vec<f64> = self
            .roots_of(2.0, range, scan_step, DOUBLE_ROOT_TOL)?
            .into_iter()
            .chain(self.roots_of(-2.0, range, scan_step, DOUBLE_ROOT_TOL)?)
            .map(|r| r.energy)
            .filter(|e| *e > lo && *e < hi)
            .collect();
        if !(lo < hi) {
            return Ok(BandStructure {
                range,
                bands: Vec::new(),
                branches: Vec::new(),
                gaps: Vec::new(),
                dispersion: Vec::new(),
            });
        }
        edges.sort_by(f64::total_cmp);
        // a touching double root can come back as a pair split by rounding
        edges.dedup_by(|b, a| *b - *a <= EDGE_CLUSTER_TOL * a.abs().max(1.0));
        let mut points = vec![lo];
        points.extend(edges);
        points.push(hi);

        let mut branches: Vec<Interval> = Vec::new();
        let mut gaps: Vec<Interval> = Vec::new();
        for w in points.windows(2) {
            if w[1] <= w[0] {
                continue;
            }
            let mid = 0.5 * (w[0] + w[1]);
            let segment = Interval {
                lower: w[0],
                upper: w[1],
            };
            if self.discriminant(mid).abs() <= 2.0 {
                branches.push(segment);
            } else {
                match gaps.last_mut() {
                    Some(last) if last.upper == w[0] => last.upper = w[1],
                    _ => gaps.push(segment),
                }
            }
        }
        // branches meeting at a touching root form one band
        let mut bands: Vec<Interval> = Vec::new();
        for b in &branches {
            match bands.last_mut() {
                Some(last) if last.upper == b.lower => last.upper = b.upper,
                _ => bands.push(*b),
            }
        }

        let t = self.period();
        let mut dispersion = Vec::with_capacity(branches.len() * dispersion_points);
        let mut band = 0;
        for (index, branch) in branches.iter().enumerate() {
            while bands[band].upper < branch.upper {
                band += 1;
            }
            for j in 1..=dispersion_points {
                let e = branch.lower + branch.width() * j as f64 / (dispersion_points + 1) as f64;
                let half = (self.discriminant(e) / 2.0).clamp(-1.0, 1.0);
                dispersion.push(DispersionPoint {
                    band,
                    branch: index,
                    energy: e,
                    alpha: half.acos() / t,
                });
            }
        }
        Ok(BandStructure {
            range,
            bands,
            branches,
            gaps,
            dispersion,
        })
    }

    /// Bloch solution for an energy at (or within 1e-3 in `Δ` of) an
    /// eigenvalue for `lambda`.
    ///
    /// Only real Floquet multipliers (`αT` a multiple of π) are supported,
    /// since other exponents give complex-valued solutions. The energy is
    /// first refined to the nearest root; nodes are normalised to `y(a) = 1`,
    /// or `y'(a) = 1` when `y(a)` vanishes.
    pub fn eigenfunction(&self, energy: f64, lambda: Complex64) -> Result<EigenSolution> {
        let alpha = bounded_alpha(lambda)?;
        let t = self.period();
        let phase = alpha * t;
        if phase.sin().abs() > 1e-12 {
            return Err(Error::Unsupported(format!(
                "exponent i·{alpha} gives a complex Bloch solution; only αT ∈ πℤ is supported"
            )));
        }
        let mu = phase.cos().round();
        let residual = (self.discriminant(energy) - 2.0 * mu).abs();
        if residual > 1e-3 {
            return Err(Error::NoEigenfunction { energy, residual });
        }

        let window = 1e-3 * energy.abs().max(1.0);
        // det M drifts from 1 under truncation; refining on det(M - μI) = 0
        // rather than Δ = 2μ makes μ an exact eigenvalue of the model
        let singular = |e: f64| {
            let m = self.monodromy(e);
            m.trace() - mu * (1.0 + m.det())
        };
        let nearest = scan_roots(singular, (energy - window, energy + window), window / 8.0, 1e-3)?
            .into_iter()
            .min_by(|a, b| (a.energy - energy).abs().total_cmp(&(b.energy - energy).abs()));
        let degenerate = nearest.is_some_and(|r| r.degenerate && r.residual <= DOUBLE_ROOT_TOL);
        let energy = nearest.map_or(energy, |r| r.energy);

        let m = self.monodromy(energy).0;
        let rows = [[m[0][0] - mu, m[0][1]], [m[1][0], m[1][1] - mu]];
        let norm = |r: &[f64; 2]| r[0].hypot(r[1]);
        let row = if norm(&rows[0]) >= norm(&rows[1]) { rows[0] } else { rows[1] };
        let scale = m.iter().flatten().fold(1.0_f64, |acc, v| acc.max(v.abs()));
        // at a double root M = μI and every solution is a Bloch solution
        let (mut y0, mut dy0) = if degenerate || norm(&row) <= 1e-10 * scale {
            (1.0, 0.0)
        } else {
            (-row[1], row[0])
        };
        let normalization = if y0.abs() >= 1e-6 * y0.hypot(dy0) {
            dy0 /= y0;
            y0 = 1.0;
            Normalization::Value
        } else {
            y0 /= dy0;
            dy0 = 1.0;
            Normalization::Slope
        };

        let nodes = self.propagate(energy, y0, dy0);
        let first = nodes[0];
        let last = nodes[nodes.len() - 1];
        let peak = nodes.iter().fold(0.0_f64, |acc, s| acc.max(s.y.abs()));
        let boundary_residual =
            ((first.y - mu * last.y).abs() + (first.dy - mu * last.dy).abs() / (2.0 * PI / t).max(1.0)) / peak;
        let mut solution = EigenSolution {
            energy,
            lambda: Complex64::new(0.0, alpha),
            nodes,
            parity: None,
            normalization,
            boundary_residual,
        };
        solution.parity = self.classify_parity(&solution);
        Ok(solution)
    }

    /// Parity about the period midpoint, or `None` when the potential is not
    /// symmetric there or the solution is neither even nor odd to 1e-4.
    pub fn classify_parity(&self, solution: &EigenSolution) -> Option<Parity> {
        let v = &self.node_potential;
        let vmax = v.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()));
        let n = v.len() - 1;
        let symmetric = (0..=n).all(|k| (v[k] - v[n - k]).abs() <= 1e-12 * vmax.max(1.0));
        if !symmetric || solution.nodes.len() != v.len() {
            return None;
        }
        let y: Vec<f64> = solution.nodes.iter().map(|s| s.y).collect();
        let ymax = y.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()));
        let tol = 1e-4 * ymax;
        let even = (0..=n).map(|k| (y[k] - y[n - k]).abs()).fold(0.0, f64::max);
        let odd = (0..=n).map(|k| (y[k] + y[n - k]).abs()).fold(0.0, f64::max);
        if even <= tol {
            Some(Parity::Even)
        } else if odd <= tol {
            Some(Parity::Odd)
        } else {
            None
        }
    }
}

/// Roots of `f` on `[lo, hi]`: sign changes on a uniform scan refined by
/// bisection, plus extrema of `|f|` between samples that reach (or come
/// within `tangency` of) zero.
fn scan_roots(f: impl Fn(f64) -> f64, (lo, hi): (f64, f64), step: f64, tangency: f64) -> Result<Vec<Root>> {
    if !(step.is_finite() && step > 0.0) {
        return Err(invalid(format!("scan step must be positive (got {step})")));
    }
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(invalid("energy range must be finite"));
    }
    if !(lo < hi) {
        return Ok(Vec::new());
    }
    let count = ((hi - lo) / step).ceil().max(1.0) as usize;
    let es: Vec<f64> = (0..=count)
        .map(|i| if i == count { hi } else { lo + i as f64 * step })
        .collect();
    let fs: Vec<f64> = es.iter().map(|&e| f(e)).collect();

    let mut roots = Vec::new();
    for i in 0..es.len() {
        if fs[i] == 0.0 {
            roots.push(Root::simple(es[i]));
            continue;
        }
        if i + 1 < es.len() && fs[i] * fs[i + 1] < 0.0 {
            roots.push(Root::simple(bisect(&f, es[i], es[i + 1], fs[i])));
        }
        if i == 0 || i + 1 == es.len() {
            continue;
        }
        let (fl, fc, fr) = (fs[i - 1], fs[i], fs[i + 1]);
        let same_sign = fl.signum() == fc.signum() && fr.signum() == fc.signum();
        if !(same_sign && fl != 0.0 && fr != 0.0 && fc.abs() <= fl.abs() && fc.abs() <= fr.abs()) {
            continue;
        }
        // f approaches zero between samples without changing sign on the grid
        let s = fc.signum();
        let (e_star, f_star) = golden_min(|e| s * f(e), es[i - 1], es[i + 1]);
        let f_star = s * f_star;
        let double = Root {
            energy: e_star,
            degenerate: true,
            residual: f_star.abs(),
        };
        if f_star.abs() <= DOUBLE_ROOT_TOL {
            roots.push(double);
        } else if f_star.signum() != s {
            roots.push(Root::simple(bisect(&f, es[i - 1], e_star, fl)));
            roots.push(Root::simple(bisect(&f, e_star, es[i + 1], f_star)));
        } else if f_star.abs() <= tangency {
            roots.push(double);
        }
    }

    roots.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    let mut merged: Vec<Root> = Vec::with_capacity(roots.len());
    for r in roots {
        match merged.last_mut() {
            Some(prev) if r.energy - prev.energy < MERGE_TOL => {
                if !(prev.degenerate && !r.degenerate) {
                    prev.energy = 0.5 * (prev.energy + r.energy);
                }
                prev.degenerate = true;
                prev.residual = prev.residual.max(r.residual);
            }
            _ => merged.push(r),
        }
    }
    Ok(merged)
}

/// `α` of a purely imaginary exponent `λ = iα`.
fn bounded_alpha(lambda: Complex64) -> Result<f64> {
    if lambda.re != 0.0 || !lambda.im.is_finite() {
        return Err(invalid(format!(
            "Floquet exponent {lambda} has a non-zero real part; such exponents admit no bounded solutions"
        )));
    }
    Ok(lambda.im)
}

fn bisect(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, mut f_lo: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == f_lo.signum() {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Golden-section minimisation of a unimodal `g` on `[lo, hi]`.
fn golden_min(g: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let inv_phi = (5.0_f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut g1, mut g2) = (g(x1), g(x2));
    for _ in 0..200 {
        if hi - lo <= 4.0 * f64::EPSILON * hi.abs().max(lo.abs()).max(1.0) {
            break;
        }
        if g1 < g2 {
            hi = x2;
            x2 = x1;
            g2 = g1;
            x1 = hi - inv_phi * (hi - lo);
            g1 = g(x1);
        } else {
            lo = x1;
            x1 = x2;
            g1 = g2;
            x2 = lo + inv_phi * (hi - lo);
            g2 = g(x2);
        }
    }
    if g1 < g2 {
        (x1, g1)
    } else {
        (x2, g2)
    }
}

/// An energy where `Δ(E) = 2 cos(αT)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Root {
    pub energy: f64,
    /// Double root: `Δ ∓ 2` touches zero without crossing, two bands meet.
    pub degenerate: bool,
    /// `|Δ(E) - 2cos(αT)|` at a degenerate root, zero for bracketed roots.
    pub residual: f64,
}

impl Root {
    fn simple(energy: f64) -> Self {
        Self {
            energy,
            degenerate: false,
            residual: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lower: f64,
    pub upper: f64,
}

impl Interval {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, e: f64) -> bool {
        e >= self.lower && e <= self.upper
    }
}

/// `(E, α)` inside a band, with `cos(αT) = Δ(E)/2` and `α ∈ [0, π/T]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DispersionPoint {
    pub band: usize,
    /// Index into [`BandStructure::branches`]; `α` is monotone along one.
    pub branch: usize,
    pub energy: f64,
    pub alpha: f64,
}

impl DispersionPoint {
    /// The pair of exponents `±iα`, which always sum to zero.
    pub fn exponents(&self) -> (Complex64, Complex64) {
        (Complex64::new(0.0, self.alpha), Complex64::new(0.0, -self.alpha))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BandStructure {
    pub range: (f64, f64),
    /// Allowed intervals, disjoint and increasing. Ends clipped by `range`
    /// are not band edges.
    pub bands: Vec<Interval>,
    /// Bands split at touching double roots, where `α` folds back.
    pub branches: Vec<Interval>,
    pub gaps: Vec<Interval>,
    pub dispersion: Vec<DispersionPoint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Normalization {
    /// `y(a) = 1`.
    Value,
    /// `y'(a) = 1`, used when `y(a)` vanishes.
    Slope,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenSolution {
    /// Refined eigenvalue.
    pub energy: f64,
    pub lambda: Complex64,
    pub nodes: Vec<NodeState>,
    pub parity: Option<Parity>,
    pub normalization: Normalization,
    /// `(|y(a) - μ y(b)| + |y'(a) - μ y'(b)|/k) / max|y|` with `μ = e^{λT}`
    /// and `k = max(2π/T, 1)`.
    pub boundary_residual: f64,
}

impl EigenSolution {
    pub fn values(&self) -> Vec<f64> {
        self.nodes.iter().map(|s| s.y).collect()
    }
}
