//! Piecewise truncated-Taylor integration of `y'' = (V(x) - E) y`.
//!
//! On a piece starting at `x_s`, the local potential is a polynomial in
//! `t = x - x_s` and the two fundamental solutions are power series in `t`:
//!
//! ```text
//! (j+1)(j+2) α_{j+2} = Σ_i q_i α_{j-i} - E α_j
//! ```
//!
//! with `(y, y') = (0, 1)` for the first solution and `(1, 0)` for the
//! second. Truncating at order `m` and evaluating at the piece width gives
//! the 2×2 transfer matrix of the piece.

use std::ops::Mul;

use crate::error::{invalid, Result};
use crate::potentials::Potential;
use crate::spline::SplineInterpolant;

pub const MIN_ORDER: usize = 2;
pub const MAX_ORDER: usize = 30;

/// Quadratic approximation `P(x) = a x² + b x + c` of the potential on one piece.
///
/// Stored as coefficients in powers of `x - x_start`, which is what the
/// series recurrence consumes; the monomial form is derived on request.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticPiece {
    x_start: f64,
    x_end: f64,
    local: [f64; 3],
}

impl QuadraticPiece {
    /// Piece with `P(x_start + t) = q[0] + q[1] t + q[2] t²`.
    pub fn from_local(x_start: f64, x_end: f64, q: [f64; 3]) -> Self {
        Self {
            x_start,
            x_end,
            local: q,
        }
    }

    /// Piece with `P(x) = a x² + b x + c`.
    pub fn from_monomial(a: f64, b: f64, c: f64, x_start: f64, x_end: f64) -> Self {
        let x0 = x_start;
        Self::from_local(x_start, x_end, [(a * x0 + b) * x0 + c, 2.0 * a * x0 + b, a])
    }

    /// All pieces of a fitted spline, in order.
    pub fn from_spline(spline: &SplineInterpolant) -> Vec<Self> {
        let nodes = spline.grid().nodes();
        (0..spline.grid().n())
            .map(|k| Self::from_local(nodes[k], nodes[k + 1], spline.local_coefficients(k)))
            .collect()
    }

    pub fn x_start(&self) -> f64 {
        self.x_start
    }

    pub fn x_end(&self) -> f64 {
        self.x_end
    }

    pub fn width(&self) -> f64 {
        self.x_end - self.x_start
    }

    pub fn local(&self) -> [f64; 3] {
        self.local
    }

    /// `(a, b, c)` with `P(x) = a x² + b x + c`.
    pub fn monomial(&self) -> (f64, f64, f64) {
        let [q0, q1, q2] = self.local;
        let x0 = self.x_start;
        (q2, q1 - 2.0 * q2 * x0, q0 - q1 * x0 + q2 * x0 * x0)
    }

    pub fn value(&self, x: f64) -> f64 {
        let t = x - self.x_start;
        let [q0, q1, q2] = self.local;
        q0 + t * (q1 + t * q2)
    }
}

/// Truncated Taylor coefficients of the two fundamental solutions on a piece.
///
/// `coeffs1` starts from `(y, y') = (0, 1)`, `coeffs2` from `(1, 0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FundamentalPair {
    pub order: usize,
    pub energy: f64,
    pub coeffs1: Vec<f64>,
    pub coeffs2: Vec<f64>,
}

impl FundamentalPair {
    /// Builds both series for the local potential `Σ q_i t^i`.
    pub fn from_local_potential(q: &[f64], energy: f64, order: usize) -> Result<Self> {
        check_order(order)?;
        Ok(Self {
            order,
            energy,
            coeffs1: series(q, energy, order, 0.0, 1.0),
            coeffs2: series(q, energy, order, 1.0, 0.0),
        })
    }

    /// `((y1, y1'), (y2, y2'))` at offset `t` from the start of the piece.
    pub fn evaluate(&self, t: f64) -> ((f64, f64), (f64, f64)) {
        (horner(&self.coeffs1, t), horner(&self.coeffs2, t))
    }

    pub fn transfer_matrix(&self, h: f64) -> TransferMatrix {
        let ((y1, d1), (y2, d2)) = self.evaluate(h);
        TransferMatrix([[y2, y1], [d2, d1]])
    }
}

fn check_order(order: usize) -> Result<()> {
    if !(MIN_ORDER..=MAX_ORDER).contains(&order) {
        return Err(invalid(format!(
            "Taylor order must lie in {MIN_ORDER}..={MAX_ORDER} (got {order})"
        )));
    }
    Ok(())
}

fn series(q: &[f64], energy: f64, order: usize, y0: f64, dy0: f64) -> Vec<f64> {
    let mut alpha = vec![0.0; order + 1];
    alpha[0] = y0;
    alpha[1] = dy0;
    for j in 0..order - 1 {
        let mut acc = -energy * alpha[j];
        for (i, qi) in q.iter().enumerate().take(j + 1) {
            acc += qi * alpha[j - i];
        }
        alpha[j + 2] = acc / ((j + 1) * (j + 2)) as f64;
    }
    alpha
}

/// Value and derivative of `Σ c_j t^j`.
fn horner(c: &[f64], t: f64) -> (f64, f64) {
    let mut y = 0.0;
    let mut dy = 0.0;
    for cj in c.iter().rev() {
        dy = dy * t + y;
        y = y * t + cj;
    }
    (y, dy)
}

pub fn fundamental_pair(piece: &QuadraticPiece, energy: f64, order: usize) -> Result<FundamentalPair> {
    FundamentalPair::from_local_potential(&piece.local, energy, order)
}

pub fn transfer_matrix(pair: &FundamentalPair, h: f64) -> TransferMatrix {
    pair.transfer_matrix(h)
}

/// Real 2×2 matrix acting on `(y, y')`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMatrix(pub [[f64; 2]; 2]);

impl TransferMatrix {
    pub const IDENTITY: Self = Self([[1.0, 0.0], [0.0, 1.0]]);

    pub fn det(&self) -> f64 {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn apply(&self, y: f64, dy: f64) -> (f64, f64) {
        let m = &self.0;
        (m[0][0] * y + m[0][1] * dy, m[1][0] * y + m[1][1] * dy)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .flatten()
            .zip(other.0.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl Mul for TransferMatrix {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        let (a, b) = (&self.0, &rhs.0);
        let mut out = [[0.0; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Self(out)
    }
}

/// `(x, y, y')` at a node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeState {
    pub x: f64,
    pub y: f64,
    pub dy: f64,
}

/// Integrates across `pieces` from `(y0, dy0)` at the first piece's start.
///
/// The returned list has one entry per node, starting with the initial one.
/// For piece `k` the integration constants are `c1 = dy` and `c2 = y` of the
/// state at its left node.
pub fn propagate(
    pieces: &[QuadraticPiece],
    energy: f64,
    order: usize,
    y0: f64,
    dy0: f64,
) -> Result<Vec<NodeState>> {
    check_order(order)?;
    check_contiguous(pieces)?;
    let mut out = Vec::with_capacity(pieces.len() + 1);
    let Some(first) = pieces.first() else {
        return Err(invalid("no pieces to propagate across"));
    };
    let mut state = NodeState {
        x: first.x_start,
        y: y0,
        dy: dy0,
    };
    out.push(state);
    for piece in pieces {
        let m = fundamental_pair(piece, energy, order)?.transfer_matrix(piece.width());
        let (y, dy) = m.apply(state.y, state.dy);
        state = NodeState { x: piece.x_end, y, dy };
        out.push(state);
    }
    Ok(out)
}

fn check_contiguous(pieces: &[QuadraticPiece]) -> Result<()> {
    for (k, w) in pieces.windows(2).enumerate() {
        let tol = 1e-12 * w[0].width().abs().max(w[0].x_end.abs()).max(1.0);
        if (w[0].x_end - w[1].x_start).abs() > tol {
            return Err(invalid(format!(
                "pieces {} and {} are not contiguous ({} vs {})",
                k,
                k + 1,
                w[0].x_end,
                w[1].x_start
            )));
        }
    }
    if let Some(k) = pieces.iter().position(|p| !(p.width() > 0.0)) {
        return Err(invalid(format!("piece {k} has non-positive width")));
    }
    Ok(())
}

/// Transfer matrix across `[x_start, x_start + h]` built from the exact
/// potential's Taylor coefficients instead of a spline piece.
pub fn cac_transfer(potential: &Potential, x_start: f64, h: f64, energy: f64, order: usize) -> Result<TransferMatrix> {
    check_order(order)?;
    let q = potential.local_taylor(x_start, order - 2)?;
    Ok(FundamentalPair::from_local_potential(&q, energy, order)?.transfer_matrix(h))
}
