//! Independent oracles: a dense solve of the full spline system, a fine-step
//! RK4 integrator and free-particle closed forms.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use spline_floquet::analysis::{discrete_l2_error, spline_interp_error};
use spline_floquet::floquet::{FloquetProblem, Parity, DEFAULT_SCAN_STEP};
use spline_floquet::potentials::Potential;
use spline_floquet::propagator::{
    cac_transfer, fundamental_pair, propagate, transfer_matrix, QuadraticPiece, TransferMatrix,
};
use spline_floquet::spline::{variational_a1, Grid, SplineInterpolant};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Quadratic corrections `a_k` from the 3n-unknown system (interpolation
/// and C¹ continuity) with the remaining freedom fixed by minimising
/// `Σ a_k²`, which is proportional to `∫(S - s)²`.
fn dense_spline(samples: &[f64], h: f64) -> Vec<f64> {
    let n = samples.len() - 1;
    // unknowns per piece: P_k(x) = A + B t + C t², t = x - x_{k-1}
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut rhs = Vec::new();
    for k in 0..n {
        let mut r = vec![0.0; 3 * n];
        r[3 * k] = 1.0;
        rows.push(r);
        rhs.push(samples[k]);
        let mut r = vec![0.0; 3 * n];
        r[3 * k] = 1.0;
        r[3 * k + 1] = h;
        r[3 * k + 2] = h * h;
        rows.push(r);
        rhs.push(samples[k + 1]);
    }
    for k in 0..n - 1 {
        let mut r = vec![0.0; 3 * n];
        r[3 * k + 1] = 1.0;
        r[3 * k + 2] = 2.0 * h;
        r[3 * (k + 1) + 1] = -1.0;
        rows.push(r);
        rhs.push(0.0);
    }
    // one free parameter: pin C on the first piece, solve for two pins and
    // minimise over the resulting line
    let mut pin = vec![0.0; 3 * n];
    pin[2] = 1.0;
    rows.push(pin);
    let m = DMatrix::from_fn(rows.len(), 3 * n, |i, j| rows[i][j]);
    let lu = m.lu();
    let solve = |t: f64| {
        let mut b = rhs.clone();
        b.push(t);
        let x = lu.solve(&DVector::from_vec(b)).expect("square system is regular");
        (0..n).map(|k| x[3 * k + 2]).collect::<Vec<f64>>()
    };
    let c0 = solve(0.0);
    let d: Vec<f64> = solve(1.0).iter().zip(&c0).map(|(a, b)| a - b).collect();
    let t = -c0.iter().zip(&d).map(|(p, q)| p * q).sum::<f64>() / d.iter().map(|q| q * q).sum::<f64>();
    c0.iter().zip(&d).map(|(p, q)| p + t * q).collect()
}

#[test]
fn recurrence_matches_dense_least_squares_solve() {
    let cases: [(fn(f64) -> f64, usize); 4] = [
        (|x: f64| x * x, 4),
        (f64::abs, 10),
        (|x: f64| (3.0 * x).sin() + 0.3 * x.powi(3), 7),
        (|x: f64| (1.0 + 25.0 * x * x).recip(), 12),
    ];
    for (f, n) in cases {
        let grid = Grid::new(-1.0, 1.0, n).unwrap();
        let y: Vec<f64> = grid.nodes().iter().map(|&x| f(x)).collect();
        let spline = SplineInterpolant::fit(&y, &grid).unwrap();
        let dense = dense_spline(&y, grid.h());
        let scale = dense.iter().fold(1.0_f64, |m, a| m.max(a.abs()));
        for (a, d) in spline.a_coeffs().iter().zip(&dense) {
            assert!((a - d).abs() <= 1e-9 * scale, "n={n}: {a} vs {d}");
        }
    }
}

#[test]
fn parabola_is_reproduced_exactly() {
    for n in [2, 4, 10, 30] {
        let grid = Grid::new(-1.0, 1.0, n).unwrap();
        let y: Vec<f64> = grid.nodes().iter().map(|x| x * x).collect();
        assert!((variational_a1(&y, &grid).unwrap() - 1.0).abs() < 1e-10);
        let dense = dense_spline(&y, grid.h());
        assert!(dense.iter().all(|a| (a - 1.0).abs() < 1e-9));
    }
}

/// RK4 for `y'' = (V(x) - E) y` with `steps` equal steps over `[a, b]`.
fn rk4(v: impl Fn(f64) -> f64, e: f64, (a, b): (f64, f64), steps: usize, y0: f64, dy0: f64) -> Vec<(f64, f64)> {
    let h = (b - a) / steps as f64;
    let f = |x: f64, y: f64, z: f64| (z, (v(x) - e) * y);
    let (mut y, mut z) = (y0, dy0);
    let mut out = vec![(y, z)];
    for i in 0..steps {
        let x = a + i as f64 * h;
        let (k1y, k1z) = f(x, y, z);
        let (k2y, k2z) = f(x + h / 2.0, y + h / 2.0 * k1y, z + h / 2.0 * k1z);
        let (k3y, k3z) = f(x + h / 2.0, y + h / 2.0 * k2y, z + h / 2.0 * k2z);
        let (k4y, k4z) = f(x + h, y + h * k3y, z + h * k3z);
        y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        z += h / 6.0 * (k1z + 2.0 * k2z + 2.0 * k3z + k4z);
        out.push((y, z));
    }
    out
}

fn rk4_monodromy(v: impl Fn(f64) -> f64 + Copy, e: f64, iv: (f64, f64), steps: usize) -> TransferMatrix {
    let c2 = *rk4(v, e, iv, steps, 1.0, 0.0).last().unwrap();
    let c1 = *rk4(v, e, iv, steps, 0.0, 1.0).last().unwrap();
    TransferMatrix([[c2.0, c1.0], [c2.1, c1.1]])
}

#[test]
fn exact_taylor_monodromy_matches_rk4_for_quartic() {
    let potential = Potential::quartic();
    let problem = FloquetProblem::cac(potential.clone(), 100, 10).unwrap();
    for e in [0.5, 10.159, 25.0] {
        let reference = rk4_monodromy(|x| x.powi(4), e, (-1.0, 1.0), 20_000);
        let got = problem.monodromy(e);
        assert!(got.max_abs_diff(&reference) < 1e-8, "E={e}: {:?} vs {:?}", got, reference);
    }
}

#[test]
fn mathieu_exact_taylor_matches_rk4() {
    let q = 0.2;
    let problem = FloquetProblem::cac(Potential::mathieu(q).unwrap(), 200, 10).unwrap();
    let reference = rk4_monodromy(|x| 2.0 * q * (2.0 * x).cos(), 4.0, (0.0, 2.0 * PI), 40_000);
    assert!(problem.monodromy(4.0).max_abs_diff(&reference) < 1e-8);
}

#[test]
fn quartic_eigenfunction_agrees_with_rk4() {
    let problem = FloquetProblem::spline(Potential::quartic(), 100, 5).unwrap();
    let e = problem
        .nearest_eigenvalue(ZERO, 10.1590085, 0.05)
        .unwrap()
        .expect("eigenvalue near 10.159");
    let sol = problem.eigenfunction(e, ZERO).unwrap();
    let first = sol.nodes[0];
    let path = rk4(|x| x.powi(4), sol.energy, (-1.0, 1.0), 100 * 200, first.y, first.dy);
    let reference: Vec<f64> = path.iter().step_by(200).map(|s| s.0).collect();
    let err = discrete_l2_error(&sol.values(), &reference).unwrap();
    // the spline of x⁴ is not exact; the model error dominates the RK4 error
    assert!(err < 1e-6, "E_r = {err:e}");
}

#[test]
fn free_transfer_matrix_is_a_rotation() {
    let h = 0.02;
    for e in [0.0_f64, 1.0, 17.0, 45.0] {
        let piece = QuadraticPiece::from_local(0.0, h, [0.0, 0.0, 0.0]);
        let m = transfer_matrix(&fundamental_pair(&piece, e, 9).unwrap(), h);
        let w = e.sqrt();
        let want = if e == 0.0 {
            TransferMatrix([[1.0, h], [0.0, 1.0]])
        } else {
            TransferMatrix([[(w * h).cos(), (w * h).sin() / w], [-w * (w * h).sin(), (w * h).cos()]])
        };
        assert!(m.max_abs_diff(&want) < 1e-12, "E={e}");
    }
}

#[test]
fn free_propagation_returns_after_one_wavelength() {
    let grid = Grid::new(0.0, 2.0, 100).unwrap();
    let spline = SplineInterpolant::fit(&vec![0.0; 101], &grid).unwrap();
    let pieces = QuadraticPiece::from_spline(&spline);
    let states = propagate(&pieces, PI * PI, 9, 1.0, 0.0).unwrap();
    for s in &states {
        assert!((s.y - (PI * s.x).cos()).abs() < 1e-9);
    }
    let last = states.last().unwrap();
    assert!((last.y - 1.0).abs() < 1e-9 && last.dy.abs() < 1e-9);
}

#[test]
fn zero_coupling_mathieu_has_integer_square_spectrum() {
    let problem = FloquetProblem::cac(Potential::mathieu(0.0).unwrap(), 200, 10).unwrap();
    let roots = problem.find_roots(ZERO, (0.5, 10.0), DEFAULT_SCAN_STEP).unwrap();
    // each double root may come back as a pair split by rounding
    let mut clusters: Vec<Vec<f64>> = Vec::new();
    for r in &roots {
        match clusters.last_mut() {
            Some(c) if (r.energy - c[0]).abs() < 1e-6 => c.push(r.energy),
            _ => clusters.push(vec![r.energy]),
        }
    }
    assert_eq!(clusters.len(), 3, "{clusters:?}");
    for (c, k) in clusters.iter().zip([1.0, 4.0, 9.0]) {
        assert!(c.iter().all(|e| (e - k).abs() < 1e-6), "{c:?} vs {k}");
    }
}

#[test]
fn cac_transfer_matches_rk4_on_one_piece() {
    let potential = Potential::power_abs(3.0).unwrap();
    let m = cac_transfer(&potential, 0.3, 0.05, 7.0, 12).unwrap();
    let reference = rk4_monodromy(|x| x.abs().powi(3), 7.0, (0.3, 0.35), 2000);
    assert!(m.max_abs_diff(&reference) < 1e-12);
}

#[test]
fn harmonic_ground_state_matches_neumann_shooting() {
    // even ground state: shoot from the centre with y'(0) = 0 and find the
    // energy where y'(1) = 0 by bisection
    let shoot = |e: f64| rk4(|x| x * x, e, (0.0, 1.0), 4000, 1.0, 0.0).last().unwrap().1;
    let (mut lo, mut hi) = (0.2, 0.5);
    let f_lo = shoot(lo);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if shoot(mid).signum() == f_lo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let e_shoot = 0.5 * (lo + hi);
    let problem = FloquetProblem::spline(Potential::harmonic(), 100, 5).unwrap();
    let sol = problem.eigenfunction(0.324942, ZERO).unwrap();
    assert!((sol.energy - e_shoot).abs() < 1e-6, "{} vs {e_shoot}", sol.energy);
    assert_eq!(sol.parity, Some(Parity::Even));
    let mid = sol.nodes[50];
    assert!(mid.x.abs() < 1e-12 && mid.dy.abs() < 1e-6);
}

#[test]
fn spline_beats_global_interpolation_on_abs() {
    for n in [10, 15, 20] {
        let s = spline_interp_error(f64::abs, (-1.0, 1.0), n).unwrap();
        let l = spline_floquet::analysis::lagrange_global_error(f64::abs, (-1.0, 1.0), n).unwrap();
        assert!(s < l, "n={n}: {s} vs {l}");
    }
}
