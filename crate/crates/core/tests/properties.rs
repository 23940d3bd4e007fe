//! Property tests for the spline, propagator and band invariants.

use num_complex::Complex64;
use proptest::prelude::*;
use spline_floquet::analysis::{discrete_l2_error, fourier_fit, mean_square_interp_error};
use spline_floquet::floquet::{BandStructure, FloquetProblem};
use spline_floquet::potentials::{format_tabulated, parse_tabulated, Potential};
use spline_floquet::propagator::{propagate, QuadraticPiece};
use spline_floquet::spline::{coefficient_matrix, variational_a1, variational_a1_closed_form, Grid, SplineInterpolant};

fn monotone_branches(bs: &BandStructure) -> bool {
    (0..bs.branches.len()).all(|branch| {
        let alphas: Vec<f64> = bs.dispersion.iter().filter(|p| p.branch == branch).map(|p| p.alpha).collect();
        let up = alphas.windows(2).all(|w| w[1] >= w[0] - 1e-12);
        let down = alphas.windows(2).all(|w| w[1] <= w[0] + 1e-12);
        up || down
    })
}

fn samples(max_n: usize) -> impl Strategy<Value = Vec<f64>> {
    (2..=max_n).prop_flat_map(|n| prop::collection::vec(-10.0..10.0_f64, n + 1))
}

fn interval() -> impl Strategy<Value = (f64, f64)> {
    (-5.0..5.0_f64, 0.1..10.0_f64).prop_map(|(a, w)| (a, a + w))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn spline_interpolates_and_is_c1(y in samples(40), (a, b) in interval()) {
        let grid = Grid::new(a, b, y.len() - 1).unwrap();
        let s = SplineInterpolant::fit(&y, &grid).unwrap();
        let scale = y.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
        for (x, v) in grid.nodes().iter().zip(&y) {
            prop_assert!((s.evaluate(*x).unwrap() - v).abs() <= 1e-10 * scale);
        }
        let dscale = scale / grid.h();
        for k in 1..grid.n() {
            let x = grid.nodes()[k];
            let left = s.piece_derivative(k - 1, x);
            let right = s.piece_derivative(k, x);
            prop_assert!((left - right).abs() <= 1e-10 * dscale, "k={} {} vs {}", k, left, right);
        }
    }

    #[test]
    fn coefficient_matrix_reproduces_recurrence(y in samples(30), (a, b) in interval()) {
        let n = y.len() - 1;
        let grid = Grid::new(a, b, n).unwrap();
        let s = SplineInterpolant::fit(&y, &grid).unwrap();
        let via_c = coefficient_matrix(n).unwrap().apply(&y, grid.h()).unwrap();
        let scale = s.a_coeffs().iter().fold(1.0_f64, |m, v| m.max(v.abs()));
        for (p, q) in s.a_coeffs().iter().zip(&via_c) {
            prop_assert!((p - q).abs() <= 1e-10 * scale);
        }
    }

    #[test]
    fn a1_routes_agree(y in samples(60), (a, b) in interval()) {
        let grid = Grid::new(a, b, y.len() - 1).unwrap();
        let p = variational_a1(&y, &grid).unwrap();
        let q = variational_a1_closed_form(&y, &grid).unwrap();
        let scale = y.iter().fold(1.0_f64, |m, v| m.max(v.abs())) / (grid.h() * grid.h());
        prop_assert!((p - q).abs() <= 1e-12 * scale, "{} vs {}", p, q);
    }

    #[test]
    fn variational_a1_minimises_objective(y in samples(30), (a, b) in interval(), delta in prop_oneof![Just(1e-3), Just(-1e-3)]) {
        let grid = Grid::new(a, b, y.len() - 1).unwrap();
        let s = SplineInterpolant::fit(&y, &grid).unwrap();
        let a1 = s.a_coeffs()[0];
        let best = s.objective();
        // the shift is relative to the size of the corrections
        let scale = s.a_coeffs().iter().fold(1.0_f64, |m, v| m.max(v.abs()));
        prop_assert!(s.objective_with_a1(a1 + delta * scale) >= best * (1.0 - 1e-12));
    }

    #[test]
    fn tabulated_round_trip(values in samples(25), (a, b) in interval()) {
        let grid = Grid::new(a, b, values.len() - 1).unwrap();
        let text = format_tabulated(&grid, &values).unwrap();
        let (potential, back) = parse_tabulated(&text).unwrap();
        prop_assert_eq!(back.n(), grid.n());
        prop_assert_eq!(back.a(), grid.a());
        prop_assert_eq!(back.b(), grid.b());
        prop_assert_eq!(potential.sample(&back).unwrap(), values);
    }

    #[test]
    fn propagation_is_linear(
        q in prop::collection::vec(-5.0..5.0_f64, 11),
        e in -5.0..20.0_f64,
        (y0, dy0, z0, dz0) in (-2.0..2.0_f64, -2.0..2.0_f64, -2.0..2.0_f64, -2.0..2.0_f64),
        c in -3.0..3.0_f64,
    ) {
        let grid = Grid::new(0.0, 1.0, 10).unwrap();
        let pieces = QuadraticPiece::from_spline(&SplineInterpolant::fit(&q, &grid).unwrap());
        let u = propagate(&pieces, e, 6, y0, dy0).unwrap();
        let v = propagate(&pieces, e, 6, z0, dz0).unwrap();
        let w = propagate(&pieces, e, 6, y0 + c * z0, dy0 + c * dz0).unwrap();
        for ((u, v), w) in u.iter().zip(&v).zip(&w) {
            let scale = 1.0 + u.y.abs() + u.dy.abs() + c.abs() * (v.y.abs() + v.dy.abs());
            prop_assert!((w.y - (u.y + c * v.y)).abs() <= 1e-12 * scale);
            prop_assert!((w.dy - (u.dy + c * v.dy)).abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn error_metrics_are_nonnegative(
        y in prop::collection::vec(-10.0..10.0_f64, 2..40),
        shift in -1.0..1.0_f64,
        n in 2usize..20,
    ) {
        let r: Vec<f64> = y.iter().map(|v| v + shift).collect();
        let l2 = discrete_l2_error(&y, &r).unwrap();
        prop_assert!(l2 >= 0.0);
        prop_assert!(discrete_l2_error(&y, &y).unwrap() == 0.0);
        let ms = mean_square_interp_error(|x| x.sin(), |x| x.sin() + shift * x, (0.0, 1.0), n).unwrap();
        prop_assert!(ms >= 0.0);
    }

    #[test]
    fn fourier_residual_does_not_grow(coeffs in prop::collection::vec(-1.0..1.0_f64, 8), noise in 0.0..0.1_f64) {
        let period = 2.0;
        let pts: Vec<(f64, f64)> = (0..=64)
            .map(|i| {
                let x = i as f64 * period / 64.0;
                let w = std::f64::consts::TAU * x / period;
                let v = coeffs.iter().enumerate().map(|(k, c)| c * ((k + 1) as f64 * w).cos()).sum::<f64>()
                    + noise * (37.0 * x).sin();
                (x, v)
            })
            .collect();
        let mut prev = f64::INFINITY;
        for h in 0..=10 {
            let fit = fourier_fit(&pts, period, h).unwrap();
            prop_assert!(fit.residual <= prev * (1.0 + 1e-9) + 1e-14, "h={} {} > {}", h, fit.residual, prev);
            prev = fit.residual;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn dispersion_is_consistent_with_discriminant(q in 0.05..0.8_f64) {
        let problem = FloquetProblem::spline(Potential::mathieu(q).unwrap(), 40, 6).unwrap();
        let t = problem.period();
        let bs = problem.band_structure((-1.0, 10.0), 0.05, 12).unwrap();
        prop_assert!(!bs.bands.is_empty());
        for p in &bs.dispersion {
            prop_assert!(p.alpha >= 0.0 && p.alpha <= std::f64::consts::PI / t + 1e-12);
            let delta = problem.discriminant(p.energy);
            prop_assert!(((p.alpha * t).cos() - delta / 2.0).abs() <= 1e-9);
            let (l1, l2) = p.exponents();
            prop_assert!((l1 + l2).norm() == 0.0);
        }
        prop_assert!(monotone_branches(&bs));
    }

    #[test]
    fn band_edges_are_periodic_or_antiperiodic_eigenvalues(q in 0.05..0.8_f64) {
        let problem = FloquetProblem::spline(Potential::mathieu(q).unwrap(), 40, 6).unwrap();
        let t = problem.period();
        let range = (-1.0, 10.0);
        let bs = problem.band_structure(range, 0.05, 0).unwrap();
        let mut edges = problem.find_eigenvalues(Complex64::new(0.0, 0.0), range, 0.05).unwrap();
        edges.extend(problem.find_eigenvalues(Complex64::new(0.0, std::f64::consts::PI / t), range, 0.05).unwrap());
        for b in &bs.bands {
            for e in [b.lower, b.upper] {
                if e == range.0 || e == range.1 {
                    continue;
                }
                let near = edges.iter().map(|x| (x - e).abs()).fold(f64::INFINITY, f64::min);
                prop_assert!(near <= 1e-8, "edge {} off by {}", e, near);
            }
        }
    }
}

#[test]
fn folded_dispersion_is_split_into_monotone_branches() {
    // the 2π cell holds two periods of cos 2x, so Δ touches -2 mid-band
    let problem = FloquetProblem::spline(Potential::mathieu(0.5).unwrap(), 100, 7).unwrap();
    let bs = problem.band_structure((-1.0, 10.0), 0.02, 8).unwrap();
    assert!(bs.branches.len() > bs.bands.len());
    assert!(monotone_branches(&bs));

    let free = FloquetProblem::spline(Potential::free(), 100, 9).unwrap();
    let bs = free.band_structure((0.0, 45.0), 0.05, 6).unwrap();
    assert_eq!(bs.bands.len(), 1);
    assert!(bs.gaps.is_empty());
    assert_eq!(bs.branches.len(), 5);
    assert!(monotone_branches(&bs));
}
