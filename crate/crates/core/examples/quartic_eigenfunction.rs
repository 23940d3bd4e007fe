//! Periodic eigenfunction of V = x⁴ near E = 10.159, its parity and a
//! three-term Fourier fit.

use num_complex::Complex64;
use spline_floquet::analysis::{fit_eigenfunction, FourierTerm};
use spline_floquet::floquet::FloquetProblem;
use spline_floquet::potentials::Potential;

fn main() -> spline_floquet::Result<()> {
    let zero = Complex64::new(0.0, 0.0);
    let problem = FloquetProblem::spline(Potential::quartic(), 100, 5)?;
    let e = problem.nearest_eigenvalue(zero, 10.159, 0.05)?.expect("eigenvalue near 10.159");
    let sol = problem.eigenfunction(e, zero)?;
    println!("E = {:.9}, parity {:?}, residual {:.2e}", sol.energy, sol.parity, sol.boundary_residual);
    let terms = [FourierTerm::Constant, FourierTerm::Cos(1), FourierTerm::Cos(2)];
    let fit = fit_eigenfunction(&sol, &terms)?;
    println!(
        "y ~ {:.5} + {:.5} cos(pi x) + {:.5} cos(2 pi x), residual {:.2e}",
        fit.constant(),
        fit.cosine(1),
        fit.cosine(2),
        fit.residual
    );
    for s in sol.nodes.iter().step_by(20) {
        println!("{:+.2} {:+.6}", s.x, s.y);
    }
    Ok(())
}
