//! Bands and gaps of the periodically continued harmonic well V = x² on
//! [-1, 1], together with the periodic eigenvalues.

use num_complex::Complex64;
use spline_floquet::floquet::{FloquetProblem, DEFAULT_SCAN_STEP};
use spline_floquet::potentials::Potential;

fn main() -> spline_floquet::Result<()> {
    let problem = FloquetProblem::spline(Potential::harmonic(), 100, 5)?;
    let bs = problem.band_structure((0.0, 45.0), DEFAULT_SCAN_STEP, 0)?;
    for (i, b) in bs.bands.iter().enumerate() {
        println!("band {i}: [{:.6}, {:.6}]", b.lower, b.upper);
    }
    for g in &bs.gaps {
        println!("gap    ({:.6}, {:.6}) width {:.2e}", g.lower, g.upper, g.width());
    }
    let periodic = problem.find_roots(Complex64::new(0.0, 0.0), (0.0, 45.0), DEFAULT_SCAN_STEP)?;
    for r in periodic {
        println!("Delta = 2 at E = {:.7}{}", r.energy, if r.degenerate { " (double)" } else { "" });
    }
    Ok(())
}
