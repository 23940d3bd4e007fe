//! E(α) inside the first bands of the Mathieu potential with q = 0.5.

use spline_floquet::floquet::FloquetProblem;
use spline_floquet::potentials::Potential;

fn main() -> spline_floquet::Result<()> {
    let problem = FloquetProblem::spline(Potential::mathieu(0.5)?, 100, 7)?;
    let bs = problem.band_structure((-1.0, 10.0), 0.02, 8)?;
    println!("band,branch,E,alpha");
    for p in &bs.dispersion {
        println!("{},{},{:.8},{:.8}", p.band, p.branch, p.energy, p.alpha);
    }
    Ok(())
}
