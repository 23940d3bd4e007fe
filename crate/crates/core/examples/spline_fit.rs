//! Fit the variational quadratic spline to |x| and sin(2πx) and print the
//! mean-square interpolation error as the grid is refined.

use spline_floquet::analysis::spline_interp_error;
use spline_floquet::spline::{Grid, SplineInterpolant};

fn main() -> spline_floquet::Result<()> {
    let grid = Grid::new(-1.0, 1.0, 8)?;
    let y: Vec<f64> = grid.nodes().iter().map(|x| x.abs()).collect();
    let s = SplineInterpolant::fit(&y, &grid)?;
    println!("a_k for |x|, n = 8: {:?}", s.a_coeffs());
    println!("objective (h^5/30) sum a_k^2 = {:.6e}", s.objective());

    println!("{:>5} {:>12} {:>12}", "n", "|x|", "sin 2pi x");
    for n in [10, 20, 50, 100] {
        let e_abs = spline_interp_error(f64::abs, (-1.0, 1.0), n)?;
        let e_sin = spline_interp_error(|x| (2.0 * std::f64::consts::PI * x).sin(), (-1.0, 1.0), n)?;
        println!("{n:>5} {e_abs:>12.3e} {e_sin:>12.3e}");
    }
    Ok(())
}
