//! Global Lagrange interpolation against the spline on equispaced nodes.

use spline_floquet::analysis::{lagrange_global_error, spline_interp_error};

fn main() -> spline_floquet::Result<()> {
    println!("{:>4} {:>14} {:>14}", "n", "Lagrange", "spline");
    for n in [4, 8, 12, 16, 20] {
        let l = lagrange_global_error(f64::abs, (-1.0, 1.0), n)?;
        let s = spline_interp_error(f64::abs, (-1.0, 1.0), n)?;
        println!("{n:>4} {l:>14.4e} {s:>14.4e}");
    }
    Ok(())
}
