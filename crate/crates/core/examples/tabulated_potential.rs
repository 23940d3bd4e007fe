//! A potential known only on a grid: write it in the tabulated format, read
//! it back and find its periodic eigenvalues.

use num_complex::Complex64;
use spline_floquet::floquet::FloquetProblem;
use spline_floquet::potentials::{format_tabulated, parse_tabulated};
use spline_floquet::spline::Grid;

fn main() -> spline_floquet::Result<()> {
    // Kronig-Penney style well smoothed by tanh
    let grid = Grid::new(0.0, 1.0, 200)?;
    let values: Vec<f64> = grid
        .nodes()
        .iter()
        .map(|x| 20.0 * (0.5 - 0.5 * (40.0 * (0.25 - (x - 0.5).abs())).tanh()))
        .collect();
    let text = format_tabulated(&grid, &values)?;
    let (potential, grid) = parse_tabulated(&text)?;
    let problem = FloquetProblem::spline(potential, grid.n(), 6)?;
    let found = problem.find_eigenvalues(Complex64::new(0.0, 0.0), (0.0, 80.0), 0.05)?;
    println!("periodic eigenvalues: {found:.6?}");
    Ok(())
}
