//! Spline model against exact local Taylor coefficients for V = x⁴: node
//! error of the ground state relative to a fine reference.

use spline_floquet::analysis::{eigenfunction_error_table, Method};
use spline_floquet::potentials::Potential;

fn main() -> spline_floquet::Result<()> {
    let methods = [Method::Spline(5), Method::Spline(7), Method::Cac(4), Method::Cac(6)];
    let cells = eigenfunction_error_table(&Potential::quartic(), &[10.1590085], 100, &methods)?;
    for c in cells {
        let e = c.energy.map_or("-".into(), |v| format!("{v:.9}"));
        let err = c.error.map_or("-".into(), |v| format!("{v:.2e}"));
        println!("{:<10} E = {e:<14} E_r = {err}", format!("{:?}", c.method));
    }
    Ok(())
}
