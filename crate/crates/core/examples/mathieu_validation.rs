//! Mathieu characteristic values for q = 0.2 against the small-q series,
//! over the (m, n) grid used by `validate`.

use spline_floquet::analysis::mathieu_table;

fn main() -> spline_floquet::Result<()> {
    let cells = mathieu_table(0.2, &[5, 7], &[10, 50, 100])?;
    println!("{:>2} {:>4} {:>2} {:>5} {:>12} {:>14} {:>10}", "m", "n", "k", "", "reference", "computed", "err %");
    for c in cells {
        let computed = c.computed.map_or("-".to_string(), |v| format!("{v:.9}"));
        let err = c.percent_error.map_or("-".to_string(), |v| format!("{v:.2e}"));
        println!(
            "{:>2} {:>4} {:>2} {:>5} {:>12.7} {computed:>14} {err:>10}{}",
            c.m,
            c.n,
            c.k,
            format!("{:?}", c.parity),
            c.reference,
            if c.flagged { "  *" } else { "" }
        );
    }
    Ok(())
}
