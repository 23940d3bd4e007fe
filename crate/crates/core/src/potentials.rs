//! Periodic potentials: built-in families, node sampling, exact local Taylor
//! coefficients and the tabulated text format.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};
use crate::spline::Grid;

/// Shape of a potential over one period.
#[derive(Debug, Clone, PartialEq)]
pub enum PotentialKind {
    /// `V ≡ 0`.
    Free,
    /// `V(x) = |x|^s` on `[-1, 1]`.
    PowerAbs { s: f64 },
    /// `V(x) = 2q cos 2x` on `[0, 2π]`.
    Mathieu { q: f64 },
    /// `V(x) = x²` on `[-1, 1]`.
    Harmonic,
    /// `V(x) = x⁴` on `[-1, 1]`.
    Quartic,
    /// Values at the `n + 1` uniform nodes of the period interval.
    Tabulated { values: Vec<f64> },
}

/// A potential on its period interval `[a, b]`, extended by periodicity.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential {
    kind: PotentialKind,
    a: f64,
    b: f64,
}

impl Potential {
    pub fn free() -> Self {
        Self::free_on(-1.0, 1.0).expect("[-1, 1] is a valid interval")
    }

    pub fn free_on(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) || a >= b {
            return Err(invalid(format!("period interval must satisfy a < b (got {a}, {b})")));
        }
        Ok(Self {
            kind: PotentialKind::Free,
            a,
            b,
        })
    }

    pub fn power_abs(s: f64) -> Result<Self> {
        if !(s.is_finite() && s > 0.0) {
            return Err(invalid(format!("exponent s must be > 0 (got {s})")));
        }
        Ok(Self {
            kind: PotentialKind::PowerAbs { s },
            a: -1.0,
            b: 1.0,
        })
    }

    pub fn mathieu(q: f64) -> Result<Self> {
        if !q.is_finite() {
            return Err(invalid("q must be finite"));
        }
        Ok(Self {
            kind: PotentialKind::Mathieu { q },
            a: 0.0,
            b: 2.0 * PI,
        })
    }

    pub fn harmonic() -> Self {
        Self {
            kind: PotentialKind::Harmonic,
            a: -1.0,
            b: 1.0,
        }
    }

    pub fn quartic() -> Self {
        Self {
            kind: PotentialKind::Quartic,
            a: -1.0,
            b: 1.0,
        }
    }

    pub fn tabulated(grid: &Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n() + 1 {
            return Err(invalid(format!(
                "expected {} values for a grid of {} pieces, found {}",
                grid.n() + 1,
                grid.n(),
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(invalid("tabulated values must be finite"));
        }
        Ok(Self {
            kind: PotentialKind::Tabulated { values },
            a: grid.a(),
            b: grid.b(),
        })
    }

    pub fn kind(&self) -> &PotentialKind {
        &self.kind
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub fn period(&self) -> f64 {
        self.b - self.a
    }

    /// Uniform grid over the period interval with `n` pieces.
    pub fn grid(&self, n: usize) -> Result<Grid> {
        if let PotentialKind::Tabulated { values } = &self.kind {
            if values.len() != n + 1 {
                return Err(invalid(format!(
                    "tabulated potential has {} pieces, not {n}",
                    values.len() - 1
                )));
            }
        }
        Grid::new(self.a, self.b, n)
    }

    /// Maps `x` into `[a, b]` by periodicity; points already inside are kept.
    fn reduce(&self, x: f64) -> f64 {
        if x >= self.a && x <= self.b {
            x
        } else {
            self.a + (x - self.a).rem_euclid(self.period())
        }
    }

    /// `V(x)`, extended periodically. Tabulated potentials are interpolated
    /// linearly between nodes.
    pub fn value(&self, x: f64) -> f64 {
        let x = self.reduce(x);
        match &self.kind {
            PotentialKind::Free => 0.0,
            PotentialKind::PowerAbs { s } => x.abs().powf(*s),
            PotentialKind::Mathieu { q } => 2.0 * q * (2.0 * x).cos(),
            PotentialKind::Harmonic => x * x,
            PotentialKind::Quartic => x.powi(4),
            PotentialKind::Tabulated { values } => {
                let n = values.len() - 1;
                let t = (x - self.a) / self.period() * n as f64;
                let k = (t.floor().max(0.0) as usize).min(n - 1);
                let frac = t - k as f64;
                values[k] * (1.0 - frac) + values[k + 1] * frac
            }
        }
    }

    /// `V` at every node of `grid`, which must cover exactly the period interval.
    pub fn sample(&self, grid: &Grid) -> Result<Vec<f64>> {
        let tol = 1e-12 * self.period();
        if (grid.a() - self.a).abs() > tol || (grid.b() - self.b).abs() > tol {
            return Err(invalid(format!(
                "grid [{}, {}] does not span the period interval [{}, {}]",
                grid.a(),
                grid.b(),
                self.a,
                self.b
            )));
        }
        match &self.kind {
            PotentialKind::Tabulated { values } => {
                if values.len() != grid.n() + 1 {
                    return Err(invalid(format!(
                        "tabulated potential has {} values but the grid has {} nodes",
                        values.len(),
                        grid.n() + 1
                    )));
                }
                Ok(values.clone())
            }
            _ => Ok(grid.nodes().iter().map(|&x| self.value(x)).collect()),
        }
    }

    /// Coefficients `c_0 … c_order` of `V(x0 + t) = Σ c_j t^j`, valid for
    /// small `t ≥ 0`.
    ///
    /// For `|x|^s` with odd integer `s` the expansion at `x0 = 0` is the
    /// right-sided one, which is the side a piece starting at `x0` covers.
    pub fn local_taylor(&self, x0: f64, order: usize) -> Result<Vec<f64>> {
        let x0 = self.reduce(x0);
        let mut c = vec![0.0; order + 1];
        match &self.kind {
            PotentialKind::Free => {}
            PotentialKind::Harmonic => binomial_shift(x0, 2, 1.0, &mut c),
            PotentialKind::Quartic => binomial_shift(x0, 4, 1.0, &mut c),
            PotentialKind::PowerAbs { s } => {
                if s.fract() != 0.0 || *s > 64.0 {
                    return Err(Error::Unsupported(format!(
                        "local Taylor expansion of |x|^{s} needs an integer exponent"
                    )));
                }
                let p = *s as u32;
                let scale = if x0 < 0.0 && p % 2 == 1 { -1.0 } else { 1.0 };
                binomial_shift(x0, p, scale, &mut c);
            }
            PotentialKind::Mathieu { q } => {
                let mut factor = 2.0 * q;
                for (j, cj) in c.iter_mut().enumerate() {
                    *cj = factor * (2.0 * x0 + j as f64 * FRAC_PI_2).cos();
                    factor *= 2.0 / (j + 1) as f64;
                }
            }
            PotentialKind::Tabulated { .. } => {
                return Err(Error::Unsupported(
                    "tabulated potentials have no analytic Taylor expansion".into(),
                ))
            }
        }
        Ok(c)
    }

    pub fn supports_local_taylor(&self) -> bool {
        match &self.kind {
            PotentialKind::PowerAbs { s } => s.fract() == 0.0 && *s <= 64.0,
            PotentialKind::Tabulated { .. } => false,
            _ => true,
        }
    }

    /// Short descriptor in the same syntax accepted by [`FromStr`].
    pub fn descriptor(&self) -> String {
        match &self.kind {
            PotentialKind::Free => "free".into(),
            PotentialKind::PowerAbs { s } => format!("power:{s}"),
            PotentialKind::Mathieu { q } => format!("mathieu:{q}"),
            PotentialKind::Harmonic => "harmonic".into(),
            PotentialKind::Quartic => "quartic".into(),
            PotentialKind::Tabulated { values } => format!("tabulated({} nodes)", values.len()),
        }
    }
}

/// Writes `scale · (x0 + t)^p` as coefficients of `t` into `c` (truncated).
fn binomial_shift(x0: f64, p: u32, scale: f64, c: &mut [f64]) {
    let mut binom = 1.0;
    for j in 0..=p as usize {
        if j < c.len() {
            c[j] = scale * binom * x0.powi((p as usize - j) as i32);
        }
        binom = binom * (p as usize - j) as f64 / (j + 1) as f64;
    }
}

impl FromStr for Potential {
    type Err = Error;

    /// Parses `free`, `harmonic`, `quartic`, `power:<s>` or `mathieu:<q>`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        let number = |a: Option<&str>| -> Result<f64> {
            let a = a.ok_or_else(|| invalid(format!("potential '{name}' needs a parameter")))?;
            a.trim()
                .parse::<f64>()
                .map_err(|_| invalid(format!("bad parameter '{a}' for potential '{name}'")))
        };
        match (name, arg) {
            ("free", None) => Ok(Self::free()),
            ("harmonic", None) => Ok(Self::harmonic()),
            ("quartic", None) => Ok(Self::quartic()),
            ("power", a) => Self::power_abs(number(a)?),
            ("mathieu", a) => Self::mathieu(number(a)?),
            _ => Err(invalid(format!(
                "unknown potential '{s}' (expected free, harmonic, quartic, power:<s> or mathieu:<q>)"
            ))),
        }
    }
}

/// Parses the tabulated text format: a header line `a b n` followed by
/// `n + 1` whitespace separated values.
pub fn parse_tabulated(text: &str) -> Result<(Potential, Grid)> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.replace('\u{2212}', "-")));
    let (_, header) = lines.next().ok_or_else(|| Error::Parse {
        line: 1,
        message: "missing header 'a b n'".into(),
    })?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 3 {
        return Err(Error::Parse {
            line: 1,
            message: format!("header must be 'a b n', found {} fields", fields.len()),
        });
    }
    let num = |tok: &str, what: &str| {
        tok.parse::<f64>().map_err(|_| Error::Parse {
            line: 1,
            message: format!("bad {what} '{tok}'"),
        })
    };
    let a = num(fields[0], "left endpoint")?;
    let b = num(fields[1], "right endpoint")?;
    let n: usize = fields[2].parse().map_err(|_| Error::Parse {
        line: 1,
        message: format!("piece count '{}' is not a non-negative integer", fields[2]),
    })?;
    if n == 0 {
        return Err(Error::Parse {
            line: 1,
            message: "piece count must be ≥ 1".into(),
        });
    }
    if !(a < b) {
        return Err(Error::Parse {
            line: 1,
            message: format!("abscissae must increase (a = {a}, b = {b})"),
        });
    }

    let mut values = Vec::with_capacity(n + 1);
    let mut last_line = 1;
    for (line, body) in lines {
        for tok in body.split_whitespace() {
            let v: f64 = tok.parse().map_err(|_| Error::Parse {
                line,
                message: format!("bad value '{tok}'"),
            })?;
            values.push(v);
        }
        last_line = line;
    }
    if values.len() != n + 1 {
        return Err(Error::Parse {
            line: last_line,
            message: format!("expected {} values, found {}", n + 1, values.len()),
        });
    }
    let grid = Grid::new(a, b, n).map_err(|e| Error::Parse {
        line: 1,
        message: e.to_string(),
    })?;
    let potential = Potential::tabulated(&grid, values).map_err(|e| Error::Parse {
        line: last_line,
        message: e.to_string(),
    })?;
    Ok((potential, grid))
}

/// Emits `values` on `grid` in the tabulated format, 17 significant digits.
pub fn format_tabulated(grid: &Grid, values: &[f64]) -> Result<String> {
    if values.len() != grid.n() + 1 {
        return Err(invalid(format!(
            "expected {} values, found {}",
            grid.n() + 1,
            values.len()
        )));
    }
    let mut out = format!("{:.16e} {:.16e} {}\n", grid.a(), grid.b(), grid.n());
    for v in values {
        writeln!(out, "{v:.16e}").expect("writing to a String cannot fail");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn sampling_builtins() {
        let g = Grid::new(-1.0, 1.0, 2).unwrap();
        assert_eq!(Potential::harmonic().sample(&g).unwrap(), vec![1.0, 0.0, 1.0]);
        let g = Grid::new(-1.0, 1.0, 4).unwrap();
        assert_eq!(
            Potential::power_abs(1.0).unwrap().sample(&g).unwrap(),
            vec![1.0, 0.5, 0.0, 0.5, 1.0]
        );
        assert_relative_eq!(Potential::mathieu(0.2).unwrap().value(0.0), 0.4);
    }

    #[test]
    fn sampling_rejects_wrong_interval() {
        let g = Grid::new(0.0, 1.0, 4).unwrap();
        assert!(matches!(Potential::harmonic().sample(&g), Err(Error::InvalidInput(_))));
        let tab_grid = Grid::new(0.0, 1.0, 2).unwrap();
        let tab = Potential::tabulated(&tab_grid, vec![1.0, 2.0, 1.0]).unwrap();
        assert!(tab.sample(&g).is_err());
        assert_eq!(tab.sample(&tab_grid).unwrap(), vec![1.0, 2.0, 1.0]);
    }

    #[test]
    fn builtins_are_periodic() {
        let all = [
            Potential::free(),
            Potential::harmonic(),
            Potential::quartic(),
            Potential::power_abs(0.3).unwrap(),
            Potential::power_abs(7.0).unwrap(),
            Potential::mathieu(0.2).unwrap(),
            Potential::mathieu(-1.3).unwrap(),
        ];
        for p in &all {
            let (a, b) = p.interval();
            assert!((p.value(a) - p.value(b)).abs() <= 1e-14, "{}", p.descriptor());
            // one period away lands on the same value
            assert!((p.value(a + 0.3) - p.value(b + 0.3)).abs() <= 1e-13);
        }
    }

    #[test]
    fn symmetric_about_midpoint() {
        for p in [Potential::harmonic(), Potential::quartic(), Potential::power_abs(1.5).unwrap()] {
            for t in [0.1, 0.37, 0.9] {
                assert_eq!(p.value(t), p.value(-t));
            }
        }
        let m = Potential::mathieu(0.2).unwrap();
        for t in [0.1, 0.37, 2.9] {
            assert!((m.value(PI + t) - m.value(PI - t)).abs() < 1e-15);
        }
    }

    #[test]
    fn local_taylor_examples() {
        assert_eq!(Potential::harmonic().local_taylor(0.5, 2).unwrap(), vec![0.25, 1.0, 1.0]);
        let m = Potential::mathieu(0.2).unwrap().local_taylor(0.0, 2).unwrap();
        assert_relative_eq!(m[0], 0.4, epsilon = 1e-15);
        assert!(m[1].abs() < 1e-15);
        assert_relative_eq!(m[2], -0.8, epsilon = 1e-15);
        assert_eq!(Potential::quartic().local_taylor(1.0, 4).unwrap(), vec![1.0, 4.0, 6.0, 4.0, 1.0]);
        assert_eq!(Potential::quartic().local_taylor(-1.0, 4).unwrap(), vec![1.0, -4.0, 6.0, -4.0, 1.0]);
    }

    #[test]
    fn local_taylor_of_odd_power() {
        let p = Potential::power_abs(3.0).unwrap();
        // |x|³ near x0 = -0.5 is -(x0 + t)³
        let c = p.local_taylor(-0.5, 3).unwrap();
        assert_eq!(c, vec![0.125, -0.75, 1.5, -1.0]);
        assert_eq!(p.local_taylor(0.0, 4).unwrap(), vec![0.0, 0.0, 0.0, 1.0, 0.0]);
    }

    #[test]
    fn local_taylor_refusals() {
        assert!(matches!(
            Potential::power_abs(0.5).unwrap().local_taylor(0.2, 4),
            Err(Error::Unsupported(_))
        ));
        let g = Grid::new(0.0, 1.0, 2).unwrap();
        let tab = Potential::tabulated(&g, vec![0.0, 1.0, 0.0]).unwrap();
        assert!(matches!(tab.local_taylor(0.0, 2), Err(Error::Unsupported(_))));
    }

    #[test]
    fn local_taylor_sums_to_value() {
        let h = 0.02;
        let cases = [
            Potential::mathieu(0.2).unwrap(),
            Potential::mathieu(1.7).unwrap(),
            Potential::harmonic(),
            Potential::quartic(),
            Potential::power_abs(5.0).unwrap(),
        ];
        for p in &cases {
            let (a, b) = p.interval();
            for i in 0..10 {
                let x0 = a + (b - a) * i as f64 / 10.0;
                let c = p.local_taylor(x0, 6).unwrap();
                let t = h / 2.0;
                let sum: f64 = c.iter().rev().fold(0.0, |acc, cj| acc * t + cj);
                assert!((sum - p.value(x0 + t)).abs() < 1e-10, "{} at {x0}", p.descriptor());
            }
        }
    }

    #[test]
    fn descriptor_parsing() {
        assert_eq!("harmonic".parse::<Potential>().unwrap(), Potential::harmonic());
        assert_eq!("mathieu:0.2".parse::<Potential>().unwrap(), Potential::mathieu(0.2).unwrap());
        assert_eq!("power:4".parse::<Potential>().unwrap(), Potential::power_abs(4.0).unwrap());
        assert!("power:-1".parse::<Potential>().is_err());
        assert!("power".parse::<Potential>().is_err());
        assert!("bogus".parse::<Potential>().is_err());
    }

    #[test]
    fn parse_simple_table() {
        let (p, g) = parse_tabulated("-1 1 2\n1 0 1\n").unwrap();
        assert_eq!(g.n(), 2);
        assert_eq!(p.sample(&g).unwrap(), vec![1.0, 0.0, 1.0]);
        // values may be split across lines
        let (_, g) = parse_tabulated("0 3 3\n1 2\n3\n4").unwrap();
        assert_eq!(g.h(), 1.0);
    }

    #[test]
    fn parse_errors() {
        let e = parse_tabulated("-1 1 2\n").unwrap_err();
        assert!(e.to_string().contains("expected 3 values, found 0"), "{e}");
        let e = parse_tabulated("-1 1 2\n1 0\n").unwrap_err();
        assert_eq!(
            e,
            Error::Parse {
                line: 2,
                message: "expected 3 values, found 2".into()
            }
        );
        assert!(matches!(parse_tabulated("1 -1 2\n0 0 0"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_tabulated("-1 1\n0 0 0"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_tabulated("-1 1 2\n0 x 0"), Err(Error::Parse { line: 2, .. })));
        assert!(parse_tabulated("").is_err());
    }

    #[test]
    fn emitted_table_parses_back() {
        let g = Grid::new(-1.0, 1.0, 5).unwrap();
        let vals: Vec<f64> = g.nodes().iter().map(|x| (x * 3.1).sin() / 7.0).collect();
        let text = format_tabulated(&g, &vals).unwrap();
        let (p, g2) = parse_tabulated(&text).unwrap();
        assert_eq!(g2, g);
        assert_eq!(p.sample(&g2).unwrap(), vals);
    }
}
