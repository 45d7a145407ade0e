//! Fixed-schema CSV with 17 significant digits.

use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Int(i64),
    Real(f64),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Real(x)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Int(n as i64)
    }
}

/// `d.dddddddddddddddde±x`, `inf`, `-inf` or `nan`; never locale dependent.
pub fn format_real(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.16e}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(headers: &[&'static str]) -> Self {
        Table { headers: headers.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.headers.len(), "row width");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.headers.iter().position(|h| *h == name)?;
        Some(
            self.rows
                .iter()
                .map(|r| match r[j] {
                    Cell::Int(n) => n as f64,
                    Cell::Real(x) => x,
                })
                .collect(),
        )
    }

    pub fn render(&self) -> String {
        let mut s = self.headers.join(",");
        s.push('\n');
        for row in &self.rows {
            for (j, c) in row.iter().enumerate() {
                if j > 0 {
                    s.push(',');
                }
                match c {
                    Cell::Int(n) => write!(s, "{n}").unwrap(),
                    Cell::Real(x) => s.push_str(&format_real(*x)),
                }
            }
            s.push('\n');
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0] {
            let s = format_real(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
            let mantissa = s.trim_start_matches('-').split('e').next().unwrap().replace('.', "");
            assert_eq!(mantissa.len(), 17, "{s}");
        }
        assert_eq!(format_real(f64::INFINITY), "inf");
    }

    #[test]
    fn render_table() {
        let mut t = Table::new(&["N", "x"]);
        t.push(vec![8usize.into(), 0.5.into()]);
        assert_eq!(t.render(), "N,x\n8,5.0000000000000000e-1\n");
        assert_eq!(t.column("N").unwrap(), vec![8.0]);
    }
}
