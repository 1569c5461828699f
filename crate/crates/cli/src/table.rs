//! CSV tables with fixed headers.

use crate::error::Result;

/// Rounds to 12 significant digits and prints without exponent noise.
pub fn fmt_real(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    let rounded: f64 = format!("{v:.11e}").parse().unwrap();
    if rounded == 0.0 {
        "0".into()
    } else {
        rounded.to_string()
    }
}

pub const RISK_CURVE_FIXED: [&str; 8] =
    ["n_source", "n_target", "replications", "median", "q25", "q75", "excess_raw_mean", "bound_value"];

pub const BOUND_COMPONENTS: [&str; 7] = [
    "complexity_term",
    "confidence_term",
    "target_complexity_term",
    "target_confidence_term",
    "dissimilarity_term",
    "source_complexity_term",
    "source_confidence_term",
];

pub const SHIFT_SWEEP_HEADER: [&str; 7] = ["shift", "median", "q25", "q75", "bound_value", "dst_trace", "dst_tv"];

pub const BOUNDS_HEADER: [&str; 12] = [
    "n_source",
    "n_target",
    "mi_sup_source",
    "mi_sup_target",
    "cap_mi",
    "cap_dim",
    "r_povm_mc",
    "r_joint_mc",
    "dst_trace",
    "dst_tv",
    "bound_no_transfer",
    "bound_transfer",
];

pub fn risk_curve_header() -> Vec<&'static str> {
    RISK_CURVE_FIXED.iter().chain(BOUND_COMPONENTS.iter()).copied().collect()
}

/// A cell of an output row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Int(usize),
    Real(f64),
    Empty,
}

impl Cell {
    fn render(self) -> String {
        match self {
            Cell::Int(n) => n.to_string(),
            Cell::Real(v) => fmt_real(v),
            Cell::Empty => String::new(),
        }
    }
}

/// Renders an RFC-4180 table.
pub fn to_csv(header: &[&str], rows: &[Vec<Cell>]) -> Result<String> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.iter().map(|c| c.render()))?;
    }
    let bytes = w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is ASCII"))
}

/// Parsed table: header plus rows of optional numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct Parsed {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

impl Parsed {
    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }
}

pub fn parse_csv(text: &str) -> Result<Parsed> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers()?.iter().map(str::to_string).collect();
    let rows = r
        .records()
        .map(|rec| Ok(rec?.iter().map(|f| f.parse().ok()).collect()))
        .collect::<Result<_>>()?;
    Ok(Parsed { header, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_real(0.1 + 0.2), "0.3");
        assert_eq!(fmt_real(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_real(-2.0 / 3.0 * 1e-7), "-0.0000000666666666667");
        assert_eq!(fmt_real(123456789.123456), "123456789.123");
        assert_eq!(fmt_real(-0.0), "0");
        assert_eq!(fmt_real(5.0), "5");
    }

    #[test]
    fn round_trip() {
        let text = to_csv(&["a", "b"], &[vec![Cell::Int(3), Cell::Real(0.25)], vec![Cell::Int(4), Cell::Empty]]).unwrap();
        assert_eq!(text, "a,b\r\n3,0.25\r\n4,\r\n");
        let p = parse_csv(&text).unwrap();
        assert_eq!(p.column("b"), Some(1));
        assert_eq!(p.rows, vec![vec![Some(3.0), Some(0.25)], vec![Some(4.0), None]]);
    }
}
