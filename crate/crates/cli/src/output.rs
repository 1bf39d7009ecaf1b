//! CSV and JSON rendering.

use serde::Serialize;

/// Shortest decimal that round-trips to the same `f64`; `-0` prints as `0`.
/// Magnitudes outside `[1e-5, 1e16)` use exponent notation.
pub fn fmt_f64(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 {
        "0".to_owned()
    } else if (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// A CSV cell: present, not applicable (empty) or undefined (`NA`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Value(f64),
    Empty,
    Na,
}

impl Cell {
    pub fn render(self) -> String {
        match self {
            Cell::Value(x) => fmt_f64(x),
            Cell::Empty => String::new(),
            Cell::Na => "NA".to_owned(),
        }
    }

    pub fn value(self) -> Option<f64> {
        match self {
            Cell::Value(x) => Some(x),
            _ => None,
        }
    }
}

impl Serialize for Cell {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Cell::Value(x) if *x == 0.0 => s.serialize_f64(0.0),
            Cell::Value(x) => s.serialize_f64(*x),
            Cell::Empty => s.serialize_none(),
            Cell::Na => s.serialize_str("NA"),
        }
    }
}

pub fn csv_line(cells: &[String]) -> String {
    let mut line = cells.join(",");
    line.push('\n');
    line
}

pub fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shortest_round_trip() {
        for x in [
            0.1,
            1.0 / 3.0,
            1e-300,
            123456.789,
            -2.5,
            std::f64::consts::PI,
        ] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
        }
        assert_eq!(fmt_f64(-0.0), "0");
        assert_eq!(fmt_f64(0.1), "0.1");
        assert_eq!(fmt_f64(2.0), "2");
        assert_eq!(fmt_f64(2.5e-16), "2.5e-16");
        assert_eq!(fmt_f64(-1e20), "-1e20");
    }

    #[test]
    fn cells() {
        assert_eq!(Cell::Value(0.5).render(), "0.5");
        assert_eq!(Cell::Empty.render(), "");
        assert_eq!(Cell::Na.render(), "NA");
        assert_eq!(serde_json::to_string(&Cell::Na).unwrap(), "\"NA\"");
        assert_eq!(serde_json::to_string(&Cell::Empty).unwrap(), "null");
    }
}
