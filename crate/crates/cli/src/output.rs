use std::fmt::Write as _;

use altmoments::rational::{self, Rational};
use serde::Serialize;

/// Decimal rendering to 12 significant digits, trailing zeros dropped.
pub fn decimal(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let exp = v.abs().log10().floor() as i32;
    if !(-6..12).contains(&exp) {
        let s = format!("{v:.11e}");
        let (mantissa, e) = s.split_once('e').expect("scientific notation");
        return format!("{}e{e}", trim_zeros(mantissa));
    }
    trim_zeros(&format!("{v:.*}", (11 - exp) as usize))
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

pub fn decimal_q(r: &Rational) -> String {
    decimal(rational::to_f64(r))
}

pub fn json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output serializes");
    s.push('\n');
    s
}

/// Header line plus rows, comma separated. Fields never contain commas.
pub struct Csv {
    buf: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut buf = String::new();
        writeln!(buf, "{}", header.join(",")).unwrap();
        Self { buf }
    }

    /// Leading `# key=value` comment line, e.g. the seed.
    pub fn with_comment(comment: &str, header: &[&str]) -> Self {
        let mut csv = Self {
            buf: format!("# {comment}\n"),
        };
        writeln!(csv.buf, "{}", header.join(",")).unwrap();
        csv
    }

    pub fn row<I, S>(&mut self, fields: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let fields: Vec<String> = fields.into_iter().map(|f| f.as_ref().to_string()).collect();
        writeln!(self.buf, "{}", fields.join(",")).unwrap();
    }

    pub fn finish(self) -> String {
        self.buf
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(decimal(1.0 / 3.0), "0.333333333333");
        assert_eq!(decimal(2.0 / 3.0), "0.666666666667");
        assert_eq!(decimal(0.5), "0.5");
        assert_eq!(decimal(1.0), "1");
        assert_eq!(decimal(0.0), "0");
        assert_eq!(decimal(123.456), "123.456");
        assert_eq!(decimal(1.0 / 3.0e9), "3.33333333333e-10");
        assert_eq!(decimal(-0.25), "-0.25");
    }
}
