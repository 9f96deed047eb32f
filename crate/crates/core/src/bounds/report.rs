//! Report rows and the rounding conventions used when displaying bounds.

use serde::{Deserialize, Serialize};

use super::baseline::Applicability;

/// Smallest multiple of `10^-decimals` that is `>= x`.
pub fn rounded_up(x: f64, decimals: u32) -> f64 {
    let s = 10f64.powi(decimals as i32);
    let c = (x * s).ceil();
    let v = c / s;
    if v < x {
        (c + 1.0) / s
    } else {
        v
    }
}

pub fn rounded_up_6dp(x: f64) -> f64 {
    rounded_up(x, 6)
}

/// Parses a printed decimal such as `"416.1016"` into `(digits, decimals)`,
/// i.e. `(4161016, 4)`.
pub fn parse_decimal(text: &str) -> Option<(u64, u32)> {
    let text = text.trim().trim_end_matches('…').trim_end_matches("...");
    let (int, frac) = text.split_once('.').unwrap_or((text, ""));
    if int.is_empty() || !int.bytes().all(|b| b.is_ascii_digit()) || !frac.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int}{frac}").parse().ok()?;
    Some((digits, frac.len() as u32))
}

/// `ceil(x * 10^decimals)` as an integer, exact at the boundary.
pub fn ceil_scaled(x: f64, decimals: u32) -> u64 {
    (rounded_up(x, decimals) * 10f64.powi(decimals as i32)).round() as u64
}

/// `floor(x * 10^decimals)` as an integer.
pub fn floor_scaled(x: f64, decimals: u32) -> u64 {
    let s = 10f64.powi(decimals as i32);
    let mut f = (x * s).floor();
    if f / s > x {
        f -= 1.0;
    }
    f as u64
}

/// True when `x`, rounded up at the precision of `printed`, is `printed`.
pub fn rounds_up_to(x: f64, printed: &str) -> bool {
    parse_decimal(printed).is_some_and(|(digits, dec)| ceil_scaled(x, dec) == digits)
}

/// True when the decimal expansion of `x` starts with `printed`.
pub fn has_prefix(x: f64, printed: &str) -> bool {
    parse_decimal(printed).is_some_and(|(digits, dec)| floor_scaled(x, dec) == digits)
}

/// Round-up with seven significant digits but at most six decimals, the
/// layout of printed bound tables (`416.1016`, `11.80801`, `0.292023`).
pub fn display_rounded_up(x: f64) -> String {
    let int_digits = if x < 1.0 { 1 } else { (x.floor() as u64).to_string().len() as u32 };
    let dec = 7u32.saturating_sub(int_digits).min(6);
    let v = rounded_up(x, dec);
    let s = format!("{v:.*}", dec as usize);
    if s.contains('.') {
        let t = s.trim_end_matches('0').trim_end_matches('.');
        t.to_string()
    } else {
        s
    }
}

/// One line of a bound comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundRow {
    pub name: String,
    pub params: String,
    pub raw_value: Option<f64>,
    pub rounded_up_6dp: Option<f64>,
    pub applicable: bool,
    pub dominates_exact: Option<bool>,
}

impl BoundRow {
    pub fn new(name: impl Into<String>, params: impl Into<String>, value: Applicability, exact: Option<f64>) -> Self {
        let raw = value.value();
        BoundRow {
            name: name.into(),
            params: params.into(),
            raw_value: raw,
            rounded_up_6dp: raw.map(rounded_up_6dp),
            applicable: raw.is_some(),
            dominates_exact: raw.zip(exact).map(|(b, e)| b >= e * (1.0 - 1e-9)),
        }
    }

    pub fn value(name: impl Into<String>, params: impl Into<String>, value: f64, exact: Option<f64>) -> Self {
        Self::new(name, params, Applicability::Value(value), exact)
    }

    /// Printed cell: the rounded-up value or `n.a.`.
    pub fn display(&self) -> String {
        self.raw_value.map_or_else(|| "n.a.".to_string(), display_rounded_up)
    }
}

/// A set of bound rows for one matrix. Values are bounds divided by the
/// normalizing factor (`n!` for permanents).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub n: usize,
    pub t: Option<f64>,
    pub exact: Option<f64>,
    pub rows: Vec<BoundRow>,
}

pub const CSV_HEADER: &str = "name,params,raw_value,rounded_up_6dp,applicable,dominates_exact";

/// Quotes a CSV field when needed.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl BoundReport {
    /// Fixed column order: `name,params,raw_value,rounded_up_6dp,applicable,dominates_exact`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let opt = |v: Option<f64>| v.map_or_else(String::new, |x| format!("{x:.17e}"));
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                csv_field(&r.name),
                csv_field(&r.params),
                opt(r.raw_value),
                r.rounded_up_6dp.map_or_else(String::new, |x| format!("{x:.6}")),
                r.applicable,
                r.dominates_exact.map_or_else(String::new, |b| b.to_string()),
            ));
        }
        out
    }
}
