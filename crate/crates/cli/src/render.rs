//! Row rendering: exact rationals as `num/den`, decimals to 12 significant
//! digits, CSV and JSON writers.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{CliError, Result};

const SIG_DIGITS: u32 = 12;

/// `num/den`, or just `num` when the denominator is 1.
pub fn rational(r: &BigRational) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// `r` rounded half-up to 12 significant digits, trailing zeros dropped.
pub fn decimal(r: &BigRational) -> String {
    if r.is_zero() {
        return "0".to_string();
    }
    let negative = r.is_negative();
    let a = r.abs();
    let ten = BigInt::from(10);

    // 10^e <= a < 10^(e+1), starting from the digit-count estimate.
    let mut e = a.numer().to_string().len() as i64 - a.denom().to_string().len() as i64;
    let pow10 = |k: i64| -> BigRational {
        if k >= 0 {
            BigRational::from_integer(ten.pow(k as u32))
        } else {
            BigRational::new(BigInt::from(1), ten.pow((-k) as u32))
        }
    };
    while a < pow10(e) {
        e -= 1;
    }
    while a >= pow10(e + 1) {
        e += 1;
    }
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let mut n = (&a * pow10(SIG_DIGITS as i64 - 1 - e) + &half)
        .floor()
        .to_integer();
    if n >= ten.pow(SIG_DIGITS) {
        e += 1;
        n = (&a * pow10(SIG_DIGITS as i64 - 1 - e) + &half)
            .floor()
            .to_integer();
    }
    let digits = n.to_string();
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    if e < 0 {
        out.push_str("0.");
        out.push_str(&"0".repeat((-e - 1) as usize));
        out.push_str(&digits);
    } else if e as u32 >= SIG_DIGITS - 1 {
        out.push_str(&digits);
        out.push_str(&"0".repeat((e as u32 + 1 - SIG_DIGITS) as usize));
        return out;
    } else {
        let (int, frac) = digits.split_at(e as usize + 1);
        out.push_str(int);
        out.push('.');
        out.push_str(frac);
    }
    let trimmed = out.trim_end_matches('0').trim_end_matches('.');
    trimmed.to_string()
}

/// Decimal rendering of a float through its exact binary value.
pub fn decimal_f64(v: f64) -> String {
    match BigRational::from_float(v) {
        Some(r) => decimal(&r),
        None => v.to_string(),
    }
}

pub fn big(v: &BigUint) -> String {
    v.to_string()
}

pub fn ratio_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// One output table: a header, token rows, and an optional trailer line of
/// `key=value` pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub name: &'static str,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub trailer: Vec<(&'static str, String)>,
}

impl Table {
    pub fn new(name: &'static str, header: &[&'static str]) -> Self {
        Table {
            name,
            header: header.to_vec(),
            rows: Vec::new(),
            trailer: Vec::new(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            debug_assert_eq!(row.len(), self.header.len());
            out.push_str(&row.join(","));
            out.push('\n');
        }
        if !self.trailer.is_empty() {
            let parts: Vec<String> = self
                .trailer
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect();
            let _ = writeln!(out, "{}", parts.join(","));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut items: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: serde_json::Map<String, serde_json::Value> = self
                    .header
                    .iter()
                    .zip(row)
                    .map(|(k, v)| (k.to_string(), serde_json::Value::String(v.clone())))
                    .collect();
                serde_json::Value::Object(obj)
            })
            .collect();
        if !self.trailer.is_empty() {
            let obj = self
                .trailer
                .iter()
                .map(|(k, v)| (k.to_string(), serde_json::Value::String(v.clone())))
                .collect();
            items.push(serde_json::Value::Object(obj));
        }
        let mut s = serde_json::to_string_pretty(&serde_json::Value::Array(items))
            .expect("strings always serialize");
        s.push('\n');
        s
    }

    /// Writes `<name>.csv`, plus `<name>.json` when asked. Returns the paths.
    pub fn write(&self, dir: &Path, json: bool) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        let csv_path = dir.join(format!("{}.csv", self.name));
        fs::write(&csv_path, self.to_csv()).map_err(|e| CliError::io(&csv_path, e))?;
        let mut written = vec![csv_path];
        if json {
            let json_path = dir.join(format!("{}.json", self.name));
            fs::write(&json_path, self.to_json()).map_err(|e| CliError::io(&json_path, e))?;
            written.push(json_path);
        }
        Ok(written)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rationals() {
        assert_eq!(rational(&r(7, 3)), "7/3");
        assert_eq!(rational(&r(4, 2)), "2");
        assert_eq!(rational(&r(-1, 4)), "-1/4");
    }

    #[test]
    fn decimals() {
        assert_eq!(decimal(&r(7, 3)), "2.33333333333");
        assert_eq!(decimal(&r(2, 3)), "0.666666666667");
        assert_eq!(decimal(&r(1879, 512)), "3.669921875");
        assert_eq!(decimal(&r(11, 4)), "2.75");
        assert_eq!(decimal(&r(1, 1)), "1");
        assert_eq!(decimal(&r(0, 1)), "0");
        assert_eq!(decimal(&r(-1, 8)), "-0.125");
        assert_eq!(decimal(&r(1, 3000)), "0.000333333333333");
        assert_eq!(decimal(&r(9_999_999_999_999, 10)), "1000000000000");
        assert_eq!(decimal(&r(123_456_789_012_345, 1)), "123456789012000");
        assert_eq!(decimal(&r(25, 2)), "12.5");
        assert_eq!(decimal_f64(0.5), "0.5");
    }

    #[test]
    fn decimal_rounds_to_twelve_significant_digits() {
        // |decimal(r) - r| <= 1/2 ulp at 12 digits.
        for (n, d) in [
            (1i64, 7i64),
            (22, 7),
            (355, 113),
            (1, 997),
            (123456789, 1000),
        ] {
            let q = r(n, d);
            let shown: f64 = decimal(&q).parse().unwrap();
            let exact = n as f64 / d as f64;
            assert!(((shown - exact) / exact).abs() <= 5e-12, "{n}/{d}");
        }
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new("demo", &["a", "b"]);
        t.rows.push(vec!["1".into(), "2/3".into()]);
        t.trailer.push(("total", "5".into()));
        assert_eq!(t.to_csv(), "a,b\n1,2/3\ntotal=5\n");
        assert!(t.to_json().contains("\"b\": \"2/3\""));
    }
}
