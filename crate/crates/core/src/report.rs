//! Machine-readable command reports.
//!
//! Reports serialize with sorted keys and numbers rounded to
//! [`SIGNIFICANT_DIGITS`] significant digits, so a fixed input and seed
//! always produce the same bytes.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub const SIGNIFICANT_DIGITS: usize = 12;

/// Rounds to [`SIGNIFICANT_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .expect("formatted float parses")
}

fn display(x: f64) -> String {
    let r = round_sig(x);
    if r != 0.0 && (r.abs() < 1e-4 || r.abs() >= 1e6) {
        format!("{r:e}")
    } else {
        format!("{r}")
    }
}

fn number(x: f64) -> Value {
    let r = round_sig(x);
    if r.is_finite() {
        json!(r)
    } else {
        Value::String(format!("{r}"))
    }
}

pub fn scalar(x: f64) -> Value {
    number(x)
}

pub fn vector(xs: &[f64]) -> Value {
    Value::Array(xs.iter().copied().map(number).collect())
}

pub fn digest(bytes: &[u8]) -> String {
    let hash = Sha256::digest(bytes);
    hash.iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

/// Whether `value` is a residual (compared `<= tolerance`) or a z-score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    Residual,
    ZScore,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub kind: CheckKind,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, kind: CheckKind, value: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            kind,
            value,
            tolerance,
            pass: value <= tolerance,
        }
    }

    pub fn residual(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self::new(name, CheckKind::Residual, value, tolerance)
    }

    pub fn z_score(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self::new(name, CheckKind::ZScore, value, threshold)
    }

    fn to_value(&self) -> Value {
        json!({
            "name": self.name,
            "kind": self.kind,
            "value": number(self.value),
            "tolerance": number(self.tolerance),
            "pass": self.pass,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub inputs: BTreeMap<String, Value>,
    pub results: BTreeMap<String, Value>,
    pub checks: Vec<Check>,
    /// False when parallel sampling makes the numbers seed-stable only in
    /// distribution.
    pub reproducible: bool,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Self {
            command: command.into(),
            inputs: BTreeMap::new(),
            results: BTreeMap::new(),
            checks: Vec::new(),
            reproducible: true,
        }
    }

    pub fn input(&mut self, key: &str, value: Value) -> &mut Self {
        self.inputs.insert(key.to_string(), value);
        self
    }

    pub fn result(&mut self, key: &str, value: Value) -> &mut Self {
        self.results.insert(key.to_string(), value);
        self
    }

    pub fn check(&mut self, check: Check) -> &mut Self {
        self.checks.push(check);
        self
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_value(&self) -> Value {
        json!({
            "command": self.command,
            "inputs": self.inputs,
            "results": self.results,
            "checks": self.checks.iter().map(Check::to_value).collect::<Vec<_>>(),
            "reproducible": self.reproducible,
            "pass": self.passed(),
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.command);
        for (k, v) in &self.inputs {
            let _ = writeln!(out, "  input  {k} = {v}");
        }
        for (k, v) in &self.results {
            let _ = writeln!(out, "  result {k} = {v}");
        }
        for c in &self.checks {
            let _ = writeln!(
                out,
                "  [{}] {} {} = {} (tolerance {})",
                if c.pass { "PASS" } else { "FAIL" },
                c.name,
                match c.kind {
                    CheckKind::Residual => "residual",
                    CheckKind::ZScore => "z",
                },
                display(c.value),
                display(c.tolerance),
            );
        }
        if !self.reproducible {
            let _ = writeln!(out, "  (parallel sampling: not bit-reproducible)");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_keeps_twelve_digits() {
        assert_eq!(round_sig(1.0114042647073518), 1.01140426471);
        assert_eq!(round_sig(-2.0 / 3.0), -0.666666666667);
        assert_eq!(round_sig(0.0), 0.0);
        assert_eq!(round_sig(1e-17), 1e-17);
    }

    #[test]
    fn keys_are_sorted_and_output_stable() {
        let mut r = Report::new("entropy");
        r.result("zeta", scalar(1.0)).result("alpha", scalar(2.0));
        r.check(Check::residual("b", 1e-13, 1e-12));
        let s = r.to_json();
        assert!(s.find("\"alpha\"").unwrap() < s.find("\"zeta\"").unwrap());
        assert!(s.find("\"checks\"").unwrap() < s.find("\"command\"").unwrap());
        assert_eq!(s, r.clone().to_json());
        assert!(r.passed());
        r.check(Check::z_score("z", 3.5, 3.0));
        assert!(!r.passed());
        assert!(r.to_text().contains("[FAIL] z z = 3.5"));
    }

    #[test]
    fn digest_is_sha256_hex() {
        assert_eq!(
            digest(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
