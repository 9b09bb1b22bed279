//! Check-line reports rendered as text or JSON.

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::chartab::C64;
use crate::narygroup::{AxiomReport, CheckMode, Mismatch, Witness};

const MAX_PRINTED_WITNESSES: usize = 8;

#[derive(Debug, Clone)]
pub struct Report {
    text: Vec<String>,
    fields: Map<String, Value>,
    checks: Vec<Value>,
    passed: bool,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub passed: bool,
    pub text: String,
    pub json: Value,
}

impl Default for Report {
    fn default() -> Self {
        Report { text: Vec::new(), fields: Map::new(), checks: Vec::new(), passed: true }
    }
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.text.push(s.into());
    }

    pub fn field(&mut self, key: &str, value: impl Serialize) {
        self.fields.insert(key.to_string(), serde_json::to_value(value).expect("serialisable field"));
    }

    /// Records a check. `data` goes to JSON only.
    pub fn check(&mut self, name: &str, passed: bool, detail: &str, witnesses: &[String], data: Value) {
        self.passed &= passed;
        let status = if passed { "PASS" } else { "FAIL" };
        if detail.is_empty() {
            self.text.push(format!("check {name}: {status}"));
        } else {
            self.text.push(format!("check {name}: {status} ({detail})"));
        }
        for w in witnesses.iter().take(MAX_PRINTED_WITNESSES) {
            self.text.push(format!("  witness: {w}"));
        }
        if witnesses.len() > MAX_PRINTED_WITNESSES {
            self.text.push(format!("  ... {} more", witnesses.len() - MAX_PRINTED_WITNESSES));
        }
        self.checks.push(json!({
            "name": name,
            "passed": passed,
            "detail": detail,
            "witnesses": witnesses,
            "data": data,
        }));
    }

    pub fn axiom(&mut self, name: &str, r: &AxiomReport) {
        let detail = format!("{}, {} checked", mode_text(r.mode), r.checked_count);
        let witnesses: Vec<String> = r.violations.iter().map(witness_text).collect();
        self.check(name, r.passed, &detail, &witnesses, serde_json::to_value(r).expect("serialisable report"));
    }

    pub fn fail(&mut self, name: &str, message: &str) {
        self.check(name, false, "", &[message.to_string()], Value::Null);
    }

    pub fn passed(&self) -> bool {
        self.passed
    }

    pub fn finish(mut self) -> Outcome {
        let status = if self.passed { "PASS" } else { "FAIL" };
        self.text.push(format!("result: {status}"));
        let mut text = self.text.join("\n");
        text.push('\n');
        self.fields.insert("checks".into(), Value::Array(self.checks));
        self.fields.insert("passed".into(), Value::Bool(self.passed));
        Outcome { passed: self.passed, text, json: Value::Object(self.fields) }
    }
}

pub fn mode_text(mode: CheckMode) -> String {
    match mode {
        CheckMode::Full => "full".to_string(),
        CheckMode::Sampled { count, seed } => format!("sampled {count}, seed {seed}"),
    }
}

pub fn witness_text(w: &Witness) -> String {
    let m = match &w.mismatch {
        Mismatch::Unequal { left, right } => format!("{left} != {right}"),
        Mismatch::Collision { first, second, value } => format!("{first} and {second} both give {value}"),
        Mismatch::Unsolvable => "no solution".to_string(),
        Mismatch::Deviation(d) => format!("deviation {d:.3e}"),
    };
    format!("{} at {:?}: {m}", w.rule, w.assignment)
}

/// Six decimals, never `-0.000000`.
pub fn real(x: f64) -> String {
    let s = format!("{x:.6}");
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

pub fn complex(z: C64) -> String {
    let im = real(z.im);
    if im == "0.000000" {
        return real(z.re);
    }
    if im.starts_with('-') {
        format!("{}{}i", real(z.re), im)
    } else {
        format!("{}+{}i", real(z.re), im)
    }
}

pub fn pair((x, i): (usize, usize)) -> String {
    format!("({x},{i})")
}

pub fn set(items: &[usize]) -> String {
    if items.is_empty() {
        return "empty".to_string();
    }
    let s: Vec<String> = items.iter().map(usize::to_string).collect();
    format!("{{{}}}", s.join(", "))
}

/// Columns separated by two spaces; the first is left-aligned, the rest right-aligned.
pub fn columns(rows: &[Vec<String>]) -> Vec<String> {
    let width = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> =
        (0..width).map(|c| rows.iter().filter_map(|r| r.get(c)).map(String::len).max().unwrap_or(0)).collect();
    rows.iter()
        .map(|r| {
            let cells: Vec<String> = r.iter().enumerate().map(|(c, s)| if c == 0 { format!("{s:<w$}", w = widths[c]) } else { format!("{s:>w$}", w = widths[c]) }).collect();
            format!("  {}", cells.join("  ")).trim_end().to_string()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_negative_zero() {
        assert_eq!(real(-1e-12), "0.000000");
        assert_eq!(real(-0.5), "-0.500000");
        assert_eq!(complex(C64::new(-0.5, -0.8660254037844386)), "-0.500000-0.866025i");
        assert_eq!(complex(C64::new(1.0, -1e-13)), "1.000000");
    }
}
