//! Output records and their JSON, CSV and pretty renderings.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;
use serde_json::Value;

use crate::bounds::BoundResult;
use crate::search::SearchResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    Json,
    Csv,
    #[default]
    Pretty,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "pretty" => Ok(Format::Pretty),
            other => Err(format!("unknown format '{other}' (json, csv, pretty)")),
        }
    }
}

/// One output row. Absent fields are omitted from JSON and left empty in CSV.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Record {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(rename = "A_n", skip_serializing_if = "Option::is_none")]
    pub a_n: Option<f64>,
    #[serde(rename = "A_2n1", skip_serializing_if = "Option::is_none")]
    pub a_2n1: Option<f64>,
    #[serde(rename = "C_n", skip_serializing_if = "Option::is_none")]
    pub c_n: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub regime: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theorem: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub best_modulus: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gap: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extremal: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub re: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub im: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modulus: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seeded_modulus: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub starts_used: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub converged: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violations: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measure: Option<String>,
}

/// Column order shared by CSV and pretty output.
pub const KEYS: &[&str] = &[
    "alpha",
    "lambda",
    "n",
    "A_n",
    "A_2n1",
    "C_n",
    "regime",
    "bound",
    "theorem",
    "best_modulus",
    "gap",
    "extremal",
    "re",
    "im",
    "modulus",
    "seeded_modulus",
    "starts_used",
    "iterations",
    "converged",
    "violations",
    "measure",
];

impl Record {
    pub fn from_bound(b: &BoundResult) -> Self {
        Self {
            alpha: Some(b.alpha),
            lambda: Some(b.lambda),
            n: Some(b.n),
            a_n: Some(b.a_n),
            a_2n1: Some(b.a_2n1),
            c_n: Some(b.c_n),
            regime: Some(b.regime.to_string()),
            bound: Some(b.value),
            theorem: Some(b.theorem_tag.clone()),
            extremal: Some(b.extremal.to_string()),
            ..Default::default()
        }
    }

    pub fn from_search(bound: &BoundResult, r: &SearchResult) -> Self {
        Self {
            best_modulus: Some(r.best_modulus),
            gap: Some(r.gap),
            seeded_modulus: Some(r.seeded_modulus),
            starts_used: Some(r.starts_used),
            iterations: Some(r.iterations_total),
            converged: Some(r.converged),
            violations: Some(r.violations),
            measure: Some(r.best_measure.to_json()),
            ..Self::from_bound(bound)
        }
    }

    fn to_map(&self) -> serde_json::Map<String, Value> {
        match serde_json::to_value(self).expect("records serialize") {
            Value::Object(map) => map,
            _ => unreachable!("a struct serializes to an object"),
        }
    }
}

/// Decimal with 17 significant digits, trailing zeros trimmed; parses back
/// to the same `f64`.
pub fn fmt_num(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".into();
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-5..=16).contains(&exp) {
        return format!("{x:.16e}");
    }
    let decimals = (16 - exp).max(0) as usize;
    let mut s = format!("{x:.decimals$}");
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    s
}

/// `p/q` with `q ≤ 64` when `x` is that rational to within rounding.
pub fn as_rational(x: f64) -> Option<(i64, u64)> {
    if !x.is_finite() || x.abs() > 1e12 {
        return None;
    }
    (1..=64u64).find_map(|q| {
        let p = (x * q as f64).round();
        ((p / q as f64 - x).abs() <= 1e-12 * x.abs().max(1.0)).then_some((p as i64, q))
    })
}

fn pretty_num(x: f64) -> String {
    match as_rational(x) {
        Some((p, 1)) => p.to_string(),
        Some((p, q)) => format!("{} ({p}/{q})", fmt_num(x)),
        None => fmt_num(x),
    }
}

fn cell(v: &Value, pretty: bool) -> String {
    match v {
        Value::Number(num) => match (num.as_u64(), num.as_i64()) {
            (Some(u), _) => u.to_string(),
            (_, Some(i)) => i.to_string(),
            _ => {
                let x = num.as_f64().unwrap_or(f64::NAN);
                if pretty {
                    pretty_num(x)
                } else {
                    fmt_num(x)
                }
            }
        },
        Value::String(s) => s.clone(),
        Value::Bool(b) => b.to_string(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn present_keys(maps: &[serde_json::Map<String, Value>]) -> Vec<&'static str> {
    KEYS.iter()
        .copied()
        .filter(|k| maps.iter().any(|m| m.contains_key(*k)))
        .collect()
}

pub fn render(records: &[Record], format: Format) -> String {
    match format {
        Format::Json => render_json(records),
        Format::Csv => render_csv(records),
        Format::Pretty => render_pretty(records),
    }
}

pub fn render_json(records: &[Record]) -> String {
    let mut s = serde_json::to_string_pretty(records).expect("records serialize");
    s.push('\n');
    s
}

pub fn render_csv(records: &[Record]) -> String {
    let maps: Vec<_> = records.iter().map(Record::to_map).collect();
    let keys = present_keys(&maps);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&keys).expect("in-memory write");
    for m in &maps {
        let row: Vec<String> = keys
            .iter()
            .map(|k| m.get(*k).map(|v| cell(v, false)).unwrap_or_default())
            .collect();
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

pub fn render_pretty(records: &[Record]) -> String {
    let maps: Vec<_> = records.iter().map(Record::to_map).collect();
    let keys: Vec<&str> = present_keys(&maps)
        .into_iter()
        .filter(|k| *k != "measure")
        .collect();
    let rows: Vec<Vec<String>> = maps
        .iter()
        .map(|m| {
            keys.iter()
                .map(|k| m.get(*k).map(|v| cell(v, true)).unwrap_or_default())
                .collect()
        })
        .collect();
    let widths: Vec<usize> = keys
        .iter()
        .enumerate()
        .map(|(i, k)| {
            rows.iter()
                .map(|r| r[i].chars().count())
                .chain([k.len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    let line = |cells: Vec<&str>, out: &mut String| {
        let parts: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        let _ = writeln!(out, "{}", parts.join("  ").trim_end());
    };
    line(keys.clone(), &mut out);
    for r in &rows {
        line(r.iter().map(String::as_str).collect(), &mut out);
    }
    for m in &maps {
        if let Some(Value::String(measure)) = m.get("measure") {
            let _ = writeln!(out, "measure: {measure}");
        }
    }
    out
}
