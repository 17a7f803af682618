use std::fmt::Write as _;
use std::str::FromStr;

use rug::Float;
use serde_json::{json, Map, Value};

use super::SumResult;
use crate::decimal::scientific;
use crate::error::{Error, Result};
use crate::formulas::TableEntry;

/// Significant digits for bounds and deviations.
const BOUND_DIGITS: usize = 6;

/// Significant digits for numeric values in markdown, where full width is unreadable.
const MD_DIGITS: usize = 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    Json,
    Csv,
    #[default]
    Md,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "md" => Ok(Format::Md),
            other => Err(Error::Parse(format!("unknown format `{other}`; use json, csv or md"))),
        }
    }
}

/// A table row together with its numeric certification.
#[derive(Clone, Debug, PartialEq)]
pub struct TableRow {
    pub entry: TableEntry,
    pub result: SumResult,
}

fn bound(x: &Float) -> String {
    scientific(x, BOUND_DIGITS)
}

fn opt_bound(x: &Option<Float>) -> Value {
    x.as_ref().map_or(Value::Null, |v| Value::String(bound(v)))
}

fn result_json(r: &SumResult, digits: usize) -> Map<String, Value> {
    let v = json!({
        "family": r.family,
        "exact": r.exact,
        "exact_text": r.exact.as_ref().map(|e| e.to_string()),
        "numeric": scientific(&r.numeric, digits),
        "terms": r.terms,
        "tail_bound": bound(&r.tail_bound),
        "error_budget": bound(&r.error_budget),
        "deviation": opt_bound(&r.deviation),
        "relative_error": opt_bound(&r.relative_error),
        "verdict": r.verdict.to_string(),
        "bound_kind": r.bound_kind.to_string(),
    });
    match v {
        Value::Object(m) => m,
        _ => unreachable!(),
    }
}

fn csv_string(header: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

fn md_cell(s: &str) -> String {
    s.replace('|', "\\|")
}

fn exact_text(r: &SumResult) -> String {
    r.exact.as_ref().map_or_else(|| "n/a".to_string(), |e| e.to_string())
}

/// Renders verification records. `digits` is the number of significant digits
/// of the numeric value in JSON and CSV.
pub fn render_results(results: &[SumResult], format: Format, digits: usize) -> String {
    match format {
        Format::Json => {
            let arr: Vec<Value> = results.iter().map(|r| Value::Object(result_json(r, digits))).collect();
            let v = if arr.len() == 1 { arr.into_iter().next().unwrap() } else { Value::Array(arr) };
            serde_json::to_string_pretty(&v).expect("serializable") + "\n"
        }
        Format::Csv => csv_string(
            &["family", "exact", "numeric", "terms", "tail_bound", "deviation", "verdict", "bound_kind"],
            results
                .iter()
                .map(|r| {
                    vec![
                        r.family.clone(),
                        r.exact.as_ref().map(|e| e.to_string()).unwrap_or_default(),
                        scientific(&r.numeric, digits),
                        r.terms.to_string(),
                        bound(&r.tail_bound),
                        r.deviation.as_ref().map(bound).unwrap_or_default(),
                        r.verdict.to_string(),
                        r.bound_kind.to_string(),
                    ]
                })
                .collect(),
        ),
        Format::Md => {
            let mut s = String::from("| family | exact | numeric | terms | tail bound | deviation | verdict | bound |\n");
            s.push_str("|---|---|---|---|---|---|---|---|\n");
            for r in results {
                let _ = writeln!(
                    s,
                    "| `{}` | {} | {} | {} | {} | {} | {} | {} |",
                    r.family,
                    md_cell(&exact_text(r)),
                    scientific(&r.numeric, digits.min(MD_DIGITS)),
                    r.terms,
                    bound(&r.tail_bound),
                    r.deviation.as_ref().map(bound).unwrap_or_else(|| "n/a".into()),
                    r.verdict,
                    r.bound_kind
                );
            }
            s
        }
    }
}

/// Renders a recomputed table with its certification column.
pub fn render_table(table: u32, rows: &[TableRow], format: Format, digits: usize) -> String {
    match format {
        Format::Json => {
            let arr: Vec<Value> = rows
                .iter()
                .map(|r| {
                    let mut m = match serde_json::to_value(&r.entry).expect("serializable") {
                        Value::Object(m) => m,
                        _ => unreachable!(),
                    };
                    let mut cert = result_json(&r.result, digits);
                    cert.remove("family");
                    cert.remove("exact");
                    cert.remove("exact_text");
                    m.insert("certification".into(), Value::Object(cert));
                    Value::Object(m)
                })
                .collect();
            serde_json::to_string_pretty(&Value::Array(arr)).expect("serializable") + "\n"
        }
        Format::Csv => csv_string(
            &["table", "row", "family", "params", "exact", "paper_printed", "match", "numeric", "tail_bound", "verdict", "bound_kind", "note"],
            rows.iter()
                .map(|r| {
                    vec![
                        table.to_string(),
                        r.entry.row.to_string(),
                        r.entry.family.to_string(),
                        r.entry.params.clone(),
                        r.entry.exact.to_string(),
                        r.entry.paper_printed.to_string(),
                        r.entry.matches.to_string(),
                        scientific(&r.result.numeric, digits),
                        bound(&r.result.tail_bound),
                        r.result.verdict.to_string(),
                        r.result.bound_kind.to_string(),
                        r.entry.note.clone().unwrap_or_default(),
                    ]
                })
                .collect(),
        ),
        Format::Md => {
            let mut s = format!("## Table {table}\n\n");
            s.push_str("| row | params | series | exact | printed | match | numeric | tail bound | verdict |\n");
            s.push_str("|---|---|---|---|---|---|---|---|---|\n");
            let mut notes = Vec::new();
            for r in rows {
                let e = &r.entry;
                let _ = writeln!(
                    s,
                    "| {} | {} | {} | {} | {} | {} | {} | {} | {} |",
                    e.row,
                    md_cell(&e.params),
                    md_cell(&e.family.notation()),
                    md_cell(&e.exact.to_string()),
                    md_cell(&e.paper_printed.to_string()),
                    if e.matches { "yes" } else { "**no**" },
                    scientific(&r.result.numeric, digits.min(MD_DIGITS)),
                    bound(&r.result.tail_bound),
                    r.result.verdict
                );
                if let Some(n) = &e.note {
                    notes.push(format!("- row {}: {}", e.row, n));
                }
            }
            if !notes.is_empty() {
                s.push_str("\nNotes:\n\n");
                for n in notes {
                    s.push_str(&n);
                    s.push('\n');
                }
            }
            s
        }
    }
}
