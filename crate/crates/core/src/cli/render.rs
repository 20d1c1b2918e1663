//! Text, CSV, JSON and LaTeX renderers. Fractions are always written as
//! `num/den` strings.

use std::fmt::Write as _;

use clap::ValueEnum;
use serde_json::{json, Value};

use crate::classification::AgeOneCatalogue;
use crate::enumeration::PrimitiveCatalogue;
use crate::report::VerificationReport;
use crate::types::AutType;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum RenderFormat {
    #[default]
    Text,
    Csv,
    Json,
    Latex,
}

fn entry_strings(t: &AutType) -> Vec<String> {
    t.entries()
        .iter()
        .map(|x| format!("{}/{}", x.num(), x.den()))
        .collect()
}

fn csv_entries(t: &AutType) -> String {
    format!("\"{}\"", entry_strings(t).join(";"))
}

fn latex_entries(t: &AutType) -> String {
    t.to_string()
}

pub fn render_type(t: &AutType) -> String {
    if t.is_empty() {
        "()".into()
    } else {
        t.to_string()
    }
}

pub fn primitives(cat: &PrimitiveCatalogue, format: RenderFormat) -> String {
    let mut s = String::new();
    match format {
        RenderFormat::Text => {
            writeln!(
                s,
                "{:>3}  {:>3}  {:<28}  weight",
                "#", "n", "primitive type"
            )
            .unwrap();
            for r in cat.iter() {
                writeln!(
                    s,
                    "{:>3}  {:>3}  {:<28}  {}",
                    r.index,
                    r.n,
                    r.primitive.base().to_string(),
                    r.weight
                )
                .unwrap();
            }
            writeln!(s, "{} primitive types", cat.len()).unwrap();
        }
        RenderFormat::Csv => {
            s.push_str("index,n,entries,weight\n");
            for r in cat.iter() {
                writeln!(
                    s,
                    "{},{},{},{}",
                    r.index,
                    r.n,
                    csv_entries(r.primitive.base()),
                    r.weight
                )
                .unwrap();
            }
        }
        RenderFormat::Json => {
            let rows: Vec<Value> = cat
                .iter()
                .map(|r| {
                    json!({
                        "index": r.index,
                        "n": r.n,
                        "entries": entry_strings(r.primitive.base()),
                        "weight": r.weight.to_string(),
                        "note": Value::Null,
                    })
                })
                .collect();
            s = serde_json::to_string_pretty(&json!({ "rows": rows })).unwrap();
            s.push('\n');
        }
        RenderFormat::Latex => {
            s.push_str("\\begin{tabular}{|l|c|c|c|}\n\\hline\n");
            s.push_str("\\#& n & \\text{primitive types} &  \\text{weight}\\\\\\hline\n");
            let mut last_n = None;
            let rows = cat.rows();
            for (i, r) in rows.iter().enumerate() {
                let n = if last_n == Some(r.n) {
                    String::new()
                } else {
                    r.n.to_string()
                };
                last_n = Some(r.n);
                let end_group = rows.get(i + 1).is_none_or(|next| next.n != r.n);
                writeln!(
                    s,
                    "{}& {} & {} & {}\\\\{}",
                    r.index,
                    n,
                    latex_entries(r.primitive.base()),
                    r.weight,
                    if end_group { "\\hline" } else { "" }
                )
                .unwrap();
            }
            s.push_str("\\end{tabular}\n");
        }
    }
    s
}

pub fn age_one(cat: &AgeOneCatalogue, format: RenderFormat) -> String {
    let mut s = String::new();
    let note = |r: &crate::classification::AgeOneRow| r.table_note.clone().unwrap_or_default();
    match format {
        RenderFormat::Text => {
            writeln!(
                s,
                "{:>3}  {:>3}  {:<34}  {:<18}  applicable",
                "#", "n", "type", "note"
            )
            .unwrap();
            for r in &cat.rows {
                let applicable: Vec<String> = r.applicable.iter().map(|x| x.to_string()).collect();
                let applicable = match &r.classify_error {
                    Some(e) => format!("error: {e}"),
                    None => applicable.join("; "),
                };
                writeln!(
                    s,
                    "{:>3}  {:>3}  {:<34}  {:<18}  {}",
                    r.index,
                    r.n,
                    r.ty.to_string(),
                    note(r),
                    applicable
                )
                .unwrap();
            }
            writeln!(s, "{} types of weight 1", cat.len()).unwrap();
        }
        RenderFormat::Csv => {
            s.push_str("index,n,entries,weight,note\n");
            for r in &cat.rows {
                let tag = r.note.map(|n| n.tag()).unwrap_or_default();
                writeln!(
                    s,
                    "{},{},{},{},{}",
                    r.index,
                    r.n,
                    csv_entries(&r.ty),
                    r.weight,
                    tag
                )
                .unwrap();
            }
        }
        RenderFormat::Json => {
            let rows: Vec<Value> = cat
                .rows
                .iter()
                .map(|r| {
                    json!({
                        "index": r.index,
                        "n": r.n,
                        "entries": entry_strings(&r.ty),
                        "weight": r.weight.to_string(),
                        "note": r.note.map(|n| n.tag()),
                        "table_row": r.table_row,
                        "monomials": r.monomials.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
                        "applicable": r.applicable.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                    })
                })
                .collect();
            s = serde_json::to_string_pretty(&json!({ "rows": rows })).unwrap();
            s.push('\n');
        }
        RenderFormat::Latex => {
            s.push_str("\\begin{tabular}{|c|c|c|c|}\n\\hline\n");
            s.push_str("\\#&  n & \\text{types} &  \\text{notes}\\\\\\hline\n");
            let mut last_n = None;
            for (i, r) in cat.rows.iter().enumerate() {
                let n = if last_n == Some(r.n) {
                    String::new()
                } else {
                    r.n.to_string()
                };
                last_n = Some(r.n);
                let end_group = cat.rows.get(i + 1).is_none_or(|next| next.n != r.n);
                writeln!(
                    s,
                    "{}& {} & {} & {}\\\\{}",
                    r.index,
                    n,
                    latex_entries(&r.ty),
                    r.note.map(|n| n.latex()).unwrap_or_default(),
                    if end_group { "\\hline" } else { "" }
                )
                .unwrap();
            }
            s.push_str("\\end{tabular}\n");
        }
    }
    s
}

pub fn reports(reports: &[VerificationReport], format: RenderFormat, single: bool) -> String {
    let mut s = String::new();
    match format {
        RenderFormat::Text => {
            for r in reports {
                write!(s, "{r}").unwrap();
            }
        }
        RenderFormat::Csv => {
            s.push_str("subject,status,expected_count,found_count,mismatches\n");
            for r in reports {
                writeln!(
                    s,
                    "{},{},{},{},{}",
                    r.subject(),
                    r.status(),
                    r.expected_count(),
                    r.found_count(),
                    r.mismatches().len()
                )
                .unwrap();
            }
        }
        RenderFormat::Json => {
            s = if single && reports.len() == 1 {
                serde_json::to_string_pretty(&reports[0])
            } else {
                serde_json::to_string_pretty(reports)
            }
            .unwrap();
            s.push('\n');
        }
        RenderFormat::Latex => {
            s.push_str("\\begin{tabular}{|l|c|c|c|}\n\\hline\n");
            s.push_str("subject & status & expected & found\\\\\\hline\n");
            for r in reports {
                writeln!(
                    s,
                    "{} & {} & {} & {}\\\\\\hline",
                    r.subject(),
                    r.status(),
                    r.expected_count(),
                    r.found_count()
                )
                .unwrap();
            }
            s.push_str("\\end{tabular}\n");
        }
    }
    s
}
