//! Plain-text tables for terminal output. JSON output is the stable format;
//! these are only for reading.

use devctx_core::query::ContextEntry;
use devctx_core::{ContextView, EntityKind, ExtractionReport};
use serde_json::Value;

const MAX_CELL: usize = 60;

fn cell(text: &str) -> String {
    if text.chars().count() <= MAX_CELL {
        text.to_string()
    } else {
        let head: String = text.chars().take(MAX_CELL - 3).collect();
        format!("{head}...")
    }
}

/// Left-aligned columns, except columns listed in `right`.
fn table(header: &[&str], rows: &[Vec<String>], right: &[usize]) -> String {
    let rows: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(|c| cell(c)).collect()).collect();
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in &rows {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if right.contains(&i) {
                    format!("{c:>w$}", w = widths[i])
                } else {
                    format!("{c:<w$}", w = widths[i])
                }
            })
            .collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(header.to_vec());
    for row in &rows {
        out += &line(row.iter().map(String::as_str).collect());
    }
    out
}

const RELATION_ROWS: [(&str, &str); 5] = [
    ("Resource/Task (summary)", "resource_task_summary"),
    ("Resource/Task (comments)", "resource_task_comment"),
    ("Task/Revision", "task_revision"),
    ("Co-change", "cochange"),
    ("Developer proximity", "dev_proximity"),
];

pub fn report(report: &ExtractionReport) -> String {
    let value = serde_json::to_value(report).expect("report serializes");
    relation_table(&value) + &format!("config {}\n", report.config_hash)
}

fn relation_table(value: &Value) -> String {
    let rows: Vec<Vec<String>> = RELATION_ROWS
        .iter()
        .map(|(label, key)| vec![label.to_string(), value[key].to_string()])
        .collect();
    table(&["relation", "count"], &rows, &[1])
}

pub fn stats(value: &Value) -> String {
    let mut out = relation_table(value);
    out.push('\n');
    let mut rows = Vec::new();
    for key in ["developers", "resources", "revisions", "tasks"] {
        rows.push(vec![key.to_string(), value["entities"][key].to_string()]);
    }
    for key in ["authored_revision", "assigned_task"] {
        rows.push(vec![key.to_string(), value["explicit"][key].to_string()]);
    }
    out += &table(&["entity", "count"], &rows, &[1]);
    let prov = &value["provenance"];
    out += &format!(
        "\ncreated {}  tool {}  config {}\n",
        prov["created_at"].as_str().unwrap_or_default(),
        prov["tool_version"].as_str().unwrap_or_default(),
        prov["config_hash"].as_str().unwrap_or_default(),
    );
    out
}

fn section(title: &str, entries: &[ContextEntry]) -> String {
    let mut out = format!("{title} ({})\n", entries.len());
    if entries.is_empty() {
        return out;
    }
    let rows: Vec<Vec<String>> = entries
        .iter()
        .map(|e| {
            let kinds: Vec<&str> = e.kinds.iter().map(|k| k.as_str()).collect();
            vec![
                format!("{:.2}", e.score),
                e.label.clone(),
                kinds.join(","),
                e.evidence.first().cloned().unwrap_or_default(),
            ]
        })
        .collect();
    out += &table(&["score", "entry", "kinds", "evidence"], &rows, &[0]);
    out
}

pub fn view(view: &ContextView) -> String {
    let mut out = format!("context of {} {}  (k = {})\n\n", view.focus.kind, view.focus.id, view.k);
    out += &section("developers", view.section(EntityKind::Developer));
    out.push('\n');
    out += &section("resources", view.section(EntityKind::Resource));
    out.push('\n');
    out += &section("tasks", view.section(EntityKind::Task));
    out
}

pub fn counts(rows: &[(&str, usize)]) -> String {
    let rows: Vec<Vec<String>> = rows.iter().map(|(k, n)| vec![k.to_string(), n.to_string()]).collect();
    table(&["added", "count"], &rows, &[1])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn columns_align_and_cap() {
        let long = "x".repeat(100);
        let out = table(&["a", "n"], &[vec![long, "7".into()], vec!["b".into(), "12".into()]], &[1]);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[1].len(), MAX_CELL + 2 + 2);
        assert!(lines[1].contains("..."));
        assert!(lines[2].ends_with("12"));
        assert!(lines[1].ends_with(" 7"));
    }
}
