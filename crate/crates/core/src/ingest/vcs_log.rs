//! Adapter for plain-text commit logs.
//!
//! Input is a sequence of blank-line separated blocks:
//!
//! ```text
//! commit r1042
//! author jsmith
//! date 2009-03-01T10:00:00Z
//! message fix for bug 2042\nsecond line
//! M	plugin/src/eu/geclipse/core/GridModel.java
//! A	plugin/src/eu/geclipse/core/GridRoot.java
//! ```
//!
//! The message is a single line with `\n`, `\t`, `\r` and `\\` escapes.
//! File lines are `<STATUS>\t<path>`; statuses other than `A`, `M` and `D`
//! are skipped with a warning.

#![allow(clippy::tabs_in_doc_comments)]

use std::collections::HashSet;
use std::io::BufRead;

use serde::Serialize;
use thiserror::Error;

use super::{rfc3339, ChangeKind, ChangedPath, RevisionRecord};

#[derive(Debug, Error)]
pub enum AdaptError {
    #[error("line {line}: {reason}")]
    Syntax { line: usize, reason: String },
    #[error("malformed XML at byte {offset}: {reason}")]
    Xml { offset: u64, reason: String },
    #[error("issue at byte {offset} has no id")]
    MissingId { offset: u64 },
    #[error("issue {id}: {reason}")]
    Issue { id: String, reason: String },
    #[error("read failed: {0}")]
    Io(#[from] std::io::Error),
}

/// What an adapter dropped or patched while converting.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct AdapterReport {
    pub emitted: usize,
    pub dropped_empty: usize,
    pub skipped_paths: usize,
    pub warnings: Vec<String>,
}

impl AdapterReport {
    pub(crate) fn warn(&mut self, message: String) {
        self.warnings.push(message);
    }
}

#[derive(Default)]
struct Block {
    start_line: usize,
    id: Option<String>,
    author: Option<String>,
    date: Option<String>,
    message: Option<String>,
    paths: Vec<ChangedPath>,
    seen_paths: HashSet<String>,
}

pub fn unescape_message(raw: &str) -> String {
    let mut out = String::with_capacity(raw.len());
    let mut chars = raw.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('n') => out.push('\n'),
            Some('t') => out.push('\t'),
            Some('r') => out.push('\r'),
            Some('\\') => out.push('\\'),
            Some(other) => {
                out.push('\\');
                out.push(other);
            }
            None => out.push('\\'),
        }
    }
    out
}

/// Converts an exported path into canonical repository-relative form.
pub fn normalize_path(raw: &str) -> String {
    raw.replace('\\', "/")
        .split('/')
        .filter(|seg| !seg.is_empty() && *seg != ".")
        .collect::<Vec<_>>()
        .join("/")
}

/// Parses a commit log into canonical revision records.
pub fn adapt_vcs_log<R: BufRead>(
    reader: R,
) -> Result<(Vec<RevisionRecord>, AdapterReport), AdaptError> {
    let mut report = AdapterReport::default();
    let mut records = Vec::new();
    let mut ids = HashSet::new();
    let mut block: Option<Block> = None;

    let mut last_line = 0;
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = line?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if line.trim().is_empty() {
            if let Some(b) = block.take() {
                finish_block(b, &mut records, &mut ids, &mut report)?;
            }
            continue;
        }
        let current = block.get_or_insert_with(|| Block {
            start_line: line_no,
            ..Block::default()
        });
        if let Some((status, path)) = line.split_once('\t') {
            if current.id.is_none() {
                return Err(syntax(line_no, "file line before `commit` header"));
            }
            let path = normalize_path(path.trim());
            let Some(change_kind) = ChangeKind::from_status(status.trim()) else {
                report.skipped_paths += 1;
                report.warn(format!(
                    "line {line_no}: unsupported status `{}` for `{path}`, skipped",
                    status.trim()
                ));
                continue;
            };
            if path.is_empty() {
                report.skipped_paths += 1;
                report.warn(format!("line {line_no}: empty path, skipped"));
                continue;
            }
            if current.seen_paths.insert(path.clone()) {
                current.paths.push(ChangedPath { path, change_kind });
            }
            continue;
        }
        if !current.paths.is_empty() {
            return Err(syntax(line_no, "header line after file lines"));
        }
        let (key, value) = line.split_once(' ').unwrap_or((line, ""));
        if key != "commit" && current.id.is_none() {
            return Err(syntax(line_no, "block must start with `commit`"));
        }
        let slot = match key {
            "commit" => &mut current.id,
            "author" => &mut current.author,
            "date" => &mut current.date,
            "message" => &mut current.message,
            other => return Err(syntax(line_no, &format!("unknown header `{other}`"))),
        };
        if slot.is_some() {
            return Err(syntax(line_no, &format!("repeated `{key}` header")));
        }
        *slot = Some(value.to_string());
    }
    if let Some(b) = block.take() {
        finish_block(b, &mut records, &mut ids, &mut report).map_err(|e| match e {
            AdaptError::Syntax { reason, .. } => syntax(last_line, &reason),
            other => other,
        })?;
    }
    report.emitted = records.len();
    Ok((records, report))
}

fn syntax(line: usize, reason: &str) -> AdaptError {
    AdaptError::Syntax {
        line,
        reason: reason.to_string(),
    }
}

fn finish_block(
    block: Block,
    records: &mut Vec<RevisionRecord>,
    ids: &mut HashSet<String>,
    report: &mut AdapterReport,
) -> Result<(), AdaptError> {
    let line = block.start_line;
    let id = block.id.filter(|s| !s.trim().is_empty());
    let id = id.ok_or_else(|| syntax(line, "missing commit id"))?.trim().to_string();
    let author = block
        .author
        .filter(|a| !a.trim().is_empty())
        .ok_or_else(|| syntax(line, &format!("commit {id}: missing author")))?;
    let date = block
        .date
        .ok_or_else(|| syntax(line, &format!("commit {id}: missing date")))?;
    let timestamp =
        rfc3339::parse(date.trim()).map_err(|e| syntax(line, &format!("commit {id}: {e}")))?;
    let message = unescape_message(&block.message.unwrap_or_default());
    if !ids.insert(id.clone()) {
        return Err(syntax(line, &format!("duplicate commit id `{id}`")));
    }
    if block.paths.is_empty() {
        report.dropped_empty += 1;
        report.warn(format!("commit {id}: no usable file changes, dropped"));
        return Ok(());
    }
    records.push(RevisionRecord {
        revision_id: id,
        author,
        timestamp,
        message,
        changed_paths: block.paths,
    });
    Ok(())
}
