//! Canonical JSON Lines records for revisions and tasks, plus adapters for
//! raw exports.

pub mod identity;
pub mod issue_xml;
pub mod vcs_log;

use std::collections::HashSet;
use std::io::{BufRead, Write};

use chrono::{DateTime, SecondsFormat, Utc};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("line {line}: duplicate id `{id}`")]
    DuplicateId { line: usize, id: String },
    #[error("read failed: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChangeKind {
    Added,
    Modified,
    Deleted,
}

impl ChangeKind {
    /// Maps a VCS status letter (`A`, `M`, `D`).
    pub fn from_status(letter: &str) -> Option<Self> {
        match letter {
            "A" => Some(Self::Added),
            "M" => Some(Self::Modified),
            "D" => Some(Self::Deleted),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChangedPath {
    pub path: String,
    pub change_kind: ChangeKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RevisionRecord {
    pub revision_id: String,
    pub author: String,
    #[serde(with = "rfc3339")]
    pub timestamp: DateTime<Utc>,
    pub message: String,
    pub changed_paths: Vec<ChangedPath>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommentRecord {
    pub author: String,
    #[serde(with = "rfc3339")]
    pub timestamp: DateTime<Utc>,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskRecord {
    pub task_id: String,
    pub external_id: String,
    pub assignee: String,
    pub summary: String,
    pub status: String,
    pub comments: Vec<CommentRecord>,
}

/// RFC 3339 timestamps, written in UTC with a `Z` suffix.
pub mod rfc3339 {
    use super::*;

    pub fn serialize<S: Serializer>(ts: &DateTime<Utc>, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format(ts))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<DateTime<Utc>, D::Error> {
        let raw = String::deserialize(d)?;
        parse(&raw).map_err(serde::de::Error::custom)
    }

    pub fn format(ts: &DateTime<Utc>) -> String {
        ts.to_rfc3339_opts(SecondsFormat::AutoSi, true)
    }

    pub fn parse(raw: &str) -> Result<DateTime<Utc>, String> {
        DateTime::parse_from_rfc3339(raw)
            .map(|t| t.with_timezone(&Utc))
            .map_err(|e| format!("invalid RFC 3339 timestamp `{raw}`: {e}"))
    }
}

/// Checks a repository-relative path: non-empty, `/`-separated, no leading `/`.
pub(crate) fn check_path(path: &str) -> Result<(), String> {
    if path.is_empty() {
        return Err("empty path".into());
    }
    if path.starts_with('/') {
        return Err(format!("path `{path}` has a leading '/'"));
    }
    if path.contains('\\') {
        return Err(format!("path `{path}` uses '\\' separators"));
    }
    if path.split('/').any(str::is_empty) {
        return Err(format!("path `{path}` has an empty segment"));
    }
    Ok(())
}

impl RevisionRecord {
    pub fn validate(&self) -> Result<(), String> {
        if self.revision_id.is_empty() {
            return Err("revision_id is empty".into());
        }
        if self.author.trim().is_empty() {
            return Err(format!("revision `{}` has an empty author", self.revision_id));
        }
        if self.changed_paths.is_empty() {
            return Err(format!("revision `{}` has no changed paths", self.revision_id));
        }
        for changed in &self.changed_paths {
            check_path(&changed.path)?;
        }
        Ok(())
    }
}

impl TaskRecord {
    pub fn validate(&self) -> Result<(), String> {
        if self.task_id.is_empty() {
            return Err("task_id is empty".into());
        }
        if self.external_id.is_empty() {
            return Err(format!("task `{}` has an empty external_id", self.task_id));
        }
        Ok(())
    }

    fn sort_comments(&mut self) {
        // stable: equal timestamps keep export order
        self.comments.sort_by_key(|c| c.timestamp);
    }
}

fn parse_lines<T, R>(
    reader: R,
    mut prepare: impl FnMut(&mut T) -> Result<(), String>,
    id_of: impl Fn(&T) -> &str,
) -> Result<Vec<T>, ParseError>
where
    T: for<'de> Deserialize<'de>,
    R: BufRead,
{
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| match e.kind() {
            std::io::ErrorKind::InvalidData => ParseError::Malformed {
                line: line_no,
                reason: "not valid UTF-8".into(),
            },
            _ => ParseError::Io(e),
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let mut record: T = serde_json::from_str(&line).map_err(|e| ParseError::Malformed {
            line: line_no,
            reason: e.to_string(),
        })?;
        prepare(&mut record).map_err(|reason| ParseError::Malformed { line: line_no, reason })?;
        let id = id_of(&record).to_string();
        if !seen.insert(id.clone()) {
            return Err(ParseError::DuplicateId { line: line_no, id });
        }
        out.push(record);
    }
    Ok(out)
}

/// Reads canonical revision JSONL. Blank lines are ignored.
pub fn parse_revisions<R: BufRead>(reader: R) -> Result<Vec<RevisionRecord>, ParseError> {
    parse_lines(reader, |r: &mut RevisionRecord| r.validate(), |r| &r.revision_id)
}

/// Reads canonical task JSONL. Comments are re-sorted by timestamp.
pub fn parse_tasks<R: BufRead>(reader: R) -> Result<Vec<TaskRecord>, ParseError> {
    parse_lines(
        reader,
        |t: &mut TaskRecord| {
            t.validate()?;
            t.sort_comments();
            Ok(())
        },
        |t| &t.task_id,
    )
}

/// Writes one JSON object per line.
pub fn write_jsonl<T: Serialize, W: Write>(mut out: W, records: &[T]) -> std::io::Result<()> {
    for record in records {
        serde_json::to_writer(&mut out, record)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const REV: &str = r#"{"revision_id":"r1","author":"jsmith","timestamp":"2009-03-01T10:00:00Z","message":"fix for bug 2042","changed_paths":[{"path":"src/eu/Foo.java","change_kind":"modified"},{"path":"docs/readme.txt","change_kind":"added"}]}"#;

    #[test]
    fn one_revision_with_two_paths() {
        let recs = parse_revisions(REV.as_bytes()).unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].changed_paths.len(), 2);
        assert_eq!(recs[0].changed_paths[1].change_kind, ChangeKind::Added);
    }

    #[test]
    fn empty_stream() {
        assert!(parse_revisions("".as_bytes()).unwrap().is_empty());
        assert!(parse_tasks("\n\n".as_bytes()).unwrap().is_empty());
    }

    #[test]
    fn missing_message_reports_line() {
        let input = format!(
            "{REV}\n{}\n",
            r#"{"revision_id":"r2","author":"a","timestamp":"2009-03-01T10:00:00Z","changed_paths":[{"path":"a","change_kind":"added"}]}"#
        );
        match parse_revisions(input.as_bytes()) {
            Err(ParseError::Malformed { line, reason }) => {
                assert_eq!(line, 2);
                assert!(reason.contains("message"), "{reason}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn duplicate_revision_id() {
        let input = format!("{REV}\n{REV}\n");
        match parse_revisions(input.as_bytes()) {
            Err(ParseError::DuplicateId { id, line }) => {
                assert_eq!(id, "r1");
                assert_eq!(line, 2);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_paths_and_timestamps() {
        for bad in [
            REV.replace("src/eu/Foo.java", "/src/eu/Foo.java"),
            REV.replace("src/eu/Foo.java", "src\\\\eu\\\\Foo.java"),
            REV.replace("2009-03-01T10:00:00Z", "yesterday"),
            REV.replace(r#"{"path":"src/eu/Foo.java","change_kind":"modified"},{"path":"docs/readme.txt","change_kind":"added"}"#, ""),
            REV.replace("\"modified\"", "\"renamed\""),
        ] {
            assert!(
                matches!(parse_revisions(bad.as_bytes()), Err(ParseError::Malformed { line: 1, .. })),
                "{bad}"
            );
        }
    }

    #[test]
    fn comments_are_sorted() {
        let line = r#"{"task_id":"t1","external_id":"2042","assignee":"jsmith","summary":"NPE","status":"NEW","comments":[
            {"author":"a","timestamp":"2009-03-03T00:00:00Z","text":"third"},
            {"author":"b","timestamp":"2009-03-01T00:00:00Z","text":"first"},
            {"author":"c","timestamp":"2009-03-02T00:00:00+02:00","text":"second"}]}"#
            .replace('\n', "");
        let tasks = parse_tasks(line.as_bytes()).unwrap();
        let texts: Vec<_> = tasks[0].comments.iter().map(|c| c.text.as_str()).collect();
        assert_eq!(texts, ["first", "second", "third"]);
    }

    #[test]
    fn task_without_comments_and_duplicate_ids() {
        let line = r#"{"task_id":"t1","external_id":"1","assignee":"","summary":"","status":"","comments":[]}"#;
        let tasks = parse_tasks(line.as_bytes()).unwrap();
        assert!(tasks[0].comments.is_empty());
        let twice = format!("{line}\n{line}");
        assert!(matches!(
            parse_tasks(twice.as_bytes()),
            Err(ParseError::DuplicateId { ref id, .. }) if id == "t1"
        ));
    }

    #[test]
    fn invalid_utf8_is_a_line_error() {
        let mut bytes = REV.as_bytes().to_vec();
        bytes.push(b'\n');
        bytes.extend_from_slice(&[0xff, 0xfe, b'\n']);
        assert!(matches!(
            parse_revisions(&bytes[..]),
            Err(ParseError::Malformed { line: 2, .. })
        ));
    }
}
