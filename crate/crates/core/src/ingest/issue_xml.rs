//! Adapter for Bugzilla-style XML exports.
//!
//! Recognized subset:
//!
//! ```xml
//! <bugzilla>
//!   <bug>
//!     <bug_id>2042</bug_id>
//!     <short_desc>NPE in GridModel</short_desc>
//!     <bug_status>RESOLVED</bug_status>
//!     <assigned_to name="John Smith">jsmith</assigned_to>
//!     <long_desc>
//!       <who>mary</who>
//!       <bug_when>2009-03-01 10:00:00 +0000</bug_when>
//!       <thetext>at eu.geclipse.core.GridModel.load(GridModel.java:42)</thetext>
//!     </long_desc>
//!   </bug>
//! </bugzilla>
//! ```
//!
//! Every other element is ignored. `<bug error="NotFound"/>` entries are
//! skipped with a warning.

use std::collections::HashSet;
use std::io::BufRead;

use chrono::{DateTime, NaiveDateTime, TimeZone, Utc};
use quick_xml::escape::resolve_predefined_entity;
use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;

use super::vcs_log::{AdaptError, AdapterReport};
use super::{rfc3339, CommentRecord, TaskRecord};

#[derive(Default)]
struct PartialBug {
    offset: u64,
    id: Option<String>,
    summary: Option<String>,
    status: Option<String>,
    assignee: Option<String>,
    comments: Vec<PartialComment>,
    comment: PartialComment,
}

#[derive(Default)]
struct PartialComment {
    who: Option<String>,
    when: Option<String>,
    text: Option<String>,
}

/// Parses an issue tracker XML export into canonical task records.
///
/// Comments are emitted in document order.
pub fn adapt_issue_export<R: BufRead>(
    reader: R,
) -> Result<(Vec<TaskRecord>, AdapterReport), AdaptError> {
    let mut xml = Reader::from_reader(reader);
    xml.config_mut().check_end_names = true;

    let mut report = AdapterReport::default();
    let mut tasks = Vec::new();
    let mut ids = HashSet::new();
    let mut buf = Vec::new();
    let mut stack: Vec<String> = Vec::new();
    let mut text = String::new();
    let mut bug: Option<PartialBug> = None;
    let mut skipping = false;

    let xml_err = |xml: &Reader<R>, reason: String| AdaptError::Xml {
        offset: xml.error_position(),
        reason,
    };

    loop {
        let event_start = xml.buffer_position();
        let event = xml
            .read_event_into(&mut buf)
            .map_err(|e| xml_err(&xml, e.to_string()))?;
        match event {
            Event::Start(start) => {
                let name = local_name(&start);
                if name == "bug" && bug.is_none() {
                    skipping = is_error_stub(&start, &mut report, event_start);
                    bug = Some(PartialBug {
                        offset: event_start,
                        ..PartialBug::default()
                    });
                }
                stack.push(name);
                text.clear();
            }
            Event::Empty(start) => {
                let name = local_name(&start);
                if name == "bug" {
                    is_error_stub(&start, &mut report, event_start);
                } else {
                    stack.push(name);
                    text.clear();
                    close_element(&stack, &text, bug.as_mut());
                    stack.pop();
                }
            }
            Event::Text(t) => {
                let decoded = t.xml_content().map_err(|e| xml_err(&xml, e.to_string()))?;
                text.push_str(&decoded);
            }
            Event::CData(t) => {
                let decoded = t.decode().map_err(|e| xml_err(&xml, e.to_string()))?;
                text.push_str(&decoded);
            }
            Event::GeneralRef(r) => {
                if let Some(c) = r.resolve_char_ref().map_err(|e| xml_err(&xml, e.to_string()))? {
                    text.push(c);
                } else {
                    let name = r.decode().map_err(|e| xml_err(&xml, e.to_string()))?;
                    match resolve_predefined_entity(&name) {
                        Some(value) => text.push_str(value),
                        None => {
                            return Err(AdaptError::Xml {
                                offset: event_start,
                                reason: format!("unknown entity `&{name};`"),
                            })
                        }
                    }
                }
            }
            Event::End(_) => {
                close_element(&stack, &text, bug.as_mut());
                let closed = stack.pop();
                if closed.as_deref() == Some("bug") && !stack.iter().any(|s| s == "bug") {
                    if let Some(done) = bug.take() {
                        if !skipping {
                            finish_bug(done, &mut tasks, &mut ids, &mut report)?;
                        }
                    }
                    skipping = false;
                }
                text.clear();
            }
            Event::Eof => break,
            _ => {}
        }
        buf.clear();
    }
    if let Some(open) = stack.last() {
        return Err(AdaptError::Xml {
            offset: xml.buffer_position(),
            reason: format!("unexpected end of input inside <{open}>"),
        });
    }
    report.emitted = tasks.len();
    Ok((tasks, report))
}

fn local_name(start: &BytesStart<'_>) -> String {
    String::from_utf8_lossy(start.local_name().as_ref()).into_owned()
}

fn is_error_stub(start: &BytesStart<'_>, report: &mut AdapterReport, offset: u64) -> bool {
    let error = start
        .try_get_attribute("error")
        .ok()
        .flatten()
        .map(|a| String::from_utf8_lossy(&a.value).into_owned());
    match error {
        Some(err) => {
            report.warn(format!("bug at byte {offset} carries error=\"{err}\", skipped"));
            true
        }
        None => false,
    }
}

fn close_element(stack: &[String], text: &str, bug: Option<&mut PartialBug>) {
    let Some(bug) = bug else { return };
    let Some(bug_pos) = stack.iter().rposition(|s| s == "bug") else {
        return;
    };
    let rel: Vec<&str> = stack[bug_pos + 1..].iter().map(String::as_str).collect();
    let value = || Some(text.trim().to_string());
    match rel.as_slice() {
        ["bug_id"] => bug.id = value(),
        ["short_desc"] => bug.summary = value(),
        ["bug_status"] => bug.status = value(),
        ["assigned_to"] => bug.assignee = value(),
        ["long_desc", "who"] => bug.comment.who = value(),
        ["long_desc", "bug_when"] => bug.comment.when = value(),
        ["long_desc", "thetext"] => bug.comment.text = value(),
        ["long_desc"] => {
            let c = std::mem::take(&mut bug.comment);
            bug.comments.push(c);
        }
        _ => {}
    }
}

fn finish_bug(
    bug: PartialBug,
    tasks: &mut Vec<TaskRecord>,
    ids: &mut HashSet<String>,
    report: &mut AdapterReport,
) -> Result<(), AdaptError> {
    let id = bug
        .id
        .filter(|id| !id.is_empty())
        .ok_or(AdaptError::MissingId { offset: bug.offset })?;
    if !ids.insert(id.clone()) {
        return Err(AdaptError::Issue {
            id,
            reason: "duplicate bug id".into(),
        });
    }
    let assignee = match bug.assignee {
        Some(a) => a,
        None => {
            report.warn(format!("bug {id}: no assignee, left empty"));
            String::new()
        }
    };
    let summary = bug.summary.unwrap_or_else(|| {
        report.warn(format!("bug {id}: no summary"));
        String::new()
    });
    let mut comments = Vec::with_capacity(bug.comments.len());
    for (idx, comment) in bug.comments.into_iter().enumerate() {
        let Some(when) = comment.when else {
            return Err(AdaptError::Issue {
                id,
                reason: format!("comment {idx} has no timestamp"),
            });
        };
        let timestamp = parse_tracker_time(&when, report).map_err(|reason| AdaptError::Issue {
            id: id.clone(),
            reason: format!("comment {idx}: {reason}"),
        })?;
        comments.push(CommentRecord {
            author: comment.who.unwrap_or_default(),
            timestamp,
            text: comment.text.unwrap_or_default(),
        });
    }
    tasks.push(TaskRecord {
        task_id: id.clone(),
        external_id: id,
        assignee,
        summary,
        status: bug.status.unwrap_or_default(),
        comments,
    });
    Ok(())
}

/// Accepts RFC 3339 or the tracker's `YYYY-MM-DD HH:MM[:SS] [+zzzz|TZ]` form.
/// Named zones other than UTC/GMT are treated as UTC with a warning.
pub fn parse_tracker_time(raw: &str, report: &mut AdapterReport) -> Result<DateTime<Utc>, String> {
    let raw = raw.trim();
    if let Ok(ts) = rfc3339::parse(raw) {
        return Ok(ts);
    }
    for fmt in ["%Y-%m-%d %H:%M:%S %z", "%Y-%m-%d %H:%M %z"] {
        if let Ok(ts) = DateTime::parse_from_str(raw, fmt) {
            return Ok(ts.with_timezone(&Utc));
        }
    }
    let (naive_part, zone) = match raw.rsplit_once(' ') {
        Some((head, tail)) if tail.chars().all(|c| c.is_ascii_alphabetic()) => (head, Some(tail)),
        _ => (raw, None),
    };
    for fmt in ["%Y-%m-%d %H:%M:%S", "%Y-%m-%d %H:%M"] {
        if let Ok(naive) = NaiveDateTime::parse_from_str(naive_part, fmt) {
            if let Some(zone) = zone.filter(|z| !matches!(*z, "UTC" | "GMT")) {
                report.warn(format!("timestamp `{raw}`: zone {zone} treated as UTC"));
            }
            return Ok(Utc.from_utc_datetime(&naive));
        }
    }
    Err(format!("unrecognized timestamp `{raw}`"))
}
