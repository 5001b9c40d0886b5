//! The checked-in fixture corpus and its frozen expected outputs.

use std::fs;
use std::io::BufReader;
use std::path::PathBuf;

use devctx_core::ingest::issue_xml::adapt_issue_export;
use devctx_core::ingest::vcs_log::adapt_vcs_log;
use devctx_core::{EntityKind, IdentityMap};
use serde_json::Value;

use crate::corpus::Corpus;

/// Context views frozen for the fixture, as `(kind, id)`.
pub const FOCI: [(EntityKind, &str); 3] = [
    (EntityKind::Resource, "plugin/src/eu/geclipse/core/GridModel.java"),
    (EntityKind::Task, "2042"),
    (EntityKind::Developer, "dev:alice"),
];

/// Section size used for the frozen views.
pub const K: usize = 5;

pub fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn vcs_log() -> PathBuf {
    dir().join("vcs.log")
}

pub fn issue_xml() -> PathBuf {
    dir().join("bugs.xml")
}

pub fn identity() -> PathBuf {
    dir().join("identity.json")
}

/// The fixture run through both adapters.
pub fn corpus() -> Corpus {
    let open = |p: PathBuf| BufReader::new(fs::File::open(p).expect("fixture file"));
    let (revisions, _) = adapt_vcs_log(open(vcs_log())).expect("fixture log adapts");
    let (tasks, _) = adapt_issue_export(open(issue_xml())).expect("fixture export adapts");
    let identity = IdentityMap::from_reader(open(identity())).expect("fixture identity map");
    Corpus {
        revisions,
        tasks,
        identity,
    }
}

/// File name of the frozen view for a focus.
pub fn view_file(kind: EntityKind, id: &str) -> String {
    let slug: String = id
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect();
    format!("context_{}_{slug}.json", kind.as_str())
}

pub fn expected_path(name: &str) -> PathBuf {
    dir().join("expected").join(name)
}

pub fn expected(name: &str) -> Value {
    let text = fs::read_to_string(expected_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"));
    serde_json::from_str(&text).unwrap_or_else(|e| panic!("{name}: {e}"))
}
