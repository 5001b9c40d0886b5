//! Gzip-compressed JSON snapshots with sorted keys and id-sorted arrays.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use flate2::read::GzDecoder;
use flate2::write::GzEncoder;
use flate2::Compression;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use super::{Developer, Provenance, Relation, Resource, Revision, Store, Task};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum SnapshotError {
    #[error("snapshot format version {found} is not supported (expected {expected})")]
    Incompatible { found: u64, expected: u32 },
    #[error("snapshot is corrupt: {0}")]
    Integrity(String),
    #[error("snapshot I/O failed: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Serialize)]
struct SnapshotOut<'a> {
    format_version: u32,
    provenance: &'a Provenance,
    developers: Vec<&'a Developer>,
    resources: Vec<&'a Resource>,
    revisions: Vec<&'a Revision>,
    tasks: Vec<&'a Task>,
    relations: Vec<&'a Relation>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SnapshotIn {
    #[allow(dead_code)]
    format_version: u32,
    provenance: Provenance,
    developers: Vec<Developer>,
    resources: Vec<Resource>,
    revisions: Vec<Revision>,
    tasks: Vec<Task>,
    relations: Vec<Relation>,
}

/// Recursively rebuilds objects so keys come out sorted regardless of how
/// `serde_json` orders maps.
fn sort_keys(value: Value) -> Value {
    match value {
        Value::Object(map) => {
            let mut entries: Vec<(String, Value)> = map.into_iter().collect();
            entries.sort_by(|a, b| a.0.cmp(&b.0));
            Value::Object(entries.into_iter().map(|(k, v)| (k, sort_keys(v))).collect())
        }
        Value::Array(items) => Value::Array(items.into_iter().map(sort_keys).collect()),
        other => other,
    }
}

/// Canonical uncompressed JSON of the store.
pub fn to_json(store: &Store) -> Vec<u8> {
    let (provenance, developers, resources, revisions, tasks, relations) = store.parts();
    let doc = SnapshotOut {
        format_version: FORMAT_VERSION,
        provenance,
        developers: developers.collect(),
        resources: resources.collect(),
        revisions: revisions.collect(),
        tasks: tasks.collect(),
        relations: relations.collect(),
    };
    let value = serde_json::to_value(&doc).expect("store serializes");
    serde_json::to_vec(&sort_keys(value)).expect("value serializes")
}

pub fn to_bytes(store: &Store) -> Vec<u8> {
    let json = to_json(store);
    // GzEncoder writes mtime 0, so output depends only on content
    let mut encoder = GzEncoder::new(Vec::new(), Compression::default());
    encoder.write_all(&json).expect("in-memory write");
    encoder.finish().expect("in-memory write")
}

pub fn from_bytes(bytes: &[u8]) -> Result<Store, SnapshotError> {
    let mut json = Vec::new();
    GzDecoder::new(bytes)
        .read_to_end(&mut json)
        .map_err(|e| SnapshotError::Integrity(format!("decompression failed: {e}")))?;
    from_json(&json)
}

/// Inverse of [`to_json`].
pub fn from_json(json: &[u8]) -> Result<Store, SnapshotError> {
    let value: Value = serde_json::from_slice(json)
        .map_err(|e| SnapshotError::Integrity(format!("invalid JSON: {e}")))?;
    let found = value
        .get("format_version")
        .and_then(Value::as_u64)
        .ok_or_else(|| SnapshotError::Integrity("missing format_version".into()))?;
    if found != u64::from(FORMAT_VERSION) {
        return Err(SnapshotError::Incompatible {
            found,
            expected: FORMAT_VERSION,
        });
    }
    let doc: SnapshotIn = serde_json::from_value(value)
        .map_err(|e| SnapshotError::Integrity(format!("unexpected structure: {e}")))?;
    Store::from_parts(
        doc.provenance,
        doc.developers,
        doc.resources,
        doc.revisions,
        doc.tasks,
        doc.relations,
    )
    .map_err(|e| SnapshotError::Integrity(e.to_string()))
}

/// Writes through a temporary file in the target directory and renames it
/// into place.
pub fn save_snapshot(store: &Store, path: &Path) -> Result<(), SnapshotError> {
    let bytes = to_bytes(store);
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(&bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| SnapshotError::Io(e.error))?;
    Ok(())
}

pub fn load_snapshot(path: &Path) -> Result<Store, SnapshotError> {
    from_bytes(&fs::read(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extract::MatchConfig;
    use crate::ingest::identity::IdentityMap;
    use crate::store::tests::{rev, task};
    use crate::store::{Evidence, RelationKind};

    fn sample() -> Store {
        let mut store = Store::new();
        store
            .put_entities(
                &[rev("r1", "a", &["src/x/A.java", "B.txt"]), rev("r2", "b", &["B.txt"])],
                &[task("t1", "a")],
                &IdentityMap::default(),
                &MatchConfig::default(),
            )
            .unwrap();
        store
    }

    #[test]
    fn empty_round_trip() {
        let store = Store::new();
        assert_eq!(from_bytes(&to_bytes(&store)).unwrap(), store);
    }

    #[test]
    fn round_trip_with_relations() {
        let mut store = sample();
        store
            .upsert_relation(RelationKind::Cochange, "src/x/A.java", "B.txt", Evidence::new("changed together", "revision:r1"))
            .unwrap();
        assert_eq!(store.relations().count(), 4);
        let loaded = from_bytes(&to_bytes(&store)).unwrap();
        assert_eq!(loaded, store);
        assert_eq!(to_bytes(&loaded), to_bytes(&store));
        assert_eq!(loaded.relations_at(crate::EntityKind::Resource, "B.txt", RelationKind::Cochange).count(), 1);
    }

    #[test]
    fn keys_are_sorted() {
        let json: String = String::from_utf8(to_json(&sample())).unwrap();
        let top: Vec<&str> = ["developers", "format_version", "provenance", "relations", "resources", "revisions", "tasks"].to_vec();
        let positions: Vec<usize> = top.iter().map(|k| json.find(&format!("\"{k}\":")).unwrap()).collect();
        assert!(positions.windows(2).all(|w| w[0] < w[1]), "{positions:?}");
    }

    #[test]
    fn newer_version_is_incompatible() {
        let json = to_json(&sample());
        let mut value: Value = serde_json::from_slice(&json).unwrap();
        value["format_version"] = Value::from(FORMAT_VERSION + 1);
        let mut enc = GzEncoder::new(Vec::new(), Compression::default());
        enc.write_all(&serde_json::to_vec(&value).unwrap()).unwrap();
        match from_bytes(&enc.finish().unwrap()) {
            Err(SnapshotError::Incompatible { found, expected }) => {
                assert_eq!((found, expected), (u64::from(FORMAT_VERSION) + 1, FORMAT_VERSION))
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn truncated_is_integrity_error() {
        let bytes = to_bytes(&sample());
        for cut in [bytes.len() / 2, bytes.len() - 4, 5] {
            assert!(matches!(from_bytes(&bytes[..cut]), Err(SnapshotError::Integrity(_))), "cut {cut}");
        }
    }

    #[test]
    fn dangling_relation_is_integrity_error() {
        let json = to_json(&sample());
        let mut value: Value = serde_json::from_slice(&json).unwrap();
        value["relations"][0]["target_id"] = Value::from("missing");
        let mut enc = GzEncoder::new(Vec::new(), Compression::default());
        enc.write_all(&serde_json::to_vec(&value).unwrap()).unwrap();
        assert!(matches!(from_bytes(&enc.finish().unwrap()), Err(SnapshotError::Integrity(_))));
    }

    #[test]
    fn save_and_load_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ctx.snapshot");
        let store = sample();
        save_snapshot(&store, &path).unwrap();
        save_snapshot(&store, &path).unwrap();
        assert_eq!(load_snapshot(&path).unwrap(), store);
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
