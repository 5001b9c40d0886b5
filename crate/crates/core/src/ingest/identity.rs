//! Unifies VCS author strings and issue tracker accounts into canonical
//! developer ids.
//!
//! Unmapped raw strings fall back to `auto:<trimmed lowercase raw>`. Two
//! different people who share the same raw string will collapse into one
//! fallback developer; supply an identity map entry to keep them apart.

use std::collections::{BTreeSet, HashMap};
use std::io::Read;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const FALLBACK_PREFIX: &str = "auto:";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Vcs,
    Its,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityEntry {
    pub id: String,
    #[serde(default)]
    pub vcs: BTreeSet<String>,
    #[serde(default)]
    pub its: BTreeSet<String>,
}

#[derive(Debug, Error)]
pub enum IdentityError {
    #[error("identity map is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("identity map entry {index} has an empty id")]
    EmptyId { index: usize },
    #[error("canonical id `{0}` appears more than once")]
    DuplicateId(String),
    #[error("alias `{alias}` is claimed by both `{first}` and `{second}`")]
    SharedAlias {
        alias: String,
        first: String,
        second: String,
    },
    #[error("read failed: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IdentityMap {
    entries: Vec<IdentityEntry>,
    lookup: HashMap<(Source, String), usize>,
}

impl IdentityMap {
    pub fn new(entries: Vec<IdentityEntry>) -> Result<Self, IdentityError> {
        let mut lookup = HashMap::new();
        let mut ids = BTreeSet::new();
        let mut owner: HashMap<&str, &str> = HashMap::new();
        for (index, entry) in entries.iter().enumerate() {
            if entry.id.trim().is_empty() {
                return Err(IdentityError::EmptyId { index });
            }
            if !ids.insert(entry.id.as_str()) {
                return Err(IdentityError::DuplicateId(entry.id.clone()));
            }
            let aliases = entry
                .vcs
                .iter()
                .map(|a| (Source::Vcs, a))
                .chain(entry.its.iter().map(|a| (Source::Its, a)));
            for (source, alias) in aliases {
                match owner.get(alias.as_str()) {
                    Some(first) if *first != entry.id => {
                        return Err(IdentityError::SharedAlias {
                            alias: alias.clone(),
                            first: first.to_string(),
                            second: entry.id.clone(),
                        })
                    }
                    _ => {
                        owner.insert(alias, &entry.id);
                    }
                }
                lookup.insert((source, alias.clone()), index);
            }
        }
        Ok(Self { entries, lookup })
    }

    /// Parses the JSON array form: `[{"id": .., "vcs": [..], "its": [..]}]`.
    pub fn from_reader<R: Read>(reader: R) -> Result<Self, IdentityError> {
        let entries: Vec<IdentityEntry> = serde_json::from_reader(reader)?;
        Self::new(entries)
    }

    pub fn entries(&self) -> &[IdentityEntry] {
        &self.entries
    }

    fn lookup(&self, raw: &str, source: Source) -> Option<&str> {
        self.lookup
            .get(&(source, raw.to_string()))
            .map(|&i| self.entries[i].id.as_str())
    }
}

/// Resolves a raw author/account string to a canonical developer id.
pub fn resolve_identity(raw: &str, source: Source, map: &IdentityMap) -> String {
    if let Some(id) = map.lookup(raw, source) {
        return id.to_string();
    }
    let normalized = raw.trim().to_lowercase();
    if normalized.starts_with(FALLBACK_PREFIX) {
        normalized
    } else {
        format!("{FALLBACK_PREFIX}{normalized}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn john() -> IdentityMap {
        IdentityMap::from_reader(
            r#"[{"id":"dev:john","vcs":["jsmith"],"its":["jsmith","john@example.org"]}]"#.as_bytes(),
        )
        .unwrap()
    }

    #[test]
    fn mapped_alias() {
        assert_eq!(resolve_identity("jsmith", Source::Vcs, &john()), "dev:john");
        assert_eq!(resolve_identity("jsmith", Source::Its, &john()), "dev:john");
        assert_eq!(resolve_identity("john@example.org", Source::Its, &john()), "dev:john");
    }

    #[test]
    fn alias_is_source_specific() {
        // john@example.org is only an ITS account
        assert_eq!(
            resolve_identity("john@example.org", Source::Vcs, &john()),
            "auto:john@example.org"
        );
    }

    #[test]
    fn fallback_normalizes() {
        assert_eq!(resolve_identity("J.Smith ", Source::Vcs, &john()), "auto:j.smith");
    }

    #[test]
    fn fallback_is_idempotent() {
        let map = IdentityMap::default();
        let once = resolve_identity("  Mary ", Source::Its, &map);
        assert_eq!(resolve_identity(&once, Source::Its, &map), once);
        assert_eq!(resolve_identity(&once, Source::Vcs, &map), once);
    }

    #[test]
    fn rejects_bad_maps() {
        let shared = r#"[{"id":"a","vcs":["x"]},{"id":"b","its":["x"]}]"#;
        assert!(matches!(
            IdentityMap::from_reader(shared.as_bytes()),
            Err(IdentityError::SharedAlias { .. })
        ));
        let dup = r#"[{"id":"a"},{"id":"a"}]"#;
        assert!(matches!(
            IdentityMap::from_reader(dup.as_bytes()),
            Err(IdentityError::DuplicateId(_))
        ));
        let empty = r#"[{"id":" "}]"#;
        assert!(matches!(
            IdentityMap::from_reader(empty.as_bytes()),
            Err(IdentityError::EmptyId { index: 0 })
        ));
    }
}
