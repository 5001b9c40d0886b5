//! In-memory entity and relation store.
//!
//! Entities are kept in id-ordered maps so iteration (and therefore
//! serialization and extraction) is deterministic. Secondary indexes are
//! rebuilt from the maps and never serialized.

mod model;
pub mod snapshot;

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet, HashMap};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use model::{
    Change, Comment, Developer, EntityKind, Evidence, Relation, RelationKey, RelationKind,
    Resource, Revision, Task,
};

use crate::extract::names::derive_resource_names;
use crate::extract::MatchConfig;
use crate::ingest::identity::{resolve_identity, IdentityMap, Source};
use crate::ingest::vcs_log::normalize_path;
use crate::ingest::{RevisionRecord, TaskRecord};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StoreError {
    #[error("unknown {kind} `{id}`")]
    UnknownEndpoint { kind: EntityKind, id: String },
    #[error("{kind} relation cannot connect `{id}` to itself")]
    SelfEdge { kind: RelationKind, id: String },
    #[error("{kind} `{id}` already exists with different content")]
    Conflict { kind: EntityKind, id: String },
    #[error("invalid record: {0}")]
    InvalidRecord(String),
    #[error("integrity violation: {0}")]
    Integrity(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    /// Latest instant seen in the corpus, so identical inputs give identical snapshots.
    #[serde(with = "crate::ingest::rfc3339")]
    pub created_at: DateTime<Utc>,
    pub tool_version: String,
    pub config_hash: String,
    /// Relation kinds that extraction has populated.
    pub extracted: BTreeSet<RelationKind>,
}

impl Default for Provenance {
    fn default() -> Self {
        Self {
            created_at: DateTime::<Utc>::UNIX_EPOCH,
            tool_version: crate::TOOL_VERSION.to_string(),
            config_hash: String::new(),
            extracted: BTreeSet::new(),
        }
    }
}

/// Entities newly added by one `put_entities` call.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct IngestReport {
    pub developers: usize,
    pub resources: usize,
    pub revisions: usize,
    pub tasks: usize,
    pub relations: usize,
}

#[derive(Debug, Clone, Default)]
struct Index {
    by_endpoint: HashMap<(EntityKind, RelationKind), HashMap<String, Vec<RelationKey>>>,
    revisions_by_resource: HashMap<String, Vec<String>>,
}

#[derive(Debug, Clone, Default)]
pub struct Store {
    developers: BTreeMap<String, Developer>,
    resources: BTreeMap<String, Resource>,
    revisions: BTreeMap<String, Revision>,
    tasks: BTreeMap<String, Task>,
    relations: BTreeMap<RelationKey, Relation>,
    provenance: Provenance,
    index: Index,
}

impl PartialEq for Store {
    fn eq(&self, other: &Self) -> bool {
        self.developers == other.developers
            && self.resources == other.resources
            && self.revisions == other.revisions
            && self.tasks == other.tasks
            && self.relations == other.relations
            && self.provenance == other.provenance
    }
}

impl Eq for Store {}

impl Store {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn developer(&self, id: &str) -> Option<&Developer> {
        self.developers.get(id)
    }

    pub fn resource(&self, id: &str) -> Option<&Resource> {
        self.resources.get(id)
    }

    pub fn revision(&self, id: &str) -> Option<&Revision> {
        self.revisions.get(id)
    }

    pub fn task(&self, id: &str) -> Option<&Task> {
        self.tasks.get(id)
    }

    pub fn developers(&self) -> impl Iterator<Item = &Developer> {
        self.developers.values()
    }

    pub fn resources(&self) -> impl Iterator<Item = &Resource> {
        self.resources.values()
    }

    pub fn revisions(&self) -> impl Iterator<Item = &Revision> {
        self.revisions.values()
    }

    pub fn tasks(&self) -> impl Iterator<Item = &Task> {
        self.tasks.values()
    }

    pub fn relations(&self) -> impl Iterator<Item = &Relation> {
        self.relations.values()
    }

    pub fn relations_of_kind(&self, kind: RelationKind) -> impl Iterator<Item = &Relation> {
        self.relations.values().filter(move |r| r.kind == kind)
    }

    pub fn relation(&self, kind: RelationKind, source: &str, target: &str) -> Option<&Relation> {
        let (source, target) = canonical_pair(kind, source, target);
        self.relations.get(&RelationKey {
            kind,
            source_id: source.to_string(),
            target_id: target.to_string(),
        })
    }

    pub fn entity_count(&self, kind: EntityKind) -> usize {
        match kind {
            EntityKind::Developer => self.developers.len(),
            EntityKind::Resource => self.resources.len(),
            EntityKind::Revision => self.revisions.len(),
            EntityKind::Task => self.tasks.len(),
        }
    }

    pub fn contains(&self, kind: EntityKind, id: &str) -> bool {
        match kind {
            EntityKind::Developer => self.developers.contains_key(id),
            EntityKind::Resource => self.resources.contains_key(id),
            EntityKind::Revision => self.revisions.contains_key(id),
            EntityKind::Task => self.tasks.contains_key(id),
        }
    }

    /// Relations of `kind` with `id` (an entity of `entity`) at either end.
    pub fn relations_at<'a>(
        &'a self,
        entity: EntityKind,
        id: &str,
        kind: RelationKind,
    ) -> impl Iterator<Item = &'a Relation> + 'a {
        self.relation_keys_at(entity, id, kind)
            .iter()
            .filter_map(move |k| self.relations.get(k))
    }

    /// Keys of the relations [`relations_at`](Self::relations_at) yields,
    /// without looking the relations up.
    pub fn relation_keys_at(&self, entity: EntityKind, id: &str, kind: RelationKind) -> &[RelationKey] {
        self.index
            .by_endpoint
            .get(&(entity, kind))
            .and_then(|ids| ids.get(id))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// Revision ids (ascending) that changed the resource.
    pub fn revisions_touching(&self, resource_id: &str) -> &[String] {
        self.index
            .revisions_by_resource
            .get(resource_id)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// Loads records, resolving developer identities and recording the
    /// explicit authored-revision and assigned-task relations.
    ///
    /// Re-loading an already loaded record is a no-op; loading a different
    /// record under an existing id is a conflict.
    pub fn put_entities(
        &mut self,
        revisions: &[RevisionRecord],
        tasks: &[TaskRecord],
        map: &IdentityMap,
        cfg: &MatchConfig,
    ) -> Result<IngestReport, StoreError> {
        let before = self.counts();

        let mut new_revisions = Vec::with_capacity(revisions.len());
        for record in revisions {
            record.validate().map_err(StoreError::InvalidRecord)?;
            let revision = self.build_revision(record, map);
            self.check_conflict(&self.revisions, EntityKind::Revision, &revision.revision_id, &revision)?;
            new_revisions.push(revision);
        }
        let mut new_tasks = Vec::with_capacity(tasks.len());
        for record in tasks {
            record.validate().map_err(StoreError::InvalidRecord)?;
            let task = build_task(record, map);
            self.check_conflict(&self.tasks, EntityKind::Task, &task.task_id, &task)?;
            new_tasks.push(task);
        }

        for revision in new_revisions {
            self.add_alias(&revision.author, Source::Vcs, &revision.author_raw);
            for change in &revision.changes {
                if !self.resources.contains_key(&change.resource_id) {
                    let resource = build_resource(&change.resource_id, cfg);
                    self.resources.insert(change.resource_id.clone(), resource);
                }
            }
            self.bump_created_at(revision.timestamp);
            let (author, id) = (revision.author.clone(), revision.revision_id.clone());
            self.insert_revision(revision);
            self.upsert_relation(
                RelationKind::AuthoredRevision,
                &author,
                &id,
                Evidence::new("authored", format!("revision:{id}")),
            )?;
        }
        for task in new_tasks {
            if let Some(dev) = &task.assignee {
                let dev = dev.clone();
                self.add_alias(&dev, Source::Its, &task.assignee_raw.clone());
            }
            for c in &task.comments {
                self.bump_created_at(c.timestamp);
            }
            let (assignee, id) = (task.assignee.clone(), task.task_id.clone());
            self.tasks.insert(id.clone(), task);
            if let Some(dev) = assignee {
                self.upsert_relation(
                    RelationKind::AssignedTask,
                    &dev,
                    &id,
                    Evidence::new("assigned", format!("task:{id}")),
                )?;
            }
        }
        self.provenance.config_hash = cfg.hash();

        let after = self.counts();
        Ok(IngestReport {
            developers: after.developers - before.developers,
            resources: after.resources - before.resources,
            revisions: after.revisions - before.revisions,
            tasks: after.tasks - before.tasks,
            relations: after.relations - before.relations,
        })
    }

    /// Totals, in the shape of an ingest report.
    pub fn counts(&self) -> IngestReport {
        IngestReport {
            developers: self.developers.len(),
            resources: self.resources.len(),
            revisions: self.revisions.len(),
            tasks: self.tasks.len(),
            relations: self.relations.len(),
        }
    }

    fn build_revision(&self, record: &RevisionRecord, map: &IdentityMap) -> Revision {
        let mut seen = BTreeSet::new();
        let changes = record
            .changed_paths
            .iter()
            .filter_map(|c| {
                let resource_id = normalize_path(&c.path);
                seen.insert(resource_id.clone()).then_some(Change {
                    resource_id,
                    change_kind: c.change_kind,
                })
            })
            .collect();
        Revision {
            revision_id: record.revision_id.clone(),
            author: resolve_identity(&record.author, Source::Vcs, map),
            author_raw: record.author.clone(),
            timestamp: record.timestamp,
            message: record.message.clone(),
            changes,
        }
    }

    fn check_conflict<T: PartialEq>(
        &self,
        existing: &BTreeMap<String, T>,
        kind: EntityKind,
        id: &str,
        candidate: &T,
    ) -> Result<(), StoreError> {
        match existing.get(id) {
            Some(current) if current != candidate => Err(StoreError::Conflict {
                kind,
                id: id.to_string(),
            }),
            _ => Ok(()),
        }
    }

    fn add_alias(&mut self, developer_id: &str, source: Source, raw: &str) {
        let dev = self
            .developers
            .entry(developer_id.to_string())
            .or_insert_with(|| Developer {
                developer_id: developer_id.to_string(),
                display_name: String::new(),
                vcs_authors: BTreeSet::new(),
                its_accounts: BTreeSet::new(),
            });
        match source {
            Source::Vcs => dev.vcs_authors.insert(raw.to_string()),
            Source::Its => dev.its_accounts.insert(raw.to_string()),
        };
        dev.refresh_display_name();
    }

    fn bump_created_at(&mut self, ts: DateTime<Utc>) {
        if ts > self.provenance.created_at {
            self.provenance.created_at = ts;
        }
    }

    fn insert_revision(&mut self, revision: Revision) {
        for change in &revision.changes {
            let list = self
                .index
                .revisions_by_resource
                .entry(change.resource_id.clone())
                .or_default();
            if let Err(at) = list.binary_search(&revision.revision_id) {
                list.insert(at, revision.revision_id.clone());
            }
        }
        self.revisions.insert(revision.revision_id.clone(), revision);
    }

    /// Adds one piece of evidence to the `(kind, source, target)` relation,
    /// creating it with weight 1 if absent. Evidence already present is not
    /// added twice. Undirected kinds are stored with ordered endpoints.
    pub fn upsert_relation(
        &mut self,
        kind: RelationKind,
        source: &str,
        target: &str,
        evidence: Evidence,
    ) -> Result<&Relation, StoreError> {
        let (source, target) = canonical_pair(kind, source, target);
        self.check_endpoints(kind, source, target)?;
        let key = RelationKey {
            kind,
            source_id: source.to_string(),
            target_id: target.to_string(),
        };
        let is_new = !self.relations.contains_key(&key);
        if is_new {
            self.index_relation(&key);
        }
        let relation = match self.relations.entry(key) {
            Entry::Occupied(slot) => {
                let relation = slot.into_mut();
                if !relation.evidence.contains(&evidence) {
                    relation.evidence.push(evidence);
                    relation.weight = relation.evidence.len() as u64;
                }
                relation
            }
            Entry::Vacant(slot) => slot.insert(Relation::new(kind, source, target, vec![evidence])),
        };
        Ok(relation)
    }

    /// Stores a fully built relation, replacing any with the same key.
    pub(crate) fn insert_relation(&mut self, relation: Relation) -> Result<(), StoreError> {
        if relation.weight == 0 || relation.weight != relation.evidence.len() as u64 {
            return Err(StoreError::Integrity(format!(
                "relation {} {} -> {} has weight {} with {} evidence items",
                relation.kind,
                relation.source_id,
                relation.target_id,
                relation.weight,
                relation.evidence.len()
            )));
        }
        let relation = Relation::new(
            relation.kind,
            relation.source_id,
            relation.target_id,
            relation.evidence,
        );
        self.check_endpoints(relation.kind, &relation.source_id, &relation.target_id)?;
        let key = relation.key();
        if !self.relations.contains_key(&key) {
            self.index_relation(&key);
        }
        self.relations.insert(key, relation);
        Ok(())
    }

    /// Drops every relation of `kind`.
    pub(crate) fn remove_kind(&mut self, kind: RelationKind) {
        let before = self.relations.len();
        self.relations.retain(|k, _| k.kind != kind);
        if self.relations.len() != before {
            self.rebuild_relation_index();
        }
        self.provenance.extracted.remove(&kind);
    }

    pub(crate) fn mark_extracted(&mut self, kind: RelationKind, config_hash: String) {
        self.provenance.extracted.insert(kind);
        self.provenance.config_hash = config_hash;
    }

    /// Recomputes derived resource names under `cfg`.
    pub(crate) fn refresh_resource_names(&mut self, cfg: &MatchConfig) {
        for resource in self.resources.values_mut() {
            *resource = build_resource(&resource.path, cfg);
        }
    }

    fn check_endpoints(&self, kind: RelationKind, source: &str, target: &str) -> Result<(), StoreError> {
        if kind.is_undirected() && source == target {
            return Err(StoreError::SelfEdge {
                kind,
                id: source.to_string(),
            });
        }
        let (source_kind, target_kind) = kind.endpoints();
        for (entity, id) in [(source_kind, source), (target_kind, target)] {
            if !self.contains(entity, id) {
                return Err(StoreError::UnknownEndpoint {
                    kind: entity,
                    id: id.to_string(),
                });
            }
        }
        Ok(())
    }

    fn index_relation(&mut self, key: &RelationKey) {
        let (source_kind, target_kind) = key.kind.endpoints();
        for (entity, id) in [(source_kind, &key.source_id), (target_kind, &key.target_id)] {
            self.index
                .by_endpoint
                .entry((entity, key.kind))
                .or_default()
                .entry(id.clone())
                .or_default()
                .push(key.clone());
        }
    }

    fn rebuild_relation_index(&mut self) {
        self.index.by_endpoint.clear();
        let keys: Vec<RelationKey> = self.relations.keys().cloned().collect();
        for key in &keys {
            self.index_relation(key);
        }
    }

    /// Full scan of every structural invariant.
    pub fn check_integrity(&self) -> Result<(), StoreError> {
        let fail = |msg: String| Err(StoreError::Integrity(msg));
        let mut alias_owner: HashMap<(Source, &str), &str> = HashMap::new();
        for (id, dev) in &self.developers {
            if id != &dev.developer_id || id.is_empty() {
                return fail(format!("developer key `{id}` does not match its id"));
            }
            let aliases = dev
                .vcs_authors
                .iter()
                .map(|a| (Source::Vcs, a.as_str()))
                .chain(dev.its_accounts.iter().map(|a| (Source::Its, a.as_str())));
            for alias in aliases {
                if let Some(other) = alias_owner.insert(alias, id) {
                    return fail(format!("alias `{}` shared by `{other}` and `{id}`", alias.1));
                }
            }
        }
        for (id, res) in &self.resources {
            if id != &res.resource_id || id != &res.path {
                return fail(format!("resource key `{id}` does not match its path"));
            }
            if res.is_source != res.class_name.is_some() || (res.fqn.is_some() && !res.is_source) {
                return fail(format!("resource `{id}` has inconsistent source names"));
            }
            if res.path.rsplit('/').next() != Some(res.file_name.as_str()) {
                return fail(format!("resource `{id}` file name mismatch"));
            }
        }
        for (id, rev) in &self.revisions {
            if id != &rev.revision_id {
                return fail(format!("revision key `{id}` does not match its id"));
            }
            if !self.developers.contains_key(&rev.author) {
                return fail(format!("revision `{id}` author `{}` missing", rev.author));
            }
            if rev.changes.is_empty() {
                return fail(format!("revision `{id}` has no changes"));
            }
            for change in &rev.changes {
                if !self.resources.contains_key(&change.resource_id) {
                    return fail(format!("revision `{id}` touches missing `{}`", change.resource_id));
                }
            }
        }
        for (id, task) in &self.tasks {
            if id != &task.task_id {
                return fail(format!("task key `{id}` does not match its id"));
            }
            if let Some(dev) = &task.assignee {
                if !self.developers.contains_key(dev) {
                    return fail(format!("task `{id}` assignee `{dev}` missing"));
                }
            }
            if task.comments.windows(2).any(|w| w[0].timestamp > w[1].timestamp) {
                return fail(format!("task `{id}` comments out of order"));
            }
        }
        for (key, rel) in &self.relations {
            if key != &rel.key() {
                return fail(format!("relation key mismatch for {}", rel.kind));
            }
            if rel.weight < 1 || rel.weight != rel.evidence.len() as u64 {
                return fail(format!(
                    "{} {} -> {}: weight {} vs {} evidence",
                    rel.kind,
                    rel.source_id,
                    rel.target_id,
                    rel.weight,
                    rel.evidence.len()
                ));
            }
            if rel.kind.is_undirected() && rel.source_id >= rel.target_id {
                return fail(format!(
                    "{} {} -- {} not in canonical order",
                    rel.kind, rel.source_id, rel.target_id
                ));
            }
            self.check_endpoints(rel.kind, &rel.source_id, &rel.target_id)
                .map_err(|e| StoreError::Integrity(e.to_string()))?;
        }
        Ok(())
    }

    /// Assembles a store from deserialized parts and rebuilds indexes.
    pub(crate) fn from_parts(
        provenance: Provenance,
        developers: Vec<Developer>,
        resources: Vec<Resource>,
        revisions: Vec<Revision>,
        tasks: Vec<Task>,
        relations: Vec<Relation>,
    ) -> Result<Self, StoreError> {
        let mut store = Store {
            provenance,
            ..Store::default()
        };
        fn keyed<T>(items: Vec<T>, id: impl Fn(&T) -> &str, what: &str) -> Result<BTreeMap<String, T>, StoreError> {
            let mut map = BTreeMap::new();
            for item in items {
                let key = id(&item).to_string();
                if map.insert(key.clone(), item).is_some() {
                    return Err(StoreError::Integrity(format!("duplicate {what} `{key}`")));
                }
            }
            Ok(map)
        }
        store.developers = keyed(developers, |d| &d.developer_id, "developer")?;
        store.resources = keyed(resources, |r| &r.resource_id, "resource")?;
        store.tasks = keyed(tasks, |t| &t.task_id, "task")?;
        for revision in keyed(revisions, |r| &r.revision_id, "revision")?.into_values() {
            store.insert_revision(revision);
        }
        for relation in relations {
            let key = relation.key();
            if store.relations.insert(key.clone(), relation).is_some() {
                return Err(StoreError::Integrity(format!(
                    "duplicate relation {} {} -> {}",
                    key.kind, key.source_id, key.target_id
                )));
            }
        }
        store.rebuild_relation_index();
        store.check_integrity()?;
        Ok(store)
    }

    pub(crate) fn parts(
        &self,
    ) -> (
        &Provenance,
        impl Iterator<Item = &Developer>,
        impl Iterator<Item = &Resource>,
        impl Iterator<Item = &Revision>,
        impl Iterator<Item = &Task>,
        impl Iterator<Item = &Relation>,
    ) {
        (
            &self.provenance,
            self.developers.values(),
            self.resources.values(),
            self.revisions.values(),
            self.tasks.values(),
            self.relations.values(),
        )
    }
}

fn canonical_pair<'a>(kind: RelationKind, source: &'a str, target: &'a str) -> (&'a str, &'a str) {
    if kind.is_undirected() && target < source {
        (target, source)
    } else {
        (source, target)
    }
}

fn build_task(record: &TaskRecord, map: &IdentityMap) -> Task {
    let assignee_raw = record.assignee.clone();
    let assignee = (!assignee_raw.trim().is_empty())
        .then(|| resolve_identity(&assignee_raw, Source::Its, map));
    let mut comments: Vec<Comment> = record
        .comments
        .iter()
        .map(|c| Comment {
            author: c.author.clone(),
            timestamp: c.timestamp,
            text: c.text.clone(),
        })
        .collect();
    comments.sort_by_key(|c| c.timestamp);
    Task {
        task_id: record.task_id.clone(),
        external_id: record.external_id.clone(),
        assignee,
        assignee_raw,
        summary: record.summary.clone(),
        status: record.status.clone(),
        comments,
    }
}

fn build_resource(path: &str, cfg: &MatchConfig) -> Resource {
    let names = derive_resource_names(path, cfg);
    Resource {
        resource_id: path.to_string(),
        path: path.to_string(),
        is_source: names.class_name.is_some(),
        file_name: names.file_name,
        class_name: names.class_name,
        fqn: names.fqn,
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::ingest::{ChangeKind, ChangedPath, CommentRecord};

    pub(crate) fn rev(id: &str, author: &str, paths: &[&str]) -> RevisionRecord {
        RevisionRecord {
            revision_id: id.into(),
            author: author.into(),
            timestamp: "2009-03-01T10:00:00Z".parse().unwrap(),
            message: format!("commit {id}"),
            changed_paths: paths
                .iter()
                .map(|p| ChangedPath {
                    path: p.to_string(),
                    change_kind: ChangeKind::Modified,
                })
                .collect(),
        }
    }

    pub(crate) fn task(id: &str, assignee: &str) -> TaskRecord {
        TaskRecord {
            task_id: id.into(),
            external_id: id.into(),
            assignee: assignee.into(),
            summary: String::new(),
            status: "NEW".into(),
            comments: vec![CommentRecord {
                author: "x".into(),
                timestamp: "2009-03-02T10:00:00Z".parse().unwrap(),
                text: "hello".into(),
            }],
        }
    }

    fn load(revs: &[RevisionRecord], tasks: &[TaskRecord], map: &IdentityMap) -> Store {
        let mut store = Store::new();
        store.put_entities(revs, tasks, map, &MatchConfig::default()).unwrap();
        store
    }

    #[test]
    fn one_revision_two_resources() {
        let mut store = Store::new();
        let report = store
            .put_entities(
                &[rev("r1", "jsmith", &["src/a/A.java", "docs/b.txt"])],
                &[],
                &IdentityMap::default(),
                &MatchConfig::default(),
            )
            .unwrap();
        assert_eq!(
            report,
            IngestReport {
                developers: 1,
                resources: 2,
                revisions: 1,
                tasks: 0,
                relations: 1
            }
        );
        let rel = store.relation(RelationKind::AuthoredRevision, "auto:jsmith", "r1").unwrap();
        assert_eq!(rel.weight, 1);
        let a = store.resource("src/a/A.java").unwrap();
        assert_eq!(a.fqn.as_deref(), Some("a.A"));
        assert!(a.is_source);
        store.check_integrity().unwrap();
    }

    #[test]
    fn unassigned_task_has_no_relation() {
        let store = load(&[], &[task("t1", "  ")], &IdentityMap::default());
        assert!(store.task("t1").unwrap().assignee.is_none());
        assert_eq!(store.relations().count(), 0);
        assert_eq!(store.developers().count(), 0);
    }

    #[test]
    fn mapped_identity_merges_aliases() {
        let map = IdentityMap::from_reader(
            r#"[{"id":"dev:john","vcs":["jsmith"],"its":["john@example.org"]}]"#.as_bytes(),
        )
        .unwrap();
        let store = load(&[rev("r1", "jsmith", &["a.txt"])], &[task("t1", "john@example.org")], &map);
        let devs: Vec<_> = store.developers().collect();
        assert_eq!(devs.len(), 1);
        assert_eq!(devs[0].developer_id, "dev:john");
        assert!(devs[0].vcs_authors.contains("jsmith"));
        assert!(devs[0].its_accounts.contains("john@example.org"));
        assert!(store.relation(RelationKind::AssignedTask, "dev:john", "t1").is_some());
    }

    #[test]
    fn reingest_is_idempotent_and_order_independent() {
        let revs = [rev("r1", "a", &["x.txt", "y.txt"]), rev("r2", "b", &["y.txt"])];
        let tasks = [task("t1", "a"), task("t2", "")];
        let map = IdentityMap::default();
        let once = load(&revs, &tasks, &map);

        let mut twice = once.clone();
        let report = twice.put_entities(&revs, &tasks, &map, &MatchConfig::default()).unwrap();
        assert_eq!(report, IngestReport::default());
        assert_eq!(once, twice);

        let mut swapped = Store::new();
        swapped.put_entities(&[], &tasks, &map, &MatchConfig::default()).unwrap();
        swapped.put_entities(&revs, &[], &map, &MatchConfig::default()).unwrap();
        assert_eq!(once, swapped);
    }

    #[test]
    fn conflicting_reingest_rejected() {
        let mut store = load(&[rev("r1", "a", &["x.txt"])], &[], &IdentityMap::default());
        let err = store
            .put_entities(&[rev("r1", "b", &["x.txt"])], &[], &IdentityMap::default(), &MatchConfig::default())
            .unwrap_err();
        assert_eq!(
            err,
            StoreError::Conflict {
                kind: EntityKind::Revision,
                id: "r1".into()
            }
        );
    }

    #[test]
    fn upsert_canonical_order_and_weight() {
        let mut store = load(&[rev("r1", "a", &["A", "B"])], &[], &IdentityMap::default());
        let rel = store
            .upsert_relation(RelationKind::Cochange, "B", "A", Evidence::new("changed together", "revision:r1"))
            .unwrap();
        assert_eq!((rel.source_id.as_str(), rel.target_id.as_str(), rel.weight), ("A", "B", 1));
        let rel = store
            .upsert_relation(RelationKind::Cochange, "A", "B", Evidence::new("changed together", "revision:r2"))
            .unwrap();
        assert_eq!((rel.weight, rel.evidence.len()), (2, 2));
        // identical evidence is not double counted
        let rel = store
            .upsert_relation(RelationKind::Cochange, "A", "B", Evidence::new("changed together", "revision:r2"))
            .unwrap();
        assert_eq!(rel.weight, 2);
        assert_eq!(store.relations_at(EntityKind::Resource, "A", RelationKind::Cochange).count(), 1);
        assert_eq!(store.relations_at(EntityKind::Resource, "B", RelationKind::Cochange).count(), 1);
        store.check_integrity().unwrap();
    }

    #[test]
    fn upsert_rejects_self_edges_and_unknown_ids() {
        let mut store = load(&[rev("r1", "a", &["A"])], &[], &IdentityMap::default());
        assert_eq!(
            store
                .upsert_relation(RelationKind::Cochange, "A", "A", Evidence::new("x", "y"))
                .unwrap_err(),
            StoreError::SelfEdge {
                kind: RelationKind::Cochange,
                id: "A".into()
            }
        );
        assert_eq!(
            store
                .upsert_relation(RelationKind::TaskRevision, "nope", "r1", Evidence::new("x", "y"))
                .unwrap_err(),
            StoreError::UnknownEndpoint {
                kind: EntityKind::Task,
                id: "nope".into()
            }
        );
    }

    #[test]
    fn deleted_files_stay_resources() {
        let mut r = rev("r1", "a", &["gone.txt"]);
        r.changed_paths[0].change_kind = ChangeKind::Deleted;
        let store = load(&[r], &[], &IdentityMap::default());
        assert!(store.resource("gone.txt").is_some());
        assert_eq!(store.revisions_touching("gone.txt"), ["r1".to_string()]);
    }
}
