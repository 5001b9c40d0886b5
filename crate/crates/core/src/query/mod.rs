//! Ranked context views around a focus entity.
//!
//! Each section lists entities reached from the focus through a fixed,
//! per-section set of relation paths (one or two steps). An entry's score is
//! the sum of the weights of the relations that reached it, each relation
//! counted once and scaled by its kind coefficient. Sections are ordered by
//! score (descending), then the entry's latest activity (most recent first,
//! entities without dated activity last), then id.
//!
//! Latest activity is the newest revision touching a resource, the newest
//! revision authored by a developer, and the newest comment on a task.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::store::{EntityKind, Relation, RelationKind, Store};

/// Evidence strings shown per entry.
pub const MAX_EVIDENCE: usize = 3;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QueryError {
    #[error("{kind} `{id}` not found")]
    NotFound { kind: EntityKind, id: String },
    #[error("query must be non-empty")]
    EmptyQuery,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QueryConfig {
    /// Per-kind multiplier applied to relation weights. Missing kinds use 1.0.
    pub kind_weights: BTreeMap<RelationKind, f64>,
}

impl Default for QueryConfig {
    fn default() -> Self {
        Self {
            kind_weights: RelationKind::ALL.into_iter().map(|k| (k, 1.0)).collect(),
        }
    }
}

impl QueryConfig {
    pub fn coefficient(&self, kind: RelationKind) -> f64 {
        self.kind_weights.get(&kind).copied().unwrap_or(1.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FocusRef {
    pub kind: EntityKind,
    pub id: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContextEntry {
    pub id: String,
    pub label: String,
    pub score: f64,
    pub kinds: Vec<RelationKind>,
    pub evidence: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContextView {
    pub focus: FocusRef,
    pub developers: Vec<ContextEntry>,
    pub resources: Vec<ContextEntry>,
    pub tasks: Vec<ContextEntry>,
    /// Section size limit applied.
    pub k: usize,
    #[serde(with = "crate::ingest::rfc3339")]
    pub generated_at: DateTime<Utc>,
}

impl ContextView {
    /// Compact JSON, the wire form shared by the CLI and the HTTP API.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("view serializes")
    }

    pub fn section(&self, kind: EntityKind) -> &[ContextEntry] {
        match kind {
            EntityKind::Developer => &self.developers,
            EntityKind::Resource => &self.resources,
            EntityKind::Task => &self.tasks,
            EntityKind::Revision => &[],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchHit {
    pub id: String,
    pub label: String,
    pub kind: EntityKind,
}

#[derive(Default)]
struct Acc<'s> {
    score: f64,
    kinds: BTreeSet<RelationKind>,
    /// Relations already counted, by address; a store hands out one
    /// reference per relation.
    seen: HashSet<*const Relation>,
    relations: Vec<&'s Relation>,
    /// Evidence overriding the relation-derived strings (task-to-task entries).
    notes: Vec<String>,
}

impl<'s> Acc<'s> {
    fn add(&mut self, relation: &'s Relation, cfg: &QueryConfig) {
        if self.seen.insert(std::ptr::from_ref(relation)) {
            self.score += relation.weight as f64 * cfg.coefficient(relation.kind);
            self.kinds.insert(relation.kind);
            self.relations.push(relation);
        }
    }
}

type Section<'s> = BTreeMap<&'s str, Acc<'s>>;

/// Another task's overlap with the focus task's resources.
struct Shared<'s> {
    count: usize,
    /// Bit per linking relation kind.
    kinds: u8,
    /// Position of the last resource counted, so each resource counts once.
    last: usize,
    resources: Vec<&'s str>,
}

struct Ctx<'s> {
    store: &'s Store,
    cfg: &'s QueryConfig,
}

impl<'s> Ctx<'s> {
    fn at(&self, entity: EntityKind, id: &str, kind: RelationKind) -> impl Iterator<Item = &'s Relation> + 's {
        self.store.relations_at(entity, id, kind)
    }

    fn add(&self, section: &mut Section<'s>, id: &'s str, relation: &'s Relation) {
        section.entry(id).or_default().add(relation, self.cfg);
    }

    /// Tasks related to a resource: directly through name matches, or via a
    /// revision that changed it and references the task. Calls `visit` with
    /// the task id and the linking relation.
    fn task_links(&self, resource: &str, mut visit: impl FnMut(&'s str, &'s Relation)) {
        for kind in [RelationKind::ResourceTaskSummary, RelationKind::ResourceTaskComment] {
            for rel in self.at(EntityKind::Resource, resource, kind) {
                visit(&rel.target_id, rel);
            }
        }
        for revision in self.store.revisions_touching(resource) {
            for rel in self.at(EntityKind::Revision, revision, RelationKind::TaskRevision) {
                visit(&rel.source_id, rel);
            }
        }
    }

    /// Same links as [`task_links`](Self::task_links), reduced to task id
    /// and relation kind.
    fn task_link_kinds(&self, resource: &str, mut visit: impl FnMut(&'s str, RelationKind)) {
        let keys = |entity, id: &str, kind| self.store.relation_keys_at(entity, id, kind);
        for kind in [RelationKind::ResourceTaskSummary, RelationKind::ResourceTaskComment] {
            for key in keys(EntityKind::Resource, resource, kind) {
                visit(&key.target_id, kind);
            }
        }
        for revision in self.store.revisions_touching(resource) {
            for key in keys(EntityKind::Revision, revision, RelationKind::TaskRevision) {
                visit(&key.source_id, RelationKind::TaskRevision);
            }
        }
    }

    fn activity(&self, kind: EntityKind, id: &str) -> Option<DateTime<Utc>> {
        match kind {
            EntityKind::Resource => self
                .store
                .revisions_touching(id)
                .iter()
                .filter_map(|r| self.store.revision(r))
                .map(|r| r.timestamp)
                .max(),
            EntityKind::Developer => self
                .at(EntityKind::Developer, id, RelationKind::AuthoredRevision)
                .filter_map(|rel| self.store.revision(&rel.target_id))
                .map(|r| r.timestamp)
                .max(),
            EntityKind::Task => self.store.task(id).and_then(|t| t.last_activity()),
            EntityKind::Revision => self.store.revision(id).map(|r| r.timestamp),
        }
    }

    fn label(&self, kind: EntityKind, id: &str) -> String {
        match kind {
            EntityKind::Developer => self.store.developer(id).map(|d| d.display_name.clone()),
            EntityKind::Resource => self.store.resource(id).map(|r| r.path.clone()),
            EntityKind::Task => self
                .store
                .task(id)
                .map(|t| format!("{}: {}", t.external_id, t.summary)),
            EntityKind::Revision => self.store.revision(id).map(|r| r.revision_id.clone()),
        }
        .unwrap_or_else(|| id.to_string())
    }

    fn finish(&self, kind: EntityKind, section: Section<'s>, k: usize) -> Vec<ContextEntry> {
        if k == 0 {
            return Vec::new();
        }
        let mut entries: Vec<(&'s str, Acc<'s>)> = section.into_iter().collect();
        if entries.len() > k {
            // recency is only needed where it can decide membership or order,
            // so drop everything scoring below the k-th best first
            let mut scores: Vec<f64> = entries.iter().map(|(_, acc)| acc.score).collect();
            let (_, &mut cutoff, _) = scores.select_nth_unstable_by(k - 1, |a, b| b.total_cmp(a));
            entries.retain(|(_, acc)| acc.score.total_cmp(&cutoff).is_ge());
        }
        let mut ranked: Vec<(Option<DateTime<Utc>>, &'s str, Acc<'s>)> = entries
            .into_iter()
            .map(|(id, acc)| (self.activity(kind, id), id, acc))
            .collect();
        ranked.sort_by(|a, b| {
            b.2.score
                .total_cmp(&a.2.score)
                .then_with(|| b.0.cmp(&a.0))
                .then_with(|| a.1.cmp(b.1))
        });
        ranked
            .into_iter()
            .take(k)
            .map(|(_, id, mut acc)| {
                let evidence = if acc.notes.is_empty() {
                    acc.relations.sort_by_key(|r| r.key());
                    acc.relations
                        .iter()
                        .flat_map(|r| r.evidence.iter().map(move |e| format!("{}: {e}", r.kind)))
                        .take(MAX_EVIDENCE)
                        .collect()
                } else {
                    acc.notes.into_iter().take(MAX_EVIDENCE).collect()
                };
                ContextEntry {
                    id: id.to_string(),
                    label: self.label(kind, id),
                    score: acc.score,
                    kinds: acc.kinds.into_iter().collect(),
                    evidence,
                }
            })
            .collect()
    }

    fn require(&self, kind: EntityKind, id: &str) -> Result<(), QueryError> {
        if self.store.contains(kind, id) {
            Ok(())
        } else {
            Err(QueryError::NotFound {
                kind,
                id: id.to_string(),
            })
        }
    }

    fn view(
        &self,
        kind: EntityKind,
        id: &str,
        sections: [(EntityKind, Section<'s>); 3],
        k: usize,
    ) -> ContextView {
        let [(_, developers), (_, resources), (_, tasks)] = sections;
        ContextView {
            focus: FocusRef {
                kind,
                id: id.to_string(),
            },
            developers: self.finish(EntityKind::Developer, developers, k),
            resources: self.finish(EntityKind::Resource, resources, k),
            tasks: self.finish(EntityKind::Task, tasks, k),
            k,
            generated_at: Utc::now(),
        }
    }
}

/// Context of a resource.
///
/// * resources: co-change partners
/// * tasks: tasks mentioning it, plus tasks referenced by revisions that changed it
/// * developers: authors of revisions that changed it, plus assignees of those tasks
pub fn context_for_resource(
    store: &Store,
    resource_id: &str,
    k: usize,
    cfg: &QueryConfig,
) -> Result<ContextView, QueryError> {
    let ctx = Ctx { store, cfg };
    ctx.require(EntityKind::Resource, resource_id)?;

    let mut resources = Section::new();
    for rel in ctx.at(EntityKind::Resource, resource_id, RelationKind::Cochange) {
        ctx.add(&mut resources, rel.other_end(resource_id), rel);
    }

    let mut tasks = Section::new();
    ctx.task_links(resource_id, |task, rel| ctx.add(&mut tasks, task, rel));

    let mut developers = Section::new();
    for revision in store.revisions_touching(resource_id) {
        for rel in ctx.at(EntityKind::Revision, revision, RelationKind::AuthoredRevision) {
            ctx.add(&mut developers, &rel.source_id, rel);
        }
    }
    for task in tasks.keys() {
        for rel in ctx.at(EntityKind::Task, task, RelationKind::AssignedTask) {
            ctx.add(&mut developers, &rel.source_id, rel);
        }
    }

    Ok(ctx.view(
        EntityKind::Resource,
        resource_id,
        [
            (EntityKind::Developer, developers),
            (EntityKind::Resource, resources),
            (EntityKind::Task, tasks),
        ],
        k,
    ))
}

/// Context of a task.
///
/// * resources: resources it mentions, plus resources changed by revisions referencing it
/// * developers: its assignee, plus authors of revisions referencing it
/// * tasks: other tasks sharing at least one of those resources, scored by
///   the number of shared resources
pub fn context_for_task(
    store: &Store,
    task_id: &str,
    k: usize,
    cfg: &QueryConfig,
) -> Result<ContextView, QueryError> {
    let ctx = Ctx { store, cfg };
    ctx.require(EntityKind::Task, task_id)?;

    let mut resources = Section::new();
    for kind in [RelationKind::ResourceTaskSummary, RelationKind::ResourceTaskComment] {
        for rel in ctx.at(EntityKind::Task, task_id, kind) {
            ctx.add(&mut resources, &rel.source_id, rel);
        }
    }
    let linked: Vec<&Relation> = ctx.at(EntityKind::Task, task_id, RelationKind::TaskRevision).collect();
    for rel in &linked {
        if let Some(revision) = store.revision(&rel.target_id) {
            for change in &revision.changes {
                ctx.add(&mut resources, &change.resource_id, rel);
            }
        }
    }

    let mut developers = Section::new();
    for rel in ctx.at(EntityKind::Task, task_id, RelationKind::AssignedTask) {
        ctx.add(&mut developers, &rel.source_id, rel);
    }
    for link in &linked {
        for rel in ctx.at(EntityKind::Revision, &link.target_id, RelationKind::AuthoredRevision) {
            ctx.add(&mut developers, &rel.source_id, rel);
        }
    }

    let mut shared: HashMap<&str, Shared> = HashMap::new();
    for (position, resource) in resources.keys().enumerate() {
        ctx.task_link_kinds(resource, |other, kind| {
            if other == task_id {
                return;
            }
            let entry = shared.entry(other).or_insert(Shared {
                count: 0,
                kinds: 0,
                last: usize::MAX,
                resources: Vec::new(),
            });
            entry.kinds |= 1 << kind as u8;
            if entry.last != position {
                entry.last = position;
                entry.count += 1;
                if entry.resources.len() < MAX_EVIDENCE {
                    entry.resources.push(resource);
                }
            }
        });
    }
    let tasks: Section = shared
        .into_iter()
        .map(|(other, s)| {
            let acc = Acc {
                score: s.count as f64,
                kinds: RelationKind::ALL
                    .into_iter()
                    .filter(|&kind| s.kinds & (1 << kind as u8) != 0)
                    .collect(),
                notes: s
                    .resources
                    .iter()
                    .map(|r| format!("shared resource [resource:{r}]"))
                    .collect(),
                ..Acc::default()
            };
            (other, acc)
        })
        .collect();

    Ok(ctx.view(
        EntityKind::Task,
        task_id,
        [
            (EntityKind::Developer, developers),
            (EntityKind::Resource, resources),
            (EntityKind::Task, tasks),
        ],
        k,
    ))
}

/// Context of a developer.
///
/// * developers: proximity neighbours
/// * resources: resources changed by their revisions or related to their
///   assigned tasks, scored by the weight of those relations
/// * tasks: tasks assigned to them
pub fn context_for_developer(
    store: &Store,
    developer_id: &str,
    k: usize,
    cfg: &QueryConfig,
) -> Result<ContextView, QueryError> {
    let ctx = Ctx { store, cfg };
    ctx.require(EntityKind::Developer, developer_id)?;

    let mut developers = Section::new();
    for rel in ctx.at(EntityKind::Developer, developer_id, RelationKind::DevProximity) {
        ctx.add(&mut developers, rel.other_end(developer_id), rel);
    }

    let mut resources = Section::new();
    for rel in ctx.at(EntityKind::Developer, developer_id, RelationKind::AuthoredRevision) {
        if let Some(revision) = store.revision(&rel.target_id) {
            for change in &revision.changes {
                ctx.add(&mut resources, &change.resource_id, rel);
            }
        }
    }
    let mut tasks = Section::new();
    for rel in ctx.at(EntityKind::Developer, developer_id, RelationKind::AssignedTask) {
        ctx.add(&mut tasks, &rel.target_id, rel);
        for kind in [RelationKind::ResourceTaskSummary, RelationKind::ResourceTaskComment] {
            for link in ctx.at(EntityKind::Task, &rel.target_id, kind) {
                ctx.add(&mut resources, &link.source_id, link);
            }
        }
    }

    Ok(ctx.view(
        EntityKind::Developer,
        developer_id,
        [
            (EntityKind::Developer, developers),
            (EntityKind::Resource, resources),
            (EntityKind::Task, tasks),
        ],
        k,
    ))
}

/// Dispatches on the focus kind. Revisions have no context view.
pub fn context_for(
    store: &Store,
    kind: EntityKind,
    id: &str,
    k: usize,
    cfg: &QueryConfig,
) -> Result<ContextView, QueryError> {
    match kind {
        EntityKind::Resource => context_for_resource(store, id, k, cfg),
        EntityKind::Task => context_for_task(store, id, k, cfg),
        EntityKind::Developer => context_for_developer(store, id, k, cfg),
        EntityKind::Revision => Err(QueryError::NotFound {
            kind,
            id: id.to_string(),
        }),
    }
}

fn first_position(fields: &[&str], needle: &str) -> Option<usize> {
    fields
        .iter()
        .filter_map(|field| {
            let lowered = field.to_lowercase();
            lowered.find(needle).map(|at| lowered[..at].chars().count())
        })
        .min()
}

/// Case-insensitive substring search over resource paths, task ids and
/// summaries, and developer ids and aliases. Ordered by match position,
/// then id.
pub fn search_entities(
    store: &Store,
    query: &str,
    kind: Option<EntityKind>,
    limit: usize,
) -> Result<Vec<SearchHit>, QueryError> {
    let needle = query.trim().to_lowercase();
    if needle.is_empty() {
        return Err(QueryError::EmptyQuery);
    }
    let wants = |k: EntityKind| kind.is_none_or(|want| want == k);
    let mut hits: Vec<(usize, SearchHit)> = Vec::new();
    if wants(EntityKind::Resource) {
        for r in store.resources() {
            if let Some(pos) = first_position(&[&r.path], &needle) {
                hits.push((pos, SearchHit { id: r.resource_id.clone(), label: r.path.clone(), kind: EntityKind::Resource }));
            }
        }
    }
    if wants(EntityKind::Task) {
        for t in store.tasks() {
            if let Some(pos) = first_position(&[&t.summary, &t.external_id, &t.task_id], &needle) {
                hits.push((
                    pos,
                    SearchHit {
                        id: t.task_id.clone(),
                        label: format!("{}: {}", t.external_id, t.summary),
                        kind: EntityKind::Task,
                    },
                ));
            }
        }
    }
    if wants(EntityKind::Developer) {
        for d in store.developers() {
            let mut fields: Vec<&str> = vec![&d.developer_id, &d.display_name];
            fields.extend(d.vcs_authors.iter().map(String::as_str));
            fields.extend(d.its_accounts.iter().map(String::as_str));
            if let Some(pos) = first_position(&fields, &needle) {
                hits.push((
                    pos,
                    SearchHit {
                        id: d.developer_id.clone(),
                        label: d.display_name.clone(),
                        kind: EntityKind::Developer,
                    },
                ));
            }
        }
    }
    hits.sort_by(|a, b| {
        a.0.cmp(&b.0)
            .then_with(|| a.1.id.cmp(&b.1.id))
            .then_with(|| a.1.kind.cmp(&b.1.kind))
    });
    Ok(hits.into_iter().take(limit).map(|(_, hit)| hit).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extract::{run_extraction, AlgorithmSet, MatchConfig};
    use crate::ingest::identity::IdentityMap;
    use crate::store::tests::{rev, task};

    const MODEL: &str = "src/a/GridModel.java";
    const VIEW: &str = "src/a/GridView.java";

    fn sample() -> Store {
        let mut r1 = rev("r1", "alice", &[MODEL, VIEW]);
        r1.message = "fix bug 101".into();
        let mut r2 = rev("r2", "bob", &[MODEL, VIEW]);
        r2.timestamp = "2009-03-03T10:00:00Z".parse().unwrap();
        r2.message = "refactor grid".into();
        let mut r3 = rev("r3", "alice", &["README.txt"]);
        r3.timestamp = "2009-03-05T10:00:00Z".parse().unwrap();
        let mut t1 = task("101", "bob");
        t1.summary = "GridModel throws NPE".into();
        let mut t2 = task("102", "carol");
        t2.summary = "GridView layout broken".into();
        let cfg = MatchConfig::default();
        let mut store = Store::new();
        store.put_entities(&[r1, r2, r3], &[t1, t2], &IdentityMap::default(), &cfg).unwrap();
        run_extraction(&mut store, &cfg, &AlgorithmSet::all()).unwrap();
        store
    }

    fn ids(entries: &[ContextEntry]) -> Vec<(&str, f64)> {
        entries.iter().map(|e| (e.id.as_str(), e.score)).collect()
    }

    #[test]
    fn resource_view() {
        let store = sample();
        let view = context_for_resource(&store, MODEL, 10, &QueryConfig::default()).unwrap();
        assert_eq!(ids(&view.resources), [(VIEW, 2.0)]);
        assert_eq!(ids(&view.tasks), [("101", 2.0)]);
        assert_eq!(ids(&view.developers), [("auto:bob", 2.0), ("auto:alice", 1.0)]);
        let t = &view.tasks[0];
        assert_eq!(t.label, "101: GridModel throws NPE");
        assert_eq!(t.kinds, [RelationKind::ResourceTaskSummary, RelationKind::TaskRevision]);
        assert_eq!(
            t.evidence,
            [
                "RESOURCE_TASK_SUMMARY: class_name:GridModel [summary@0]",
                "TASK_REVISION: pattern:bug <id> [message@4]"
            ]
        );
    }

    #[test]
    fn task_view() {
        let store = sample();
        let view = context_for_task(&store, "101", 10, &QueryConfig::default()).unwrap();
        assert_eq!(ids(&view.resources), [(MODEL, 2.0), (VIEW, 1.0)]);
        // tie broken by latest authored revision: alice has r3
        assert_eq!(ids(&view.developers), [("auto:alice", 1.0), ("auto:bob", 1.0)]);
        assert_eq!(ids(&view.tasks), [("102", 1.0)]);
        assert_eq!(view.tasks[0].evidence, [format!("shared resource [resource:{VIEW}]")]);
    }

    #[test]
    fn developer_view() {
        let store = sample();
        let view = context_for_developer(&store, "auto:alice", 10, &QueryConfig::default()).unwrap();
        assert_eq!(ids(&view.developers), [("auto:bob", 2.0), ("auto:carol", 1.0)]);
        assert_eq!(ids(&view.resources), [("README.txt", 1.0), (MODEL, 1.0), (VIEW, 1.0)]);
        assert!(view.tasks.is_empty());
        let bob = context_for_developer(&store, "auto:bob", 10, &QueryConfig::default()).unwrap();
        assert_eq!(ids(&bob.tasks), [("101", 1.0)]);
        // r2 touches both, task 101 mentions GridModel
        assert_eq!(ids(&bob.resources), [(MODEL, 2.0), (VIEW, 1.0)]);
    }

    #[test]
    fn truncation_and_zero_k() {
        let store = sample();
        let cfg = QueryConfig::default();
        let view = context_for_developer(&store, "auto:alice", 1, &cfg).unwrap();
        assert_eq!(view.resources.len(), 1);
        assert_eq!(view.k, 1);
        let empty = context_for_resource(&store, MODEL, 0, &cfg).unwrap();
        assert!(empty.developers.is_empty() && empty.resources.is_empty() && empty.tasks.is_empty());
    }

    #[test]
    fn kind_weights_scale_scores() {
        let store = sample();
        let mut cfg = QueryConfig::default();
        cfg.kind_weights.insert(RelationKind::AssignedTask, 0.0);
        let view = context_for_resource(&store, MODEL, 10, &cfg).unwrap();
        assert_eq!(ids(&view.developers), [("auto:alice", 1.0), ("auto:bob", 1.0)]);
    }

    #[test]
    fn unknown_focus() {
        let store = sample();
        let cfg = QueryConfig::default();
        assert_eq!(
            context_for_task(&store, "999", 5, &cfg).unwrap_err(),
            QueryError::NotFound { kind: EntityKind::Task, id: "999".into() }
        );
        assert!(context_for(&store, EntityKind::Revision, "r1", 5, &cfg).is_err());
    }

    #[test]
    fn json_shape() {
        let store = sample();
        let view = context_for_task(&store, "102", 3, &QueryConfig::default()).unwrap();
        let value: serde_json::Value = serde_json::from_str(&view.to_json()).unwrap();
        assert_eq!(value["focus"], serde_json::json!({"kind": "task", "id": "102"}));
        assert_eq!(value["k"], 3);
        assert!(value["generated_at"].as_str().unwrap().ends_with('Z'));
        assert_eq!(value["resources"][0]["kinds"][0], "RESOURCE_TASK_SUMMARY");
    }

    #[test]
    fn search() {
        let store = sample();
        let hits = search_entities(&store, "grid", None, 10).unwrap();
        let got: Vec<(&str, EntityKind)> = hits.iter().map(|h| (h.id.as_str(), h.kind)).collect();
        assert_eq!(
            got,
            [
                ("101", EntityKind::Task),
                ("102", EntityKind::Task),
                (MODEL, EntityKind::Resource),
                (VIEW, EntityKind::Resource)
            ]
        );
        let hits = search_entities(&store, "ALICE", Some(EntityKind::Developer), 10).unwrap();
        assert_eq!(hits[0].id, "auto:alice");
        assert_eq!(search_entities(&store, "grid", Some(EntityKind::Resource), 1).unwrap().len(), 1);
        assert_eq!(search_entities(&store, "  ", None, 10), Err(QueryError::EmptyQuery));
    }
}
