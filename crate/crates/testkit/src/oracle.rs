//! Brute-force reference implementations.
//!
//! Everything here is computed straight from the raw records with nested
//! loops over every candidate pair. It shares only the low-level matchers
//! (`match_name_in_text`, `match_task_reference`, name derivation and
//! identity resolution) with the engine; candidate selection, indexing,
//! aggregation and ranking are written independently.

use std::collections::{BTreeMap, BTreeSet};

use chrono::{DateTime, Utc};
use devctx_core::extract::matcher::match_name_in_text;
use devctx_core::extract::names::derive_resource_names;
use devctx_core::extract::patterns::match_task_reference;
use devctx_core::ingest::identity::resolve_identity;
use devctx_core::query::MAX_EVIDENCE;
use devctx_core::{EntityKind, MatchConfig, RelationKind, Source, Store};
use serde_json::{json, Value};

use crate::corpus::Corpus;

/// `(description, locator)`
pub type Ev = (String, String);

/// Relations keyed by `(kind, source, target)` with their evidence in
/// canonical order.
pub type RelSet = BTreeMap<(RelationKind, String, String), Vec<Ev>>;

/// Entity-level view of the corpus the oracle works from.
pub struct Model<'c> {
    pub corpus: &'c Corpus,
    pub cfg: MatchConfig,
    /// revision id -> (canonical author, distinct paths)
    pub revisions: BTreeMap<&'c str, (String, Vec<&'c str>, DateTime<Utc>)>,
    /// task id -> canonical assignee
    pub assignees: BTreeMap<&'c str, Option<String>>,
    pub resources: BTreeSet<&'c str>,
    pub developers: BTreeMap<String, (BTreeSet<&'c str>, BTreeSet<&'c str>)>,
}

impl<'c> Model<'c> {
    pub fn new(corpus: &'c Corpus, cfg: &MatchConfig) -> Self {
        let mut revisions = BTreeMap::new();
        let mut resources = BTreeSet::new();
        let mut developers: BTreeMap<String, (BTreeSet<&str>, BTreeSet<&str>)> = BTreeMap::new();
        for r in &corpus.revisions {
            let author = resolve_identity(&r.author, Source::Vcs, &corpus.identity);
            developers.entry(author.clone()).or_default().0.insert(&r.author);
            let mut paths: Vec<&str> = Vec::new();
            for c in &r.changed_paths {
                if !paths.contains(&c.path.as_str()) {
                    paths.push(&c.path);
                }
                resources.insert(c.path.as_str());
            }
            revisions.insert(r.revision_id.as_str(), (author, paths, r.timestamp));
        }
        let mut assignees = BTreeMap::new();
        for t in &corpus.tasks {
            let assignee = if t.assignee.trim().is_empty() {
                None
            } else {
                let dev = resolve_identity(&t.assignee, Source::Its, &corpus.identity);
                developers.entry(dev.clone()).or_default().1.insert(&t.assignee);
                Some(dev)
            };
            assignees.insert(t.task_id.as_str(), assignee);
        }
        Self {
            corpus,
            cfg: cfg.clone(),
            revisions,
            assignees,
            resources,
            developers,
        }
    }

    fn sorted_comments(&self, task: &'c devctx_core::TaskRecord) -> Vec<&'c devctx_core::ingest::CommentRecord> {
        let mut comments: Vec<_> = task.comments.iter().collect();
        comments.sort_by_key(|c| c.timestamp);
        comments
    }

    /// All seven relation kinds.
    pub fn relations(&self) -> RelSet {
        let mut out = RelSet::new();
        let cfg = &self.cfg;

        for r in &self.corpus.revisions {
            let author = &self.revisions[r.revision_id.as_str()].0;
            out.insert(
                (RelationKind::AuthoredRevision, author.clone(), r.revision_id.clone()),
                vec![("authored".into(), format!("revision:{}", r.revision_id))],
            );
        }
        for (task, assignee) in &self.assignees {
            if let Some(dev) = assignee {
                out.insert(
                    (RelationKind::AssignedTask, dev.clone(), task.to_string()),
                    vec![("assigned".into(), format!("task:{task}"))],
                );
            }
        }

        // resource x task, summary and every comment
        for task in &self.corpus.tasks {
            let comments = self.sorted_comments(task);
            for &resource in &self.resources {
                let names = derive_resource_names(resource, cfg);
                let forms = names.forms();
                let mut summary = Vec::new();
                for (form, name) in &forms {
                    let hits = match_name_in_text(name, &task.summary, cfg);
                    if let Some(first) = hits.iter().min() {
                        summary.push((format!("{}:{name}", form.as_str()), format!("summary@{first}")));
                    }
                }
                if !summary.is_empty() {
                    out.insert(
                        (RelationKind::ResourceTaskSummary, resource.to_string(), task.task_id.clone()),
                        summary,
                    );
                }
                let mut commented = Vec::new();
                for (idx, comment) in comments.iter().enumerate() {
                    let mut earliest: Option<(usize, String)> = None;
                    for (form, name) in &forms {
                        for at in match_name_in_text(name, &comment.text, cfg) {
                            if earliest.as_ref().is_none_or(|(best, _)| at < *best) {
                                earliest = Some((at, format!("{}:{name}", form.as_str())));
                            }
                        }
                    }
                    if let Some((at, cited)) = earliest {
                        commented.push((cited, format!("comment/{idx}@{at}")));
                    }
                }
                if !commented.is_empty() {
                    out.insert(
                        (RelationKind::ResourceTaskComment, resource.to_string(), task.task_id.clone()),
                        commented,
                    );
                }
            }
        }

        // task x revision
        let patterns = cfg.compiled_patterns().expect("valid config");
        for task in &self.corpus.tasks {
            for r in &self.corpus.revisions {
                if let Some((i, at)) = match_task_reference(&task.external_id, &r.message, &patterns, cfg) {
                    out.insert(
                        (RelationKind::TaskRevision, task.task_id.clone(), r.revision_id.clone()),
                        vec![(format!("pattern:{}", patterns[i].template()), format!("message@{at}"))],
                    );
                }
            }
        }

        // resource x resource
        let resources: Vec<&str> = self.resources.iter().copied().collect();
        for (i, a) in resources.iter().enumerate() {
            for b in &resources[i + 1..] {
                let mut evidence = Vec::new();
                for (rev, (_, paths, _)) in &self.revisions {
                    if paths.len() <= cfg.max_changeset_size && paths.contains(a) && paths.contains(b) {
                        evidence.push(("changed together".to_string(), format!("revision:{rev}")));
                    }
                }
                if !evidence.is_empty() && evidence.len() as u64 >= cfg.cochange_min_weight {
                    out.insert((RelationKind::Cochange, a.to_string(), b.to_string()), evidence);
                }
            }
        }

        // developer x developer
        let mut touched: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
        for dev in self.developers.keys() {
            let set = touched.entry(dev).or_default();
            for (author, paths, _) in self.revisions.values() {
                if author == dev {
                    set.extend(paths.iter().copied());
                }
            }
            for (kind, source, target) in out.keys() {
                let rt = matches!(kind, RelationKind::ResourceTaskSummary | RelationKind::ResourceTaskComment);
                if rt && self.assignees[target.as_str()].as_deref() == Some(dev.as_str()) {
                    set.insert(self.resources.get(source.as_str()).expect("resource"));
                }
            }
        }
        let devs: Vec<&str> = self.developers.keys().map(String::as_str).collect();
        for (i, a) in devs.iter().enumerate() {
            for b in &devs[i + 1..] {
                let shared: Vec<Ev> = touched[a]
                    .intersection(&touched[b])
                    .map(|r| ("shared resource".to_string(), format!("resource:{r}")))
                    .collect();
                if !shared.is_empty() {
                    out.insert((RelationKind::DevProximity, a.to_string(), b.to_string()), shared);
                }
            }
        }
        out
    }
}

/// The store's relations in the oracle's shape.
pub fn store_relations(store: &Store) -> RelSet {
    store
        .relations()
        .map(|r| {
            (
                (r.kind, r.source_id.clone(), r.target_id.clone()),
                r.evidence
                    .iter()
                    .map(|e| (e.description.clone(), e.locator.clone()))
                    .collect(),
            )
        })
        .collect()
}

pub fn of_kind(set: &RelSet, kind: RelationKind) -> RelSet {
    set.iter()
        .filter(|((k, _, _), _)| *k == kind)
        .map(|(key, ev)| (key.clone(), ev.clone()))
        .collect()
}

/// Human-readable differences between two relation sets; empty when equal.
pub fn diff(expected: &RelSet, actual: &RelSet) -> Vec<String> {
    let mut out = Vec::new();
    for (key, ev) in expected {
        match actual.get(key) {
            None => out.push(format!("missing {key:?} {ev:?}")),
            Some(got) if got != ev => out.push(format!("evidence differs for {key:?}: expected {ev:?}, got {got:?}")),
            _ => {}
        }
    }
    for key in actual.keys() {
        if !expected.contains_key(key) {
            out.push(format!("unexpected {key:?} {:?}", actual[key]));
        }
    }
    out
}

/// Per-kind relation counts in the JSON shape of an extraction report,
/// without the config hash.
pub fn counts(set: &RelSet) -> Value {
    let n = |kind| set.keys().filter(|(k, _, _)| *k == kind).count();
    json!({
        "resource_task_summary": n(RelationKind::ResourceTaskSummary),
        "resource_task_comment": n(RelationKind::ResourceTaskComment),
        "task_revision": n(RelationKind::TaskRevision),
        "cochange": n(RelationKind::Cochange),
        "dev_proximity": n(RelationKind::DevProximity),
    })
}

#[derive(Default)]
struct Entry {
    score: f64,
    kinds: BTreeSet<RelationKind>,
    relations: BTreeSet<(RelationKind, String, String)>,
    notes: Vec<String>,
}

/// Context views recomputed by scanning every relation for every step.
pub struct ViewOracle<'m, 'c> {
    model: &'m Model<'c>,
    rels: &'m RelSet,
}

impl<'m, 'c> ViewOracle<'m, 'c> {
    pub fn new(model: &'m Model<'c>, rels: &'m RelSet) -> Self {
        Self { model, rels }
    }

    fn weight(&self, key: &(RelationKind, String, String)) -> f64 {
        self.rels[key].len() as f64
    }

    fn credit(&self, section: &mut BTreeMap<String, Entry>, id: &str, key: &(RelationKind, String, String)) {
        let e = section.entry(id.to_string()).or_default();
        if e.relations.insert(key.clone()) {
            e.score += self.weight(key);
            e.kinds.insert(key.0);
        }
    }

    fn touches(&self, revision: &str, resource: &str) -> bool {
        self.model.revisions[revision].1.contains(&resource)
    }

    fn tasks_of_resource(&self, resource: &str) -> BTreeMap<String, Entry> {
        let mut out = BTreeMap::new();
        for key in self.rels.keys() {
            match key.0 {
                RelationKind::ResourceTaskSummary | RelationKind::ResourceTaskComment if key.1 == resource => {
                    self.credit(&mut out, &key.2, key)
                }
                RelationKind::TaskRevision if self.touches(&key.2, resource) => self.credit(&mut out, &key.1, key),
                _ => {}
            }
        }
        out
    }

    fn activity(&self, kind: EntityKind, id: &str) -> Option<DateTime<Utc>> {
        match kind {
            EntityKind::Resource => self
                .model
                .revisions
                .values()
                .filter(|(_, paths, _)| paths.contains(&id))
                .map(|(_, _, ts)| *ts)
                .max(),
            EntityKind::Developer => self
                .model
                .revisions
                .values()
                .filter(|(author, _, _)| author == id)
                .map(|(_, _, ts)| *ts)
                .max(),
            EntityKind::Task => self
                .model
                .corpus
                .tasks
                .iter()
                .find(|t| t.task_id == id)
                .and_then(|t| t.comments.iter().map(|c| c.timestamp).max()),
            EntityKind::Revision => None,
        }
    }

    fn label(&self, kind: EntityKind, id: &str) -> String {
        match kind {
            EntityKind::Resource => id.to_string(),
            EntityKind::Task => {
                let t = self.model.corpus.tasks.iter().find(|t| t.task_id == id).expect("task");
                format!("{}: {}", t.external_id, t.summary)
            }
            EntityKind::Developer => {
                let (vcs, its) = &self.model.developers[id];
                vcs.iter()
                    .chain(its.iter())
                    .map(|s| s.trim())
                    .find(|s| !s.is_empty())
                    .unwrap_or(id)
                    .to_string()
            }
            EntityKind::Revision => id.to_string(),
        }
    }

    fn render(&self, kind: EntityKind, section: BTreeMap<String, Entry>, k: usize) -> Value {
        let mut rows: Vec<(String, Entry, Option<DateTime<Utc>>)> = section
            .into_iter()
            .map(|(id, e)| {
                let at = self.activity(kind, &id);
                (id, e, at)
            })
            .collect();
        rows.sort_by(|a, b| {
            b.1.score
                .partial_cmp(&a.1.score)
                .unwrap()
                .then(b.2.cmp(&a.2))
                .then(a.0.cmp(&b.0))
        });
        rows.truncate(k);
        Value::Array(
            rows.into_iter()
                .map(|(id, e, _)| {
                    let evidence: Vec<String> = if e.notes.is_empty() {
                        e.relations
                            .iter()
                            .flat_map(|key| {
                                self.rels[key]
                                    .iter()
                                    .map(move |(d, l)| format!("{}: {d} [{l}]", key.0.as_str()))
                            })
                            .take(MAX_EVIDENCE)
                            .collect()
                    } else {
                        e.notes.into_iter().take(MAX_EVIDENCE).collect()
                    };
                    json!({
                        "id": id,
                        "label": self.label(kind, &id),
                        "score": e.score,
                        "kinds": e.kinds.iter().map(|k| k.as_str()).collect::<Vec<_>>(),
                        "evidence": evidence,
                    })
                })
                .collect(),
        )
    }

    fn view(
        &self,
        kind: EntityKind,
        id: &str,
        developers: BTreeMap<String, Entry>,
        resources: BTreeMap<String, Entry>,
        tasks: BTreeMap<String, Entry>,
        k: usize,
    ) -> Value {
        json!({
            "focus": {"kind": kind.as_str(), "id": id},
            "developers": self.render(EntityKind::Developer, developers, k),
            "resources": self.render(EntityKind::Resource, resources, k),
            "tasks": self.render(EntityKind::Task, tasks, k),
            "k": k,
        })
    }

    /// The view as JSON without `generated_at`, or `None` for an unknown focus.
    pub fn context(&self, kind: EntityKind, id: &str, k: usize) -> Option<Value> {
        match kind {
            EntityKind::Resource => self.resource(id, k),
            EntityKind::Task => self.task(id, k),
            EntityKind::Developer => self.developer(id, k),
            EntityKind::Revision => None,
        }
    }

    fn resource(&self, id: &str, k: usize) -> Option<Value> {
        if !self.model.resources.contains(id) {
            return None;
        }
        let mut resources = BTreeMap::new();
        for key in self.rels.keys() {
            if key.0 == RelationKind::Cochange && (key.1 == id || key.2 == id) {
                let other = if key.1 == id { &key.2 } else { &key.1 };
                self.credit(&mut resources, other, key);
            }
        }
        let tasks = self.tasks_of_resource(id);
        let mut developers = BTreeMap::new();
        for key in self.rels.keys() {
            match key.0 {
                RelationKind::AuthoredRevision if self.touches(&key.2, id) => self.credit(&mut developers, &key.1, key),
                RelationKind::AssignedTask if tasks.contains_key(&key.2) => self.credit(&mut developers, &key.1, key),
                _ => {}
            }
        }
        Some(self.view(EntityKind::Resource, id, developers, resources, tasks, k))
    }

    fn task(&self, id: &str, k: usize) -> Option<Value> {
        if !self.model.assignees.contains_key(id) {
            return None;
        }
        let mut resources = BTreeMap::new();
        let mut developers = BTreeMap::new();
        for key in self.rels.keys() {
            match key.0 {
                RelationKind::ResourceTaskSummary | RelationKind::ResourceTaskComment if key.2 == id => {
                    self.credit(&mut resources, &key.1, key)
                }
                RelationKind::TaskRevision if key.1 == id => {
                    for path in &self.model.revisions[key.2.as_str()].1 {
                        self.credit(&mut resources, path, key);
                    }
                    for other in self.rels.keys() {
                        if other.0 == RelationKind::AuthoredRevision && other.2 == key.2 {
                            self.credit(&mut developers, &other.1, other);
                        }
                    }
                }
                RelationKind::AssignedTask if key.2 == id => self.credit(&mut developers, &key.1, key),
                _ => {}
            }
        }
        let mut tasks: BTreeMap<String, Entry> = BTreeMap::new();
        for resource in resources.keys() {
            for (other, via) in self.tasks_of_resource(resource) {
                if other == id {
                    continue;
                }
                let e = tasks.entry(other).or_default();
                e.score += 1.0;
                e.kinds.extend(via.kinds);
                e.notes.push(format!("shared resource [resource:{resource}]"));
            }
        }
        Some(self.view(EntityKind::Task, id, developers, resources, tasks, k))
    }

    fn developer(&self, id: &str, k: usize) -> Option<Value> {
        if !self.model.developers.contains_key(id) {
            return None;
        }
        let mut developers = BTreeMap::new();
        let mut resources = BTreeMap::new();
        let mut tasks = BTreeMap::new();
        for key in self.rels.keys() {
            match key.0 {
                RelationKind::DevProximity if key.1 == id || key.2 == id => {
                    let other = if key.1 == id { &key.2 } else { &key.1 };
                    self.credit(&mut developers, other, key);
                }
                RelationKind::AuthoredRevision if key.1 == id => {
                    for path in &self.model.revisions[key.2.as_str()].1 {
                        self.credit(&mut resources, path, key);
                    }
                }
                RelationKind::AssignedTask if key.1 == id => {
                    self.credit(&mut tasks, &key.2, key);
                    for other in self.rels.keys() {
                        let rt = matches!(other.0, RelationKind::ResourceTaskSummary | RelationKind::ResourceTaskComment);
                        if rt && other.2 == key.2 {
                            self.credit(&mut resources, &other.1, other);
                        }
                    }
                }
                _ => {}
            }
        }
        Some(self.view(EntityKind::Developer, id, developers, resources, tasks, k))
    }
}

/// A view's JSON with `generated_at` removed.
pub fn strip_generated_at(mut view: Value) -> Value {
    if let Some(map) = view.as_object_mut() {
        map.remove("generated_at");
    }
    view
}
