//! Property checks over corpora and stores. Each returns a description of
//! the first violation found.

use std::collections::BTreeSet;

use devctx_core::extract::matcher::is_token_match;
use devctx_core::extract::names::derive_resource_names;
use devctx_core::query::{context_for, ContextView, QueryConfig};
use devctx_core::store::snapshot;
use devctx_core::{run_extraction, AlgorithmSet, EntityKind, ExtractionReport, MatchConfig, RelationKind, Store};

use crate::corpus::Corpus;
use crate::generate::{generate, random_config, random_shape, rng, Shape};
use crate::oracle::{diff, of_kind, store_relations, Model, ViewOracle};

pub type Check = Result<(), String>;

pub const EXTRACTED: [RelationKind; 5] = [
    RelationKind::ResourceTaskSummary,
    RelationKind::ResourceTaskComment,
    RelationKind::TaskRevision,
    RelationKind::Cochange,
    RelationKind::DevProximity,
];

/// The corpus and configuration used for oracle comparison number `i`.
pub fn oracle_case(i: u64) -> (Corpus, MatchConfig) {
    let mut r = rng(0x5eed_0000 + i);
    let shape = random_shape(&mut r, Shape::SMALL);
    let cfg = random_config(&mut r);
    (generate(0xc0_0000 + i, shape), cfg)
}

/// Engine output equals the brute-force relation sets for every kind.
pub fn oracle_equivalence(corpus: &Corpus, cfg: &MatchConfig) -> Check {
    let store = corpus.extracted(cfg);
    let expected = Model::new(corpus, cfg).relations();
    let actual = store_relations(&store);
    for kind in RelationKind::ALL {
        let problems = diff(&of_kind(&expected, kind), &of_kind(&actual, kind));
        if !problems.is_empty() {
            return Err(format!(
                "{kind}: {} discrepancies, first: {}",
                problems.len(),
                problems[0]
            ));
        }
    }
    Ok(())
}

/// Every view of every entity equals the brute-force view.
pub fn views_match_oracle(corpus: &Corpus, cfg: &MatchConfig, k: usize) -> Check {
    let store = corpus.extracted(cfg);
    let model = Model::new(corpus, cfg);
    let rels = model.relations();
    let oracle = ViewOracle::new(&model, &rels);
    for kind in [EntityKind::Resource, EntityKind::Task, EntityKind::Developer] {
        for id in entity_ids(&store, kind) {
            let view = context_for(&store, kind, &id, k, &QueryConfig::default()).map_err(|e| e.to_string())?;
            let got = view_json(&view);
            let want = oracle.context(kind, &id, k).ok_or(format!("oracle lacks {kind} {id}"))?;
            if got != want {
                return Err(format!("{kind} {id}: engine {got} != oracle {want}"));
            }
        }
    }
    Ok(())
}

pub fn entity_ids(store: &Store, kind: EntityKind) -> Vec<String> {
    match kind {
        EntityKind::Developer => store.developers().map(|d| d.developer_id.clone()).collect(),
        EntityKind::Resource => store.resources().map(|r| r.resource_id.clone()).collect(),
        EntityKind::Revision => store.revisions().map(|r| r.revision_id.clone()).collect(),
        EntityKind::Task => store.tasks().map(|t| t.task_id.clone()).collect(),
    }
}

/// A view's JSON without `generated_at`.
pub fn view_json(view: &ContextView) -> serde_json::Value {
    crate::oracle::strip_generated_at(serde_json::from_str(&view.to_json()).expect("view JSON"))
}

/// Two independent runs, one with inputs in reverse order and tasks loaded
/// before revisions, give byte-identical snapshots.
pub fn determinism(corpus: &Corpus, cfg: &MatchConfig) -> Check {
    let first = snapshot::to_bytes(&corpus.extracted(cfg));
    let mut store = Store::new();
    let revisions: Vec<_> = corpus.revisions.iter().rev().cloned().collect();
    let tasks: Vec<_> = corpus.tasks.iter().rev().cloned().collect();
    store
        .put_entities(&[], &tasks, &corpus.identity, cfg)
        .map_err(|e| e.to_string())?;
    store
        .put_entities(&revisions, &[], &corpus.identity, cfg)
        .map_err(|e| e.to_string())?;
    run_extraction(&mut store, cfg, &AlgorithmSet::all()).map_err(|e| e.to_string())?;
    let second = snapshot::to_bytes(&store);
    if first != second {
        return Err("snapshots differ between runs".into());
    }
    Ok(())
}

/// Co-change relations are stored once per unordered pair, never as
/// self-edges, and their weight is bounded by the revisions touching each
/// side and by the revisions touching both.
pub fn cochange_symmetry_and_bound(store: &Store) -> Check {
    let mut pairs = BTreeSet::new();
    for rel in store.relations_of_kind(RelationKind::Cochange) {
        let (a, b) = (&rel.source_id, &rel.target_id);
        if a >= b {
            return Err(format!("pair ({a}, {b}) not in canonical order"));
        }
        if !pairs.insert((a.clone(), b.clone())) {
            return Err(format!("pair ({a}, {b}) stored twice"));
        }
        if store
            .relations_of_kind(RelationKind::Cochange)
            .any(|r| r.source_id == *b && r.target_id == *a)
        {
            return Err(format!("reverse of ({a}, {b}) stored"));
        }
        let ra: BTreeSet<&String> = store.revisions_touching(a).iter().collect();
        let rb: BTreeSet<&String> = store.revisions_touching(b).iter().collect();
        let both = ra.intersection(&rb).count() as u64;
        if rel.weight > ra.len().min(rb.len()) as u64 || rel.weight > both {
            return Err(format!(
                "({a}, {b}) weight {} exceeds bound (|A|={}, |B|={}, both={both})",
                rel.weight,
                ra.len(),
                rb.len()
            ));
        }
    }
    Ok(())
}

/// Adding revisions never removes a relation or lowers a weight.
pub fn monotone_under_growth(corpus: &Corpus, extra: &[devctx_core::RevisionRecord], cfg: &MatchConfig) -> Check {
    let before = corpus.extracted(cfg);
    let mut grown = corpus.clone();
    grown.revisions.extend(extra.iter().cloned());
    let after = grown.extracted(cfg);
    for rel in before.relations() {
        match after.relation(rel.kind, &rel.source_id, &rel.target_id) {
            None => return Err(format!("{} ({}, {}) disappeared", rel.kind, rel.source_id, rel.target_id)),
            Some(now) if now.weight < rel.weight => {
                return Err(format!(
                    "{} ({}, {}) weight dropped {} -> {}",
                    rel.kind, rel.source_id, rel.target_id, rel.weight, now.weight
                ))
            }
            _ => {}
        }
    }
    Ok(())
}

fn parse_locator<'a>(locator: &'a str, prefix: &str) -> Option<&'a str> {
    locator.strip_prefix(prefix)
}

/// Every match-based relation's evidence re-verifies against the cited text.
pub fn match_soundness(store: &Store, cfg: &MatchConfig) -> Check {
    let patterns = cfg.compiled_patterns().map_err(|e| e.to_string())?;
    for rel in store.relations() {
        match rel.kind {
            RelationKind::ResourceTaskSummary | RelationKind::ResourceTaskComment => {
                let resource = store.resource(&rel.source_id).ok_or("dangling resource")?;
                if store.revisions_touching(&resource.resource_id).is_empty() {
                    return Err(format!("{} is not in any revision", resource.resource_id));
                }
                let task = store.task(&rel.target_id).ok_or("dangling task")?;
                let names = derive_resource_names(&resource.path, cfg);
                for ev in &rel.evidence {
                    let (form, name) = ev.description.split_once(':').ok_or("bad description")?;
                    if !names.forms().iter().any(|(f, n)| f.as_str() == form && *n == name) {
                        return Err(format!("{}: `{}` is not a name of {}", rel.kind, ev.description, resource.path));
                    }
                    let (text, offset) = if let Some(at) = parse_locator(&ev.locator, "summary@") {
                        (task.summary.as_str(), at)
                    } else {
                        let rest = parse_locator(&ev.locator, "comment/").ok_or("bad locator")?;
                        let (idx, at) = rest.split_once('@').ok_or("bad locator")?;
                        let idx: usize = idx.parse().map_err(|_| "bad comment index")?;
                        (task.comments.get(idx).ok_or("comment index out of range")?.text.as_str(), at)
                    };
                    let offset: usize = offset.parse().map_err(|_| "bad offset")?;
                    let end = offset + name.len();
                    let found = text.get(offset..end).is_some_and(|s| {
                        if cfg.case_sensitive {
                            s == name
                        } else {
                            s.eq_ignore_ascii_case(name)
                        }
                    });
                    if !found || !is_token_match(text, offset, name.len()) {
                        return Err(format!("{} evidence {} does not re-verify", rel.kind, ev));
                    }
                }
            }
            RelationKind::TaskRevision => {
                let task = store.task(&rel.source_id).ok_or("dangling task")?;
                let revision = store.revision(&rel.target_id).ok_or("dangling revision")?;
                for ev in &rel.evidence {
                    let template = ev.description.strip_prefix("pattern:").ok_or("bad description")?;
                    let offset: usize = parse_locator(&ev.locator, "message@")
                        .and_then(|s| s.parse().ok())
                        .ok_or("bad locator")?;
                    let pattern = patterns
                        .iter()
                        .find(|p| p.template() == template)
                        .ok_or(format!("unknown template {template}"))?;
                    if !pattern.applies_to(&task.external_id, cfg)
                        || !pattern.matches_at(&revision.message, &task.external_id, offset)
                    {
                        return Err(format!("{} evidence {} does not re-verify", rel.kind, ev));
                    }
                }
            }
            _ => {}
        }
    }
    Ok(())
}

/// Saving and loading reproduces the store and its bytes.
pub fn snapshot_round_trip(store: &Store) -> Check {
    let bytes = snapshot::to_bytes(store);
    let loaded = snapshot::from_bytes(&bytes).map_err(|e| e.to_string())?;
    if &loaded != store {
        return Err("loaded store differs".into());
    }
    if snapshot::to_bytes(&loaded) != bytes {
        return Err("re-serialized bytes differ".into());
    }
    Ok(())
}

/// Each reported count equals the number of distinct (kind, source, target)
/// triples found by scanning the store, and weight equals evidence count.
pub fn distinct_counts(store: &Store, report: &ExtractionReport) -> Check {
    for (i, kind) in EXTRACTED.into_iter().enumerate() {
        let triples: BTreeSet<(&str, &str)> = store
            .relations()
            .filter(|r| r.kind == kind)
            .map(|r| (r.source_id.as_str(), r.target_id.as_str()))
            .collect();
        let reported = [
            report.resource_task_summary,
            report.resource_task_comment,
            report.task_revision,
            report.cochange,
            report.dev_proximity,
        ][i];
        if triples.len() != reported {
            return Err(format!("{kind}: report {reported}, scan {}", triples.len()));
        }
    }
    for rel in store.relations() {
        if rel.weight != rel.evidence.len() as u64 || rel.weight == 0 {
            return Err(format!("{} ({}, {}) weight {} vs {} evidence", rel.kind, rel.source_id, rel.target_id, rel.weight, rel.evidence.len()));
        }
    }
    Ok(())
}

/// Sections are sorted, duplicate-free, and a larger k only appends.
pub fn view_properties(store: &Store) -> Check {
    let cfg = QueryConfig::default();
    for kind in [EntityKind::Resource, EntityKind::Task, EntityKind::Developer] {
        for id in entity_ids(store, kind) {
            let full = context_for(store, kind, &id, usize::MAX, &cfg).map_err(|e| e.to_string())?;
            for section in [EntityKind::Developer, EntityKind::Resource, EntityKind::Task] {
                let entries = full.section(section);
                let ids: BTreeSet<&str> = entries.iter().map(|e| e.id.as_str()).collect();
                if ids.len() != entries.len() {
                    return Err(format!("{kind} {id}: duplicate entries in {section} section"));
                }
                if entries.windows(2).any(|w| w[0].score < w[1].score) {
                    return Err(format!("{kind} {id}: {section} section not sorted by score"));
                }
                if entries.iter().any(|e| e.score <= 0.0 || e.kinds.is_empty()) {
                    return Err(format!("{kind} {id}: {section} entry without support"));
                }
            }
            for k in [0, 1, 3] {
                let short = context_for(store, kind, &id, k, &cfg).map_err(|e| e.to_string())?;
                for section in [EntityKind::Developer, EntityKind::Resource, EntityKind::Task] {
                    let want: Vec<_> = full.section(section).iter().take(k).collect();
                    let got: Vec<_> = short.section(section).iter().collect();
                    if want != got {
                        return Err(format!("{kind} {id}: k={k} is not a prefix in {section} section"));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Removing one direct relation lowers the other endpoint's score in the
/// focus view by exactly that relation's weight. Checks at most `per_kind`
/// relations of each kind.
pub fn score_additivity(store: &Store, per_kind: usize) -> Check {
    const CASES: [(EntityKind, RelationKind, EntityKind); 5] = [
        (EntityKind::Resource, RelationKind::Cochange, EntityKind::Resource),
        (EntityKind::Resource, RelationKind::ResourceTaskSummary, EntityKind::Task),
        (EntityKind::Resource, RelationKind::ResourceTaskComment, EntityKind::Task),
        (EntityKind::Developer, RelationKind::DevProximity, EntityKind::Developer),
        (EntityKind::Task, RelationKind::AssignedTask, EntityKind::Developer),
    ];
    let cfg = QueryConfig::default();
    let doc: serde_json::Value = serde_json::from_slice(&snapshot::to_json(store)).map_err(|e| e.to_string())?;
    let score = |s: &Store, focus: EntityKind, id: &str, section: EntityKind, other: &str| -> Result<f64, String> {
        let view = context_for(s, focus, id, usize::MAX, &cfg).map_err(|e| e.to_string())?;
        Ok(view.section(section).iter().find(|e| e.id == other).map_or(0.0, |e| e.score))
    };
    for (focus, kind, section) in CASES {
        for r in store.relations_of_kind(kind).take(per_kind) {
            let mut pruned = doc.clone();
            let kind_json = serde_json::to_value(kind).map_err(|e| e.to_string())?;
            pruned["relations"]
                .as_array_mut()
                .ok_or("snapshot without relations")?
                .retain(|x| !(x["kind"] == kind_json && x["source_id"] == *r.source_id && x["target_id"] == *r.target_id));
            let bytes = serde_json::to_vec(&pruned).map_err(|e| e.to_string())?;
            let without = snapshot::from_json(&bytes).map_err(|e| e.to_string())?;
            for (a, b) in [(&r.source_id, &r.target_id), (&r.target_id, &r.source_id)] {
                if !store.contains(focus, a) || !store.contains(section, b) {
                    continue;
                }
                let before = score(store, focus, a, section, b)?;
                let after = score(&without, focus, a, section, b)?;
                if (before - after - r.weight as f64).abs() > 1e-9 {
                    return Err(format!(
                        "{focus} {a}: removing {kind:?} to {b} (weight {}) moved its score {before} -> {after}",
                        r.weight
                    ));
                }
            }
        }
    }
    Ok(())
}

/// Runs extraction twice on the same store and compares the reports.
pub fn idempotent_extraction(corpus: &Corpus, cfg: &MatchConfig) -> Check {
    let mut store = corpus.load(cfg);
    let first = run_extraction(&mut store, cfg, &AlgorithmSet::all()).map_err(|e| e.to_string())?;
    let bytes = snapshot::to_bytes(&store);
    let second = run_extraction(&mut store, cfg, &AlgorithmSet::all()).map_err(|e| e.to_string())?;
    if first != second || snapshot::to_bytes(&store) != bytes {
        return Err("second extraction changed the store".into());
    }
    Ok(())
}
