use std::collections::{BTreeMap, BTreeSet};

use crate::store::{Evidence, Relation, RelationKind, Store};

pub fn proximity_evidence(resource_id: &str) -> Evidence {
    Evidence::new("shared resource", format!("resource:{resource_id}"))
}

/// Resources each developer touched: those changed by their revisions plus
/// those related (through `prior`) to tasks assigned to them.
pub fn touched_resources<'a>(
    store: &'a Store,
    prior: impl IntoIterator<Item = &'a Relation>,
) -> BTreeMap<&'a str, BTreeSet<&'a str>> {
    let mut touched: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for revision in store.revisions() {
        let set = touched.entry(revision.author.as_str()).or_default();
        set.extend(revision.changes.iter().map(|c| c.resource_id.as_str()));
    }
    for relation in prior {
        if !matches!(
            relation.kind,
            RelationKind::ResourceTaskSummary | RelationKind::ResourceTaskComment
        ) {
            continue;
        }
        let assignee = store
            .task(&relation.target_id)
            .and_then(|t| t.assignee.as_deref());
        if let Some(dev) = assignee {
            touched.entry(dev).or_default().insert(relation.source_id.as_str());
        }
    }
    touched
}

/// Developer pairs sharing at least one touched resource; weight is the
/// size of the shared set. `prior` must hold the resource/task relations.
pub fn extract_dev_proximity<'a>(
    store: &'a Store,
    prior: impl IntoIterator<Item = &'a Relation>,
) -> Vec<Relation> {
    let touched = touched_resources(store, prior);
    // invert to resource -> developers so only pairs that share something are visited
    let mut by_resource: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for (dev, resources) in &touched {
        for resource in resources {
            by_resource.entry(resource).or_default().push(dev);
        }
    }
    let mut shared: BTreeMap<(&str, &str), Vec<&str>> = BTreeMap::new();
    for (resource, devs) in &by_resource {
        for (i, a) in devs.iter().enumerate() {
            for b in &devs[i + 1..] {
                let pair = if a < b { (*a, *b) } else { (*b, *a) };
                shared.entry(pair).or_default().push(resource);
            }
        }
    }
    shared
        .into_iter()
        .map(|((a, b), resources)| {
            Relation::new(
                RelationKind::DevProximity,
                a,
                b,
                resources.into_iter().map(proximity_evidence).collect(),
            )
        })
        .collect()
}
