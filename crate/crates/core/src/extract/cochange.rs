use std::collections::BTreeMap;

use super::MatchConfig;
use crate::store::{Evidence, Relation, RelationKind, Store};

pub fn cochange_evidence(revision_id: &str) -> Evidence {
    Evidence::new("changed together", format!("revision:{revision_id}"))
}

/// Counts, for every unordered resource pair, the revisions that changed
/// both. Revisions larger than `max_changeset_size` are ignored; pairs below
/// `cochange_min_weight` are dropped.
pub fn extract_cochange(store: &Store, cfg: &MatchConfig) -> Vec<Relation> {
    let mut pairs: BTreeMap<(&str, &str), Vec<&str>> = BTreeMap::new();
    for revision in store.revisions() {
        if revision.changes.len() > cfg.max_changeset_size {
            continue;
        }
        let mut ids: Vec<&str> = revision.changes.iter().map(|c| c.resource_id.as_str()).collect();
        ids.sort_unstable();
        ids.dedup();
        for (i, a) in ids.iter().enumerate() {
            for b in &ids[i + 1..] {
                pairs.entry((a, b)).or_default().push(&revision.revision_id);
            }
        }
    }
    pairs
        .into_iter()
        .filter(|(_, revs)| revs.len() as u64 >= cfg.cochange_min_weight)
        .map(|((a, b), revs)| {
            Relation::new(
                RelationKind::Cochange,
                a,
                b,
                revs.into_iter().map(cochange_evidence).collect(),
            )
        })
        .collect()
}
