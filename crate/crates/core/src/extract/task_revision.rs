use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;

use super::config::ConfigError;
use super::patterns::{match_task_reference, IdPattern};
use super::MatchConfig;
use crate::store::{Evidence, Relation, RelationKind, Store, Task};

pub fn task_revision_evidence(pattern: &IdPattern, offset: usize) -> Evidence {
    Evidence::new(format!("pattern:{}", pattern.template()), format!("message@{offset}"))
}

fn digit_runs(text: &str) -> impl Iterator<Item = &str> {
    text.split(|c: char| !c.is_ascii_digit()).filter(|s| !s.is_empty())
}

/// Links tasks to revisions whose message references the task's external id
/// through one of the configured templates; the first template that fires
/// is recorded as evidence.
pub fn extract_task_revision(store: &Store, cfg: &MatchConfig) -> Result<Vec<Relation>, ConfigError> {
    let patterns = cfg.compiled_patterns()?;
    // A digit-bounded occurrence of an all-digit id is exactly a maximal digit run.
    let mut numeric: HashMap<&str, Vec<&Task>> = HashMap::new();
    let mut other: Vec<&Task> = Vec::new();
    for task in store.tasks() {
        if task.external_id.bytes().all(|b| b.is_ascii_digit()) {
            numeric.entry(task.external_id.as_str()).or_default().push(task);
        } else {
            other.push(task);
        }
    }
    let revisions: Vec<_> = store.revisions().collect();
    let mut out: Vec<Relation> = revisions
        .par_iter()
        .flat_map_iter(|revision| {
            let message = revision.message.as_str();
            let mut candidates: BTreeSet<&str> = BTreeSet::new();
            let mut by_id: HashMap<&str, &Task> = HashMap::new();
            for run in digit_runs(message) {
                for task in numeric.get(run).into_iter().flatten() {
                    candidates.insert(&task.task_id);
                    by_id.insert(&task.task_id, task);
                }
            }
            for task in &other {
                if message.contains(task.external_id.as_str()) {
                    candidates.insert(&task.task_id);
                    by_id.insert(&task.task_id, task);
                }
            }
            candidates
                .into_iter()
                .filter_map(|task_id| {
                    let task = by_id[task_id];
                    let (pattern, offset) =
                        match_task_reference(&task.external_id, message, &patterns, cfg)?;
                    Some(Relation::new(
                        RelationKind::TaskRevision,
                        task_id,
                        revision.revision_id.as_str(),
                        vec![task_revision_evidence(&patterns[pattern], offset)],
                    ))
                })
                .collect::<Vec<_>>()
        })
        .collect();
    out.sort_by(|a, b| a.key().cmp(&b.key()));
    Ok(out)
}
