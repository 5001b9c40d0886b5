//! Resource/task relations from resource names found in task summaries and
//! task comments.

use std::collections::{BTreeMap, HashMap};

use aho_corasick::{AhoCorasick, AhoCorasickBuilder, MatchKind};
use rayon::prelude::*;

use super::matcher::{is_matchable, is_token_match};
use super::names::{derive_resource_names, NameForm};
use super::MatchConfig;
use crate::store::{Evidence, Relation, RelationKind, Store};

pub fn summary_evidence(form: NameForm, name: &str, offset: usize) -> Evidence {
    Evidence::new(format!("{}:{name}", form.as_str()), format!("summary@{offset}"))
}

pub fn comment_evidence(form: NameForm, name: &str, comment: usize, offset: usize) -> Evidence {
    Evidence::new(
        format!("{}:{name}", form.as_str()),
        format!("comment/{comment}@{offset}"),
    )
}

/// One automaton over every matchable name of every candidate resource.
struct NameIndex<'s> {
    resources: Vec<&'s str>,
    automaton: Option<AhoCorasick>,
    /// Per automaton pattern: the (resource, form) pairs carrying that name.
    owners: Vec<Vec<(usize, NameForm)>>,
    names: Vec<String>,
    /// Per resource: its forms and the automaton pattern holding each.
    forms: Vec<Vec<(NameForm, usize)>>,
}

/// First offset per (resource index, form) of whole-token matches in a text.
type Hits = BTreeMap<usize, BTreeMap<NameForm, usize>>;

impl<'s> NameIndex<'s> {
    fn build(store: &'s Store, cfg: &MatchConfig) -> Self {
        let mut resources = Vec::new();
        let mut names: Vec<String> = Vec::new();
        let mut owners: Vec<Vec<(usize, NameForm)>> = Vec::new();
        let mut slot: HashMap<String, usize> = HashMap::new();
        let mut forms = Vec::new();
        // candidate set: resources changed by at least one revision
        for resource in store.resources() {
            if store.revisions_touching(&resource.resource_id).is_empty() {
                continue;
            }
            let idx = resources.len();
            resources.push(resource.resource_id.as_str());
            let derived = derive_resource_names(&resource.path, cfg);
            let mut own = Vec::new();
            for (form, name) in derived.forms() {
                if !is_matchable(name, cfg) {
                    continue;
                }
                let at = *slot.entry(name.to_string()).or_insert_with(|| {
                    names.push(name.to_string());
                    owners.push(Vec::new());
                    names.len() - 1
                });
                owners[at].push((idx, form));
                own.push((form, at));
            }
            forms.push(own);
        }
        let automaton = (!names.is_empty()).then(|| {
            AhoCorasickBuilder::new()
                .match_kind(MatchKind::Standard)
                .ascii_case_insensitive(!cfg.case_sensitive)
                .build(&names)
                .expect("name automaton builds")
        });
        Self {
            resources,
            automaton,
            owners,
            names,
            forms,
        }
    }

    fn scan(&self, text: &str) -> Hits {
        let mut hits = Hits::new();
        let Some(automaton) = &self.automaton else {
            return hits;
        };
        for m in automaton.find_overlapping_iter(text) {
            if !is_token_match(text, m.start(), m.len()) {
                continue;
            }
            for &(resource, form) in &self.owners[m.pattern().as_usize()] {
                let first = hits.entry(resource).or_default().entry(form).or_insert(m.start());
                *first = (*first).min(m.start());
            }
        }
        hits
    }

    fn name_of(&self, resource: usize, form: NameForm) -> &str {
        let (_, at) = self.forms[resource]
            .iter()
            .find(|(f, _)| *f == form)
            .expect("hit refers to an indexed name");
        &self.names[*at]
    }
}

/// One relation per (resource, task) whose summary mentions the resource;
/// weight is the number of distinct name forms that matched.
pub fn extract_resource_task_summary(store: &Store, cfg: &MatchConfig) -> Vec<Relation> {
    let index = NameIndex::build(store, cfg);
    let tasks: Vec<_> = store.tasks().collect();
    let mut out: Vec<Relation> = tasks
        .par_iter()
        .flat_map_iter(|task| {
            index.scan(&task.summary).into_iter().map(|(resource, forms)| {
                let evidence = forms
                    .into_iter()
                    .map(|(form, offset)| summary_evidence(form, index.name_of(resource, form), offset))
                    .collect();
                Relation::new(
                    RelationKind::ResourceTaskSummary,
                    index.resources[resource],
                    task.task_id.as_str(),
                    evidence,
                )
            })
            .collect::<Vec<_>>()
        })
        .collect();
    out.sort_by(|a, b| a.key().cmp(&b.key()));
    out
}

/// One relation per (resource, task) with at least one comment mentioning
/// the resource; weight is the number of such comments. Each comment's
/// evidence cites its earliest mention of the resource.
pub fn extract_resource_task_comments(store: &Store, cfg: &MatchConfig) -> Vec<Relation> {
    let index = NameIndex::build(store, cfg);
    let tasks: Vec<_> = store.tasks().collect();
    let mut out: Vec<Relation> = tasks
        .par_iter()
        .flat_map_iter(|task| {
            let mut per_resource: BTreeMap<usize, Vec<Evidence>> = BTreeMap::new();
            for (idx, comment) in task.comments.iter().enumerate() {
                for (resource, forms) in index.scan(&comment.text) {
                    // earliest mention; form order breaks ties
                    let (form, offset) = forms
                        .into_iter()
                        .min_by_key(|&(form, offset)| (offset, form))
                        .expect("non-empty hit set");
                    per_resource.entry(resource).or_default().push(comment_evidence(
                        form,
                        index.name_of(resource, form),
                        idx,
                        offset,
                    ));
                }
            }
            per_resource
                .into_iter()
                .map(|(resource, evidence)| {
                    Relation::new(
                        RelationKind::ResourceTaskComment,
                        index.resources[resource],
                        task.task_id.as_str(),
                        evidence,
                    )
                })
                .collect::<Vec<_>>()
        })
        .collect();
    out.sort_by(|a, b| a.key().cmp(&b.key()));
    out
}
