//! Implicit relation extraction.
//!
//! Each extractor is a pure function from the store to a relation set;
//! [`run_extraction`] is the only place that writes them back.

mod cochange;
mod config;
pub mod matcher;
pub mod names;
pub mod patterns;
mod proximity;
mod resource_task;
mod task_revision;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use cochange::{cochange_evidence, extract_cochange};
pub use config::{ConfigError, MatchConfig};
pub use proximity::{extract_dev_proximity, proximity_evidence, touched_resources};
pub use resource_task::{
    comment_evidence, extract_resource_task_comments, extract_resource_task_summary,
    summary_evidence,
};
pub use task_revision::{extract_task_revision, task_revision_evidence};

use crate::store::{RelationKind, Store, StoreError};

#[derive(Debug, Error)]
pub enum ExtractError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("unknown algorithm `{0}` (expected one of resource_task_summary, resource_task_comment, task_revision, cochange, dev_proximity, all)")]
    UnknownAlgorithm(String),
    #[error("dev_proximity needs resource_task_summary and resource_task_comment relations: select them too or extract them first")]
    MissingDependency,
    #[error(transparent)]
    Store(#[from] StoreError),
}

/// The five extraction algorithms, in the order they run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    ResourceTaskSummary,
    ResourceTaskComment,
    TaskRevision,
    Cochange,
    DevProximity,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::ResourceTaskSummary,
        Algorithm::ResourceTaskComment,
        Algorithm::TaskRevision,
        Algorithm::Cochange,
        Algorithm::DevProximity,
    ];

    pub fn kind(self) -> RelationKind {
        match self {
            Algorithm::ResourceTaskSummary => RelationKind::ResourceTaskSummary,
            Algorithm::ResourceTaskComment => RelationKind::ResourceTaskComment,
            Algorithm::TaskRevision => RelationKind::TaskRevision,
            Algorithm::Cochange => RelationKind::Cochange,
            Algorithm::DevProximity => RelationKind::DevProximity,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::ResourceTaskSummary => "resource_task_summary",
            Algorithm::ResourceTaskComment => "resource_task_comment",
            Algorithm::TaskRevision => "task_revision",
            Algorithm::Cochange => "cochange",
            Algorithm::DevProximity => "dev_proximity",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = ExtractError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| ExtractError::UnknownAlgorithm(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AlgorithmSet(BTreeSet<Algorithm>);

impl AlgorithmSet {
    pub fn all() -> Self {
        Self(Algorithm::ALL.into_iter().collect())
    }

    pub fn contains(&self, algorithm: Algorithm) -> bool {
        self.0.contains(&algorithm)
    }

    pub fn iter(&self) -> impl Iterator<Item = Algorithm> + '_ {
        self.0.iter().copied()
    }
}

impl FromIterator<Algorithm> for AlgorithmSet {
    fn from_iter<I: IntoIterator<Item = Algorithm>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

impl FromStr for AlgorithmSet {
    type Err = ExtractError;

    /// `all` or a comma separated list of algorithm names.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim() == "all" {
            return Ok(Self::all());
        }
        s.split(',')
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(str::parse)
            .collect::<Result<BTreeSet<_>, _>>()
            .and_then(|set| {
                if set.is_empty() {
                    Err(ExtractError::UnknownAlgorithm(s.to_string()))
                } else {
                    Ok(Self(set))
                }
            })
    }
}

/// Distinct relation counts per extracted kind.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractionReport {
    pub resource_task_summary: usize,
    pub resource_task_comment: usize,
    pub task_revision: usize,
    pub cochange: usize,
    pub dev_proximity: usize,
    pub config_hash: String,
}

impl ExtractionReport {
    /// Reads the counts off the store.
    pub fn from_store(store: &Store) -> Self {
        let count = |kind| store.relations_of_kind(kind).count();
        Self {
            resource_task_summary: count(RelationKind::ResourceTaskSummary),
            resource_task_comment: count(RelationKind::ResourceTaskComment),
            task_revision: count(RelationKind::TaskRevision),
            cochange: count(RelationKind::Cochange),
            dev_proximity: count(RelationKind::DevProximity),
            config_hash: store.provenance().config_hash.clone(),
        }
    }

    pub fn count(&self, algorithm: Algorithm) -> usize {
        match algorithm {
            Algorithm::ResourceTaskSummary => self.resource_task_summary,
            Algorithm::ResourceTaskComment => self.resource_task_comment,
            Algorithm::TaskRevision => self.task_revision,
            Algorithm::Cochange => self.cochange,
            Algorithm::DevProximity => self.dev_proximity,
        }
    }
}

/// Runs the selected algorithms in fixed order, replacing any relations of
/// those kinds already in the store.
pub fn run_extraction(
    store: &mut Store,
    cfg: &MatchConfig,
    algorithms: &AlgorithmSet,
) -> Result<ExtractionReport, ExtractError> {
    cfg.validate()?;
    if algorithms.contains(Algorithm::DevProximity) {
        let available = |a: Algorithm| {
            algorithms.contains(a) || store.provenance().extracted.contains(&a.kind())
        };
        if !available(Algorithm::ResourceTaskSummary) || !available(Algorithm::ResourceTaskComment) {
            return Err(ExtractError::MissingDependency);
        }
    }
    store.refresh_resource_names(cfg);
    let hash = cfg.hash();
    for algorithm in algorithms.iter() {
        let relations = match algorithm {
            Algorithm::ResourceTaskSummary => extract_resource_task_summary(store, cfg),
            Algorithm::ResourceTaskComment => extract_resource_task_comments(store, cfg),
            Algorithm::TaskRevision => extract_task_revision(store, cfg)?,
            Algorithm::Cochange => extract_cochange(store, cfg),
            Algorithm::DevProximity => {
                let prior = store
                    .relations_of_kind(RelationKind::ResourceTaskSummary)
                    .chain(store.relations_of_kind(RelationKind::ResourceTaskComment));
                extract_dev_proximity(store, prior)
            }
        };
        store.remove_kind(algorithm.kind());
        for relation in relations {
            store.insert_relation(relation)?;
        }
        store.mark_extracted(algorithm.kind(), hash.clone());
    }
    Ok(ExtractionReport::from_store(store))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::identity::IdentityMap;
    use crate::ingest::{ChangeKind, ChangedPath, CommentRecord, RevisionRecord, TaskRecord};
    use crate::store::Evidence;

    fn rev(id: &str, author: &str, message: &str, paths: &[&str]) -> RevisionRecord {
        RevisionRecord {
            revision_id: id.into(),
            author: author.into(),
            timestamp: "2009-03-01T10:00:00Z".parse().unwrap(),
            message: message.into(),
            changed_paths: paths
                .iter()
                .map(|p| ChangedPath {
                    path: p.to_string(),
                    change_kind: ChangeKind::Modified,
                })
                .collect(),
        }
    }

    fn task(id: &str, ext: &str, assignee: &str, summary: &str, comments: &[&str]) -> TaskRecord {
        TaskRecord {
            task_id: id.into(),
            external_id: ext.into(),
            assignee: assignee.into(),
            summary: summary.into(),
            status: "NEW".into(),
            comments: comments
                .iter()
                .enumerate()
                .map(|(i, text)| CommentRecord {
                    author: "x".into(),
                    timestamp: format!("2009-03-0{}T10:00:00Z", i + 1).parse().unwrap(),
                    text: text.to_string(),
                })
                .collect(),
        }
    }

    fn store(revs: &[RevisionRecord], tasks: &[TaskRecord]) -> Store {
        let mut s = Store::new();
        s.put_entities(revs, tasks, &IdentityMap::default(), &MatchConfig::default())
            .unwrap();
        s
    }

    const GRID: &str = "plugin/src/eu/geclipse/core/GridModel.java";

    #[test]
    fn summary_match() {
        let s = store(
            &[rev("r1", "a", "m", &[GRID])],
            &[task("t1", "1", "", "GridModel throws NPE", &[]), task("t2", "2", "", "Foo broken", &[])],
        );
        let rels = extract_resource_task_summary(&s, &MatchConfig::default());
        assert_eq!(rels.len(), 1);
        assert_eq!((rels[0].source_id.as_str(), rels[0].target_id.as_str()), (GRID, "t1"));
        assert_eq!(rels[0].evidence, [summary_evidence(names::NameForm::ClassName, "GridModel", 0)]);
    }

    #[test]
    fn summary_weight_counts_forms() {
        let s = store(
            &[rev("r1", "a", "m", &[GRID])],
            &[task("t1", "1", "", "at eu.geclipse.core.GridModel.load(GridModel.java:42)", &[])],
        );
        let rels = extract_resource_task_summary(&s, &MatchConfig::default());
        assert_eq!(rels[0].weight, 3);
        let descriptions: Vec<_> = rels[0].evidence.iter().map(|e| e.description.as_str()).collect();
        assert_eq!(
            descriptions,
            ["file_name:GridModel.java", "class_name:GridModel", "fqn:eu.geclipse.core.GridModel"]
        );
        assert_eq!(rels[0].evidence[1].locator, "summary@20");
    }

    #[test]
    fn comment_weight_counts_comments() {
        let s = store(
            &[rev("r1", "a", "m", &[GRID])],
            &[task(
                "t1",
                "1",
                "",
                "",
                &["GridModel again", "nothing", "see GridModel.java", "unrelated", "at eu.geclipse.core.GridModel.run"],
            )],
        );
        let rels = extract_resource_task_comments(&s, &MatchConfig::default());
        assert_eq!(rels.len(), 1);
        assert_eq!(rels[0].weight, 3);
        let locators: Vec<_> = rels[0].evidence.iter().map(|e| e.locator.as_str()).collect();
        assert_eq!(locators, ["comment/0@0", "comment/2@4", "comment/4@3"]);
        let cited: Vec<_> = rels[0].evidence.iter().map(|e| e.description.as_str()).collect();
        assert_eq!(
            cited,
            ["class_name:GridModel", "file_name:GridModel.java", "fqn:eu.geclipse.core.GridModel"]
        );
    }

    #[test]
    fn task_revision_patterns() {
        let s = store(
            &[
                rev("r1", "a", "fix for bug 2042: NPE on startup", &["a.txt"]),
                rev("r2", "a", "#773 resolved", &["a.txt"]),
                rev("r3", "a", "bump to 20421", &["a.txt"]),
            ],
            &[task("t1", "2042", "", "", &[]), task("t2", "773", "", "", &[])],
        );
        let rels = extract_task_revision(&s, &MatchConfig::default()).unwrap();
        let got: Vec<_> = rels
            .iter()
            .map(|r| (r.source_id.as_str(), r.target_id.as_str(), r.evidence[0].description.as_str()))
            .collect();
        assert_eq!(got, [("t1", "r1", "pattern:bug <id>"), ("t2", "r2", "pattern:#<id>")]);
    }

    #[test]
    fn cochange_threshold_and_cap() {
        let s = store(
            &[
                rev("r1", "a", "m", &["A", "B"]),
                rev("r2", "a", "m", &["B", "A"]),
                rev("r3", "a", "m", &["A", "C"]),
            ],
            &[],
        );
        let rels = extract_cochange(&s, &MatchConfig::default());
        assert_eq!(rels.len(), 1);
        assert_eq!((rels[0].source_id.as_str(), rels[0].target_id.as_str(), rels[0].weight), ("A", "B", 2));
        assert_eq!(rels[0].evidence, [cochange_evidence("r1"), cochange_evidence("r2")]);

        let paths: Vec<String> = (0..200).map(|i| format!("import/f{i}.txt")).collect();
        let refs: Vec<&str> = paths.iter().map(String::as_str).collect();
        let s = store(&[rev("r1", "a", "import", &refs), rev("r2", "a", "import again", &refs)], &[]);
        assert!(extract_cochange(&s, &MatchConfig::default()).is_empty());
    }

    #[test]
    fn proximity_paths() {
        let s = store(
            &[rev("r1", "d1", "m", &["A", "B"]), rev("r2", "d2", "m", &["B", "C"])],
            &[],
        );
        let rels = extract_dev_proximity(&s, std::iter::empty());
        assert_eq!(rels.len(), 1);
        assert_eq!(rels[0].weight, 1);
        assert_eq!(rels[0].evidence, [proximity_evidence("B")]);

        let mut s = store(
            &[rev("r1", "d1", "m", &["src/Alpha.java"])],
            &[task("t1", "1", "d2", "Alpha broken", &[])],
        );
        let report = run_extraction(&mut s, &MatchConfig::default(), &AlgorithmSet::all()).unwrap();
        assert_eq!(report.dev_proximity, 1);
        let rel = s.relation(RelationKind::DevProximity, "auto:d2", "auto:d1").unwrap();
        assert_eq!(rel.evidence, [proximity_evidence("src/Alpha.java")]);
    }

    #[test]
    fn proximity_dependency() {
        let mut s = store(&[rev("r1", "a", "m", &["A"])], &[]);
        let only: AlgorithmSet = "dev_proximity".parse().unwrap();
        assert!(matches!(
            run_extraction(&mut s, &MatchConfig::default(), &only),
            Err(ExtractError::MissingDependency)
        ));
        run_extraction(&mut s, &MatchConfig::default(), &"resource_task_summary,resource_task_comment".parse().unwrap())
            .unwrap();
        run_extraction(&mut s, &MatchConfig::default(), &only).unwrap();
    }

    #[test]
    fn empty_store_counts_zero() {
        let mut s = Store::new();
        let report = run_extraction(&mut s, &MatchConfig::default(), &AlgorithmSet::all()).unwrap();
        assert_eq!(Algorithm::ALL.map(|a| report.count(a)), [0; 5]);
    }

    #[test]
    fn rerun_is_idempotent() {
        let mut s = store(
            &[rev("r1", "a", "bug 100", &["src/A1.java", "B"]), rev("r2", "b", "m", &["src/A1.java", "B"])],
            &[task("t1", "100", "b", "A1 fails", &["A1.java again"])],
        );
        let first = run_extraction(&mut s, &MatchConfig::default(), &AlgorithmSet::all()).unwrap();
        let snapshot = s.clone();
        let second = run_extraction(&mut s, &MatchConfig::default(), &AlgorithmSet::all()).unwrap();
        assert_eq!(first, second);
        assert_eq!(s, snapshot);
        s.check_integrity().unwrap();
    }

    #[test]
    fn manual_relation_survives_other_kinds() {
        let mut s = store(&[rev("r1", "a", "m", &["A", "B"])], &[]);
        s.upsert_relation(RelationKind::Cochange, "A", "B", Evidence::new("manual", "x"))
            .unwrap();
        run_extraction(&mut s, &MatchConfig::default(), &"task_revision".parse().unwrap()).unwrap();
        assert!(s.relation(RelationKind::Cochange, "A", "B").is_some());
    }

    #[test]
    fn algorithm_set_parsing() {
        assert_eq!("all".parse::<AlgorithmSet>().unwrap(), AlgorithmSet::all());
        let set: AlgorithmSet = "cochange, task_revision".parse().unwrap();
        assert_eq!(set.iter().collect::<Vec<_>>(), [Algorithm::TaskRevision, Algorithm::Cochange]);
        assert!("cochange,bogus".parse::<AlgorithmSet>().is_err());
        assert!("".parse::<AlgorithmSet>().is_err());
    }
}
