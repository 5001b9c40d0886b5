use std::collections::BTreeSet;
use std::fmt;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::ingest::{rfc3339, ChangeKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntityKind {
    Developer,
    Resource,
    Revision,
    Task,
}

impl EntityKind {
    pub const ALL: [EntityKind; 4] = [
        EntityKind::Developer,
        EntityKind::Resource,
        EntityKind::Revision,
        EntityKind::Task,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EntityKind::Developer => "developer",
            EntityKind::Resource => "resource",
            EntityKind::Revision => "revision",
            EntityKind::Task => "task",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.as_str() == s)
    }
}

impl fmt::Display for EntityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The relation taxonomy: two explicit kinds recorded at ingest, five
/// implicit kinds produced by extraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RelationKind {
    /// developer -> revision
    AuthoredRevision,
    /// developer -> task
    AssignedTask,
    /// resource -> task, resource name found in the task summary
    ResourceTaskSummary,
    /// resource -> task, resource name found in task comments
    ResourceTaskComment,
    /// task -> revision, task id referenced in the revision message
    TaskRevision,
    /// resource -- resource
    Cochange,
    /// developer -- developer
    DevProximity,
}

impl RelationKind {
    pub const ALL: [RelationKind; 7] = [
        RelationKind::AuthoredRevision,
        RelationKind::AssignedTask,
        RelationKind::ResourceTaskSummary,
        RelationKind::ResourceTaskComment,
        RelationKind::TaskRevision,
        RelationKind::Cochange,
        RelationKind::DevProximity,
    ];

    pub fn endpoints(self) -> (EntityKind, EntityKind) {
        use EntityKind::*;
        match self {
            RelationKind::AuthoredRevision => (Developer, Revision),
            RelationKind::AssignedTask => (Developer, Task),
            RelationKind::ResourceTaskSummary | RelationKind::ResourceTaskComment => {
                (Resource, Task)
            }
            RelationKind::TaskRevision => (Task, Revision),
            RelationKind::Cochange => (Resource, Resource),
            RelationKind::DevProximity => (Developer, Developer),
        }
    }

    pub fn is_undirected(self) -> bool {
        matches!(self, RelationKind::Cochange | RelationKind::DevProximity)
    }

    /// `COCHANGE`-style name used in JSON.
    pub fn as_str(self) -> &'static str {
        match self {
            RelationKind::AuthoredRevision => "AUTHORED_REVISION",
            RelationKind::AssignedTask => "ASSIGNED_TASK",
            RelationKind::ResourceTaskSummary => "RESOURCE_TASK_SUMMARY",
            RelationKind::ResourceTaskComment => "RESOURCE_TASK_COMMENT",
            RelationKind::TaskRevision => "TASK_REVISION",
            RelationKind::Cochange => "COCHANGE",
            RelationKind::DevProximity => "DEV_PROXIMITY",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.as_str() == s)
    }
}

impl fmt::Display for RelationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Evidence {
    pub description: String,
    pub locator: String,
}

impl Evidence {
    pub fn new(description: impl Into<String>, locator: impl Into<String>) -> Self {
        Self {
            description: description.into(),
            locator: locator.into(),
        }
    }
}

impl fmt::Display for Evidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]", self.description, self.locator)
    }
}

/// Identity of a relation in the store.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RelationKey {
    pub kind: RelationKind,
    pub source_id: String,
    pub target_id: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub kind: RelationKind,
    pub source_id: String,
    pub target_id: String,
    /// Always equal to `evidence.len()`.
    pub weight: u64,
    pub evidence: Vec<Evidence>,
}

impl Relation {
    /// Builds a relation with weight taken from the evidence count. Undirected
    /// kinds get their endpoints ordered.
    pub fn new(
        kind: RelationKind,
        source_id: impl Into<String>,
        target_id: impl Into<String>,
        evidence: Vec<Evidence>,
    ) -> Self {
        let (mut source_id, mut target_id) = (source_id.into(), target_id.into());
        if kind.is_undirected() && target_id < source_id {
            std::mem::swap(&mut source_id, &mut target_id);
        }
        Self {
            kind,
            source_id,
            target_id,
            weight: evidence.len() as u64,
            evidence,
        }
    }

    pub fn key(&self) -> RelationKey {
        RelationKey {
            kind: self.kind,
            source_id: self.source_id.clone(),
            target_id: self.target_id.clone(),
        }
    }

    /// The endpoint opposite `id` (for undirected kinds either side).
    pub fn other_end(&self, id: &str) -> &str {
        if self.source_id == id {
            &self.target_id
        } else {
            &self.source_id
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Developer {
    pub developer_id: String,
    pub display_name: String,
    pub vcs_authors: BTreeSet<String>,
    pub its_accounts: BTreeSet<String>,
}

impl Developer {
    pub(crate) fn refresh_display_name(&mut self) {
        self.display_name = self
            .vcs_authors
            .iter()
            .chain(self.its_accounts.iter())
            .map(|s| s.trim())
            .find(|s| !s.is_empty())
            .unwrap_or(&self.developer_id)
            .to_string();
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Resource {
    pub resource_id: String,
    pub path: String,
    pub file_name: String,
    pub class_name: Option<String>,
    pub fqn: Option<String>,
    pub is_source: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Change {
    pub resource_id: String,
    pub change_kind: ChangeKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Revision {
    pub revision_id: String,
    /// Canonical developer id.
    pub author: String,
    pub author_raw: String,
    #[serde(with = "rfc3339")]
    pub timestamp: DateTime<Utc>,
    pub message: String,
    pub changes: Vec<Change>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comment {
    pub author: String,
    #[serde(with = "rfc3339")]
    pub timestamp: DateTime<Utc>,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Task {
    pub task_id: String,
    pub external_id: String,
    /// Canonical developer id; `None` when the export had no assignee.
    pub assignee: Option<String>,
    pub assignee_raw: String,
    pub summary: String,
    pub status: String,
    pub comments: Vec<Comment>,
}

impl Task {
    pub fn last_activity(&self) -> Option<DateTime<Utc>> {
        self.comments.iter().map(|c| c.timestamp).max()
    }
}
