//! Project-level context capture for software teams.
//!
//! Revisions from a version control export and tasks from an issue tracker
//! export are loaded into a [`Store`](store::Store). Explicit relations
//! (who authored a revision, who is assigned a task) are materialized at
//! ingest; implicit ones (resource/task mentions, task/revision references,
//! co-change, developer proximity) are produced by [`extract`]. The
//! [`query`] module answers "what is related to this entity" as ranked
//! context views.

pub mod extract;
pub mod ingest;
pub mod query;
pub mod store;

pub use extract::{run_extraction, Algorithm, AlgorithmSet, ExtractionReport, MatchConfig};
pub use ingest::identity::{resolve_identity, IdentityMap, Source};
pub use ingest::{parse_revisions, parse_tasks, RevisionRecord, TaskRecord};
pub use query::{ContextView, QueryConfig};
pub use store::{EntityKind, Relation, RelationKind, Store};

/// Version string written into snapshot provenance.
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
