use std::net::IpAddr;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use devctx_core::{AlgorithmSet, EntityKind, MatchConfig};

#[derive(Debug, Parser)]
#[command(name = "devctx", version, about = "Capture and query project context from VCS and issue tracker history")]
pub struct Cli {
    /// TOML file with `[match]`, `[query]` and `[serve]` tables; flags take precedence.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Suppress summaries and reports (results and errors are still printed).
    #[arg(long, short, global = true)]
    pub quiet: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Convert a raw export into canonical JSONL.
    Adapt(AdaptArgs),
    /// Build a snapshot from canonical JSONL inputs.
    Ingest(IngestArgs),
    /// Run relation extraction and update the snapshot in place.
    Extract(ExtractArgs),
    /// Print the ranked context of one entity.
    Query(QueryArgs),
    /// Serve the snapshot over HTTP.
    Serve(ServeArgs),
    /// Print relation and entity counts of a snapshot.
    Stats(StatsArgs),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Table,
    Json,
}

#[derive(Debug, Args)]
pub struct AdaptArgs {
    /// Commit log export (one `commit`, `author`, `date`, `message` block per revision).
    #[arg(long, value_name = "FILE", required_unless_present = "issue_xml", conflicts_with = "issue_xml")]
    pub vcs_log: Option<PathBuf>,

    /// Issue tracker XML export.
    #[arg(long, value_name = "FILE")]
    pub issue_xml: Option<PathBuf>,

    #[arg(long, value_name = "JSONL")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    #[arg(long, value_name = "JSONL")]
    pub revisions: PathBuf,

    #[arg(long, value_name = "JSONL")]
    pub tasks: PathBuf,

    /// Developer identity map; without it every raw identity becomes its own developer.
    #[arg(long, value_name = "JSON")]
    pub identity: Option<PathBuf>,

    #[arg(long, value_name = "SNAPSHOT")]
    pub out: PathBuf,

    #[command(flatten)]
    pub matching: MatchArgs,

    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    #[arg(long, value_name = "SNAPSHOT")]
    pub snapshot: PathBuf,

    /// `all` or a comma separated subset of resource_task_summary,
    /// resource_task_comment, task_revision, cochange, dev_proximity.
    #[arg(long, default_value = "all", value_parser = parse_algorithms)]
    pub algorithms: AlgorithmSet,

    #[command(flatten)]
    pub matching: MatchArgs,

    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FocusKind {
    Resource,
    Task,
    Developer,
}

impl From<FocusKind> for EntityKind {
    fn from(kind: FocusKind) -> Self {
        match kind {
            FocusKind::Resource => EntityKind::Resource,
            FocusKind::Task => EntityKind::Task,
            FocusKind::Developer => EntityKind::Developer,
        }
    }
}

#[derive(Debug, Args)]
pub struct QueryArgs {
    #[arg(value_enum)]
    pub kind: FocusKind,

    pub id: String,

    #[arg(long, value_name = "SNAPSHOT")]
    pub snapshot: PathBuf,

    /// Entries per section.
    #[arg(long, short, default_value_t = devctx_server::DEFAULT_K)]
    pub k: usize,

    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, value_name = "SNAPSHOT")]
    pub snapshot: PathBuf,

    /// Defaults to 7878.
    #[arg(long)]
    pub port: Option<u16>,

    /// Defaults to 127.0.0.1.
    #[arg(long)]
    pub bind: Option<IpAddr>,

    /// Omit CORS headers.
    #[arg(long)]
    pub no_cors: bool,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[arg(long, value_name = "SNAPSHOT")]
    pub snapshot: PathBuf,

    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

/// Overrides for every matching option.
#[derive(Debug, Args, Default)]
pub struct MatchArgs {
    /// Match resource names case sensitively (default true).
    #[arg(long, value_name = "BOOL")]
    pub case_sensitive: Option<bool>,

    /// Names shorter than this never match (default 3).
    #[arg(long, value_name = "N")]
    pub min_class_name_length: Option<usize>,

    /// Task reference template containing `<id>`; repeat for several, tried in order.
    /// Replaces the default list `bug <id>`, `#<id>`, `<id>`.
    #[arg(long = "id-pattern", value_name = "TEMPLATE")]
    pub id_patterns: Vec<String>,

    /// The bare `<id>` template only applies to ids with at least this many characters (default 3).
    #[arg(long, value_name = "N")]
    pub bare_id_min_digits: Option<usize>,

    /// Revisions touching more resources than this yield no co-change pairs (default 50).
    #[arg(long, value_name = "N")]
    pub max_changeset_size: Option<usize>,

    /// Minimum shared revisions for a co-change relation (default 2).
    #[arg(long, value_name = "N")]
    pub cochange_min_weight: Option<u64>,

    /// Extension marking a source file; repeat for several. Replaces the default `java`.
    #[arg(long = "source-extension", value_name = "EXT")]
    pub source_extensions: Vec<String>,

    /// Directory after which a source path spells its package; repeat for several.
    #[arg(long = "source-root-marker", value_name = "DIR")]
    pub source_root_markers: Vec<String>,
}

impl MatchArgs {
    pub fn apply(&self, cfg: &mut MatchConfig) {
        if let Some(v) = self.case_sensitive {
            cfg.case_sensitive = v;
        }
        if let Some(v) = self.min_class_name_length {
            cfg.min_class_name_length = v;
        }
        if !self.id_patterns.is_empty() {
            cfg.id_patterns = self.id_patterns.clone();
        }
        if let Some(v) = self.bare_id_min_digits {
            cfg.bare_id_min_digits = v;
        }
        if let Some(v) = self.max_changeset_size {
            cfg.max_changeset_size = v;
        }
        if let Some(v) = self.cochange_min_weight {
            cfg.cochange_min_weight = v;
        }
        if !self.source_extensions.is_empty() {
            cfg.source_extensions = self
                .source_extensions
                .iter()
                .map(|e| e.trim_start_matches('.').to_string())
                .collect();
        }
        if !self.source_root_markers.is_empty() {
            cfg.source_root_markers = self.source_root_markers.clone();
        }
    }
}

fn parse_algorithms(s: &str) -> Result<AlgorithmSet, String> {
    s.parse().map_err(|e: devctx_core::extract::ExtractError| e.to_string())
}
