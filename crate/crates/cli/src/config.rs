use std::fs;
use std::net::IpAddr;
use std::path::Path;

use anyhow::{Context, Result};
use devctx_core::{MatchConfig, QueryConfig};
use serde::Deserialize;

/// Contents of a `--config` file. Every table is optional.
///
/// ```toml
/// [match]
/// case_sensitive = false
/// id_patterns = ["bug <id>", "#<id>"]
///
/// [query.kind_weights]
/// COCHANGE = 0.5
///
/// [serve]
/// port = 9000
/// ```
#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    #[serde(rename = "match")]
    pub matching: MatchConfig,
    pub query: QueryConfig,
    pub serve: ServeTable,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ServeTable {
    pub port: Option<u16>,
    pub bind: Option<IpAddr>,
    pub cors: Option<bool>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = fs::read_to_string(path).with_context(|| format!("cannot read config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("invalid config {}", path.display()))
    }
}
