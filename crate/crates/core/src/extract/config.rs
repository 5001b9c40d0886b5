use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use super::patterns::IdPattern;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("{field} must be at least {min}, got {value}")]
    TooSmall {
        field: &'static str,
        min: u64,
        value: u64,
    },
    #[error("id_patterns must not be empty")]
    NoIdPatterns,
    #[error("id pattern `{0}` must contain `<id>` exactly once")]
    BadIdPattern(String),
}

/// Every knob used by the matchers and the co-change counter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MatchConfig {
    pub case_sensitive: bool,
    /// Names shorter than this (in characters) never match.
    pub min_class_name_length: usize,
    /// Ordered templates; `<id>` is replaced by the task's external id.
    pub id_patterns: Vec<String>,
    /// The bare `<id>` template only applies to ids at least this long.
    pub bare_id_min_digits: usize,
    /// Revisions touching more resources than this contribute no co-change pairs.
    pub max_changeset_size: usize,
    pub cochange_min_weight: u64,
    pub source_extensions: BTreeSet<String>,
    pub source_root_markers: Vec<String>,
}

impl Default for MatchConfig {
    fn default() -> Self {
        Self {
            case_sensitive: true,
            min_class_name_length: 3,
            id_patterns: vec!["bug <id>".into(), "#<id>".into(), "<id>".into()],
            bare_id_min_digits: 3,
            max_changeset_size: 50,
            cochange_min_weight: 2,
            source_extensions: BTreeSet::from(["java".to_string()]),
            source_root_markers: vec![
                "src/main/java".into(),
                "src/test/java".into(),
                "src".into(),
            ],
        }
    }
}

impl MatchConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let at_least = |field, min: u64, value: u64| {
            if value < min {
                Err(ConfigError::TooSmall { field, min, value })
            } else {
                Ok(())
            }
        };
        at_least("min_class_name_length", 1, self.min_class_name_length as u64)?;
        at_least("bare_id_min_digits", 1, self.bare_id_min_digits as u64)?;
        at_least("max_changeset_size", 1, self.max_changeset_size as u64)?;
        at_least("cochange_min_weight", 1, self.cochange_min_weight)?;
        if self.id_patterns.is_empty() {
            return Err(ConfigError::NoIdPatterns);
        }
        for template in &self.id_patterns {
            IdPattern::parse(template)?;
        }
        Ok(())
    }

    /// Parsed id templates, in configured order.
    pub fn compiled_patterns(&self) -> Result<Vec<IdPattern>, ConfigError> {
        self.id_patterns.iter().map(|t| IdPattern::parse(t)).collect()
    }

    /// SHA-256 over the canonical JSON form.
    pub fn hash(&self) -> String {
        let json = serde_json::to_vec(self).expect("config serializes");
        hex::encode(Sha256::digest(&json))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let cfg = MatchConfig::default();
        cfg.validate().unwrap();
        assert_eq!(cfg.hash(), MatchConfig::default().hash());
        assert_eq!(cfg.hash().len(), 64);
    }

    #[test]
    fn bounds() {
        let cfg = MatchConfig {
            cochange_min_weight: 0,
            ..MatchConfig::default()
        };
        assert!(matches!(cfg.validate(), Err(ConfigError::TooSmall { field: "cochange_min_weight", .. })));
        let cfg = MatchConfig {
            id_patterns: vec![],
            ..MatchConfig::default()
        };
        assert_eq!(cfg.validate(), Err(ConfigError::NoIdPatterns));
        let cfg = MatchConfig {
            id_patterns: vec!["bug".into()],
            ..MatchConfig::default()
        };
        assert!(matches!(cfg.validate(), Err(ConfigError::BadIdPattern(_))));
    }

    #[test]
    fn partial_json_fills_defaults() {
        let cfg: MatchConfig = serde_json::from_str(r#"{"cochange_min_weight": 3}"#).unwrap();
        assert_eq!(cfg.cochange_min_weight, 3);
        assert_eq!(cfg.max_changeset_size, 50);
        assert_ne!(cfg.hash(), MatchConfig::default().hash());
    }
}
