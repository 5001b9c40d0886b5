//! Matchable names of a resource: file name, and for source files the
//! class name and package-qualified name.

use serde::{Deserialize, Serialize};

use super::MatchConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NameForm {
    FileName,
    ClassName,
    Fqn,
}

impl NameForm {
    pub fn as_str(self) -> &'static str {
        match self {
            NameForm::FileName => "file_name",
            NameForm::ClassName => "class_name",
            NameForm::Fqn => "fqn",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "file_name" => Some(NameForm::FileName),
            "class_name" => Some(NameForm::ClassName),
            "fqn" => Some(NameForm::Fqn),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResourceNames {
    pub file_name: String,
    pub class_name: Option<String>,
    pub fqn: Option<String>,
}

impl ResourceNames {
    /// Name forms in fixed order; a form whose text equals an earlier one is
    /// omitted so a single occurrence is never counted twice.
    pub fn forms(&self) -> Vec<(NameForm, &str)> {
        let mut out: Vec<(NameForm, &str)> = vec![(NameForm::FileName, &self.file_name)];
        for (form, name) in [
            (NameForm::ClassName, self.class_name.as_deref()),
            (NameForm::Fqn, self.fqn.as_deref()),
        ] {
            if let Some(name) = name {
                if out.iter().all(|(_, seen)| *seen != name) {
                    out.push((form, name));
                }
            }
        }
        out
    }
}

pub fn derive_resource_names(path: &str, cfg: &MatchConfig) -> ResourceNames {
    let segments: Vec<&str> = path.split('/').filter(|s| !s.is_empty()).collect();
    let file_name = segments.last().copied().unwrap_or(path).to_string();
    let stem_ext = file_name
        .rsplit_once('.')
        .filter(|(stem, _)| !stem.is_empty());
    let Some((stem, _)) = stem_ext.filter(|(_, ext)| cfg.source_extensions.contains(*ext)) else {
        return ResourceNames {
            file_name,
            class_name: None,
            fqn: None,
        };
    };
    let class_name = stem.to_string();
    let dirs = &segments[..segments.len().saturating_sub(1)];
    let fqn = cfg.source_root_markers.iter().find_map(|marker| {
        let marker: Vec<&str> = marker.split('/').filter(|s| !s.is_empty()).collect();
        if marker.is_empty() || marker.len() > dirs.len() {
            return None;
        }
        let at = dirs.windows(marker.len()).position(|w| w == marker.as_slice())?;
        let mut parts: Vec<&str> = dirs[at + marker.len()..].to_vec();
        parts.push(stem);
        Some(parts.join("."))
    });
    ResourceNames {
        file_name,
        class_name: Some(class_name),
        fqn,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(path: &str) -> (String, Option<String>, Option<String>) {
        let n = derive_resource_names(path, &MatchConfig::default());
        (n.file_name, n.class_name, n.fqn)
    }

    #[test]
    fn source_file_under_src() {
        assert_eq!(
            names("plugin/src/eu/geclipse/core/GridModel.java"),
            (
                "GridModel.java".into(),
                Some("GridModel".into()),
                Some("eu.geclipse.core.GridModel".into())
            )
        );
    }

    #[test]
    fn non_source_file() {
        assert_eq!(names("docs/readme.txt"), ("readme.txt".into(), None, None));
    }

    #[test]
    fn root_source_file_has_no_fqn() {
        assert_eq!(names("Foo.java"), ("Foo.java".into(), Some("Foo".into()), None));
    }

    #[test]
    fn marker_order_prefers_maven_layout() {
        assert_eq!(
            names("mod/src/main/java/org/x/Y.java").2,
            Some("org.x.Y".to_string())
        );
        assert_eq!(names("mod/src/test/java/org/x/YTest.java").2, Some("org.x.YTest".to_string()));
    }

    #[test]
    fn marker_must_be_a_directory() {
        // file literally named "src" is not a marker hit
        assert_eq!(names("lib/Src.java").2, None);
        assert_eq!(names("src/Foo.java").2, Some("Foo".to_string()));
    }

    #[test]
    fn dotfiles_and_other_extensions() {
        assert_eq!(names(".java"), (".java".into(), None, None));
        assert_eq!(names("a/src/B.JAVA"), ("B.JAVA".into(), None, None));
    }

    #[test]
    fn forms_dedupe_equal_text() {
        let n = derive_resource_names("src/Foo.java", &MatchConfig::default());
        let forms: Vec<_> = n.forms().into_iter().map(|(f, _)| f).collect();
        assert_eq!(forms, [NameForm::FileName, NameForm::ClassName]);
    }
}
