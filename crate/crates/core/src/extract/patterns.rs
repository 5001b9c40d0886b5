//! Task id reference templates such as `bug <id>` and `#<id>`.
//!
//! In a template, a whitespace run matches one or more whitespace characters
//! and letters match case-insensitively. A template that starts (ends) with a
//! word character also needs a non-word character before (after) the match.
//! The id itself must not be adjacent to other digits.

use super::config::ConfigError;
use super::matcher::is_word_char;
use super::MatchConfig;

const PLACEHOLDER: &str = "<id>";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tok {
    Space,
    Lit(char),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdPattern {
    template: String,
    prefix: Vec<Tok>,
    suffix: Vec<Tok>,
}

fn tokenize(s: &str) -> Vec<Tok> {
    let mut out = Vec::new();
    for c in s.chars() {
        if c.is_whitespace() {
            if out.last() != Some(&Tok::Space) {
                out.push(Tok::Space);
            }
        } else {
            out.push(Tok::Lit(c));
        }
    }
    out
}

fn same_letter(a: char, b: char) -> bool {
    a == b || a.to_lowercase().eq(b.to_lowercase())
}

fn is_id_digit(c: char) -> bool {
    c.is_ascii_digit()
}

/// Start offsets where `id` occurs with no digit immediately before or after.
pub fn id_occurrences<'a>(message: &'a str, id: &'a str) -> impl Iterator<Item = usize> + 'a {
    let step = id.chars().next().map_or(1, char::len_utf8);
    let mut from = 0;
    std::iter::from_fn(move || {
        if id.is_empty() {
            return None;
        }
        while from <= message.len() {
            let start = from + message[from..].find(id)?;
            from = start + step;
            let before = message[..start].chars().next_back();
            let after = message[start + id.len()..].chars().next();
            if !before.is_some_and(is_id_digit) && !after.is_some_and(is_id_digit) {
                return Some(start);
            }
        }
        None
    })
}

impl IdPattern {
    pub fn parse(template: &str) -> Result<Self, ConfigError> {
        let (prefix, suffix) = template
            .split_once(PLACEHOLDER)
            .filter(|(_, rest)| !rest.contains(PLACEHOLDER))
            .ok_or_else(|| ConfigError::BadIdPattern(template.to_string()))?;
        Ok(Self {
            template: template.to_string(),
            prefix: tokenize(prefix),
            suffix: tokenize(suffix),
        })
    }

    pub fn template(&self) -> &str {
        &self.template
    }

    pub fn is_bare(&self) -> bool {
        self.prefix.is_empty() && self.suffix.is_empty()
    }

    /// Whether this template may be tried for `id` at all.
    pub fn applies_to(&self, id: &str, cfg: &MatchConfig) -> bool {
        !id.is_empty() && (!self.is_bare() || id.chars().count() >= cfg.bare_id_min_digits)
    }

    /// Start offset (of the whole instantiated template) of the first match.
    pub fn find(&self, message: &str, id: &str) -> Option<usize> {
        id_occurrences(message, id).find_map(|at| self.match_around(message, at, id.len()))
    }

    /// Whether an instantiation of this template starts exactly at `start`.
    pub fn matches_at(&self, message: &str, id: &str, start: usize) -> bool {
        id_occurrences(message, id).any(|at| self.match_around(message, at, id.len()) == Some(start))
    }

    fn match_around(&self, text: &str, id_start: usize, id_len: usize) -> Option<usize> {
        let start = self.match_prefix(text, id_start)?;
        self.match_suffix(text, id_start + id_len)?;
        Some(start)
    }

    fn match_prefix(&self, text: &str, end: usize) -> Option<usize> {
        let mut pos = end;
        for tok in self.prefix.iter().rev() {
            match *tok {
                Tok::Space => {
                    let before = pos;
                    while let Some(c) = text[..pos].chars().next_back().filter(|c| c.is_whitespace()) {
                        pos -= c.len_utf8();
                    }
                    if pos == before {
                        return None;
                    }
                }
                Tok::Lit(want) => {
                    let c = text[..pos].chars().next_back()?;
                    if !same_letter(c, want) {
                        return None;
                    }
                    pos -= c.len_utf8();
                }
            }
        }
        if let Some(Tok::Lit(first)) = self.prefix.first() {
            if is_word_char(*first) && text[..pos].chars().next_back().is_some_and(is_word_char) {
                return None;
            }
        }
        Some(pos)
    }

    fn match_suffix(&self, text: &str, start: usize) -> Option<usize> {
        let mut pos = start;
        for tok in &self.suffix {
            match *tok {
                Tok::Space => {
                    let before = pos;
                    while let Some(c) = text[pos..].chars().next().filter(|c| c.is_whitespace()) {
                        pos += c.len_utf8();
                    }
                    if pos == before {
                        return None;
                    }
                }
                Tok::Lit(want) => {
                    let c = text[pos..].chars().next()?;
                    if !same_letter(c, want) {
                        return None;
                    }
                    pos += c.len_utf8();
                }
            }
        }
        if let Some(Tok::Lit(last)) = self.suffix.last() {
            if is_word_char(*last) && text[pos..].chars().next().is_some_and(is_word_char) {
                return None;
            }
        }
        Some(pos)
    }
}

/// Tries the templates in order; returns the first that fires as
/// `(template index, match offset)`.
pub fn match_task_reference(
    external_id: &str,
    message: &str,
    patterns: &[IdPattern],
    cfg: &MatchConfig,
) -> Option<(usize, usize)> {
    patterns.iter().enumerate().find_map(|(i, p)| {
        if !p.applies_to(external_id, cfg) {
            return None;
        }
        p.find(message, external_id).map(|at| (i, at))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn first(id: &str, message: &str) -> Option<(&'static str, usize)> {
        let cfg = MatchConfig::default();
        let patterns = cfg.compiled_patterns().unwrap();
        const NAMES: [&str; 3] = ["bug <id>", "#<id>", "<id>"];
        match_task_reference(id, message, &patterns, &cfg).map(|(i, at)| (NAMES[i], at))
    }

    #[test]
    fn bug_keyword() {
        assert_eq!(first("2042", "fix for bug 2042: NPE on startup"), Some(("bug <id>", 8)));
        assert_eq!(first("2042", "Fixed BUG  2042"), Some(("bug <id>", 6)));
        assert_eq!(first("2042", "bug\t2042"), Some(("bug <id>", 0)));
    }

    #[test]
    fn keyword_needs_word_boundary() {
        // "debug 2042" is not "bug 2042", but the bare id still fires
        assert_eq!(first("2042", "debug 2042"), Some(("<id>", 6)));
        assert_eq!(first("2042", "bugs 2042"), Some(("<id>", 5)));
    }

    #[test]
    fn hash_form() {
        assert_eq!(first("773", "#773 resolved"), Some(("#<id>", 0)));
        assert_eq!(first("773", "see bug #773"), Some(("#<id>", 8)));
    }

    #[test]
    fn digit_boundaries() {
        assert_eq!(first("2042", "bump to 20421"), None);
        assert_eq!(first("2042", "r12042"), None);
        assert_eq!(first("2042", "bug 20420"), None);
        assert_eq!(first("773", "#0773"), None);
        assert_eq!(first("2042", "v2042."), Some(("<id>", 1)));
    }

    #[test]
    fn bare_id_gate() {
        assert_eq!(first("42", "bump to 42"), None);
        assert_eq!(first("42", "bug 42"), Some(("bug <id>", 0)));
        assert_eq!(first("42", "#42"), Some(("#<id>", 0)));
        assert_eq!(first("420", "release 420"), Some(("<id>", 8)));
    }

    #[test]
    fn pattern_order_wins_over_position() {
        assert_eq!(first("2042", "2042 again, see bug 2042"), Some(("bug <id>", 16)));
    }

    #[test]
    fn suffix_templates() {
        let p = IdPattern::parse("[<id>]").unwrap();
        assert_eq!(p.find("closes [55]", "55"), Some(7));
        assert_eq!(p.find("closes [55", "55"), None);
        let p = IdPattern::parse("<id> fixed").unwrap();
        assert_eq!(p.find("55 fixed", "55"), Some(0));
        assert_eq!(p.find("55 fixedness", "55"), None);
        assert!(p.matches_at("55 fixed", "55", 0));
        assert!(!p.matches_at("55 fixed", "55", 1));
    }

    #[test]
    fn bad_templates() {
        assert!(IdPattern::parse("bug").is_err());
        assert!(IdPattern::parse("<id>-<id>").is_err());
    }

    #[test]
    fn non_numeric_ids() {
        let cfg = MatchConfig::default();
        let patterns = cfg.compiled_patterns().unwrap();
        assert_eq!(
            match_task_reference("GEC-12", "fixes #GEC-12", &patterns, &cfg),
            Some((1, 6))
        );
    }
}
