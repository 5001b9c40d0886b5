//! Whole-token name matching.

use super::MatchConfig;

pub fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

/// True when `text[start..start + len]` is not glued to a letter, digit or
/// underscore on either side.
pub fn is_token_match(text: &str, start: usize, len: usize) -> bool {
    let before = text[..start].chars().next_back();
    let after = text[start + len..].chars().next();
    !before.is_some_and(is_word_char) && !after.is_some_and(is_word_char)
}

/// True when `name` is long enough to be searched for at all.
pub fn is_matchable(name: &str, cfg: &MatchConfig) -> bool {
    !name.is_empty() && name.chars().count() >= cfg.min_class_name_length
}

/// Byte offsets of every whole-token occurrence of `name` in `text`.
///
/// Dots and other punctuation in `name` match literally. With
/// `case_sensitive = false` ASCII letters are folded.
pub fn match_name_in_text(name: &str, text: &str, cfg: &MatchConfig) -> Vec<usize> {
    if !is_matchable(name, cfg) || name.len() > text.len() {
        return Vec::new();
    }
    let folded;
    let (needle, haystack) = if cfg.case_sensitive {
        (name, text)
    } else {
        folded = (name.to_ascii_lowercase(), text.to_ascii_lowercase());
        (folded.0.as_str(), folded.1.as_str())
    };
    let step = needle.chars().next().map_or(1, char::len_utf8);
    let mut out = Vec::new();
    let mut from = 0;
    while let Some(found) = haystack[from..].find(needle) {
        let start = from + found;
        if is_token_match(text, start, needle.len()) {
            out.push(start);
        }
        from = start + step;
        if from > haystack.len() {
            break;
        }
    }
    out
}
