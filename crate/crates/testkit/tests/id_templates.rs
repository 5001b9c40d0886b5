//! Template matching checked against a regex translation of each template.

use devctx_core::extract::matcher::is_word_char;
use devctx_core::extract::patterns::IdPattern;
use proptest::prelude::*;
use regex::Regex;

const TEMPLATES: &[&str] = &["bug <id>", "#<id>", "<id>", "fixes <id>", "[<id>]", "<id> done", "issue:<id>", "bug  #<id>"];

fn translate(part: &str) -> String {
    let mut out = String::new();
    let mut in_space = false;
    for c in part.chars() {
        if c.is_whitespace() {
            if !in_space {
                out.push_str(r"\s+");
            }
            in_space = true;
            continue;
        }
        in_space = false;
        if c.is_alphabetic() {
            out.push_str(&format!("(?i:{})", regex::escape(&c.to_string())));
        } else {
            out.push_str(&regex::escape(&c.to_string()));
        }
    }
    out
}

/// Earliest start offset of a valid instantiation, by trying every start.
fn reference_find(template: &str, message: &str, id: &str) -> Option<usize> {
    let (prefix, suffix) = template.split_once("<id>").unwrap();
    let re = Regex::new(&format!("^({})({})({})", translate(prefix), regex::escape(id), translate(suffix))).unwrap();
    let word_first = prefix.chars().next().is_some_and(is_word_char);
    let word_last = suffix.chars().last().is_some_and(is_word_char);
    message.char_indices().map(|(i, _)| i).find(|&start| {
        let Some(caps) = re.captures(&message[start..]) else {
            return false;
        };
        let id_start = start + caps.get(2).unwrap().start();
        let id_end = start + caps.get(2).unwrap().end();
        let end = start + caps.get(0).unwrap().end();
        let before = |at: usize| message[..at].chars().next_back();
        let after = |at: usize| message[at..].chars().next();
        !(word_first && before(start).is_some_and(is_word_char))
            && !(word_last && after(end).is_some_and(is_word_char))
            && !before(id_start).is_some_and(|c| c.is_ascii_digit())
            && !after(id_end).is_some_and(|c| c.is_ascii_digit())
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 2000, ..ProptestConfig::default() })]

    #[test]
    fn find_agrees_with_regex(
        template in prop::sample::select(TEMPLATES),
        id in prop::sample::select(&["7", "42", "773", "2042", "GEC-5"][..]),
        message in "[bugBUG #\\[\\]:a-z0-9 \t\n_.-]{0,40}",
        splice in any::<bool>(),
        at in 0usize..40,
    ) {
        // splice an id in somewhere half of the time so matches are common
        let message = if splice {
            let at = at.min(message.len());
            format!("{}{}{}", &message[..at], id, &message[at..])
        } else {
            message
        };
        let pattern = IdPattern::parse(template).unwrap();
        prop_assert_eq!(pattern.find(&message, id), reference_find(template, &message, id), "{:?}", message);
    }
}
