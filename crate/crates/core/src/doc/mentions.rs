use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use regex::Regex;

use super::{Document, ElementCategory};

fn label_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(r"(?i)\b(?:(table)|(figure)|(fig)\.)\s*(\d+)\b").expect("valid label regex")
    })
}

/// Canonical form of a float reference ("fig. 3" -> "Figure 3"), or `None`
/// when `label` is not exactly one such reference.
pub fn canonical_label(label: &str) -> Option<String> {
    let caps = label_regex().captures(label.trim())?;
    let whole = caps.get(0)?;
    if whole.start() != 0 || whole.end() != label.trim().len() {
        return None;
    }
    Some(render_label(&caps))
}

fn render_label(caps: &regex::Captures<'_>) -> String {
    let n: u64 = caps[4].parse().unwrap_or(0);
    if caps.get(1).is_some() {
        format!("Table {n}")
    } else {
        format!("Figure {n}")
    }
}

fn is_word(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

/// True when `needle` occurs in `hay` with no word character on either side.
fn contains_token(hay: &str, needle: &str) -> bool {
    if needle.is_empty() {
        return false;
    }
    hay.match_indices(needle).any(|(at, _)| {
        let before = hay[..at].chars().next_back();
        let after = hay[at + needle.len()..].chars().next();
        let starts_word = needle.chars().next().is_some_and(is_word);
        let ends_word = needle.chars().next_back().is_some_and(is_word);
        !(starts_word && before.is_some_and(is_word)) && !(ends_word && after.is_some_and(is_word))
    })
}

/// Rebuilds `mention_index` from Text/List elements: float references
/// ("Table N", "Figure N", "Fig. N", any case) and the document's citation
/// keys, all as whole-token matches. Elements carrying explicit `xrefs` use
/// those instead of their text.
pub fn build_mention_index(mut doc: Document) -> Document {
    let mut index: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    let references: Vec<&String> = doc.references.iter().filter(|r| !r.trim().is_empty()).collect();
    for el in doc.pages.iter().flat_map(|p| &p.elements) {
        if !matches!(el.category, ElementCategory::Text | ElementCategory::List) {
            continue;
        }
        let mut labels = BTreeSet::new();
        match &el.xrefs {
            Some(xrefs) => {
                for x in xrefs {
                    let x = x.trim();
                    if x.is_empty() {
                        continue;
                    }
                    labels.insert(canonical_label(x).unwrap_or_else(|| x.to_string()));
                }
            }
            None => {
                for caps in label_regex().captures_iter(&el.text) {
                    labels.insert(render_label(&caps));
                }
                for r in &references {
                    if contains_token(&el.text, r) {
                        labels.insert((*r).clone());
                    }
                }
            }
        }
        for l in labels {
            index.entry(l).or_default().insert(el.id.clone());
        }
    }
    doc.mention_index = index;
    doc
}
