use std::collections::{BTreeMap, BTreeSet};

use super::{
    Family, ParamBinding, QuestionTemplate, SlotKind, FLOAT_LABELS, LABELS, NUMBERS, ORDINALS, POSITIONS,
    RELATIONS,
};
use crate::doc::{canonical_label, ElementCategory};
use crate::program::Scope;

fn fixed(values: &[&str]) -> Vec<String> {
    values.iter().map(|s| s.to_string()).collect()
}

fn has_text(s: &str) -> bool {
    !s.trim().is_empty()
}

/// Title texts occurring exactly once among the scope's titles.
fn unique_titles(scope: &Scope<'_>) -> Vec<String> {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for e in scope.elements() {
        if e.category == ElementCategory::Title && has_text(&e.text) {
            *counts.entry(e.text.as_str()).or_default() += 1;
        }
    }
    counts.into_iter().filter(|&(_, n)| n == 1).map(|(t, _)| t.to_string()).collect()
}

fn candidates(tpl: &QuestionTemplate, kind: SlotKind, scope: &Scope<'_>) -> Vec<String> {
    match kind {
        SlotKind::Label { .. } => fixed(&LABELS),
        SlotKind::FloatLabel => fixed(&FLOAT_LABELS),
        SlotKind::Position => fixed(&POSITIONS),
        SlotKind::Relation { .. } => RELATIONS.iter().map(|r| r.value.to_string()).collect(),
        SlotKind::Number => fixed(&NUMBERS),
        SlotKind::Ordinal => fixed(&ORDINALS),
        SlotKind::TitleText { .. } => match tpl.family {
            // Any title of the document may be asked about on any page.
            Family::TitleExists => scope
                .doc
                .elements()
                .filter(|e| e.category == ElementCategory::Title && has_text(&e.text))
                .map(|e| e.text.clone())
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect(),
            Family::ChildSections => {
                let graph = scope.logical();
                let elements = scope.elements();
                unique_titles(scope)
                    .into_iter()
                    .filter(|text| {
                        let Some(title) =
                            elements.iter().find(|e| e.category == ElementCategory::Title && e.text == *text)
                        else {
                            return false;
                        };
                        graph.children(&title.id).is_ok_and(|kids| {
                            kids.iter().any(|k| {
                                scope.position(k).is_some_and(|p| elements[p].category == ElementCategory::Title)
                            })
                        })
                    })
                    .collect()
            }
            _ => unique_titles(scope),
        },
        SlotKind::FloatRef => scope
            .doc
            .mention_index
            .keys()
            .filter(|k| canonical_label(k).as_deref() == Some(k.as_str()))
            .cloned()
            .collect(),
        SlotKind::Citation => scope
            .doc
            .references
            .iter()
            .filter(|r| has_text(r) && canonical_label(r).as_deref() != Some(r.as_str()))
            .filter(|r| scope.doc.mention_index.get(*r).is_some_and(|m| !m.is_empty()))
            .cloned()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect(),
    }
}

/// Every binding of `tpl` whose text anchors exist in `scope` (and are
/// unique where the program locates them), sorted slot-lexicographically.
pub fn enumerate_bindings(tpl: &QuestionTemplate, scope: &Scope<'_>) -> Vec<ParamBinding> {
    let mut slots: Vec<(&str, Vec<String>)> = tpl
        .slots
        .iter()
        .map(|(name, kind)| (name.as_str(), candidates(tpl, *kind, scope)))
        .collect();
    slots.sort_by(|a, b| a.0.cmp(b.0));
    let mut out = vec![ParamBinding::new()];
    for (name, values) in slots {
        out = out
            .into_iter()
            .flat_map(|partial| {
                values.iter().map(move |v| {
                    let mut b = partial.clone();
                    b.insert(name.to_string(), v.clone());
                    b
                })
            })
            .collect();
    }
    out.sort();
    out
}
