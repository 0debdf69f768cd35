//! Brute-force reference semantics for every template family.
//!
//! Nothing here touches the spatial or logical graph types: relations are
//! recomputed from raw boxes per query, and section ownership comes from a
//! backwards scan over the document's reading order. Only heuristic
//! (numbering-based) hierarchies are supported.

use std::collections::BTreeSet;

use forge_core::templates::{Family, ParamBinding, QuestionTemplate};
use forge_core::{AnswerValue, BoundingBox, DocElement, Document, ElementCategory, Token};

use super::Outcome;

const EPS: f64 = 1e-6;

fn category(label: &str) -> ElementCategory {
    match label {
        "title" => ElementCategory::Title,
        "list" => ElementCategory::List,
        "table" => ElementCategory::Table,
        "figure" => ElementCategory::Figure,
        other => panic!("no category for label {other:?}"),
    }
}

fn in_region(b: &BoundingBox, pos: &str) -> bool {
    let cx = (b.x0 + b.x1) / 2.0;
    let cy = (b.y0 + b.y1) / 2.0;
    let v = cy < 0.5;
    let h = cx < 0.5;
    let v_set = cy != 0.5;
    let h_set = cx != 0.5;
    match pos {
        "top" => v_set && v,
        "bottom" => v_set && !v,
        "left" => h_set && h,
        "right" => h_set && !h,
        "top-left" => v_set && v && h_set && h,
        "top-right" => v_set && v && h_set && !h,
        "bottom-left" => v_set && !v && h_set && h,
        "bottom-right" => v_set && !v && h_set && !h,
        other => panic!("unknown position {other:?}"),
    }
}

/// True when the shared extent is at least half of the shorter extent.
fn aligned(a0: f64, a1: f64, b0: f64, b1: f64) -> bool {
    let shared = a1.min(b1) - a0.max(b0);
    shared > 0.0 && shared / (a1 - a0).min(b1 - b0) >= 0.5
}

/// Whether `b` stands in relation `rel` to the anchor `a`. "above" and
/// "below" also accept the two diagonals on their side.
fn related(a: &BoundingBox, b: &BoundingBox, rel: &str) -> bool {
    let ax = aligned(a.x0, a.x1, b.x0, b.x1);
    let ay = aligned(a.y0, a.y1, b.y0, b.y1);
    let dx = (b.x0 + b.x1) / 2.0 - (a.x0 + a.x1) / 2.0;
    let dy = (b.y0 + b.y1) / 2.0 - (a.y0 + a.y1) / 2.0;
    let up = dy < -EPS;
    let down = dy > EPS;
    let west = dx < -EPS;
    let east = dx > EPS;
    let diagonal = !ax && !ay;
    match rel {
        "above" => (ax && !ay && up) || (diagonal && up && (west || east)),
        "below" => (ax && !ay && down) || (diagonal && down && (west || east)),
        "left" => ay && !ax && west,
        "right" => ay && !ax && east,
        "top-left" => diagonal && up && west,
        "top-right" => diagonal && up && east,
        "bottom-left" => diagonal && down && west,
        "bottom-right" => diagonal && down && east,
        other => panic!("unknown relation {other:?}"),
    }
}

fn level(title: &str) -> usize {
    let first = title.split_whitespace().next().unwrap_or("");
    let number = first.strip_suffix('.').unwrap_or(first);
    if !number.is_empty() && number.split('.').all(|p| !p.is_empty() && p.chars().all(|c| c.is_ascii_digit())) {
        number.split('.').count()
    } else {
        1
    }
}

fn ordered(doc: &Document) -> Vec<&DocElement> {
    let mut v: Vec<&DocElement> = doc.pages.iter().flat_map(|p| &p.elements).collect();
    v.sort_by_key(|e| e.doc_reading_index);
    v
}

fn caption_of<'a>(doc: &'a Document, float: &DocElement) -> Option<&'a DocElement> {
    let page = &doc.pages[float.page_index];
    let cap = page.captions.get(&float.id)?;
    page.elements.iter().find(|e| &e.id == cap)
}

/// Title that a non-title element belongs to: the nearest title before it
/// in reading order, looking through a float to its caption.
fn owner<'a>(doc: &'a Document, e: &DocElement) -> Option<&'a DocElement> {
    let e = if e.category.is_float() { caption_of(doc, e).unwrap_or(e) } else { e };
    ordered(doc)
        .into_iter()
        .filter(|t| t.category == ElementCategory::Title && t.doc_reading_index < e.doc_reading_index)
        .max_by_key(|t| t.doc_reading_index)
}

/// Parent of a title: the nearest earlier title of a shallower level.
fn parent_title<'a>(doc: &'a Document, t: &DocElement) -> Option<&'a DocElement> {
    let l = level(&t.text);
    ordered(doc)
        .into_iter()
        .filter(|u| u.category == ElementCategory::Title && u.doc_reading_index < t.doc_reading_index)
        .filter(|u| level(&u.text) < l)
        .max_by_key(|u| u.doc_reading_index)
}

fn yes_no(b: bool) -> Outcome {
    Outcome::Answer(AnswerValue::Token(Token::from_bool(b)))
}

fn count(n: usize) -> Outcome {
    Token::from_count(n as u64).map_or(Outcome::Overflow, |t| Outcome::Answer(AnswerValue::Token(t)))
}

fn index_set(set: BTreeSet<usize>) -> Outcome {
    if set.is_empty() {
        Outcome::Answer(AnswerValue::NA)
    } else {
        Outcome::Answer(AnswerValue::ElementIndexSet(set))
    }
}

/// The answer a (template, binding) pair should have, computed directly.
pub fn execute(tpl: &QuestionTemplate, b: &ParamBinding, doc: &Document, page: Option<usize>) -> Outcome {
    assert!(doc.elements().all(|e| e.parent_id.is_none()), "oracle handles heuristic hierarchies only");
    let slot = |name: &str| b[name].as_str();
    let scope: Vec<&DocElement> = match page {
        Some(p) => {
            let mut v: Vec<&DocElement> = doc.pages[p].elements.iter().collect();
            v.sort_by_key(|e| e.page_reading_index);
            v
        }
        None => ordered(doc),
    };
    let of_cat = |c: ElementCategory| scope.iter().copied().filter(move |e| e.category == c);
    let anchor = |text: &str| -> Result<&DocElement, Outcome> {
        let hits: Vec<&DocElement> =
            scope.iter().copied().filter(|e| e.category == ElementCategory::Title && e.text == text).collect();
        match hits.len() {
            0 => Err(Outcome::AnchorMissing),
            1 => Ok(hits[0]),
            _ => Err(Outcome::AnchorAmbiguous),
        }
    };
    let related_count = || -> Result<usize, Outcome> {
        let a = anchor(slot("E2"))?;
        let cat = category(slot("E1"));
        Ok(of_cat(cat).filter(|e| related(&a.bbox, &e.bbox, slot("R"))).count())
    };
    let in_scope = |e: &DocElement| scope.iter().any(|s| s.id == e.id);
    // What an element is about, as a page index: a title is itself, a float
    // its caption, anything else its owning title when that is on the page.
    let described = |e: &DocElement| -> Outcome {
        let target = match e.category {
            ElementCategory::Title => Some(e),
            c if c.is_float() => caption_of(doc, e).filter(|cap| Some(cap.category) == c.caption_kind()),
            _ => owner(doc, e).filter(|t| in_scope(t)),
        };
        Outcome::Answer(target.map_or(AnswerValue::NA, |t| AnswerValue::ElementIndex(t.page_reading_index)))
    };
    let first_in_region = |cat: ElementCategory| {
        of_cat(cat).filter(|e| in_region(&e.bbox, slot("pos"))).min_by_key(|e| e.page_reading_index)
    };

    match tpl.family {
        Family::RegionExists => yes_no(first_in_region(category(slot("E"))).is_some()),
        Family::RegionAbsent => yes_no(first_in_region(category(slot("E"))).is_none()),
        Family::LabelExists => yes_no(of_cat(category(slot("E"))).next().is_some()),
        Family::TitleExists => yes_no(of_cat(ElementCategory::Title).any(|e| e.text == slot("E"))),
        Family::CountEquals => yes_no(of_cat(category(slot("E"))).count().to_string() == slot("num")),
        Family::LabelCount => count(of_cat(category(slot("E"))).count()),
        Family::RelatedExists => related_count().map_or_else(|o| o, |n| yes_no(n > 0)),
        Family::RelatedAbsent => related_count().map_or_else(|o| o, |n| yes_no(n == 0)),
        Family::RelatedCount => related_count().map_or_else(|o| o, count),
        Family::OrdinalSection => {
            let titles: Vec<&DocElement> = of_cat(ElementCategory::Title).collect();
            let pick = match slot("turn") {
                "first" => titles.first(),
                _ => titles.last(),
            };
            pick.map_or(Outcome::Answer(AnswerValue::NA), |t| described(t))
        }
        Family::RegionSection => first_in_region(ElementCategory::Title)
            .map_or(Outcome::Answer(AnswerValue::NA), &described),
        Family::RegionObject => first_in_region(category(slot("E")))
            .map_or(Outcome::Answer(AnswerValue::NA), described),
        Family::ChildSections => match anchor(slot("E")) {
            Err(o) => o,
            Ok(t) => index_set(
                of_cat(ElementCategory::Title)
                    .filter(|u| parent_title(doc, u).is_some_and(|p| p.id == t.id))
                    .map(|u| u.doc_reading_index)
                    .collect(),
            ),
        },
        Family::FloatSections | Family::CitationSections => {
            let mentions = doc.mention_index.get(slot("E")).cloned().unwrap_or_default();
            index_set(
                scope
                    .iter()
                    .filter(|e| mentions.contains(&e.id))
                    .filter_map(|e| owner(doc, e))
                    .map(|t| t.doc_reading_index)
                    .collect(),
            )
        }
    }
}
