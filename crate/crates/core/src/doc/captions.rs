use std::collections::{HashMap, VecDeque};

use super::{ElementCategory, Page};

/// Largest edge-to-edge distance, in page heights, between a float and its
/// caption.
pub const CAPTION_MAX_DISTANCE: f64 = 0.08;

/// Links every Table/Figure to the closest qualifying caption candidate.
///
/// Candidates for a float are the page's explicit captions of the matching
/// kind when the input already labeled any, otherwise its Text elements,
/// which get relabeled on a match. Each float prefers candidates below it
/// before those above, nearest first; a candidate wanted by several floats
/// goes to the nearest one, ties to the smaller reading index. Requires
/// reading order.
pub fn associate_captions(mut page: Page) -> Page {
    let has_explicit = |kind: ElementCategory| page.elements.iter().any(|e| e.category == kind);
    let explicit_table = has_explicit(ElementCategory::TableCaption);
    let explicit_figure = has_explicit(ElementCategory::FigureCaption);

    let anchors: Vec<usize> = (0..page.elements.len())
        .filter(|&i| page.elements[i].category.is_float())
        .collect();

    // Preference list per anchor: below-first, then above, nearest first.
    let mut prefs: Vec<Vec<usize>> = Vec::with_capacity(anchors.len());
    for &a in &anchors {
        let anchor = &page.elements[a];
        let kind = anchor.category.caption_kind().expect("float");
        let explicit = match anchor.category {
            ElementCategory::Table => explicit_table,
            _ => explicit_figure,
        };
        let wanted = if explicit { kind } else { ElementCategory::Text };
        let mut below = Vec::new();
        let mut above = Vec::new();
        for (c, cand) in page.elements.iter().enumerate() {
            if cand.category != wanted {
                continue;
            }
            let d = anchor.bbox.edge_distance(&cand.bbox);
            if d > CAPTION_MAX_DISTANCE {
                continue;
            }
            let key = (d, cand.page_reading_index, c);
            if cand.bbox.center_y() > anchor.bbox.center_y() {
                below.push(key);
            } else {
                above.push(key);
            }
        }
        let by_distance = |x: &(f64, usize, usize), y: &(f64, usize, usize)| {
            x.0.total_cmp(&y.0).then(x.1.cmp(&y.1))
        };
        below.sort_by(by_distance);
        above.sort_by(by_distance);
        prefs.push(below.into_iter().chain(above).map(|k| k.2).collect());
    }

    // Anchor-proposing stable matching; a candidate keeps the nearest suitor.
    let mut next = vec![0usize; anchors.len()];
    let mut holder: HashMap<usize, usize> = HashMap::new();
    let mut free: VecDeque<usize> = (0..anchors.len()).collect();
    let suitor_key = |ai: usize, c: usize| {
        let a = &page.elements[anchors[ai]];
        (a.bbox.edge_distance(&page.elements[c].bbox), a.page_reading_index)
    };
    while let Some(ai) = free.pop_front() {
        let Some(&c) = prefs[ai].get(next[ai]) else { continue };
        next[ai] += 1;
        match holder.get(&c).copied() {
            None => {
                holder.insert(c, ai);
            }
            Some(current) => {
                let (dn, rn) = suitor_key(ai, c);
                let (dc, rc) = suitor_key(current, c);
                if dn.total_cmp(&dc).then(rn.cmp(&rc)).is_lt() {
                    holder.insert(c, ai);
                    free.push_back(current);
                } else {
                    free.push_back(ai);
                }
            }
        }
    }

    page.captions.clear();
    for (c, ai) in holder {
        let anchor_idx = anchors[ai];
        let kind = page.elements[anchor_idx].category.caption_kind().expect("float");
        let float_id = page.elements[anchor_idx].id.clone();
        let cand = &mut page.elements[c];
        if cand.category == ElementCategory::Text {
            cand.category = kind;
        }
        page.captions.insert(float_id, cand.id.clone());
    }
    page
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::doc::{assign_reading_order, BoundingBox, DocElement, UNASSIGNED};

    fn el(id: &str, cat: ElementCategory, b: [f64; 4]) -> DocElement {
        DocElement {
            id: id.into(),
            page_index: 0,
            bbox: BoundingBox::new(b[0], b[1], b[2], b[3]).unwrap(),
            source_bbox: b,
            category: cat,
            text: String::new(),
            parent_id: None,
            xrefs: None,
            page_reading_index: UNASSIGNED,
            doc_reading_index: UNASSIGNED,
        }
    }

    fn run(elements: Vec<DocElement>) -> Page {
        let page = Page { index: 0, width: 1.0, height: 1.0, elements, captions: BTreeMap::new() };
        associate_captions(assign_reading_order(page))
    }

    fn cat(p: &Page, id: &str) -> ElementCategory {
        p.element(id).unwrap().category
    }

    #[test]
    fn text_just_below_table_becomes_caption() {
        let p = run(vec![
            el("t", ElementCategory::Table, [0.1, 0.45, 0.9, 0.70]),
            el("c", ElementCategory::Text, [0.1, 0.71, 0.9, 0.75]),
        ]);
        assert_eq!(cat(&p, "c"), ElementCategory::TableCaption);
        assert_eq!(p.captions.get("t").map(String::as_str), Some("c"));
    }

    #[test]
    fn distant_text_is_left_alone() {
        let p = run(vec![
            el("f", ElementCategory::Figure, [0.1, 0.2, 0.9, 0.4]),
            el("x", ElementCategory::Text, [0.1, 0.6, 0.9, 0.7]),
        ]);
        assert_eq!(cat(&p, "x"), ElementCategory::Text);
        assert!(p.captions.is_empty());
    }

    #[test]
    fn equidistant_text_goes_to_earlier_table() {
        let p = run(vec![
            el("t1", ElementCategory::Table, [0.1, 0.125, 0.9, 0.375]),
            el("x", ElementCategory::Text, [0.1, 0.40625, 0.9, 0.46875]),
            el("t2", ElementCategory::Table, [0.1, 0.5, 0.9, 0.8]),
        ]);
        assert_eq!(cat(&p, "x"), ElementCategory::TableCaption);
        assert_eq!(p.captions.get("t1").map(String::as_str), Some("x"));
        assert!(!p.captions.contains_key("t2"));
    }

    #[test]
    fn below_preferred_over_closer_above() {
        let p = run(vec![
            el("above", ElementCategory::Text, [0.1, 0.30, 0.9, 0.395]),
            el("f", ElementCategory::Figure, [0.1, 0.40, 0.9, 0.60]),
            el("below", ElementCategory::Text, [0.1, 0.63, 0.9, 0.66]),
        ]);
        assert_eq!(cat(&p, "below"), ElementCategory::FigureCaption);
        assert_eq!(cat(&p, "above"), ElementCategory::Text);
    }

    #[test]
    fn loser_falls_back_to_next_candidate() {
        // Both figures want x first; f1 is nearer, so f2 settles for y.
        let p = run(vec![
            el("f1", ElementCategory::Figure, [0.1, 0.1, 0.45, 0.4]),
            el("f2", ElementCategory::Figure, [0.55, 0.1, 0.9, 0.4]),
            el("x", ElementCategory::Text, [0.1, 0.42, 0.5, 0.45]),
            el("y", ElementCategory::Text, [0.5, 0.47, 0.9, 0.5]),
        ]);
        assert_eq!(p.captions.get("f1").map(String::as_str), Some("x"));
        assert_eq!(p.captions.get("f2").map(String::as_str), Some("y"));
    }

    #[test]
    fn explicit_captions_are_linked_not_relabeled() {
        let p = run(vec![
            el("t", ElementCategory::Table, [0.1, 0.45, 0.9, 0.70]),
            el("x", ElementCategory::Text, [0.1, 0.71, 0.9, 0.73]),
            el("c", ElementCategory::TableCaption, [0.1, 0.74, 0.9, 0.78]),
        ]);
        assert_eq!(cat(&p, "x"), ElementCategory::Text);
        assert_eq!(p.captions.get("t").map(String::as_str), Some("c"));
    }
}
