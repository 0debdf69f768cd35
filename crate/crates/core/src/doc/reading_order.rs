use std::cmp::Ordering;

use super::{Document, DocElement, Page};

/// Minimum distance, in page widths, between an element's x-center and the
/// running column center before a new column is opened.
pub const COLUMN_GAP: f64 = 0.25;

/// Orders a page column-first: elements are clustered into columns by
/// x-center, columns run left to right, and each column is read top to
/// bottom (ties by x0, then id). Elements are reordered in place and carry
/// their `page_reading_index`.
pub fn assign_reading_order(mut page: Page) -> Page {
    let mut by_center: Vec<DocElement> = std::mem::take(&mut page.elements);
    by_center.sort_by(|a, b| {
        a.bbox
            .center_x()
            .total_cmp(&b.bbox.center_x())
            .then_with(|| a.id.cmp(&b.id))
    });

    let mut columns: Vec<Vec<DocElement>> = Vec::new();
    let mut center_sum = 0.0;
    for el in by_center {
        let cx = el.bbox.center_x();
        let open_new = match columns.last() {
            None => true,
            Some(col) => cx - center_sum / col.len() as f64 > COLUMN_GAP,
        };
        if open_new {
            columns.push(Vec::new());
            center_sum = 0.0;
        }
        center_sum += cx;
        columns.last_mut().expect("column exists").push(el);
    }

    for col in &mut columns {
        col.sort_by(within_column);
    }
    page.elements = columns.into_iter().flatten().collect();
    for (i, el) in page.elements.iter_mut().enumerate() {
        el.page_reading_index = i;
    }
    page
}

fn within_column(a: &DocElement, b: &DocElement) -> Ordering {
    a.bbox
        .y0
        .total_cmp(&b.bbox.y0)
        .then_with(|| a.bbox.x0.total_cmp(&b.bbox.x0))
        .then_with(|| a.id.cmp(&b.id))
}

/// Numbers elements across the document: pages in order, each page in its
/// reading order.
pub fn assign_document_order(mut doc: Document) -> Document {
    let mut next = 0;
    for page in &mut doc.pages {
        page.elements.sort_by_key(|e| e.page_reading_index);
        for el in &mut page.elements {
            el.doc_reading_index = next;
            next += 1;
        }
    }
    doc
}
