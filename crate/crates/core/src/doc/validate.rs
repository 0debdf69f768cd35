use serde::{Deserialize, Serialize};

use super::Document;
use crate::templates::TaskId;

/// Element ceiling for a page used by page-level tasks.
pub const MAX_PAGE_ELEMENTS: usize = 25;
/// Element ceiling for a document used by the document-level task.
pub const MAX_DOCUMENT_ELEMENTS: usize = 400;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exclusion {
    pub doc_id: String,
    pub task: TaskId,
    /// `None` when the whole document is excluded.
    pub page: Option<usize>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ValidationReport {
    pub exclusions: Vec<Exclusion>,
}

impl ValidationReport {
    pub fn document_excluded(&self) -> bool {
        self.exclusions.iter().any(|e| e.page.is_none())
    }

    pub fn page_included(&self, page: usize) -> bool {
        !self.document_excluded() && !self.exclusions.iter().any(|e| e.page == Some(page))
    }
}

/// Reports which pages (tasks A/B) or whether the document (task C) exceed
/// the answer-index ceilings. Never fails; over-limit input is excluded,
/// not truncated.
pub fn validate_for_generation(doc: &Document, task: TaskId) -> ValidationReport {
    let mut report = ValidationReport::default();
    let exclude = |page: Option<usize>, reason: String| Exclusion {
        doc_id: doc.doc_id.clone(),
        task,
        page,
        reason,
    };
    let total = doc.element_count();
    if total == 0 {
        report.exclusions.push(exclude(None, "no elements".into()));
        return report;
    }
    match task {
        TaskId::A | TaskId::B => {
            for page in &doc.pages {
                let n = page.len();
                if n == 0 {
                    report.exclusions.push(exclude(Some(page.index), "no elements".into()));
                } else if n > MAX_PAGE_ELEMENTS {
                    report.exclusions.push(exclude(
                        Some(page.index),
                        format!("page has {n} elements, limit is {MAX_PAGE_ELEMENTS}"),
                    ));
                }
            }
        }
        TaskId::C => {
            if total > MAX_DOCUMENT_ELEMENTS {
                report.exclusions.push(exclude(
                    None,
                    format!("document has {total} elements, limit is {MAX_DOCUMENT_ELEMENTS}"),
                ));
            }
        }
    }
    report
}
