//! Document data model: annotation parsing, reading order, caption
//! association, cross-reference mentions and generation-time validation.

mod captions;
pub mod corpus;
mod mentions;
mod reading_order;
mod validate;

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use captions::{associate_captions, CAPTION_MAX_DISTANCE};
pub use mentions::{build_mention_index, canonical_label};
pub use reading_order::{assign_document_order, assign_reading_order, COLUMN_GAP};
pub use validate::{
    validate_for_generation, Exclusion, ValidationReport, MAX_DOCUMENT_ELEMENTS,
    MAX_PAGE_ELEMENTS,
};

/// Reading index of an element that has not been through reading-order
/// assignment yet.
pub const UNASSIGNED: usize = usize::MAX;

/// Identifier reserved for the virtual root of the logical graph.
pub const ROOT_ID: &str = "<root>";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DocError {
    #[error("malformed annotation input: {0}")]
    MalformedInput(String),
    #[error("invalid bounding box on element {id:?}: {reason}")]
    InvalidBBox { id: String, reason: String },
    #[error("duplicate element id {0:?}")]
    DuplicateId(String),
}

/// Axis-aligned box in page-normalized coordinates, y growing downward.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundingBox {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

impl BoundingBox {
    /// Builds a box, rejecting degenerate boxes and coordinates outside `[0, 1]`.
    pub fn new(x0: f64, y0: f64, x1: f64, y1: f64) -> Result<Self, String> {
        let coords = [x0, y0, x1, y1];
        if coords.iter().any(|c| !c.is_finite()) {
            return Err("non-finite coordinate".into());
        }
        if coords.iter().any(|c| !(0.0..=1.0).contains(c)) {
            return Err(format!("coordinates {coords:?} outside [0, 1]"));
        }
        if x0 >= x1 {
            return Err(format!("x0 {x0} >= x1 {x1}"));
        }
        if y0 >= y1 {
            return Err(format!("y0 {y0} >= y1 {y1}"));
        }
        Ok(Self { x0, y0, x1, y1 })
    }

    pub fn width(&self) -> f64 {
        self.x1 - self.x0
    }

    pub fn height(&self) -> f64 {
        self.y1 - self.y0
    }

    pub fn center_x(&self) -> f64 {
        (self.x0 + self.x1) / 2.0
    }

    pub fn center_y(&self) -> f64 {
        (self.y0 + self.y1) / 2.0
    }

    /// Euclidean edge-to-edge distance; zero when the boxes touch or overlap.
    pub fn edge_distance(&self, other: &BoundingBox) -> f64 {
        let dx = (self.x0 - other.x1).max(other.x0 - self.x1).max(0.0);
        let dy = (self.y0 - other.y1).max(other.y0 - self.y1).max(0.0);
        dx.hypot(dy)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ElementCategory {
    Title,
    Text,
    List,
    Table,
    Figure,
    TableCaption,
    FigureCaption,
}

impl ElementCategory {
    pub const ALL: [ElementCategory; 7] = [
        ElementCategory::Title,
        ElementCategory::Text,
        ElementCategory::List,
        ElementCategory::Table,
        ElementCategory::Figure,
        ElementCategory::TableCaption,
        ElementCategory::FigureCaption,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ElementCategory::Title => "title",
            ElementCategory::Text => "text",
            ElementCategory::List => "list",
            ElementCategory::Table => "table",
            ElementCategory::Figure => "figure",
            ElementCategory::TableCaption => "table_caption",
            ElementCategory::FigureCaption => "figure_caption",
        }
    }

    pub fn is_caption(self) -> bool {
        matches!(self, ElementCategory::TableCaption | ElementCategory::FigureCaption)
    }

    pub fn is_float(self) -> bool {
        matches!(self, ElementCategory::Table | ElementCategory::Figure)
    }

    /// Caption category that describes this float, if it is one.
    pub fn caption_kind(self) -> Option<ElementCategory> {
        match self {
            ElementCategory::Table => Some(ElementCategory::TableCaption),
            ElementCategory::Figure => Some(ElementCategory::FigureCaption),
            _ => None,
        }
    }
}

impl fmt::Display for ElementCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DocElement {
    pub id: String,
    pub page_index: usize,
    pub bbox: BoundingBox,
    /// Box as given in the annotation, in source units.
    pub source_bbox: [f64; 4],
    pub category: ElementCategory,
    pub text: String,
    pub parent_id: Option<String>,
    /// Explicit cross-reference labels; replaces text scanning when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xrefs: Option<Vec<String>>,
    pub page_reading_index: usize,
    pub doc_reading_index: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Page {
    pub index: usize,
    pub width: f64,
    pub height: f64,
    pub elements: Vec<DocElement>,
    /// Float id to caption id, filled by caption association.
    #[serde(default)]
    pub captions: BTreeMap<String, String>,
}

impl Page {
    pub fn element(&self, id: &str) -> Option<&DocElement> {
        self.elements.iter().find(|e| e.id == id)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub doc_id: String,
    #[serde(default)]
    pub references: Vec<String>,
    pub pages: Vec<Page>,
    /// Reference label or citation key to the ids of Text/List elements
    /// mentioning it.
    #[serde(default)]
    pub mention_index: BTreeMap<String, BTreeSet<String>>,
}

impl Document {
    pub fn elements(&self) -> impl Iterator<Item = &DocElement> {
        self.pages.iter().flat_map(|p| p.elements.iter())
    }

    pub fn element_count(&self) -> usize {
        self.pages.iter().map(Page::len).sum()
    }

    pub fn element(&self, id: &str) -> Option<&DocElement> {
        self.elements().find(|e| e.id == id)
    }

    /// All elements sorted by document reading index.
    pub fn elements_in_order(&self) -> Vec<&DocElement> {
        let mut all: Vec<&DocElement> = self.elements().collect();
        all.sort_by_key(|e| e.doc_reading_index);
        all
    }

    /// Float id to caption id across every page.
    pub fn caption_links(&self) -> impl Iterator<Item = (&str, &str)> {
        self.pages
            .iter()
            .flat_map(|p| p.captions.iter().map(|(f, c)| (f.as_str(), c.as_str())))
    }

    /// Serializes back into the annotation input schema.
    pub fn to_annotation(&self) -> RawDocument {
        RawDocument {
            doc_id: self.doc_id.clone(),
            references: self.references.clone(),
            pages: self
                .pages
                .iter()
                .map(|p| RawPage {
                    index: p.index,
                    width: p.width,
                    height: p.height,
                    elements: p
                        .elements
                        .iter()
                        .map(|e| RawElement {
                            id: e.id.clone(),
                            category: e.category,
                            bbox: e.source_bbox,
                            text: e.text.clone(),
                            parent_id: e.parent_id.clone(),
                            xrefs: e.xrefs.clone(),
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn to_annotation_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_annotation()).expect("annotation serializes")
    }
}

/// Annotation input, one document per file, coordinates in source units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawDocument {
    pub doc_id: String,
    #[serde(default)]
    pub references: Vec<String>,
    pub pages: Vec<RawPage>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawPage {
    pub index: usize,
    pub width: f64,
    pub height: f64,
    #[serde(default)]
    pub elements: Vec<RawElement>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawElement {
    pub id: String,
    pub category: ElementCategory,
    pub bbox: [f64; 4],
    #[serde(default)]
    pub text: String,
    #[serde(default)]
    pub parent_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xrefs: Option<Vec<String>>,
}

/// Parses annotation JSON into a [`Document`] with normalized boxes and
/// unassigned reading indices.
pub fn parse_document(raw: &[u8]) -> Result<Document, DocError> {
    let raw: RawDocument =
        serde_json::from_slice(raw).map_err(|e| DocError::MalformedInput(e.to_string()))?;
    from_raw(raw)
}

pub fn from_raw(raw: RawDocument) -> Result<Document, DocError> {
    if raw.doc_id.trim().is_empty() {
        return Err(DocError::MalformedInput("empty doc_id".into()));
    }
    let mut seen = HashSet::new();
    let mut pages = Vec::with_capacity(raw.pages.len());
    for (pos, rp) in raw.pages.into_iter().enumerate() {
        if rp.index != pos {
            return Err(DocError::MalformedInput(format!(
                "page at position {pos} declares index {}",
                rp.index
            )));
        }
        if !(rp.width.is_finite() && rp.width > 0.0 && rp.height.is_finite() && rp.height > 0.0) {
            return Err(DocError::MalformedInput(format!(
                "page {pos} has non-positive size {}x{}",
                rp.width, rp.height
            )));
        }
        let mut elements = Vec::with_capacity(rp.elements.len());
        for re in rp.elements {
            if re.id.is_empty() || re.id == ROOT_ID {
                return Err(DocError::MalformedInput(format!("invalid element id {:?}", re.id)));
            }
            if !seen.insert(re.id.clone()) {
                return Err(DocError::DuplicateId(re.id));
            }
            let [x0, y0, x1, y1] = re.bbox;
            if x0 >= x1 || y0 >= y1 {
                return Err(DocError::InvalidBBox {
                    id: re.id,
                    reason: format!("degenerate box {:?}", re.bbox),
                });
            }
            if x0 < 0.0 || y0 < 0.0 || x1 > rp.width || y1 > rp.height {
                return Err(DocError::InvalidBBox {
                    id: re.id,
                    reason: format!(
                        "box {:?} outside page {}x{}",
                        re.bbox, rp.width, rp.height
                    ),
                });
            }
            let bbox = BoundingBox::new(x0 / rp.width, y0 / rp.height, x1 / rp.width, y1 / rp.height)
                .map_err(|reason| DocError::InvalidBBox { id: re.id.clone(), reason })?;
            elements.push(DocElement {
                id: re.id,
                page_index: pos,
                bbox,
                source_bbox: re.bbox,
                category: re.category,
                text: re.text,
                parent_id: re.parent_id,
                xrefs: re.xrefs,
                page_reading_index: UNASSIGNED,
                doc_reading_index: UNASSIGNED,
            });
        }
        pages.push(Page {
            index: pos,
            width: rp.width,
            height: rp.height,
            elements,
            captions: BTreeMap::new(),
        });
    }
    Ok(Document {
        doc_id: raw.doc_id,
        references: raw.references,
        pages,
        mention_index: BTreeMap::new(),
    })
}

/// Full preprocessing: per-page reading order and captions, document order,
/// then the mention index.
pub fn preprocess(mut doc: Document) -> Document {
    doc.pages = doc
        .pages
        .into_iter()
        .map(|p| associate_captions(assign_reading_order(p)))
        .collect();
    build_mention_index(assign_document_order(doc))
}
