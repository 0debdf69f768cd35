use std::collections::HashMap;

use crate::doc::{DocElement, Document};
use crate::graph::{DocGraphs, LogicalGraph, SpatialGraph};

/// The elements a program runs over, in reading order, with the graphs
/// built for them. Page scopes serve tasks A and B, document scopes task C.
#[derive(Debug, Clone)]
pub struct Scope<'a> {
    pub doc: &'a Document,
    /// `Some(page index)` for a page scope.
    pub page: Option<usize>,
    elements: Vec<&'a DocElement>,
    position: HashMap<&'a str, usize>,
    spatial: Option<&'a SpatialGraph>,
    logical: &'a LogicalGraph,
}

impl<'a> Scope<'a> {
    /// # Panics
    /// If `page` is out of range or `graphs` were built from another document.
    pub fn page(doc: &'a Document, graphs: &'a DocGraphs, page: usize) -> Self {
        let mut elements: Vec<&DocElement> = doc.pages[page].elements.iter().collect();
        elements.sort_by_key(|e| e.page_reading_index);
        Self::new(doc, Some(page), elements, Some(&graphs.spatial[page]), &graphs.logical)
    }

    pub fn document(doc: &'a Document, graphs: &'a DocGraphs) -> Self {
        Self::new(doc, None, doc.elements_in_order(), None, &graphs.logical)
    }

    fn new(
        doc: &'a Document,
        page: Option<usize>,
        elements: Vec<&'a DocElement>,
        spatial: Option<&'a SpatialGraph>,
        logical: &'a LogicalGraph,
    ) -> Self {
        let position = elements.iter().enumerate().map(|(i, e)| (e.id.as_str(), i)).collect();
        Scope { doc, page, elements, position, spatial, logical }
    }

    pub fn is_page(&self) -> bool {
        self.page.is_some()
    }

    /// Elements in reading order; values refer to them by position here.
    pub fn elements(&self) -> &[&'a DocElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn position(&self, id: &str) -> Option<usize> {
        self.position.get(id).copied()
    }

    pub fn spatial(&self) -> Option<&'a SpatialGraph> {
        self.spatial
    }

    pub fn logical(&self) -> &'a LogicalGraph {
        self.logical
    }
}
