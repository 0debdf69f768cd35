//! Spatial relations between elements of a page and the parent/child
//! hierarchy of a document.

mod logical;
mod spatial;

use serde_json::{json, Value};
use thiserror::Error;

use crate::doc::Document;

pub use logical::{title_level, LogicalGraph};
pub use spatial::{spatial_relation, SpatialGraph, SpatialRelation, CENTER_EPSILON, OVERLAP_THRESHOLD};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("unknown element {0:?}")]
    UnknownElement(String),
    #[error("explicit parent ids form a cycle through {0:?}")]
    CyclicParentInput(String),
    #[error("element {child:?} names unknown parent {parent:?}")]
    DanglingParent { child: String, parent: String },
}

/// Both graphs for one document: one spatial graph per page plus the
/// logical graph.
#[derive(Debug, Clone, PartialEq)]
pub struct DocGraphs {
    pub spatial: Vec<SpatialGraph>,
    pub logical: LogicalGraph,
}

impl DocGraphs {
    pub fn build(doc: &Document) -> Result<Self, GraphError> {
        Ok(DocGraphs {
            spatial: doc.pages.iter().map(SpatialGraph::build).collect(),
            logical: LogicalGraph::build(doc)?,
        })
    }

    /// `{"spatial_edges": [[src, dst, rel]], "parent_of": {child: parent}}`,
    /// optionally restricted to one page's spatial edges.
    pub fn dump(&self, page: Option<usize>) -> Value {
        let mut edges: Vec<_> = self
            .spatial
            .iter()
            .filter(|g| page.is_none_or(|p| g.page_index == p))
            .flat_map(|g| g.edges())
            .collect();
        edges.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let edges: Vec<Value> = edges.into_iter().map(|(s, d, r)| json!([s, d, r.as_str()])).collect();
        json!({ "spatial_edges": edges, "parent_of": self.logical.parent_of() })
    }
}
