//! Generation, balancing and scoring of document-structure visual question
//! answering datasets built from layout annotations.
//!
//! The pipeline runs: [`doc`] ingestion and preprocessing, [`graph`]
//! construction, [`templates`] binding enumeration and rendering,
//! [`program`] answer derivation, [`generate`] orchestration, [`balance`]
//! down-sampling, [`dataset`] splitting and statistics, and [`eval`]
//! scoring.

pub mod balance;
pub mod dataset;
pub mod doc;
pub mod eval;
pub mod generate;
pub mod graph;
pub mod par;
pub mod program;
pub mod synth;
pub mod templates;
mod util;

pub use doc::{parse_document, preprocess, BoundingBox, DocElement, Document, ElementCategory, Page};
pub use generate::{generate_corpus, GenConfig, GenerationResult, QARecord};
pub use graph::{DocGraphs, LogicalGraph, SpatialGraph, SpatialRelation};
pub use program::{AnswerValue, Token};
pub use templates::{QuestionTemplate, QuestionType, TaskId, TemplateRegistry};

pub use util::atomic_write;
