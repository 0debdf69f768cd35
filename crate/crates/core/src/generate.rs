//! Corpus-wide question generation: enumerate bindings, render, execute,
//! filter and assemble records.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::doc::{validate_for_generation, Document, Exclusion};
use crate::graph::DocGraphs;
use crate::par;
use crate::program::{compile, execute, execute_traced, AnswerValue, ProgramError, Scope, TraceStep};
use crate::templates::{binding_key, enumerate_bindings, ParamBinding, QuestionTemplate, QuestionType, TaskId, TemplateRegistry};
use crate::util::{derive_seed, sha256_hex, unit_draw};

/// One generated question with its ground-truth answer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QARecord {
    pub qid: String,
    pub task: TaskId,
    pub qtype: QuestionType,
    pub doc_id: String,
    /// Page index for tasks A and B; `None` for task C.
    pub page: Option<usize>,
    pub question: String,
    pub template_id: String,
    pub bindings: ParamBinding,
    pub answer: AnswerValue,
}

/// Deterministic record id. The page index is part of the key so the same
/// binding on two pages of one document gets two ids.
pub fn make_qid(doc_id: &str, template_id: &str, page: Option<usize>, binding: &ParamBinding) -> String {
    let page = page.map_or_else(|| "-".to_string(), |p| p.to_string());
    let key = [doc_id, template_id, &page, &binding_key(binding)].join("\u{1f}");
    sha256_hex(key.as_bytes())[..32].to_string()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenConfig {
    pub tasks: BTreeSet<TaskId>,
    pub seed: u64,
    /// Most records kept per template and scope (page or document).
    pub template_cap: Option<usize>,
    /// Share of task B questions answered NA that are kept.
    pub na_retention: f64,
    /// Record a step trace for every executed question.
    #[serde(default)]
    pub trace: bool,
}

impl GenConfig {
    pub fn new(seed: u64) -> Self {
        GenConfig {
            tasks: TaskId::ALL.into_iter().collect(),
            seed,
            template_cap: None,
            na_retention: 0.1,
            trace: false,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(0.0..=1.0).contains(&self.na_retention) {
            return Err(format!("NA retention rate {} outside [0, 1]", self.na_retention));
        }
        if self.template_cap == Some(0) {
            return Err("template cap must be positive".into());
        }
        Ok(())
    }

    /// Hash of the settings that influence output.
    pub fn config_hash(&self) -> String {
        let canonical = json!({
            "tasks": self.tasks,
            "seed": self.seed,
            "template_cap": self.template_cap,
            "na_retention": self.na_retention,
        });
        sha256_hex(canonical.to_string().as_bytes())[..16].to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuestionTrace {
    pub qid: String,
    pub program: String,
    pub steps: Vec<TraceStep>,
}

/// Task to question type to record count.
pub type TypeCounts = BTreeMap<TaskId, BTreeMap<QuestionType, usize>>;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct GenerationResult {
    pub records: Vec<QARecord>,
    pub excluded: Vec<Exclusion>,
    pub counts: TypeCounts,
    pub traces: Vec<QuestionTrace>,
}

impl GenerationResult {
    /// Manifest JSON describing a run whose records were written to `records_path`.
    pub fn manifest(&self, records_path: &str, cfg: &GenConfig) -> serde_json::Value {
        json!({
            "records": records_path,
            "excluded": self.excluded,
            "counts": self.counts,
            "seed": cfg.seed,
            "config_hash": cfg.config_hash(),
        })
    }
}

/// Per-type counts; every task with records lists both of its types.
pub fn count_types(records: &[QARecord]) -> TypeCounts {
    let mut counts = TypeCounts::new();
    for r in records {
        let per_task = counts
            .entry(r.task)
            .or_insert_with(|| r.task.qtypes().into_iter().map(|q| (q, 0)).collect());
        *per_task.entry(r.qtype).or_default() += 1;
    }
    counts
}

#[derive(Default)]
struct Output {
    records: Vec<QARecord>,
    traces: Vec<QuestionTrace>,
}

fn run_template(tpl: &QuestionTemplate, scope: &Scope<'_>, cfg: &GenConfig, out: &mut Output) {
    let doc_id = scope.doc.doc_id.as_str();
    let mut records = Vec::new();
    let mut traces = Vec::new();
    for binding in enumerate_bindings(tpl, scope) {
        let qid = make_qid(doc_id, tpl.template_id, scope.page, &binding);
        let question = match tpl.instantiate(&binding, cfg.seed) {
            Ok(q) => q,
            Err(e) => {
                log::debug!("{doc_id}: skipping {}: {e}", tpl.template_id);
                continue;
            }
        };
        let program = match compile(tpl, &binding) {
            Ok(p) => p,
            Err(e) => {
                log::debug!("{doc_id}: skipping {}: {e}", tpl.template_id);
                continue;
            }
        };
        let result = if cfg.trace {
            let (result, steps) = execute_traced(&program, scope);
            traces.push(QuestionTrace { qid: qid.clone(), program: program.to_string(), steps });
            result
        } else {
            execute(&program, scope)
        };
        let answer = match result {
            Ok(a) => a,
            Err(ProgramError::OverflowAnswer(_)) => continue,
            Err(e) => {
                log::debug!("{doc_id}: skipping {} {}: {e}", tpl.template_id, binding_key(&binding));
                continue;
            }
        };
        if answer.is_na() {
            let keep = tpl.task == TaskId::B && unit_draw(cfg.seed, &["na", &qid]) < cfg.na_retention;
            if !keep {
                continue;
            }
        }
        records.push(QARecord {
            qid,
            task: tpl.task,
            qtype: tpl.qtype,
            doc_id: doc_id.to_string(),
            page: scope.page,
            question,
            template_id: tpl.template_id.to_string(),
            bindings: binding,
            answer,
        });
    }
    if let Some(cap) = cfg.template_cap {
        if records.len() > cap {
            let page = scope.page.map_or_else(|| "-".to_string(), |p| p.to_string());
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, &["cap", doc_id, &page, tpl.template_id]));
            let mut picks: Vec<usize> = (0..records.len()).collect();
            picks.shuffle(&mut rng);
            let keep: BTreeSet<usize> = picks.into_iter().take(cap).collect();
            let kept_ids: BTreeSet<&str> = keep.iter().map(|&i| records[i].qid.as_str()).collect();
            traces.retain(|t| kept_ids.contains(t.qid.as_str()));
            records = records
                .into_iter()
                .enumerate()
                .filter(|(i, _)| keep.contains(i))
                .map(|(_, r)| r)
                .collect();
        }
    }
    out.records.extend(records);
    out.traces.extend(traces);
}

/// Task A or B records for one page, ordered by (template_id, binding).
pub fn generate_page(
    doc: &Document,
    graphs: &DocGraphs,
    page: usize,
    task: TaskId,
    registry: &TemplateRegistry,
    cfg: &GenConfig,
) -> Vec<QARecord> {
    let mut out = Output::default();
    page_into(doc, graphs, page, task, registry, cfg, &mut out);
    out.records
}

fn page_into(
    doc: &Document,
    graphs: &DocGraphs,
    page: usize,
    task: TaskId,
    registry: &TemplateRegistry,
    cfg: &GenConfig,
    out: &mut Output,
) {
    let scope = Scope::page(doc, graphs, page);
    for tpl in registry.for_task(task) {
        run_template(tpl, &scope, cfg, out);
    }
}

/// Task C records for a document, ordered by (template_id, binding).
pub fn generate_document(
    doc: &Document,
    graphs: &DocGraphs,
    registry: &TemplateRegistry,
    cfg: &GenConfig,
) -> Vec<QARecord> {
    let mut out = Output::default();
    document_into(doc, graphs, registry, cfg, &mut out);
    out.records
}

fn document_into(doc: &Document, graphs: &DocGraphs, registry: &TemplateRegistry, cfg: &GenConfig, out: &mut Output) {
    let scope = Scope::document(doc, graphs);
    for tpl in registry.for_task(TaskId::C) {
        run_template(tpl, &scope, cfg, out);
    }
}

struct DocResult {
    out: Output,
    excluded: Vec<Exclusion>,
}

fn generate_one(doc: &Document, registry: &TemplateRegistry, cfg: &GenConfig) -> DocResult {
    let mut out = Output::default();
    let mut excluded = Vec::new();
    let graphs = match DocGraphs::build(doc) {
        Ok(g) => g,
        Err(e) => {
            for &task in &cfg.tasks {
                excluded.push(Exclusion { doc_id: doc.doc_id.clone(), task, page: None, reason: e.to_string() });
            }
            return DocResult { out, excluded };
        }
    };
    let page_tasks: Vec<TaskId> = cfg.tasks.iter().copied().filter(|t| t.is_page_level()).collect();
    let reports: Vec<_> = page_tasks.iter().map(|&t| validate_for_generation(doc, t)).collect();
    for report in &reports {
        excluded.extend(report.exclusions.iter().cloned());
    }
    for page in &doc.pages {
        for (&task, report) in page_tasks.iter().zip(&reports) {
            if report.page_included(page.index) {
                page_into(doc, &graphs, page.index, task, registry, cfg, &mut out);
            }
        }
    }
    if cfg.tasks.contains(&TaskId::C) {
        let report = validate_for_generation(doc, TaskId::C);
        if report.document_excluded() {
            excluded.extend(report.exclusions);
        } else {
            document_into(doc, &graphs, registry, cfg, &mut out);
        }
    }
    DocResult { out, excluded }
}

/// Generates every requested task over the corpus. Documents run in
/// parallel; output is in `doc_id` order whatever the worker count.
pub fn generate_corpus(corpus: &[Document], cfg: &GenConfig) -> GenerationResult {
    let registry = TemplateRegistry::builtin();
    let mut order: Vec<&Document> = corpus.iter().collect();
    order.sort_by(|a, b| a.doc_id.cmp(&b.doc_id));
    let results = par::map(&order, |doc| generate_one(doc, registry, cfg));
    let mut result = GenerationResult::default();
    for r in results {
        result.records.extend(r.out.records);
        result.traces.extend(r.out.traces);
        result.excluded.extend(r.excluded);
    }
    result.counts = count_types(&result.records);
    result
}
