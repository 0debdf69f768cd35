#![allow(dead_code)]

pub mod oracle;

use forge_core::graph::DocGraphs;
use forge_core::program::{compile, execute, ProgramError, Scope};
use forge_core::templates::{enumerate_bindings, ParamBinding, QuestionTemplate};
use forge_core::{AnswerValue, Document, TaskId, TemplateRegistry};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` single-page documents with 3 to 25 scattered boxes each.
pub fn random_pages(seed: u64, n: usize) -> Vec<Document> {
    let mut r = rng(seed);
    (0..n)
        .map(|i| {
            let size = r.random_range(3..=25);
            forge_core::synth::random_page_document(&mut r, &format!("page{i:05}"), size)
        })
        .collect()
}

/// Outcome of one (template, binding) run, comparable across evaluators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Answer(AnswerValue),
    Overflow,
    AnchorMissing,
    AnchorAmbiguous,
}

pub fn run_program(tpl: &QuestionTemplate, binding: &ParamBinding, scope: &Scope<'_>) -> Outcome {
    let prog = compile(tpl, binding).expect("enumerated bindings compile");
    match execute(&prog, scope) {
        Ok(a) => Outcome::Answer(a),
        Err(ProgramError::OverflowAnswer(_)) => Outcome::Overflow,
        Err(ProgramError::AnchorNotFound(_)) => Outcome::AnchorMissing,
        Err(ProgramError::AmbiguousAnchor { .. }) => Outcome::AnchorAmbiguous,
        Err(e) => panic!("{}: unexpected {e}", tpl.template_id),
    }
}

/// Every enumerable (template, binding) of `doc` where the interpreter and
/// the oracle disagree, as readable strings.
pub fn oracle_mismatches(doc: &Document) -> (usize, Vec<String>) {
    let graphs = DocGraphs::build(doc).expect("synthetic graphs build");
    let registry = TemplateRegistry::builtin();
    let mut checked = 0;
    let mut bad = Vec::new();
    let mut check = |tpl: &QuestionTemplate, scope: &Scope<'_>| {
        for binding in enumerate_bindings(tpl, scope) {
            checked += 1;
            let got = run_program(tpl, &binding, scope);
            let want = oracle::execute(tpl, &binding, doc, scope.page);
            if got != want {
                bad.push(format!(
                    "{} {:?} {} {:?}: interpreter {got:?}, oracle {want:?}",
                    doc.doc_id, scope.page, tpl.template_id, binding
                ));
            }
        }
    };
    for page in &doc.pages {
        let scope = Scope::page(doc, &graphs, page.index);
        for task in [TaskId::A, TaskId::B] {
            for tpl in registry.for_task(task) {
                check(tpl, &scope);
            }
        }
    }
    let scope = Scope::document(doc, &graphs);
    for tpl in registry.for_task(TaskId::C) {
        check(tpl, &scope);
    }
    (checked, bad)
}
