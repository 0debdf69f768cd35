//! Worked examples on small hand-built documents.

use std::collections::BTreeSet;

use forge_core::graph::{spatial_relation, DocGraphs};
use forge_core::program::{compile, execute, FunctionKind, Scope};
use forge_core::templates::enumerate_bindings;
use forge_core::{
    generate_corpus, parse_document, preprocess, synth, AnswerValue, Document, GenConfig, SpatialRelation, TaskId,
    TemplateRegistry, Token,
};

fn p1() -> (Document, DocGraphs) {
    let doc = synth::fixture_p1();
    let graphs = DocGraphs::build(&doc).unwrap();
    (doc, graphs)
}

/// Finds the template that renders `question` and runs it on `scope`.
fn ask(question: &str, scope: &Scope<'_>) -> AnswerValue {
    let registry = TemplateRegistry::builtin();
    let (tpl, binding) = registry
        .all()
        .iter()
        .find_map(|t| t.extract(question).ok().map(|b| (t, b)))
        .unwrap_or_else(|| panic!("no template renders {question:?}"));
    execute(&compile(tpl, &binding).unwrap(), scope).unwrap()
}

#[test]
fn p1_lists_five_elements_in_reading_order() {
    let (doc, _) = p1();
    let order: Vec<(usize, &str)> =
        doc.pages[0].elements.iter().map(|e| (e.page_reading_index, e.id.as_str())).collect();
    assert_eq!(order, [(0, "t"), (1, "x1"), (2, "c1"), (3, "tb"), (4, "x2")]);
}

#[test]
fn p1_edges_match_pairwise_relations() {
    let (doc, graphs) = p1();
    let els = &doc.pages[0].elements;
    let mut expected = Vec::new();
    for a in els {
        for b in els {
            if let Some(r) = spatial_relation(&a.bbox, &b.bbox) {
                expected.push((a.id.as_str(), b.id.as_str(), r));
            }
        }
    }
    expected.sort();
    let mut got = graphs.spatial[0].edges();
    got.sort();
    assert_eq!(got, expected);
}

#[test]
fn p1_everything_below_the_title() {
    let (_, graphs) = p1();
    let below = graphs.spatial[0].query_related("t", SpatialRelation::Bottom, true).unwrap();
    assert_eq!(below, BTreeSet::from(["x1", "c1", "tb", "x2"].map(String::from)));
    // x2 sits diagonally, so the exact query leaves it out.
    let exact = graphs.spatial[0].query_related("t", SpatialRelation::Bottom, false).unwrap();
    assert!(!exact.contains("x2"));
}

#[test]
fn p1_answers() {
    let (doc, graphs) = p1();
    let scope = Scope::page(&doc, &graphs, 0);
    assert_eq!(ask("How many tables are below the 'Results'?", &scope), AnswerValue::Token(Token::N1));
    assert_eq!(ask("What is the bottom table about?", &scope), AnswerValue::ElementIndex(2));
    assert_eq!(ask("Is there any figure on the top of this page?", &scope), AnswerValue::Token(Token::No));
}

#[test]
fn p1_single_results_binding() {
    let (doc, graphs) = p1();
    let scope = Scope::page(&doc, &graphs, 0);
    let tpl = TemplateRegistry::builtin().get("A-CT-01").unwrap();
    let hits: Vec<_> = enumerate_bindings(tpl, &scope)
        .into_iter()
        .filter(|b| b["E1"] == "table" && b["R"] == "below")
        .collect();
    assert_eq!(hits.len(), 1);
    assert_eq!(hits[0]["E2"], "Results");
}

#[test]
fn p1_generates_figure_top_no() {
    let cfg = GenConfig::new(3);
    let records = generate_corpus(&[synth::fixture_p1()], &cfg).records;
    let figure_top = |r: &&forge_core::QARecord| {
        r.bindings.get("E").map(String::as_str) == Some("figure") && r.bindings.get("pos").map(String::as_str) == Some("top")
    };
    let asked = records.iter().filter(|r| r.template_id == "A-EX-01").find(figure_top).expect("A-EX-01 record");
    assert_eq!(asked.answer, AnswerValue::Token(Token::No), "{}", asked.question);
    // The negated form flips the answer.
    let negated = records.iter().filter(|r| r.template_id == "A-EX-04").find(figure_top).expect("A-EX-04 record");
    assert_eq!(negated.answer, AnswerValue::Token(Token::Yes), "{}", negated.question);
}

/// One page: sections 1 to 3, where "2 Methods" has subsections at document
/// indices 11 and 15 and the "3 Discussion" text mentions Table 2.
fn sectioned() -> Document {
    let mut elements = Vec::new();
    let mut push = |category: &str, text: &str| {
        let i = elements.len();
        let y = 20.0 + 45.0 * i as f64;
        elements.push(serde_json::json!({
            "id": format!("s{i:02}"), "category": category, "bbox": [100.0, y, 900.0, y + 40.0], "text": text
        }));
    };
    push("title", "1 Introduction");
    push("text", "Background.");
    push("text", "Aims.");
    push("title", "2 Methods");
    for _ in 4..11 {
        push("text", "Procedure.");
    }
    push("title", "2.1 Data");
    for _ in 12..15 {
        push("text", "Collection.");
    }
    push("title", "2.2 Analysis");
    push("text", "Models.");
    push("title", "3 Discussion");
    push("text", "As Table 2 shows, the effect holds.");
    push("table_caption", "Table 2. Effects.");
    push("table", "");
    let json = serde_json::json!({
        "doc_id": "sec", "pages": [{"index": 0, "width": 1000.0, "height": 1000.0, "elements": elements}]
    });
    preprocess(parse_document(json.to_string().as_bytes()).unwrap())
}

#[test]
fn methods_children_and_table_parent() {
    let doc = sectioned();
    let graphs = DocGraphs::build(&doc).unwrap();
    let scope = Scope::document(&doc, &graphs);
    assert_eq!(ask("What does the 2 Methods include?", &scope), AnswerValue::ElementIndexSet([11, 15].into()));
    assert_eq!(ask("Which section does describe the Table 2 ?", &scope), AnswerValue::ElementIndexSet([17].into()));

    let records = generate_corpus(std::slice::from_ref(&doc), &GenConfig::new(1)).records;
    assert!(records.iter().any(|r| r.task == TaskId::C
        && r.bindings.get("E").map(String::as_str) == Some("Table 2")
        && r.answer == AnswerValue::ElementIndexSet([17].into())));
}

#[test]
fn child_template_program() {
    let tpl = TemplateRegistry::builtin().get("C-CH-01").unwrap();
    let binding = [("E".to_string(), "Methods".to_string())].into();
    let prog = compile(tpl, &binding).unwrap();
    assert_eq!(prog.steps, [FunctionKind::LocateByText("Methods".into()), FunctionKind::ChildSubsections]);
}
