mod common;

use std::collections::{BTreeMap, BTreeSet, HashSet};

use forge_core::balance::{balance, balance_answers, balance_parameters, BalanceConfig};
use forge_core::dataset::split_corpus;
use forge_core::doc::ROOT_ID;
use forge_core::eval::{evaluate, EvalOptions, Prediction};
use forge_core::graph::{spatial_relation, DocGraphs};
use forge_core::program::Scope;
use forge_core::templates::enumerate_bindings;
use forge_core::{
    generate_corpus, par, synth, AnswerValue, BoundingBox, ElementCategory, GenConfig, QARecord, QuestionType,
    SpatialRelation, TaskId, TemplateRegistry, Token,
};
use proptest::prelude::*;

/// Boxes on a 1/1024 grid so translations are exact in floating point.
fn grid_box() -> impl Strategy<Value = BoundingBox> {
    (0u32..700, 0u32..700, 1u32..300, 1u32..300).prop_map(|(x, y, w, h)| {
        let s = |v: u32| v as f64 / 1024.0;
        BoundingBox::new(s(x), s(y), s(x + w), s(y + h)).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn relation_is_antisymmetric(a in grid_box(), b in grid_box()) {
        prop_assert_eq!(spatial_relation(&a, &b).map(SpatialRelation::inverse), spatial_relation(&b, &a));
    }

    #[test]
    fn relation_survives_translation(a in grid_box(), b in grid_box(), dx in 0u32..20, dy in 0u32..20) {
        let shift = |r: &BoundingBox| {
            let (dx, dy) = (dx as f64 / 1024.0, dy as f64 / 1024.0);
            BoundingBox::new(r.x0 + dx, r.y0 + dy, r.x1 + dx, r.y1 + dy).unwrap()
        };
        prop_assert_eq!(spatial_relation(&a, &b), spatial_relation(&shift(&a), &shift(&b)));
    }

    #[test]
    fn exact_queries_partition_neighbours(seed in any::<u64>()) {
        let doc = common::random_pages(seed, 1).remove(0);
        let graphs = DocGraphs::build(&doc).unwrap();
        let g = &graphs.spatial[0];
        for id in g.node_ids() {
            let mut seen = HashSet::new();
            for rel in SpatialRelation::ALL {
                for other in g.query_related(id, rel, false).unwrap() {
                    prop_assert!(seen.insert(other), "{} related to one element twice", id);
                }
            }
        }
    }
}

#[test]
fn logical_graph_is_a_tree_with_caption_parents() {
    for doc in synth::random_corpus(31, 60, 5) {
        let g = DocGraphs::build(&doc).unwrap().logical;
        for e in doc.elements() {
            let ancestors = g.ancestors(&e.id).unwrap();
            assert!(!ancestors.contains(&e.id.as_str()), "{} is its own ancestor", e.id);
            assert_eq!(ancestors.iter().collect::<HashSet<_>>().len(), ancestors.len());
            let parent = g.parent(&e.id).unwrap().unwrap();
            assert!(parent == ROOT_ID || g.children(parent).unwrap().contains(&e.id));
        }
        for (float, caption) in doc.caption_links() {
            assert_eq!(g.parent(float).unwrap(), Some(caption), "{}: {float}", doc.doc_id);
        }
        let listed: usize = std::iter::once(ROOT_ID)
            .chain(doc.elements().map(|e| e.id.as_str()))
            .map(|id| g.children(id).unwrap().len())
            .sum();
        assert_eq!(listed, doc.element_count(), "every element has exactly one parent");
    }
}

#[test]
fn rendered_questions_round_trip() {
    let registry = TemplateRegistry::builtin();
    for doc in synth::random_corpus(41, 10, 3) {
        let graphs = DocGraphs::build(&doc).unwrap();
        let mut scopes: Vec<Scope<'_>> = doc.pages.iter().map(|p| Scope::page(&doc, &graphs, p.index)).collect();
        scopes.push(Scope::document(&doc, &graphs));
        for scope in &scopes {
            for tpl in registry.all() {
                if tpl.task.is_page_level() != scope.is_page() {
                    continue;
                }
                for b in enumerate_bindings(tpl, scope).into_iter().take(40) {
                    let q = tpl.instantiate(&b, 9).unwrap();
                    assert_eq!(tpl.extract(&q).unwrap(), b, "{}: {q}", tpl.template_id);
                }
            }
        }
    }
}

#[test]
fn corpus_counts_are_additive_and_worker_independent() {
    let corpus = synth::random_corpus(51, 20, 3);
    let cfg = GenConfig::new(5);
    let whole = generate_corpus(&corpus, &cfg);
    let per_doc: usize = corpus.iter().map(|d| generate_corpus(std::slice::from_ref(d), &cfg).records.len()).sum();
    assert_eq!(whole.records.len(), per_doc);
    let single = par::with_threads(1, || generate_corpus(&corpus, &cfg));
    assert_eq!(single.records, whole.records);
}

#[test]
fn template_cap_bounds_each_scope() {
    let corpus = synth::random_corpus(52, 6, 2);
    let mut cfg = GenConfig::new(5);
    cfg.template_cap = Some(3);
    let mut per_scope: BTreeMap<(String, Option<usize>, String), usize> = BTreeMap::new();
    for r in generate_corpus(&corpus, &cfg).records {
        *per_scope.entry((r.doc_id, r.page, r.template_id)).or_default() += 1;
    }
    assert!(per_scope.values().all(|&n| n <= 3));
}

fn skewed(seed: u64) -> Vec<QARecord> {
    let corpus = synth::random_corpus(seed, 25, 3);
    generate_corpus(&corpus, &GenConfig::new(seed)).records
}

#[test]
fn balancing_is_a_deterministic_ordered_subset() {
    let records = skewed(61);
    let cfg = BalanceConfig::new(8);
    let out = balance(&records, &cfg);
    assert_eq!(out, balance(&records, &cfg));
    let mut it = records.iter();
    for r in &out {
        assert!(it.any(|x| x == r), "output is not an ordered subset");
    }
    let c_in: Vec<_> = records.iter().filter(|r| r.task == TaskId::C).collect();
    let c_out: Vec<_> = out.iter().filter(|r| r.task == TaskId::C).collect();
    assert_eq!(c_in, c_out);
}

#[test]
fn answer_stage_meets_ratio_bound() {
    let records = skewed(62);
    let out = balance_answers(&records, &BalanceConfig::new(3));
    let mut groups: BTreeMap<(TaskId, &str), BTreeMap<String, usize>> = BTreeMap::new();
    for r in out.iter().filter(|r| r.task != TaskId::C) {
        *groups.entry((r.task, &r.template_id)).or_default().entry(r.answer.class_label()).or_default() += 1;
    }
    for (g, classes) in groups {
        let (min, max) = (*classes.values().min().unwrap(), *classes.values().max().unwrap());
        assert!(max as f64 <= 1.5 * min as f64 + 1.0, "{g:?}: {classes:?}");
    }
}

#[test]
fn parameter_stage_leaves_task_c_alone() {
    let records: Vec<QARecord> = skewed(63).into_iter().filter(|r| r.task == TaskId::C).collect();
    assert!(!records.is_empty());
    assert_eq!(balance_parameters(&records, &BalanceConfig::new(1)), records);
}

#[test]
fn splits_partition_documents() {
    let records = skewed(71);
    let splits = split_corpus(&records, [0.7, 0.15, 0.15], 2).unwrap();
    let mut all_docs = BTreeSet::new();
    for s in &splits {
        for d in &s.doc_ids {
            assert!(all_docs.insert(d.clone()), "{d} in two splits");
        }
    }
    assert_eq!(all_docs, records.iter().map(|r| r.doc_id.clone()).collect());
    assert_eq!(splits.iter().map(|s| s.records.len()).sum::<usize>(), records.len());
}

fn gold_preds(records: &[QARecord]) -> Vec<Prediction> {
    records.iter().map(|r| Prediction { qid: r.qid.clone(), answer: r.answer.clone() }).collect()
}

#[test]
fn eval_perfect_permuted_and_macro_mean() {
    let gold = skewed(81);
    let mut preds = gold_preds(&gold);
    let perfect = evaluate(&gold, &preds, EvalOptions { strict: true, ..Default::default() }).unwrap();
    for r in perfect.tasks.values() {
        assert_eq!(r.score, 100.0);
    }
    // Corrupt some task A answers, then shuffle prediction order.
    for p in preds.iter_mut().step_by(7) {
        if let AnswerValue::Token(t) = p.answer {
            p.answer = AnswerValue::Token(if t == Token::Yes { Token::No } else { Token::Yes });
        }
    }
    let a = evaluate(&gold, &preds, EvalOptions::default()).unwrap();
    preds.reverse();
    assert_eq!(evaluate(&gold, &preds, EvalOptions::default()).unwrap(), a);
    for r in a.tasks.values().filter(|r| r.task != TaskId::C) {
        let mean = r.classes.iter().map(|c| c.f1).sum::<f64>() / r.classes.len() as f64;
        assert!((mean - r.macro_f1.unwrap()).abs() < 1e-9);
        assert!((0.0..=100.0).contains(&r.score));
    }
}

#[test]
fn eval_breakdown_cells_match_filtered_scores() {
    let gold = skewed(82);
    let mut preds = gold_preds(&gold);
    for p in preds.iter_mut().step_by(3) {
        p.answer = match &p.answer {
            AnswerValue::Token(_) => AnswerValue::Token(Token::N0),
            AnswerValue::ElementIndex(i) => AnswerValue::ElementIndex(i + 1),
            _ => AnswerValue::NA,
        };
    }
    let report = evaluate(&gold, &preds, EvalOptions::default()).unwrap();
    for q in QuestionType::ALL {
        let subset: Vec<QARecord> = gold.iter().filter(|r| r.qtype == q).cloned().collect();
        if subset.is_empty() {
            continue;
        }
        let alone = evaluate(&subset, &preds, EvalOptions::default()).unwrap();
        assert!((alone.tasks[&q.task()].score - report.tasks[&q.task()].qtype_scores[&q]).abs() < 1e-9, "{q:?}");
    }
}

#[test]
fn flipping_a_task_c_answer_never_helps() {
    let gold: Vec<QARecord> = skewed(83).into_iter().filter(|r| r.task == TaskId::C).collect();
    let mut preds = gold_preds(&gold);
    let mut last = 100.0;
    for i in 0..gold.len().min(20) {
        preds[i].answer = AnswerValue::NA;
        let score = evaluate(&gold, &preds, EvalOptions::default()).unwrap().tasks[&TaskId::C].score;
        assert!(score <= last);
        last = score;
    }
}

#[test]
fn caption_categories_never_answer_task_a_labels() {
    // Captions are typed elements but are not askable labels.
    let out = skewed(91);
    for r in out.iter().filter(|r| r.task == TaskId::A) {
        for v in r.bindings.values() {
            assert_ne!(v, ElementCategory::TableCaption.as_str());
        }
    }
}
