//! Scoring of prediction files: per-class F1 for tasks A and B, exact-set
//! accuracy for task C, and a per-question-type breakdown.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::generate::QARecord;
use crate::par;
use crate::program::AnswerValue;
use crate::templates::{QuestionType, TaskId};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prediction {
    pub qid: String,
    pub answer: AnswerValue,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("prediction for unknown qid {0}")]
    UnknownQid(String),
    #[error("no prediction for qid {0}")]
    MissingPrediction(String),
    #[error("qid {qid}: answer kind {kind} is not valid for task {task}")]
    KindMismatch { qid: String, task: TaskId, kind: &'static str },
    #[error("more than one prediction for qid {0}")]
    DuplicatePrediction(String),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Averaging {
    #[default]
    Macro,
    Micro,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EvalOptions {
    pub averaging: Averaging,
    /// Reject unknown qids and missing predictions instead of ignoring the
    /// former and scoring the latter as wrong.
    pub strict: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassScore {
    pub class: String,
    pub support: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskReport {
    pub task: TaskId,
    /// "f1" or "accuracy".
    pub metric: String,
    /// Headline score in [0, 100]: F1 under the chosen averaging, or accuracy.
    pub score: f64,
    pub macro_f1: Option<f64>,
    pub micro_f1: Option<f64>,
    pub qtype_scores: BTreeMap<QuestionType, f64>,
    /// Per-class scores over the gold vocabulary (tasks A and B only).
    pub classes: Vec<ClassScore>,
    pub questions: usize,
    pub na_gold: usize,
    pub na_predicted: usize,
    pub missing: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub averaging: Averaging,
    pub tasks: BTreeMap<TaskId, TaskReport>,
}

fn kind_ok(task: TaskId, answer: &AnswerValue) -> bool {
    matches!(
        (task, answer),
        (TaskId::A, AnswerValue::Token(_))
            | (TaskId::B, AnswerValue::ElementIndex(_) | AnswerValue::NA)
            | (TaskId::C, AnswerValue::ElementIndexSet(_) | AnswerValue::NA)
    )
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

fn harmonic(p: f64, r: f64) -> f64 {
    if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    }
}

/// Per-class scores over the gold classes of `pairs` (gold label, predicted
/// label or `None` when missing), plus macro and micro F1, all ×100.
pub fn f1_scores(pairs: &[(String, Option<String>)]) -> (Vec<ClassScore>, f64, f64) {
    let classes: BTreeSet<&str> = pairs.iter().map(|(g, _)| g.as_str()).collect();
    if classes.is_empty() {
        return (Vec::new(), 0.0, 0.0);
    }
    let mut tp: HashMap<&str, usize> = HashMap::new();
    let mut fp: HashMap<&str, usize> = HashMap::new();
    let mut support: HashMap<&str, usize> = HashMap::new();
    for (g, p) in pairs {
        *support.entry(g.as_str()).or_default() += 1;
        match p.as_deref() {
            Some(p) if p == g => *tp.entry(g.as_str()).or_default() += 1,
            Some(p) if classes.contains(p) => *fp.entry(p).or_default() += 1,
            _ => {}
        }
    }
    let (mut sum_tp, mut sum_fp) = (0, 0);
    let scores: Vec<ClassScore> = classes
        .iter()
        .map(|&c| {
            let (t, f, s) = (tp.get(c).copied().unwrap_or(0), fp.get(c).copied().unwrap_or(0), support[c]);
            sum_tp += t;
            sum_fp += f;
            let (precision, recall) = (ratio(t, t + f), ratio(t, s));
            ClassScore {
                class: c.to_string(),
                support: s,
                precision: 100.0 * precision,
                recall: 100.0 * recall,
                f1: 100.0 * harmonic(precision, recall),
            }
        })
        .collect();
    let macro_f1 = scores.iter().map(|s| s.f1).sum::<f64>() / scores.len() as f64;
    let micro_f1 = 100.0 * harmonic(ratio(sum_tp, sum_tp + sum_fp), ratio(sum_tp, pairs.len()));
    (scores, macro_f1, micro_f1)
}

fn ab_pairs(gold: &[&QARecord], preds: &HashMap<&str, &AnswerValue>) -> Vec<(String, Option<String>)> {
    gold.iter()
        .map(|r| (r.answer.class_label(), preds.get(r.qid.as_str()).map(|a| a.class_label())))
        .collect()
}

fn counters(gold: &[&QARecord], preds: &HashMap<&str, &AnswerValue>) -> (usize, usize, usize) {
    let na_gold = gold.iter().filter(|r| r.answer.is_na()).count();
    let na_pred = gold.iter().filter(|r| preds.get(r.qid.as_str()).is_some_and(|a| a.is_na())).count();
    let missing = gold.iter().filter(|r| !preds.contains_key(r.qid.as_str())).count();
    (na_gold, na_pred, missing)
}

fn by_qtype<'a>(gold: &[&'a QARecord]) -> BTreeMap<QuestionType, Vec<&'a QARecord>> {
    let mut out: BTreeMap<QuestionType, Vec<&QARecord>> = BTreeMap::new();
    for r in gold {
        out.entry(r.qtype).or_default().push(r);
    }
    out
}

/// F1 report for task A or B gold records. A missing prediction is a miss
/// for its gold class and a false positive for no class.
pub fn score_task_ab(
    task: TaskId,
    gold: &[&QARecord],
    preds: &HashMap<&str, &AnswerValue>,
    averaging: Averaging,
) -> TaskReport {
    let pick = |(_, m, u): (Vec<ClassScore>, f64, f64)| match averaging {
        Averaging::Macro => m,
        Averaging::Micro => u,
    };
    let (classes, macro_f1, micro_f1) = f1_scores(&ab_pairs(gold, preds));
    let qtype_scores = by_qtype(gold)
        .into_iter()
        .map(|(q, rs)| (q, pick(f1_scores(&ab_pairs(&rs, preds)))))
        .collect();
    let (na_gold, na_predicted, missing) = counters(gold, preds);
    TaskReport {
        task,
        metric: "f1".into(),
        score: match averaging {
            Averaging::Macro => macro_f1,
            Averaging::Micro => micro_f1,
        },
        macro_f1: Some(macro_f1),
        micro_f1: Some(micro_f1),
        qtype_scores,
        classes,
        questions: gold.len(),
        na_gold,
        na_predicted,
        missing,
    }
}

fn accuracy(gold: &[&QARecord], preds: &HashMap<&str, &AnswerValue>) -> f64 {
    let correct = gold.iter().filter(|r| preds.get(r.qid.as_str()) == Some(&&r.answer)).count();
    100.0 * ratio(correct, gold.len())
}

/// Exact-set accuracy for task C gold records; partial overlap scores 0.
pub fn score_task_c(gold: &[&QARecord], preds: &HashMap<&str, &AnswerValue>) -> TaskReport {
    let (na_gold, na_predicted, missing) = counters(gold, preds);
    TaskReport {
        task: TaskId::C,
        metric: "accuracy".into(),
        score: accuracy(gold, preds),
        macro_f1: None,
        micro_f1: None,
        qtype_scores: by_qtype(gold).into_iter().map(|(q, rs)| (q, accuracy(&rs, preds))).collect(),
        classes: Vec::new(),
        questions: gold.len(),
        na_gold,
        na_predicted,
        missing,
    }
}

/// Scores `preds` against every task present in `gold`.
pub fn evaluate(gold: &[QARecord], preds: &[Prediction], opts: EvalOptions) -> Result<EvalReport, EvalError> {
    let gold_by_qid: HashMap<&str, &QARecord> = gold.iter().map(|r| (r.qid.as_str(), r)).collect();
    let mut pred_map: HashMap<&str, &AnswerValue> = HashMap::new();
    for p in preds {
        let Some(g) = gold_by_qid.get(p.qid.as_str()) else {
            if opts.strict {
                return Err(EvalError::UnknownQid(p.qid.clone()));
            }
            log::warn!("ignoring prediction for unknown qid {}", p.qid);
            continue;
        };
        if !kind_ok(g.task, &p.answer) {
            return Err(EvalError::KindMismatch { qid: p.qid.clone(), task: g.task, kind: p.answer.kind() });
        }
        if pred_map.insert(p.qid.as_str(), &p.answer).is_some() {
            return Err(EvalError::DuplicatePrediction(p.qid.clone()));
        }
    }
    if opts.strict {
        if let Some(r) = gold.iter().find(|r| !pred_map.contains_key(r.qid.as_str())) {
            return Err(EvalError::MissingPrediction(r.qid.clone()));
        }
    }
    let mut per_task: BTreeMap<TaskId, Vec<&QARecord>> = BTreeMap::new();
    for r in gold {
        per_task.entry(r.task).or_default().push(r);
    }
    let groups: Vec<(TaskId, Vec<&QARecord>)> = per_task.into_iter().collect();
    let reports = par::map(&groups, |(task, records)| match task {
        TaskId::C => score_task_c(records, &pred_map),
        _ => score_task_ab(*task, records, &pred_map, opts.averaging),
    });
    Ok(EvalReport {
        averaging: opts.averaging,
        tasks: reports.into_iter().map(|r| (r.task, r)).collect(),
    })
}

impl EvalReport {
    /// Aligned plain-text table: one row per task, one column per question
    /// type plus the overall score; "-" where a task has no such questions.
    pub fn breakdown(&self) -> String {
        let mut header = vec!["Task".to_string()];
        header.extend(QuestionType::ALL.iter().map(|q| q.short_label().to_string()));
        header.push("Overall".into());
        let mut rows = vec![header];
        for (task, report) in &self.tasks {
            let mut row = vec![task.to_string()];
            row.extend(
                QuestionType::ALL
                    .iter()
                    .map(|q| report.qtype_scores.get(q).map_or_else(|| "-".to_string(), |s| format!("{s:.2}"))),
            );
            row.push(format!("{:.2}", report.score));
            rows.push(row);
        }
        let widths: Vec<usize> =
            (0..rows[0].len()).map(|c| rows.iter().map(|r| r[c].len()).max().unwrap_or(0)).collect();
        let mut out = String::new();
        for row in &rows {
            let cells: Vec<String> = row.iter().zip(&widths).map(|(cell, w)| format!("{cell:>w$}")).collect();
            let _ = writeln!(out, "{}", cells.join("  ").trim_end());
        }
        out
    }
}
