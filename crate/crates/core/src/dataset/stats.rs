use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::generate::QARecord;
use crate::templates::{QuestionType, TaskId, TemplateRegistry};
use crate::util::round2;

const TOP_FIRST_WORDS: usize = 4;
const TOP_PATTERNS: usize = 15;

/// Descriptive statistics of one task; averages and percentages are
/// rounded to two decimals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskStats {
    /// Distinct pages for tasks A/B, distinct documents for task C.
    pub images: usize,
    pub questions: usize,
    pub avg_questions_per_image: f64,
    /// Mean whitespace-token count.
    pub avg_question_length: f64,
    /// Distinct question strings as a percentage of all questions.
    pub unique_question_pct: f64,
    pub qtype_counts: BTreeMap<QuestionType, usize>,
    pub qtype_pct: BTreeMap<QuestionType, f64>,
    pub top_first_words: Vec<(String, usize)>,
    /// Most frequent questions with document text replaced by "X".
    pub top_patterns: Vec<(String, usize)>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DatasetStats {
    pub tasks: BTreeMap<TaskId, TaskStats>,
}

/// Questions per image, rounded to two decimals; 0 without images.
pub fn per_image(questions: usize, images: usize) -> f64 {
    if images == 0 {
        0.0
    } else {
        round2(questions as f64 / images as f64)
    }
}

/// `part / total` as a percentage, rounded to two decimals; 0 when empty.
pub fn percent(part: usize, total: usize) -> f64 {
    if total == 0 {
        0.0
    } else {
        round2(100.0 * part as f64 / total as f64)
    }
}

fn top_k(counts: HashMap<String, usize>, k: usize) -> Vec<(String, usize)> {
    let mut v: Vec<(String, usize)> = counts.into_iter().collect();
    v.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    v.truncate(k);
    v
}

fn pattern_of(record: &QARecord) -> String {
    TemplateRegistry::builtin()
        .get(&record.template_id)
        .ok()
        .and_then(|t| t.mask_text_slots(&record.question, "X"))
        .unwrap_or_else(|| record.question.clone())
}

fn task_stats(task: TaskId, records: &[&QARecord]) -> TaskStats {
    let images = if task.is_page_level() {
        records.iter().map(|r| (r.doc_id.as_str(), r.page)).collect::<BTreeSet<_>>().len()
    } else {
        records.iter().map(|r| r.doc_id.as_str()).collect::<BTreeSet<_>>().len()
    };
    let n = records.len();
    let tokens: usize = records.iter().map(|r| r.question.split_whitespace().count()).sum();
    let distinct = records.iter().map(|r| r.question.as_str()).collect::<BTreeSet<_>>().len();
    let mut qtype_counts: BTreeMap<QuestionType, usize> = task.qtypes().into_iter().map(|q| (q, 0)).collect();
    let mut first_words: HashMap<String, usize> = HashMap::new();
    let mut patterns: HashMap<String, usize> = HashMap::new();
    for r in records {
        *qtype_counts.entry(r.qtype).or_default() += 1;
        if let Some(w) = r.question.split_whitespace().next() {
            *first_words.entry(w.to_string()).or_default() += 1;
        }
        *patterns.entry(pattern_of(r)).or_default() += 1;
    }
    TaskStats {
        images,
        questions: n,
        avg_questions_per_image: per_image(n, images),
        avg_question_length: if n == 0 { 0.0 } else { round2(tokens as f64 / n as f64) },
        unique_question_pct: percent(distinct, n),
        qtype_pct: qtype_counts.iter().map(|(&q, &c)| (q, percent(c, n))).collect(),
        qtype_counts,
        top_first_words: top_k(first_words, TOP_FIRST_WORDS),
        top_patterns: top_k(patterns, TOP_PATTERNS),
    }
}

/// Statistics over all given records, per task present.
pub fn compute_stats(records: &[QARecord]) -> DatasetStats {
    let mut by_task: BTreeMap<TaskId, Vec<&QARecord>> = BTreeMap::new();
    for r in records {
        by_task.entry(r.task).or_default().push(r);
    }
    DatasetStats {
        tasks: by_task.into_iter().map(|(t, rs)| (t, task_stats(t, &rs))).collect(),
    }
}
