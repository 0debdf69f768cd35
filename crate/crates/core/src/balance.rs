//! Two-stage down-sampling: cap answer-class imbalance within each
//! template group, then cap over-represented slot-value combinations.
//! Task C is never balanced.

use std::collections::{BTreeMap, HashMap};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::generate::QARecord;
use crate::par;
use crate::templates::{TaskId, TemplateRegistry};
use crate::util::derive_seed;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BalanceError {
    #[error("{name} ratio bound must be a finite number >= 1, got {value}")]
    BadRatio { name: &'static str, value: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BalanceConfig {
    pub seed: u64,
    /// Largest allowed size of an answer class relative to the smallest.
    pub answer_ratio: f64,
    /// Largest allowed size of a slot-value combination relative to the median.
    pub param_ratio: f64,
}

impl BalanceConfig {
    pub fn new(seed: u64) -> Self {
        BalanceConfig { seed, answer_ratio: 1.5, param_ratio: 2.0 }
    }

    pub fn validate(&self) -> Result<(), BalanceError> {
        for (name, value) in [("answer", self.answer_ratio), ("parameter", self.param_ratio)] {
            if !value.is_finite() || value < 1.0 {
                return Err(BalanceError::BadRatio { name, value });
            }
        }
        Ok(())
    }
}

type GroupKey = (TaskId, String);

/// Record indices per (task, template) group, groups in key order.
fn groups(records: &[QARecord]) -> Vec<(GroupKey, Vec<usize>)> {
    let mut map: BTreeMap<GroupKey, Vec<usize>> = BTreeMap::new();
    for (i, r) in records.iter().enumerate() {
        if r.task != TaskId::C {
            map.entry((r.task, r.template_id.clone())).or_default().push(i);
        }
    }
    map.into_iter().collect()
}

/// The binding restricted to slots with a fixed vocabulary. Document text
/// (titles, labels, citation keys) is left out: it differs per document and
/// would make every combination a singleton.
pub fn param_key(record: &QARecord) -> String {
    let tpl = TemplateRegistry::builtin().get(&record.template_id).ok();
    let parts: Vec<String> = record
        .bindings
        .iter()
        .filter(|(slot, _)| tpl.and_then(|t| t.slot_kind(slot)).is_none_or(|k| !k.is_text()))
        .map(|(slot, value)| format!("{slot}={value}"))
        .collect();
    parts.join(";")
}

/// Keeps at most `cap` members of each class; survivors are drawn by a
/// seeded shuffle of the class sorted by qid.
fn cap_classes(
    records: &[QARecord],
    classes: BTreeMap<String, Vec<usize>>,
    cap: impl Fn(&BTreeMap<String, Vec<usize>>) -> usize,
    seed: u64,
    stage: &str,
    group: &GroupKey,
) -> Vec<usize> {
    let limit = cap(&classes);
    let mut keep = Vec::new();
    for (class, mut members) in classes {
        if members.len() > limit {
            members.sort_by(|&a, &b| records[a].qid.cmp(&records[b].qid));
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &[stage, group.0.as_str(), &group.1, &class]));
            members.shuffle(&mut rng);
            members.truncate(limit);
        }
        keep.extend(members);
    }
    keep
}

fn select(records: &[QARecord], keep_groups: Vec<Vec<usize>>) -> Vec<QARecord> {
    let mut keep = vec![false; records.len()];
    for (i, r) in records.iter().enumerate() {
        if r.task == TaskId::C {
            keep[i] = true;
        }
    }
    for i in keep_groups.into_iter().flatten() {
        keep[i] = true;
    }
    records.iter().zip(keep).filter(|(_, k)| *k).map(|(r, _)| r.clone()).collect()
}

fn answer_classes(records: &[QARecord], members: &[usize]) -> BTreeMap<String, Vec<usize>> {
    let mut classes: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for &i in members {
        classes.entry(records[i].answer.class_label()).or_default().push(i);
    }
    classes
}

fn param_classes(records: &[QARecord], members: &[usize]) -> BTreeMap<String, Vec<usize>> {
    let mut classes: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for &i in members {
        classes.entry(param_key(&records[i])).or_default().push(i);
    }
    classes
}

fn answer_cap(ratio: f64) -> impl Fn(&BTreeMap<String, Vec<usize>>) -> usize {
    move |classes| {
        let min = classes.values().map(Vec::len).min().unwrap_or(0);
        (ratio * min as f64).ceil() as usize
    }
}

fn param_cap(ratio: f64) -> impl Fn(&BTreeMap<String, Vec<usize>>) -> usize {
    move |classes| {
        let sizes: Vec<usize> = classes.values().map(Vec::len).collect();
        (ratio * median(&sizes)).ceil() as usize
    }
}

pub(crate) fn median(values: &[usize]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let mut v = values.to_vec();
    v.sort_unstable();
    let mid = v.len() / 2;
    if v.len() % 2 == 1 {
        v[mid] as f64
    } else {
        (v[mid - 1] + v[mid]) as f64 / 2.0
    }
}

/// Within each (task, template) group, down-samples every answer class to
/// at most `ceil(answer_ratio * smallest class)`. Output keeps input order.
pub fn balance_answers(records: &[QARecord], cfg: &BalanceConfig) -> Vec<QARecord> {
    let gs = groups(records);
    let kept = par::map(&gs, |(key, members)| {
        cap_classes(records, answer_classes(records, members), answer_cap(cfg.answer_ratio), cfg.seed, "answer", key)
    });
    select(records, kept)
}

/// Within each (task, template) group, caps every slot-value combination
/// at `ceil(param_ratio * median combination size)`.
pub fn balance_parameters(records: &[QARecord], cfg: &BalanceConfig) -> Vec<QARecord> {
    let gs = groups(records);
    let kept = par::map(&gs, |(key, members)| {
        cap_classes(records, param_classes(records, members), param_cap(cfg.param_ratio), cfg.seed, "param", key)
    });
    select(records, kept)
}

/// Answer balancing followed by parameter smoothing.
pub fn balance(records: &[QARecord], cfg: &BalanceConfig) -> Vec<QARecord> {
    balance_parameters(&balance_answers(records, cfg), cfg)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskBalance {
    pub before: usize,
    pub after: usize,
    /// `before / after`; absent when nothing survived.
    pub reduction_factor: Option<f64>,
}

impl TaskBalance {
    pub fn new(before: usize, after: usize) -> Self {
        let reduction_factor = (after > 0).then(|| before as f64 / after as f64);
        TaskBalance { before, after, reduction_factor }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupBalance {
    pub task: TaskId,
    pub template_id: String,
    pub before: usize,
    pub after: usize,
    /// Answer class to `[before, after]` counts.
    pub answer_classes: BTreeMap<String, [usize; 2]>,
    /// Largest over smallest nonempty answer class.
    pub answer_ratio_before: f64,
    pub answer_ratio_after: f64,
    /// Largest over median slot-value combination.
    pub param_ratio_before: f64,
    pub param_ratio_after: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BalanceReport {
    pub tasks: BTreeMap<TaskId, TaskBalance>,
    pub groups: Vec<GroupBalance>,
}

fn max_min_ratio(sizes: &[usize]) -> f64 {
    match (sizes.iter().max(), sizes.iter().filter(|&&s| s > 0).min()) {
        (Some(&max), Some(&min)) => max as f64 / min as f64,
        _ => 1.0,
    }
}

fn max_median_ratio(sizes: &[usize]) -> f64 {
    let m = median(sizes);
    match sizes.iter().max() {
        Some(&max) if m > 0.0 => max as f64 / m,
        _ => 1.0,
    }
}

pub fn balance_report(before: &[QARecord], after: &[QARecord]) -> BalanceReport {
    let mut tasks: BTreeMap<TaskId, [usize; 2]> = BTreeMap::new();
    for r in before {
        tasks.entry(r.task).or_default()[0] += 1;
    }
    for r in after {
        tasks.entry(r.task).or_default()[1] += 1;
    }
    let before_groups: HashMap<GroupKey, Vec<usize>> = groups(before).into_iter().collect();
    let after_groups: HashMap<GroupKey, Vec<usize>> = groups(after).into_iter().collect();
    let mut keys: Vec<&GroupKey> = before_groups.keys().chain(after_groups.keys()).collect();
    keys.sort();
    keys.dedup();
    let empty = Vec::new();
    let group_reports = keys
        .into_iter()
        .map(|key| {
            let b = before_groups.get(key).unwrap_or(&empty);
            let a = after_groups.get(key).unwrap_or(&empty);
            let ab = answer_classes(before, b);
            let aa = answer_classes(after, a);
            let mut answer_table: BTreeMap<String, [usize; 2]> = BTreeMap::new();
            for (c, m) in &ab {
                answer_table.entry(c.clone()).or_default()[0] = m.len();
            }
            for (c, m) in &aa {
                answer_table.entry(c.clone()).or_default()[1] = m.len();
            }
            let sizes = |m: &BTreeMap<String, Vec<usize>>| m.values().map(Vec::len).collect::<Vec<_>>();
            GroupBalance {
                task: key.0,
                template_id: key.1.clone(),
                before: b.len(),
                after: a.len(),
                answer_ratio_before: max_min_ratio(&sizes(&ab)),
                answer_ratio_after: max_min_ratio(&sizes(&aa)),
                param_ratio_before: max_median_ratio(&sizes(&param_classes(before, b))),
                param_ratio_after: max_median_ratio(&sizes(&param_classes(after, a))),
                answer_classes: answer_table,
            }
        })
        .collect();
    BalanceReport {
        tasks: tasks.into_iter().map(|(t, [b, a])| (t, TaskBalance::new(b, a))).collect(),
        groups: group_reports,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::program::{AnswerValue, Token};
    use crate::templates::QuestionType;

    fn rec(i: usize, task: TaskId, template: &str, bindings: &[(&str, &str)], answer: AnswerValue) -> QARecord {
        QARecord {
            qid: format!("q{i:05}"),
            task,
            qtype: match task {
                TaskId::A => QuestionType::Existence,
                TaskId::B => QuestionType::StructuralUnderstanding,
                TaskId::C => QuestionType::ParentRelation,
            },
            doc_id: format!("d{}", i % 7),
            page: (task != TaskId::C).then_some(0),
            question: format!("question {i}"),
            template_id: template.into(),
            bindings: bindings.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
            answer,
        }
    }

    fn yes_no(yes: usize, no: usize) -> Vec<QARecord> {
        (0..yes + no)
            .map(|i| {
                let t = if i < yes { Token::Yes } else { Token::No };
                rec(i, TaskId::A, "A-EX-12", &[("E", "table")], AnswerValue::Token(t))
            })
            .collect()
    }

    fn count(records: &[QARecord], t: Token) -> usize {
        records.iter().filter(|r| r.answer == AnswerValue::Token(t)).count()
    }

    #[test]
    fn skewed_group_is_capped() {
        let out = balance_answers(&yes_no(90, 10), &BalanceConfig::new(1));
        assert_eq!(count(&out, Token::Yes), 15);
        assert_eq!(count(&out, Token::No), 10);
    }

    #[test]
    fn balanced_and_single_class_groups_unchanged() {
        let cfg = BalanceConfig::new(1);
        let input = yes_no(10, 10);
        assert_eq!(balance_answers(&input, &cfg), input);
        let input = yes_no(30, 0);
        assert_eq!(balance_answers(&input, &cfg), input);
    }

    #[test]
    fn output_is_ordered_subset_and_deterministic() {
        let input = yes_no(90, 10);
        let cfg = BalanceConfig::new(5);
        let out = balance_answers(&input, &cfg);
        let mut it = input.iter();
        for r in &out {
            assert!(it.any(|x| x == r));
        }
        assert_eq!(out, balance_answers(&input, &cfg));
        assert_ne!(out, balance_answers(&input, &BalanceConfig::new(6)));
    }

    #[test]
    fn combination_capped_at_twice_median() {
        let mut input = Vec::new();
        let mut i = 0;
        for (pos, n) in [("top", 40), ("bottom", 10), ("left", 10)] {
            for _ in 0..n {
                input.push(rec(i, TaskId::A, "A-EX-01", &[("E", "table"), ("pos", pos)], AnswerValue::Token(Token::Yes)));
                i += 1;
            }
        }
        let out = balance_parameters(&input, &BalanceConfig::new(3));
        let top = out.iter().filter(|r| r.bindings["pos"] == "top").count();
        assert_eq!(top, 20);
        assert_eq!(out.len(), 40);
    }

    #[test]
    fn task_c_passes_through() {
        let input: Vec<QARecord> = (0..50)
            .map(|i| {
                let key = if i < 45 { "Table 1" } else { "Table 2" };
                rec(i, TaskId::C, "C-PA-01", &[("E", key)], AnswerValue::ElementIndexSet([i % 2].into()))
            })
            .collect();
        let cfg = BalanceConfig::new(9);
        assert_eq!(balance_parameters(&input, &cfg), input);
        assert_eq!(balance(&input, &cfg), input);
    }

    #[test]
    fn text_slots_left_out_of_combinations() {
        let r = rec(0, TaskId::A, "A-CT-01", &[("E1", "table"), ("E2", "Methods"), ("R", "above")], AnswerValue::Token(Token::N1));
        assert_eq!(param_key(&r), "E1=table;R=above");
    }

    #[test]
    fn report_ratios() {
        let t = TaskBalance::new(444_967, 81_085);
        assert_eq!(crate::util::round2(t.reduction_factor.unwrap()), 5.49);
        let input = yes_no(90, 10);
        let same = balance_report(&input, &input);
        assert_eq!(same.tasks[&TaskId::A].reduction_factor, Some(1.0));
        let g = &same.groups[0];
        assert_eq!(g.answer_ratio_before, g.answer_ratio_after);
        let out = balance_answers(&input, &BalanceConfig::new(2));
        let rep = balance_report(&input, &out);
        assert_eq!(rep.groups[0].answer_ratio_after, 1.5);
        assert_eq!(rep.groups[0].answer_classes["yes"], [90, 15]);
    }

    #[test]
    fn rejects_ratio_below_one() {
        let mut cfg = BalanceConfig::new(0);
        cfg.answer_ratio = 0.5;
        assert!(cfg.validate().is_err());
    }
}
