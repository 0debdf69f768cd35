use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{AnswerValue, FunctionKind, FunctionalProgram, Ordinal, ProgramError, Scope, Token};
use crate::doc::{DocElement, ElementCategory};

/// Intermediate value. Elements are positions in the scope's reading order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Scope,
    ElemSet(Vec<usize>),
    Elem(usize),
    Int(u64),
    Bool(bool),
    NA,
}

impl Value {
    fn kind_name(&self) -> &'static str {
        match self {
            Value::Scope => "scope",
            Value::ElemSet(_) => "elem_set",
            Value::Elem(_) => "elem",
            Value::Int(_) => "int",
            Value::Bool(_) => "bool",
            Value::NA => "na",
        }
    }

    fn size(&self, scope: &Scope<'_>) -> usize {
        match self {
            Value::Scope => scope.len(),
            Value::ElemSet(s) => s.len(),
            Value::NA => 0,
            _ => 1,
        }
    }
}

/// One executed step, for the debug trace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub step: usize,
    pub function: String,
    pub output_kind: String,
    pub output_size: usize,
}

pub fn execute(prog: &FunctionalProgram, scope: &Scope<'_>) -> Result<AnswerValue, ProgramError> {
    run(prog, scope, None)
}

pub fn execute_traced(
    prog: &FunctionalProgram,
    scope: &Scope<'_>,
) -> (Result<AnswerValue, ProgramError>, Vec<TraceStep>) {
    let mut trace = Vec::with_capacity(prog.steps.len());
    let result = run(prog, scope, Some(&mut trace));
    (result, trace)
}

fn run(
    prog: &FunctionalProgram,
    scope: &Scope<'_>,
    mut trace: Option<&mut Vec<TraceStep>>,
) -> Result<AnswerValue, ProgramError> {
    prog.type_check()?;
    let mut value = Value::Scope;
    for (i, step) in prog.steps.iter().enumerate() {
        value = apply(step, value, scope)?;
        if let Some(t) = trace.as_deref_mut() {
            t.push(TraceStep {
                step: i,
                function: step.to_string(),
                output_kind: value.kind_name().to_string(),
                output_size: value.size(scope),
            });
        }
    }
    render(value, scope)
}

fn all_positions(scope: &Scope<'_>) -> Vec<usize> {
    (0..scope.len()).collect()
}

fn as_set(value: Value, scope: &Scope<'_>) -> Result<Vec<usize>, ProgramError> {
    match value {
        Value::Scope => Ok(all_positions(scope)),
        Value::ElemSet(s) => Ok(s),
        other => Err(ProgramError::TypeMismatch(format!("expected elem_set, got {}", other.kind_name()))),
    }
}

fn filter(set: Vec<usize>, scope: &Scope<'_>, keep: impl Fn(&DocElement) -> bool) -> Value {
    let els = scope.elements();
    Value::ElemSet(set.into_iter().filter(|&p| keep(els[p])).collect())
}

/// Nearest Title strictly above `id` in the logical graph, as a scope position.
fn owning_title(id: &str, scope: &Scope<'_>) -> Option<usize> {
    scope.position(scope.logical().owning_title(id)?)
}

fn apply(step: &FunctionKind, input: Value, scope: &Scope<'_>) -> Result<Value, ProgramError> {
    if input == Value::NA {
        return Ok(Value::NA);
    }
    let els = scope.elements();
    let mismatch = |v: &Value| ProgramError::TypeMismatch(format!("{step} got {}", v.kind_name()));
    Ok(match step {
        FunctionKind::FilterCategory(c) => filter(as_set(input, scope)?, scope, |e| e.category == *c),
        FunctionKind::FilterRegion(r) => filter(as_set(input, scope)?, scope, |e| r.contains(&e.bbox)),
        FunctionKind::FilterText(t) => filter(as_set(input, scope)?, scope, |e| e.text == *t),
        FunctionKind::LocateByText(t) => {
            let hits: Vec<usize> = (0..els.len())
                .filter(|&p| els[p].category == ElementCategory::Title && els[p].text == *t)
                .collect();
            match hits.as_slice() {
                [] => return Err(ProgramError::AnchorNotFound(t.clone())),
                [one] => Value::Elem(*one),
                many => return Err(ProgramError::AmbiguousAnchor { text: t.clone(), count: many.len() }),
            }
        }
        FunctionKind::RelatedByPosition { relation, coarse } => {
            let Value::Elem(anchor) = input else { return Err(mismatch(&input)) };
            let graph = scope
                .spatial()
                .ok_or_else(|| ProgramError::TypeMismatch("related_by_position needs a page scope".into()))?;
            let ids = graph
                .query_related(&els[anchor].id, *relation, *coarse)
                .map_err(|e| ProgramError::TypeMismatch(e.to_string()))?;
            let mut set: Vec<usize> = ids.iter().filter_map(|id| scope.position(id)).collect();
            set.sort_unstable();
            Value::ElemSet(set)
        }
        FunctionKind::Count => Value::Int(as_set(input, scope)?.len() as u64),
        FunctionKind::Exists => Value::Bool(!as_set(input, scope)?.is_empty()),
        FunctionKind::CompareCount(n) => match input {
            Value::Int(c) => Value::Bool(c == *n),
            other => return Err(mismatch(&other)),
        },
        FunctionKind::NthByReadingOrder(o) => {
            let set = as_set(input, scope)?;
            let pick = match o {
                Ordinal::First => set.iter().min(),
                Ordinal::Last => set.iter().max(),
            };
            pick.map_or(Value::NA, |&p| Value::Elem(p))
        }
        FunctionKind::DescribedBy => {
            let Value::Elem(p) = input else { return Err(mismatch(&input)) };
            let e = els[p];
            match e.category {
                ElementCategory::Title => Value::Elem(p),
                c if c.is_float() => {
                    let parent = scope
                        .logical()
                        .parent(&e.id)
                        .map_err(|err| ProgramError::TypeMismatch(err.to_string()))?;
                    let caption = parent
                        .and_then(|id| scope.position(id))
                        .filter(|&q| Some(els[q].category) == c.caption_kind());
                    caption.map_or(Value::NA, Value::Elem)
                }
                _ => owning_title(&e.id, scope).map_or(Value::NA, Value::Elem),
            }
        }
        FunctionKind::ParentSections(label) => {
            let mut set = BTreeSet::new();
            if let Some(mentions) = scope.doc.mention_index.get(label) {
                for id in mentions {
                    if let Some(t) = owning_title(id, scope) {
                        set.insert(t);
                    }
                }
            }
            Value::ElemSet(set.into_iter().collect())
        }
        FunctionKind::ChildSubsections => {
            let Value::Elem(p) = input else { return Err(mismatch(&input)) };
            let children = scope
                .logical()
                .children(&els[p].id)
                .map_err(|err| ProgramError::TypeMismatch(err.to_string()))?;
            let mut set: Vec<usize> = children
                .iter()
                .filter_map(|id| scope.position(id))
                .filter(|&q| els[q].category == ElementCategory::Title)
                .collect();
            set.sort_unstable();
            Value::ElemSet(set)
        }
    })
}

fn render(value: Value, scope: &Scope<'_>) -> Result<AnswerValue, ProgramError> {
    let els = scope.elements();
    Ok(match value {
        Value::NA => AnswerValue::NA,
        Value::Bool(b) => AnswerValue::Token(Token::from_bool(b)),
        Value::Int(n) => AnswerValue::Token(Token::from_count(n).ok_or(ProgramError::OverflowAnswer(n))?),
        Value::Elem(p) => AnswerValue::ElementIndex(els[p].page_reading_index),
        Value::ElemSet(s) if s.is_empty() => AnswerValue::NA,
        Value::ElemSet(s) => AnswerValue::ElementIndexSet(s.iter().map(|&p| els[p].doc_reading_index).collect()),
        Value::Scope => return Err(ProgramError::TypeMismatch("program produced no answer".into())),
    })
}
