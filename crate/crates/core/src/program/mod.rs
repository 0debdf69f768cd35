//! Functional programs: compilation of a (template, binding) pair into a
//! typed chain of steps, and its execution over a page or document.

mod answer;
mod exec;
mod scope;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::doc::{BoundingBox, ElementCategory};
use crate::graph::SpatialRelation;
use crate::templates::{relation_form, ParamBinding, QuestionTemplate, TaskId};

pub use answer::{AnswerValue, Token};
pub use exec::{execute, execute_traced, TraceStep, Value};
pub use scope::Scope;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StepKind {
    FilterCategory,
    FilterRegion,
    FilterText,
    LocateByText,
    RelatedByPosition,
    Count,
    Exists,
    CompareCount,
    NthByReadingOrder,
    DescribedBy,
    ParentSections,
    ChildSubsections,
}

/// Where a step's constant comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepArg {
    None,
    Slot(&'static str),
    Lit(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepSchema {
    pub kind: StepKind,
    pub arg: StepArg,
}

/// Half or quadrant of a page, by element center.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Region {
    Top,
    Bottom,
    Left,
    Right,
    TopLeft,
    TopRight,
    BottomLeft,
    BottomRight,
}

impl Region {
    pub fn contains(self, b: &BoundingBox) -> bool {
        let (cx, cy) = (b.center_x(), b.center_y());
        let top = cy < 0.5;
        let bottom = cy > 0.5;
        let left = cx < 0.5;
        let right = cx > 0.5;
        match self {
            Region::Top => top,
            Region::Bottom => bottom,
            Region::Left => left,
            Region::Right => right,
            Region::TopLeft => top && left,
            Region::TopRight => top && right,
            Region::BottomLeft => bottom && left,
            Region::BottomRight => bottom && right,
        }
    }
}

impl FromStr for Region {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "top" => Region::Top,
            "bottom" => Region::Bottom,
            "left" => Region::Left,
            "right" => Region::Right,
            "top-left" => Region::TopLeft,
            "top-right" => Region::TopRight,
            "bottom-left" => Region::BottomLeft,
            "bottom-right" => Region::BottomRight,
            _ => return Err(format!("unknown region {s:?}")),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ordinal {
    First,
    Last,
}

/// One step with its constant filled in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum FunctionKind {
    FilterCategory(ElementCategory),
    FilterRegion(Region),
    FilterText(String),
    LocateByText(String),
    RelatedByPosition { relation: SpatialRelation, coarse: bool },
    Count,
    Exists,
    CompareCount(u64),
    NthByReadingOrder(Ordinal),
    DescribedBy,
    ParentSections(String),
    ChildSubsections,
}

/// Static type of a value flowing between steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ValueKind {
    Scope,
    ElemSet,
    Elem,
    Int,
    Bool,
}

impl ValueKind {
    /// A scope can stand in wherever a set of elements is expected.
    fn fits(self, expected: ValueKind) -> bool {
        self == expected || (self == ValueKind::Scope && expected == ValueKind::ElemSet)
    }
}

impl FunctionKind {
    pub fn name(&self) -> &'static str {
        match self {
            FunctionKind::FilterCategory(_) => "filter_category",
            FunctionKind::FilterRegion(_) => "filter_region",
            FunctionKind::FilterText(_) => "filter_text",
            FunctionKind::LocateByText(_) => "locate_by_text",
            FunctionKind::RelatedByPosition { .. } => "related_by_position",
            FunctionKind::Count => "count",
            FunctionKind::Exists => "exists",
            FunctionKind::CompareCount(_) => "compare_count",
            FunctionKind::NthByReadingOrder(_) => "nth_by_reading_order",
            FunctionKind::DescribedBy => "described_by",
            FunctionKind::ParentSections(_) => "parent_sections",
            FunctionKind::ChildSubsections => "child_subsections",
        }
    }

    /// `(input, output)` value kinds.
    pub fn signature(&self) -> (ValueKind, ValueKind) {
        use ValueKind::*;
        match self {
            FunctionKind::FilterCategory(_) | FunctionKind::FilterRegion(_) | FunctionKind::FilterText(_) => {
                (ElemSet, ElemSet)
            }
            FunctionKind::LocateByText(_) => (Scope, Elem),
            FunctionKind::RelatedByPosition { .. } => (Elem, ElemSet),
            FunctionKind::Count => (ElemSet, Int),
            FunctionKind::Exists => (ElemSet, Bool),
            FunctionKind::CompareCount(_) => (Int, Bool),
            FunctionKind::NthByReadingOrder(_) => (ElemSet, Elem),
            FunctionKind::DescribedBy => (Elem, Elem),
            FunctionKind::ParentSections(_) => (Scope, ElemSet),
            FunctionKind::ChildSubsections => (Elem, ElemSet),
        }
    }
}

impl fmt::Display for FunctionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionKind::FilterCategory(c) => write!(f, "filter_category({c})"),
            FunctionKind::FilterRegion(r) => write!(f, "filter_region({r:?})"),
            FunctionKind::FilterText(t) => write!(f, "filter_text({t:?})"),
            FunctionKind::LocateByText(t) => write!(f, "locate_by_text({t:?})"),
            FunctionKind::RelatedByPosition { relation, coarse } => {
                write!(f, "related_by_position({relation}{})", if *coarse { ", coarse" } else { "" })
            }
            FunctionKind::CompareCount(n) => write!(f, "compare_count({n})"),
            FunctionKind::NthByReadingOrder(o) => write!(f, "nth_by_reading_order({o:?})"),
            FunctionKind::ParentSections(l) => write!(f, "parent_sections({l:?})"),
            other => f.write_str(other.name()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScopeKind {
    Page,
    Document,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionalProgram {
    pub task: TaskId,
    pub scope: ScopeKind,
    pub steps: Vec<FunctionKind>,
}

impl FunctionalProgram {
    /// Checks that adjacent steps compose and the result kind suits the task.
    pub fn type_check(&self) -> Result<ValueKind, ProgramError> {
        let mut current = ValueKind::Scope;
        for (i, step) in self.steps.iter().enumerate() {
            let (input, output) = step.signature();
            if !current.fits(input) {
                return Err(ProgramError::TypeMismatch(format!(
                    "step {i} ({step}) expects {input:?}, got {current:?}"
                )));
            }
            if matches!(step, FunctionKind::RelatedByPosition { .. } | FunctionKind::FilterRegion(_))
                && self.scope != ScopeKind::Page
            {
                return Err(ProgramError::TypeMismatch(format!("step {i} ({step}) needs a page scope")));
            }
            current = output;
        }
        let legal = match self.task {
            TaskId::A => matches!(current, ValueKind::Bool | ValueKind::Int),
            TaskId::B => current == ValueKind::Elem,
            TaskId::C => current == ValueKind::ElemSet,
        };
        if !legal {
            return Err(ProgramError::TypeMismatch(format!(
                "task {} cannot answer with {current:?}",
                self.task
            )));
        }
        Ok(current)
    }
}

impl fmt::Display for FunctionalProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.steps.iter().map(|s| s.to_string()).collect();
        f.write_str(&parts.join(" -> "))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProgramError {
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
    #[error("count {0} exceeds the answer space")]
    OverflowAnswer(u64),
    #[error("no title matches {0:?}")]
    AnchorNotFound(String),
    #[error("{count} titles match {text:?}")]
    AmbiguousAnchor { text: String, count: usize },
}

fn category_from_label(label: &str) -> Option<ElementCategory> {
    ElementCategory::ALL.into_iter().find(|c| c.as_str() == label)
}

/// Fills the template's program schema with the binding's constants.
pub fn compile(tpl: &QuestionTemplate, binding: &ParamBinding) -> Result<FunctionalProgram, ProgramError> {
    tpl.check_binding(binding).map_err(|e| ProgramError::TypeMismatch(e.to_string()))?;
    let mut steps = Vec::with_capacity(tpl.program_schema().len());
    for schema in tpl.program_schema() {
        let arg = match schema.arg {
            StepArg::None => "",
            StepArg::Lit(v) => v,
            StepArg::Slot(s) => binding
                .get(s)
                .map(String::as_str)
                .ok_or_else(|| ProgramError::TypeMismatch(format!("binding lacks slot [{s}]")))?,
        };
        let bad = |what: &str| ProgramError::TypeMismatch(format!("{arg:?} is not a {what}"));
        let step = match schema.kind {
            StepKind::FilterCategory => FunctionKind::FilterCategory(category_from_label(arg).ok_or_else(|| bad("label"))?),
            StepKind::FilterRegion => FunctionKind::FilterRegion(arg.parse().map_err(|_| bad("region"))?),
            StepKind::FilterText => FunctionKind::FilterText(arg.to_string()),
            StepKind::LocateByText => FunctionKind::LocateByText(arg.to_string()),
            StepKind::RelatedByPosition => {
                let form = relation_form(arg).ok_or_else(|| bad("relation"))?;
                FunctionKind::RelatedByPosition { relation: form.relation, coarse: form.coarse }
            }
            StepKind::Count => FunctionKind::Count,
            StepKind::Exists => FunctionKind::Exists,
            StepKind::CompareCount => FunctionKind::CompareCount(arg.parse().map_err(|_| bad("number"))?),
            StepKind::NthByReadingOrder => FunctionKind::NthByReadingOrder(match arg {
                "first" => Ordinal::First,
                "last" => Ordinal::Last,
                _ => return Err(bad("ordinal")),
            }),
            StepKind::DescribedBy => FunctionKind::DescribedBy,
            StepKind::ParentSections => FunctionKind::ParentSections(arg.to_string()),
            StepKind::ChildSubsections => FunctionKind::ChildSubsections,
        };
        steps.push(step);
    }
    let program = FunctionalProgram {
        task: tpl.task,
        scope: if tpl.task.is_page_level() { ScopeKind::Page } else { ScopeKind::Document },
        steps,
    };
    program.type_check()?;
    Ok(program)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::templates::load_templates;

    fn b(pairs: &[(&str, &str)]) -> ParamBinding {
        pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
    }

    #[test]
    fn counting_chain() {
        let tpl = load_templates().get("A-CT-01").unwrap();
        let p = compile(tpl, &b(&[("E1", "table"), ("R", "above"), ("E2", "Discussion")])).unwrap();
        assert_eq!(
            p.steps,
            vec![
                FunctionKind::LocateByText("Discussion".into()),
                FunctionKind::RelatedByPosition { relation: SpatialRelation::Top, coarse: true },
                FunctionKind::FilterCategory(ElementCategory::Table),
                FunctionKind::Count,
            ]
        );
        assert_eq!(p.type_check(), Ok(ValueKind::Int));
    }

    #[test]
    fn minimal_existence_chain() {
        let tpl = load_templates().get("A-EX-12").unwrap();
        let p = compile(tpl, &b(&[("E", "table")])).unwrap();
        assert_eq!(p.steps, vec![FunctionKind::FilterCategory(ElementCategory::Table), FunctionKind::Exists]);
    }

    #[test]
    fn child_chain() {
        let tpl = load_templates().get("C-CH-01").unwrap();
        let p = compile(tpl, &b(&[("E", "Methods")])).unwrap();
        assert_eq!(p.steps, vec![FunctionKind::LocateByText("Methods".into()), FunctionKind::ChildSubsections]);
        assert_eq!(p.scope, ScopeKind::Document);
    }

    #[test]
    fn bad_binding_is_type_mismatch() {
        let tpl = load_templates().get("A-EX-12").unwrap();
        assert!(matches!(compile(tpl, &b(&[("E", "equation")])), Err(ProgramError::TypeMismatch(_))));
        assert!(matches!(compile(tpl, &b(&[])), Err(ProgramError::TypeMismatch(_))));
    }

    #[test]
    fn ill_typed_chain_rejected() {
        let p = FunctionalProgram {
            task: TaskId::A,
            scope: ScopeKind::Page,
            steps: vec![FunctionKind::Count, FunctionKind::Count],
        };
        assert!(matches!(p.type_check(), Err(ProgramError::TypeMismatch(_))));
        let p = FunctionalProgram {
            task: TaskId::B,
            scope: ScopeKind::Page,
            steps: vec![FunctionKind::FilterCategory(ElementCategory::Table), FunctionKind::Count],
        };
        assert!(matches!(p.type_check(), Err(ProgramError::TypeMismatch(_))));
    }

    #[test]
    fn every_template_compiles_for_some_binding() {
        for tpl in load_templates().all() {
            let binding: ParamBinding = tpl
                .slots
                .iter()
                .map(|(name, kind)| {
                    let v = match kind {
                        crate::templates::SlotKind::Label { .. } | crate::templates::SlotKind::FloatLabel => "table",
                        crate::templates::SlotKind::Position => "top",
                        crate::templates::SlotKind::Relation { .. } => "below",
                        crate::templates::SlotKind::Number => "2",
                        crate::templates::SlotKind::Ordinal => "last",
                        crate::templates::SlotKind::FloatRef => "Table 1",
                        _ => "Methods",
                    };
                    (name.clone(), v.to_string())
                })
                .collect();
            compile(tpl, &binding).unwrap_or_else(|e| panic!("{}: {e}", tpl.template_id));
        }
    }

    #[test]
    fn region_membership() {
        let bb = |x0, y0, x1, y1| BoundingBox::new(x0, y0, x1, y1).unwrap();
        let centered = bb(0.4, 0.4, 0.6, 0.6);
        assert!(!Region::Top.contains(&centered));
        assert!(!Region::Bottom.contains(&centered));
        let tl = bb(0.0, 0.0, 0.2, 0.2);
        assert!(Region::TopLeft.contains(&tl));
        assert!(Region::Top.contains(&tl) && Region::Left.contains(&tl));
        assert!(!Region::BottomRight.contains(&tl));
    }
}
