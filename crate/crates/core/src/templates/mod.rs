//! Question templates: the built-in registry, slot typing, rendering of
//! question strings and recovery of bindings from rendered text.

mod bindings;
mod catalog;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::SpatialRelation;
use crate::program::{StepArg, StepKind, StepSchema};
use crate::util::derive_seed;

pub use bindings::enumerate_bindings;

/// Slot name to value.
pub type ParamBinding = BTreeMap<String, String>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TaskId {
    A,
    B,
    C,
}

impl TaskId {
    pub const ALL: [TaskId; 3] = [TaskId::A, TaskId::B, TaskId::C];

    pub fn as_str(self) -> &'static str {
        match self {
            TaskId::A => "A",
            TaskId::B => "B",
            TaskId::C => "C",
        }
    }

    /// Page-level tasks ask about one page; task C about a whole document.
    pub fn is_page_level(self) -> bool {
        self != TaskId::C
    }

    pub fn qtypes(self) -> [QuestionType; 2] {
        use QuestionType::*;
        match self {
            TaskId::A => [Existence, Counting],
            TaskId::B => [StructuralUnderstanding, ObjectRecognition],
            TaskId::C => [ParentRelation, ChildRelation],
        }
    }
}

impl fmt::Display for TaskId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for TaskId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "A" | "a" => Ok(TaskId::A),
            "B" | "b" => Ok(TaskId::B),
            "C" | "c" => Ok(TaskId::C),
            other => Err(format!("unknown task {other:?}, expected A, B or C")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuestionType {
    Existence,
    Counting,
    StructuralUnderstanding,
    ObjectRecognition,
    ParentRelation,
    ChildRelation,
}

impl QuestionType {
    pub const ALL: [QuestionType; 6] = [
        QuestionType::Existence,
        QuestionType::Counting,
        QuestionType::StructuralUnderstanding,
        QuestionType::ObjectRecognition,
        QuestionType::ParentRelation,
        QuestionType::ChildRelation,
    ];

    pub fn task(self) -> TaskId {
        use QuestionType::*;
        match self {
            Existence | Counting => TaskId::A,
            StructuralUnderstanding | ObjectRecognition => TaskId::B,
            ParentRelation | ChildRelation => TaskId::C,
        }
    }

    pub fn as_str(self) -> &'static str {
        use QuestionType::*;
        match self {
            Existence => "existence",
            Counting => "counting",
            StructuralUnderstanding => "structural_understanding",
            ObjectRecognition => "object_recognition",
            ParentRelation => "parent_relation",
            ChildRelation => "child_relation",
        }
    }

    /// Column header used in evaluation tables.
    pub fn short_label(self) -> &'static str {
        use QuestionType::*;
        match self {
            Existence => "Existence",
            Counting => "Counting",
            StructuralUnderstanding => "Struct-UD",
            ObjectRecognition => "Obj-Reg",
            ParentRelation => "Parent",
            ChildRelation => "Child",
        }
    }
}

impl fmt::Display for QuestionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Labels a label slot may take.
pub const LABELS: [&str; 4] = ["title", "list", "table", "figure"];
/// Labels an object-recognition slot may take.
pub const FLOAT_LABELS: [&str; 2] = ["table", "figure"];
/// Page regions for `[pos]`.
pub const POSITIONS: [&str; 8] = [
    "top",
    "bottom",
    "left",
    "right",
    "top-left",
    "top-right",
    "bottom-left",
    "bottom-right",
];
pub const ORDINALS: [&str; 2] = ["first", "last"];
pub const NUMBERS: [&str; 5] = ["1", "2", "3", "4", "5"];

/// A relation value for `[R]`: spatial relation, whether queried coarsely,
/// prepositional surface forms, and the noun used in "on the [R] of".
pub struct RelationForm {
    pub value: &'static str,
    pub relation: SpatialRelation,
    pub coarse: bool,
    pub prepositions: &'static [&'static str],
    pub noun: &'static str,
}

pub const RELATIONS: [RelationForm; 8] = [
    RelationForm {
        value: "above",
        relation: SpatialRelation::Top,
        coarse: true,
        prepositions: &["above", "upper", "on the top of"],
        noun: "top",
    },
    RelationForm {
        value: "below",
        relation: SpatialRelation::Bottom,
        coarse: true,
        prepositions: &["below", "under", "on the bottom of"],
        noun: "bottom",
    },
    RelationForm {
        value: "left",
        relation: SpatialRelation::Left,
        coarse: false,
        prepositions: &["left of", "on the left of"],
        noun: "left",
    },
    RelationForm {
        value: "right",
        relation: SpatialRelation::Right,
        coarse: false,
        prepositions: &["right of", "on the right of"],
        noun: "right",
    },
    RelationForm {
        value: "top-left",
        relation: SpatialRelation::TopLeft,
        coarse: false,
        prepositions: &["top-left of", "on the top-left of"],
        noun: "top-left",
    },
    RelationForm {
        value: "top-right",
        relation: SpatialRelation::TopRight,
        coarse: false,
        prepositions: &["top-right of", "on the top-right of"],
        noun: "top-right",
    },
    RelationForm {
        value: "bottom-left",
        relation: SpatialRelation::BottomLeft,
        coarse: false,
        prepositions: &["bottom-left of", "on the bottom-left of"],
        noun: "bottom-left",
    },
    RelationForm {
        value: "bottom-right",
        relation: SpatialRelation::BottomRight,
        coarse: false,
        prepositions: &["bottom-right of", "on the bottom-right of"],
        noun: "bottom-right",
    },
];

pub fn relation_form(value: &str) -> Option<&'static RelationForm> {
    RELATIONS.iter().find(|r| r.value == value)
}

/// What a slot ranges over and how its value is written.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlotKind {
    Label { plural: bool },
    FloatLabel,
    Position,
    Relation { noun: bool },
    Number,
    Ordinal,
    TitleText { quoted: bool },
    FloatRef,
    Citation,
}

impl SlotKind {
    /// Value kinds come from document text rather than a fixed vocabulary.
    pub fn is_text(self) -> bool {
        matches!(self, SlotKind::TitleText { .. } | SlotKind::FloatRef | SlotKind::Citation)
    }

    fn accepts(self, value: &str) -> bool {
        match self {
            SlotKind::Label { .. } => LABELS.contains(&value),
            SlotKind::FloatLabel => FLOAT_LABELS.contains(&value),
            SlotKind::Position => POSITIONS.contains(&value),
            SlotKind::Relation { .. } => relation_form(value).is_some(),
            SlotKind::Number => NUMBERS.contains(&value),
            SlotKind::Ordinal => ORDINALS.contains(&value),
            SlotKind::TitleText { .. } | SlotKind::Citation => !value.trim().is_empty(),
            SlotKind::FloatRef => crate::doc::canonical_label(value).as_deref() == Some(value),
        }
    }

    /// Every surface form this value may be written as.
    fn surfaces(self, value: &str) -> Vec<String> {
        match self {
            SlotKind::Label { plural: true } => vec![format!("{value}s")],
            SlotKind::Relation { noun } => {
                let form = relation_form(value).expect("validated relation");
                if noun {
                    vec![form.noun.to_string()]
                } else {
                    form.prepositions.iter().map(|s| s.to_string()).collect()
                }
            }
            SlotKind::TitleText { quoted: true } | SlotKind::Citation => vec![format!("'{value}'")],
            _ => vec![value.to_string()],
        }
    }

    /// Regex fragment matching any surface of any legal value.
    fn regex(self, name: &str) -> String {
        let alternatives = |values: Vec<String>| {
            let mut v = values;
            v.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
            v.iter().map(|s| regex::escape(s)).collect::<Vec<_>>().join("|")
        };
        let body = match self {
            SlotKind::Label { plural } => {
                alternatives(LABELS.iter().map(|l| if plural { format!("{l}s") } else { l.to_string() }).collect())
            }
            SlotKind::FloatLabel => alternatives(FLOAT_LABELS.iter().map(|s| s.to_string()).collect()),
            SlotKind::Position => alternatives(POSITIONS.iter().map(|s| s.to_string()).collect()),
            SlotKind::Relation { .. } => {
                alternatives(RELATIONS.iter().flat_map(|r| self.surfaces(r.value)).collect())
            }
            SlotKind::Number => "[1-5]".to_string(),
            SlotKind::Ordinal => alternatives(ORDINALS.iter().map(|s| s.to_string()).collect()),
            SlotKind::TitleText { quoted: false } => ".+".to_string(),
            SlotKind::TitleText { quoted: true } | SlotKind::Citation => "'.+'".to_string(),
            SlotKind::FloatRef => "(?:Table|Figure) [0-9]+".to_string(),
        };
        format!("(?P<{name}>{body})")
    }

    /// Inverse of `surfaces`.
    fn value_from_surface(self, surface: &str) -> Option<String> {
        match self {
            SlotKind::Label { plural: true } => surface.strip_suffix('s').map(str::to_string),
            SlotKind::Relation { .. } => RELATIONS
                .iter()
                .find(|r| self.surfaces(r.value).iter().any(|s| s == surface))
                .map(|r| r.value.to_string()),
            SlotKind::TitleText { quoted: true } | SlotKind::Citation => surface
                .strip_prefix('\'')
                .and_then(|s| s.strip_suffix('\''))
                .map(str::to_string),
            _ => Some(surface.to_string()),
        }
    }
}

/// Reasoning shape shared by templates that differ only in wording.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    RegionExists,
    RegionAbsent,
    RelatedExists,
    RelatedAbsent,
    LabelExists,
    TitleExists,
    RelatedCount,
    CountEquals,
    LabelCount,
    OrdinalSection,
    RegionSection,
    RegionObject,
    ChildSections,
    FloatSections,
    CitationSections,
}

// A macro rather than a const fn so the slices below are promoted to statics.
macro_rules! step {
    ($kind:expr, $arg:expr) => {
        StepSchema { kind: $kind, arg: $arg }
    };
}

impl Family {
    /// Program skeleton; slot arguments are filled from the binding.
    pub fn program_schema(self) -> &'static [StepSchema] {
        use StepArg::{Lit, None as NoArg, Slot};
        use StepKind::*;
        match self {
            Family::RegionExists => &[
                step!(FilterRegion, Slot("pos")),
                step!(FilterCategory, Slot("E")),
                step!(Exists, NoArg),
            ],
            Family::RegionAbsent => &[
                step!(FilterRegion, Slot("pos")),
                step!(FilterCategory, Slot("E")),
                step!(Count, NoArg),
                step!(CompareCount, Lit("0")),
            ],
            Family::RelatedExists => &[
                step!(LocateByText, Slot("E2")),
                step!(RelatedByPosition, Slot("R")),
                step!(FilterCategory, Slot("E1")),
                step!(Exists, NoArg),
            ],
            Family::RelatedAbsent => &[
                step!(LocateByText, Slot("E2")),
                step!(RelatedByPosition, Slot("R")),
                step!(FilterCategory, Slot("E1")),
                step!(Count, NoArg),
                step!(CompareCount, Lit("0")),
            ],
            Family::LabelExists => &[step!(FilterCategory, Slot("E")), step!(Exists, NoArg)],
            Family::TitleExists => &[
                step!(FilterCategory, Lit("title")),
                step!(FilterText, Slot("E")),
                step!(Exists, NoArg),
            ],
            Family::RelatedCount => &[
                step!(LocateByText, Slot("E2")),
                step!(RelatedByPosition, Slot("R")),
                step!(FilterCategory, Slot("E1")),
                step!(Count, NoArg),
            ],
            Family::CountEquals => &[
                step!(FilterCategory, Slot("E")),
                step!(Count, NoArg),
                step!(CompareCount, Slot("num")),
            ],
            Family::LabelCount => &[step!(FilterCategory, Slot("E")), step!(Count, NoArg)],
            Family::OrdinalSection => &[
                step!(FilterCategory, Lit("title")),
                step!(NthByReadingOrder, Slot("turn")),
                step!(DescribedBy, NoArg),
            ],
            Family::RegionSection => &[
                step!(FilterRegion, Slot("pos")),
                step!(FilterCategory, Lit("title")),
                step!(NthByReadingOrder, Lit("first")),
                step!(DescribedBy, NoArg),
            ],
            Family::RegionObject => &[
                step!(FilterRegion, Slot("pos")),
                step!(FilterCategory, Slot("E")),
                step!(NthByReadingOrder, Lit("first")),
                step!(DescribedBy, NoArg),
            ],
            Family::ChildSections => &[step!(LocateByText, Slot("E")), step!(ChildSubsections, NoArg)],
            Family::FloatSections | Family::CitationSections => &[step!(ParentSections, Slot("E"))],
        }
    }

    fn slot_kind(self, slot: &str, plural: bool, noun: bool) -> Option<SlotKind> {
        use Family::*;
        let kind = match (self, slot) {
            (RegionExists | RegionAbsent | LabelExists | CountEquals | LabelCount, "E") => {
                SlotKind::Label { plural }
            }
            (RelatedExists | RelatedAbsent | RelatedCount, "E1") => SlotKind::Label { plural },
            (RelatedExists | RelatedAbsent | RelatedCount, "E2") => SlotKind::TitleText { quoted: true },
            (RelatedExists | RelatedAbsent | RelatedCount, "R") => SlotKind::Relation { noun },
            (TitleExists, "E") => SlotKind::TitleText { quoted: true },
            (RegionObject, "E") => SlotKind::FloatLabel,
            (ChildSections, "E") => SlotKind::TitleText { quoted: false },
            (FloatSections, "E") => SlotKind::FloatRef,
            (CitationSections, "E") => SlotKind::Citation,
            (RegionExists | RegionAbsent | RegionSection | RegionObject, "pos") => SlotKind::Position,
            (CountEquals, "num") => SlotKind::Number,
            (OrdinalSection, "turn") => SlotKind::Ordinal,
            _ => return None,
        };
        Some(kind)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TemplateError {
    #[error("template {template_id}: binding has no value for slot [{slot}]")]
    IncompleteBinding { template_id: String, slot: String },
    #[error("template {template_id}: {value:?} is not a valid value for slot [{slot}]")]
    InvalidValue { template_id: String, slot: String, value: String },
    #[error("unknown template {0:?}")]
    UnknownTemplate(String),
    #[error("question {text:?} does not match template {template_id}")]
    NoMatch { template_id: String, text: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Segment {
    Literal(String),
    Slot(String),
}

fn parse_pattern(pattern: &str) -> Vec<Segment> {
    let slot = Regex::new(r"\[([A-Za-z0-9]+)\]").expect("valid slot regex");
    let mut out = Vec::new();
    let mut last = 0;
    for m in slot.captures_iter(pattern) {
        let whole = m.get(0).expect("match");
        if whole.start() > last {
            out.push(Segment::Literal(pattern[last..whole.start()].to_string()));
        }
        out.push(Segment::Slot(m[1].to_string()));
        last = whole.end();
    }
    if last < pattern.len() {
        out.push(Segment::Literal(pattern[last..].to_string()));
    }
    out
}

fn starts_with_vowel(surface: &str) -> bool {
    surface
        .trim_start_matches('\'')
        .chars()
        .next()
        .is_some_and(|c| "aeiouAEIOU".contains(c))
}

/// True when `lit` ends with the standalone article "a ".
fn ends_with_article(lit: &str) -> bool {
    lit == "a " || lit.ends_with(" a ")
}

#[derive(Debug, Clone)]
pub struct QuestionTemplate {
    pub template_id: &'static str,
    pub task: TaskId,
    pub qtype: QuestionType,
    pub family: Family,
    pub pattern: &'static str,
    /// Slots in pattern order with their kinds.
    pub slots: Vec<(String, SlotKind)>,
    segments: Vec<Segment>,
    extract_re: Regex,
}

impl QuestionTemplate {
    fn new(row: &catalog::Row) -> Self {
        let &(template_id, qtype, family, pattern, plural) = row;
        let segments = parse_pattern(pattern);
        let mut slots = Vec::new();
        for (i, seg) in segments.iter().enumerate() {
            if let Segment::Slot(name) = seg {
                let noun = matches!(
                    (i.checked_sub(1).map(|j| &segments[j]), segments.get(i + 1)),
                    (Some(Segment::Literal(before)), Some(Segment::Literal(after)))
                        if before.ends_with("the ") && after.starts_with(" of")
                );
                let kind = family
                    .slot_kind(name, plural.contains(&name.as_str()), noun)
                    .unwrap_or_else(|| panic!("{template_id}: slot [{name}] not valid for {family:?}"));
                slots.push((name.clone(), kind));
            }
        }
        let mut re = String::from("(?s)^");
        for (i, seg) in segments.iter().enumerate() {
            match seg {
                Segment::Literal(lit) => {
                    let before_slot = matches!(segments.get(i + 1), Some(Segment::Slot(_)));
                    if before_slot && ends_with_article(lit) {
                        re.push_str(&regex::escape(&lit[..lit.len() - 2]));
                        re.push_str("an? ");
                    } else {
                        re.push_str(&regex::escape(lit));
                    }
                }
                Segment::Slot(name) => {
                    let kind = slots.iter().find(|(n, _)| n == name).expect("slot typed").1;
                    re.push_str(&kind.regex(name));
                }
            }
        }
        re.push('$');
        QuestionTemplate {
            template_id,
            task: qtype.task(),
            qtype,
            family,
            pattern,
            slots,
            segments,
            extract_re: Regex::new(&re).expect("template regex compiles"),
        }
    }

    pub fn program_schema(&self) -> &'static [StepSchema] {
        self.family.program_schema()
    }

    pub fn slot_kind(&self, slot: &str) -> Option<SlotKind> {
        self.slots.iter().find(|(n, _)| n == slot).map(|s| s.1)
    }

    /// Checks that the binding covers exactly this template's slots with
    /// legal values.
    pub fn check_binding(&self, binding: &ParamBinding) -> Result<(), TemplateError> {
        for (slot, kind) in &self.slots {
            let value = binding.get(slot).ok_or_else(|| TemplateError::IncompleteBinding {
                template_id: self.template_id.to_string(),
                slot: slot.clone(),
            })?;
            if !kind.accepts(value) {
                return Err(TemplateError::InvalidValue {
                    template_id: self.template_id.to_string(),
                    slot: slot.clone(),
                    value: value.clone(),
                });
            }
        }
        if let Some(extra) = binding.keys().find(|k| self.slot_kind(k).is_none()) {
            return Err(TemplateError::InvalidValue {
                template_id: self.template_id.to_string(),
                slot: extra.clone(),
                value: binding[extra].clone(),
            });
        }
        Ok(())
    }

    /// Renders the question. Synonyms are picked deterministically from
    /// `seed`, the template and the binding.
    pub fn instantiate(&self, binding: &ParamBinding, seed: u64) -> Result<String, TemplateError> {
        self.check_binding(binding)?;
        let key = binding_key(binding);
        let mut out = String::new();
        for seg in &self.segments {
            match seg {
                Segment::Literal(lit) => out.push_str(lit),
                Segment::Slot(name) => {
                    let kind = self.slot_kind(name).expect("slot typed");
                    let surfaces = kind.surfaces(&binding[name]);
                    let pick = if surfaces.len() == 1 {
                        0
                    } else {
                        (derive_seed(seed, &[self.template_id, &key, name]) % surfaces.len() as u64) as usize
                    };
                    let surface = &surfaces[pick];
                    if ends_with_article(&out) && starts_with_vowel(surface) {
                        out.truncate(out.len() - 2);
                        out.push_str("an ");
                    }
                    out.push_str(surface);
                }
            }
        }
        Ok(out)
    }

    /// Recovers the binding from a rendered question.
    pub fn extract(&self, text: &str) -> Result<ParamBinding, TemplateError> {
        let no_match = || TemplateError::NoMatch {
            template_id: self.template_id.to_string(),
            text: text.to_string(),
        };
        let caps = self.extract_re.captures(text).ok_or_else(no_match)?;
        let mut binding = ParamBinding::new();
        for (name, kind) in &self.slots {
            let surface = caps.name(name).ok_or_else(no_match)?.as_str();
            let value = kind.value_from_surface(surface).ok_or_else(no_match)?;
            binding.insert(name.clone(), value);
        }
        self.check_binding(&binding).map_err(|_| no_match())?;
        Ok(binding)
    }
}

impl QuestionTemplate {
    /// Replaces the document-text slot values in `question` with
    /// `placeholder`, keeping quotes. `None` if the question does not match.
    pub fn mask_text_slots(&self, question: &str, placeholder: &str) -> Option<String> {
        let caps = self.extract_re.captures(question)?;
        let mut spans: Vec<(usize, usize, bool)> = self
            .slots
            .iter()
            .filter(|(_, k)| k.is_text())
            .filter_map(|(name, kind)| {
                let m = caps.name(name)?;
                let quoted = matches!(kind, SlotKind::TitleText { quoted: true } | SlotKind::Citation);
                Some((m.start(), m.end(), quoted))
            })
            .collect();
        spans.sort_unstable();
        let mut out = String::with_capacity(question.len());
        let mut last = 0;
        for (start, end, quoted) in spans {
            out.push_str(&question[last..start]);
            if quoted {
                out.push('\'');
                out.push_str(placeholder);
                out.push('\'');
            } else {
                out.push_str(placeholder);
            }
            last = end;
        }
        out.push_str(&question[last..]);
        Some(out)
    }
}

/// Stable string form of a binding, used in ids and seeds.
pub fn binding_key(binding: &ParamBinding) -> String {
    serde_json::to_string(binding).expect("binding serializes")
}

/// One entry of the registry dump.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TemplateSummary {
    pub template_id: String,
    pub task: TaskId,
    pub qtype: QuestionType,
    pub pattern: String,
}

#[derive(Debug)]
pub struct TemplateRegistry {
    templates: Vec<QuestionTemplate>,
    by_id: HashMap<&'static str, usize>,
}

impl TemplateRegistry {
    /// The built-in registry, built once.
    pub fn builtin() -> &'static TemplateRegistry {
        static REGISTRY: OnceLock<TemplateRegistry> = OnceLock::new();
        REGISTRY.get_or_init(|| {
            let mut templates: Vec<QuestionTemplate> = catalog::ROWS.iter().map(QuestionTemplate::new).collect();
            templates.sort_by_key(|t| t.template_id);
            let by_id = templates.iter().enumerate().map(|(i, t)| (t.template_id, i)).collect();
            TemplateRegistry { templates, by_id }
        })
    }

    /// Templates sorted by id.
    pub fn all(&self) -> &[QuestionTemplate] {
        &self.templates
    }

    pub fn len(&self) -> usize {
        self.templates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.templates.is_empty()
    }

    pub fn get(&self, template_id: &str) -> Result<&QuestionTemplate, TemplateError> {
        self.by_id
            .get(template_id)
            .map(|&i| &self.templates[i])
            .ok_or_else(|| TemplateError::UnknownTemplate(template_id.to_string()))
    }

    pub fn for_task(&self, task: TaskId) -> impl Iterator<Item = &QuestionTemplate> {
        self.templates.iter().filter(move |t| t.task == task)
    }

    pub fn summaries(&self) -> Vec<TemplateSummary> {
        self.templates
            .iter()
            .map(|t| TemplateSummary {
                template_id: t.template_id.to_string(),
                task: t.task,
                qtype: t.qtype,
                pattern: t.pattern.to_string(),
            })
            .collect()
    }

    /// Pretty JSON array of `{template_id, task, qtype, pattern}`.
    pub fn dump_json(&self) -> String {
        serde_json::to_string_pretty(&self.summaries()).expect("summaries serialize")
    }
}

/// The built-in registry.
pub fn load_templates() -> &'static TemplateRegistry {
    TemplateRegistry::builtin()
}
