//! The built-in question patterns. Each row: id, question type, family,
//! pattern, and the label slots rendered in plural form.

use super::{Family, QuestionType};

use Family::*;
use QuestionType::*;

pub(super) type Row = (&'static str, QuestionType, Family, &'static str, &'static [&'static str]);

pub(super) const ROWS: &[Row] = &[
    // Existence: page regions.
    ("A-EX-01", Existence, RegionExists, "Is there any [E] on the [pos] of this page?", &[]),
    ("A-EX-02", Existence, RegionExists, "Can you find any [E] on the [pos] of this page?", &[]),
    ("A-EX-03", Existence, RegionExists, "On the [pos] of this page, is there a [E]?", &[]),
    ("A-EX-04", Existence, RegionAbsent, "Is it correct that there is no [E] at the [pos]?", &[]),
    (
        "A-EX-05",
        Existence,
        RegionExists,
        "When you check the [pos] of this page, can you find any [E]?",
        &[],
    ),
    // Existence: relative to a titled anchor.
    ("A-EX-06", Existence, RelatedExists, "Are there any [E1] are [R] the [E2]?", &["E1"]),
    ("A-EX-07", Existence, RelatedExists, "Can you find any [E1] [R] the [E2]?", &[]),
    ("A-EX-08", Existence, RelatedExists, "Is there a [E1] found [R] the [E2]?", &[]),
    ("A-EX-09", Existence, RelatedAbsent, "Is it correct that there is no [E1] [R] the [E2]?", &[]),
    ("A-EX-10", Existence, RelatedExists, "Confirm if there are any [E1] [R] the [E2]?", &["E1"]),
    (
        "A-EX-11",
        Existence,
        RelatedExists,
        "When you check the page, is there any [E1] [R] the [E2]?",
        &[],
    ),
    // Existence: element labels.
    ("A-EX-12", Existence, LabelExists, "Is there any [E]?", &[]),
    ("A-EX-13", Existence, LabelExists, "Are there any [E] on this page?", &["E"]),
    ("A-EX-14", Existence, LabelExists, "Is there a [E] in this page?", &[]),
    ("A-EX-15", Existence, LabelExists, "Can you find a [E] on this page?", &[]),
    ("A-EX-16", Existence, LabelExists, "When you check this page, can you find any [E]?", &[]),
    // Existence: title texts.
    ("A-EX-17", Existence, TitleExists, "Is there a [E] on this page?", &[]),
    ("A-EX-18", Existence, TitleExists, "Can you find a [E] on this page?", &[]),
    ("A-EX-19", Existence, TitleExists, "Does this page include a [E]?", &[]),
    ("A-EX-20", Existence, TitleExists, "Can [E] be found on this page?", &[]),
    ("A-EX-21", Existence, TitleExists, "When you check this page, can you find [E]?", &[]),
    ("A-EX-22", Existence, TitleExists, "Confirm if there is [E] on this page.", &[]),
    // Counting.
    ("A-CT-01", Counting, RelatedCount, "How many [E1] are [R] the [E2]?", &["E1"]),
    ("A-CT-02", Counting, RelatedCount, "What is the number of [E1] [R] the [E2]?", &["E1"]),
    ("A-CT-03", Counting, RelatedCount, "How many [E1] can you find on the [R] of [E2]?", &["E1"]),
    ("A-CT-04", Counting, RelatedCount, "Count the number of [E1] on the [R] of [E2].", &["E1"]),
    (
        "A-CT-05",
        Counting,
        RelatedCount,
        "When you check this page, how many [E1] can you find on the [R] of [E2]?",
        &["E1"],
    ),
    ("A-CT-06", Counting, CountEquals, "Can you find [num] [E](s) on the page?", &[]),
    ("A-CT-07", Counting, CountEquals, "Does this page include [num] [E](s)", &[]),
    ("A-CT-08", Counting, CountEquals, "Confirm if there are [num] [E](s) on this page.", &[]),
    ("A-CT-09", Counting, CountEquals, "Are there [num] [E](s) on this page?", &[]),
    ("A-CT-10", Counting, CountEquals, "Is there only [num] [E](s) on this page?", &[]),
    ("A-CT-11", Counting, LabelCount, "How many [E]s on this page?", &[]),
    ("A-CT-12", Counting, LabelCount, "When you check this page, how many [E]s are on this page?", &[]),
    ("A-CT-13", Counting, LabelCount, "What is the number of [E]s on this page?", &[]),
    ("A-CT-14", Counting, LabelCount, "How many [E]s can be found on this page?", &[]),
    // Structural understanding.
    ("B-SU-01", StructuralUnderstanding, OrdinalSection, "What is the [turn] section in this page?", &[]),
    (
        "B-SU-02",
        StructuralUnderstanding,
        OrdinalSection,
        "Can you describe the [turn] section of this page?",
        &[],
    ),
    (
        "B-SU-03",
        StructuralUnderstanding,
        OrdinalSection,
        "What does the [turn] section include in this page?",
        &[],
    ),
    (
        "B-SU-04",
        StructuralUnderstanding,
        OrdinalSection,
        "What is the main contents of the [turn] section in this page?",
        &[],
    ),
    (
        "B-SU-05",
        StructuralUnderstanding,
        OrdinalSection,
        "When you check the [turn] section of this page, what information can you get?",
        &[],
    ),
    ("B-SU-06", StructuralUnderstanding, RegionSection, "What is the [pos] section about?", &[]),
    ("B-SU-07", StructuralUnderstanding, RegionSection, "What is the [pos] of the page about?", &[]),
    ("B-SU-08", StructuralUnderstanding, RegionSection, "What is the topic of [pos] section?", &[]),
    (
        "B-SU-09",
        StructuralUnderstanding,
        RegionSection,
        "Can you describe the main topic of the [pos] section?",
        &[],
    ),
    (
        "B-SU-10",
        StructuralUnderstanding,
        RegionSection,
        "When you check the [pos] of this page, what information can you get?",
        &[],
    ),
    // Object recognition.
    ("B-OR-01", ObjectRecognition, RegionObject, "What is the [E] on the [pos] of the page?", &[]),
    ("B-OR-02", ObjectRecognition, RegionObject, "What is the [pos] [E] about?", &[]),
    (
        "B-OR-03",
        ObjectRecognition,
        RegionObject,
        "Can you describe the [E] on the [pos] of the page?",
        &[],
    ),
    ("B-OR-04", ObjectRecognition, RegionObject, "What information does the [pos] [E] contain?", &[]),
    (
        "B-OR-05",
        ObjectRecognition,
        RegionObject,
        "When you check the [pos] [E], what information can you get?",
        &[],
    ),
    // Child relation.
    ("C-CH-01", ChildRelation, ChildSections, "What does the [E] include?", &[]),
    ("C-CH-02", ChildRelation, ChildSections, "What is the [E] about?", &[]),
    ("C-CH-03", ChildRelation, ChildSections, "What subsections are in the [E]?", &[]),
    ("C-CH-04", ChildRelation, ChildSections, "What subsections can be found in the [E]?", &[]),
    (
        "C-CH-05",
        ChildRelation,
        ChildSections,
        "When you check the [E], which subsections are included?",
        &[],
    ),
    // Parent relation: floats.
    ("C-PA-01", ParentRelation, FloatSections, "Which section does describe the [E] ?", &[]),
    (
        "C-PA-02",
        ParentRelation,
        FloatSections,
        "Which section does include the description of the [E]?",
        &[],
    ),
    ("C-PA-03", ParentRelation, FloatSections, "Name out the section that include the [E].", &[]),
    ("C-PA-04", ParentRelation, FloatSections, "Where can you find the [E]?", &[]),
    (
        "C-PA-05",
        ParentRelation,
        FloatSections,
        "When you search for the description of [E], which sections do you need to check?",
        &[],
    ),
    // Parent relation: citations.
    ("C-PA-06", ParentRelation, CitationSections, "Which section does include the [E]?", &[]),
    ("C-PA-07", ParentRelation, CitationSections, "Which section does cite the [E]?", &[]),
    ("C-PA-08", ParentRelation, CitationSections, "Where is the [E] cited in the document?", &[]),
    ("C-PA-09", ParentRelation, CitationSections, "Where can [E] be found in the document?", &[]),
    (
        "C-PA-10",
        ParentRelation,
        CitationSections,
        "When you search for the citation of [E], which sections can you find it?",
        &[],
    ),
];
