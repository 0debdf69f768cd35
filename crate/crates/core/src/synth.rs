//! Seeded synthetic documents for tests, benchmarks and demos.
//!
//! Two generators: [`random_page_document`] scatters boxes anywhere on a
//! single page (overlaps and exact alignments included), while
//! [`random_document`] lays out multi-page articles in one or two columns
//! with numbered sections, captioned floats, cross-references and
//! citations. [`fixture_p1`] is a small hand-built page with known answers.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::doc::{from_raw, preprocess, Document, ElementCategory, RawDocument, RawElement, RawPage};
use crate::util::derive_seed;

const PAGE_SIZE: f64 = 1000.0;

const SECTION_NAMES: [&str; 10] = [
    "Introduction",
    "Methods",
    "Results",
    "Discussion",
    "Conclusion",
    "Related Work",
    "Data",
    "Experiments",
    "Analysis",
    "Limitations",
];

const REFERENCES: [&str; 6] = ["Smith 2019", "Lee 2020", "Garcia 2018", "Chen 2021", "Okafor 2017", "Novak 2022"];

const FILLER: [&str; 6] = [
    "We describe the cohort.",
    "Values were normalized.",
    "The effect was consistent.",
    "Further work is needed.",
    "Samples were collected twice.",
    "No adverse events occurred.",
];

fn raw(id: String, category: ElementCategory, bbox: [f64; 4], text: String) -> RawElement {
    RawElement { id, category, bbox, text, parent_id: None, xrefs: None }
}

fn finish(doc_id: String, pages: Vec<Vec<RawElement>>, references: Vec<String>) -> Document {
    let raw_doc = RawDocument {
        doc_id,
        references,
        pages: pages
            .into_iter()
            .enumerate()
            .map(|(index, elements)| RawPage { index, width: PAGE_SIZE, height: PAGE_SIZE, elements })
            .collect(),
    };
    preprocess(from_raw(raw_doc).expect("synthetic documents are well formed"))
}

/// Five-element page: a "Results" title, a paragraph citing Table 1, the
/// table with its caption above it, and a closing paragraph in a right
/// column. Reading order is title, paragraph, caption, table, paragraph.
pub fn fixture_p1() -> Document {
    let elements = vec![
        raw("t".into(), ElementCategory::Title, [100.0, 50.0, 500.0, 90.0], "Results".into()),
        raw("x1".into(), ElementCategory::Text, [100.0, 110.0, 900.0, 300.0], "Outcomes are listed in Table 1.".into()),
        raw("c1".into(), ElementCategory::TableCaption, [100.0, 320.0, 900.0, 350.0], "Table 1. Main outcomes.".into()),
        raw("tb".into(), ElementCategory::Table, [100.0, 360.0, 900.0, 700.0], String::new()),
        raw("x2".into(), ElementCategory::Text, [600.0, 720.0, 900.0, 950.0], "We discuss them next.".into()),
    ];
    finish("p1".into(), vec![elements], Vec::new())
}

fn pick<'a, R: Rng>(rng: &mut R, items: &[&'a str]) -> &'a str {
    items[rng.random_range(0..items.len())]
}

/// Coordinate in [0, 1]: a multiple of 0.05 some of the time so that
/// exact alignments and center ties occur.
fn coord<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    if rng.random_bool(0.3) {
        let steps = ((hi - lo) / 0.05).floor() as u32;
        lo + 0.05 * rng.random_range(0..=steps) as f64
    } else {
        rng.random_range(lo..hi)
    }
}

fn category<R: Rng>(rng: &mut R) -> ElementCategory {
    const WEIGHTED: [(ElementCategory, u32); 7] = [
        (ElementCategory::Title, 4),
        (ElementCategory::Text, 6),
        (ElementCategory::List, 2),
        (ElementCategory::Table, 2),
        (ElementCategory::Figure, 2),
        (ElementCategory::TableCaption, 1),
        (ElementCategory::FigureCaption, 1),
    ];
    let total: u32 = WEIGHTED.iter().map(|w| w.1).sum();
    let mut roll = rng.random_range(0..total);
    for (c, w) in WEIGHTED {
        if roll < w {
            return c;
        }
        roll -= w;
    }
    unreachable!("weights cover the roll")
}

fn title_text<R: Rng>(rng: &mut R) -> String {
    let name = pick(rng, &SECTION_NAMES[..6]);
    match rng.random_range(0..3) {
        0 => name.to_string(),
        1 => format!("{} {name}", rng.random_range(1..4)),
        _ => format!("{}.{} {name}", rng.random_range(1..4), rng.random_range(1..3)),
    }
}

fn body_text<R: Rng>(rng: &mut R, floats: usize) -> String {
    let mut s = pick(rng, &FILLER).to_string();
    if floats > 0 && rng.random_bool(0.5) {
        let kind = pick(rng, &["Table", "Figure", "Fig."]);
        s.push_str(&format!(" See {kind} {}.", rng.random_range(1..=floats)));
    }
    if rng.random_bool(0.3) {
        s.push_str(&format!(" As in {}.", pick(rng, &REFERENCES)));
    }
    s
}

/// One page of `n` boxes with random categories and positions; boxes may
/// overlap and titles may repeat.
pub fn random_page_document<R: Rng>(rng: &mut R, doc_id: &str, n: usize) -> Document {
    let mut elements = Vec::with_capacity(n);
    let mut tables = 0;
    let mut figures = 0;
    for i in 0..n {
        let cat = category(rng);
        let x0 = coord(rng, 0.0, 0.8);
        let y0 = coord(rng, 0.0, 0.9);
        let x1 = (x0 + coord(rng, 0.05, 0.5)).min(1.0);
        let y1 = (y0 + coord(rng, 0.02, 0.2)).min(1.0);
        let text = match cat {
            ElementCategory::Title => title_text(rng),
            ElementCategory::Text | ElementCategory::List => body_text(rng, 3),
            ElementCategory::TableCaption => {
                tables += 1;
                format!("Table {tables}. Summary.")
            }
            ElementCategory::FigureCaption => {
                figures += 1;
                format!("Figure {figures}. Overview.")
            }
            ElementCategory::Table | ElementCategory::Figure => String::new(),
        };
        let bbox = [x0, y0, x1, y1].map(|c| c * PAGE_SIZE);
        elements.push(raw(format!("e{i:02}"), cat, bbox, text));
    }
    let references = REFERENCES.iter().map(|s| s.to_string()).collect();
    finish(doc_id.to_string(), vec![elements], references)
}

/// Block of a laid-out page: one element, or a float with its caption.
enum Block {
    Single(ElementCategory, String),
    Float(ElementCategory, String),
}

impl Block {
    fn len(&self) -> usize {
        match self {
            Block::Single(..) => 1,
            Block::Float(..) => 2,
        }
    }
}

struct Sections {
    counters: Vec<usize>,
    used: Vec<usize>,
}

impl Sections {
    fn next_title<R: Rng>(&mut self, rng: &mut R) -> String {
        let depth = if self.counters.is_empty() { 1 } else { rng.random_range(1..=self.counters.len().min(2) + 1) };
        self.counters.truncate(depth);
        if self.counters.len() < depth {
            self.counters.push(1);
        } else {
            self.counters[depth - 1] += 1;
        }
        let number = self.counters.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(".");
        // Mostly fresh names; an occasional repeat makes ambiguous anchors.
        let name = if !self.used.is_empty() && rng.random_bool(0.1) {
            SECTION_NAMES[self.used[rng.random_range(0..self.used.len())]]
        } else {
            let i = rng.random_range(0..SECTION_NAMES.len());
            self.used.push(i);
            SECTION_NAMES[i]
        };
        if rng.random_bool(0.15) {
            name.to_string()
        } else {
            format!("{number} {name}")
        }
    }
}

/// A multi-page article: one or two columns per page, 3 to `max_per_page`
/// elements per page, hierarchical numbered titles, floats captioned below
/// (figures) or above (tables), and body text mentioning floats and
/// citations.
pub fn random_document<R: Rng>(rng: &mut R, doc_id: &str, pages: usize, max_per_page: usize) -> Document {
    let max_per_page = max_per_page.max(3);
    let mut sections = Sections { counters: Vec::new(), used: Vec::new() };
    let mut tables = 0;
    let mut figures = 0;
    let mut raw_pages = Vec::with_capacity(pages);
    let mut next_id = 0;
    for _ in 0..pages {
        let target = rng.random_range(3..=max_per_page);
        let mut blocks = Vec::new();
        let mut count = 0;
        while count < target {
            let roll = rng.random_range(0..10);
            let block = if roll < 2 || (count == 0 && rng.random_bool(0.5)) {
                Block::Single(ElementCategory::Title, sections.next_title(rng))
            } else if roll < 3 && count + 2 <= target {
                if rng.random_bool(0.5) {
                    tables += 1;
                    Block::Float(ElementCategory::Table, format!("Table {tables}. Measurements."))
                } else {
                    figures += 1;
                    Block::Float(ElementCategory::Figure, format!("Figure {figures}. Overview."))
                }
            } else if roll < 4 {
                Block::Single(ElementCategory::List, body_text(rng, tables.max(figures)))
            } else {
                Block::Single(ElementCategory::Text, body_text(rng, tables.max(figures)))
            };
            count += block.len();
            blocks.push(block);
        }
        let columns: Vec<(f64, f64)> = if rng.random_bool(0.5) {
            vec![(0.08, 0.92)]
        } else {
            vec![(0.06, 0.47), (0.53, 0.94)]
        };
        let per_column = blocks.len().div_ceil(columns.len());
        let mut elements = Vec::new();
        for (ci, chunk) in blocks.chunks(per_column).enumerate() {
            let (x0, x1) = columns[ci];
            let weights: Vec<f64> = chunk
                .iter()
                .map(|b| match b {
                    Block::Single(ElementCategory::Title, _) => 1.0,
                    Block::Single(..) => rng.random_range(1.5..4.0),
                    Block::Float(..) => rng.random_range(3.0..6.0),
                })
                .collect();
            let gap = 0.01;
            let gaps = gap * (chunk.iter().map(Block::len).sum::<usize>() as f64);
            let unit = (0.9 - gaps) / weights.iter().sum::<f64>();
            let mut y = 0.05;
            for (block, w) in chunk.iter().zip(&weights) {
                let h = w * unit;
                let mut push = |cat: ElementCategory, y0: f64, y1: f64, text: String| {
                    let bbox = [x0, y0, x1, y1].map(|c| (c * PAGE_SIZE * 10.0).round() / 10.0);
                    elements.push(raw(format!("n{next_id:04}"), cat, bbox, text));
                    next_id += 1;
                };
                match block {
                    Block::Single(cat, text) => push(*cat, y, y + h, text.clone()),
                    Block::Float(cat, caption) => {
                        let cap_h = (0.25 * h).min(0.03);
                        let kind = cat.caption_kind().expect("float");
                        if *cat == ElementCategory::Table {
                            push(kind, y, y + cap_h, caption.clone());
                            push(*cat, y + cap_h + gap / 2.0, y + h + gap / 2.0, String::new());
                        } else {
                            push(*cat, y, y + h - cap_h, String::new());
                            push(kind, y + h - cap_h + gap / 2.0, y + h + gap / 2.0, caption.clone());
                        }
                    }
                }
                y += h + gap * block.len() as f64;
            }
        }
        raw_pages.push(elements);
    }
    let references = REFERENCES.iter().map(|s| s.to_string()).collect();
    finish(doc_id.to_string(), raw_pages, references)
}

/// `docs` articles of 1 to `max_pages` pages, reproducible from `seed`
/// and independent of each other.
pub fn random_corpus(seed: u64, docs: usize, max_pages: usize) -> Vec<Document> {
    (0..docs)
        .map(|i| {
            let doc_id = format!("syn{i:04}");
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &["synth", &doc_id]));
            let pages = rng.random_range(1..=max_pages.max(1));
            random_document(&mut rng, &doc_id, pages, 25)
        })
        .collect()
}
