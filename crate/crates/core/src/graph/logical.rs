use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::OnceLock;

use regex::Regex;

use super::GraphError;
use crate::doc::{DocElement, Document, ElementCategory, ROOT_ID};

fn numbering_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"^\s*(\d+(?:\.\d+)*)\.?(?:\s|$)").expect("valid numbering regex"))
}

/// Heading depth implied by a numbering prefix ("2.3 Data" is level 2);
/// unnumbered titles are level 1.
pub fn title_level(text: &str) -> usize {
    numbering_regex()
        .captures(text)
        .map(|c| c[1].split('.').count())
        .unwrap_or(1)
}

/// Parent/child hierarchy of one document, rooted at [`ROOT_ID`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogicalGraph {
    pub doc_id: String,
    /// Every element maps to its parent; top-level elements map to [`ROOT_ID`].
    parent_of: BTreeMap<String, String>,
    children: HashMap<String, Vec<String>>,
    titles: HashSet<String>,
}

impl LogicalGraph {
    /// Uses explicit `parent_id`s when any element carries one, otherwise
    /// infers sections from titles. In both modes a float linked to a
    /// caption is parented by that caption.
    pub fn build(doc: &Document) -> Result<Self, GraphError> {
        let ordered = doc.elements_in_order();
        let caption_of: HashMap<&str, &str> = doc.caption_links().collect();
        let explicit = ordered.iter().any(|e| e.parent_id.is_some());
        let parent_of = if explicit {
            explicit_parents(&ordered, &caption_of)?
        } else {
            heuristic_parents(&ordered, &caption_of)
        };
        let mut children: HashMap<String, Vec<String>> = HashMap::new();
        children.insert(ROOT_ID.to_string(), Vec::new());
        for e in &ordered {
            children.entry(e.id.clone()).or_default();
            children.entry(parent_of[&e.id].clone()).or_default().push(e.id.clone());
        }
        let titles = ordered
            .iter()
            .filter(|e| e.category == ElementCategory::Title)
            .map(|e| e.id.clone())
            .collect();
        Ok(LogicalGraph { doc_id: doc.doc_id.clone(), parent_of, children, titles })
    }

    pub fn contains(&self, id: &str) -> bool {
        self.children.contains_key(id)
    }

    /// Direct children in document reading order.
    pub fn children(&self, id: &str) -> Result<&[String], GraphError> {
        self.children
            .get(id)
            .map(Vec::as_slice)
            .ok_or_else(|| GraphError::UnknownElement(id.to_string()))
    }

    /// Direct parent; `None` for the root. Top-level elements return the root.
    pub fn parent(&self, id: &str) -> Result<Option<&str>, GraphError> {
        if id == ROOT_ID {
            return Ok(None);
        }
        self.parent_of
            .get(id)
            .map(|p| Some(p.as_str()))
            .ok_or_else(|| GraphError::UnknownElement(id.to_string()))
    }

    pub fn parent_of(&self) -> &BTreeMap<String, String> {
        &self.parent_of
    }

    /// Nearest Title strictly above `id`.
    pub fn owning_title(&self, id: &str) -> Option<&str> {
        let mut cur = self.parent_of.get(id)?;
        while cur != ROOT_ID {
            if self.titles.contains(cur) {
                return Some(cur);
            }
            cur = self.parent_of.get(cur)?;
        }
        None
    }

    /// Ancestors from the direct parent up to, excluding, the root.
    pub fn ancestors(&self, id: &str) -> Result<Vec<&str>, GraphError> {
        let mut out = Vec::new();
        let mut cur = self.parent(id)?;
        while let Some(p) = cur {
            if p == ROOT_ID {
                break;
            }
            out.push(p);
            cur = self.parent(p)?;
        }
        Ok(out)
    }
}

fn explicit_parents(
    ordered: &[&DocElement],
    caption_of: &HashMap<&str, &str>,
) -> Result<BTreeMap<String, String>, GraphError> {
    let known: HashSet<&str> = ordered.iter().map(|e| e.id.as_str()).collect();
    let mut parent_of: BTreeMap<String, String> = BTreeMap::new();
    for e in ordered {
        let parent = match e.parent_id.as_deref() {
            None | Some(ROOT_ID) => ROOT_ID,
            Some(p) if p == e.id => return Err(GraphError::CyclicParentInput(e.id.clone())),
            Some(p) if known.contains(p) => p,
            Some(p) => {
                return Err(GraphError::DanglingParent { child: e.id.clone(), parent: p.to_string() })
            }
        };
        parent_of.insert(e.id.clone(), parent.to_string());
    }
    if let Some(id) = find_cycle(&parent_of) {
        return Err(GraphError::CyclicParentInput(id));
    }
    for e in ordered {
        if let Some(&cap) = caption_of.get(e.id.as_str()) {
            let previous = parent_of.insert(e.id.clone(), cap.to_string());
            if find_cycle(&parent_of).is_some() {
                // The caption already hangs below its float; keep the input.
                parent_of.insert(e.id.clone(), previous.expect("every element has a parent"));
            }
        }
    }
    Ok(parent_of)
}

/// Some element on a cycle, if the parent map has one.
fn find_cycle(parent_of: &BTreeMap<String, String>) -> Option<String> {
    let mut done: HashSet<&str> = HashSet::new();
    for start in parent_of.keys() {
        let mut path: HashSet<&str> = HashSet::new();
        let mut cur = start.as_str();
        while cur != ROOT_ID && !done.contains(cur) {
            if !path.insert(cur) {
                return Some(cur.to_string());
            }
            cur = parent_of[cur].as_str();
        }
        done.extend(path);
    }
    None
}

fn heuristic_parents(
    ordered: &[&DocElement],
    caption_of: &HashMap<&str, &str>,
) -> BTreeMap<String, String> {
    let mut parent_of = BTreeMap::new();
    let mut stack: Vec<(usize, &str)> = Vec::new();
    for e in ordered {
        let parent = if e.category == ElementCategory::Title {
            let level = title_level(&e.text);
            while stack.last().is_some_and(|&(l, _)| l >= level) {
                stack.pop();
            }
            let parent = stack.last().map_or(ROOT_ID, |&(_, id)| id);
            stack.push((level, e.id.as_str()));
            parent
        } else if let Some(&cap) = caption_of.get(e.id.as_str()) {
            cap
        } else {
            stack.last().map_or(ROOT_ID, |&(_, id)| id)
        };
        parent_of.insert(e.id.clone(), parent.to_string());
    }
    parent_of
}
