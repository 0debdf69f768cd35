use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::GraphError;
use crate::doc::{BoundingBox, Page};

/// Fraction of the narrower extent two boxes must share on an axis to count
/// as aligned on it.
pub const OVERLAP_THRESHOLD: f64 = 0.5;
/// Center displacements at or below this are treated as zero.
pub const CENTER_EPSILON: f64 = 1e-6;

/// Direction of one element relative to another; "b is Top of a" means b
/// sits above a.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpatialRelation {
    Top,
    Bottom,
    Left,
    Right,
    TopLeft,
    TopRight,
    BottomLeft,
    BottomRight,
}

impl SpatialRelation {
    pub const ALL: [SpatialRelation; 8] = [
        SpatialRelation::Top,
        SpatialRelation::Bottom,
        SpatialRelation::Left,
        SpatialRelation::Right,
        SpatialRelation::TopLeft,
        SpatialRelation::TopRight,
        SpatialRelation::BottomLeft,
        SpatialRelation::BottomRight,
    ];

    pub fn inverse(self) -> Self {
        use SpatialRelation::*;
        match self {
            Top => Bottom,
            Bottom => Top,
            Left => Right,
            Right => Left,
            TopLeft => BottomRight,
            BottomRight => TopLeft,
            TopRight => BottomLeft,
            BottomLeft => TopRight,
        }
    }

    pub fn as_str(self) -> &'static str {
        use SpatialRelation::*;
        match self {
            Top => "top",
            Bottom => "bottom",
            Left => "left",
            Right => "right",
            TopLeft => "top-left",
            TopRight => "top-right",
            BottomLeft => "bottom-left",
            BottomRight => "bottom-right",
        }
    }

    /// Whether an edge labeled `edge` answers a query for `self`. Coarse
    /// cardinal queries also accept the two adjacent diagonals.
    pub fn admits(self, edge: SpatialRelation, coarse: bool) -> bool {
        use SpatialRelation::*;
        if self == edge {
            return true;
        }
        if !coarse {
            return false;
        }
        matches!(
            (self, edge),
            (Top, TopLeft | TopRight)
                | (Bottom, BottomLeft | BottomRight)
                | (Left, TopLeft | BottomLeft)
                | (Right, TopRight | BottomRight)
        )
    }
}

impl fmt::Display for SpatialRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SpatialRelation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SpatialRelation::ALL
            .into_iter()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| format!("unknown spatial relation {s:?}"))
    }
}

fn axis_overlap(a0: f64, a1: f64, b0: f64, b1: f64) -> f64 {
    let shared = (a1.min(b1) - a0.max(b0)).max(0.0);
    shared / (a1 - a0).min(b1 - b0)
}

/// Where `b` lies relative to `a`, or `None` when they overlap on both axes
/// or their centers coincide on the deciding axis.
pub fn spatial_relation(a: &BoundingBox, b: &BoundingBox) -> Option<SpatialRelation> {
    use SpatialRelation::*;
    let ox = axis_overlap(a.x0, a.x1, b.x0, b.x1);
    let oy = axis_overlap(a.y0, a.y1, b.y0, b.y1);
    let dx = b.center_x() - a.center_x();
    let dy = b.center_y() - a.center_y();
    let sign = |d: f64| {
        if d < -CENTER_EPSILON {
            -1
        } else if d > CENTER_EPSILON {
            1
        } else {
            0
        }
    };
    let aligned_x = ox >= OVERLAP_THRESHOLD;
    let aligned_y = oy >= OVERLAP_THRESHOLD;
    match (aligned_x, aligned_y) {
        (true, true) => None,
        (true, false) => match sign(dy) {
            -1 => Some(Top),
            1 => Some(Bottom),
            _ => None,
        },
        (false, true) => match sign(dx) {
            -1 => Some(Left),
            1 => Some(Right),
            _ => None,
        },
        (false, false) => match (sign(dy), sign(dx)) {
            (-1, -1) => Some(TopLeft),
            (-1, 1) => Some(TopRight),
            (1, -1) => Some(BottomLeft),
            (1, 1) => Some(BottomRight),
            _ => None,
        },
    }
}

/// Pairwise relations among one page's elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpatialGraph {
    pub page_index: usize,
    ids: Vec<String>,
    lookup: HashMap<String, usize>,
    /// Row-major `ids.len()²` matrix; entry `(i, j)` is j's relation to i.
    relations: Vec<Option<SpatialRelation>>,
}

impl SpatialGraph {
    pub fn build(page: &Page) -> Self {
        let n = page.elements.len();
        let ids: Vec<String> = page.elements.iter().map(|e| e.id.clone()).collect();
        let lookup = ids.iter().enumerate().map(|(i, id)| (id.clone(), i)).collect();
        let mut relations = vec![None; n * n];
        for (i, a) in page.elements.iter().enumerate() {
            for (j, b) in page.elements.iter().enumerate() {
                if i != j {
                    relations[i * n + j] = spatial_relation(&a.bbox, &b.bbox);
                }
            }
        }
        SpatialGraph { page_index: page.index, ids, lookup, relations }
    }

    pub fn contains(&self, id: &str) -> bool {
        self.lookup.contains_key(id)
    }

    pub fn node_ids(&self) -> &[String] {
        &self.ids
    }

    pub fn relation(&self, src: &str, dst: &str) -> Option<SpatialRelation> {
        let i = *self.lookup.get(src)?;
        let j = *self.lookup.get(dst)?;
        self.relations[i * self.ids.len() + j]
    }

    /// All edges `(src, dst, rel)` sorted by `(src, dst)`.
    pub fn edges(&self) -> Vec<(&str, &str, SpatialRelation)> {
        let n = self.ids.len();
        let mut out: Vec<(&str, &str, SpatialRelation)> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter_map(|(i, j)| {
                self.relations[i * n + j].map(|r| (self.ids[i].as_str(), self.ids[j].as_str(), r))
            })
            .collect();
        out.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        out
    }

    pub fn edge_count(&self) -> usize {
        self.relations.iter().filter(|r| r.is_some()).count()
    }

    /// Ids `b` with an edge `(anchor, b, r)` where `rel` admits `r`.
    pub fn query_related(
        &self,
        anchor: &str,
        rel: SpatialRelation,
        coarse: bool,
    ) -> Result<BTreeSet<String>, GraphError> {
        let i = *self
            .lookup
            .get(anchor)
            .ok_or_else(|| GraphError::UnknownElement(anchor.to_string()))?;
        let n = self.ids.len();
        Ok((0..n)
            .filter(|&j| self.relations[i * n + j].is_some_and(|r| rel.admits(r, coarse)))
            .map(|j| self.ids[j].clone())
            .collect())
    }
}
