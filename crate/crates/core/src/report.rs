//! Violations found by the checkers, each with a concrete witness element.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub relation: String,
    pub level: usize,
    pub element: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lhs: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rhs: Option<usize>,
    /// Structure maps the relation involves, e.g. `d1^2`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub maps: Vec<String>,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} fails at level {} on element {}",
            self.relation, self.level, self.element
        )?;
        if let (Some(l), Some(r)) = (self.lhs, self.rhs) {
            write!(f, " ({l} vs {r})")?;
        }
        Ok(())
    }
}

/// Maps involved in every violation; with a single corrupted table entry
/// the corrupted map is among them.
pub fn suspects(violations: &[Violation]) -> Vec<String> {
    let Some(first) = violations.first() else {
        return Vec::new();
    };
    let mut out: Vec<String> = first.maps.clone();
    out.retain(|m| violations.iter().all(|v| v.maps.contains(m)));
    out.sort();
    out.dedup();
    out
}

/// First element where two tables disagree.
pub fn first_mismatch(lhs: &[usize], rhs: &[usize]) -> Option<(usize, usize, usize)> {
    lhs.iter()
        .zip(rhs)
        .enumerate()
        .find(|(_, (a, b))| a != b)
        .map(|(x, (a, b))| (x, *a, *b))
}

/// Compares two maps on a level and records a violation at the first
/// disagreement.
pub(crate) fn compare(
    out: &mut Vec<Violation>,
    relation: String,
    level: usize,
    lhs: &[usize],
    rhs: &[usize],
    maps: Vec<String>,
) {
    if let Some((element, l, r)) = first_mismatch(lhs, rhs) {
        out.push(Violation {
            relation,
            level,
            element,
            lhs: Some(l),
            rhs: Some(r),
            maps,
        });
    }
}
