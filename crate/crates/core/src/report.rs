//! Inequality tables and the JSON artifact written by the CLI.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::combinat::{is_m_vector, RankSet};
use crate::pipeline::{DecompositionReport, Prechecks, Source};
use crate::poset::FlagVector;

/// One inequality `lhs ≤ rhs` with its values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InequalityRow {
    pub name: String,
    pub lhs: i64,
    pub rhs: i64,
    pub holds: bool,
}

impl InequalityRow {
    fn new(name: String, lhs: i64, rhs: i64) -> Self {
        InequalityRow { name, lhs, rhs, holds: lhs <= rhs }
    }
}

impl fmt::Display for InequalityRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = if self.holds { "✓" } else { "✗" };
        write!(f, "{}: {}≤{} {}", self.name, self.lhs, self.rhs, mark)
    }
}

/// h-vector inequalities of a complex with a convex-ear decomposition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InequalityTable {
    pub h: Vec<i64>,
    pub rows: Vec<InequalityRow>,
    /// `(h_0, h_1 - h_0, …, h_⌊D/2⌋ - h_⌊D/2⌋-1)`.
    pub g: Vec<i64>,
    pub g_is_m_vector: bool,
}

impl InequalityTable {
    pub fn holds(&self) -> bool {
        self.g_is_m_vector && self.rows.iter().all(|r| r.holds)
    }
}

/// Rows `h_i ≤ h_{i+1}` and `h_i ≤ h_{D-i}` for `i < D/2`, where
/// `h = (h_0, …, h_D)`, plus the M-vector test on the g-vector.
pub fn report_inequalities(h: &[i64]) -> InequalityTable {
    let d = h.len().saturating_sub(1);
    let mut rows = Vec::new();
    for i in (0..d).filter(|&i| 2 * i < d) {
        rows.push(InequalityRow::new(format!("h_{i}≤h_{}", i + 1), h[i], h[i + 1]));
        if d - i != i + 1 {
            rows.push(InequalityRow::new(format!("h_{i}≤h_{}", d - i), h[i], h[d - i]));
        }
    }
    let g: Vec<i64> =
        (0..=d / 2).filter(|&i| i < h.len()).map(|i| if i == 0 { h[0] } else { h[i] - h[i - 1] }).collect();
    InequalityTable { h: h.to_vec(), rows, g_is_m_vector: is_m_vector(&g), g }
}

/// `h_T ≤ h_S` for a dominating pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DominanceRow {
    pub t: RankSet,
    pub s: RankSet,
    pub h_t: i64,
    pub h_s: i64,
    pub holds: bool,
}

impl fmt::Display for DominanceRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = if self.holds { "✓" } else { "✗" };
        write!(f, "h_{}≤h_{}: {}≤{} {}", self.t, self.s, self.h_t, self.h_s, mark)
    }
}

pub fn dominance_rows(pairs: &[(RankSet, RankSet)], h: &FlagVector) -> Vec<DominanceRow> {
    pairs
        .iter()
        .map(|&(t, s)| {
            let (h_t, h_s) = (h.get(&t), h.get(&s));
            DominanceRow { t, s, h_t, h_s, holds: h_t <= h_s }
        })
        .collect()
}

/// The JSON document written by `--out`. Reading it back only needs the
/// source and the ears, see [`StoredArtifact`].
#[derive(Debug, Clone, Serialize)]
pub struct Artifact {
    pub source: Source,
    pub prechecks: Prechecks,
    pub runs: Vec<DecompositionReport>,
    pub passed: bool,
}

impl Artifact {
    pub fn new(source: Source, prechecks: Prechecks, runs: Vec<DecompositionReport>) -> Self {
        let passed = prechecks.passed() && runs.iter().all(DecompositionReport::passed);
        Artifact { source, prechecks, runs, passed }
    }
}

/// The parts of an [`Artifact`] that `verify` re-checks.
#[derive(Debug, Clone, Deserialize)]
pub struct StoredArtifact {
    pub source: Source,
    pub runs: Vec<StoredRun>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct StoredRun {
    pub decomposition: StoredSequence,
}

#[derive(Debug, Clone, Deserialize)]
pub struct StoredSequence {
    pub d: usize,
    pub s: Vec<usize>,
    pub ears: Vec<crate::ced::Ear>,
}
