use std::collections::BTreeMap;

use super::{descent_class, max_bipartite_matching, weak_lt, CombinatError, Perm, RankSet};

/// Outcome of a dominance query. `witness`, when present, is an injection
/// `D_T → D_S` with `σ <_w φ(σ)` for every `σ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dominance {
    pub dominates: bool,
    pub witness: Option<BTreeMap<Perm, Perm>>,
}

/// Does `s` dominate `t`? Requires an injection from `D_T^d` into `D_S^d`
/// moving every permutation strictly up in the weak order, so
/// `dominates(S, S)` is false.
pub fn dominates(t: &RankSet, s: &RankSet) -> Result<Dominance, CombinatError> {
    if t.d() != s.d() {
        return Err(CombinatError::DimensionMismatch(t.d(), s.d()));
    }
    let left = descent_class(t);
    let right = descent_class(s);
    if left.len() > right.len() {
        return Ok(Dominance { dominates: false, witness: None });
    }
    let adj: Vec<Vec<usize>> =
        left.iter().map(|sigma| (0..right.len()).filter(|&j| weak_lt(sigma, &right[j])).collect()).collect();
    let matching = max_bipartite_matching(right.len(), &adj);
    if matching.iter().any(Option::is_none) {
        return Ok(Dominance { dominates: false, witness: None });
    }
    let witness =
        left.into_iter().zip(matching).map(|(sigma, j)| (sigma, right[j.expect("saturating")].clone())).collect();
    Ok(Dominance { dominates: true, witness: Some(witness) })
}

/// `t == s` or `s` dominates `t`.
pub fn dominates_or_equal(t: &RankSet, s: &RankSet) -> Result<bool, CombinatError> {
    Ok(t == s || dominates(t, s)?.dominates)
}

/// Every pair `(T, S)` of subsets of `[d-1]` with `S` dominating `T`, in
/// lexicographic order.
pub fn dominating_pairs(d: usize) -> Vec<(RankSet, RankSet)> {
    let mut sets: Vec<RankSet> = RankSet::all(d).collect();
    sets.sort();
    let mut out = Vec::new();
    for t in &sets {
        for s in &sets {
            if dominates(t, s).expect("same d").dominates {
                out.push((*t, *s));
            }
        }
    }
    out
}
