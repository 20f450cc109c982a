//! Permutations, descent classes, the weak order on permutations, dominance
//! between rank sets and Macaulay's characterization of M-vectors.

mod dominance;
mod macaulay;
mod matching;
mod perm;
mod rankset;
mod weak;

pub use dominance::{dominates, dominates_or_equal, dominating_pairs, Dominance};
pub use macaulay::{is_m_vector, macaulay_representation, pseudopower};
pub use matching::max_bipartite_matching;
pub use perm::{descent_class, descent_set, Perm};
pub use rankset::RankSet;
pub use weak::{weak_leq, weak_leq_by_inversions, weak_leq_by_switches, weak_lt};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CombinatError {
    #[error("not a permutation of 1..{d}: {word:?}")]
    InvalidPerm { d: usize, word: Vec<u32> },
    #[error("rank {member} is outside 1..{d}-1")]
    OutOfRange { d: usize, member: usize },
    #[error("rank sets over different d ({0} vs {1})")]
    DimensionMismatch(usize, usize),
    #[error("d = {0} is not supported (must be 1..=63)")]
    BadDimension(usize),
    #[error("cannot parse {0:?}")]
    Parse(String),
}

/// Exact integer vector, e.g. an h-vector or g-vector. Entries may be
/// negative; the M-vector test rejects those.
pub type IntVector = Vec<i64>;

/// Computes `w(S) = { i in [d-1] : exactly one of i, i+1 lies in S }`.
pub fn w_set(s: &RankSet) -> RankSet {
    let d = s.d();
    let members = (1..d).filter(|&i| s.contains(i) != s.contains(i + 1));
    RankSet::new(d, members).expect("members lie in 1..d-1")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(d: usize, m: &[usize]) -> RankSet {
        RankSet::new(d, m.iter().copied()).unwrap()
    }

    #[test]
    fn w_set_point_values() {
        // S ⊆ [4] means d = 5.
        assert_eq!(w_set(&rs(5, &[2, 3])), rs(5, &[1, 3]));
        assert_eq!(w_set(&rs(5, &[1, 2])), rs(5, &[2]));
        assert_eq!(w_set(&rs(5, &[1])), rs(5, &[1]));
        assert_eq!(w_set(&rs(5, &[])), rs(5, &[]));
    }

    #[test]
    fn non_extension_witness() {
        let s = rs(5, &[1, 2]);
        let t = rs(5, &[1]);
        assert!(dominates(&t, &s).unwrap().dominates);
        assert!(!w_set(&t).is_subset(&w_set(&s)));
    }
}
