//! Graded posets, rank selection, order complexes, EL-labelings and flag
//! vectors.

mod boolean;
mod el;
mod flag;
mod json;

pub use boolean::{boolean_lattice, BooleanLattice};
pub use el::{el_violation, is_sd_el, sd_el_violation, upsilon, verify_el_labeling, ElViolation};
pub use flag::{complex_flag_f, flag_f, flag_h, flag_h_by_descents, FlagVector};
pub use json::{JsonElement, LoadedPoset, PosetJson};

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::combinat::RankSet;
use crate::complex::{Coloring, Face, SimplicialComplex, Vertex};

/// Element id. Within any poset, a smaller rank means a smaller id, so a
/// chain is simply its sorted id list.
pub type ElemId = u32;

/// A chain as an increasing list of element ids.
pub type Chain = Vec<ElemId>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PosetError {
    #[error("duplicate element id {0}")]
    DuplicateId(ElemId),
    #[error("unknown element id {0}")]
    UnknownId(ElemId),
    #[error("ids must increase with rank; {0} violates this")]
    IdOrder(ElemId),
    #[error("cover {0} < {1} does not raise rank by one")]
    BadCover(ElemId, ElemId),
    #[error("poset is not graded at element {0}")]
    NotGraded(ElemId),
    #[error("poset needs a unique 0̂ and 1̂")]
    NotBounded,
    #[error("rank selection needs a nonempty rank set")]
    EmptyRankSet,
    #[error("rank set is over d = {got}, poset has rank {expected}")]
    RankMismatch { expected: usize, got: usize },
    #[error("{0:?} is not a chain")]
    NotAChain(Vec<ElemId>),
    #[error("labeling is not EL on [{0}, {1}]")]
    NotELLabeling(ElemId, ElemId),
    #[error("cover {0} < {1} has no label")]
    MissingLabel(ElemId, ElemId),
    #[error("bad poset description: {0}")]
    Format(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Element {
    pub id: ElemId,
    pub rank: usize,
    pub name: String,
}

/// Finite graded poset with rank function `0..=d`, stored through its cover
/// relation. Elements keep the ids they were built with, so subposets share
/// ids with the poset they came from.
#[derive(Debug, Clone)]
pub struct RankedPoset {
    ids: Vec<ElemId>,
    index: HashMap<ElemId, usize>,
    rank: Vec<usize>,
    names: Vec<String>,
    up: Vec<Vec<usize>>,
    down: Vec<Vec<usize>>,
    // below[y] has bit x set iff x <= y
    below: Vec<Vec<u64>>,
    by_rank: Vec<Vec<usize>>,
    d: usize,
    bottom: Option<usize>,
    top: Option<usize>,
}

fn bit(set: &[u64], i: usize) -> bool {
    set[i / 64] & (1 << (i % 64)) != 0
}

impl RankedPoset {
    pub fn new(
        mut elements: Vec<Element>,
        covers: impl IntoIterator<Item = (ElemId, ElemId)>,
    ) -> Result<Self, PosetError> {
        elements.sort_by_key(|e| e.id);
        for w in elements.windows(2) {
            if w[0].id == w[1].id {
                return Err(PosetError::DuplicateId(w[0].id));
            }
            if w[0].rank > w[1].rank {
                return Err(PosetError::IdOrder(w[1].id));
            }
        }
        let n = elements.len();
        let index: HashMap<ElemId, usize> = elements.iter().enumerate().map(|(i, e)| (e.id, i)).collect();
        let rank: Vec<usize> = elements.iter().map(|e| e.rank).collect();
        let mut up = vec![Vec::new(); n];
        let mut down = vec![Vec::new(); n];
        for (x, y) in covers {
            let xi = *index.get(&x).ok_or(PosetError::UnknownId(x))?;
            let yi = *index.get(&y).ok_or(PosetError::UnknownId(y))?;
            if rank[yi] != rank[xi] + 1 {
                return Err(PosetError::BadCover(x, y));
            }
            up[xi].push(yi);
            down[yi].push(xi);
        }
        for v in up.iter_mut().chain(down.iter_mut()) {
            v.sort_unstable();
            v.dedup();
        }
        let d = rank.iter().copied().max().unwrap_or(0);
        if n > 0 && rank[0] != 0 {
            return Err(PosetError::NotGraded(elements[0].id));
        }
        for i in 0..n {
            if (rank[i] > 0 && down[i].is_empty()) || (rank[i] < d && up[i].is_empty()) {
                return Err(PosetError::NotGraded(elements[i].id));
            }
        }
        let words = n.div_ceil(64).max(1);
        let mut below = vec![vec![0u64; words]; n];
        for y in 0..n {
            below[y][y / 64] |= 1 << (y % 64);
            for &x in &down[y] {
                let (lo, hi) = below.split_at_mut(y);
                for (a, b) in hi[0].iter_mut().zip(&lo[x]) {
                    *a |= *b;
                }
            }
        }
        let mut by_rank = vec![Vec::new(); d + 1];
        for i in 0..n {
            by_rank[rank[i]].push(i);
        }
        let bottom = (n > 0 && by_rank[0].len() == 1).then(|| by_rank[0][0]);
        let top = (n > 0 && by_rank[d].len() == 1).then(|| by_rank[d][0]);
        Ok(RankedPoset {
            ids: elements.iter().map(|e| e.id).collect(),
            index,
            rank,
            names: elements.into_iter().map(|e| e.name).collect(),
            up,
            down,
            below,
            by_rank,
            d,
            bottom,
            top,
        })
    }

    fn idx(&self, id: ElemId) -> usize {
        *self.index.get(&id).unwrap_or_else(|| panic!("element {id} not in poset"))
    }

    /// Rank of `1̂` (or of the maximal elements).
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[ElemId] {
        &self.ids
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.len()).map(|i| Element { id: self.ids[i], rank: self.rank[i], name: self.names[i].clone() })
    }

    pub fn contains(&self, id: ElemId) -> bool {
        self.index.contains_key(&id)
    }

    pub fn rank(&self, id: ElemId) -> usize {
        self.rank[self.idx(id)]
    }

    pub fn name(&self, id: ElemId) -> &str {
        &self.names[self.idx(id)]
    }

    pub fn bottom(&self) -> Option<ElemId> {
        self.bottom.map(|i| self.ids[i])
    }

    pub fn top(&self) -> Option<ElemId> {
        self.top.map(|i| self.ids[i])
    }

    pub fn is_bounded(&self) -> bool {
        self.bottom.is_some() && self.top.is_some()
    }

    pub fn elements_of_rank(&self, r: usize) -> impl Iterator<Item = ElemId> + '_ {
        self.by_rank.get(r).into_iter().flatten().map(|&i| self.ids[i])
    }

    pub fn up_covers(&self, id: ElemId) -> impl Iterator<Item = ElemId> + '_ {
        self.up[self.idx(id)].iter().map(|&i| self.ids[i])
    }

    pub fn down_covers(&self, id: ElemId) -> impl Iterator<Item = ElemId> + '_ {
        self.down[self.idx(id)].iter().map(|&i| self.ids[i])
    }

    /// All cover pairs `(x, y)`, sorted.
    pub fn covers(&self) -> Vec<(ElemId, ElemId)> {
        let mut out: Vec<_> =
            (0..self.len()).flat_map(|x| self.up[x].iter().map(move |&y| (self.ids[x], self.ids[y]))).collect();
        out.sort_unstable();
        out
    }

    pub fn leq(&self, x: ElemId, y: ElemId) -> bool {
        bit(&self.below[self.idx(y)], self.idx(x))
    }

    /// `ids` are all in the poset and pairwise comparable.
    pub fn is_chain(&self, ids: &[ElemId]) -> bool {
        ids.iter().all(|&x| self.contains(x)) && ids.windows(2).all(|w| w[0] != w[1] && self.leq(w[0], w[1]))
    }

    /// Maximal chains, each from a rank-0 element to a maximal element, in
    /// lexicographic order.
    pub fn maximal_chains(&self) -> Vec<Chain> {
        let keep = vec![true; self.len()];
        self.maximal_chains_within(&keep)
    }

    fn maximal_chains_within(&self, keep: &[bool]) -> Vec<Chain> {
        let mut out = Vec::new();
        let starts: Vec<usize> =
            (0..self.len()).filter(|&i| keep[i] && !self.down[i].iter().any(|&j| keep[j])).collect();
        let mut stack = Vec::new();
        fn rec(p: &RankedPoset, keep: &[bool], x: usize, stack: &mut Vec<ElemId>, out: &mut Vec<Chain>) {
            stack.push(p.ids[x]);
            let mut any = false;
            for &y in &p.up[x] {
                if keep[y] {
                    any = true;
                    rec(p, keep, y, stack, out);
                }
            }
            if !any {
                out.push(stack.clone());
            }
            stack.pop();
        }
        for s in starts {
            rec(self, keep, s, &mut stack, &mut out);
        }
        out
    }

    /// Saturated chains from `x` up to `y`, inclusive of both ends.
    pub fn saturated_chains(&self, x: ElemId, y: ElemId) -> Vec<Chain> {
        let (xi, yi) = (self.idx(x), self.idx(y));
        let mut out = Vec::new();
        if !bit(&self.below[yi], xi) {
            return out;
        }
        let mut stack = Vec::new();
        fn rec(p: &RankedPoset, x: usize, yi: usize, stack: &mut Vec<ElemId>, out: &mut Vec<Chain>) {
            stack.push(p.ids[x]);
            if x == yi {
                out.push(stack.clone());
            } else {
                for &z in &p.up[x] {
                    if bit(&p.below[yi], z) {
                        rec(p, z, yi, stack, out);
                    }
                }
            }
            stack.pop();
        }
        rec(self, xi, yi, &mut stack, &mut out);
        out
    }

    /// `P_S`: elements of rank in `S ∪ {0, d}`, re-graded to rank `|S| + 1`.
    pub fn rank_select(&self, s: &RankSet) -> Result<RankedPoset, PosetError> {
        if !self.is_bounded() {
            return Err(PosetError::NotBounded);
        }
        if s.d() != self.d {
            return Err(PosetError::RankMismatch { expected: self.d, got: s.d() });
        }
        if s.is_empty() {
            return Err(PosetError::EmptyRankSet);
        }
        let mut levels = vec![0];
        levels.extend(s.members());
        levels.push(self.d);
        let mut elements = Vec::new();
        let mut covers = Vec::new();
        for (new_rank, &r) in levels.iter().enumerate() {
            for &i in &self.by_rank[r] {
                elements.push(Element { id: self.ids[i], rank: new_rank, name: self.names[i].clone() });
                if new_rank > 0 {
                    for &j in &self.by_rank[levels[new_rank - 1]] {
                        if bit(&self.below[i], j) {
                            covers.push((self.ids[j], self.ids[i]));
                        }
                    }
                }
            }
        }
        RankedPoset::new(elements, covers)
    }

    /// Subposet on `ids` with ranks kept; covers are the comparable pairs
    /// one rank apart.
    pub fn induced_subposet(&self, ids: &BTreeSet<ElemId>) -> Result<RankedPoset, PosetError> {
        let mut elements = Vec::with_capacity(ids.len());
        for &id in ids {
            let i = *self.index.get(&id).ok_or(PosetError::UnknownId(id))?;
            elements.push(Element { id, rank: self.rank[i], name: self.names[i].clone() });
        }
        let mut covers = Vec::new();
        for &x in ids {
            for &y in ids {
                if self.rank(y) == self.rank(x) + 1 && self.leq(x, y) {
                    covers.push((x, y));
                }
            }
        }
        RankedPoset::new(elements, covers)
    }

    /// `Δ(P)`: chains of `P` with `0̂` and `1̂` removed.
    pub fn order_complex(&self) -> SimplicialComplex {
        let mut keep = vec![true; self.len()];
        for b in [self.bottom, self.top].into_iter().flatten() {
            keep[b] = false;
        }
        if self.is_empty() {
            return SimplicialComplex::empty();
        }
        let chains = self.maximal_chains_within(&keep);
        if chains.is_empty() {
            return SimplicialComplex::void();
        }
        SimplicialComplex::from_facets(chains.into_iter().map(chain_face))
    }

    /// Colors each element by its rank.
    pub fn rank_coloring(&self) -> Coloring {
        Coloring((0..self.len()).map(|i| (self.ids[i] as Vertex, self.rank[i] as u32)).collect())
    }

    /// Elements of `chain` whose ranks lie in `s`, with `0̂`/`1̂` dropped.
    pub fn restrict_chain(&self, chain: &[ElemId], s: &RankSet) -> Chain {
        chain.iter().copied().filter(|&x| s.contains(self.rank(x))).collect()
    }
}

/// A chain of poset elements as a face of an order complex.
pub fn chain_face(chain: impl IntoIterator<Item = ElemId>) -> Face {
    chain.into_iter().map(Vertex::from).collect()
}

/// Inverse of [`chain_face`].
pub fn face_chain(face: &[Vertex]) -> Chain {
    face.iter().map(|&v| ElemId::try_from(v).expect("order complex vertex is an element id")).collect()
}

/// An integer label on every cover relation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EdgeLabeling(HashMap<(ElemId, ElemId), i64>);

impl EdgeLabeling {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, x: ElemId, y: ElemId, label: i64) {
        self.0.insert((x, y), label);
    }

    pub fn get(&self, x: ElemId, y: ElemId) -> Option<i64> {
        self.0.get(&(x, y)).copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The word read along a saturated chain.
    pub fn word(&self, chain: &[ElemId]) -> Result<Vec<i64>, PosetError> {
        chain.windows(2).map(|w| self.get(w[0], w[1]).ok_or(PosetError::MissingLabel(w[0], w[1]))).collect()
    }

    /// Every cover of `p` is labeled.
    pub fn is_total_on(&self, p: &RankedPoset) -> Result<(), PosetError> {
        for (x, y) in p.covers() {
            self.get(x, y).ok_or(PosetError::MissingLabel(x, y))?;
        }
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = ((ElemId, ElemId), i64)> + '_ {
        self.0.iter().map(|(&k, &v)| (k, v))
    }
}

impl FromIterator<((ElemId, ElemId), i64)> for EdgeLabeling {
    fn from_iter<T: IntoIterator<Item = ((ElemId, ElemId), i64)>>(iter: T) -> Self {
        EdgeLabeling(iter.into_iter().collect())
    }
}

/// Descent positions of a word: `i` (1-based) with `w[i-1] > w[i]`, as a
/// subset of `[len]` where `len = w.len()`.
pub fn word_descents(word: &[i64]) -> RankSet {
    let d = word.len().max(1);
    RankSet::new(d, (1..word.len()).filter(|&i| word[i - 1] > word[i])).expect("positions in range")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain3() -> RankedPoset {
        let elements = (0..3).map(|i| Element { id: i, rank: i as usize, name: format!("x{i}") }).collect();
        RankedPoset::new(elements, [(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn chain_order_complex_is_a_point() {
        let p = chain3();
        assert!(p.is_bounded());
        assert_eq!(p.order_complex(), SimplicialComplex::simplex([1]));
    }

    #[test]
    fn validation() {
        let e = |id, rank| Element { id, rank, name: String::new() };
        assert_eq!(RankedPoset::new(vec![e(0, 0), e(0, 1)], []).unwrap_err(), PosetError::DuplicateId(0));
        assert_eq!(RankedPoset::new(vec![e(0, 1), e(1, 0)], []).unwrap_err(), PosetError::IdOrder(1));
        assert_eq!(RankedPoset::new(vec![e(0, 0), e(1, 2)], [(0, 1)]).unwrap_err(), PosetError::BadCover(0, 1));
        assert!(matches!(RankedPoset::new(vec![e(0, 0), e(1, 1), e(2, 1)], [(0, 1)]), Err(PosetError::NotGraded(2))));
    }

    #[test]
    fn b3_order_complex_and_selection() {
        let b = boolean_lattice(3);
        let p = &b.poset;
        assert_eq!(p.len(), 8);
        assert_eq!(p.covers().len(), 12);
        let hex = p.order_complex();
        assert_eq!(hex.f_vector().unwrap(), vec![1, 6, 6]);

        let s1 = p.rank_select(&RankSet::new(3, [1]).unwrap()).unwrap();
        assert_eq!(s1.len(), 5);
        assert_eq!(s1.d(), 2);
        assert_eq!(s1.order_complex().facets().len(), 3);

        let full = p.rank_select(&RankSet::full(3)).unwrap();
        assert_eq!(full.covers(), p.covers());
        assert_eq!(p.rank_select(&RankSet::empty(3)).unwrap_err(), PosetError::EmptyRankSet);
    }

    #[test]
    fn b4_atoms_vs_coatoms() {
        let b = boolean_lattice(4);
        let sel = b.poset.rank_select(&RankSet::new(4, [1, 3]).unwrap()).unwrap();
        let k = sel.order_complex();
        assert_eq!(k.vertices().len(), 8);
        assert_eq!(k.facets().len(), 12);
    }

    #[test]
    fn word_descent_positions() {
        assert_eq!(word_descents(&[3, 1, 2]).members(), vec![1]);
        assert_eq!(word_descents(&[7, 5, 9, 2]).members(), vec![1, 3]);
    }
}
