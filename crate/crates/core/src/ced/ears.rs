use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{BooleanPiece, BooleanPieceSequence, CedError};
use crate::combinat::RankSet;
use crate::complex::{Coloring, Face, SimplicialComplex, Vertex};
use crate::poset::{chain_face, upsilon, word_descents, Chain, EdgeLabeling, ElemId, RankedPoset};

/// A maximal chain of a piece whose label has the requested descent set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DescentChain {
    pub chain: Chain,
    pub label: Vec<i64>,
}

/// The `d_i`: maximal chains of `p` whose `λ`-label has descent set `s`,
/// in lexicographic order of labels.
pub fn descent_chains(p: &RankedPoset, lambda: &EdgeLabeling, s: &RankSet) -> Result<Vec<DescentChain>, CedError> {
    let mut out = Vec::new();
    for chain in p.maximal_chains() {
        let label = lambda.word(&chain)?;
        if word_descents(&label) == *s {
            out.push(DescentChain { chain, label });
        }
    }
    out.sort_by(|a, b| a.label.cmp(&b.label));
    if let Some(w) = out.windows(2).find(|w| w[0].label == w[1].label) {
        return Err(CedError::DuplicateDescentLabel(w[0].label.clone()));
    }
    Ok(out)
}

fn without_bounds(p: &RankedPoset, chain: &[ElemId]) -> Chain {
    chain.iter().copied().filter(|&x| Some(x) != p.bottom() && Some(x) != p.top()).collect()
}

/// Elements of `(P_q)_S` lying on some `c_S` with `c` a maximal chain that
/// agrees with `d_i` on every rank outside `S`.
fn l_elements(p: &RankedPoset, s: &RankSet, d_i: &[ElemId]) -> BTreeSet<ElemId> {
    let comp = s.complement();
    let fixed = p.restrict_chain(d_i, &comp);
    let mut out = BTreeSet::new();
    for c in p.maximal_chains() {
        if p.restrict_chain(&c, &comp) == fixed {
            out.extend(p.restrict_chain(&c, s));
        }
    }
    out
}

/// `L_i`, as a subposet of the rank selection `(P_q)_S`.
pub fn build_l(p: &RankedPoset, s: &RankSet, d_i: &[ElemId]) -> Result<RankedPoset, CedError> {
    let selected = p.rank_select(s)?;
    let mut ids = l_elements(p, s, d_i);
    ids.extend(p.bottom().into_iter().chain(p.top()));
    Ok(selected.induced_subposet(&ids)?)
}

/// How to decide which maximal chains of `L_i` are facets of `Γ_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GammaMethod {
    /// `Υ(e)` agrees with `d_i` outside `S`.
    Upsilon,
    /// `e` is a maximal chain of `L_i` lying in no earlier `L_j`.
    Definition,
}

/// Per-piece data shared by all `Γ_i` computations.
struct PieceContext<'a> {
    piece: &'a BooleanPiece,
    s: RankSet,
    descents: Vec<DescentChain>,
    l_sets: Vec<BTreeSet<ElemId>>,
}

impl<'a> PieceContext<'a> {
    fn new(piece: &'a BooleanPiece, s: &RankSet) -> Result<Self, CedError> {
        let descents = descent_chains(&piece.poset, &piece.labeling, s)?;
        let l_sets = descents.iter().map(|dc| l_elements(&piece.poset, s, &dc.chain)).collect();
        Ok(PieceContext { piece, s: *s, descents, l_sets })
    }

    /// Maximal chains of `L_i` without `0̂`/`1̂`.
    fn l_chains(&self, i: usize) -> Result<Vec<Chain>, CedError> {
        let p = &self.piece.poset;
        let l = build_l(p, &self.s, &self.descents[i].chain)?;
        Ok(l.maximal_chains().into_iter().map(|c| without_bounds(p, &c)).collect())
    }

    fn gamma(&self, i: usize, method: GammaMethod) -> Result<BTreeSet<Chain>, CedError> {
        let p = &self.piece.poset;
        let comp = self.s.complement();
        let target = p.restrict_chain(&self.descents[i].chain, &comp);
        let mut out = BTreeSet::new();
        for e in self.l_chains(i)? {
            let keep = match method {
                GammaMethod::Upsilon => {
                    let full = upsilon(p, &self.piece.labeling, &e)?;
                    p.restrict_chain(&full, &comp) == target
                }
                GammaMethod::Definition => !self.l_sets[..i].iter().any(|l| e.iter().all(|x| l.contains(x))),
            };
            if keep {
                out.insert(e);
            }
        }
        Ok(out)
    }
}

/// Facets of `Γ_i` (0-based `i`) as chains without `0̂`/`1̂`.
pub fn gamma_facets(
    p: &RankedPoset,
    lambda: &EdgeLabeling,
    s: &RankSet,
    i: usize,
    method: GammaMethod,
) -> Result<BTreeSet<Chain>, CedError> {
    let piece = BooleanPiece { poset: p.clone(), labeling: lambda.clone() };
    let ctx = PieceContext::new(&piece, s)?;
    if i >= ctx.descents.len() {
        return Ok(BTreeSet::new());
    }
    ctx.gamma(i, method)
}

/// One ear with its provenance. Indices are 0-based.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Ear {
    pub piece: usize,
    pub descent_index: usize,
    pub descent_chain: Chain,
    pub descent_label: Vec<i64>,
    /// Facets in shelling order: decreasing lexicographic order of
    /// `λ(Υ(e))`.
    pub facets: Vec<Face>,
    /// `λ(Υ(e))` for each facet, aligned with `facets`.
    pub facet_labels: Vec<Vec<i64>>,
    #[serde(skip)]
    pub complex: SimplicialComplex,
}

/// Ears contributed by one piece, and the `Σ_i` that came out empty.
#[derive(Debug, Clone, Serialize)]
pub struct PieceEars {
    pub piece: usize,
    pub descent_chains: usize,
    pub ears: usize,
    pub dropped: Vec<usize>,
}

/// The ear list for one rank set, in decomposition order.
#[derive(Debug, Clone, Serialize)]
pub struct EarSequence {
    pub d: usize,
    pub s: RankSet,
    pub ears: Vec<Ear>,
    pub pieces: Vec<PieceEars>,
    /// `Δ((P_q)_S)` for every piece.
    #[serde(skip)]
    pub piece_spheres: Vec<SimplicialComplex>,
    /// Every vertex colored by its rank within `P_S`.
    #[serde(skip)]
    pub coloring: Coloring,
}

impl EarSequence {
    /// Rank of `P_S`.
    pub fn selected_d(&self) -> usize {
        self.s.len() + 1
    }

    pub fn union(&self) -> SimplicialComplex {
        self.union_of_first(self.ears.len())
    }

    pub fn union_of_first(&self, k: usize) -> SimplicialComplex {
        SimplicialComplex::from_facets(self.ears[..k].iter().flat_map(|e| e.facets.iter().cloned()))
    }
}

/// Iterates the Boolean ear construction over the pieces: `Σ_i` keeps the
/// facets of `Γ_i` that are not chains of an earlier piece, and empty `Σ_i`
/// are dropped.
pub fn build_ears(seq: &BooleanPieceSequence, s: &RankSet) -> Result<EarSequence, CedError> {
    let ambient = seq.ambient();
    if s.d() != ambient.d() {
        return Err(crate::poset::PosetError::RankMismatch { expected: ambient.d(), got: s.d() }.into());
    }
    if s.is_empty() {
        return Err(crate::poset::PosetError::EmptyRankSet.into());
    }
    let levels: BTreeMap<usize, u32> = s.members().into_iter().enumerate().map(|(i, r)| (r, i as u32 + 1)).collect();
    let coloring = Coloring(
        ambient.ids().iter().filter_map(|&x| levels.get(&ambient.rank(x)).map(|&c| (Vertex::from(x), c))).collect(),
    );
    let mut ears = Vec::new();
    let mut pieces = Vec::new();
    let mut piece_spheres = Vec::new();
    for (q, piece) in seq.pieces().iter().enumerate() {
        let p = &piece.poset;
        piece_spheres.push(p.rank_select(s)?.order_complex());
        let ctx = PieceContext::new(piece, s)?;
        let earlier = &seq.pieces()[..q];
        let mut summary = PieceEars { piece: q, descent_chains: ctx.descents.len(), ears: 0, dropped: Vec::new() };
        for (i, dc) in ctx.descents.iter().enumerate() {
            let mut sigma: Vec<(Vec<i64>, Chain)> = Vec::new();
            for e in ctx.gamma(i, GammaMethod::Upsilon)? {
                if earlier.iter().any(|pj| pj.poset.is_chain(&e)) {
                    continue;
                }
                let label = piece.labeling.word(&upsilon(p, &piece.labeling, &e)?)?;
                sigma.push((label, e));
            }
            if sigma.is_empty() {
                log::debug!("piece {q}, descent chain {i}: empty ear dropped");
                summary.dropped.push(i);
                continue;
            }
            sigma.sort_by(|a, b| b.0.cmp(&a.0));
            let facets: Vec<Face> = sigma.iter().map(|(_, e)| chain_face(e.iter().copied())).collect();
            ears.push(Ear {
                piece: q,
                descent_index: i,
                descent_chain: dc.chain.clone(),
                descent_label: dc.label.clone(),
                complex: SimplicialComplex::from_facets(facets.iter().cloned()),
                facets,
                facet_labels: sigma.into_iter().map(|(l, _)| l).collect(),
            });
            summary.ears += 1;
        }
        pieces.push(summary);
    }
    Ok(EarSequence { d: ambient.d(), s: *s, ears, pieces, piece_spheres, coloring })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::boolean_lattice;

    fn rs(d: usize, m: &[usize]) -> RankSet {
        RankSet::new(d, m.iter().copied()).unwrap()
    }

    #[test]
    fn descent_chain_counts() {
        let b3 = boolean_lattice(3);
        let top = descent_chains(&b3.poset, &b3.labeling, &rs(3, &[1, 2])).unwrap();
        assert_eq!(top.len(), 1);
        assert_eq!(top[0].label, vec![3, 2, 1]);
        assert_eq!(descent_chains(&b3.poset, &b3.labeling, &rs(3, &[])).unwrap().len(), 1);
        let b4 = boolean_lattice(4);
        assert_eq!(descent_chains(&b4.poset, &b4.labeling, &rs(4, &[1, 3])).unwrap().len(), 5);
    }

    #[test]
    fn l_for_b3() {
        let b = boolean_lattice(3);
        let s = rs(3, &[1]);
        let ds = descent_chains(&b.poset, &b.labeling, &s).unwrap();
        assert_eq!(ds[0].label, vec![2, 1, 3]);
        let l1 = build_l(&b.poset, &s, &ds[0].chain).unwrap();
        let atoms: Vec<ElemId> = l1.elements_of_rank(1).collect();
        assert_eq!(atoms, vec![b.id(&[1]), b.id(&[2])]);
        let full = build_l(
            &b.poset,
            &rs(3, &[1, 2]),
            &descent_chains(&b.poset, &b.labeling, &rs(3, &[1, 2])).unwrap()[0].chain,
        )
        .unwrap();
        assert_eq!(full.order_complex().facet_count(), 6);
    }

    #[test]
    fn gamma_for_b3() {
        let b = boolean_lattice(3);
        let s = rs(3, &[1]);
        for method in [GammaMethod::Upsilon, GammaMethod::Definition] {
            let g1 = gamma_facets(&b.poset, &b.labeling, &s, 0, method).unwrap();
            assert_eq!(g1, BTreeSet::from([vec![b.id(&[1])], vec![b.id(&[2])]]));
            let g2 = gamma_facets(&b.poset, &b.labeling, &s, 1, method).unwrap();
            assert_eq!(g2, BTreeSet::from([vec![b.id(&[3])]]));
        }
        let hex = gamma_facets(&b.poset, &b.labeling, &rs(3, &[1, 2]), 0, GammaMethod::Upsilon).unwrap();
        assert_eq!(hex.len(), 6);
    }

    #[test]
    fn b3_ears() {
        let b = boolean_lattice(3);
        let seq =
            BooleanPieceSequence::new(b.poset.clone(), vec![(b.poset.clone(), b.labeling.clone()).into()]).unwrap();
        let ears = build_ears(&seq, &rs(3, &[1])).unwrap();
        let sizes: Vec<usize> = ears.ears.iter().map(|e| e.facets.len()).collect();
        assert_eq!(sizes, vec![2, 1]);
        // first ear holds the increasing chain restricted to S
        let inc = upsilon(&b.poset, &b.labeling, &[]).unwrap();
        let inc_s = chain_face(b.poset.restrict_chain(&inc, &rs(3, &[1])));
        assert!(ears.ears[0].facets.contains(&inc_s));
        assert_eq!(ears.coloring.color(b.id(&[2]).into()), Some(1));
        assert_eq!(ears.union(), b.poset.rank_select(&rs(3, &[1])).unwrap().order_complex());
    }
}
