//! Face posets of pure complexes with all facets identified to one `1̂`, and
//! the per-facet Boolean pieces used to decompose them.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use serde::Serialize;
use thiserror::Error;

use crate::combinat::RankSet;
use crate::complex::{is_subface, subfaces, ComplexError, Face, ShellingCertificate, SimplicialComplex, Vertex};
use crate::poset::{chain_face, Chain, EdgeLabeling, ElemId, Element, PosetError, RankedPoset};
use crate::topology::{reduced_homology, TopologyError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FacePosetError {
    #[error("complex has no faces")]
    Empty,
    #[error("{restriction:?} is not a face of {facet:?}")]
    BadRestriction { facet: Face, restriction: Face },
    #[error("{0:?} is not a facet")]
    NotAFacet(Face),
    #[error("rank {0} is the facet rank; selecting it is only available in exploration mode")]
    TopRankSelected(usize),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Poset(#[from] PosetError),
}

fn face_name(face: &[Vertex]) -> String {
    format!("{{{}}}", face.iter().join(","))
}

/// Faces of a pure `(d-1)`-complex ranked by size, with `∅` as `0̂` and every
/// facet collapsed into a single `1̂` of rank `d`.
#[derive(Debug, Clone)]
pub struct IdentifiedFacePoset {
    pub poset: RankedPoset,
    complex: SimplicialComplex,
    faces: Vec<Face>,
    ids: BTreeMap<Face, ElemId>,
    d: usize,
}

pub fn identified_face_poset(k: &SimplicialComplex) -> Result<IdentifiedFacePoset, FacePosetError> {
    if !k.is_pure() {
        return Err(ComplexError::NotPure.into());
    }
    let d = k.max_facet_size().filter(|&d| d > 0).ok_or(FacePosetError::Empty)?;
    let mut faces: Vec<Face> = k.faces().into_iter().filter(|f| f.len() < d).collect();
    faces.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    let ids: BTreeMap<Face, ElemId> = faces.iter().enumerate().map(|(i, f)| (f.clone(), i as ElemId)).collect();
    let top = faces.len() as ElemId;
    let mut elements: Vec<Element> =
        faces.iter().map(|f| Element { id: ids[f], rank: f.len(), name: face_name(f) }).collect();
    elements.push(Element { id: top, rank: d, name: "1̂".into() });
    let mut covers = Vec::new();
    for f in &faces {
        if f.len() + 1 == d {
            covers.push((ids[f], top));
        }
        for v in 0..f.len() {
            let mut g = f.clone();
            g.remove(v);
            covers.push((ids[&g], ids[f]));
        }
    }
    let poset = RankedPoset::new(elements, covers)?;
    Ok(IdentifiedFacePoset { poset, complex: k.clone(), faces, ids, d })
}

impl IdentifiedFacePoset {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn top(&self) -> ElemId {
        self.faces.len() as ElemId
    }

    /// The face behind `id`; `None` for `1̂`.
    pub fn face(&self, id: ElemId) -> Option<&Face> {
        self.faces.get(id as usize)
    }

    pub fn id_of(&self, face: &[Vertex]) -> Option<ElemId> {
        self.ids.get(face).copied()
    }

    /// Top non-`1̂` element of a chain, as a face.
    fn top_face<'a>(&'a self, chain: &[ElemId]) -> &'a [Vertex] {
        chain.iter().rev().find_map(|&x| self.face(x)).map_or(&[], Vec::as_slice)
    }

    fn chain_in_facet(&self, chain: &[ElemId], facet: &[Vertex]) -> bool {
        is_subface(self.top_face(chain), facet)
    }
}

/// The vertex order used to label a facet's piece: vertices outside `r`
/// first, then those of `r`, each block ascending.
pub fn restriction_last_order(facet: &[Vertex], r: &[Vertex]) -> Vec<Vertex> {
    let (late, early): (Vec<Vertex>, Vec<Vertex>) = facet.iter().partition(|v| r.contains(v));
    early.into_iter().chain(late).collect()
}

/// Face poset of `facet` with the facet itself replaced by `1̂`, labeled by
/// `λ(x, y) = φ(y - x)` where `φ` numbers [`restriction_last_order`] from 1.
pub fn facet_subposet(
    p: &IdentifiedFacePoset,
    facet: &[Vertex],
    r: &[Vertex],
) -> Result<(RankedPoset, EdgeLabeling), FacePosetError> {
    if !p.complex.facets().contains(facet) {
        return Err(FacePosetError::NotAFacet(facet.to_vec()));
    }
    if !is_subface(r, facet) {
        return Err(FacePosetError::BadRestriction { facet: facet.to_vec(), restriction: r.to_vec() });
    }
    let phi: BTreeMap<Vertex, i64> =
        restriction_last_order(facet, r).into_iter().enumerate().map(|(i, v)| (v, i as i64 + 1)).collect();
    let top = p.top();
    let mut ids = BTreeSet::from([top]);
    let mut lambda = EdgeLabeling::new();
    for x in subfaces(facet).filter(|x| x.len() < p.d) {
        let xid = p.ids[&x];
        ids.insert(xid);
        for &v in facet.iter().filter(|v| !x.contains(v)) {
            let mut y = x.clone();
            y.push(v);
            y.sort_unstable();
            let yid = if y.len() == p.d { top } else { p.ids[&y] };
            lambda.insert(xid, yid, phi[&v]);
        }
    }
    Ok((p.poset.induced_subposet(&ids)?, lambda))
}

/// One piece per facet, in shelling order.
pub fn facet_pieces(
    p: &IdentifiedFacePoset,
    cert: &ShellingCertificate,
) -> Result<Vec<(RankedPoset, EdgeLabeling)>, FacePosetError> {
    cert.order.iter().zip(&cert.restrictions).map(|(f, r)| facet_subposet(p, f, r)).collect()
}

/// A chain of piece `piece` (0-based) where novelty and containment of the
/// restriction face disagree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RestrictionFaceViolation {
    pub piece: usize,
    pub chain: Chain,
    pub new_at_piece: bool,
    pub contains_restriction: bool,
}

/// Non-maximal chains of the facet's piece, each including `0̂` and `1̂`.
fn nonmaximal_chains(p: &IdentifiedFacePoset, facet: &[Vertex]) -> Vec<Chain> {
    let proper: Vec<Face> = subfaces(facet).filter(|x| !x.is_empty() && x.len() < p.d).collect();
    let mut out = Vec::new();
    let mut stack: Vec<Face> = Vec::new();
    fn rec(p: &IdentifiedFacePoset, proper: &[Face], start: usize, stack: &mut Vec<Face>, out: &mut Vec<Chain>) {
        if stack.len() + 1 < p.d {
            let mut chain = vec![p.ids[&Face::new()]];
            chain.extend(stack.iter().map(|f| p.ids[f]));
            chain.push(p.top());
            out.push(chain);
        }
        for i in start..proper.len() {
            if stack.last().is_none_or(|last| last.len() < proper[i].len() && is_subface(last, &proper[i])) {
                stack.push(proper[i].clone());
                rec(p, proper, i + 1, stack, out);
                stack.pop();
            }
        }
    }
    let mut sorted = proper;
    sorted.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    rec(p, &sorted, 0, &mut stack, &mut out);
    out
}

/// Checks that a non-maximal chain of piece `i` lies in no earlier piece
/// exactly when its top non-`1̂` element contains `r(F_i)`.
pub fn restriction_face_violation(
    p: &IdentifiedFacePoset,
    cert: &ShellingCertificate,
) -> Option<RestrictionFaceViolation> {
    for (i, (facet, r)) in cert.order.iter().zip(&cert.restrictions).enumerate() {
        for chain in nonmaximal_chains(p, facet) {
            let new_at_piece = !cert.order[..i].iter().any(|g| p.chain_in_facet(&chain, g));
            let contains_restriction = is_subface(r, p.top_face(&chain));
            if new_at_piece != contains_restriction {
                return Some(RestrictionFaceViolation { piece: i, chain, new_at_piece, contains_restriction });
            }
        }
    }
    None
}

pub fn check_restriction_face(p: &IdentifiedFacePoset, cert: &ShellingCertificate) -> bool {
    restriction_face_violation(p, cert).is_none()
}

/// Order complex of the face poset (facets not identified) restricted to
/// face sizes in `s`, where `s ⊆ [d]`. Vertices are numbered by position in
/// the (size, lex) list of all nonempty faces.
pub fn explore_order_complex(k: &SimplicialComplex, s: &RankSet) -> Result<SimplicialComplex, FacePosetError> {
    if !k.is_pure() {
        return Err(ComplexError::NotPure.into());
    }
    let d = k.max_facet_size().filter(|&d| d > 0).ok_or(FacePosetError::Empty)?;
    if s.d() != d + 1 {
        return Err(PosetError::RankMismatch { expected: d + 1, got: s.d() }.into());
    }
    if s.is_empty() {
        return Err(PosetError::EmptyRankSet.into());
    }
    let mut faces: Vec<Face> = k.faces().into_iter().filter(|f| !f.is_empty()).collect();
    faces.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    let levels = s.members();
    let by_size = |size: usize| faces.iter().enumerate().filter(move |(_, f)| f.len() == size);
    let mut chains: Vec<Vec<usize>> = by_size(levels[0]).map(|(i, _)| vec![i]).collect();
    for &size in &levels[1..] {
        chains = chains
            .into_iter()
            .flat_map(|c| {
                let last = &faces[*c.last().expect("nonempty")];
                by_size(size).filter(|(_, g)| is_subface(last, g)).map(move |(i, _)| {
                    let mut next = c.clone();
                    next.push(i);
                    next
                })
            })
            .collect();
    }
    Ok(SimplicialComplex::from_facets(chains.into_iter().map(|c| chain_face(c.into_iter().map(|i| i as ElemId)))))
}

/// Whether a complex is a tree: one-dimensional, connected and acyclic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TreeReport {
    pub dim: Option<isize>,
    pub connected: bool,
    pub acyclic: bool,
    pub tree: bool,
}

pub fn tree_report(k: &SimplicialComplex) -> Result<TreeReport, TopologyError> {
    let h = reduced_homology(k)?;
    let connected = h.betti.first().is_none_or(|&b| b == 0) && !k.is_empty() && !k.is_void();
    let acyclic = h.is_acyclic();
    let dim = k.dim();
    Ok(TreeReport { dim, connected, acyclic, tree: dim == Some(1) && connected && acyclic })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::verify_shelling;
    use crate::poset::{boolean_lattice, flag_h, is_sd_el};

    fn two_triangles() -> SimplicialComplex {
        SimplicialComplex::from_facets([vec![1, 2, 3], vec![1, 2, 4]])
    }

    #[test]
    fn simplex_gives_boolean_lattice() {
        let p = identified_face_poset(&SimplicialComplex::simplex([1, 2, 3])).unwrap();
        assert_eq!(p.poset.len(), 8);
        assert_eq!(flag_h(&p.poset), flag_h(&boolean_lattice(3).poset));
    }

    #[test]
    fn two_triangles_census() {
        let p = identified_face_poset(&two_triangles()).unwrap();
        let census: Vec<usize> = (0..=3).map(|r| p.poset.elements_of_rank(r).count()).collect();
        assert_eq!(census, vec![1, 4, 5, 1]);
        assert_eq!(p.face(p.top()), None);
    }

    #[test]
    fn restriction_last_labels() {
        let k = two_triangles();
        let p = identified_face_poset(&k).unwrap();
        let cert = verify_shelling(&k, &[vec![1, 2, 3], vec![1, 2, 4]]).unwrap();
        assert_eq!(restriction_last_order(&[1, 2, 3], &[]), vec![1, 2, 3]);
        assert_eq!(restriction_last_order(&[1, 2, 4], &[4]), vec![1, 2, 4]);
        assert_eq!(restriction_last_order(&[1, 2, 4], &[1]), vec![2, 4, 1]);
        let pieces = facet_pieces(&p, &cert).unwrap();
        let (p2, l2) = &pieces[1];
        assert!(is_sd_el(p2, l2));
        // ∅ < {4} < {1,4} < 1̂ reads 3, 1, 2
        let chain = [p.id_of(&[]).unwrap(), p.id_of(&[4]).unwrap(), p.id_of(&[1, 4]).unwrap(), p.top()];
        assert_eq!(l2.word(&chain).unwrap(), vec![3, 1, 2]);
        assert!(matches!(facet_subposet(&p, &[1, 2, 4], &[3]), Err(FacePosetError::BadRestriction { .. })));
        assert!(matches!(facet_subposet(&p, &[1, 2], &[]), Err(FacePosetError::NotAFacet(_))));
    }

    #[test]
    fn restriction_face_holds_on_two_triangles() {
        let k = two_triangles();
        let p = identified_face_poset(&k).unwrap();
        let cert = verify_shelling(&k, &[vec![1, 2, 3], vec![1, 2, 4]]).unwrap();
        assert!(check_restriction_face(&p, &cert));
        let chains = nonmaximal_chains(&p, &[1, 2, 4]);
        // empty chain, 3 vertices, 3 edges
        assert_eq!(chains.len(), 7);
    }

    #[test]
    fn explore_matches_identified_below_top_rank() {
        let k = SimplicialComplex::from_facets([vec![1, 2, 3], vec![1, 3, 4], vec![1, 4, 5]]);
        let p = identified_face_poset(&k).unwrap();
        for s in [vec![1], vec![2], vec![1, 2]] {
            let identified = p.poset.rank_select(&RankSet::new(3, s.clone()).unwrap()).unwrap().order_complex();
            let explored = explore_order_complex(&k, &RankSet::new(4, s).unwrap()).unwrap();
            assert_eq!(identified.f_vector().unwrap(), explored.f_vector().unwrap());
        }
    }

    #[test]
    fn two_triangles_with_top_rank_is_a_tree() {
        let k = two_triangles();
        let delta = explore_order_complex(&k, &RankSet::new(4, [2, 3]).unwrap()).unwrap();
        assert_eq!(delta.vertices().len(), 7);
        assert_eq!(delta.facets().len(), 6);
        let report = tree_report(&delta).unwrap();
        assert!(report.tree, "{report:?}");
        let hexagon = boolean_lattice(3).poset.order_complex();
        assert!(!tree_report(&hexagon).unwrap().tree);
    }
}
