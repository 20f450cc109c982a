use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

use super::{BooleanPiece, CedError, Ear, EarSequence};
use crate::combinat::{dominating_pairs, RankSet};
use crate::complex::{Coloring, Face, SimplicialComplex};
use crate::poset::{complex_flag_f, face_chain, word_descents, FlagVector};
use crate::topology::{certify_ball_or_sphere, BallOrSphere};

/// Integer polynomial, multilinear in `ν_1, …, ν_{d-1}`; the monomial
/// `∏_{i∈W} ν_i` is keyed by `W`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MultilinearPoly {
    pub d: usize,
    pub coeffs: BTreeMap<RankSet, i64>,
}

impl MultilinearPoly {
    pub fn zero(d: usize) -> Self {
        MultilinearPoly { d, coeffs: BTreeMap::new() }
    }

    pub fn add_term(&mut self, w: RankSet, c: i64) {
        let entry = self.coeffs.entry(w).or_insert(0);
        *entry += c;
        if *entry == 0 {
            self.coeffs.remove(&w);
        }
    }

    pub fn coefficient(&self, w: &RankSet) -> i64 {
        self.coeffs.get(w).copied().unwrap_or(0)
    }

    /// `Σ_S a_S ∏_{i∉S} (ν_i - 1)`.
    pub fn from_shifted(a: &FlagVector) -> Self {
        let mut p = Self::zero(a.d());
        for (s, v) in a.entries() {
            if v == 0 {
                continue;
            }
            let outside = s.complement();
            for w in outside.subsets() {
                let sign = if outside.difference(&w).len() % 2 == 0 { 1 } else { -1 };
                p.add_term(w, sign * v);
            }
        }
        p
    }

    /// `Σ_S b_{[d-1]-S} ∏_{i∉S} ν_i`.
    pub fn from_complemented(b: &FlagVector) -> Self {
        let mut p = Self::zero(b.d());
        for (s, _) in b.entries() {
            let outside = s.complement();
            p.add_term(outside, b.get(&outside));
        }
        p
    }
}

fn certified_ball(ear: &SimplicialComplex, order: &[Face]) -> Result<(), CedError> {
    match certify_ball_or_sphere(ear, order) {
        BallOrSphere::Ball => Ok(()),
        _ => Err(CedError::NotABall),
    }
}

/// Flag f-vector of the faces of a ball off its boundary, `∅` excluded.
pub fn interior_flag_f(
    ear: &SimplicialComplex,
    order: &[Face],
    coloring: &Coloring,
    d: usize,
) -> Result<FlagVector, CedError> {
    certified_ball(ear, order)?;
    let boundary = ear.boundary()?.faces();
    let interior: Vec<Face> = ear.faces().into_iter().filter(|f| !f.is_empty() && !boundary.contains(f)).collect();
    let mut f = FlagVector::zeros(d);
    for face in interior {
        let colors = face.iter().map(|&v| {
            coloring.color(v).map(|c| c as usize).ok_or_else(|| {
                CedError::Complex(crate::complex::ComplexError::ImproperColoring(format!("vertex {v} uncolored")))
            })
        });
        let colors: Vec<usize> = colors.collect::<Result<_, _>>()?;
        let s = RankSet::new(d, colors)
            .map_err(|e| CedError::Complex(crate::complex::ComplexError::ImproperColoring(e.to_string())))?;
        f.add(&s, 1);
    }
    Ok(f)
}

/// Compares `Σ f'_S ∏_{i∉S}(ν_i - 1)` with `Σ h_{[d-1]-S} ∏_{i∉S} ν_i`
/// coefficient by coefficient, where `f'` counts interior faces and `h` is
/// the flag h-vector of the whole ball.
pub fn check_interior_identity(
    ear: &SimplicialComplex,
    order: &[Face],
    coloring: &Coloring,
    d: usize,
) -> Result<bool, CedError> {
    let interior = interior_flag_f(ear, order, coloring, d)?;
    let h = complex_flag_f(ear, coloring, d)?.to_h();
    Ok(MultilinearPoly::from_shifted(&interior) == MultilinearPoly::from_complemented(&h))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlagRecurrenceReport {
    pub steps: usize,
    pub holds: bool,
    /// Whether ear flag h-vectors were also matched against label descent
    /// counts (only meaningful for the full rank set).
    pub descent_route_checked: bool,
    pub descent_route_holds: bool,
    /// `(ear, W, expected, found)` for the first mismatch.
    pub failure: Option<(usize, RankSet, i64, i64)>,
}

/// Label descent counts over the facets of one ear.
fn descent_counts(ear: &Ear, d: usize) -> FlagVector {
    let mut h = FlagVector::zeros(d);
    for label in &ear.facet_labels {
        h.add(&word_descents(label), 1);
    }
    h
}

/// `h_W(Ω ∪ Σ_k) = h_W(Ω) + h_{[d-1]-W}(Σ_k)` for every ear `k ≥ 2` and every
/// `W`. With the full rank set, `h_{[d-1]-W}(Σ_k)` is also checked against
/// the number of facets whose label has descent set `W`.
pub fn check_flag_recurrence(seq: &EarSequence) -> Result<FlagRecurrenceReport, CedError> {
    let d = seq.selected_d();
    let full = seq.s == RankSet::full(seq.d);
    let mut report = FlagRecurrenceReport {
        steps: 0,
        holds: true,
        descent_route_checked: full,
        descent_route_holds: full,
        failure: None,
    };
    let mut omega = SimplicialComplex::empty();
    let mut h_omega = FlagVector::zeros(d);
    for (k, ear) in seq.ears.iter().enumerate() {
        let h_ear = complex_flag_f(&ear.complex, &seq.coloring, d)?.to_h();
        if full {
            let counts = descent_counts(ear, d);
            for (w, c) in counts.entries() {
                if h_ear.get(&w.complement()) != c {
                    report.descent_route_holds = false;
                    report.failure.get_or_insert((k, w, c, h_ear.get(&w.complement())));
                }
            }
        }
        omega = omega.union(&ear.complex);
        let h_union = complex_flag_f(&omega, &seq.coloring, d)?.to_h();
        if k > 0 {
            report.steps += 1;
            for (w, found) in h_union.entries() {
                let expected = h_omega.get(&w) + h_ear.get(&w.complement());
                if expected != found {
                    report.holds = false;
                    report.failure.get_or_insert((k, w, expected, found));
                }
            }
        }
        h_omega = h_union;
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SwitchReport {
    /// Every ascent switch of a facet's chain is again a facet.
    pub closure_holds: bool,
    /// A facet and the ascent position whose switch leaves the ear.
    pub closure_witness: Option<(Face, usize)>,
    /// Facet counts by label descent set.
    pub counts: FlagVector,
    /// Counts respect every dominating pair.
    pub dominance_holds: bool,
    pub dominance_witness: Option<(RankSet, RankSet)>,
}

/// Dominating pairs for `d`, computed once per `d`.
pub(crate) fn cached_dominating_pairs(d: usize) -> Arc<Vec<(RankSet, RankSet)>> {
    type Pairs = Arc<Vec<(RankSet, RankSet)>>;
    static CACHE: OnceLock<Mutex<HashMap<usize, Pairs>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().expect("cache lock").get(&d) {
        return v.clone();
    }
    let pairs = Arc::new(dominating_pairs(d));
    cache.lock().expect("cache lock").insert(d, pairs.clone());
    pairs
}

/// For an ear built with the full rank set: swapping the element at an
/// ascent of a facet's label gives another facet, and descent-class counts
/// respect dominance.
pub fn check_ascent_switches(ear: &Ear, piece: &BooleanPiece, d: usize) -> Result<SwitchReport, CedError> {
    let p = &piece.poset;
    let (bot, top) = (p.bottom().expect("bounded piece"), p.top().expect("bounded piece"));
    if ear.facets.first().is_some_and(|f| f.len() + 1 != d) {
        return Err(CedError::NeedsFullRankSet);
    }
    let mut closure_witness = None;
    for (facet, label) in ear.facets.iter().zip(&ear.facet_labels) {
        let mut chain = vec![bot];
        chain.extend(face_chain(facet));
        chain.push(top);
        for j in 1..d {
            if label[j - 1] >= label[j] {
                continue;
            }
            let (below, here, above) = (chain[j - 1], chain[j], chain[j + 1]);
            let other = p.up_covers(below).find(|&y| y != here && p.leq(y, above));
            let Some(other) = other else {
                closure_witness.get_or_insert((facet.clone(), j));
                continue;
            };
            let mut switched: Face = facet.clone();
            switched[j - 1] = other.into();
            switched.sort_unstable();
            if !ear.complex.facets().contains(&switched) {
                closure_witness.get_or_insert((facet.clone(), j));
            }
        }
    }
    let mut counts = FlagVector::zeros(d);
    for label in &ear.facet_labels {
        counts.add(&word_descents(label), 1);
    }
    let dominance_witness = cached_dominating_pairs(d).iter().find(|(t, s)| counts.get(t) > counts.get(s)).copied();
    Ok(SwitchReport {
        closure_holds: closure_witness.is_none(),
        closure_witness,
        counts,
        dominance_holds: dominance_witness.is_none(),
        dominance_witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(d: usize, m: &[usize]) -> RankSet {
        RankSet::new(d, m.iter().copied()).unwrap()
    }

    #[test]
    fn shifted_expansion() {
        // d = 3: f'_{1} = 1 gives ν_2 - 1
        let mut f = FlagVector::zeros(3);
        f.set(&rs(3, &[1]), 1);
        let p = MultilinearPoly::from_shifted(&f);
        assert_eq!(p.coefficient(&rs(3, &[2])), 1);
        assert_eq!(p.coefficient(&rs(3, &[])), -1);
        assert_eq!(p.coeffs.len(), 2);
    }

    #[test]
    fn single_point_ear() {
        let ear = SimplicialComplex::simplex([7]);
        let coloring = Coloring([(7, 1)].into_iter().collect());
        let f = interior_flag_f(&ear, &[vec![7]], &coloring, 2).unwrap();
        assert_eq!(f.get(&rs(2, &[1])), 1);
        assert_eq!(f.get(&rs(2, &[])), 0);
        assert!(check_interior_identity(&ear, &[vec![7]], &coloring, 2).unwrap());
    }

    #[test]
    fn path_ear() {
        let ear = SimplicialComplex::from_facets([vec![1, 2], vec![2, 3]]);
        let coloring = Coloring([(1, 1), (2, 2), (3, 1)].into_iter().collect());
        let order = [vec![1, 2], vec![2, 3]];
        let f = interior_flag_f(&ear, &order, &coloring, 3).unwrap();
        assert_eq!(f.get(&rs(3, &[2])), 1);
        assert_eq!(f.get(&rs(3, &[1, 2])), 2);
        assert_eq!(f.get(&rs(3, &[1])), 0);
        assert!(check_interior_identity(&ear, &order, &coloring, 3).unwrap());
    }

    #[test]
    fn spheres_are_refused() {
        let hexagon = SimplicialComplex::from_facets((0..6).map(|i: i64| {
            let mut f = vec![i, (i + 1) % 6];
            f.sort();
            f
        }));
        let order: Vec<Face> = hexagon.facets().iter().cloned().collect();
        let coloring = Coloring((0..6).map(|i| (i, (i % 2 + 1) as u32)).collect());
        assert_eq!(check_interior_identity(&hexagon, &order, &coloring, 3), Err(CedError::NotABall));
    }
}
