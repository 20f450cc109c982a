use std::collections::BTreeSet;

use serde::Serialize;

use super::EarSequence;
use crate::complex::{verify_shelling, Face, SimplicialComplex};
use crate::topology::{certify_ball_or_sphere, BallOrSphere};

/// The four defining properties of a convex-ear decomposition, plus the
/// shelling order stored with each ear.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Property {
    /// The ears cover the complex.
    Union,
    /// The first ear is a sphere; later ears are proper parts of their
    /// piece's sphere.
    Sphere,
    /// Later ears are balls.
    Ball,
    /// Each ear meets the earlier ones exactly in its boundary.
    Attachment,
    /// Stored facet orders are shellings.
    Shelling,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CedFailure {
    pub property: Property,
    pub ear: Option<usize>,
    pub witness: Option<Face>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CedReport {
    pub ears: usize,
    pub union_ok: bool,
    pub first_ear_sphere: bool,
    pub later_ears_proper: bool,
    /// Polytopality of the piece spheres is not re-proven here.
    pub polytopality: &'static str,
    pub later_ears_balls: bool,
    pub attachments_ok: bool,
    pub shellings_ok: bool,
    pub certificates: Vec<BallOrSphere>,
    pub failures: Vec<CedFailure>,
}

impl CedReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn fail(property: Property, ear: Option<usize>, witness: Option<Face>, detail: impl Into<String>) -> CedFailure {
    CedFailure { property, ear, witness, detail: detail.into() }
}

/// Checks an ear sequence against `delta`. Every failure is recorded with a
/// witness face where one exists.
pub fn verify_ced(delta: &SimplicialComplex, seq: &EarSequence) -> CedReport {
    let mut failures = Vec::new();
    let dim = delta.dim();

    let union = seq.union();
    if let Some(f) = union.facets().symmetric_difference(delta.facets()).next() {
        failures.push(fail(Property::Union, None, Some(f.clone()), "facet sets differ"));
    }
    for (k, ear) in seq.ears.iter().enumerate() {
        if ear.complex.is_empty() || !ear.complex.is_pure() || ear.complex.dim() != dim {
            failures.push(fail(Property::Union, Some(k), None, "ear is empty, impure or of the wrong dimension"));
        }
    }
    if seq.ears.is_empty() {
        failures.push(fail(Property::Union, None, None, "no ears"));
    }

    let mut certificates = Vec::with_capacity(seq.ears.len());
    for (k, ear) in seq.ears.iter().enumerate() {
        if let Err(e) = verify_shelling(&ear.complex, &ear.facets) {
            failures.push(fail(Property::Shelling, Some(k), None, e.to_string()));
        }
        let cert = certify_ball_or_sphere(&ear.complex, &ear.facets);
        certificates.push(cert);
        if k == 0 {
            if cert != BallOrSphere::Sphere {
                failures.push(fail(Property::Sphere, Some(0), None, format!("first ear certified {cert:?}")));
            }
            continue;
        }
        let sphere = &seq.piece_spheres[ear.piece];
        if let Some(f) = ear.facets.iter().find(|f| !sphere.facets().contains(*f)) {
            failures.push(fail(Property::Sphere, Some(k), Some(f.clone()), "facet outside its piece's sphere"));
        } else if ear.facets.len() >= sphere.facet_count() {
            failures.push(fail(Property::Sphere, Some(k), None, "ear is all of its piece's sphere"));
        }
        if cert != BallOrSphere::Ball {
            failures.push(fail(Property::Ball, Some(k), None, format!("ear certified {cert:?}")));
        }
    }

    let mut seen: BTreeSet<Face> = seq.ears.first().map(|e| e.complex.faces()).unwrap_or_default();
    for (k, ear) in seq.ears.iter().enumerate().skip(1) {
        let faces = ear.complex.faces();
        let meet: BTreeSet<&Face> = faces.iter().filter(|f| seen.contains(*f)).collect();
        match ear.complex.boundary() {
            Ok(boundary) => {
                let bfaces = boundary.faces();
                let expected: BTreeSet<&Face> = bfaces.iter().collect();
                if let Some(f) = meet.symmetric_difference(&expected).next() {
                    failures.push(fail(
                        Property::Attachment,
                        Some(k),
                        Some((*f).clone()),
                        if meet.contains(f) { "shared face off the boundary" } else { "boundary face not shared" },
                    ));
                }
            }
            Err(e) => failures.push(fail(Property::Attachment, Some(k), None, e.to_string())),
        }
        seen.extend(faces);
    }

    let has = |p: Property, first: Option<bool>| {
        !failures.iter().any(|f| f.property == p && first.is_none_or(|is_first| (f.ear == Some(0)) == is_first))
    };
    CedReport {
        ears: seq.ears.len(),
        union_ok: has(Property::Union, None),
        first_ear_sphere: has(Property::Sphere, Some(true)),
        later_ears_proper: has(Property::Sphere, Some(false)),
        polytopality: "trusted",
        later_ears_balls: has(Property::Ball, None),
        attachments_ok: has(Property::Attachment, None),
        shellings_ok: has(Property::Shelling, None),
        certificates,
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::super::{build_ears, BooleanPieceSequence};
    use super::*;
    use crate::combinat::RankSet;
    use crate::poset::boolean_lattice;

    fn b3_ears(s: &[usize]) -> (SimplicialComplex, EarSequence) {
        let b = boolean_lattice(3);
        let s = RankSet::new(3, s.iter().copied()).unwrap();
        let seq = BooleanPieceSequence::new(b.poset.clone(), vec![(b.poset.clone(), b.labeling).into()]).unwrap();
        (b.poset.rank_select(&s).unwrap().order_complex(), build_ears(&seq, &s).unwrap())
    }

    #[test]
    fn b3_rank_one_passes() {
        let (delta, ears) = b3_ears(&[1]);
        let report = verify_ced(&delta, &ears);
        assert!(report.passed(), "{report:?}");
        assert_eq!(report.certificates, vec![BallOrSphere::Sphere, BallOrSphere::Ball]);
    }

    #[test]
    fn single_sphere_ear_passes() {
        let (delta, ears) = b3_ears(&[1, 2]);
        assert_eq!(ears.ears.len(), 1);
        assert!(verify_ced(&delta, &ears).passed());
    }

    #[test]
    fn reversed_ears_fail() {
        let (delta, mut ears) = b3_ears(&[1]);
        ears.ears.reverse();
        let report = verify_ced(&delta, &ears);
        assert!(!report.first_ear_sphere);
        assert!(!report.attachments_ok);
        assert!(report.union_ok);
    }

    #[test]
    fn split_hexagon_fails() {
        // cut the single hexagon ear into two paths
        let (delta, mut ears) = b3_ears(&[1, 2]);
        let mut second = ears.ears[0].clone();
        let facets = ears.ears[0].facets.clone();
        let (a, b) = facets.split_at(3);
        ears.ears[0].facets = a.to_vec();
        ears.ears[0].complex = SimplicialComplex::from_facets(a.to_vec());
        second.facets = b.to_vec();
        second.complex = SimplicialComplex::from_facets(b.to_vec());
        ears.ears.push(second);
        let report = verify_ced(&delta, &ears);
        assert!(!report.passed());
        assert!(report.union_ok);
        assert!(!report.first_ear_sphere);
    }

    #[test]
    fn missing_facet_breaks_union() {
        let (delta, mut ears) = b3_ears(&[1]);
        ears.ears.pop();
        let report = verify_ced(&delta, &ears);
        assert!(!report.union_ok);
        assert!(report.failures[0].witness.is_some());
    }
}
