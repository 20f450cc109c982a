//! End-to-end runs: build an ambient poset and its Boolean pieces for one of
//! the three families, decompose `Δ(P_S)` and collect every check on the
//! result.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::ced::{
    build_ears, check_ascent_switches, check_flag_recurrence, check_interior_identity, verify_ced, BooleanPiece,
    BooleanPieceSequence, CedReport, EarSequence, FlagRecurrenceReport, SwitchReport,
};
use crate::combinat::RankSet;
use crate::complex::{verify_shelling, Face, ShellingCertificate, SimplicialComplex};
use crate::faceposet::{facet_pieces, identified_face_poset, restriction_face_violation, RestrictionFaceViolation};
use crate::geomlat::{label_agreement_violation, lattice_of_flats, LabelAgreementViolation, Matroid, MatroidJson};
use crate::poset::{
    boolean_lattice, chain_face, complex_flag_f, flag_h, flag_h_by_descents, verify_el_labeling, Chain, EdgeLabeling,
    FlagVector, RankedPoset,
};
use crate::report::{dominance_rows, report_inequalities, DominanceRow, InequalityTable, StoredArtifact};
use crate::topology::{is_two_cm, BallOrSphere};
use crate::Error;

/// Largest Boolean lattice accepted by the Boolean pipeline.
pub const MAX_BOOLEAN_D: usize = 8;

/// Unions with at most this many faces get the 2-CM test.
pub const TWO_CM_FACE_LIMIT: usize = 1000;

/// Flag dominance is checked up to this rank.
pub const MAX_DOMINANCE_D: usize = 6;

/// What an instance was built from, in a form that can rebuild it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "pipeline", rename_all = "lowercase")]
pub enum Source {
    Boolean { d: usize },
    Geometric { matroid: MatroidJson },
    Faceposet { complex: SimplicialComplex, shelling: Vec<Face> },
}

/// Checks run once per instance, before any rank set is chosen.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Prechecks {
    pub d: usize,
    pub pieces: usize,
    /// Every [`crate::ced::Hypothesis`] holds; an instance is only built
    /// when they do.
    pub hypotheses: bool,
    /// The ambient labeling (standard or minimal) is EL.
    pub ambient_el: Option<bool>,
    /// Flag h by inclusion-exclusion equals the descent count, for the
    /// ambient poset when labeled and for every piece.
    pub flag_h_matches_descents: bool,
    /// Every maximal chain's minimal label spells an nbc-basis.
    pub nu_words_in_nbc: Option<bool>,
    pub nu_witness: Option<Chain>,
    pub nbc_bases: Option<Vec<Vec<usize>>>,
    pub restrictions: Option<Vec<Face>>,
    /// A chain is new at its piece exactly when its top face contains the
    /// restriction face.
    pub restriction_face: Option<bool>,
    pub restriction_face_witness: Option<RestrictionFaceViolation>,
}

impl Prechecks {
    pub fn passed(&self) -> bool {
        self.hypotheses
            && self.ambient_el != Some(false)
            && self.flag_h_matches_descents
            && self.nu_words_in_nbc != Some(false)
            && self.restriction_face != Some(false)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Family {
    Boolean,
    Geometric,
    FacePoset,
}

/// A validated ambient poset with its Boolean pieces.
#[derive(Debug, Clone)]
pub struct Instance {
    pub source: Source,
    pub sequence: BooleanPieceSequence,
    pub prechecks: Prechecks,
    family: Family,
    nu: Option<EdgeLabeling>,
}

fn descents_agree(p: &RankedPoset, lambda: &EdgeLabeling) -> Result<bool, Error> {
    Ok(flag_h_by_descents(p, lambda)? == flag_h(p))
}

impl Instance {
    fn assemble(
        source: Source,
        family: Family,
        ambient: RankedPoset,
        ambient_labeling: Option<&EdgeLabeling>,
        pieces: Vec<(RankedPoset, EdgeLabeling)>,
        mut prechecks: Prechecks,
    ) -> Result<Self, Error> {
        let mut agree = true;
        if let Some(lambda) = ambient_labeling {
            let el = verify_el_labeling(&ambient, lambda);
            prechecks.ambient_el = Some(el);
            agree &= el && descents_agree(&ambient, lambda)?;
        }
        for (p, lambda) in &pieces {
            agree &= descents_agree(p, lambda)?;
        }
        prechecks.flag_h_matches_descents = agree;
        prechecks.pieces = pieces.len();
        let nu = (family == Family::Geometric).then(|| ambient_labeling.cloned()).flatten();
        let sequence = BooleanPieceSequence::new(ambient, pieces.into_iter().map(BooleanPiece::from).collect())?;
        prechecks.hypotheses = true;
        Ok(Instance { source, sequence, prechecks, family, nu })
    }

    fn blank_prechecks(d: usize) -> Prechecks {
        Prechecks {
            d,
            pieces: 0,
            hypotheses: false,
            ambient_el: None,
            flag_h_matches_descents: false,
            nu_words_in_nbc: None,
            nu_witness: None,
            nbc_bases: None,
            restrictions: None,
            restriction_face: None,
            restriction_face_witness: None,
        }
    }

    /// `B_d` as a single piece with its standard labeling.
    pub fn boolean(d: usize) -> Result<Self, Error> {
        if d == 0 || d > MAX_BOOLEAN_D {
            return Err(Error::Invalid(format!("d must lie in 1..={MAX_BOOLEAN_D}, got {d}")));
        }
        let b = boolean_lattice(d);
        let pieces = vec![(b.poset.clone(), b.labeling.clone())];
        Self::assemble(
            Source::Boolean { d },
            Family::Boolean,
            b.poset,
            Some(&b.labeling),
            pieces,
            Self::blank_prechecks(d),
        )
    }

    /// The lattice of flats of a simple matroid, one piece per nbc-basis.
    pub fn geometric(m: &Matroid) -> Result<Self, Error> {
        let lattice = lattice_of_flats(m)?;
        let nu = lattice.minimal_labeling();
        let mut prechecks = Self::blank_prechecks(m.rank());
        let witness = lattice.nu_word_outside_nbc(&nu);
        prechecks.nu_words_in_nbc = Some(witness.is_none());
        prechecks.nu_witness = witness;
        prechecks.nbc_bases = Some(m.nbc_bases());
        let pieces = lattice.nbc_pieces()?;
        let source = Source::Geometric { matroid: m.to_json() };
        Self::assemble(source, Family::Geometric, lattice.poset.clone(), Some(&nu), pieces, prechecks)
    }

    /// The face poset of `k` with facets identified, one piece per facet in
    /// the given shelling order.
    pub fn faceposet(k: &SimplicialComplex, shelling: &[Face]) -> Result<Self, Error> {
        let cert: ShellingCertificate = verify_shelling(k, shelling)?;
        let p = identified_face_poset(k)?;
        let mut prechecks = Self::blank_prechecks(p.d());
        let witness = restriction_face_violation(&p, &cert);
        prechecks.restriction_face = Some(witness.is_none());
        prechecks.restriction_face_witness = witness;
        prechecks.restrictions = Some(cert.restrictions.clone());
        let pieces = facet_pieces(&p, &cert)?;
        let source = Source::Faceposet { complex: k.clone(), shelling: shelling.to_vec() };
        Self::assemble(source, Family::FacePoset, p.poset, None, pieces, prechecks)
    }

    pub fn from_source(source: &Source) -> Result<Self, Error> {
        match source {
            Source::Boolean { d } => Self::boolean(*d),
            Source::Geometric { matroid } => Self::geometric(&Matroid::from_json(matroid)?),
            Source::Faceposet { complex, shelling } => Self::faceposet(complex, shelling),
        }
    }

    pub fn d(&self) -> usize {
        self.sequence.d()
    }

    /// Every nonempty `S ⊆ [d-1]`, in lexicographic order.
    pub fn nonempty_rank_sets(&self) -> Vec<RankSet> {
        let mut all: Vec<RankSet> = RankSet::all(self.d()).filter(|s| !s.is_empty()).collect();
        all.sort();
        all
    }

    /// `Δ(P_S)`.
    pub fn selected_complex(&self, s: &RankSet) -> Result<SimplicialComplex, Error> {
        Ok(self.sequence.ambient().rank_select(s)?.order_complex())
    }

    /// Builds the ears for `S` and runs every applicable check.
    pub fn decompose(&self, s: &RankSet) -> Result<DecompositionReport, Error> {
        let seq = build_ears(&self.sequence, s)?;
        let delta = self.selected_complex(s)?;
        let ced = verify_ced(&delta, &seq);
        self.report(s, seq, ced)
    }

    fn report(&self, s: &RankSet, seq: EarSequence, ced: CedReport) -> Result<DecompositionReport, Error> {
        let d = self.d();
        let full = *s == RankSet::full(d);
        let union = seq.union();
        let dsel = seq.selected_d();
        let h_vector = union.h_vector()?;
        let flag_f = complex_flag_f(&union, &seq.coloring, dsel)?;
        let flag_h = flag_f.to_h();
        let refinement_holds = flag_h.refinement_sums() == h_vector;

        let mut interior_identity = Vec::with_capacity(seq.ears.len());
        for (ear, cert) in seq.ears.iter().zip(&ced.certificates) {
            interior_identity.push(match cert {
                BallOrSphere::Ball => Some(check_interior_identity(&ear.complex, &ear.facets, &seq.coloring, dsel)?),
                _ => None,
            });
        }
        let recurrence = check_flag_recurrence(&seq)?;

        let switch = if full && self.family == Family::FacePoset {
            let pieces = self.sequence.pieces();
            Some(
                seq.ears
                    .iter()
                    .map(|e| check_ascent_switches(e, &pieces[e.piece], d))
                    .collect::<Result<Vec<_>, _>>()?,
            )
        } else {
            None
        };
        let label_agreement = match (&self.nu, full) {
            (Some(nu), true) => Some(self.label_agreement(nu, &seq)?),
            _ => None,
        };
        let two_cm = if union.face_count() <= TWO_CM_FACE_LIMIT { Some(is_two_cm(&union)?) } else { None };
        let flag_dominance =
            (full && d <= MAX_DOMINANCE_D).then(|| dominance_rows(&crate::ced::cached_dominating_pairs(d), &flag_h));

        Ok(DecompositionReport {
            s: *s,
            f_vector: union.f_vector()?,
            inequalities: report_inequalities(&h_vector),
            h_vector,
            flag_f,
            flag_h,
            refinement_holds,
            ced,
            interior_identity,
            recurrence,
            switch,
            label_agreement,
            two_cm,
            flag_dominance,
            decomposition: seq,
        })
    }

    fn label_agreement(&self, nu: &EdgeLabeling, seq: &EarSequence) -> Result<LabelAgreementReport, Error> {
        let pieces: Vec<(RankedPoset, EdgeLabeling)> =
            self.sequence.pieces().iter().map(|p| (p.poset.clone(), p.labeling.clone())).collect();
        let violation = label_agreement_violation(&pieces, nu);
        // the engine's ears for piece i should be exactly the chains whose
        // piece label equals their minimal label
        let mut engine_witness = None;
        for (i, (p, lambda)) in pieces.iter().enumerate() {
            let in_ears: BTreeSet<&Face> =
                seq.ears.iter().filter(|e| e.piece == i).flat_map(|e| e.facets.iter()).collect();
            for c in p.maximal_chains() {
                let face = chain_face(c[1..c.len() - 1].iter().copied());
                let agree = lambda.word(&c)? == nu.word(&c)?;
                if agree != in_ears.contains(&face) {
                    engine_witness.get_or_insert((i, c));
                }
            }
        }
        Ok(LabelAgreementReport { holds: violation.is_none() && engine_witness.is_none(), violation, engine_witness })
    }

    /// Rebuilds an ear sequence read from an artifact for rank set `s`,
    /// recomputing everything that is not stored.
    pub fn restore(&self, s: &RankSet, mut ears: Vec<crate::ced::Ear>) -> Result<EarSequence, Error> {
        let template = build_ears(&self.sequence, s)?;
        let pieces = self.sequence.pieces().len();
        for (k, ear) in ears.iter_mut().enumerate() {
            if ear.piece >= pieces {
                return Err(Error::Invalid(format!("ear {k} names piece {} of {pieces}", ear.piece)));
            }
            ear.complex = SimplicialComplex::from_facets(ear.facets.iter().cloned());
        }
        Ok(EarSequence { ears, ..template })
    }

    /// Runs [`verify_ced`] on stored ears.
    pub fn verify_stored(&self, s: &RankSet, ears: Vec<crate::ced::Ear>) -> Result<CedReport, Error> {
        let seq = self.restore(s, ears)?;
        Ok(verify_ced(&self.selected_complex(s)?, &seq))
    }
}

/// Rebuilds the source of a stored artifact and re-checks every run.
pub fn verify_artifact(stored: StoredArtifact) -> Result<Vec<(RankSet, CedReport)>, Error> {
    let instance = Instance::from_source(&stored.source)?;
    stored
        .runs
        .into_iter()
        .map(|run| {
            let seq = run.decomposition;
            if seq.d != instance.d() {
                return Err(Error::Invalid(format!("stored d={} but the source has d={}", seq.d, instance.d())));
            }
            let s = RankSet::new(seq.d, seq.s)?;
            let report = instance.verify_stored(&s, seq.ears)?;
            Ok((s, report))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LabelAgreementReport {
    pub holds: bool,
    pub violation: Option<LabelAgreementViolation>,
    /// A piece and maximal chain where the ears disagree with the label test.
    pub engine_witness: Option<(usize, Chain)>,
}

/// Everything computed for one rank set.
#[derive(Debug, Clone, Serialize)]
pub struct DecompositionReport {
    pub s: RankSet,
    pub f_vector: Vec<i64>,
    pub h_vector: Vec<i64>,
    pub flag_f: FlagVector,
    pub flag_h: FlagVector,
    /// `h_i = Σ_{|T|=i} h_T` for the union.
    pub refinement_holds: bool,
    pub inequalities: InequalityTable,
    pub ced: CedReport,
    /// One entry per ear; `None` where the ear is not a certified ball.
    pub interior_identity: Vec<Option<bool>>,
    pub recurrence: FlagRecurrenceReport,
    pub switch: Option<Vec<SwitchReport>>,
    pub label_agreement: Option<LabelAgreementReport>,
    /// `None` above [`TWO_CM_FACE_LIMIT`] faces.
    pub two_cm: Option<bool>,
    pub flag_dominance: Option<Vec<DominanceRow>>,
    pub decomposition: EarSequence,
}

impl DecompositionReport {
    pub fn ears(&self) -> usize {
        self.decomposition.ears.len()
    }

    pub fn passed(&self) -> bool {
        self.ced.passed()
            && self.refinement_holds
            && self.inequalities.holds()
            && self.interior_identity.iter().all(|f| *f != Some(false))
            && self.recurrence.holds
            && self.recurrence.descent_route_holds == self.recurrence.descent_route_checked
            && self.switch.iter().flatten().all(|r| r.closure_holds && r.dominance_holds)
            && self.label_agreement.as_ref().is_none_or(|l| l.holds)
            && self.two_cm != Some(false)
            && self.flag_dominance.iter().flatten().all(|r| r.holds)
    }

    /// Names of the checks that failed.
    pub fn failed_checks(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        let mut push = |bad: bool, name| {
            if bad {
                out.push(name);
            }
        };
        push(!self.ced.passed(), "ced");
        push(!self.refinement_holds, "refinement");
        push(!self.inequalities.holds(), "inequalities");
        push(self.interior_identity.contains(&Some(false)), "interior_identity");
        push(
            !self.recurrence.holds || self.recurrence.descent_route_holds != self.recurrence.descent_route_checked,
            "recurrence",
        );
        push(self.switch.iter().flatten().any(|r| !(r.closure_holds && r.dominance_holds)), "switch");
        push(self.label_agreement.as_ref().is_some_and(|l| !l.holds), "labels");
        push(self.two_cm == Some(false), "two_cm");
        push(self.flag_dominance.iter().flatten().any(|r| !r.holds), "flag_dominance");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn rs(d: usize, m: &[usize]) -> RankSet {
        RankSet::new(d, m.iter().copied()).unwrap()
    }

    #[test]
    fn boolean_b4_rank_one_three() {
        let inst = Instance::boolean(4).unwrap();
        let r = inst.decompose(&rs(4, &[1, 3])).unwrap();
        assert_eq!(r.ears(), 5);
        assert!(r.passed(), "{:?}", r.failed_checks());
        assert!(r.switch.is_none());
    }

    #[test]
    fn boolean_full_rank_set_has_dominance_rows() {
        let inst = Instance::boolean(4).unwrap();
        let r = inst.decompose(&RankSet::full(4)).unwrap();
        let rows = r.flag_dominance.as_ref().unwrap();
        assert!(rows.iter().any(|row| row.t == rs(4, &[1]) && row.s == rs(4, &[1, 3])));
        assert!(r.passed());
    }

    #[test]
    fn u23_ears() {
        let inst = Instance::geometric(&Matroid::uniform(2, 3)).unwrap();
        assert_eq!(inst.prechecks.nu_words_in_nbc, Some(true));
        let r = inst.decompose(&rs(2, &[1])).unwrap();
        assert_eq!(r.ears(), 2);
        assert_eq!(r.decomposition.ears[0].facets.len(), 2);
        assert_eq!(r.decomposition.ears[1].facets.len(), 1);
        assert!(r.label_agreement.as_ref().unwrap().holds);
        assert!(r.passed());
    }

    #[test]
    fn two_triangles_full() {
        let k = corpus::two_triangles();
        let inst = Instance::faceposet(&k, &[vec![1, 2, 3], vec![1, 2, 4]]).unwrap();
        assert!(inst.prechecks.passed());
        let r = inst.decompose(&RankSet::full(3)).unwrap();
        assert!(r.passed(), "{:?}", r.failed_checks());
        let facets: usize = r.decomposition.ears.iter().map(|e| e.facets.len()).sum();
        assert_eq!(facets as i64, r.flag_f.get(&RankSet::full(3)));
        assert!(r.switch.as_ref().unwrap().iter().all(|s| s.closure_holds));
    }

    #[test]
    fn bad_shelling_is_invalid_input() {
        let k = SimplicialComplex::from_facets([vec![1, 2, 3], vec![1, 4, 5]]);
        let err = Instance::faceposet(&k, &[vec![1, 2, 3], vec![1, 4, 5]]).unwrap_err();
        assert!(!err.is_certificate_failure());
    }

    #[test]
    fn stored_ears_round_trip() {
        let inst = Instance::boolean(3).unwrap();
        let s = rs(3, &[1]);
        let r = inst.decompose(&s).unwrap();
        let json = serde_json::to_value(&r.decomposition.ears).unwrap();
        let ears: Vec<crate::ced::Ear> = serde_json::from_value(json).unwrap();
        assert!(inst.verify_stored(&s, ears.clone()).unwrap().passed());
        let mut reversed = ears;
        reversed.reverse();
        assert!(!inst.verify_stored(&s, reversed).unwrap().passed());
    }
}
