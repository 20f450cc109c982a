//! Convex-ear decompositions of rank-selected posets that are unions of
//! Boolean lattices, and the checks run against them.

mod ears;
mod flags;
mod verify;

pub use ears::{
    build_ears, build_l, descent_chains, gamma_facets, DescentChain, Ear, EarSequence, GammaMethod, PieceEars,
};
pub use flags::{
    check_ascent_switches, check_flag_recurrence, check_interior_identity, interior_flag_f, FlagRecurrenceReport,
    MultilinearPoly, SwitchReport,
};
pub use verify::{verify_ced, CedFailure, CedReport, Property};

pub(crate) use flags::cached_dominating_pairs;

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::complex::ComplexError;
use crate::poset::{
    is_sd_el, sd_el_violation, upsilon, Chain, EdgeLabeling, ElViolation, ElemId, PosetError, RankedPoset,
};
use crate::topology::TopologyError;

/// The three conditions a piece sequence must meet before ears are built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Hypothesis {
    /// Each piece is a Boolean lattice with an `S_d`-EL-labeling.
    Boolean,
    /// Every maximal chain of the ambient poset lies in some piece.
    ChainCover,
    /// A chain of a piece that lies in an earlier piece has its increasing
    /// completion in an earlier piece as well.
    Completion,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CedError {
    #[error("{hypothesis:?} condition fails at piece {piece}: witness {witness:?}")]
    HypothesisViolation { hypothesis: Hypothesis, piece: usize, witness: Chain },
    #[error("ear is not a certified ball")]
    NotABall,
    #[error("this check needs the full rank set")]
    NeedsFullRankSet,
    #[error("two descent chains share the label {0:?}")]
    DuplicateDescentLabel(Vec<i64>),
    #[error("no pieces given")]
    NoPieces,
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Topology(#[from] TopologyError),
}

/// A subposet isomorphic to `B_d` with an `S_d`-EL-labeling.
#[derive(Debug, Clone)]
pub struct BooleanPiece {
    pub poset: RankedPoset,
    pub labeling: EdgeLabeling,
}

impl From<(RankedPoset, EdgeLabeling)> for BooleanPiece {
    fn from((poset, labeling): (RankedPoset, EdgeLabeling)) -> Self {
        BooleanPiece { poset, labeling }
    }
}

/// An ambient bounded poset covered by Boolean pieces, with all three
/// conditions of [`Hypothesis`] checked at construction.
#[derive(Debug, Clone)]
pub struct BooleanPieceSequence {
    ambient: RankedPoset,
    pieces: Vec<BooleanPiece>,
}

fn violation(hypothesis: Hypothesis, piece: usize, witness: Chain) -> CedError {
    CedError::HypothesisViolation { hypothesis, piece, witness }
}

/// `piece` is a subposet of `ambient` sharing `0̂`/`1̂`, isomorphic to `B_d`
/// through `x ↦ {atoms below x}`, and its labeling is `S_d`-EL.
fn check_boolean(ambient: &RankedPoset, piece: &BooleanPiece, q: usize) -> Result<(), CedError> {
    let p = &piece.poset;
    let d = ambient.d();
    if p.d() != d || p.bottom() != ambient.bottom() || p.top() != ambient.top() || p.bottom().is_none() {
        return Err(violation(Hypothesis::Boolean, q, p.bottom().into_iter().chain(p.top()).collect()));
    }
    for &x in p.ids() {
        if !ambient.contains(x) || ambient.rank(x) != p.rank(x) {
            return Err(violation(Hypothesis::Boolean, q, vec![x]));
        }
    }
    for (x, y) in p.covers() {
        if !ambient.up_covers(x).any(|z| z == y) {
            return Err(violation(Hypothesis::Boolean, q, vec![x, y]));
        }
    }
    let atoms: Vec<ElemId> = p.elements_of_rank(1).collect();
    if atoms.len() != d || p.len() != 1 << d {
        return Err(violation(Hypothesis::Boolean, q, atoms));
    }
    let mut seen = BTreeSet::new();
    for &x in p.ids() {
        let mask: u64 = atoms.iter().enumerate().filter(|(_, &a)| p.leq(a, x)).map(|(i, _)| 1u64 << i).sum();
        if mask.count_ones() as usize != p.rank(x) || !seen.insert(mask) || p.up_covers(x).count() != d - p.rank(x) {
            return Err(violation(Hypothesis::Boolean, q, vec![x]));
        }
    }
    if let Some(v) = sd_el_violation(p, &piece.labeling) {
        let witness = match v {
            ElViolation::MissingLabel { x, y }
            | ElViolation::IncreasingChains { x, y, .. }
            | ElViolation::NotLexFirst { x, y, .. } => vec![x, y],
            ElViolation::NotAPermutation { chain, .. } => chain,
            ElViolation::NotBounded => Vec::new(),
        };
        return Err(violation(Hypothesis::Boolean, q, witness));
    }
    debug_assert!(is_sd_el(p, &piece.labeling));
    Ok(())
}

/// Every chain of the proper part of `p`, including the empty chain.
pub(crate) fn proper_chains(p: &RankedPoset) -> Vec<Chain> {
    let proper: Vec<ElemId> =
        p.ids().iter().copied().filter(|&x| Some(x) != p.bottom() && Some(x) != p.top()).collect();
    let mut out = Vec::new();
    let mut stack = Vec::new();
    fn rec(p: &RankedPoset, proper: &[ElemId], start: usize, stack: &mut Chain, out: &mut Vec<Chain>) {
        out.push(stack.clone());
        for i in start..proper.len() {
            let x = proper[i];
            if stack.last().is_none_or(|&last| p.rank(last) < p.rank(x) && p.leq(last, x)) {
                stack.push(x);
                rec(p, proper, i + 1, stack, out);
                stack.pop();
            }
        }
    }
    rec(p, &proper, 0, &mut stack, &mut out);
    out
}

impl BooleanPieceSequence {
    pub fn new(ambient: RankedPoset, pieces: Vec<BooleanPiece>) -> Result<Self, CedError> {
        if pieces.is_empty() {
            return Err(CedError::NoPieces);
        }
        if !ambient.is_bounded() {
            return Err(PosetError::NotBounded.into());
        }
        for (q, piece) in pieces.iter().enumerate() {
            check_boolean(&ambient, piece, q)?;
        }
        for c in ambient.maximal_chains() {
            if !pieces.iter().any(|piece| piece.poset.is_chain(&c)) {
                return Err(violation(Hypothesis::ChainCover, 0, c));
            }
        }
        for (i, piece) in pieces.iter().enumerate().skip(1) {
            let earlier = &pieces[..i];
            for e in proper_chains(&piece.poset) {
                if earlier.iter().any(|pj| pj.poset.is_chain(&e)) {
                    let completed = upsilon(&piece.poset, &piece.labeling, &e)?;
                    if !earlier.iter().any(|pk| pk.poset.is_chain(&completed)) {
                        return Err(violation(Hypothesis::Completion, i, e));
                    }
                }
            }
        }
        Ok(BooleanPieceSequence { ambient, pieces })
    }

    pub fn ambient(&self) -> &RankedPoset {
        &self.ambient
    }

    pub fn pieces(&self) -> &[BooleanPiece] {
        &self.pieces
    }

    pub fn d(&self) -> usize {
        self.ambient.d()
    }
}
