//! Convex-ear decompositions of rank-selected posets built from Boolean
//! pieces, for Boolean lattices, geometric lattices and face posets of
//! shellable complexes, together with independent checks of every
//! certificate and inequality the construction promises.

pub mod ced;
pub mod cli;
pub mod combinat;
pub mod complex;
pub mod corpus;
pub mod faceposet;
pub mod geomlat;
pub mod pipeline;
pub mod poset;
pub mod report;
pub mod topology;

use thiserror::Error;

/// Any failure surfaced by the pipelines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Combinat(#[from] combinat::CombinatError),
    #[error(transparent)]
    Complex(#[from] complex::ComplexError),
    #[error(transparent)]
    Poset(#[from] poset::PosetError),
    #[error(transparent)]
    Topology(#[from] topology::TopologyError),
    #[error(transparent)]
    Geomlat(#[from] geomlat::GeomlatError),
    #[error(transparent)]
    FacePoset(#[from] faceposet::FacePosetError),
    #[error(transparent)]
    Ced(#[from] ced::CedError),
    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    /// A precondition of the ear construction failed on validated input, as
    /// opposed to the input itself being malformed.
    pub fn is_certificate_failure(&self) -> bool {
        matches!(self, Error::Ced(ced::CedError::HypothesisViolation { .. }))
    }
}
