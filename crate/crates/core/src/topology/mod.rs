//! Exact reduced homology via integral boundary matrices, and the
//! certificates derived from it: ball/sphere recognition for shellable
//! pseudomanifolds and the Cohen–Macaulay / 2-CM tests.

mod snf;

pub use snf::{dense_invariant_factors, invariant_factors, SparseMatrix};

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

use crate::complex::{verify_shelling, Face, SimplicialComplex};

/// Default cap on the number of faces the homology oracle will touch.
pub const DEFAULT_MAX_FACES: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TopologyError {
    #[error("complex has {faces} faces, over the limit of {limit}")]
    TooLarge { faces: usize, limit: usize },
    #[error("integer overflow during Smith normal form")]
    Overflow,
}

/// Face cap, read once from `EARCOMB_MAX_FACES`.
pub fn max_faces() -> usize {
    static LIMIT: OnceLock<usize> = OnceLock::new();
    *LIMIT.get_or_init(|| {
        std::env::var("EARCOMB_MAX_FACES").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_MAX_FACES)
    })
}

/// Reduced Betti numbers (rank over ℚ) and torsion coefficients of every
/// dimension `0..=dim`. `betti_minus_one` is 1 only for the void complex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologyProfile {
    pub betti: Vec<u64>,
    pub torsion: Vec<Vec<u128>>,
    pub betti_minus_one: u64,
}

impl HomologyProfile {
    /// All reduced homology vanishes.
    pub fn is_acyclic(&self) -> bool {
        self.betti_minus_one == 0 && self.betti.iter().all(|&b| b == 0) && self.torsion.iter().all(Vec::is_empty)
    }

    /// Homology of a `dim`-sphere: `ℤ` in the top dimension only.
    pub fn is_sphere_like(&self) -> bool {
        let Some((&top, rest)) = self.betti.split_last() else {
            return self.betti_minus_one == 1;
        };
        self.betti_minus_one == 0 && top == 1 && rest.iter().all(|&b| b == 0) && self.torsion.iter().all(Vec::is_empty)
    }

    pub fn euler_characteristic(&self) -> i64 {
        let mut chi = -(self.betti_minus_one as i64);
        for (i, &b) in self.betti.iter().enumerate() {
            chi += if i % 2 == 0 { b as i64 } else { -(b as i64) };
        }
        chi
    }
}

pub fn reduced_homology(k: &SimplicialComplex) -> Result<HomologyProfile, TopologyError> {
    reduced_homology_with_limit(k, max_faces())
}

pub fn reduced_homology_with_limit(k: &SimplicialComplex, limit: usize) -> Result<HomologyProfile, TopologyError> {
    let faces = k.faces();
    if faces.len() > limit {
        return Err(TopologyError::TooLarge { faces: faces.len(), limit });
    }
    let Some(top) = k.max_facet_size() else {
        return Ok(HomologyProfile { betti: Vec::new(), torsion: Vec::new(), betti_minus_one: 0 });
    };
    // by_size[s] = faces with s vertices, i.e. dimension s-1
    let mut by_size: Vec<Vec<Face>> = vec![Vec::new(); top + 1];
    for f in faces {
        by_size[f.len()].push(f);
    }
    // boundary map from size s to size s-1, s = 1..=top
    let mut factors: Vec<Vec<u128>> = vec![Vec::new(); top + 2];
    for s in 1..=top {
        let index: BTreeMap<&Face, usize> = by_size[s - 1].iter().enumerate().map(|(i, f)| (f, i)).collect();
        let mut m = SparseMatrix::new(by_size[s - 1].len(), by_size[s].len());
        for (j, f) in by_size[s].iter().enumerate() {
            for drop in 0..f.len() {
                let mut g = f.clone();
                g.remove(drop);
                let sign = if drop % 2 == 0 { 1 } else { -1 };
                m.set(index[&g], j, sign);
            }
        }
        factors[s] = invariant_factors(&m)?;
    }
    let rank = |s: usize| factors.get(s).map_or(0, Vec::len) as i64;
    let betti_at = |s: usize| (by_size[s].len() as i64 - rank(s) - rank(s + 1)) as u64;
    let torsion_at = |s: usize| -> Vec<u128> {
        factors.get(s + 1).map(|f| f.iter().copied().filter(|&x| x > 1).collect()).unwrap_or_default()
    };
    // size 0 (dimension -1) has rank(0) = 0
    let betti_minus_one = (by_size[0].len() as i64 - rank(1)) as u64;
    Ok(HomologyProfile {
        betti: (1..=top).map(betti_at).collect(),
        torsion: (1..=top).map(torsion_at).collect(),
        betti_minus_one,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BallOrSphere {
    Sphere,
    Ball,
    Unknown,
}

/// Sound recognition of shellable balls and spheres. `Sphere` requires a
/// valid shelling, every ridge in exactly two facets and sphere homology;
/// `Ball` requires a valid shelling, every ridge in at most two facets, a
/// nonempty boundary and acyclic homology. Anything else is `Unknown`.
pub fn certify_ball_or_sphere(k: &SimplicialComplex, order: &[Face]) -> BallOrSphere {
    if k.is_empty() || verify_shelling(k, order).is_err() {
        return BallOrSphere::Unknown;
    }
    let degrees = k.ridge_degrees();
    if degrees.values().any(|&c| c > 2) {
        return BallOrSphere::Unknown;
    }
    let Ok(h) = reduced_homology(k) else {
        return BallOrSphere::Unknown;
    };
    let closed = degrees.values().all(|&c| c == 2);
    if closed && h.is_sphere_like() {
        BallOrSphere::Sphere
    } else if !closed && h.is_acyclic() {
        BallOrSphere::Ball
    } else {
        BallOrSphere::Unknown
    }
}

/// Reisner's criterion over ℚ: `K` is pure and every link `lk(F)`,
/// `F` including `∅`, has vanishing reduced homology below its dimension.
pub fn is_cohen_macaulay(k: &SimplicialComplex) -> Result<bool, TopologyError> {
    let faces = k.faces();
    if faces.len() > max_faces() {
        return Err(TopologyError::TooLarge { faces: faces.len(), limit: max_faces() });
    }
    if !k.is_pure() {
        return Ok(false);
    }
    for f in &faces {
        let link = k.link(f);
        let h = reduced_homology(&link)?;
        let dim = link.dim().unwrap_or(-1);
        // rational Betti numbers strictly below the link's dimension
        if dim >= 1 && h.betti[..dim as usize].iter().any(|&b| b != 0) {
            return Ok(false);
        }
        if dim >= 0 && h.betti_minus_one != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `K` is Cohen–Macaulay and every vertex deletion is Cohen–Macaulay of the
/// same dimension.
pub fn is_two_cm(k: &SimplicialComplex) -> Result<bool, TopologyError> {
    if !is_cohen_macaulay(k)? {
        return Ok(false);
    }
    for &v in k.vertices() {
        let del = k.deletion(v);
        if del.dim() != k.dim() || !is_cohen_macaulay(&del)? {
            return Ok(false);
        }
    }
    Ok(true)
}
