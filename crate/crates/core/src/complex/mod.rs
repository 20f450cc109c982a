//! Finite simplicial complexes given by their facets, with face counting,
//! shelling verification and the balanced-complex constructions used by the
//! face-poset pipeline.

pub(crate) mod balanced;
mod shelling;

pub use balanced::{barycentric_subdivision, color_selected, Coloring, Subdivision};
pub use shelling::{find_shelling, verify_shelling, ShellingCertificate};

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combinat::IntVector;

pub type Vertex = i64;

/// A face as a strictly increasing list of vertices.
pub type Face = Vec<Vertex>;

/// `(f_0, …, f_d)` where `f_i` counts faces with `i` vertices.
pub type FVector = Vec<i64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("complex is not pure")]
    NotPure,
    #[error("facet {facet:?} uses vertex {vertex} which is not declared")]
    UnknownVertex { facet: Face, vertex: Vertex },
    #[error("order is not a permutation of the facets: {0}")]
    NotAFacetOrder(String),
    #[error("not a shelling: facet {k} meets facet {j} outside every earlier ridge")]
    NotAShelling { k: usize, j: usize },
    #[error("dimension {requested} outside 0..={max}")]
    BadDimension { requested: isize, max: isize },
    #[error("coloring is not proper: {0}")]
    ImproperColoring(String),
}

/// A simplicial complex stored by its facets. No facet contains another.
///
/// The *empty* complex has no faces at all; the *void* complex has only the
/// empty face. They are different values with different f-vectors.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ComplexJson", into = "ComplexJson")]
pub struct SimplicialComplex {
    vertices: BTreeSet<Vertex>,
    facets: BTreeSet<Face>,
}

#[derive(Serialize, Deserialize)]
struct ComplexJson {
    vertices: Vec<Vertex>,
    facets: Vec<Vec<Vertex>>,
}

impl TryFrom<ComplexJson> for SimplicialComplex {
    type Error = ComplexError;

    fn try_from(json: ComplexJson) -> Result<Self, Self::Error> {
        SimplicialComplex::with_vertices(json.vertices, json.facets)
    }
}

impl From<SimplicialComplex> for ComplexJson {
    fn from(k: SimplicialComplex) -> Self {
        ComplexJson { vertices: k.vertices.into_iter().collect(), facets: k.facets.into_iter().collect() }
    }
}

fn normalize(face: impl IntoIterator<Item = Vertex>) -> Face {
    let mut f: Face = face.into_iter().collect();
    f.sort_unstable();
    f.dedup();
    f
}

/// `a ⊆ b` for sorted faces.
pub fn is_subface(a: &[Vertex], b: &[Vertex]) -> bool {
    let mut it = b.iter();
    a.iter().all(|x| it.by_ref().any(|y| y == x))
}

/// All subsets of a sorted face, each sorted.
pub fn subfaces(face: &[Vertex]) -> impl Iterator<Item = Face> + '_ {
    (0u64..1 << face.len())
        .map(move |mask| face.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, &v)| v).collect())
}

impl SimplicialComplex {
    /// The complex generated by `facets`; non-maximal entries are dropped.
    pub fn from_facets<I, F>(facets: I) -> Self
    where
        I: IntoIterator<Item = F>,
        F: IntoIterator<Item = Vertex>,
    {
        let mut faces: Vec<Face> = facets.into_iter().map(normalize).collect();
        faces.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        faces.dedup();
        let mut kept: Vec<Face> = Vec::new();
        for f in faces {
            if !kept.iter().any(|g| g.len() > f.len() && is_subface(&f, g)) {
                kept.push(f);
            }
        }
        let vertices = kept.iter().flatten().copied().collect();
        SimplicialComplex { vertices, facets: kept.into_iter().collect() }
    }

    /// Like [`from_facets`](Self::from_facets) but with a declared vertex set.
    /// Declared vertices that lie in no facet become isolated points.
    pub fn with_vertices<I, F>(vertices: impl IntoIterator<Item = Vertex>, facets: I) -> Result<Self, ComplexError>
    where
        I: IntoIterator<Item = F>,
        F: IntoIterator<Item = Vertex>,
    {
        let declared: BTreeSet<Vertex> = vertices.into_iter().collect();
        let mut all: Vec<Face> = Vec::new();
        for f in facets {
            let f = normalize(f);
            if let Some(&v) = f.iter().find(|v| !declared.contains(v)) {
                return Err(ComplexError::UnknownVertex { facet: f, vertex: v });
            }
            all.push(f);
        }
        all.extend(declared.iter().map(|&v| vec![v]));
        Ok(Self::from_facets(all))
    }

    /// No faces.
    pub fn empty() -> Self {
        SimplicialComplex { vertices: BTreeSet::new(), facets: BTreeSet::new() }
    }

    /// Only the empty face.
    pub fn void() -> Self {
        SimplicialComplex { vertices: BTreeSet::new(), facets: BTreeSet::from([Vec::new()]) }
    }

    /// The full simplex on `vertices`.
    pub fn simplex(vertices: impl IntoIterator<Item = Vertex>) -> Self {
        Self::from_facets([vertices.into_iter().collect::<Vec<_>>()])
    }

    pub fn vertices(&self) -> &BTreeSet<Vertex> {
        &self.vertices
    }

    pub fn facets(&self) -> &BTreeSet<Face> {
        &self.facets
    }

    pub fn facet_count(&self) -> usize {
        self.facets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facets.is_empty()
    }

    pub fn is_void(&self) -> bool {
        self.facets.len() == 1 && self.facets.iter().next().is_some_and(Vec::is_empty)
    }

    /// Largest facet size; `None` for the empty complex.
    pub fn max_facet_size(&self) -> Option<usize> {
        self.facets.iter().map(Vec::len).max()
    }

    /// Dimension; `-1` for the void complex and `None` for the empty one.
    pub fn dim(&self) -> Option<isize> {
        self.max_facet_size().map(|s| s as isize - 1)
    }

    pub fn is_pure(&self) -> bool {
        self.facets.iter().map(Vec::len).all_equal()
    }

    pub fn contains_face(&self, face: &[Vertex]) -> bool {
        self.facets.iter().any(|g| is_subface(face, g))
    }

    /// All faces, including the empty face when the complex is not empty.
    pub fn faces(&self) -> BTreeSet<Face> {
        let mut out = BTreeSet::new();
        for f in &self.facets {
            out.extend(subfaces(f));
        }
        out
    }

    pub fn face_count(&self) -> usize {
        self.faces().len()
    }

    /// Faces with exactly `size` vertices.
    pub fn faces_of_size(&self, size: usize) -> BTreeSet<Face> {
        let mut out = BTreeSet::new();
        for f in self.facets.iter().filter(|f| f.len() >= size) {
            out.extend(f.iter().copied().combinations(size));
        }
        out
    }

    pub fn f_vector(&self) -> Result<FVector, ComplexError> {
        if !self.is_pure() {
            return Err(ComplexError::NotPure);
        }
        let Some(d) = self.max_facet_size() else {
            return Ok(Vec::new());
        };
        let mut f = vec![0i64; d + 1];
        for face in self.faces() {
            f[face.len()] += 1;
        }
        Ok(f)
    }

    pub fn h_vector(&self) -> Result<IntVector, ComplexError> {
        Ok(h_from_f(&self.f_vector()?))
    }

    /// Reduced Euler characteristic `Σ (-1)^(i-1) f_i`.
    pub fn reduced_euler_characteristic(&self) -> i64 {
        self.faces().iter().map(|f| if f.len() % 2 == 1 { 1 } else { -1 }).sum()
    }

    /// All faces of dimension at most `r`.
    pub fn skeleton(&self, r: isize) -> Result<Self, ComplexError> {
        let max = self.dim().unwrap_or(-1);
        if r < 0 || r > max {
            return Err(ComplexError::BadDimension { requested: r, max });
        }
        let size = (r + 1) as usize;
        let mut out: Vec<Face> = Vec::new();
        for f in &self.facets {
            if f.len() <= size {
                out.push(f.clone());
            } else {
                out.extend(f.iter().copied().combinations(size));
            }
        }
        Ok(Self::from_facets(out))
    }

    /// Closure of the codimension-one faces that lie in exactly one facet.
    pub fn boundary(&self) -> Result<Self, ComplexError> {
        if !self.is_pure() {
            return Err(ComplexError::NotPure);
        }
        let mut count: BTreeMap<Face, usize> = BTreeMap::new();
        for f in &self.facets {
            if f.is_empty() {
                continue;
            }
            for ridge in f.iter().copied().combinations(f.len() - 1) {
                *count.entry(ridge).or_default() += 1;
            }
        }
        let ridges: Vec<Face> = count.into_iter().filter(|&(_, c)| c == 1).map(|(r, _)| r).collect();
        Ok(Self::from_facets(ridges))
    }

    /// Number of facets containing each codimension-one face.
    pub fn ridge_degrees(&self) -> BTreeMap<Face, usize> {
        let mut count: BTreeMap<Face, usize> = BTreeMap::new();
        for f in self.facets.iter().filter(|f| !f.is_empty()) {
            for ridge in f.iter().copied().combinations(f.len() - 1) {
                *count.entry(ridge).or_default() += 1;
            }
        }
        count
    }

    /// `lk(F) = { G : G ∩ F = ∅, G ∪ F ∈ K }`; empty if `F` is not a face.
    pub fn link(&self, face: &[Vertex]) -> Self {
        let facets = self
            .facets
            .iter()
            .filter(|g| is_subface(face, g))
            .map(|g| g.iter().copied().filter(|v| face.binary_search(v).is_err()).collect::<Face>());
        Self::from_facets(facets)
    }

    /// Faces not containing `v`.
    pub fn deletion(&self, v: Vertex) -> Self {
        let facets = self.facets.iter().map(|g| g.iter().copied().filter(|&w| w != v).collect::<Face>());
        Self::from_facets(facets)
    }

    /// Complex generated by the facets of both.
    pub fn union(&self, other: &Self) -> Self {
        Self::from_facets(self.facets.iter().chain(other.facets.iter()).cloned())
    }
}

fn binomial(n: usize, k: usize) -> i64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

/// `Σ f_i (t-1)^(d-i) = Σ h_i t^(d-i)`.
pub fn h_from_f(f: &[i64]) -> IntVector {
    if f.is_empty() {
        return Vec::new();
    }
    let d = f.len() - 1;
    (0..=d)
        .map(|k| {
            (0..=k)
                .map(|i| {
                    let sign = if (k - i) % 2 == 0 { 1 } else { -1 };
                    sign * binomial(d - i, k - i) * f[i]
                })
                .sum()
        })
        .collect()
}

/// Inverse of [`h_from_f`].
pub fn f_from_h(h: &[i64]) -> FVector {
    if h.is_empty() {
        return Vec::new();
    }
    let d = h.len() - 1;
    (0..=d).map(|k| (0..=k).map(|i| binomial(d - i, k - i) * h[i]).sum()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hexagon() -> SimplicialComplex {
        SimplicialComplex::from_facets((0..6).map(|i| vec![i, (i + 1) % 6]))
    }

    fn tetra_boundary() -> SimplicialComplex {
        SimplicialComplex::from_facets((0..4).combinations(3))
    }

    #[test]
    fn f_vectors() {
        assert_eq!(SimplicialComplex::simplex([7]).f_vector().unwrap(), vec![1, 1]);
        assert_eq!(hexagon().f_vector().unwrap(), vec![1, 6, 6]);
        assert_eq!(tetra_boundary().f_vector().unwrap(), vec![1, 4, 6, 4]);
        assert_eq!(SimplicialComplex::void().f_vector().unwrap(), vec![1]);
        assert_eq!(SimplicialComplex::empty().f_vector().unwrap(), Vec::<i64>::new());
    }

    #[test]
    fn h_vectors() {
        assert_eq!(h_from_f(&[1, 6, 6]), vec![1, 4, 1]);
        assert_eq!(SimplicialComplex::simplex([1, 2, 3]).h_vector().unwrap(), vec![1, 0, 0, 0]);
        assert_eq!(h_from_f(&[1, 3]), vec![1, 2]);
        assert_eq!(tetra_boundary().h_vector().unwrap(), vec![1, 1, 1, 1]);
    }

    #[test]
    fn not_pure_is_rejected() {
        let k = SimplicialComplex::from_facets([vec![1, 2, 3], vec![3, 4]]);
        assert_eq!(k.f_vector(), Err(ComplexError::NotPure));
        assert_eq!(k.boundary(), Err(ComplexError::NotPure));
    }

    #[test]
    fn facets_are_maximal() {
        let k = SimplicialComplex::from_facets([vec![1, 2], vec![2, 1, 3], vec![3]]);
        assert_eq!(k.facets().len(), 1);
    }

    #[test]
    fn declared_vertices() {
        let k = SimplicialComplex::with_vertices([1, 2, 3], [vec![1, 2]]).unwrap();
        assert_eq!(k.facets().len(), 2);
        assert!(SimplicialComplex::with_vertices([1], [vec![1, 2]]).is_err());
    }

    #[test]
    fn skeletons() {
        let k4 = tetra_boundary().skeleton(1).unwrap();
        assert_eq!(k4.facets().len(), 6);
        assert!(k4.facets().iter().all(|f| f.len() == 2));
        assert_eq!(tetra_boundary().skeleton(2).unwrap(), tetra_boundary());
        let tri = SimplicialComplex::simplex([1, 2, 3]).skeleton(0).unwrap();
        assert_eq!(tri.facets().len(), 3);
        assert!(tetra_boundary().skeleton(3).is_err());
        assert!(tetra_boundary().skeleton(-1).is_err());
    }

    #[test]
    fn boundaries() {
        let edge = SimplicialComplex::simplex([1, 2]);
        assert_eq!(edge.boundary().unwrap(), SimplicialComplex::from_facets([vec![1], vec![2]]));
        let path = SimplicialComplex::from_facets([vec![1, 2], vec![2, 3]]);
        assert_eq!(path.boundary().unwrap(), SimplicialComplex::from_facets([vec![1], vec![3]]));
        assert!(hexagon().boundary().unwrap().is_empty());
        assert!(SimplicialComplex::simplex([5]).boundary().unwrap().is_void());
    }

    #[test]
    fn link_and_deletion() {
        let two = SimplicialComplex::from_facets([vec![1, 2, 3], vec![1, 2, 4]]);
        assert_eq!(two.link(&[1, 2]), SimplicialComplex::from_facets([vec![3], vec![4]]));
        assert_eq!(two.link(&[3]), SimplicialComplex::simplex([1, 2]));
        assert!(two.link(&[3, 4]).is_empty());
        assert_eq!(two.deletion(3), SimplicialComplex::simplex([1, 2, 4]));
    }

    #[test]
    fn euler_characteristic() {
        assert_eq!(hexagon().reduced_euler_characteristic(), -1);
        assert_eq!(tetra_boundary().reduced_euler_characteristic(), 1);
        assert_eq!(SimplicialComplex::simplex([1, 2]).reduced_euler_characteristic(), 0);
    }

    #[test]
    fn json_shape() {
        let k: SimplicialComplex = serde_json::from_str(r#"{"vertices":[1,2,3],"facets":[[2,1],[2,3]]}"#).unwrap();
        assert_eq!(k.facets().len(), 2);
        let back = serde_json::to_string(&k).unwrap();
        assert_eq!(back, r#"{"vertices":[1,2,3],"facets":[[1,2],[2,3]]}"#);
    }
}
