use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::{subfaces, ComplexError, Face, SimplicialComplex, Vertex};

/// Vertex coloring; proper when no face repeats a color.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Coloring(pub BTreeMap<Vertex, u32>);

impl Coloring {
    pub fn color(&self, v: Vertex) -> Option<u32> {
        self.0.get(&v).copied()
    }

    /// Every vertex of `k` is colored and every facet sees distinct colors.
    pub fn check_proper(&self, k: &SimplicialComplex) -> Result<(), ComplexError> {
        for f in k.facets() {
            let mut seen = BTreeSet::new();
            for &v in f {
                let c =
                    self.color(v).ok_or_else(|| ComplexError::ImproperColoring(format!("vertex {v} has no color")))?;
                if !seen.insert(c) {
                    return Err(ComplexError::ImproperColoring(format!("facet {f:?} repeats color {c}")));
                }
            }
        }
        Ok(())
    }
}

/// The first barycentric subdivision: the order complex of the nonempty
/// faces of `K`. Vertex `i` stands for `faces[i]`.
#[derive(Debug, Clone)]
pub struct Subdivision {
    pub complex: SimplicialComplex,
    /// Vertex `v` gets color `|faces[v]|`.
    pub coloring: Coloring,
    pub faces: Vec<Face>,
}

pub fn barycentric_subdivision(k: &SimplicialComplex) -> Subdivision {
    let mut faces: Vec<Face> = k.faces().into_iter().filter(|f| !f.is_empty()).collect();
    faces.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let id: BTreeMap<&Face, Vertex> = faces.iter().enumerate().map(|(i, f)| (f, i as Vertex)).collect();

    let mut chains: Vec<Face> = Vec::new();
    for facet in k.facets() {
        if facet.is_empty() {
            continue;
        }
        // every full flag of subfaces of the facet
        for perm in itertools::Itertools::permutations(facet.iter().copied(), facet.len()) {
            let mut prefix: Face = Vec::new();
            let mut chain = Vec::with_capacity(perm.len());
            for v in perm {
                prefix.push(v);
                prefix.sort_unstable();
                chain.push(id[&prefix]);
            }
            chains.push(chain);
        }
    }
    let coloring = Coloring(faces.iter().enumerate().map(|(i, f)| (i as Vertex, f.len() as u32)).collect());
    Subdivision { complex: SimplicialComplex::from_facets(chains), coloring, faces }
}

/// `Σ_S = { F ∈ Σ : ψ(v) ∈ S for all v ∈ F }`.
pub fn color_selected(
    k: &SimplicialComplex,
    coloring: &Coloring,
    colors: &BTreeSet<u32>,
) -> Result<SimplicialComplex, ComplexError> {
    coloring.check_proper(k)?;
    let facets = k.facets().iter().map(|f| {
        f.iter().copied().filter(|&v| coloring.color(v).is_some_and(|c| colors.contains(&c))).collect::<Face>()
    });
    Ok(SimplicialComplex::from_facets(facets))
}

/// Faces of `k` grouped by their color sets.
pub(crate) fn faces_by_colors(k: &SimplicialComplex, coloring: &Coloring) -> BTreeMap<BTreeSet<u32>, usize> {
    let mut out: BTreeMap<BTreeSet<u32>, usize> = BTreeMap::new();
    let mut seen = BTreeSet::new();
    for f in k.facets() {
        for s in subfaces(f) {
            if seen.insert(s.clone()) {
                let colors = s.iter().filter_map(|&v| coloring.color(v)).collect();
                *out.entry(colors).or_default() += 1;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_subdivides_to_path() {
        let sd = barycentric_subdivision(&SimplicialComplex::simplex([1, 2]));
        assert_eq!(sd.complex.facets().len(), 2);
        assert_eq!(sd.complex.vertices().len(), 3);
        let mut colors: Vec<u32> = sd.coloring.0.values().copied().collect();
        colors.sort();
        assert_eq!(colors, vec![1, 1, 2]);
        // the middle of the path is the edge barycenter
        let degree2: Vec<Vertex> = sd
            .complex
            .vertices()
            .iter()
            .copied()
            .filter(|&v| sd.complex.facets().iter().filter(|f| f.contains(&v)).count() == 2)
            .collect();
        assert_eq!(degree2.len(), 1);
        assert_eq!(sd.coloring.color(degree2[0]), Some(2));
    }

    #[test]
    fn triangle_subdivision_counts() {
        let sd = barycentric_subdivision(&SimplicialComplex::simplex([1, 2, 3]));
        assert_eq!(sd.complex.f_vector().unwrap(), vec![1, 7, 12, 6]);
        sd.coloring.check_proper(&sd.complex).unwrap();
    }

    #[test]
    fn triangle_boundary_subdivides_to_hexagon() {
        let k = SimplicialComplex::from_facets([vec![1, 2], vec![2, 3], vec![1, 3]]);
        let sd = barycentric_subdivision(&k);
        assert_eq!(sd.complex.f_vector().unwrap(), vec![1, 6, 6]);
        assert!(sd.complex.boundary().unwrap().is_empty());

        let mids = color_selected(&sd.complex, &sd.coloring, &BTreeSet::from([2])).unwrap();
        assert_eq!(mids.facets().len(), 3);
        assert!(mids.facets().iter().all(|f| f.len() == 1 && sd.faces[f[0] as usize].len() == 2));

        let all = color_selected(&sd.complex, &sd.coloring, &BTreeSet::from([1, 2])).unwrap();
        assert_eq!(all, sd.complex);
        let none = color_selected(&sd.complex, &sd.coloring, &BTreeSet::new()).unwrap();
        assert!(none.vertices().is_empty());
    }

    #[test]
    fn improper_coloring_rejected() {
        let k = SimplicialComplex::simplex([1, 2]);
        let c = Coloring(BTreeMap::from([(1, 1), (2, 1)]));
        assert!(color_selected(&k, &c, &BTreeSet::from([1])).is_err());
        let partial = Coloring(BTreeMap::from([(1, 1)]));
        assert!(partial.check_proper(&k).is_err());
    }
}
