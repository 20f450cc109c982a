//! Small named complexes and seeded random shellable complexes.

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::{verify_shelling, Face, SimplicialComplex, Vertex};

/// Boundary of the tetrahedron on `1..=4`.
pub fn tetrahedron_boundary() -> SimplicialComplex {
    SimplicialComplex::from_facets((1..=4).combinations(3))
}

/// Boundary of the octahedron; `2k-1` and `2k` are antipodal.
pub fn octahedron_boundary() -> SimplicialComplex {
    SimplicialComplex::from_facets(
        [[1, 2], [3, 4], [5, 6]].into_iter().multi_cartesian_product().map(|f: Vec<Vertex>| f),
    )
}

/// Two triangles sharing an edge.
pub fn two_triangles() -> SimplicialComplex {
    SimplicialComplex::from_facets([vec![1, 2, 3], vec![1, 2, 4]])
}

/// Two tetrahedra sharing a triangle, as a 3-complex.
pub fn two_tetrahedra() -> SimplicialComplex {
    SimplicialComplex::from_facets([vec![1, 2, 3, 4], vec![1, 2, 3, 5]])
}

/// A shellable complex of dimension `facet_size - 1` with at most
/// `max_facets` facets, grown one facet at a time. Each step proposes
/// `G - v + w` for an existing facet `G`, a vertex `v ∈ G` and a vertex `w`
/// that is either old or new, and keeps it only if the extended order is
/// still a shelling. Returns the complex and its shelling order.
pub fn random_shellable(seed: u64, facet_size: usize, max_facets: usize) -> (SimplicialComplex, Vec<Face>) {
    assert!(facet_size >= 1 && max_facets >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let target = rng.gen_range(1..=max_facets);
    let mut order: Vec<Face> = vec![(1..=facet_size as Vertex).collect()];
    let mut next_vertex = facet_size as Vertex + 1;
    let mut attempts = 0;
    while order.len() < target && attempts < 200 * max_facets {
        attempts += 1;
        let g = order.choose(&mut rng).expect("nonempty").clone();
        let v = *g.choose(&mut rng).expect("nonempty facet");
        let w = if rng.gen_bool(0.5) { rng.gen_range(1..next_vertex) } else { next_vertex };
        if g.contains(&w) {
            continue;
        }
        let mut f: Face = g.iter().copied().filter(|&x| x != v).chain([w]).collect();
        f.sort_unstable();
        if order.contains(&f) {
            continue;
        }
        let mut candidate = order.clone();
        candidate.push(f);
        let k = SimplicialComplex::from_facets(candidate.iter().cloned());
        if k.facet_count() == candidate.len() && verify_shelling(&k, &candidate).is_ok() {
            if w == next_vertex {
                next_vertex += 1;
            }
            order = candidate;
        }
    }
    (SimplicialComplex::from_facets(order.iter().cloned()), order)
}
