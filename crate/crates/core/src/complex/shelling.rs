use std::collections::BTreeSet;

use serde::Serialize;

use super::{ComplexError, Face, SimplicialComplex, Vertex};

/// A verified shelling together with the restriction face
/// `r(F_i) = { v ∈ F_i : F_i - v ⊆ F_j for some j < i }` of every facet.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShellingCertificate {
    pub order: Vec<Face>,
    pub restrictions: Vec<Face>,
}

impl ShellingCertificate {
    /// `h_i` = number of facets whose restriction face has `i` vertices.
    pub fn h_vector(&self) -> Vec<i64> {
        let d = self.order.first().map_or(0, Vec::len);
        let mut h = vec![0i64; d + 1];
        for r in &self.restrictions {
            h[r.len()] += 1;
        }
        h
    }
}

fn intersection_size(a: &[Vertex], b: &[Vertex]) -> usize {
    a.iter().filter(|v| b.binary_search(v).is_ok()).count()
}

/// Restriction face of `facet` against `earlier`, and whether `facet`
/// attaches along a pure codimension-one subcomplex. Returns the first
/// offending earlier index on failure.
fn restriction(facet: &[Vertex], earlier: &[Face]) -> Result<Face, usize> {
    // vertices v such that facet - v lies in an earlier facet
    let restriction: Face = facet
        .iter()
        .copied()
        .filter(|v| {
            earlier.iter().any(|g| intersection_size(facet, g) + 1 == facet.len() && g.binary_search(v).is_err())
        })
        .collect();
    // F_j ∩ F_k ⊆ F_k - v for some v in the restriction face
    for (j, g) in earlier.iter().enumerate() {
        if !restriction.iter().any(|v| g.binary_search(v).is_err()) {
            return Err(j);
        }
    }
    Ok(restriction)
}

/// Checks that `order` is a shelling of `k`: for every `j < k` there is a
/// `j' < k` with `F_j ∩ F_k ⊆ F_j' ∩ F_k = F_k - x`.
pub fn verify_shelling(k: &SimplicialComplex, order: &[Face]) -> Result<ShellingCertificate, ComplexError> {
    if !k.is_pure() {
        return Err(ComplexError::NotPure);
    }
    let given: BTreeSet<&Face> = order.iter().collect();
    if given.len() != order.len() || given.len() != k.facets().len() || !order.iter().all(|f| k.facets().contains(f)) {
        return Err(ComplexError::NotAFacetOrder(format!(
            "{} facets given, complex has {}",
            order.len(),
            k.facets().len()
        )));
    }
    let mut restrictions = Vec::with_capacity(order.len());
    for (idx, facet) in order.iter().enumerate() {
        match restriction(facet, &order[..idx]) {
            Ok(r) => restrictions.push(r),
            Err(j) => return Err(ComplexError::NotAShelling { k: idx + 1, j: j + 1 }),
        }
    }
    Ok(ShellingCertificate { order: order.to_vec(), restrictions })
}

/// Depth-first search for a shelling order. Gives up (returns `None`) on
/// complexes with more than `max_facets` facets.
pub fn find_shelling(k: &SimplicialComplex, max_facets: usize) -> Option<Vec<Face>> {
    if !k.is_pure() || k.facets().len() > max_facets {
        return None;
    }
    let facets: Vec<Face> = k.facets().iter().cloned().collect();
    let mut used = vec![false; facets.len()];
    let mut order = Vec::with_capacity(facets.len());
    fn dfs(facets: &[Face], used: &mut [bool], order: &mut Vec<Face>) -> bool {
        if order.len() == facets.len() {
            return true;
        }
        for i in 0..facets.len() {
            if used[i] || restriction(&facets[i], order).is_err() {
                continue;
            }
            used[i] = true;
            order.push(facets[i].clone());
            if dfs(facets, used, order) {
                return true;
            }
            order.pop();
            used[i] = false;
        }
        false
    }
    dfs(&facets, &mut used, &mut order).then_some(order)
}
