use std::collections::HashMap;

use serde::ser::{Serialize, SerializeMap, Serializer};

use super::{el_violation, word_descents, EdgeLabeling, ElViolation, ElemId, PosetError, RankedPoset};
use crate::combinat::RankSet;
use crate::complex::{balanced::faces_by_colors, Coloring, ComplexError, SimplicialComplex};

/// An integer for every `S ⊆ [d-1]`, stored by bitmask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlagVector {
    d: usize,
    values: Vec<i64>,
}

impl FlagVector {
    pub fn zeros(d: usize) -> Self {
        assert!((1..=24).contains(&d), "unsupported d = {d}");
        FlagVector { d, values: vec![0; 1 << (d - 1)] }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn get(&self, s: &RankSet) -> i64 {
        assert_eq!(s.d(), self.d, "rank set over the wrong d");
        self.values[s.mask() as usize]
    }

    pub fn set(&mut self, s: &RankSet, value: i64) {
        assert_eq!(s.d(), self.d, "rank set over the wrong d");
        self.values[s.mask() as usize] = value;
    }

    pub fn add(&mut self, s: &RankSet, delta: i64) {
        assert_eq!(s.d(), self.d, "rank set over the wrong d");
        self.values[s.mask() as usize] += delta;
    }

    /// Entries in lexicographic order of `S`.
    pub fn entries(&self) -> Vec<(RankSet, i64)> {
        let mut out: Vec<_> = RankSet::all(self.d).map(|s| (s, self.get(&s))).collect();
        out.sort_by_key(|a| a.0);
        out
    }

    /// `h_S = Σ_{T⊆S} (-1)^{|S-T|} f_T`, reading `self` as `f`.
    pub fn to_h(&self) -> FlagVector {
        self.mobius(-1)
    }

    /// Inverse of [`FlagVector::to_h`].
    pub fn to_f(&self) -> FlagVector {
        self.mobius(1)
    }

    fn mobius(&self, sign: i64) -> FlagVector {
        let mut v = self.values.clone();
        for bit in 0..self.d - 1 {
            for m in 0..v.len() {
                if m & (1 << bit) != 0 {
                    v[m] += sign * v[m ^ (1 << bit)];
                }
            }
        }
        FlagVector { d: self.d, values: v }
    }

    /// `[Σ_{|S|=i} v_S for i in 0..d]`.
    pub fn refinement_sums(&self) -> Vec<i64> {
        let mut out = vec![0; self.d];
        for (m, &v) in self.values.iter().enumerate() {
            out[m.count_ones() as usize] += v;
        }
        out
    }
}

impl Serialize for FlagVector {
    fn serialize<Ser: Serializer>(&self, ser: Ser) -> Result<Ser::Ok, Ser::Error> {
        let entries = self.entries();
        let mut map = ser.serialize_map(Some(entries.len()))?;
        for (s, v) in entries {
            map.serialize_entry(&s.to_string(), &v)?;
        }
        map.end()
    }
}

fn chains_with_ranks(p: &RankedPoset, ranks: &[usize]) -> i64 {
    let Some((&first, rest)) = ranks.split_first() else {
        return 1;
    };
    let mut counts: HashMap<ElemId, i64> = p.elements_of_rank(first).map(|x| (x, 1)).collect();
    for &r in rest {
        counts = p
            .elements_of_rank(r)
            .map(|y| (y, counts.iter().filter(|(&x, _)| p.leq(x, y)).map(|(_, &c)| c).sum()))
            .collect();
    }
    counts.values().sum()
}

/// `f_S`: chains of `p` whose rank set is exactly `S`.
pub fn flag_f(p: &RankedPoset) -> FlagVector {
    let mut f = FlagVector::zeros(p.d().max(1));
    for s in RankSet::all(f.d) {
        f.set(&s, chains_with_ranks(p, &s.members()));
    }
    f
}

pub fn flag_h(p: &RankedPoset) -> FlagVector {
    flag_f(p).to_h()
}

/// `h_S` as the number of maximal chains whose label has descent set `S`.
pub fn flag_h_by_descents(p: &RankedPoset, lambda: &EdgeLabeling) -> Result<FlagVector, PosetError> {
    if let Some(v) = el_violation(p, lambda) {
        return Err(match v {
            ElViolation::MissingLabel { x, y } => PosetError::MissingLabel(x, y),
            ElViolation::IncreasingChains { x, y, .. } | ElViolation::NotLexFirst { x, y, .. } => {
                PosetError::NotELLabeling(x, y)
            }
            _ => PosetError::NotBounded,
        });
    }
    let mut h = FlagVector::zeros(p.d().max(1));
    for c in p.maximal_chains() {
        h.add(&word_descents(&lambda.word(&c)?), 1);
    }
    Ok(h)
}

/// Flag f-vector of a balanced complex: `f_S` counts faces whose color set
/// is `S`, with colors drawn from `1..d-1`.
pub fn complex_flag_f(k: &SimplicialComplex, coloring: &Coloring, d: usize) -> Result<FlagVector, ComplexError> {
    coloring.check_proper(k)?;
    let mut f = FlagVector::zeros(d);
    for (colors, n) in faces_by_colors(k, coloring) {
        let s = RankSet::new(d, colors.iter().map(|&c| c as usize))
            .map_err(|_| ComplexError::ImproperColoring(format!("colors {colors:?} outside 1..{}", d - 1)))?;
        f.add(&s, n as i64);
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::super::boolean_lattice;
    use super::*;

    fn rs(d: usize, m: &[usize]) -> RankSet {
        RankSet::new(d, m.iter().copied()).unwrap()
    }

    #[test]
    fn b3_values() {
        let b = boolean_lattice(3);
        let f = flag_f(&b.poset);
        assert_eq!(f.get(&rs(3, &[1])), 3);
        assert_eq!(f.get(&rs(3, &[1, 2])), 6);
        let h = flag_h(&b.poset);
        assert_eq!(h.get(&rs(3, &[])), 1);
        assert_eq!(h.get(&rs(3, &[1])), 2);
        assert_eq!(h.get(&rs(3, &[1, 2])), 1);
        assert_eq!(h.to_f(), f);
        let by_desc = flag_h_by_descents(&b.poset, &b.labeling).unwrap();
        assert_eq!(by_desc, h);
    }

    #[test]
    fn b4_atoms_and_coatoms() {
        let b = boolean_lattice(4);
        assert_eq!(flag_h(&b.poset).get(&rs(4, &[1, 3])), 5);
    }

    #[test]
    fn refinement_sums_match_order_complex_h() {
        let b = boolean_lattice(4);
        let h = flag_h(&b.poset);
        assert_eq!(h.refinement_sums(), b.poset.order_complex().h_vector().unwrap());
    }

    #[test]
    fn bad_labeling_rejected() {
        let b = boolean_lattice(2);
        let lambda: EdgeLabeling = b.labeling.iter().map(|(k, _)| (k, 1)).collect();
        assert!(matches!(flag_h_by_descents(&b.poset, &lambda), Err(PosetError::NotELLabeling(..))));
    }

    #[test]
    fn complex_flag_f_of_subdivision() {
        let sub = crate::complex::barycentric_subdivision(&SimplicialComplex::simplex([1, 2, 3]).boundary().unwrap());
        let f = complex_flag_f(&sub.complex, &sub.coloring, 3).unwrap();
        assert_eq!(f.get(&rs(3, &[])), 1);
        assert_eq!(f.get(&rs(3, &[1])), 3);
        assert_eq!(f.get(&rs(3, &[2])), 3);
        assert_eq!(f.get(&rs(3, &[1, 2])), 6);
    }

    #[test]
    fn serializes_in_lex_order() {
        let b = boolean_lattice(3);
        let json = serde_json::to_string(&flag_h(&b.poset)).unwrap();
        assert_eq!(json, r#"{"{}":1,"{1}":2,"{1,2}":1,"{2}":2}"#);
    }
}
