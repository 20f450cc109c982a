use std::collections::HashMap;

use itertools::Itertools;

use super::{EdgeLabeling, ElemId, Element, RankedPoset};

/// `B_d` with its standard labeling `λ(x, x ∪ {i}) = i`.
#[derive(Debug, Clone)]
pub struct BooleanLattice {
    pub poset: RankedPoset,
    pub labeling: EdgeLabeling,
    /// Bitmask of the subset behind each id (bit `i-1` for `i`).
    pub subsets: Vec<u32>,
    ids: HashMap<u32, ElemId>,
}

impl BooleanLattice {
    /// Id of the subset `{members}` of `[d]`.
    pub fn id(&self, members: &[usize]) -> ElemId {
        let mask = members.iter().fold(0u32, |m, &i| m | 1 << (i - 1));
        self.ids[&mask]
    }
}

fn subset_name(mask: u32, d: usize) -> String {
    format!("{{{}}}", (1..=d).filter(|i| mask & (1 << (i - 1)) != 0).join(","))
}

pub fn boolean_lattice(d: usize) -> BooleanLattice {
    assert!((1..=20).contains(&d), "unsupported d = {d}");
    let members = |m: u32| (1..=d).filter(move |i| m & (1 << (i - 1)) != 0).collect::<Vec<_>>();
    let mut masks: Vec<u32> = (0..1u32 << d).collect();
    masks.sort_by_key(|&m| (m.count_ones(), members(m)));
    let ids: HashMap<u32, ElemId> = masks.iter().enumerate().map(|(i, &m)| (m, i as ElemId)).collect();
    let elements = masks
        .iter()
        .map(|&m| Element { id: ids[&m], rank: m.count_ones() as usize, name: subset_name(m, d) })
        .collect();
    let mut covers = Vec::new();
    let mut labeling = EdgeLabeling::new();
    for &m in &masks {
        for i in 1..=d {
            if m & (1 << (i - 1)) == 0 {
                let (x, y) = (ids[&m], ids[&(m | 1 << (i - 1))]);
                covers.push((x, y));
                labeling.insert(x, y, i as i64);
            }
        }
    }
    let poset = RankedPoset::new(elements, covers).expect("boolean lattice is graded");
    BooleanLattice { poset, labeling, subsets: masks, ids }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        let b1 = boolean_lattice(1);
        assert_eq!(b1.poset.len(), 2);
        assert!(b1.poset.is_bounded());
        let b3 = boolean_lattice(3);
        assert_eq!(b3.poset.len(), 8);
        assert_eq!(b3.poset.covers().len(), 3 * 4);
        assert_eq!(b3.poset.name(b3.id(&[1, 3])), "{1,3}");
    }

    #[test]
    fn chain_word() {
        let b = boolean_lattice(3);
        let chain = [b.id(&[]), b.id(&[2]), b.id(&[2, 3]), b.id(&[1, 2, 3])];
        assert_eq!(b.labeling.word(&chain).unwrap(), vec![2, 3, 1]);
    }
}
