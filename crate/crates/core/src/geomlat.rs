//! Simple matroids, their lattices of flats, the minimal labeling and the
//! per-nbc-basis Boolean subposets.

use std::collections::{BTreeSet, HashMap};

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poset::{Chain, EdgeLabeling, ElemId, Element, PosetError, RankedPoset};

/// Ground sets are limited so subsets fit in a `u32` and brute-force
/// enumeration over `2^n` subsets stays cheap.
pub const MAX_GROUND: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeomlatError {
    #[error("not a matroid: {0}")]
    NotAMatroid(String),
    #[error("matroid is not simple: {0}")]
    NotSimple(String),
    #[error("{0:?} is not a basis")]
    NotABasis(Vec<usize>),
    #[error("ground set of size {0} exceeds the limit of {MAX_GROUND}")]
    TooLarge(usize),
    #[error("lattice of flats is not geometric: {0}")]
    NotGeometric(String),
    #[error(transparent)]
    Poset(#[from] PosetError),
}

/// `{"ground": n, "bases": [[1, 2], ...]}` with ground elements `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatroidJson {
    pub ground: usize,
    pub bases: Vec<Vec<usize>>,
}

fn members(mask: u32) -> Vec<usize> {
    (0..32).filter(|b| mask & (1 << b) != 0).map(|b| b + 1).collect()
}

fn to_mask(set: &[usize]) -> u32 {
    set.iter().fold(0, |m, &e| m | 1 << (e - 1))
}

/// A matroid on `1..=n` given by its bases. Element order is the atom order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matroid {
    n: usize,
    rank: usize,
    bases: BTreeSet<u32>,
}

impl Matroid {
    /// Validates the basis exchange axiom. Simplicity is checked separately.
    pub fn new(n: usize, bases: &[Vec<usize>]) -> Result<Self, GeomlatError> {
        if n > MAX_GROUND {
            return Err(GeomlatError::TooLarge(n));
        }
        let mut set = BTreeSet::new();
        for b in bases {
            if let Some(&e) = b.iter().find(|&&e| e == 0 || e > n) {
                return Err(GeomlatError::NotAMatroid(format!("element {e} outside 1..={n}")));
            }
            let m = to_mask(b);
            if m.count_ones() as usize != b.len() {
                return Err(GeomlatError::NotAMatroid(format!("basis {b:?} repeats an element")));
            }
            set.insert(m);
        }
        let Some(&first) = set.first() else {
            return Err(GeomlatError::NotAMatroid("no bases".into()));
        };
        let rank = first.count_ones() as usize;
        if let Some(&b) = set.iter().find(|b| b.count_ones() as usize != rank) {
            return Err(GeomlatError::NotAMatroid(format!(
                "bases {:?} and {:?} differ in size",
                members(first),
                members(b)
            )));
        }
        for (&b1, &b2) in set.iter().cartesian_product(set.iter()) {
            for x in members(b1 & !b2) {
                let ok = members(b2 & !b1).into_iter().any(|y| set.contains(&((b1 & !(1 << (x - 1))) | 1 << (y - 1))));
                if !ok {
                    return Err(GeomlatError::NotAMatroid(format!(
                        "exchange fails for {:?}, {:?} at {x}",
                        members(b1),
                        members(b2)
                    )));
                }
            }
        }
        Ok(Matroid { n, rank, bases: set })
    }

    pub fn from_json(json: &MatroidJson) -> Result<Self, GeomlatError> {
        Self::new(json.ground, &json.bases)
    }

    pub fn to_json(&self) -> MatroidJson {
        MatroidJson { ground: self.n, bases: self.bases().collect() }
    }

    /// `U_{r,n}`.
    pub fn uniform(r: usize, n: usize) -> Self {
        let bases: Vec<Vec<usize>> = (1..=n).combinations(r).collect();
        Self::new(n, &bases).expect("uniform matroid")
    }

    pub fn free(n: usize) -> Self {
        Self::uniform(n, n)
    }

    /// Cycle matroid of a graph on vertices `0..vertices`; edge `k` is ground
    /// element `k + 1`.
    pub fn graphic(vertices: usize, edges: &[(usize, usize)]) -> Result<Self, GeomlatError> {
        if let Some((k, _)) = edges.iter().enumerate().find(|(_, &(a, b))| a >= vertices || b >= vertices) {
            return Err(GeomlatError::NotAMatroid(format!("edge {k} has an endpoint outside 0..{vertices}")));
        }
        let forest_rank = |subset: &[usize]| {
            let mut parent: Vec<usize> = (0..vertices).collect();
            fn find(p: &mut [usize], x: usize) -> usize {
                if p[x] != x {
                    let r = find(p, p[x]);
                    p[x] = r;
                }
                p[x]
            }
            let mut r = 0;
            for &k in subset {
                let (a, b) = edges[k];
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent[ra] = rb;
                    r += 1;
                }
            }
            r
        };
        let all: Vec<usize> = (0..edges.len()).collect();
        let r = forest_rank(&all);
        let bases: Vec<Vec<usize>> = all
            .iter()
            .copied()
            .combinations(r)
            .filter(|s| forest_rank(s) == r)
            .map(|s| s.into_iter().map(|k| k + 1).collect())
            .collect();
        Self::new(edges.len(), &bases)
    }

    /// Complete graph `K_m`, edges in lexicographic order.
    pub fn complete_graph(m: usize) -> Self {
        let edges: Vec<(usize, usize)> = (0..m).tuple_combinations().collect();
        Self::graphic(m, &edges).expect("graphic matroid")
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn bases(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        self.bases.iter().map(|&b| members(b))
    }

    pub fn is_basis(&self, set: &[usize]) -> bool {
        self.bases.contains(&to_mask(set))
    }

    fn rank_of_mask(&self, mask: u32) -> usize {
        self.bases.iter().map(|b| (b & mask).count_ones() as usize).max().unwrap_or(0)
    }

    pub fn rank_of(&self, set: &[usize]) -> usize {
        self.rank_of_mask(to_mask(set))
    }

    pub fn is_independent(&self, set: &[usize]) -> bool {
        self.rank_of(set) == set.len()
    }

    fn closure_mask(&self, mask: u32) -> u32 {
        let r = self.rank_of_mask(mask);
        (0..self.n).fold(mask, |acc, b| if self.rank_of_mask(mask | 1 << b) == r { acc | 1 << b } else { acc })
    }

    pub fn closure(&self, set: &[usize]) -> Vec<usize> {
        members(self.closure_mask(to_mask(set)))
    }

    /// No loops and no parallel pairs.
    pub fn check_simple(&self) -> Result<(), GeomlatError> {
        for e in 1..=self.n {
            if self.rank_of(&[e]) == 0 {
                return Err(GeomlatError::NotSimple(format!("{e} is a loop")));
            }
        }
        for (a, b) in (1..=self.n).tuple_combinations() {
            if self.rank_of(&[a, b]) < 2 {
                return Err(GeomlatError::NotSimple(format!("{a} and {b} are parallel")));
            }
        }
        Ok(())
    }

    /// Minimal dependent sets, in increasing order of their bitmask.
    pub fn circuits(&self) -> Vec<Vec<usize>> {
        let dependent = |m: u32| self.rank_of_mask(m) < m.count_ones() as usize;
        (1..1u32 << self.n)
            .filter(|&m| dependent(m) && (0..self.n).all(|b| m & (1 << b) == 0 || !dependent(m & !(1 << b))))
            .map(members)
            .collect()
    }

    /// Bases containing no broken circuit, sorted lexicographically.
    pub fn nbc_bases(&self) -> Vec<Vec<usize>> {
        let broken: Vec<u32> = self.circuits().iter().map(|c| to_mask(&c[1..])).collect();
        let mut out: Vec<Vec<usize>> =
            self.bases.iter().filter(|&&b| broken.iter().all(|&bc| b & bc != bc)).map(|&b| members(b)).collect();
        out.sort();
        out
    }
}

/// Lattice of flats of a simple matroid.
#[derive(Debug, Clone)]
pub struct FlatLattice {
    pub poset: RankedPoset,
    matroid: Matroid,
    flats: Vec<u32>,
    ids: HashMap<u32, ElemId>,
}

pub fn lattice_of_flats(m: &Matroid) -> Result<FlatLattice, GeomlatError> {
    m.check_simple()?;
    let mut flats: Vec<u32> =
        (0..1u32 << m.n).map(|s| m.closure_mask(s)).collect::<BTreeSet<_>>().into_iter().collect();
    flats.sort_by_key(|&f| (m.rank_of_mask(f), members(f)));
    let ids: HashMap<u32, ElemId> = flats.iter().enumerate().map(|(i, &f)| (f, i as ElemId)).collect();
    let rank: Vec<usize> = flats.iter().map(|&f| m.rank_of_mask(f)).collect();
    let elements = flats
        .iter()
        .zip(&rank)
        .map(|(&f, &r)| Element { id: ids[&f], rank: r, name: format!("{{{}}}", members(f).iter().join(",")) })
        .collect();
    let mut covers = Vec::new();
    for (i, &x) in flats.iter().enumerate() {
        for (j, &y) in flats.iter().enumerate() {
            if rank[j] == rank[i] + 1 && x & y == x {
                covers.push((i as ElemId, j as ElemId));
            }
        }
    }
    let poset = RankedPoset::new(elements, covers)?;
    let lat = FlatLattice { poset, matroid: m.clone(), flats, ids };
    lat.check_geometric()?;
    Ok(lat)
}

impl FlatLattice {
    pub fn matroid(&self) -> &Matroid {
        &self.matroid
    }

    pub fn flat(&self, id: ElemId) -> Vec<usize> {
        members(self.flats[id as usize])
    }

    pub fn id_of(&self, flat: &[usize]) -> Option<ElemId> {
        self.ids.get(&to_mask(flat)).copied()
    }

    /// Element for atom `a_i`.
    pub fn atom(&self, i: usize) -> ElemId {
        self.ids[&(1 << (i - 1))]
    }

    pub fn join(&self, x: ElemId, y: ElemId) -> ElemId {
        self.ids[&self.matroid.closure_mask(self.flats[x as usize] | self.flats[y as usize])]
    }

    pub fn meet(&self, x: ElemId, y: ElemId) -> ElemId {
        self.ids[&(self.flats[x as usize] & self.flats[y as usize])]
    }

    /// Atomic and semimodular, checked pairwise.
    fn check_geometric(&self) -> Result<(), GeomlatError> {
        let p = &self.poset;
        if !p.is_bounded() {
            return Err(GeomlatError::NotGeometric("not bounded".into()));
        }
        for &x in p.ids() {
            let atoms_join = members(self.flats[x as usize])
                .into_iter()
                .fold(p.bottom().expect("bounded"), |acc, i| self.join(acc, self.atom(i)));
            if atoms_join != x {
                return Err(GeomlatError::NotGeometric(format!("{} is not a join of atoms", p.name(x))));
            }
            for &y in p.ids() {
                let (j, m) = (self.join(x, y), self.meet(x, y));
                if p.rank(x) + p.rank(y) < p.rank(j) + p.rank(m) {
                    return Err(GeomlatError::NotGeometric(format!(
                        "semimodularity fails for {} and {}",
                        p.name(x),
                        p.name(y)
                    )));
                }
            }
        }
        Ok(())
    }

    /// `ν(x, y) = min { i : x ∨ a_i = y }`.
    pub fn minimal_labeling(&self) -> EdgeLabeling {
        self.poset
            .covers()
            .into_iter()
            .map(|(x, y)| {
                let i = (1..=self.matroid.n).find(|&i| self.join(x, self.atom(i)) == y).expect("atomic lattice");
                ((x, y), i as i64)
            })
            .collect()
    }

    /// `P_j`: joins of subsets of `basis`, labeled by the atom added.
    pub fn basis_subposet(&self, basis: &[usize]) -> Result<(RankedPoset, EdgeLabeling), GeomlatError> {
        if !self.matroid.is_basis(basis) {
            return Err(GeomlatError::NotABasis(basis.to_vec()));
        }
        let b = to_mask(basis);
        let mut ids = BTreeSet::new();
        let mut lambda = EdgeLabeling::new();
        let mut sub = b;
        loop {
            let x = self.ids[&self.matroid.closure_mask(sub)];
            ids.insert(x);
            for i in members(b & !sub) {
                let y = self.ids[&self.matroid.closure_mask(sub | 1 << (i - 1))];
                lambda.insert(x, y, i as i64);
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & b;
        }
        let poset = self.poset.induced_subposet(&ids)?;
        Ok((poset, lambda))
    }

    /// One Boolean piece per nbc-basis, in lexicographic basis order.
    pub fn nbc_pieces(&self) -> Result<Vec<(RankedPoset, EdgeLabeling)>, GeomlatError> {
        self.matroid.nbc_bases().iter().map(|b| self.basis_subposet(b)).collect()
    }

    /// First maximal chain whose `ν`-label letters do not form an nbc-basis.
    pub fn nu_word_outside_nbc(&self, nu: &EdgeLabeling) -> Option<Chain> {
        let nbc: BTreeSet<Vec<usize>> = self.matroid.nbc_bases().into_iter().collect();
        self.poset.maximal_chains().into_iter().find(|c| {
            let word = nu.word(c).expect("total labeling");
            let letters: Vec<usize> = word.iter().map(|&l| l as usize).sorted().dedup().collect();
            letters.len() != word.len() || !nbc.contains(&letters)
        })
    }
}

/// A maximal chain of piece `i` (0-based) where "not in any earlier piece"
/// and "`λ_i(c) = ν(c)`" disagree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LabelAgreementViolation {
    pub piece: usize,
    pub chain: Chain,
    pub new_in_piece: bool,
    pub labels_agree: bool,
}

/// Checks chain by chain that a maximal chain of `P_i` is new at `i` exactly
/// when its piece label equals its `ν`-label.
pub fn label_agreement_violation(
    pieces: &[(RankedPoset, EdgeLabeling)],
    nu: &EdgeLabeling,
) -> Option<LabelAgreementViolation> {
    for (i, (p, lambda)) in pieces.iter().enumerate() {
        for c in p.maximal_chains() {
            let new_in_piece = !pieces[..i].iter().any(|(q, _)| c.iter().all(|&x| q.contains(x)));
            let labels_agree = lambda.word(&c).ok() == nu.word(&c).ok();
            if new_in_piece != labels_agree {
                return Some(LabelAgreementViolation { piece: i, chain: c, new_in_piece, labels_agree });
            }
        }
    }
    None
}

pub fn check_label_agreement(pieces: &[(RankedPoset, EdgeLabeling)], nu: &EdgeLabeling) -> bool {
    label_agreement_violation(pieces, nu).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::{boolean_lattice, flag_h, is_sd_el, verify_el_labeling};

    #[test]
    fn validation() {
        assert!(matches!(Matroid::new(3, &[vec![1, 2], vec![3]]), Err(GeomlatError::NotAMatroid(_))));
        // {1,2} and {3,4}: exchanging 1 into {3,4} needs {2,3} or {2,4}
        assert!(matches!(Matroid::new(4, &[vec![1, 2], vec![3, 4]]), Err(GeomlatError::NotAMatroid(_))));
        assert!(matches!(Matroid::new(2, &[vec![1, 3]]), Err(GeomlatError::NotAMatroid(_))));
        let with_loop = Matroid::new(3, &[vec![1, 2]]).unwrap();
        assert!(matches!(lattice_of_flats(&with_loop), Err(GeomlatError::NotSimple(_))));
        let parallel = Matroid::new(3, &[vec![1, 3], vec![2, 3]]).unwrap();
        assert!(matches!(lattice_of_flats(&parallel), Err(GeomlatError::NotSimple(_))));
    }

    #[test]
    fn free_matroid_gives_boolean_lattice() {
        let lat = lattice_of_flats(&Matroid::free(3)).unwrap();
        let b = boolean_lattice(3);
        assert_eq!(lat.poset.len(), 8);
        assert_eq!(flag_h(&lat.poset), flag_h(&b.poset));
        let nu = lat.minimal_labeling();
        let x = lat.id_of(&[2]).unwrap();
        assert_eq!(nu.get(x, lat.id_of(&[1, 2]).unwrap()), Some(1));
        assert_eq!(nu.get(x, lat.id_of(&[2, 3]).unwrap()), Some(3));
        assert_eq!(Matroid::free(3).nbc_bases(), vec![vec![1, 2, 3]]);
        let (p, lambda) = lat.basis_subposet(&[1, 2, 3]).unwrap();
        assert_eq!(p.len(), 8);
        assert_eq!(lambda, nu);
    }

    #[test]
    fn u23() {
        let m = Matroid::uniform(2, 3);
        let lat = lattice_of_flats(&m).unwrap();
        assert_eq!(lat.poset.len(), 5);
        assert_eq!(lat.poset.d(), 2);
        let nu = lat.minimal_labeling();
        let top = lat.poset.top().unwrap();
        let bot = lat.poset.bottom().unwrap();
        assert_eq!(nu.get(lat.atom(2), top), Some(1));
        assert_eq!(nu.get(bot, lat.atom(3)), Some(3));
        assert!(verify_el_labeling(&lat.poset, &nu));
        assert_eq!(m.circuits(), vec![vec![1, 2, 3]]);
        assert_eq!(m.nbc_bases(), vec![vec![1, 2], vec![1, 3]]);

        let (p1, l1) = lat.basis_subposet(&[1, 2]).unwrap();
        assert_eq!(p1.len(), 4);
        assert_eq!(l1.word(&[bot, lat.atom(2), top]).unwrap(), vec![2, 1]);
        assert!(is_sd_el(&p1, &l1));
        assert!(lat.nu_word_outside_nbc(&nu).is_none());

        let pieces = lat.nbc_pieces().unwrap();
        assert!(check_label_agreement(&pieces, &nu));
        assert!(matches!(lat.basis_subposet(&[1]), Err(GeomlatError::NotABasis(_))));
    }

    #[test]
    fn k4_graphic() {
        let m = Matroid::complete_graph(4);
        assert_eq!(m.ground_size(), 6);
        assert_eq!(m.rank(), 3);
        assert_eq!(m.bases().count(), 16);
        let lat = lattice_of_flats(&m).unwrap();
        assert_eq!(lat.poset.elements_of_rank(1).count(), 6);
        // 6 atoms, 7 rank-2 flats (4 triangles and 3 matchings)
        assert_eq!(lat.poset.elements_of_rank(2).count(), 7);
        assert_eq!(lat.poset.len(), 15);
        assert_eq!(m.nbc_bases().len(), 6);
        let nu = lat.minimal_labeling();
        assert!(verify_el_labeling(&lat.poset, &nu));
        assert!(lat.nu_word_outside_nbc(&nu).is_none());
        let pieces = lat.nbc_pieces().unwrap();
        for (p, l) in &pieces {
            assert!(is_sd_el(p, l));
        }
        assert!(check_label_agreement(&pieces, &nu));
    }

    /// `|μ(0̂,1̂)|` by the defining recursion, an independent count of the nbc
    /// bases.
    fn mobius_top(p: &RankedPoset) -> i64 {
        let bot = p.bottom().unwrap();
        let mut mu: HashMap<ElemId, i64> = HashMap::new();
        for &x in p.ids() {
            let v = if x == bot {
                1
            } else {
                -p.ids().iter().filter(|&&y| y != x && p.leq(y, x)).map(|y| mu[y]).sum::<i64>()
            };
            mu.insert(x, v);
        }
        mu[&p.top().unwrap()].abs()
    }

    #[test]
    fn nbc_count_matches_mobius() {
        for m in [Matroid::uniform(2, 3), Matroid::uniform(3, 4), Matroid::uniform(3, 5), Matroid::complete_graph(4)] {
            let lat = lattice_of_flats(&m).unwrap();
            assert_eq!(m.nbc_bases().len() as i64, mobius_top(&lat.poset));
        }
    }

    #[test]
    fn json_round_trip() {
        let m = Matroid::uniform(2, 4);
        let text = serde_json::to_string(&m.to_json()).unwrap();
        assert_eq!(Matroid::from_json(&serde_json::from_str(&text).unwrap()).unwrap(), m);
    }
}
