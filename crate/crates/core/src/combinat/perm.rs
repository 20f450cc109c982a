use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::{Serialize, Serializer};

use super::{CombinatError, RankSet};

/// A permutation of `[d]` in one-line notation `σ(1)σ(2)…σ(d)`.
///
/// Ordered lexicographically by its word.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<u32>);

impl Perm {
    pub fn new(word: Vec<u32>) -> Result<Self, CombinatError> {
        let d = word.len();
        let mut seen = vec![false; d + 1];
        for &x in &word {
            let x = x as usize;
            if x == 0 || x > d || seen[x] {
                return Err(CombinatError::InvalidPerm { d, word });
            }
            seen[x] = true;
        }
        Ok(Perm(word))
    }

    pub fn identity(d: usize) -> Self {
        Perm((1..=d as u32).collect())
    }

    /// Standardizes a word of distinct integers to the permutation with the
    /// same relative order (`[4, 7, 2]` becomes `231`).
    pub fn standardize(word: &[i64]) -> Result<Self, CombinatError> {
        let mut sorted = word.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != word.len() {
            return Err(CombinatError::Parse(format!("{word:?} has repeated letters")));
        }
        let std = word.iter().map(|x| sorted.binary_search(x).expect("present") as u32 + 1).collect();
        Ok(Perm(std))
    }

    /// All of `S_d` in lexicographic order.
    pub fn all(d: usize) -> Vec<Perm> {
        (1..=d as u32).permutations(d).map(Perm).collect()
    }

    pub fn d(&self) -> usize {
        self.0.len()
    }

    pub fn word(&self) -> &[u32] {
        &self.0
    }

    pub fn descent_set(&self) -> RankSet {
        descent_set(self)
    }

    pub fn inversion_count(&self) -> usize {
        let w = &self.0;
        (0..w.len()).flat_map(|i| (i + 1..w.len()).map(move |j| (i, j))).filter(|&(i, j)| w[i] > w[j]).count()
    }

    /// Permutations reachable by one switch: interchanging adjacent entries
    /// `σ(i) < σ(i+1)`.
    pub fn switches(&self) -> impl Iterator<Item = Perm> + '_ {
        (0..self.d().saturating_sub(1)).filter(|&i| self.0[i] < self.0[i + 1]).map(|i| {
            let mut w = self.0.clone();
            w.swap(i, i + 1);
            Perm(w)
        })
    }
}

/// Positions `i` (1-based) with `σ(i) > σ(i+1)`.
pub fn descent_set(p: &Perm) -> RankSet {
    let w = p.word();
    let d = w.len().max(1);
    RankSet::new(d, (1..w.len()).filter(|&i| w[i - 1] > w[i])).expect("positions lie in [d-1]")
}

/// `D_S^d`: permutations of `[d]` whose descent set is exactly `S`, in
/// lexicographic order.
pub fn descent_class(s: &RankSet) -> Vec<Perm> {
    Perm::all(s.d()).into_iter().filter(|p| descent_set(p) == *s).collect()
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.d() <= 9 {
            for x in &self.0 {
                write!(f, "{x}")?;
            }
            Ok(())
        } else {
            write!(f, "{}", self.0.iter().join("-"))
        }
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm({self})")
    }
}

impl FromStr for Perm {
    type Err = CombinatError;

    /// Accepts `"2134"` (single digits) or `"10-2-1-…"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CombinatError::Parse(s.to_string());
        let word: Vec<u32> = if s.contains('-') {
            s.split('-').map(|x| x.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?
        } else {
            s.chars().map(|c| c.to_digit(10).ok_or_else(bad)).collect::<Result<_, _>>()?
        };
        Perm::new(word)
    }
}

impl Serialize for Perm {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Perm {
        s.parse().unwrap()
    }

    fn rs(d: usize, m: &[usize]) -> RankSet {
        RankSet::new(d, m.iter().copied()).unwrap()
    }

    #[test]
    fn descent_examples() {
        assert!(descent_set(&p("1234")).is_empty());
        assert_eq!(descent_set(&p("2134")), rs(4, &[1]));
    }

    #[test]
    fn descent_class_13_in_s4_by_enumeration() {
        // independent count over all 24 words
        let mut count = 0;
        for w in (1..=4u32).permutations(4) {
            if w[0] > w[1] && w[1] < w[2] && w[2] > w[3] {
                count += 1;
            }
        }
        assert_eq!(count, 5);
        assert_eq!(descent_class(&rs(4, &[1, 3])).len(), count);
    }

    #[test]
    fn descent_class_examples() {
        assert_eq!(descent_class(&rs(3, &[1, 2])), vec![p("321")]);
        assert_eq!(descent_class(&rs(3, &[])), vec![p("123")]);
        assert_eq!(descent_class(&rs(4, &[1])), vec![p("2134"), p("3124"), p("4123")]);
    }

    #[test]
    fn descent_classes_partition_sd() {
        for d in 1..=6 {
            let total: usize = RankSet::all(d).map(|s| descent_class(&s).len()).sum();
            assert_eq!(total, (1..=d).product::<usize>());
        }
    }

    #[test]
    fn rejects_non_permutations() {
        assert!(Perm::new(vec![1, 1, 2]).is_err());
        assert!(Perm::new(vec![0, 1]).is_err());
        assert!(Perm::new(vec![1, 3]).is_err());
    }

    #[test]
    fn standardize_words() {
        assert_eq!(Perm::standardize(&[4, 7, 2]).unwrap(), p("231"));
        assert!(Perm::standardize(&[1, 1]).is_err());
    }
}
