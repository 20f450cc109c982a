use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use super::CombinatError;

/// A subset of `{1, ..., d-1}`: the ranks strictly between `0̂` and `1̂`
/// of a rank-`d` poset, or the descent positions of a word of length `d`.
///
/// Ordered by `d` first and then lexicographically by sorted member list, so
/// `{1} < {1,2} < {1,3} < {2}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct RankSet {
    d: usize,
    // member i <-> bit i-1
    bits: u64,
}

impl RankSet {
    pub const MAX_D: usize = 63;

    pub fn new(d: usize, members: impl IntoIterator<Item = usize>) -> Result<Self, CombinatError> {
        if d == 0 || d > Self::MAX_D {
            return Err(CombinatError::BadDimension(d));
        }
        let mut bits = 0u64;
        for m in members {
            if m == 0 || m >= d {
                return Err(CombinatError::OutOfRange { d, member: m });
            }
            bits |= 1 << (m - 1);
        }
        Ok(RankSet { d, bits })
    }

    pub fn empty(d: usize) -> Self {
        Self::new(d, []).expect("valid d")
    }

    /// `[d-1]`.
    pub fn full(d: usize) -> Self {
        Self::from_mask(d, (1u64 << (d - 1)) - 1)
    }

    /// Builds from a compact mask where member `i` is bit `i-1`.
    pub fn from_mask(d: usize, mask: u64) -> Self {
        assert!((1..=Self::MAX_D).contains(&d));
        assert!(mask >> (d - 1) == 0, "mask {mask:#b} exceeds [d-1] for d = {d}");
        RankSet { d, bits: mask }
    }

    pub fn mask(&self) -> u64 {
        self.bits
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn contains(&self, i: usize) -> bool {
        i >= 1 && i < self.d && self.bits & (1 << (i - 1)) != 0
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn members(&self) -> Vec<usize> {
        (1..self.d).filter(|&i| self.contains(i)).collect()
    }

    /// `[d-1] \ S`.
    pub fn complement(&self) -> Self {
        Self::from_mask(self.d, !self.bits & Self::full(self.d).bits)
    }

    pub fn is_subset(&self, other: &RankSet) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn union(&self, other: &RankSet) -> Self {
        Self::from_mask(self.d, self.bits | other.bits)
    }

    pub fn difference(&self, other: &RankSet) -> Self {
        Self::from_mask(self.d, self.bits & !other.bits)
    }

    /// All `2^(d-1)` subsets of `[d-1]`, in mask order.
    pub fn all(d: usize) -> impl Iterator<Item = RankSet> {
        (0..1u64 << (d - 1)).map(move |m| RankSet::from_mask(d, m))
    }

    /// All subsets of `self`.
    pub fn subsets(&self) -> impl Iterator<Item = RankSet> + '_ {
        let full = self.bits;
        let d = self.d;
        // standard submask enumeration, ascending
        let mut next = Some(0u64);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full { None } else { Some(((cur | !full).wrapping_add(1)) & full) };
            Some(RankSet::from_mask(d, cur))
        })
    }

    /// Parses `"1,3"`, `"{1,3}"` or `""`/`"{}"` for the empty set.
    pub fn parse(d: usize, text: &str) -> Result<Self, CombinatError> {
        let inner = text.trim().trim_start_matches('{').trim_end_matches('}');
        let mut members = Vec::new();
        for part in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            members.push(part.parse::<usize>().map_err(|_| CombinatError::Parse(text.to_string()))?);
        }
        Self::new(d, members)
    }
}

impl Ord for RankSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.d.cmp(&other.d).then_with(|| self.members().cmp(&other.members()))
    }
}

impl PartialOrd for RankSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for RankSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, m) in self.members().iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for RankSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}⊆[{}]", self.d - 1)
    }
}

impl FromStr for RankSet {
    type Err = CombinatError;

    /// `"d:1,3"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (d, rest) = s.split_once(':').ok_or_else(|| CombinatError::Parse(s.to_string()))?;
        let d = d.trim().parse().map_err(|_| CombinatError::Parse(s.to_string()))?;
        Self::parse(d, rest)
    }
}

impl Serialize for RankSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.members().serialize(serializer)
    }
}
