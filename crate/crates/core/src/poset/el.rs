use std::collections::BTreeMap;

use serde::Serialize;

use super::{Chain, EdgeLabeling, ElemId, PosetError, RankedPoset};

/// Why a labeling fails to be an (S_d-)EL-labeling, with the interval or
/// chain that shows it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum ElViolation {
    MissingLabel { x: ElemId, y: ElemId },
    IncreasingChains { x: ElemId, y: ElemId, count: usize },
    NotLexFirst { x: ElemId, y: ElemId, increasing: Vec<i64>, earlier: Vec<i64> },
    NotBounded,
    NotAPermutation { chain: Chain, word: Vec<i64>, alphabet: Vec<i64> },
}

#[derive(Default)]
struct IntervalStats {
    increasing: usize,
    increasing_word: Vec<i64>,
    min_word: Option<Vec<i64>>,
}

fn is_increasing(w: &[i64]) -> bool {
    w.windows(2).all(|p| p[0] < p[1])
}

/// First violation of the EL conditions over all intervals `[x, y]`, `x < y`.
pub fn el_violation(p: &RankedPoset, lambda: &EdgeLabeling) -> Option<ElViolation> {
    if let Err(PosetError::MissingLabel(x, y)) = lambda.is_total_on(p) {
        return Some(ElViolation::MissingLabel { x, y });
    }
    for &x in p.ids() {
        // every saturated chain starting at x, grouped by its top
        let mut stats: BTreeMap<ElemId, IntervalStats> = BTreeMap::new();
        let mut word = Vec::new();
        fn walk(
            p: &RankedPoset,
            lambda: &EdgeLabeling,
            x: ElemId,
            word: &mut Vec<i64>,
            stats: &mut BTreeMap<ElemId, IntervalStats>,
        ) {
            for y in p.up_covers(x) {
                word.push(lambda.get(x, y).expect("total"));
                let st = stats.entry(y).or_default();
                if is_increasing(word) {
                    st.increasing += 1;
                    st.increasing_word = word.clone();
                }
                if st.min_word.as_ref().is_none_or(|m| *word < *m) {
                    st.min_word = Some(word.clone());
                }
                walk(p, lambda, y, word, stats);
                word.pop();
            }
        }
        walk(p, lambda, x, &mut word, &mut stats);
        for (y, st) in stats {
            if st.increasing != 1 {
                return Some(ElViolation::IncreasingChains { x, y, count: st.increasing });
            }
            let min = st.min_word.expect("at least one chain");
            if min != st.increasing_word {
                return Some(ElViolation::NotLexFirst { x, y, increasing: st.increasing_word, earlier: min });
            }
        }
    }
    None
}

pub fn verify_el_labeling(p: &RankedPoset, lambda: &EdgeLabeling) -> bool {
    el_violation(p, lambda).is_none()
}

/// EL plus: every maximal chain reads a permutation of the alphabet, which
/// is the letter set of the increasing maximal chain.
pub fn sd_el_violation(p: &RankedPoset, lambda: &EdgeLabeling) -> Option<ElViolation> {
    if let Some(v) = el_violation(p, lambda) {
        return Some(v);
    }
    let (Some(bot), Some(top)) = (p.bottom(), p.top()) else {
        return Some(ElViolation::NotBounded);
    };
    let chains = p.saturated_chains(bot, top);
    let words: Vec<Vec<i64>> = chains.iter().map(|c| lambda.word(c).expect("total")).collect();
    let Some(alphabet) = words.iter().find(|w| is_increasing(w)).cloned() else {
        return Some(ElViolation::IncreasingChains { x: bot, y: top, count: 0 });
    };
    for (c, w) in chains.iter().zip(words) {
        let mut sorted = w.clone();
        sorted.sort_unstable();
        if sorted != alphabet {
            return Some(ElViolation::NotAPermutation { chain: c.clone(), word: w, alphabet });
        }
    }
    None
}

pub fn is_sd_el(p: &RankedPoset, lambda: &EdgeLabeling) -> bool {
    sd_el_violation(p, lambda).is_none()
}

/// Unique saturated chain from `x` to `y` with strictly increasing label.
fn increasing_chain(p: &RankedPoset, lambda: &EdgeLabeling, x: ElemId, y: ElemId) -> Result<Chain, PosetError> {
    let mut found: Vec<Chain> = Vec::new();
    let mut stack = vec![x];
    fn rec(
        p: &RankedPoset,
        lambda: &EdgeLabeling,
        y: ElemId,
        last: Option<i64>,
        stack: &mut Vec<ElemId>,
        found: &mut Vec<Chain>,
    ) -> Result<(), PosetError> {
        let cur = *stack.last().expect("nonempty");
        if cur == y {
            found.push(stack.clone());
            return Ok(());
        }
        for z in p.up_covers(cur).collect::<Vec<_>>() {
            if !p.leq(z, y) {
                continue;
            }
            let l = lambda.get(cur, z).ok_or(PosetError::MissingLabel(cur, z))?;
            if last.is_some_and(|prev| l <= prev) {
                continue;
            }
            stack.push(z);
            rec(p, lambda, y, Some(l), stack, found)?;
            stack.pop();
            if found.len() > 1 {
                break;
            }
        }
        Ok(())
    }
    rec(p, lambda, y, None, &mut stack, &mut found)?;
    if found.len() != 1 {
        return Err(PosetError::NotELLabeling(x, y));
    }
    Ok(found.pop().expect("one chain"))
}

/// `Υ_λ(e)`: the maximal chain through `e ∪ {0̂, 1̂}` that is increasing on
/// every gap of `e`.
pub fn upsilon(p: &RankedPoset, lambda: &EdgeLabeling, chain: &[ElemId]) -> Result<Chain, PosetError> {
    let (Some(bot), Some(top)) = (p.bottom(), p.top()) else {
        return Err(PosetError::NotBounded);
    };
    let mut e: Vec<ElemId> = chain.to_vec();
    e.sort_unstable();
    e.dedup();
    if e.first() != Some(&bot) {
        e.insert(0, bot);
    }
    if e.last() != Some(&top) {
        e.push(top);
    }
    if !p.is_chain(&e) {
        return Err(PosetError::NotAChain(chain.to_vec()));
    }
    let mut out = vec![bot];
    for w in e.windows(2) {
        let (x, y) = (w[0], w[1]);
        if p.rank(y) == p.rank(x) + 1 {
            out.push(y);
        } else {
            out.extend_from_slice(&increasing_chain(p, lambda, x, y)?[1..]);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::{boolean_lattice, Element};
    use super::*;

    #[test]
    fn boolean_standard_labeling_is_sd_el() {
        for d in 1..=4 {
            let b = boolean_lattice(d);
            assert!(verify_el_labeling(&b.poset, &b.labeling));
            assert!(is_sd_el(&b.poset, &b.labeling));
        }
    }

    #[test]
    fn b2_with_equal_labels_fails() {
        let b = boolean_lattice(2);
        let mut lambda = b.labeling.clone();
        let (bot, a1, a2, top) = (b.id(&[]), b.id(&[1]), b.id(&[2]), b.id(&[1, 2]));
        lambda.insert(bot, a1, 1);
        lambda.insert(bot, a2, 1);
        lambda.insert(a1, top, 2);
        lambda.insert(a2, top, 2);
        assert!(matches!(el_violation(&b.poset, &lambda), Some(ElViolation::IncreasingChains { count: 2, .. })));
        assert!(upsilon(&b.poset, &lambda, &[]).is_err());
    }

    #[test]
    fn missing_label_reported() {
        let b = boolean_lattice(2);
        let lambda: EdgeLabeling = b.labeling.iter().skip(1).collect();
        assert!(matches!(el_violation(&b.poset, &lambda), Some(ElViolation::MissingLabel { .. })));
    }

    #[test]
    fn upsilon_examples() {
        let b = boolean_lattice(3);
        let inc = upsilon(&b.poset, &b.labeling, &[]).unwrap();
        assert_eq!(inc, vec![b.id(&[]), b.id(&[1]), b.id(&[1, 2]), b.id(&[1, 2, 3])]);

        let full = vec![b.id(&[]), b.id(&[3]), b.id(&[1, 3]), b.id(&[1, 2, 3])];
        assert_eq!(upsilon(&b.poset, &b.labeling, &full).unwrap(), full);

        let e = [b.id(&[]), b.id(&[2]), b.id(&[1, 2, 3])];
        assert_eq!(
            upsilon(&b.poset, &b.labeling, &e).unwrap(),
            vec![b.id(&[]), b.id(&[2]), b.id(&[1, 2]), b.id(&[1, 2, 3])]
        );
        // idempotent
        let once = upsilon(&b.poset, &b.labeling, &[b.id(&[3])]).unwrap();
        assert_eq!(upsilon(&b.poset, &b.labeling, &once).unwrap(), once);
    }

    #[test]
    fn upsilon_rejects_non_chains() {
        let b = boolean_lattice(3);
        assert!(matches!(upsilon(&b.poset, &b.labeling, &[b.id(&[1]), b.id(&[2])]), Err(PosetError::NotAChain(_))));
    }

    #[test]
    fn unbounded_is_not_sd_el() {
        let e = |id, rank| Element { id, rank, name: String::new() };
        let p = RankedPoset::new(vec![e(0, 0), e(1, 0), e(2, 1)], [(0, 2), (1, 2)]).unwrap();
        let lambda: EdgeLabeling = [((0, 2), 1), ((1, 2), 2)].into_iter().collect();
        assert!(verify_el_labeling(&p, &lambda));
        assert_eq!(sd_el_violation(&p, &lambda), Some(ElViolation::NotBounded));
    }
}
