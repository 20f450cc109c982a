//! Invariant factors of integer matrices.

use std::collections::{BTreeMap, BTreeSet};

use super::TopologyError;

/// Sparse integer matrix in row-major form.
#[derive(Debug, Clone, Default)]
pub struct SparseMatrix {
    rows: Vec<BTreeMap<usize, i128>>,
    ncols: usize,
}

impl SparseMatrix {
    pub fn new(nrows: usize, ncols: usize) -> Self {
        SparseMatrix { rows: vec![BTreeMap::new(); nrows], ncols }
    }

    pub fn set(&mut self, r: usize, c: usize, v: i128) {
        assert!(c < self.ncols);
        if v == 0 {
            self.rows[r].remove(&c);
        } else {
            self.rows[r].insert(c, v);
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }
}

/// Nonzero invariant factors (the nonzero diagonal of the Smith normal
/// form), ascending. Their count is the rank.
pub fn invariant_factors(m: &SparseMatrix) -> Result<Vec<u128>, TopologyError> {
    let mut rows = m.rows.clone();
    let mut cols: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m.ncols];
    for (r, row) in rows.iter().enumerate() {
        for &c in row.keys() {
            cols[c].insert(r);
        }
    }
    let mut alive = vec![true; rows.len()];
    let mut units = 0usize;

    // Pivot on unit entries: clear the pivot column with row operations, then
    // the pivot row can be cleared by column operations touching only itself.
    loop {
        let mut progressed = false;
        for r in 0..rows.len() {
            if !alive[r] {
                continue;
            }
            let Some((&c, &u)) = rows[r].iter().find(|(_, v)| v.abs() == 1) else {
                continue;
            };
            let pivot_row = std::mem::take(&mut rows[r]);
            for &c2 in pivot_row.keys() {
                cols[c2].remove(&r);
            }
            let others: Vec<usize> = cols[c].iter().copied().collect();
            for r2 in others {
                let factor = rows[r2][&c] * u;
                for (&c2, &v) in &pivot_row {
                    let cur = rows[r2].get(&c2).copied().unwrap_or(0);
                    let next = cur
                        .checked_sub(factor.checked_mul(v).ok_or(TopologyError::Overflow)?)
                        .ok_or(TopologyError::Overflow)?;
                    if next == 0 {
                        rows[r2].remove(&c2);
                        cols[c2].remove(&r2);
                    } else {
                        if cur == 0 {
                            cols[c2].insert(r2);
                        }
                        rows[r2].insert(c2, next);
                    }
                }
            }
            alive[r] = false;
            units += 1;
            progressed = true;
        }
        if !progressed {
            break;
        }
    }

    // Whatever is left has no unit entries; finish densely.
    let live_rows: Vec<usize> = (0..rows.len()).filter(|&r| alive[r] && !rows[r].is_empty()).collect();
    let live_cols: Vec<usize> = (0..m.ncols).filter(|&c| !cols[c].is_empty()).collect();
    let mut factors = vec![1u128; units];
    if !live_rows.is_empty() {
        let col_index: BTreeMap<usize, usize> = live_cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut dense = vec![vec![0i128; live_cols.len()]; live_rows.len()];
        for (i, &r) in live_rows.iter().enumerate() {
            for (&c, &v) in &rows[r] {
                dense[i][col_index[&c]] = v;
            }
        }
        factors.extend(dense_invariant_factors(dense)?);
    }
    factors.sort_unstable();
    Ok(factors)
}

/// Classic elimination to Smith normal form on a dense matrix.
#[allow(clippy::needless_range_loop)] // row operations read one row while writing another
pub fn dense_invariant_factors(mut a: Vec<Vec<i128>>) -> Result<Vec<u128>, TopologyError> {
    let nr = a.len();
    let nc = a.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    let mut t = 0;
    while t < nr.min(nc) {
        // smallest nonzero entry of the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..nr {
            for j in t..nc {
                if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let p = a[t][t];
            let mut dirty = false;
            for i in t + 1..nr {
                let q = a[i][t] / p;
                if q != 0 {
                    for j in t..nc {
                        a[i][j] = a[i][j]
                            .checked_sub(q.checked_mul(a[t][j]).ok_or(TopologyError::Overflow)?)
                            .ok_or(TopologyError::Overflow)?;
                    }
                }
                if a[i][t] != 0 {
                    dirty = true;
                }
            }
            for j in t + 1..nc {
                let q = a[t][j] / p;
                if q != 0 {
                    for row in a.iter_mut().skip(t) {
                        row[j] = row[j]
                            .checked_sub(q.checked_mul(row[t]).ok_or(TopologyError::Overflow)?)
                            .ok_or(TopologyError::Overflow)?;
                    }
                }
                if a[t][j] != 0 {
                    dirty = true;
                }
            }
            if !dirty {
                // pivot must divide the rest of the block
                let bad = (t + 1..nr).flat_map(|i| (t + 1..nc).map(move |j| (i, j))).find(|&(i, j)| a[i][j] % p != 0);
                match bad {
                    None => break,
                    Some((i, _)) => {
                        for j in t..nc {
                            a[t][j] = a[t][j].checked_add(a[i][j]).ok_or(TopologyError::Overflow)?;
                        }
                        continue;
                    }
                }
            }
            // move the smallest remaining entry in row/column t to the pivot
            let mut bi = (t, t);
            for i in t..nr {
                if a[i][t] != 0 && a[i][t].abs() < a[bi.0][bi.1].abs() {
                    bi = (i, t);
                }
            }
            for j in t..nc {
                if a[t][j] != 0 && a[t][j].abs() < a[bi.0][bi.1].abs() {
                    bi = (t, j);
                }
            }
            if bi.0 != t {
                a.swap(t, bi.0);
            }
            if bi.1 != t {
                for row in a.iter_mut() {
                    row.swap(t, bi.1);
                }
            }
        }
        out.push(a[t][t].unsigned_abs());
        t += 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn from_dense(rows: &[&[i128]]) -> SparseMatrix {
        let mut m = SparseMatrix::new(rows.len(), rows[0].len());
        for (i, r) in rows.iter().enumerate() {
            for (j, &v) in r.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    #[test]
    fn diagonal_with_torsion() {
        let m = from_dense(&[&[2, 0], &[0, 3]]);
        // diag(2,3) ~ diag(1,6)
        assert_eq!(invariant_factors(&m).unwrap(), vec![1, 6]);
    }

    #[test]
    fn rank_deficient() {
        let m = from_dense(&[&[1, 2, 3], &[2, 4, 6], &[1, 1, 1]]);
        assert_eq!(invariant_factors(&m).unwrap(), vec![1, 1]);
    }

    #[test]
    fn dense_agrees_on_classic_example() {
        let a = vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]];
        assert_eq!(dense_invariant_factors(a).unwrap(), vec![2, 6, 12]);
    }

    #[test]
    fn zero_matrix() {
        assert!(invariant_factors(&SparseMatrix::new(3, 2)).unwrap().is_empty());
        assert!(invariant_factors(&SparseMatrix::new(0, 0)).unwrap().is_empty());
    }
}
