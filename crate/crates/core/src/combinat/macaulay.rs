//! Macaulay's characterization of M-vectors (O-sequences).

fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// The `i`-binomial (Macaulay) representation
/// `m = C(a_i, i) + C(a_{i-1}, i-1) + … + C(a_j, j)` with
/// `a_i > a_{i-1} > … > a_j ≥ j ≥ 1`, returned as `(a_k, k)` pairs.
pub fn macaulay_representation(mut m: u64, i: u64) -> Vec<(u64, u64)> {
    assert!(i >= 1);
    let mut out = Vec::new();
    let mut k = i;
    while m > 0 && k >= 1 {
        let mut a = k;
        while binomial(a + 1, k) <= m as u128 {
            a += 1;
        }
        m -= binomial(a, k) as u64;
        out.push((a, k));
        k -= 1;
    }
    out
}

/// `m^<i>`: raise every top and bottom index of the representation by one.
pub fn pseudopower(m: u64, i: u64) -> u128 {
    macaulay_representation(m, i).into_iter().map(|(a, k)| binomial(a + 1, k + 1)).sum()
}

/// Is `v` the degree sequence of an order ideal of monomials? The empty
/// vector is accepted; otherwise `v[0]` must be 1 and every
/// `v[i+1] ≤ v[i]^<i>` for `i ≥ 1`.
pub fn is_m_vector(v: &[i64]) -> bool {
    if v.is_empty() {
        return true;
    }
    if v[0] != 1 || v.iter().any(|&x| x < 0) {
        return false;
    }
    (1..v.len().saturating_sub(1)).all(|i| v[i + 1] as u128 <= pseudopower(v[i] as u64, i as u64))
}
