//! Closed-form counts used as independent checks on the enumerators.

/// `binom(n, k)`, exact.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is always divisible by (i + 1) at this point
        acc = acc * u128::from(n - i) / u128::from(i + 1);
    }
    acc
}

/// The Catalan number `C_m = binom(2m, m) / (m + 1)`.
pub fn catalan(m: u64) -> u128 {
    binomial(2 * m, m) / u128::from(m + 1)
}

/// Number of plane binary trees with `n + 2` endpoints.
pub fn tree_count(n: usize) -> u128 {
    catalan(n as u64 + 1)
}

/// Number of marked trees with `n + 2` endpoints (n >= 1).
pub fn marked_tree_count(n: usize) -> u128 {
    binomial(2 * n as u64, n as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalan_prefix() {
        let got: Vec<u128> = (0..12).map(catalan).collect();
        assert_eq!(got, [1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796, 58786]);
    }

    #[test]
    fn central_binomials() {
        let got: Vec<u128> = (1..=5).map(marked_tree_count).collect();
        assert_eq!(got, [2, 6, 20, 70, 252]);
        assert_eq!(binomial(3, 5), 0);
    }
}
