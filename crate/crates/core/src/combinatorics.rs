//! Small exact counting helpers.

/// `C(n, k)` as an exact integer (saturates at `u128::MAX`).
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

pub fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Least common multiple, `None` on overflow.
pub fn lcm(a: u128, b: u128) -> Option<u128> {
    if a == 0 || b == 0 {
        return Some(0);
    }
    (a / gcd(a, b)).checked_mul(b)
}

/// Calls `f` on every `k`-subset of `0..n` in lexicographic order.
pub fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut pos = k;
        while pos > 0 && idx[pos - 1] == n - k + pos - 1 {
            pos -= 1;
        }
        if pos == 0 {
            return;
        }
        idx[pos - 1] += 1;
        for q in pos..k {
            idx[q] = idx[q - 1] + 1;
        }
    }
}

/// Lexicographic rank of a sorted `k`-subset of `0..n`.
pub fn subset_rank(n: usize, subset: &[usize]) -> u128 {
    let k = subset.len();
    let mut rank = 0u128;
    let mut prev = 0usize;
    for (i, &s) in subset.iter().enumerate() {
        for v in prev..s {
            rank += binomial((n - v - 1) as u64, (k - i - 1) as u64);
        }
        prev = s + 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(40, 4), 91_390);
        assert_eq!(binomial(60, 4), 487_635);
        assert_eq!(binomial(5, 7), 0);
        assert_eq!(binomial(0, 0), 1);
    }

    #[test]
    fn subset_enumeration_is_ranked() {
        let mut seen = 0u128;
        for_each_subset(7, 3, |s| {
            assert_eq!(subset_rank(7, s), seen);
            seen += 1;
        });
        assert_eq!(seen, binomial(7, 3));
    }

    #[test]
    fn lcm_overflow_is_detected() {
        assert_eq!(lcm(4, 6), Some(12));
        assert_eq!(lcm(u128::MAX, 2), None);
    }
}
