//! Binomial coefficients and the colexicographic ranking of bit-set
//! combinations.
//!
//! Configurations with a fixed popcount, ordered by their numeric value as
//! bit words, are exactly the colex order on position sets. Ranking uses the
//! combinatorial number system: `rank = sum_i C(p_i, i)` over the 0-based set
//! bit positions `p_1 < p_2 < ...`, which gives O(N) index lookups without a
//! stored basis.

/// `BINOMIAL[n][k] = C(n, k)` for `n, k <= 64`. C(64, 32) < 2^63, so every
/// entry fits in a u64 without overflow.
pub const BINOMIAL: [[u64; 65]; 65] = build_binomial();

const fn build_binomial() -> [[u64; 65]; 65] {
    let mut t = [[0u64; 65]; 65];
    let mut n = 0;
    while n <= 64 {
        t[n][0] = 1;
        let mut k = 1;
        while k <= n {
            t[n][k] = t[n - 1][k - 1] + if k <= n - 1 { t[n - 1][k] } else { 0 };
            k += 1;
        }
        n += 1;
    }
    t
}

/// C(n, k), zero outside the triangle.
#[inline]
pub fn binomial(n: usize, k: usize) -> u64 {
    if n > 64 || k > n {
        return 0;
    }
    BINOMIAL[n][k]
}

/// Colex rank of `bits` among all words with the same popcount.
#[inline]
pub fn rank_combination(bits: u64) -> u64 {
    let mut rank = 0u64;
    let mut rest = bits;
    let mut i = 1usize;
    while rest != 0 {
        let p = rest.trailing_zeros() as usize;
        rank += BINOMIAL[p][i];
        rest &= rest - 1;
        i += 1;
    }
    rank
}

/// Inverse of [`rank_combination`]: the `rank`-th word (0-based, ascending
/// numeric order) with `n_bits` set bits below position `length`.
pub fn unrank_combination(mut rank: u64, n_bits: usize, length: usize) -> u64 {
    let mut bits = 0u64;
    let mut p = length;
    for i in (1..=n_bits).rev() {
        // largest p with C(p, i) <= rank
        while BINOMIAL[p - 1][i] > rank {
            p -= 1;
        }
        p -= 1;
        bits |= 1 << p;
        rank -= BINOMIAL[p][i];
    }
    bits
}

/// Successor of `v` in the fixed-popcount enumeration (Gosper's hack).
/// Only meaningful while further combinations exist below the length limit.
#[inline]
pub fn next_combination(v: u64) -> u64 {
    if v == 0 {
        return 0;
    }
    let t = v | (v - 1);
    let nt = !t;
    (t + 1) | (((nt & nt.wrapping_neg()) - 1) >> (v.trailing_zeros() + 1))
}

/// Iterator over all words with `n_bits` set bits below position `length`,
/// in ascending numeric order (Gosper's hack).
pub struct Combinations {
    next: Option<u64>,
    limit: u64,
}

impl Combinations {
    pub fn new(length: usize, n_bits: usize) -> Self {
        assert!(length <= 63, "combination enumeration limited to 63 bits");
        if n_bits > length {
            return Combinations {
                next: None,
                limit: 0,
            };
        }
        let first = if n_bits == 0 { 0 } else { (1u64 << n_bits) - 1 };
        Combinations {
            next: Some(first),
            limit: 1u64 << length,
        }
    }
}

impl Iterator for Combinations {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let v = self.next?;
        self.next = if v == 0 {
            None
        } else {
            let succ = next_combination(v);
            (succ < self.limit).then_some(succ)
        };
        Some(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(5, 3), 10);
        assert_eq!(binomial(23, 12), 1_352_078);
        assert_eq!(binomial(0, 0), 1);
        assert_eq!(binomial(10, 11), 0);
    }

    #[test]
    fn rank_unrank_roundtrip() {
        for (i, bits) in Combinations::new(10, 4).enumerate() {
            assert_eq!(rank_combination(bits), i as u64);
            assert_eq!(unrank_combination(i as u64, 4, 10), bits);
        }
    }

    #[test]
    fn enumeration_is_sorted_and_complete() {
        let all: Vec<u64> = Combinations::new(12, 5).collect();
        assert_eq!(all.len(), binomial(12, 5) as usize);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert!(all.iter().all(|b| b.count_ones() == 5));
    }

    #[test]
    fn empty_and_full() {
        let zero: Vec<u64> = Combinations::new(5, 0).collect();
        assert_eq!(zero, vec![0]);
        let full: Vec<u64> = Combinations::new(5, 5).collect();
        assert_eq!(full, vec![0b11111]);
    }
}
