//! Closed-form counts that the computed table must reproduce.

fn divisors(n: u64) -> impl Iterator<Item = u64> {
    (1..=n).filter(move |d| n % d == 0)
}

fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

fn mobius(mut n: u64) -> i128 {
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

fn power(n: u64, e: u64) -> i128 {
    (n as i128).checked_pow(e as u32).expect("n^len overflows i128")
}

/// Number of cyclic words (necklaces) of length `len` on `n` letters.
///
/// Panics if `len == 0` or `n^len` overflows `i128`.
pub fn necklace_count(n: u64, len: u64) -> u128 {
    assert!(len >= 1, "necklaces need positive length");
    let total: i128 = divisors(len).map(|d| euler_phi(d) as i128 * power(n, len / d)).sum();
    (total / len as i128) as u128
}

/// Dimension of the degree-`len` part of the free Lie algebra on `n`
/// generators (Witt's formula).
///
/// Panics if `len == 0` or `n^len` overflows `i128`.
pub fn witt_dim(n: u64, len: u64) -> u128 {
    assert!(len >= 1, "Witt dimension needs positive length");
    let total: i128 = divisors(len).map(|d| mobius(d) * power(n, len / d)).sum();
    (total / len as i128) as u128
}
