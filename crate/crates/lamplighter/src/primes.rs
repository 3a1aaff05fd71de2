//! Deterministic primality testing and divisor enumeration for `u64`.

/// Deterministic Miller-Rabin primality test.
///
/// Uses the fixed witness set {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37},
/// which is known to be exact for every `n < 3.3 * 10^24`, so in particular
/// for all of `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = mod_pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mod_mul(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// All positive divisors of `n`, in ascending order.
pub fn divisors(n: u64) -> Vec<u64> {
    assert!(n >= 1, "divisors of 0 are not defined");
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// `(a * b) mod m` without overflow.
pub fn mod_mul(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// `(base ^ exp) mod m` by square-and-multiply.
pub fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mod_mul(acc, base, m);
        }
        base = mod_mul(base, base, m);
        exp >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primes() {
        let primes: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(
            primes,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
    }

    #[test]
    fn carmichael_numbers_rejected() {
        for n in [561u64, 1105, 1729, 2465, 2821, 6601, 8911] {
            assert!(!is_prime(n), "{n} is composite");
        }
    }

    #[test]
    fn large_values() {
        assert!(is_prime(2_147_483_647)); // 2^31 - 1
        assert!(is_prime(18_446_744_073_709_551_557)); // largest u64 prime
        assert!(!is_prime(18_446_744_073_709_551_615)); // u64::MAX = 3 * 5 * 17 * ...
    }

    #[test]
    fn divisors_ascending() {
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(35), vec![1, 5, 7, 35]);
        assert_eq!(divisors(36), vec![1, 2, 3, 4, 6, 9, 12, 18, 36]);
        assert_eq!(divisors(97), vec![1, 97]);
    }

    #[test]
    fn mod_pow_agrees_with_naive() {
        for base in 0..8u64 {
            for exp in 0..10u64 {
                for m in 2..12u64 {
                    let naive = (0..exp).fold(1u64, |acc, _| acc * base % m);
                    assert_eq!(mod_pow(base, exp, m), naive);
                }
            }
        }
    }
}
