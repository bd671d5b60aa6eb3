//! Small exact integer helpers shared across the crate.

/// Greatest common divisor on machine words.
pub fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Deterministic primality by trial division. Callers keep `p` small (the
/// crate validates `p < 2^26`), so this is exact and fast enough.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    if p % 3 == 0 {
        return p == 3;
    }
    let mut d = 5u64;
    while d * d <= p {
        if p % d == 0 || p % (d + 2) == 0 {
            return false;
        }
        d += 6;
    }
    true
}

/// If `m == p^h` for some `h >= 0`, returns `Some(h)`. Note `m == 1` gives
/// `Some(0)`: one counts as a power of every prime, which matters when a
/// theorem hypothesis excludes "k - 1 is a power of p" for k = 2.
pub fn p_power_exponent(m: u64, p: u64) -> Option<u32> {
    if p < 2 || m == 0 {
        return None;
    }
    if m == 1 {
        return Some(0);
    }
    let mut m = m;
    let mut h = 0u32;
    while m % p == 0 {
        m /= p;
        h += 1;
    }
    if m == 1 {
        Some(h)
    } else {
        None
    }
}

/// Distinct prime divisors of `n`, ascending.
pub fn prime_divisors(n: u64) -> Vec<u64> {
    let mut n = n;
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Exact `k`-th root of a nonnegative big integer, if it is a perfect power.
pub fn perfect_kth_root(a: &num_bigint::BigUint, k: u32) -> Option<num_bigint::BigUint> {
    if k == 0 {
        return None;
    }
    let r = a.nth_root(k);
    if r.pow(k) == *a {
        Some(r)
    } else {
        None
    }
}

/// Multiplicative order of `a` modulo `q`-sized group order `group`: the least
/// `d | group` with `pow(d) == identity`, probed through a caller-supplied
/// power test. Factors `group` by trial division.
pub fn multiplicative_order(group: u64, is_identity_pow: impl Fn(u64) -> bool) -> u64 {
    let mut ord = group;
    for p in prime_divisors(group) {
        while ord % p == 0 && is_identity_pow(ord / p) {
            ord /= p;
        }
    }
    ord
}

/// Euler totient, by trial-division factorization.
pub fn euler_phi(n: u64) -> u64 {
    let mut result = n;
    for p in prime_divisors(n) {
        result = result / p * (p - 1);
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    #[test]
    fn primality_small_table() {
        let primes: Vec<u64> = (0..60).filter(|&p| is_prime(p)).collect();
        assert_eq!(
            primes,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
        assert!(is_prime(104729));
        assert!(!is_prime(104730));
    }

    #[test]
    fn p_power_recognition() {
        assert_eq!(p_power_exponent(1, 7), Some(0));
        assert_eq!(p_power_exponent(2, 2), Some(1));
        assert_eq!(p_power_exponent(8, 2), Some(3));
        assert_eq!(p_power_exponent(9, 3), Some(2));
        assert_eq!(p_power_exponent(12, 2), None);
        assert_eq!(p_power_exponent(3, 13), None);
    }

    #[test]
    fn perfect_roots() {
        assert_eq!(
            perfect_kth_root(&BigUint::from(27u32), 3),
            Some(BigUint::from(3u32))
        );
        assert_eq!(perfect_kth_root(&BigUint::from(28u32), 3), None);
        assert_eq!(
            perfect_kth_root(&BigUint::from(1u32), 5),
            Some(BigUint::from(1u32))
        );
    }

    #[test]
    fn orders_and_phi() {
        // order of 3 modulo 13 is 3: probe with explicit powers
        let pow_is_one = |e: u64| -> bool {
            let mut acc = 1u64;
            for _ in 0..e {
                acc = acc * 3 % 13;
            }
            acc == 1
        };
        assert_eq!(multiplicative_order(12, pow_is_one), 3);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(euler_phi(13), 12);
        assert_eq!(prime_divisors(2196), vec![2, 3, 61]);
    }
}
