//! Prime search in arithmetic progressions, with deterministic primality
//! testing (Miller–Rabin with a base set that is exact for u64).

use super::ConstructError;

/// Deterministic Miller–Rabin for u64.
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
    // this base set decides primality exactly for all n < 3.3e24 > u64::MAX
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub const DEFAULT_PRIME_SEARCH_CAP: u64 = 10_000_000;

/// Smallest prime p >= x with p = a (mod q), by direct search.
///
/// Requires gcd(a, q) = 1 and x >= 2. Errors after `cap` candidates.
pub fn find_prime_in_ap(x: u64, a: u64, q: u64, cap: u64) -> Result<u64, ConstructError> {
    if q == 0 {
        return Err(ConstructError::BadParameter("modulus q must be positive".into()));
    }
    if gcd(a % q.max(1), q) != 1 && q > 1 {
        return Err(ConstructError::BadParameter(format!(
            "gcd({a}, {q}) != 1: the progression contains at most one prime"
        )));
    }
    if x < 2 {
        return Err(ConstructError::BadParameter("search start x must be >= 2".into()));
    }
    let a = a % q;
    // first candidate >= x congruent to a mod q
    let rem = x % q;
    let mut p = if rem <= a { x + (a - rem) } else { x + q - (rem - a) };
    if p < 2 {
        p += q;
    }
    for _ in 0..cap {
        if is_prime(p) {
            return Ok(p);
        }
        p = p
            .checked_add(q)
            .ok_or_else(|| ConstructError::BadParameter("prime search overflowed u64".into()))?;
    }
    Err(ConstructError::RetryExhausted {
        what: "prime search".into(),
        condition: format!("no prime = {a} mod {q} within {cap} candidates from {x}"),
    })
}

/// Smallest prime >= x.
pub fn next_prime(x: u64) -> Result<u64, ConstructError> {
    find_prime_in_ap(x.max(2), 0, 1, DEFAULT_PRIME_SEARCH_CAP)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_primes() {
        for p in [2u64, 3, 5, 7, 97, 7919, 2_147_483_647] {
            assert!(is_prime(p), "{p}");
        }
        for c in [0u64, 1, 4, 9, 561, 25_326_001] {
            assert!(!is_prime(c), "{c}");
        }
    }

    #[test]
    fn ap_search_examples() {
        assert_eq!(find_prime_in_ap(5, 1, 4, 1000).unwrap(), 5);
        assert_eq!(find_prime_in_ap(25, 1, 3, 1000).unwrap(), 31);
    }

    #[test]
    fn ap_result_is_minimal() {
        let p = find_prime_in_ap(100, 3, 10, 10_000).unwrap();
        assert!(is_prime(p) && p % 10 == 3 && p >= 100);
        let mut q = 103;
        while q < p {
            assert!(!is_prime(q));
            q += 10;
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(find_prime_in_ap(10, 2, 4, 100).is_err());
        assert!(find_prime_in_ap(1, 1, 4, 100).is_err());
    }

    #[test]
    fn next_prime_examples() {
        assert_eq!(next_prime(2).unwrap(), 2);
        assert_eq!(next_prime(4).unwrap(), 5);
        assert_eq!(next_prime(14).unwrap(), 17);
    }
}
