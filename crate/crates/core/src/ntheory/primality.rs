//! Miller-Rabin primality with deterministic witness schedules.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

/// (a * b) mod m without overflow.
pub fn mod_mul(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// a^e mod m by square and multiply.
pub fn mod_pow(mut a: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc: u64 = 1;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mod_mul(acc, a, m);
        }
        a = mod_mul(a, a, m);
        e >>= 1;
    }
    acc
}

/// Witnesses proving primality for every n < 3.3e24, which covers u64.
const WITNESSES_U64: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn miller_rabin_u64(n: u64, base: u64) -> bool {
    let a = base % n;
    if a == 0 {
        return true;
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    let mut x = mod_pow(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mod_mul(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

/// Deterministic primality for u64.
pub fn is_prime_u64(n: u64) -> bool {
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
    WITNESSES_U64.iter().all(|&a| miller_rabin_u64(n, a))
}

fn miller_rabin_big(n: &BigUint, base: u64) -> bool {
    let n_minus_1 = n - 1u32;
    let a = BigUint::from(base) % n;
    if a.is_zero() {
        return true;
    }
    let s = n_minus_1.trailing_zeros().unwrap();
    let d = &n_minus_1 >> s;
    let mut x = a.modpow(&d, n);
    if x.is_one() || x == n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == n_minus_1 {
            return true;
        }
    }
    false
}

/// Primality test for arbitrary-precision integers.
///
/// Deterministic and correct below 2^64. Above, strong-probable-prime with a
/// fixed witness schedule of the first 65 primes; a composite passes all 65
/// rounds with probability at most 4^-65 < 2^-128, and the verdict is
/// reproducible across runs.
pub fn is_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    // 65 fixed witnesses
    const BIG_WITNESSES: [u64; 65] = [
        2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83,
        89, 97, 101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179,
        181, 191, 193, 197, 199, 211, 223, 227, 229, 233, 239, 241, 251, 257, 263, 269, 271, 277,
        281, 283, 293, 307, 311, 313,
    ];
    for &p in BIG_WITNESSES.iter() {
        if (n % p).is_zero() {
            return false;
        }
    }
    BIG_WITNESSES.iter().all(|&a| miller_rabin_big(n, a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    fn trial_division_oracle(n: u64) -> bool {
        if n < 2 {
            return false;
        }
        let mut d = 2;
        while d * d <= n {
            if n % d == 0 {
                return false;
            }
            d += 1;
        }
        true
    }

    #[test]
    fn small_cases() {
        assert!(is_prime_u64(2));
        assert!(!is_prime_u64(0));
        assert!(!is_prime_u64(1));
        assert!(!is_prime_u64(561), "561 is a Carmichael number");
    }

    #[test]
    fn mersenne_31() {
        let n = (1u64 << 31) - 1;
        assert!(trial_division_oracle(n));
        assert!(is_prime_u64(n));
    }

    #[test]
    fn agrees_with_trial_division() {
        for n in 0..20_000u64 {
            assert_eq!(is_prime_u64(n), trial_division_oracle(n), "n={n}");
        }
        // Carmichael numbers
        for n in [561u64, 1105, 1729, 2465, 2821, 6601, 8911, 62745, 162401] {
            assert!(!is_prime_u64(n), "{n}");
        }
    }

    #[test]
    fn big_path_consistent() {
        // 2^89 - 1 is a Mersenne prime; 2^83 - 1 = 167 * ... is composite.
        let m89 = (BigUint::from(1u32) << 89) - 1u32;
        assert!(is_prime(&m89));
        let m83 = (BigUint::from(1u32) << 83) - 1u32;
        assert!(!is_prime(&m83));
        assert!(is_prime(&BigUint::from(u64::MAX - 58))); // largest u64 prime
    }
}
