//! Root counting for polynomial congruences f(x) = 0 (mod m): a direct scan
//! and the gcd-reduction route that rewrites the count through roots of
//! f/delta modulo m/delta lifted along arithmetic progressions. Also counts
//! exponent positions n with a^(R(n)) = 1 (mod p) two independent ways.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::poly::{horner_mod, IntPolynomial};

/// Default cap on scanned moduli.
pub const ROOT_SCAN_BUDGET: u64 = 10_000_000;

/// Root count of f mod m over one complete residue window, with the gcd
/// delta = (b_0, ..., b_d, m) and the shape of the bound
/// d * delta^(1/d) * m^(1 - 1/d) (whose absolute constant the report leaves
/// as an empirical ratio).
#[derive(Debug, Clone, PartialEq)]
pub struct CongruenceCount {
    pub modulus: u64,
    pub roots: u64,
    pub delta: u64,
    pub bound_skeleton: f64,
    pub implied_constant: f64,
}

impl CongruenceCount {
    fn new(f: &IntPolynomial, m: u64, roots: u64, delta: u64) -> Self {
        let d = f.degree() as f64;
        let bound_skeleton = d * (delta as f64).powf(1.0 / d) * (m as f64).powf(1.0 - 1.0 / d);
        Self {
            modulus: m,
            roots,
            delta,
            bound_skeleton,
            implied_constant: roots as f64 / bound_skeleton,
        }
    }
}

/// #{t integer : 1 <= a + b t <= N}, exactly.
///
/// With floor division toward minus infinity the count is
/// [(N - a)/b] - [-a/b] when nonnegative, else 0. It never exceeds N/b + 1.
pub fn progression_count(a: i64, b: u64, n: u64) -> u64 {
    assert!(b >= 1 && n >= 1);
    let b = b as i128;
    let a = a as i128;
    let n = n as i128;
    let t_hi = (n - a).div_euclid(b);
    let t_lo = (-a).div_euclid(b) + 1;
    if t_lo > t_hi {
        0
    } else {
        (t_hi - t_lo + 1) as u64
    }
}

fn gcd_coeffs_mod(f: &IntPolynomial, m: u64) -> u64 {
    let mut g = m;
    let mm = BigInt::from(m);
    for c in f.coeffs() {
        let r = c.mod_floor(&mm).to_u64().expect("residue fits");
        g = g.gcd(&r);
        if g == 1 {
            break;
        }
    }
    g
}

fn scan_roots(coeffs_mod: &[u64], m: u64) -> u64 {
    // window {1..m}; x = m lands on the residue 0
    (0..m)
        .filter(|&x| horner_mod(coeffs_mod, x, m) == 0)
        .count() as u64
}

/// Count roots of f mod m by scanning a full residue window.
pub fn count_roots_bruteforce(f: &IntPolynomial, m: u64) -> Result<CongruenceCount> {
    count_roots_bruteforce_with(f, m, ROOT_SCAN_BUDGET)
}

pub fn count_roots_bruteforce_with(
    f: &IntPolynomial,
    m: u64,
    budget: u64,
) -> Result<CongruenceCount> {
    if m < 1 {
        return Err(Error::precondition("modulus must be positive"));
    }
    if m > budget {
        return Err(Error::resource(
            format!("brute-force root scan over m = {m}"),
            format!("budget is {budget}"),
        ));
    }
    let roots = scan_roots(&f.coeffs_mod(m), m);
    Ok(CongruenceCount::new(f, m, roots, gcd_coeffs_mod(f, m)))
}

/// Count roots of f mod m through the gcd reduction.
///
/// With delta = (b_0, ..., b_d, m): if delta = 1 the roots are counted mod m
/// directly; otherwise the roots of f/delta modulo m/delta are lifted back,
/// each contributing an arithmetic progression inside the window:
/// count = sum over roots j of #{t : 1 <= j + (m/delta) t <= m}.
/// Agrees with the brute-force scan exactly.
pub fn count_roots_reduced(f: &IntPolynomial, m: u64) -> Result<CongruenceCount> {
    count_roots_reduced_with(f, m, ROOT_SCAN_BUDGET)
}

pub fn count_roots_reduced_with(
    f: &IntPolynomial,
    m: u64,
    budget: u64,
) -> Result<CongruenceCount> {
    if m < 1 {
        return Err(Error::precondition("modulus must be positive"));
    }
    if m > budget {
        return Err(Error::resource(
            format!("reduced root scan over m = {m}"),
            format!("budget is {budget}"),
        ));
    }
    let delta = gcd_coeffs_mod(f, m);
    if delta == 1 {
        let roots = scan_roots(&f.coeffs_mod(m), m);
        return Ok(CongruenceCount::new(f, m, roots, 1));
    }
    let m_red = m / delta;
    let delta_big = BigInt::from(delta);
    let reduced: Vec<BigInt> = f.coeffs().iter().map(|c| c / &delta_big).collect();
    let reduced_mod: Vec<u64> = {
        let mm = BigInt::from(m_red);
        reduced
            .iter()
            .map(|c| c.mod_floor(&mm).to_u64().expect("residue fits"))
            .collect()
    };
    let mut roots = 0u64;
    for j in 0..m_red {
        if horner_mod(&reduced_mod, j, m_red) == 0 {
            roots += progression_count(j as i64, m_red, m);
        }
    }
    Ok(CongruenceCount::new(f, m, roots, delta))
}

/// #{1 <= n <= n_max : a^(R(n)) = 1 (mod p)}, for h the order of a mod p.
///
/// Since a^e = 1 (mod p) iff h | e, the condition is R(n) = 0 (mod h) and is
/// evaluated by Horner arithmetic modulo h, avoiding the huge exponents.
/// For p | a the count is 0: a^(R(n)) is then divisible by p.
pub fn count_power_units(a: u64, r: &IntPolynomial, n_max: u64, p: u64, h: u64) -> u64 {
    if a % p == 0 {
        return 0;
    }
    debug_assert!(h >= 1);
    let cs = r.coeffs_mod(h);
    (1..=n_max)
        .filter(|&n| horner_mod(&cs, n, h) == 0)
        .count() as u64
}

/// Same count through the roots-then-progressions decomposition: with
/// U = {j in [0, h) : R(j) = 0 (mod h)}, the count is
/// sum over j in U of #{t : 1 <= j + h t <= n_max}. Must equal
/// `count_power_units` exactly.
pub fn count_power_units_structured(
    a: u64,
    r: &IntPolynomial,
    n_max: u64,
    p: u64,
    h: u64,
) -> u64 {
    if a % p == 0 {
        return 0;
    }
    debug_assert!(h >= 1);
    let cs = r.coeffs_mod(h);
    (0..h)
        .filter(|&j| horner_mod(&cs, j, h) == 0)
        .map(|j| progression_count(j as i64, h, n_max))
        .sum()
}

/// Literal cross-check variant: reduce the exponent mod h, then perform the
/// modular exponentiation and compare with 1.
pub fn count_power_units_modpow(a: u64, r: &IntPolynomial, n_max: u64, p: u64, h: u64) -> u64 {
    if a % p == 0 {
        return 0;
    }
    let cs = r.coeffs_mod(h);
    (1..=n_max)
        .filter(|&n| {
            let e = horner_mod(&cs, n, h);
            crate::ntheory::mod_pow(a % p, e, p) == 1
        })
        .count() as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;
    use num_traits::One;

    fn poly(coeffs: &[i64]) -> IntPolynomial {
        IntPolynomial::from_coeffs(coeffs).unwrap()
    }

    #[test]
    fn progression_examples() {
        assert_eq!(progression_count(2, 5, 12), 3);
        assert_eq!(progression_count(-7, 3, 9), 3);
        assert_eq!(progression_count(100, 7, 5), 1);
    }

    #[test]
    fn progression_matches_enumeration_on_grid() {
        for a in -50..=50i64 {
            for b in 1..=50u64 {
                for n in 1..=50u64 {
                    let brute = (-200..=200i64)
                        .filter(|&t| {
                            let v = a + b as i64 * t;
                            v >= 1 && v as u64 <= n
                        })
                        .count() as u64;
                    let got = progression_count(a, b, n);
                    assert_eq!(got, brute, "a={a} b={b} n={n}");
                    assert!(got as f64 <= n as f64 / b as f64 + 1.0);
                }
            }
        }
    }

    #[test]
    fn root_count_examples() {
        // x^2 mod 4: roots {2, 4}
        let c = count_roots_bruteforce(&poly(&[0, 0, 1]), 4).unwrap();
        assert_eq!((c.roots, c.delta), (2, 1));
        // x^2 + 1 mod 5: roots {2, 3}
        let c = count_roots_bruteforce(&poly(&[1, 0, 1]), 5).unwrap();
        assert_eq!((c.roots, c.delta), (2, 1));
        // 2x + 2 mod 4: roots {1, 3}
        let c = count_roots_bruteforce(&poly(&[2, 2]), 4).unwrap();
        assert_eq!((c.roots, c.delta), (2, 2));
    }

    #[test]
    fn reduced_examples() {
        let c = count_roots_reduced(&poly(&[2, 2]), 4).unwrap();
        assert_eq!((c.roots, c.delta), (2, 2));
        let c = count_roots_reduced(&poly(&[0, 0, 1]), 4).unwrap();
        assert_eq!((c.roots, c.delta), (2, 1));
        // 6x^2 + 6 mod 12: delta 6, reduced x^2 + 1 mod 2 has root 1
        let c = count_roots_reduced(&poly(&[6, 0, 6]), 12).unwrap();
        assert_eq!((c.roots, c.delta), (6, 6));
        let b = count_roots_bruteforce(&poly(&[6, 0, 6]), 12).unwrap();
        assert_eq!(b.roots, 6);
    }

    #[test]
    fn reduction_matches_bruteforce_on_random_polys() {
        let mut rng = crate::numeric::SplitMix64::new(1);
        for _ in 0..60 {
            let d = 1 + rng.below(4) as usize;
            let mut coeffs: Vec<i64> = (0..d).map(|_| rng.range_i64(-20, 20)).collect();
            coeffs.push(rng.range_i64(1, 20));
            let f = poly(&coeffs);
            for m in 1..=300u64 {
                let a = count_roots_bruteforce(&f, m).unwrap();
                let b = count_roots_reduced(&f, m).unwrap();
                assert_eq!(a.roots, b.roots, "f={coeffs:?} m={m}");
                assert_eq!(a.delta, b.delta);
            }
        }
    }

    #[test]
    fn window_shift_invariance() {
        // counting over {1..m} equals counting over {0..m-1}
        let f = poly(&[3, -2, 5]);
        for m in 1..=200u64 {
            let cs = f.coeffs_mod(m);
            let window0 = (0..m).filter(|&x| horner_mod(&cs, x, m) == 0).count() as u64;
            let window1 = (1..=m).filter(|&x| horner_mod(&cs, x, m) == 0).count() as u64;
            assert_eq!(window0, window1);
            assert_eq!(count_roots_bruteforce(&f, m).unwrap().roots, window0);
        }
    }

    #[test]
    fn unit_count_examples() {
        // a=2, R=n^2, N=10, p=7 (h=3): n in {3, 6, 9}
        let r = poly(&[0, 0, 1]);
        assert_eq!(count_power_units(2, &r, 10, 7, 3), 3);
        assert_eq!(count_power_units_structured(2, &r, 10, 7, 3), 3);
        // a=2, R=n, N=10, p=3 (h=2): even n
        let rn = poly(&[0, 1]);
        assert_eq!(count_power_units(2, &rn, 10, 3, 2), 5);
        assert_eq!(count_power_units_structured(2, &rn, 10, 3, 2), 5);
        // p | a forces 0
        assert_eq!(count_power_units(2, &rn, 7, 2, 1), 0);
        // a=2, R=n^2+1, p=5 (h=4): x^2 = -1 mod 4 has no roots
        let r1 = poly(&[1, 0, 1]);
        assert_eq!(count_power_units_structured(2, &r1, 100, 5, 4), 0);
        assert_eq!(count_power_units(2, &r1, 100, 5, 4), 0);
    }

    #[test]
    fn unit_count_against_bigint_modpow() {
        // direct check with the full exponent 2^(n^2) mod 7
        let r = poly(&[0, 0, 1]);
        let p = BigUint::from(7u32);
        let brute = (1..=10u64)
            .filter(|&n| {
                BigUint::from(2u32)
                    .modpow(&BigUint::from(n * n), &p)
                    .is_one()
            })
            .count() as u64;
        assert_eq!(brute, 3);
        assert_eq!(count_power_units(2, &r, 10, 7, 3), brute);
        assert_eq!(count_power_units_modpow(2, &r, 10, 7, 3), brute);
    }

    #[test]
    fn resource_budget() {
        let f = poly(&[0, 1]);
        assert!(count_roots_bruteforce_with(&f, 1000, 10).is_err());
        assert!(count_roots_reduced_with(&f, 1000, 10).is_err());
    }
}
