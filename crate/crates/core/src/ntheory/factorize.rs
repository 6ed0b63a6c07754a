//! Budgeted integer factorization: trial division, Pollard p-1 and Brent's
//! variant of Pollard rho, with a deterministic retry schedule. Incomplete
//! factorizations are not errors; the unfactored part is carried as a
//! certified cofactor.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::{gcd, Integer};
use num_traits::{One, ToPrimitive, Zero};

use super::primality::{is_prime, is_prime_u64, mod_mul};
use super::sieve::simple_sieve;
use crate::numeric::divisors;

/// Step budget for the generic methods. Trial division always runs to
/// `trial_bound`; `steps` is drained by rho iterations and p-1 prime powers.
#[derive(Debug, Clone)]
pub struct FactorBudget {
    pub steps: u64,
    pub trial_bound: u64,
}

impl Default for FactorBudget {
    fn default() -> Self {
        Self {
            steps: 8_000_000,
            trial_bound: 100_000,
        }
    }
}

/// A positive integer with its known prime-power split.
///
/// `value = cofactor * prod p^e`. The cofactor is 1 when the factorization
/// is complete; otherwise it is composite or of unknown status, and free of
/// prime divisors up to `cofactor_floor`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredInteger {
    pub value: BigUint,
    /// (prime, exponent), primes strictly increasing.
    pub factors: Vec<(BigUint, u32)>,
    pub cofactor: BigUint,
    pub cofactor_floor: u64,
}

impl FactoredInteger {
    pub fn one() -> Self {
        Self {
            value: BigUint::one(),
            factors: Vec::new(),
            cofactor: BigUint::one(),
            cofactor_floor: 1,
        }
    }

    pub fn is_complete(&self) -> bool {
        self.cofactor.is_one()
    }

    /// Complete factorization of a u64 (never gives up).
    pub fn from_u64(n: u64) -> Self {
        assert!(n >= 1);
        let factors = factor_u64(n)
            .into_iter()
            .map(|(p, e)| (BigUint::from(p), e))
            .collect();
        Self {
            value: BigUint::from(n),
            factors,
            cofactor: BigUint::one(),
            cofactor_floor: 1,
        }
    }

    /// Does the product of prime powers times the cofactor reproduce value?
    pub fn check_product(&self) -> bool {
        let mut acc = self.cofactor.clone();
        for (p, e) in &self.factors {
            acc *= p.pow(*e);
        }
        acc == self.value
    }

    fn from_map(value: BigUint, map: BTreeMap<BigUint, u32>, cofactor: BigUint, floor: u64) -> Self {
        let out = Self {
            value,
            factors: map.into_iter().collect(),
            cofactor,
            cofactor_floor: floor,
        };
        debug_assert!(out.check_product());
        out
    }
}

/// Complete factorization of a u64 via trial division plus Pollard rho.
pub fn factor_u64(n: u64) -> Vec<(u64, u32)> {
    assert!(n >= 1);
    let mut map: BTreeMap<u64, u32> = BTreeMap::new();
    let mut rem = n;
    for p in [2u64, 3, 5] {
        while rem % p == 0 {
            *map.entry(p).or_insert(0) += 1;
            rem /= p;
        }
    }
    let mut d = 7u64;
    let gaps = [4u64, 2, 4, 2, 4, 6, 2, 6];
    let mut gi = 0;
    while d <= 10_000 && d * d <= rem {
        while rem % d == 0 {
            *map.entry(d).or_insert(0) += 1;
            rem /= d;
        }
        d += gaps[gi];
        gi = (gi + 1) % gaps.len();
    }
    let mut stack = Vec::new();
    if rem > 1 {
        stack.push(rem);
    }
    while let Some(c) = stack.pop() {
        if is_prime_u64(c) {
            *map.entry(c).or_insert(0) += 1;
            continue;
        }
        let mut found = None;
        'outer: for cap_shift in [18u32, 20, 22, 24, 26] {
            for c_add in 1..=4u64 {
                if let Some(g) = rho_u64(c, c_add, 1 << cap_shift) {
                    found = Some(g);
                    break 'outer;
                }
            }
        }
        let g = found.expect("u64 rho split");
        stack.push(g);
        stack.push(c / g);
    }
    map.into_iter().collect()
}

/// Brent-cycle Pollard rho on u64. Returns a nontrivial factor.
fn rho_u64(n: u64, c: u64, max_iters: u64) -> Option<u64> {
    debug_assert!(n > 3 && n % 2 == 1);
    let step = |x: u64| {
        let s = mod_mul(x, x, n) + c;
        if s >= n {
            s - n
        } else {
            s
        }
    };
    let mut y = 2u64;
    let mut x = 0u64;
    let mut ys = 0u64;
    let mut q = 1u64;
    let mut g = 1u64;
    let mut r = 1u64;
    let mut iters = 0u64;
    let batch = 128u64;
    while g == 1 && iters < max_iters {
        x = y;
        for _ in 0..r {
            y = step(y);
        }
        let mut k = 0u64;
        while k < r && g == 1 {
            ys = y;
            let lim = batch.min(r - k);
            for _ in 0..lim {
                y = step(y);
                q = mod_mul(q, x.abs_diff(y), n);
            }
            g = gcd(q, n);
            k += batch;
        }
        iters += r;
        r <<= 1;
    }
    if g == n {
        g = 1;
        while g == 1 {
            ys = step(ys);
            g = gcd(x.abs_diff(ys), n);
        }
    }
    if g > 1 && g < n {
        Some(g)
    } else {
        None
    }
}

fn big_abs_diff(a: &BigUint, b: &BigUint) -> BigUint {
    if a >= b {
        a - b
    } else {
        b - a
    }
}

/// Brent-cycle Pollard rho on big integers, draining `steps` one per
/// iteration of the squaring map.
fn rho_big(n: &BigUint, c: u64, max_iters: u64, steps: &mut u64) -> Option<BigUint> {
    let c = BigUint::from(c);
    let step = |x: &BigUint| (x * x + &c) % n;
    let mut y = BigUint::from(2u32);
    let mut x = BigUint::zero();
    let mut ys = BigUint::zero();
    let mut q = BigUint::one();
    let mut g = BigUint::one();
    let mut r = 1u64;
    let mut iters = 0u64;
    let batch = 128u64;
    while g.is_one() && iters < max_iters && *steps > 0 {
        x = y.clone();
        for _ in 0..r {
            y = step(&y);
        }
        let mut k = 0u64;
        while k < r && g.is_one() {
            ys = y.clone();
            let lim = batch.min(r - k).min(*steps);
            if lim == 0 {
                break;
            }
            for _ in 0..lim {
                y = step(&y);
                q = q * big_abs_diff(&x, &y) % n;
            }
            g = q.gcd(n);
            k += lim;
            *steps = steps.saturating_sub(lim);
        }
        iters += r;
        r <<= 1;
    }
    if &g == n {
        g = BigUint::one();
        let mut back = 0u64;
        while g.is_one() && back < (1 << 22) {
            ys = step(&ys);
            g = big_abs_diff(&x, &ys).gcd(n);
            back += 1;
        }
    }
    if !g.is_one() && &g != n {
        Some(g)
    } else {
        None
    }
}

/// Pollard p-1 stage 1 with smoothness bound b1, base as given.
fn pm1_big(n: &BigUint, b1: u64, base: u64, steps: &mut u64) -> Option<BigUint> {
    let mut a = BigUint::from(base);
    for p in simple_sieve(b1) {
        if *steps == 0 {
            return None;
        }
        let mut pk = p;
        while pk <= b1 / p {
            pk *= p;
        }
        a = a.modpow(&BigUint::from(pk), n);
        *steps -= 1;
        if a.is_one() {
            return None;
        }
    }
    let g = (a - 1u32).gcd(n);
    if !g.is_one() && &g != n {
        Some(g)
    } else {
        None
    }
}

/// If c = r^e for some e >= 2, return (r, e) with e maximal.
fn perfect_power(c: &BigUint) -> Option<(BigUint, u32)> {
    let bits = c.bits() as u32;
    for e in (2..=bits).rev() {
        let r = c.nth_root(e);
        if r <= BigUint::one() {
            continue;
        }
        if r.pow(e) == *c {
            return Some((r, e));
        }
    }
    None
}

/// One split attempt on an odd composite with no prime factor below the
/// trial bound. Deterministic: p-1 with bases 2 and 3, then rho with
/// parameters c = 1, 2, 3, ... and escalating iteration caps.
fn split_composite(c: &BigUint, steps: &mut u64) -> Option<BigUint> {
    if let Some(small) = c.to_u64() {
        for cap_shift in [18u32, 20, 22, 24, 26] {
            let cap = 1u64 << cap_shift;
            for c_add in 1..=4u64 {
                if *steps == 0 {
                    return None;
                }
                let take = cap.min(*steps);
                *steps = steps.saturating_sub(take);
                if let Some(g) = rho_u64(small, c_add, take) {
                    return Some(BigUint::from(g));
                }
            }
        }
        return None;
    }
    for (b1, base) in [(20_000u64, 2u64), (200_000, 2), (200_000, 3)] {
        if *steps == 0 {
            return None;
        }
        if let Some(g) = pm1_big(c, b1, base, steps) {
            return Some(g);
        }
    }
    let mut cap = 1u64 << 18;
    let mut c_add = 1u64;
    while *steps > 0 {
        if let Some(g) = rho_big(c, c_add, cap, steps) {
            return Some(g);
        }
        c_add += 1;
        cap = cap.saturating_mul(4);
    }
    None
}

/// Factor n within a budget.
///
/// Trial division up to `budget.trial_bound`, then Pollard p-1 and Pollard
/// rho on the remaining composites until they are split or `budget.steps`
/// runs out. Whatever stays unfactored is returned as the cofactor, not an
/// error.
pub fn factor(n: &BigUint, budget: &FactorBudget) -> FactoredInteger {
    assert!(!n.is_zero(), "factor requires n >= 1");
    let mut steps = budget.steps;
    factor_with_steps(n, budget.trial_bound, &mut steps)
}

fn factor_with_steps(n: &BigUint, trial_bound: u64, steps: &mut u64) -> FactoredInteger {
    let mut map: BTreeMap<BigUint, u32> = BTreeMap::new();
    if n.is_one() {
        return FactoredInteger::from_map(n.clone(), map, BigUint::one(), trial_bound);
    }

    let mut rem = n.clone();
    for p in simple_sieve(trial_bound) {
        if rem.is_one() {
            break;
        }
        let pb = BigUint::from(p);
        if (&rem % &pb).is_zero() {
            let mut e = 0u32;
            while (&rem % &pb).is_zero() {
                rem /= &pb;
                e += 1;
            }
            map.insert(pb, e);
        }
        // remainder below p^2 is prime or 1
        if !rem.is_one() && rem.bits() <= 2 * (64 - p.leading_zeros() as u64) {
            if let Some(small) = rem.to_u64() {
                if small <= p.saturating_mul(p) {
                    *map.entry(rem.clone()).or_insert(0) += 1;
                    rem = BigUint::one();
                    break;
                }
            }
        }
    }

    let mut cofactor = BigUint::one();
    let mut stack = Vec::new();
    if !rem.is_one() {
        stack.push(rem);
    }
    while let Some(c) = stack.pop() {
        if c.is_one() {
            continue;
        }
        if is_prime(&c) {
            *map.entry(c).or_insert(0) += 1;
            continue;
        }
        if let Some((root, e)) = perfect_power(&c) {
            for _ in 0..e {
                stack.push(root.clone());
            }
            continue;
        }
        match split_composite(&c, steps) {
            Some(g) => {
                stack.push(&c / &g);
                stack.push(g);
            }
            None => cofactor *= c,
        }
    }
    FactoredInteger::from_map(n.clone(), map, cofactor, trial_bound)
}

/// Factor a^k - 1 with the algebraic pre-split over the divisors of k.
///
/// a^k - 1 factors exactly into one piece per divisor d of k (the quotient of
/// a^d - 1 by the pieces of the proper divisors of d); each piece is then
/// factored on its own, which reaches far larger k than attacking a^k - 1
/// directly. The step budget is shared across all pieces.
pub fn factor_power_minus_one(a: u64, k: u64, budget: &FactorBudget) -> FactoredInteger {
    assert!(a >= 2 && k >= 1);
    let value = BigUint::from(a).pow(
        u32::try_from(k).expect("exponent fits u32"),
    ) - 1u32;

    let mut pieces: BTreeMap<u64, BigUint> = BTreeMap::new();
    for d in divisors(k) {
        let mut v = BigUint::from(a).pow(u32::try_from(d).unwrap()) - 1u32;
        for e in divisors(d) {
            if e < d {
                v /= &pieces[&e];
            }
        }
        pieces.insert(d, v);
    }
    debug_assert_eq!(
        pieces.values().product::<BigUint>(),
        value,
        "pre-split must reproduce a^k - 1"
    );

    let mut steps = budget.steps;
    let mut map: BTreeMap<BigUint, u32> = BTreeMap::new();
    let mut cofactor = BigUint::one();
    for v in pieces.values() {
        if v.is_one() {
            continue;
        }
        let f = factor_with_steps(v, budget.trial_bound, &mut steps);
        for (p, e) in f.factors {
            *map.entry(p).or_insert(0) += e;
        }
        cofactor *= f.cofactor;
    }
    FactoredInteger::from_map(value, map, cofactor, budget.trial_bound)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fac(n: u64) -> FactoredInteger {
        factor(&BigUint::from(n), &FactorBudget::default())
    }

    #[test]
    fn unit_and_small() {
        let one = fac(1);
        assert!(one.factors.is_empty());
        assert!(one.is_complete());

        let f15 = fac(15);
        assert_eq!(
            f15.factors,
            vec![(BigUint::from(3u32), 1), (BigUint::from(5u32), 1)]
        );
        assert!(f15.is_complete());
    }

    #[test]
    fn mersenne_2047() {
        // 2^11 - 1 = 23 * 89, cross-checked by trial division
        let f = fac(2047);
        assert_eq!(
            f.factors,
            vec![(BigUint::from(23u32), 1), (BigUint::from(89u32), 1)]
        );
    }

    #[test]
    fn factor_u64_reconstructs() {
        let mut rng = crate::numeric::SplitMix64::new(9);
        for _ in 0..200 {
            let n = 1 + rng.below(u64::MAX / 2);
            let fs = factor_u64(n);
            let mut acc: u128 = 1;
            for (p, e) in &fs {
                assert!(is_prime_u64(*p), "{p} not prime (n={n})");
                for _ in 0..*e {
                    acc *= *p as u128;
                }
            }
            assert_eq!(acc, n as u128, "n={n}");
        }
    }

    #[test]
    fn budget_exhaustion_leaves_certified_cofactor() {
        // Semiprime with both factors above the trial bound and a budget too
        // small for rho to find them.
        let p = BigUint::from(1_000_003u64);
        let q = BigUint::from(1_000_033u64);
        let n = &p * &q;
        let f = factor(
            &n,
            &FactorBudget {
                steps: 16,
                trial_bound: 100,
            },
        );
        assert!(!f.is_complete());
        assert_eq!(f.cofactor, n);
        assert_eq!(f.cofactor_floor, 100);
        assert!(f.check_product());
    }

    #[test]
    fn perfect_power_path() {
        let f = fac(1024);
        assert_eq!(f.factors, vec![(BigUint::from(2u32), 10)]);
        let f = fac(7u64.pow(6));
        assert_eq!(f.factors, vec![(BigUint::from(7u32), 6)]);
    }

    #[test]
    fn pre_split_matches_direct() {
        for (a, k) in [(2u64, 12u64), (2, 24), (3, 10), (10, 6), (5, 8)] {
            let pre = factor_power_minus_one(a, k, &FactorBudget::default());
            let direct = factor(
                &(BigUint::from(a).pow(k as u32) - 1u32),
                &FactorBudget::default(),
            );
            assert!(pre.is_complete());
            assert!(direct.is_complete());
            assert_eq!(pre.factors, direct.factors, "a={a} k={k}");
        }
    }

    #[test]
    fn pre_split_reaches_big_mersenne() {
        let f = factor_power_minus_one(2, 120, &FactorBudget::default());
        assert!(f.is_complete(), "2^120-1 should factor fully");
        assert!(f.check_product());
    }
}
