//! Multiplicative order of a modulo p, singly and in bulk over all primes up
//! to a limit, with an on-disk cache format for the bulk tables.

use std::collections::BTreeMap;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use num_traits::ToPrimitive;
use rayon::prelude::*;

use super::factorize::FactoredInteger;
use super::primality::mod_pow;
use super::sieve::{simple_sieve, sieve_primes};
use crate::error::{Error, Result};
use crate::numeric::divisors;

/// Order of a modulo p by divisor descent from p - 1.
///
/// `p_minus_1` must be the complete factorization of p - 1. Starting from
/// h = p - 1, each prime q | p - 1 is stripped while a^(h/q) stays 1 mod p.
pub fn mult_order(a: u64, p: u64, p_minus_1: &FactoredInteger) -> Result<u64> {
    if p < 2 || a % p == 0 {
        return Err(Error::domain(format!("gcd({a}, {p}) != 1")));
    }
    if !p_minus_1.is_complete() {
        return Err(Error::precondition(
            "mult_order needs the complete factorization of p - 1",
        ));
    }
    let expect = p - 1;
    if p_minus_1.value.to_u64() != Some(expect) {
        return Err(Error::precondition(format!(
            "factorization is of {}, not p - 1 = {expect}",
            p_minus_1.value
        )));
    }
    let qs: Vec<u64> = p_minus_1
        .factors
        .iter()
        .map(|(q, _)| q.to_u64().expect("prime factor of p - 1 fits u64"))
        .collect();
    Ok(order_descent(a, p, expect, &qs))
}

fn order_descent(a: u64, p: u64, p_minus_1: u64, prime_divisors: &[u64]) -> u64 {
    let mut h = p_minus_1;
    for &q in prime_divisors {
        while h % q == 0 && mod_pow(a, h / q, p) == 1 {
            h /= q;
        }
    }
    h
}

/// Divisibility criterion: a^k = 1 (mod p) iff h | k, given h = ord_p(a).
/// The equivalence with the modular exponentiation itself is an invariant
/// exercised by the verification suite.
pub fn order_divides(_a: u64, _p: u64, k: u64, h: u64) -> bool {
    debug_assert!(h >= 1);
    k % h == 0
}

/// Orders of a fixed base modulo every prime p <= limit with gcd(a, p) = 1.
#[derive(Debug, Clone)]
pub struct OrderTable {
    base: u64,
    limit: u64,
    /// (p, ord_p(base)), ascending in p.
    entries: Vec<(u64, u64)>,
    /// order -> primes with that order, ascending.
    by_order: BTreeMap<u64, Vec<u64>>,
}

const ORDER_TABLE_LIMIT_CAP: u64 = 200_000_000;

impl OrderTable {
    fn from_entries(base: u64, limit: u64, entries: Vec<(u64, u64)>) -> Self {
        let mut by_order: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
        for &(p, h) in &entries {
            by_order.entry(h).or_default().push(p);
        }
        Self {
            base,
            limit,
            entries,
            by_order,
        }
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(u64, u64)] {
        &self.entries
    }

    /// Order of the base modulo p, if p is a table prime.
    pub fn order_of(&self, p: u64) -> Option<u64> {
        self.entries
            .binary_search_by_key(&p, |&(q, _)| q)
            .ok()
            .map(|i| self.entries[i].1)
    }

    /// Primes of the table with a given order.
    pub fn primes_with_order(&self, h: u64) -> &[u64] {
        self.by_order.get(&h).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Primes p <= cap whose order divides k. These are exactly the table
    /// primes dividing base^k - 1. Ascending order of the order value.
    pub fn primes_with_order_dividing(&self, k: u64, cap: u64) -> Vec<u64> {
        let mut out = Vec::new();
        for d in divisors(k) {
            for &p in self.primes_with_order(d) {
                if p <= cap {
                    out.push(p);
                }
            }
        }
        out
    }

    /// Write the cache file: a header line `a=<base>,P=<limit>` followed by
    /// `p,h` rows.
    pub fn write_cache(&self, path: &Path) -> std::io::Result<()> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(f, "a={},P={}", self.base, self.limit)?;
        for (p, h) in &self.entries {
            writeln!(f, "{p},{h}")?;
        }
        Ok(())
    }

    /// Read a cache file written by `write_cache`.
    pub fn read_cache(path: &Path) -> Result<Self> {
        let f = std::fs::File::open(path)
            .map_err(|e| Error::domain(format!("open {}: {e}", path.display())))?;
        let mut lines = BufReader::new(f).lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::domain("empty order cache"))?
            .map_err(|e| Error::domain(e.to_string()))?;
        let (a_part, p_part) = header
            .split_once(',')
            .ok_or_else(|| Error::domain("bad cache header"))?;
        let base: u64 = a_part
            .strip_prefix("a=")
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::domain("bad cache header"))?;
        let limit: u64 = p_part
            .strip_prefix("P=")
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::domain("bad cache header"))?;
        let mut entries = Vec::new();
        for line in lines {
            let line = line.map_err(|e| Error::domain(e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            let (p, h) = line
                .split_once(',')
                .ok_or_else(|| Error::domain(format!("bad cache row {line:?}")))?;
            let p: u64 = p
                .parse()
                .map_err(|_| Error::domain(format!("bad prime {p:?}")))?;
            let h: u64 = h
                .parse()
                .map_err(|_| Error::domain(format!("bad order {h:?}")))?;
            entries.push((p, h));
        }
        if !entries.windows(2).all(|w| w[0].0 < w[1].0) {
            return Err(Error::domain("cache rows out of order"));
        }
        Ok(Self::from_entries(base, limit, entries))
    }
}

/// Build the order table for base a over primes p <= limit, gcd(a, p) = 1.
///
/// Work is split over prime chunks; the merge order is fixed by the prime
/// order, so the result is identical at any thread count.
pub fn build_order_table(a: u64, limit: u64) -> Result<OrderTable> {
    if a < 2 {
        return Err(Error::domain("base must exceed 1"));
    }
    if limit < 2 {
        return Err(Error::precondition("limit must be at least 2"));
    }
    if limit > ORDER_TABLE_LIMIT_CAP {
        return Err(Error::resource(
            format!("order table limit {limit}"),
            format!("cap is {ORDER_TABLE_LIMIT_CAP}"),
        ));
    }
    let primes = sieve_primes(2, limit)?;
    let base_primes = simple_sieve(limit.isqrt().max(2));

    let entries: Vec<(u64, u64)> = primes
        .par_chunks(4096)
        .flat_map_iter(|chunk| {
            let base_primes = &base_primes;
            chunk.iter().filter_map(move |&p| {
                if a % p == 0 {
                    return None;
                }
                let mut m = p - 1;
                let mut qs = Vec::new();
                for &q in base_primes {
                    if q * q > m {
                        break;
                    }
                    if m % q == 0 {
                        qs.push(q);
                        while m % q == 0 {
                            m /= q;
                        }
                    }
                }
                if m > 1 {
                    qs.push(m);
                }
                Some((p, order_descent(a, p, p - 1, &qs)))
            })
        })
        .collect();

    Ok(OrderTable::from_entries(a, limit, entries))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ntheory::factorize::FactorBudget;

    fn order_search_oracle(a: u64, p: u64) -> u64 {
        let mut x = 1u64;
        for h in 1..p {
            x = super::super::primality::mod_mul(x, a % p, p);
            if x == 1 {
                return h;
            }
        }
        unreachable!("order exists for gcd(a, p) = 1")
    }

    #[test]
    fn mult_order_examples() {
        let f6 = FactoredInteger::from_u64(6);
        assert_eq!(mult_order(2, 7, &f6).unwrap(), 3);
        let f2 = FactoredInteger::from_u64(2);
        assert_eq!(mult_order(2, 3, &f2).unwrap(), 2);
        let f6b = FactoredInteger::from_u64(6);
        assert_eq!(mult_order(10, 7, &f6b).unwrap(), 6);
    }

    #[test]
    fn mult_order_rejects_bad_inputs() {
        let f6 = FactoredInteger::from_u64(6);
        assert!(mult_order(7, 7, &f6).is_err());
        let incomplete = crate::ntheory::factor(
            &num_bigint::BigUint::from(1_000_003u64 * 1_000_033),
            &FactorBudget {
                steps: 4,
                trial_bound: 10,
            },
        );
        assert!(mult_order(2, 7, &incomplete).is_err());
    }

    #[test]
    fn table_base2_limit20() {
        let t = build_order_table(2, 20).unwrap();
        let want = [(3, 2), (5, 4), (7, 3), (11, 10), (13, 12), (17, 8), (19, 18)];
        assert_eq!(t.entries(), &want);
        for &(p, h) in t.entries() {
            assert_eq!(h, order_search_oracle(2, p), "p={p}");
        }
    }

    #[test]
    fn table_base3_and_base6() {
        let t3 = build_order_table(3, 10).unwrap();
        assert_eq!(t3.entries(), &[(2, 1), (5, 4), (7, 6)]);
        let t6 = build_order_table(6, 10).unwrap();
        assert_eq!(t6.entries(), &[(5, 1), (7, 2)]);
        for t in [&t3, &t6] {
            for &(p, h) in t.entries() {
                assert_eq!(h, order_search_oracle(t.base(), p));
            }
        }
    }

    #[test]
    fn order_invariants_divide_and_minimal() {
        let t = build_order_table(2, 2000).unwrap();
        for &(p, h) in t.entries() {
            assert_eq!((p - 1) % h, 0, "h must divide p - 1 (p={p})");
            assert_eq!(mod_pow(2, h, p), 1, "base^h = 1 (p={p})");
            for q in crate::numeric::divisors(h) {
                if q > 1 {
                    assert_ne!(mod_pow(2, h / q, p), 1, "minimality (p={p}, q={q})");
                }
            }
        }
    }

    #[test]
    fn order_dividing_lookup() {
        let t = build_order_table(2, 100).unwrap();
        // orders dividing 4: h in {1, 2, 4} -> p in {3, 5}
        let ps = t.primes_with_order_dividing(4, 100);
        assert_eq!(ps, vec![3, 5]);
    }

    #[test]
    fn cache_round_trip() {
        let t = build_order_table(2, 200).unwrap();
        let dir = std::env::temp_dir().join("romanoff-order-cache-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("a2_p200.csv");
        t.write_cache(&path).unwrap();
        let back = OrderTable::read_cache(&path).unwrap();
        assert_eq!(back.base(), 2);
        assert_eq!(back.limit(), 200);
        assert_eq!(back.entries(), t.entries());
        std::fs::remove_file(&path).ok();
    }
}
