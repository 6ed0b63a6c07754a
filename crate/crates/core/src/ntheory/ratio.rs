//! Exact and certified-interval evaluation of m / phi(m), with the interval
//! form specialized to m = a^k - 1 driven by an order table.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::factorize::FactoredInteger;
use super::order::OrderTable;
use crate::error::{Error, Result};
use crate::numeric::next_up;

/// Largest a^k - 1 (in bits) that the interval routine will materialize to
/// decide exactness.
const EXACT_CHECK_BITS: u64 = 1 << 14;

/// Certified enclosure of m / phi(m).
#[derive(Debug, Clone, PartialEq)]
pub struct RatioInterval {
    /// Product of p / (p - 1) over the known prime divisors; always a true
    /// lower bound and at least 1.
    pub lo: BigRational,
    /// Upper bound after charging every possible unknown prime divisor.
    pub hi: BigRational,
    /// True iff lo = hi equals the true ratio.
    pub exact: bool,
}

/// m / phi(m) from a complete factorization: the product of p / (p - 1) over
/// the distinct primes dividing m. Returns 1 for m = 1.
pub fn totient_ratio_exact(m: &FactoredInteger) -> Result<BigRational> {
    if !m.is_complete() {
        return Err(Error::precondition(
            "totient ratio needs a complete factorization",
        ));
    }
    let mut ratio = BigRational::one();
    for (p, _) in &m.factors {
        let p = BigInt::from(p.clone());
        ratio *= BigRational::new(p.clone(), p - 1);
    }
    Ok(ratio)
}

/// Certified enclosure of (a^k - 1) / phi(a^k - 1) from the order table.
///
/// A prime p with gcd(a, p) = 1 divides a^k - 1 exactly when its order
/// divides k, so the table pins down every prime divisor up to its limit P
/// (primes dividing a never divide a^k - 1). Each unknown prime q > P
/// contributes ln(q/(q-1)) < 1/(P-1), and there are fewer than
/// k ln a / ln P of them, so the upper slack factor is
/// exp(k ln a / ((P-1) ln P)), rounded outward in float arithmetic.
pub fn totient_ratio_interval(a: u64, k: u64, table: &OrderTable) -> RatioInterval {
    assert_eq!(table.base(), a, "order table built for a different base");
    assert!(k >= 1);
    let limit = table.limit();

    let mut lo = BigRational::one();
    let known = table.primes_with_order_dividing(k, limit);
    for &p in &known {
        let p = BigInt::from(p);
        lo *= BigRational::new(p.clone(), p - 1);
    }

    // Exactness: divide the known primes out of a^k - 1 when it is small
    // enough to materialize.
    let bits_estimate = k as f64 * (a as f64).log2();
    if bits_estimate <= EXACT_CHECK_BITS as f64 {
        let mut m = BigUint::from(a).pow(u32::try_from(k).unwrap()) - 1u32;
        for &p in &known {
            let pb = BigUint::from(p);
            while (&m % &pb).is_zero() {
                m /= &pb;
            }
        }
        if m.is_one() {
            return RatioInterval {
                hi: lo.clone(),
                lo,
                exact: true,
            };
        }
    }

    let exponent =
        (k as f64) * (a as f64).ln() / (((limit - 1) as f64) * (limit as f64).ln()) * (1.0 + 1e-12);
    let slack = next_up(next_up(exponent.exp()));
    let slack = BigRational::from_float(slack).expect("finite slack");
    let hi = &lo * slack;
    RatioInterval { lo, hi, exact: false }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ntheory::factorize::{factor_power_minus_one, FactorBudget};
    use crate::ntheory::order::build_order_table;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn exact_examples() {
        let f15 = FactoredInteger::from_u64(15);
        assert_eq!(totient_ratio_exact(&f15).unwrap(), rat(15, 8));
        let f63 = FactoredInteger::from_u64(63);
        assert_eq!(totient_ratio_exact(&f63).unwrap(), rat(7, 4));
        let f1 = FactoredInteger::from_u64(1);
        assert_eq!(totient_ratio_exact(&f1).unwrap(), rat(1, 1));
    }

    #[test]
    fn exact_rejects_incomplete() {
        let inc = crate::ntheory::factor(
            &BigUint::from(1_000_003u64 * 1_000_033),
            &FactorBudget {
                steps: 4,
                trial_bound: 10,
            },
        );
        assert!(totient_ratio_exact(&inc).is_err());
    }

    #[test]
    fn interval_fully_known() {
        let t = build_order_table(2, 100).unwrap();
        let iv = totient_ratio_interval(2, 4, &t);
        assert!(iv.exact);
        assert_eq!(iv.lo, rat(15, 8));
        assert_eq!(iv.hi, rat(15, 8));
    }

    #[test]
    fn interval_trivial_value() {
        let t = build_order_table(2, 100).unwrap();
        let iv = totient_ratio_interval(2, 1, &t);
        assert!(iv.exact);
        assert_eq!(iv.lo, rat(1, 1));
    }

    #[test]
    fn interval_with_unknown_tail() {
        // P = 10 sees no divisor of 2^11 - 1 = 2047 = 23 * 89.
        let t = build_order_table(2, 10).unwrap();
        let iv = totient_ratio_interval(2, 11, &t);
        assert!(!iv.exact);
        assert_eq!(iv.lo, rat(1, 1));
        let truth = rat(2047, 1936);
        assert!(iv.lo <= truth && truth <= iv.hi);
        // hi = exp(11 ln 2 / (9 ln 10)) ~ 1.445
        let hi_f = iv.hi.numer().to_string().parse::<f64>().unwrap()
            / iv.hi.denom().to_string().parse::<f64>().unwrap();
        assert!((hi_f - 1.4447).abs() < 1e-3, "hi = {hi_f}");
    }

    #[test]
    fn interval_encloses_exact_small_grid() {
        for a in [2u64, 3] {
            let t = build_order_table(a, 1000).unwrap();
            for k in 1..=48u64 {
                let m = factor_power_minus_one(a, k, &FactorBudget::default());
                assert!(m.is_complete(), "a={a} k={k}");
                let truth = totient_ratio_exact(&m).unwrap();
                let iv = totient_ratio_interval(a, k, &t);
                assert!(iv.lo <= truth, "lo fails a={a} k={k}");
                assert!(truth <= iv.hi, "hi fails a={a} k={k}");
                assert!(iv.lo >= BigRational::one());
                if iv.exact {
                    assert_eq!(iv.lo, truth, "exact flag wrong a={a} k={k}");
                }
            }
        }
    }
}
