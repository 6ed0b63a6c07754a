//! Prime-sum quantities: log-weighted sums over the prime divisors of a
//! factored integer, order-weighted series with an Abel-summation
//! cross-check, totient-ratio power sums in exact and certified-interval
//! modes, and the sieve-style bound report for lists of integers.

use num_rational::BigRational;
use num_traits::{Pow, ToPrimitive};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ntheory::{
    factor_power_minus_one, totient_ratio_exact, totient_ratio_interval, FactorBudget,
    FactoredInteger, OrderTable,
};
use crate::numeric::{ln_big, ln_ln_big, CompensatedSum};
use crate::poly::IntPolynomial;

/// A float sum against the shape of its proven bound. The bound's absolute
/// constant is never specified, so the report carries the empirical ratio.
#[derive(Debug, Clone, PartialEq)]
pub struct SumReport {
    pub value: f64,
    pub bound_rhs: f64,
    pub implied_constant: f64,
}

/// sum over the distinct primes p | n of (ln p)^s / p, against the shape
/// s^s (ln ln n)^s. Needs n >= 3 and a complete factorization.
pub fn prime_log_sum(n: &FactoredInteger, s: u32) -> Result<SumReport> {
    if !n.is_complete() {
        return Err(Error::precondition("prime_log_sum needs all prime factors"));
    }
    if n.value.to_u64().is_some_and(|v| v < 3) {
        return Err(Error::domain("prime_log_sum requires n >= 3"));
    }
    let mut acc = CompensatedSum::new();
    for (p, _) in &n.factors {
        let lp = ln_big(p);
        acc.add(lp.powi(s as i32) / p.to_f64().unwrap_or(f64::INFINITY));
    }
    let value = acc.value();
    let bound_rhs = (s as f64).powi(s as i32) * ln_ln_big(&n.value).powi(s as i32);
    Ok(SumReport {
        value,
        bound_rhs,
        implied_constant: value / bound_rhs,
    })
}

/// Per-order totals w_h = sum of (ln p)^s / p over table primes with order h,
/// plus the cumulative step function z -> sum of w_h for h <= z.
#[derive(Debug, Clone)]
pub struct OrderWeightTable {
    base: u64,
    s: u32,
    p_limit: u64,
    /// (order, weight), ascending in order.
    weights: Vec<(u64, f64)>,
    /// (order, cumulative weight up to and including this order).
    cumulative: Vec<(u64, f64)>,
}

impl OrderWeightTable {
    /// Bin (ln p)^s / p by the order of the base mod p, over table primes
    /// p <= p_limit.
    pub fn build(s: u32, p_limit: u64, table: &OrderTable) -> Result<Self> {
        if p_limit > table.limit() {
            return Err(Error::precondition(format!(
                "weight table limit {p_limit} exceeds order table limit {}",
                table.limit()
            )));
        }
        let mut bins: std::collections::BTreeMap<u64, CompensatedSum> =
            std::collections::BTreeMap::new();
        for &(p, h) in table.entries() {
            if p > p_limit {
                break;
            }
            let term = (p as f64).ln().powi(s as i32) / p as f64;
            bins.entry(h).or_default().add(term);
        }
        let weights: Vec<(u64, f64)> = bins.into_iter().map(|(h, s)| (h, s.value())).collect();
        let mut running = CompensatedSum::new();
        let cumulative = weights
            .iter()
            .map(|&(h, w)| {
                running.add(w);
                (h, running.value())
            })
            .collect();
        Ok(Self {
            base: table.base(),
            s,
            p_limit,
            weights,
            cumulative,
        })
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn exponent(&self) -> u32 {
        self.s
    }

    pub fn p_limit(&self) -> u64 {
        self.p_limit
    }

    pub fn weights(&self) -> &[(u64, f64)] {
        &self.weights
    }

    pub fn weight(&self, h: u64) -> f64 {
        self.weights
            .binary_search_by_key(&h, |&(o, _)| o)
            .map(|i| self.weights[i].1)
            .unwrap_or(0.0)
    }

    /// Cumulative value: sum of weights with order <= z.
    pub fn cumulative(&self, z: f64) -> f64 {
        if z < 0.0 {
            return 0.0;
        }
        let zi = z.floor() as u64;
        match self.cumulative.binary_search_by_key(&zi, |&(h, _)| h) {
            Ok(i) => self.cumulative[i].1,
            Err(0) => 0.0,
            Err(i) => self.cumulative[i - 1].1,
        }
    }

    pub fn total(&self) -> f64 {
        self.cumulative.last().map(|&(_, g)| g).unwrap_or(0.0)
    }
}

/// Direct and Abel-summed evaluation of the order-weighted series
/// sum over table primes p <= p_limit of (ln p)^s / (p * h^(1/d)).
#[derive(Debug, Clone, PartialEq)]
pub struct OrderSeriesSum {
    /// Term-by-term value.
    pub value: f64,
    /// Boundary term plus the closed-form piecewise integral of the
    /// cumulative step function: G(P)/P^(1/d) + (1/d) int_1^P G(t) t^(-1-1/d) dt.
    /// Identical mathematics, so it must match `value` to float accuracy.
    pub value_by_parts: f64,
}

pub fn order_weighted_sum(
    d: u32,
    s: u32,
    p_limit: u64,
    table: &OrderTable,
) -> Result<OrderSeriesSum> {
    if p_limit > table.limit() {
        return Err(Error::precondition(format!(
            "sum limit {p_limit} exceeds order table limit {}",
            table.limit()
        )));
    }
    if d < 1 {
        return Err(Error::domain("degree must be at least 1"));
    }
    let inv_d = 1.0 / d as f64;

    let mut direct = CompensatedSum::new();
    for &(p, h) in table.entries() {
        if p > p_limit {
            break;
        }
        direct.add((p as f64).ln().powi(s as i32) / (p as f64 * (h as f64).powf(inv_d)));
    }

    let wt = OrderWeightTable::build(s, p_limit, table)?;
    let mut by_parts = CompensatedSum::new();
    let total = wt.total();
    by_parts.add(total / (p_limit as f64).powf(inv_d));
    // G is constant between consecutive breakpoints, so each piece of the
    // integral is G_i * d * (t_i^(-1/d) - t_{i+1}^(-1/d)); the leading 1/d
    // cancels.
    let cum = &wt.cumulative;
    for (i, &(h, g)) in cum.iter().enumerate() {
        let t_next = if i + 1 < cum.len() {
            cum[i + 1].0 as f64
        } else {
            p_limit as f64
        };
        by_parts.add(g * ((h as f64).powf(-inv_d) - t_next.powf(-inv_d)));
    }

    Ok(OrderSeriesSum {
        value: direct.value(),
        value_by_parts: by_parts.value(),
    })
}

/// Evaluation mode for the totient-ratio power sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SumMode {
    Exact,
    Interval,
}

impl std::fmt::Display for SumMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SumMode::Exact => write!(f, "exact"),
            SumMode::Interval => write!(f, "interval"),
        }
    }
}

/// Value of sum over n <= N of ((a^R(n) - 1) / phi(a^R(n) - 1))^s.
#[derive(Debug, Clone, PartialEq)]
pub enum RatioSumValue {
    Exact(BigRational),
    Interval { lo: f64, hi: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerRatioSum {
    pub terms: u64,
    pub value: RatioSumValue,
}

impl PowerRatioSum {
    pub fn mode(&self) -> SumMode {
        match self.value {
            RatioSumValue::Exact(_) => SumMode::Exact,
            RatioSumValue::Interval { .. } => SumMode::Interval,
        }
    }

    pub fn lo_f64(&self) -> f64 {
        match &self.value {
            RatioSumValue::Exact(v) => v.to_f64().unwrap_or(f64::NAN),
            RatioSumValue::Interval { lo, .. } => *lo,
        }
    }

    pub fn hi_f64(&self) -> f64 {
        match &self.value {
            RatioSumValue::Exact(v) => v.to_f64().unwrap_or(f64::NAN),
            RatioSumValue::Interval { hi, .. } => *hi,
        }
    }

    /// Sum divided by the term count, lower end.
    pub fn ratio_lo(&self) -> f64 {
        self.lo_f64() / self.terms as f64
    }

    pub fn ratio_hi(&self) -> f64 {
        self.hi_f64() / self.terms as f64
    }
}

fn exponent_of(r: &IntPolynomial, n: u64) -> Result<u64> {
    r.eval(n).to_u64().ok_or_else(|| {
        Error::BudgetExhausted(format!(
            "exponent R({n}) does not fit the working range; use interval mode"
        ))
    })
}

/// Bits of a^k - 1 acceptable in exact mode.
const EXACT_MODE_BIT_CAP: f64 = (1u64 << 24) as f64;

/// Exact-rational evaluation: every a^R(n) - 1 is factored completely (with
/// the algebraic pre-split) and the ratios are summed as big rationals. Each
/// term gets a fresh copy of the step budget; if any term cannot be finished
/// the call fails with advice to use interval mode instead.
pub fn totient_ratio_sum_exact(
    a: u64,
    r: &IntPolynomial,
    s: u32,
    n_terms: u64,
    budget: &FactorBudget,
) -> Result<PowerRatioSum> {
    check_sum_inputs(a, r, s, n_terms)?;
    let ratios: Vec<Result<BigRational>> = (1..=n_terms)
        .into_par_iter()
        .map(|n| {
            let k = exponent_of(r, n)?;
            if k as f64 * (a as f64).log2() > EXACT_MODE_BIT_CAP {
                return Err(Error::BudgetExhausted(format!(
                    "a^R({n}) - 1 exceeds the exact-mode size cap; use interval mode"
                )));
            }
            let m = factor_power_minus_one(a, k, budget);
            if !m.is_complete() {
                return Err(Error::BudgetExhausted(format!(
                    "factor budget exhausted on a^R({n}) - 1 (cofactor of {} bits); \
                     use interval mode",
                    m.cofactor.bits()
                )));
            }
            Ok(totient_ratio_exact(&m)?.pow(s as i32))
        })
        .collect();
    let mut sum = BigRational::from_integer(0.into());
    for r in ratios {
        sum += r?;
    }
    Ok(PowerRatioSum {
        terms: n_terms,
        value: RatioSumValue::Exact(sum),
    })
}

/// Certified-interval evaluation from the order table: term enclosures
/// [lo, hi] for each ratio are raised to the s-th power and accumulated with
/// compensated float summation.
pub fn totient_ratio_sum_interval(
    a: u64,
    r: &IntPolynomial,
    s: u32,
    n_terms: u64,
    table: &OrderTable,
) -> Result<PowerRatioSum> {
    check_sum_inputs(a, r, s, n_terms)?;
    if table.base() != a {
        return Err(Error::precondition("order table built for another base"));
    }
    let bounds: Vec<Result<(f64, f64)>> = (1..=n_terms)
        .into_par_iter()
        .map(|n| {
            let k = exponent_of(r, n)?;
            let iv = totient_ratio_interval(a, k, table);
            let lo = iv.lo.pow(s as i32).to_f64().unwrap_or(f64::NAN);
            let hi = iv.hi.pow(s as i32).to_f64().unwrap_or(f64::NAN);
            Ok((lo, hi))
        })
        .collect();
    let mut lo_sum = CompensatedSum::new();
    let mut hi_sum = CompensatedSum::new();
    for b in bounds {
        let (lo, hi) = b?;
        lo_sum.add(lo);
        hi_sum.add(hi);
    }
    Ok(PowerRatioSum {
        terms: n_terms,
        value: RatioSumValue::Interval {
            lo: lo_sum.value(),
            hi: hi_sum.value(),
        },
    })
}

fn check_sum_inputs(a: u64, r: &IntPolynomial, s: u32, n_terms: u64) -> Result<()> {
    if a < 2 {
        return Err(Error::domain("base must exceed 1"));
    }
    if s < 1 {
        return Err(Error::domain("exponent s must be at least 1"));
    }
    if n_terms < 1 {
        return Err(Error::domain("need at least one term"));
    }
    if !r.certify_nat_to_nat() {
        return Err(Error::domain(
            "polynomial must map positive integers to positive integers",
        ));
    }
    Ok(())
}

/// Bound report for a list of positive integers a_1..a_N <= M:
/// the exact left side sum of (a_n / phi(a_n))^s against the skeleton
/// N + sum over p <= (ln M)^alpha of omega(p) (ln p)^s / p, where omega(p)
/// counts the list entries divisible by p.
#[derive(Debug, Clone, PartialEq)]
pub struct TotientSumBound {
    pub terms: u64,
    pub lhs: BigRational,
    pub rhs_skeleton: f64,
    /// (lhs / rhs)^(1/s): the empirical constant of the bound.
    pub implied_constant: f64,
}

pub fn totient_sum_report(
    values: &[u64],
    m_cap: f64,
    s: u32,
    alpha: f64,
) -> Result<TotientSumBound> {
    if values.is_empty() {
        return Err(Error::domain("need at least one value"));
    }
    if !(0.0 < alpha && alpha < 1.0) {
        return Err(Error::domain("alpha must lie in (0, 1)"));
    }
    for &v in values {
        if v < 1 {
            return Err(Error::domain("values must be positive"));
        }
        if v as f64 > m_cap {
            return Err(Error::precondition(format!("value {v} exceeds cap {m_cap}")));
        }
    }

    let mut lhs = BigRational::from_integer(0.into());
    for &v in values {
        let f = FactoredInteger::from_u64(v);
        lhs += totient_ratio_exact(&f)?.pow(s as i32);
    }

    let cut = m_cap.ln().powf(alpha);
    let mut rhs = CompensatedSum::new();
    rhs.add(values.len() as f64);
    if cut >= 2.0 {
        for p in crate::ntheory::simple_sieve(cut.floor() as u64) {
            let omega = values.iter().filter(|&&v| v % p == 0).count() as f64;
            rhs.add(omega * (p as f64).ln().powi(s as i32) / p as f64);
        }
    }
    let rhs_skeleton = rhs.value();
    let implied_constant = (lhs.to_f64().unwrap_or(f64::NAN) / rhs_skeleton).powf(1.0 / s as f64);
    Ok(TotientSumBound {
        terms: values.len() as u64,
        lhs,
        rhs_skeleton,
        implied_constant,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ntheory::build_order_table;
    use num_bigint::BigInt;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn prime_log_sum_examples() {
        let f12 = FactoredInteger::from_u64(12);
        let r = prime_log_sum(&f12, 1).unwrap();
        let expect = 2f64.ln() / 2.0 + 3f64.ln() / 3.0;
        assert!((r.value - expect).abs() < 1e-12);
        assert!((r.value - 0.71270).abs() < 1e-4);

        let r2 = prime_log_sum(&f12, 2).unwrap();
        let expect2 = 2f64.ln().powi(2) / 2.0 + 3f64.ln().powi(2) / 3.0;
        assert!((r2.value - expect2).abs() < 1e-12);
        assert!((r2.value - 0.64262).abs() < 1e-4);

        let f4 = FactoredInteger::from_u64(4);
        let r3 = prime_log_sum(&f4, 1).unwrap();
        assert!((r3.value - 2f64.ln() / 2.0).abs() < 1e-12);

        assert!(prime_log_sum(&FactoredInteger::from_u64(2), 1).is_err());
    }

    #[test]
    fn prime_log_sum_depends_only_on_radical() {
        let a = FactoredInteger::from_u64(12);
        let b = FactoredInteger::from_u64(12 * 12 * 3);
        let ra = prime_log_sum(&a, 2).unwrap();
        let rb = prime_log_sum(&b, 2).unwrap();
        assert_eq!(ra.value, rb.value);
    }

    #[test]
    fn weight_table_base2_limit20() {
        let t = build_order_table(2, 20).unwrap();
        let wt = OrderWeightTable::build(1, 20, &t).unwrap();
        let close = |x: f64, y: f64| (x - y).abs() < 1e-12;
        assert!(close(wt.weight(2), 3f64.ln() / 3.0));
        assert!(close(wt.weight(3), 7f64.ln() / 7.0));
        assert!(close(wt.weight(4), 5f64.ln() / 5.0));
        assert!(close(wt.weight(8), 17f64.ln() / 17.0));
        assert!(close(wt.weight(10), 11f64.ln() / 11.0));
        assert!(close(wt.weight(12), 13f64.ln() / 13.0));
        assert!(close(wt.weight(18), 19f64.ln() / 19.0));
        assert!(close(wt.weight(5), 0.0));
        // G(4) = w2 + w3 + w4
        assert!((wt.cumulative(4.0) - 0.96607).abs() < 1e-4);
        // G flat at and past the last breakpoint
        assert_eq!(wt.cumulative(19.0), wt.total());
    }

    #[test]
    fn weight_table_empty() {
        let t = build_order_table(2, 2).unwrap();
        let wt = OrderWeightTable::build(1, 2, &t).unwrap();
        assert_eq!(wt.total(), 0.0);
        assert_eq!(wt.cumulative(100.0), 0.0);
    }

    #[test]
    fn order_weighted_sum_examples() {
        let t = build_order_table(2, 20).unwrap();
        let s = order_weighted_sum(1, 1, 20, &t).unwrap();
        let expect = 3f64.ln() / 6.0
            + 5f64.ln() / 20.0
            + 7f64.ln() / 21.0
            + 11f64.ln() / 110.0
            + 13f64.ln() / 156.0
            + 17f64.ln() / 136.0
            + 19f64.ln() / 342.0;
        assert!((s.value - expect).abs() < 1e-12);
        assert!((s.value - 0.4239).abs() < 1e-4);

        let t3 = build_order_table(2, 3).unwrap();
        let s2 = order_weighted_sum(2, 1, 3, &t3).unwrap();
        assert!((s2.value - 3f64.ln() / (3.0 * 2f64.sqrt())).abs() < 1e-12);
        assert!((s2.value - 0.25894).abs() < 1e-4);
    }

    #[test]
    fn abel_identity_matches_direct() {
        for a in [2u64, 3, 10] {
            let t = build_order_table(a, 10_000).unwrap();
            for d in [1u32, 2, 3] {
                for s in [1u32, 2] {
                    let r = order_weighted_sum(d, s, 10_000, &t).unwrap();
                    let rel = (r.value - r.value_by_parts).abs() / r.value;
                    assert!(rel <= 1e-9, "a={a} d={d} s={s}: rel={rel:.3e}");
                }
            }
        }
    }

    #[test]
    fn ratio_sum_exact_examples() {
        let rn = IntPolynomial::from_coeffs(&[0, 1]).unwrap();
        let budget = FactorBudget::default();
        // a=2, R=n, s=1, N=4: 1 + 3/2 + 7/6 + 15/8 = 133/24
        let s = totient_ratio_sum_exact(2, &rn, 1, 4, &budget).unwrap();
        match &s.value {
            RatioSumValue::Exact(v) => assert_eq!(v, &rat(133, 24)),
            _ => panic!("expected exact"),
        }
        assert!((s.ratio_lo() - 1.3854).abs() < 1e-3);
        // N=1: single term of value 1
        let s1 = totient_ratio_sum_exact(2, &rn, 1, 1, &budget).unwrap();
        match &s1.value {
            RatioSumValue::Exact(v) => assert!(v.is_one()),
            _ => panic!(),
        }
        // a=3, R=n, s=2, N=2: 1 + (8/phi(8))^2 = 5
        let s2 = totient_ratio_sum_exact(3, &rn, 2, 2, &budget).unwrap();
        match &s2.value {
            RatioSumValue::Exact(v) => assert_eq!(v, &rat(5, 1)),
            _ => panic!(),
        }
    }

    #[test]
    fn ratio_sum_exact_budget_error() {
        let rn = IntPolynomial::from_coeffs(&[0, 1]).unwrap();
        let tiny = FactorBudget {
            steps: 2,
            trial_bound: 3,
        };
        let err = totient_ratio_sum_exact(2, &rn, 1, 40, &tiny).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("interval mode"), "{msg}");
    }

    #[test]
    fn ratio_sum_interval_encloses_exact() {
        let table = build_order_table(2, 10_000).unwrap();
        let rn = IntPolynomial::from_coeffs(&[0, 1]).unwrap();
        let exact = totient_ratio_sum_exact(2, &rn, 1, 25, &FactorBudget::default()).unwrap();
        let iv = totient_ratio_sum_interval(2, &rn, 1, 25, &table).unwrap();
        let truth = exact.lo_f64();
        assert!(iv.lo_f64() <= truth + 1e-9 && truth <= iv.hi_f64() + 1e-9);
        assert!(truth >= 25.0, "sum is at least the term count");
    }

    #[test]
    fn totient_sum_report_examples() {
        // (1,2,3,4), M=4, s=1, alpha=1/2: no primes below (ln 4)^0.5, LHS 13/2
        let r = totient_sum_report(&[1, 2, 3, 4], 4.0, 1, 0.5).unwrap();
        assert_eq!(r.lhs, rat(13, 2));
        assert_eq!(r.rhs_skeleton, 4.0);
        assert!((r.implied_constant - 1.625).abs() < 1e-12);

        // single value 1 with M = e: cut is exactly 1, RHS = 1, C = 1
        let r1 = totient_sum_report(&[1], std::f64::consts::E, 1, 0.5).unwrap();
        assert_eq!(r1.lhs, rat(1, 1));
        assert_eq!(r1.rhs_skeleton, 1.0);
        assert!((r1.implied_constant - 1.0).abs() < 1e-12);

        // (6,6,6), M=6, s=1, alpha=0.9: LHS = 9, RHS = 3, C = 3
        let r6 = totient_sum_report(&[6, 6, 6], 6.0, 1, 0.9).unwrap();
        assert_eq!(r6.lhs, rat(9, 1));
        assert_eq!(r6.rhs_skeleton, 3.0);
        assert!((r6.implied_constant - 3.0).abs() < 1e-12);
    }
}
