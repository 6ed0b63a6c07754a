//! Deterministic self-verification: every oracle equivalence and invariant
//! of the crate, exercised at desk scale. Output is reproducible byte for
//! byte for a fixed seed, independent of thread count, so it doubles as a
//! determinism probe.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use crate::congruence::{
    count_power_units, count_power_units_modpow, count_power_units_structured,
    count_roots_bruteforce, count_roots_reduced, progression_count,
};
use crate::ntheory::{
    build_order_table, factor, factor_power_minus_one, factor_u64, is_prime_u64, mod_pow,
    sieve_primes, simple_sieve, totient_ratio_exact, totient_ratio_interval, FactorBudget,
};
use crate::numeric::SplitMix64;
use crate::poly::{growth_constants, IntPolynomial};
use crate::represent::{congruent_power_count, enumerate_powers, rep_sieve};
use crate::sums::{order_weighted_sum, totient_ratio_sum_exact, RatioSumValue};

/// One verification check: a stable name and a deterministic detail line.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn random_poly(rng: &mut SplitMix64, max_degree: u64, coeff_bound: i64) -> IntPolynomial {
    let d = 1 + rng.below(max_degree) as usize;
    let mut coeffs: Vec<i64> = (0..d).map(|_| rng.range_i64(-coeff_bound, coeff_bound)).collect();
    coeffs.push(rng.range_i64(1, coeff_bound));
    IntPolynomial::from_coeffs(&coeffs).unwrap()
}

/// Run the whole suite. Checks keep going after a failure so the report is
/// complete; the caller decides what a failure means.
pub fn run_verification(seed: u64) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let mut push = |name: &'static str, passed: bool, detail: String| {
        out.push(CheckResult {
            name,
            passed,
            detail,
        });
    };

    // primality against a trial-division oracle
    {
        let mut bad = 0u64;
        for n in 0..50_000u64 {
            let oracle = {
                if n < 2 {
                    false
                } else {
                    let mut ok = true;
                    let mut d = 2;
                    while d * d <= n {
                        if n % d == 0 {
                            ok = false;
                            break;
                        }
                        d += 1;
                    }
                    ok
                }
            };
            if is_prime_u64(n) != oracle {
                bad += 1;
            }
        }
        for n in [561u64, 1105, 1729, 2465, 2821, 6601] {
            if is_prime_u64(n) {
                bad += 1;
            }
        }
        push(
            "primality-vs-trial-division",
            bad == 0,
            format!("n <= 50000 plus Carmichael spot checks, {bad} mismatches"),
        );
    }

    // segmented sieve against the simple one
    {
        let seg = sieve_primes(2, 100_000).unwrap();
        let simple = simple_sieve(100_000);
        let ok = seg == simple && seg.len() == 9_592;
        push(
            "sieve-agreement",
            ok,
            format!("{} primes below 100000", seg.len()),
        );
    }

    // factorization reconstructs its input
    {
        let mut rng = SplitMix64::new(seed ^ 0xfac7);
        let mut bad = 0;
        for _ in 0..60 {
            let n = 2 + rng.below(u64::MAX / 4);
            let fs = factor_u64(n);
            let mut acc: u128 = 1;
            for (p, e) in &fs {
                if !is_prime_u64(*p) {
                    bad += 1;
                }
                acc *= (*p as u128).pow(*e);
            }
            if acc != n as u128 {
                bad += 1;
            }
        }
        let f = factor(&num_bigint::BigUint::from(2047u32), &FactorBudget::default());
        if !(f.is_complete() && f.factors.len() == 2) {
            bad += 1;
        }
        push(
            "factor-reconstruction",
            bad == 0,
            format!("60 random u64 inputs, {bad} failures"),
        );
    }

    // algebraic pre-split equals direct factorization
    {
        let mut bad = 0;
        for (a, k) in [(2u64, 36u64), (2, 48), (3, 20), (10, 8)] {
            let pre = factor_power_minus_one(a, k, &FactorBudget::default());
            let direct = factor(
                &(num_bigint::BigUint::from(a).pow(k as u32) - 1u32),
                &FactorBudget::default(),
            );
            if !(pre.is_complete() && direct.is_complete() && pre.factors == direct.factors) {
                bad += 1;
            }
        }
        push(
            "power-pre-split",
            bad == 0,
            format!("4 bases/exponents, {bad} mismatches"),
        );
    }

    // order table invariants: h | p - 1, a^h = 1, minimality
    {
        let mut bad = 0u64;
        for a in [2u64, 3] {
            let t = build_order_table(a, 2_000).unwrap();
            for &(p, h) in t.entries() {
                if (p - 1) % h != 0 || mod_pow(a, h, p) != 1 {
                    bad += 1;
                }
                for q in crate::numeric::divisors(h) {
                    if q > 1 && mod_pow(a, h / q, p) == 1 {
                        bad += 1;
                    }
                }
            }
        }
        push(
            "order-table-invariants",
            bad == 0,
            format!("bases 2 and 3 up to 2000, {bad} violations"),
        );
    }

    // divisibility criterion vs modular exponentiation
    {
        let mut bad = 0u64;
        let mut total = 0u64;
        for a in [2u64, 3, 10] {
            let t = build_order_table(a, 2_000).unwrap();
            for &(p, h) in t.entries() {
                let mut power = 1u64;
                for k in 1..=100u64 {
                    power = crate::ntheory::mod_mul(power, a % p, p);
                    let by_order = k % h == 0;
                    if by_order != (power == 1) {
                        bad += 1;
                    }
                    total += 1;
                }
            }
        }
        push(
            "order-divisibility-criterion",
            bad == 0,
            format!("{total} (a, p, k) triples, {bad} mismatches"),
        );
    }

    // progression count vs enumeration
    {
        let mut bad = 0u64;
        for a in -30..=30i64 {
            for b in 1..=30u64 {
                for n in 1..=30u64 {
                    let brute = (-120..=120i64)
                        .filter(|&t| {
                            let v = a + b as i64 * t;
                            v >= 1 && v as u64 <= n
                        })
                        .count() as u64;
                    let got = progression_count(a, b, n);
                    if got != brute || got as f64 > n as f64 / b as f64 + 1.0 {
                        bad += 1;
                    }
                }
            }
        }
        push(
            "progression-count-grid",
            bad == 0,
            format!("61 x 30 x 30 grid, {bad} mismatches"),
        );
    }

    // gcd-reduced root counting vs brute force
    {
        let mut rng = SplitMix64::new(seed ^ 0xde17a);
        let mut bad = 0u64;
        for _ in 0..40 {
            let f = random_poly(&mut rng, 4, 20);
            for m in 1..=400u64 {
                let a = count_roots_bruteforce(&f, m).unwrap();
                let b = count_roots_reduced(&f, m).unwrap();
                if a.roots != b.roots || a.delta != b.delta || a.roots > m {
                    bad += 1;
                }
            }
        }
        push(
            "root-count-reduction",
            bad == 0,
            format!("40 random polynomials, m <= 400, {bad} mismatches"),
        );
    }

    // unit-power counting: three routes agree
    {
        let mut bad = 0u64;
        let polys = [
            IntPolynomial::from_coeffs(&[0, 1]).unwrap(),
            IntPolynomial::from_coeffs(&[0, 0, 1]).unwrap(),
            IntPolynomial::from_coeffs(&[0, 3, 1]).unwrap(),
        ];
        for a in [2u64, 3, 10] {
            let t = build_order_table(a, 100).unwrap();
            for r in &polys {
                for &(p, h) in t.entries() {
                    let direct = count_power_units(a, r, 400, p, h);
                    let structured = count_power_units_structured(a, r, 400, p, h);
                    let modpow = count_power_units_modpow(a, r, 400, p, h);
                    if direct != structured || direct != modpow {
                        bad += 1;
                    }
                }
            }
        }
        push(
            "unit-power-routes",
            bad == 0,
            format!("3 bases x 3 polynomials x primes <= 100, {bad} mismatches"),
        );
    }

    // growth constants: exact sandwich and nat-to-nat certificate
    {
        let mut rng = SplitMix64::new(seed ^ 0x96037);
        let mut bad = 0u64;
        let mut certified = 0u64;
        for _ in 0..60 {
            let f = random_poly(&mut rng, 4, 50);
            let brute_nat = (1..=2_000u64).all(|n| f.eval(n) >= BigInt::one());
            if f.certify_nat_to_nat() != brute_nat {
                bad += 1;
            }
            if !f.certify_nat_to_nat() {
                continue;
            }
            certified += 1;
            let g = growth_constants(&f).unwrap();
            let g2 = growth_constants(&f).unwrap();
            if g != g2 {
                bad += 1;
            }
            let d = f.degree();
            for n in 1..=2_000u64 {
                let nd = BigRational::from_integer(BigInt::from(n).pow(d));
                let v = BigRational::from_integer(f.eval(n));
                if !(&g.c1 * &nd <= v && v <= &g.c2 * &nd) {
                    bad += 1;
                }
            }
        }
        push(
            "growth-constants-sandwich",
            bad == 0,
            format!("60 random polynomials ({certified} admissible), n <= 2000, {bad} violations"),
        );
    }

    // totient-ratio interval encloses the exact value
    {
        let mut bad = 0u64;
        for a in [2u64, 3] {
            let t = build_order_table(a, 1_000).unwrap();
            for k in 1..=40u64 {
                let m = factor_power_minus_one(a, k, &FactorBudget::default());
                if !m.is_complete() {
                    bad += 1;
                    continue;
                }
                let truth = totient_ratio_exact(&m).unwrap();
                let iv = totient_ratio_interval(a, k, &t);
                if !(iv.lo <= truth && truth <= iv.hi && iv.lo >= BigRational::one()) {
                    bad += 1;
                }
            }
        }
        push(
            "totient-interval-enclosure",
            bad == 0,
            format!("a in {{2, 3}}, k <= 40, {bad} violations"),
        );
    }

    // exact ratio sums: frozen value, lower bound, enclosure
    {
        let rn = IntPolynomial::from_coeffs(&[0, 1]).unwrap();
        let budget = FactorBudget::default();
        let mut bad = 0u64;
        let s4 = totient_ratio_sum_exact(2, &rn, 1, 4, &budget).unwrap();
        match &s4.value {
            RatioSumValue::Exact(v) => {
                if v != &BigRational::new(BigInt::from(133), BigInt::from(24)) {
                    bad += 1;
                }
            }
            _ => bad += 1,
        }
        for a in [2u64, 3] {
            let t = build_order_table(a, 10_000).unwrap();
            let exact = totient_ratio_sum_exact(a, &rn, 1, 20, &budget).unwrap();
            let exact_val = match &exact.value {
                RatioSumValue::Exact(v) => v.clone(),
                _ => unreachable!(),
            };
            if exact_val < BigRational::from_integer(BigInt::from(20)) {
                bad += 1;
            }
            let iv = crate::sums::totient_ratio_sum_interval(a, &rn, 1, 20, &t).unwrap();
            let truth = exact_val.to_f64().unwrap();
            if !(iv.lo_f64() <= truth + 1e-9 && truth <= iv.hi_f64() + 1e-9) {
                bad += 1;
            }
        }
        push(
            "ratio-sum-exact",
            bad == 0,
            format!("frozen 133/24 plus N = 20 enclosures, {bad} failures"),
        );
    }

    // Abel summation identity for the order-weighted series
    {
        let mut worst: f64 = 0.0;
        for a in [2u64, 3] {
            let t = build_order_table(a, 10_000).unwrap();
            for d in [1u32, 2, 3] {
                for s in [1u32, 2] {
                    let r = order_weighted_sum(d, s, 10_000, &t).unwrap();
                    let rel = (r.value - r.value_by_parts).abs() / r.value;
                    worst = worst.max(rel);
                }
            }
        }
        push(
            "abel-summation-identity",
            worst <= 1e-9,
            format!("worst relative gap {worst:.3e} (allowed 1e-9)"),
        );
    }

    // representation sieve vs the naive pair oracle, plus segmentation
    {
        let mut bad = 0u64;
        for a in [2u64, 3] {
            for coeffs in [&[0i64, 1][..], &[0, 0, 1]] {
                let r = IntPolynomial::from_coeffs(coeffs).unwrap();
                for x in [20u64, 100, 500, 1500] {
                    let got = rep_sieve(a, &r, x, 1 << 12).unwrap().count;
                    let powers = enumerate_powers(a, &r, x).unwrap();
                    let primes = simple_sieve(x);
                    let mut marked = vec![false; x as usize + 1];
                    for &(q, _) in &powers.powers {
                        for &p in &primes {
                            if p + q <= x {
                                marked[(p + q) as usize] = true;
                            }
                        }
                    }
                    let want = marked.iter().filter(|&&b| b).count() as u64;
                    if got != want {
                        bad += 1;
                    }
                }
            }
        }
        let rn = IntPolynomial::from_coeffs(&[0, 1]).unwrap();
        let c1 = rep_sieve(2, &rn, 40_000, 1 << 12).unwrap().count;
        let c2 = rep_sieve(2, &rn, 40_000, 1 << 15).unwrap().count;
        let c3 = rep_sieve(2, &rn, 40_000, 40_000).unwrap().count;
        if !(c1 == c2 && c2 == c3) {
            bad += 1;
        }
        push(
            "representation-sieve",
            bad == 0,
            format!("pair oracle to x = 1500 and 3 segmentations at 40000, {bad} failures"),
        );
    }

    // congruent-power counts: both routes agree
    {
        let t2 = build_order_table(2, 100).unwrap();
        let mut bad = 0u64;
        for coeffs in [&[0i64, 1][..], &[0, 0, 1]] {
            let r = IntPolynomial::from_coeffs(coeffs).unwrap();
            for k in 1..=6u64 {
                for p in [2u64, 3, 5, 7, 11, 29] {
                    let c = congruent_power_count(2, &r, 5_000, k, p, &t2).unwrap();
                    if c.direct != c.structural {
                        bad += 1;
                    }
                }
            }
        }
        push(
            "congruent-power-routes",
            bad == 0,
            format!("2 polynomials x 6 pivots x 6 primes, {bad} mismatches"),
        );
    }

    // enumerator multiplicity bound: 1 <= max multiplicity <= degree
    {
        let mut bad = 0u64;
        for (coeffs, x) in [(&[5i64, -4, 1][..], 100u64), (&[0, 1], 1024), (&[0, 0, 1], 4096)] {
            let r = IntPolynomial::from_coeffs(coeffs).unwrap();
            let seq = enumerate_powers(2, &r, x).unwrap();
            if seq.index_count > 0
                && !(1 <= seq.max_multiplicity && seq.max_multiplicity <= r.degree())
            {
                bad += 1;
            }
        }
        push(
            "power-multiplicity-bound",
            bad == 0,
            format!("3 sequences, {bad} violations"),
        );
    }

    out
}

/// Render the suite as stable text, one line per check.
pub fn render_report(results: &[CheckResult]) -> String {
    let mut s = String::new();
    for r in results {
        let status = if r.passed { "ok" } else { "FAIL" };
        s.push_str(&format!("{status} {} - {}\n", r.name, r.detail));
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    s.push_str(&format!(
        "{} checks, {} failed\n",
        results.len(),
        failed
    ));
    s
}
