//! The power sequence a^R(1), a^R(2), ... and the representation sieve
//! counting integers n <= x expressible as p + a^R(j) with p prime.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ntheory::{count_primes, mod_pow, sieve_primes, simple_sieve, OrderTable};
use crate::numeric::CompensatedSum;
use crate::poly::{growth_constants, horner_mod, IntPolynomial};

/// Distinct values a^R(j) <= x with their multiplicities (R need not be
/// injective), plus the index count and the maximal multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerSequence {
    pub base: u64,
    pub cap: u64,
    /// (value, multiplicity), values strictly increasing.
    pub powers: Vec<(u64, u32)>,
    /// Number of indices j >= 1 with a^R(j) <= x.
    pub index_count: u64,
    /// Largest multiplicity of a single value.
    pub max_multiplicity: u32,
}

impl PowerSequence {
    pub fn is_flagged_empty(&self) -> bool {
        self.powers.is_empty()
    }

    pub fn multiplicity_of(&self, value: u64) -> u32 {
        self.powers
            .binary_search_by_key(&value, |&(v, _)| v)
            .map(|i| self.powers[i].1)
            .unwrap_or(0)
    }
}

/// a^e if it stays at or below cap, exactly; None as soon as it exceeds.
fn checked_power_capped(a: u64, e: u64, cap: u64) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..e {
        acc = acc.checked_mul(a)?;
        if acc > cap {
            return None;
        }
    }
    Some(acc)
}

/// (index j, value a^R(j)) pairs with the value <= x, ascending in j.
///
/// The boundary comparison is exact integer arithmetic, never float logs.
/// Termination: past the growth threshold, R(j) >= c1 j^d exceeds the
/// largest admissible exponent for good, so the scan can stop.
fn admissible_indices(a: u64, r: &IntPolynomial, x: u64) -> Result<Vec<(u64, u64)>> {
    if a < 2 {
        return Err(Error::domain("base must exceed 1"));
    }
    if !r.certify_nat_to_nat() {
        return Err(Error::domain(
            "polynomial must map positive integers to positive integers",
        ));
    }
    let growth = growth_constants(r)?;
    let d = r.degree();

    // largest exponent e with a^e <= x, exact
    let mut max_exp: u64 = 0;
    let mut acc: u64 = 1;
    while let Some(next) = acc.checked_mul(a) {
        if next > x {
            break;
        }
        acc = next;
        max_exp += 1;
    }

    let max_exp_rat = BigRational::from_integer(BigInt::from(max_exp));
    let mut out = Vec::new();
    let mut j = 1u64;
    loop {
        if j >= growth.n0 && &growth.c1 * BigInt::from(j).pow(d) > max_exp_rat {
            break;
        }
        if let Some(e) = r.eval(j).to_u64() {
            if let Some(q) = checked_power_capped(a, e, x) {
                out.push((j, q));
            }
        }
        j += 1;
    }
    Ok(out)
}

/// Indices and values of the power sequence up to x.
pub fn enumerate_powers(a: u64, r: &IntPolynomial, x: u64) -> Result<PowerSequence> {
    let indices = admissible_indices(a, r, x)?;
    let mut values: std::collections::BTreeMap<u64, u32> = std::collections::BTreeMap::new();
    for &(_, q) in &indices {
        *values.entry(q).or_insert(0) += 1;
    }
    let powers: Vec<(u64, u32)> = values.into_iter().collect();
    let max_multiplicity = powers.iter().map(|&(_, m)| m).max().unwrap_or(0);
    Ok(PowerSequence {
        base: a,
        cap: x,
        powers,
        index_count: indices.len() as u64,
        max_multiplicity,
    })
}

/// Outcome of the representation sieve over [1, x].
#[derive(Debug, Clone, PartialEq)]
pub struct RepSieveResult {
    pub x: u64,
    /// Integers n <= x with at least one representation p + a^R(j) = n
    /// (set semantics: each n counted once).
    pub count: u64,
    pub density: f64,
    /// count * (ln x)^(1 - 1/d) / x.
    pub normalized: f64,
    pub pi_x: u64,
    /// Index count of the power sequence up to x.
    pub n_a: u64,
    /// pi(x) * N_A(x): the pair-count upper bound on `count`.
    pub upper_skeleton: u64,
}

pub const DEFAULT_SEGMENT_SIZE: usize = 1 << 22;
const MAX_SIEVE_SEGMENTS: u64 = 1 << 14;

/// Count n <= x representable as p + a^R(j), by a segmented bitset.
///
/// For each segment [lo, hi] of [1, x] and each power q <= x - 2, the primes
/// in [lo - q, hi - q] are generated and p + q is marked. Segments are
/// processed in parallel with private bitsets; only counts are merged, so
/// the result does not depend on the thread count.
pub fn rep_sieve(a: u64, r: &IntPolynomial, x: u64, segment_size: usize) -> Result<RepSieveResult> {
    if x < 1 {
        return Err(Error::precondition("x must be positive"));
    }
    if segment_size < 64 {
        return Err(Error::precondition("segment size below 64"));
    }
    let seg = segment_size as u64;
    let segments = x.div_ceil(seg);
    if segments > MAX_SIEVE_SEGMENTS {
        return Err(Error::resource(
            format!("sieving to x = {x} needs {segments} segments of {segment_size}"),
            "increase the segment size or raise the segment budget".to_string(),
        ));
    }

    let seq = enumerate_powers(a, r, x)?;
    let contributing: Vec<u64> = seq
        .powers
        .iter()
        .map(|&(q, _)| q)
        .filter(|&q| q + 2 <= x)
        .collect();

    let count: u64 = (0..segments)
        .into_par_iter()
        .map(|si| {
            let lo = si * seg + 1;
            let hi = (lo + seg - 1).min(x);
            let mut bits = vec![0u64; segment_size.div_ceil(64)];
            for &q in &contributing {
                if q + 2 > hi {
                    continue;
                }
                let p_lo = lo.saturating_sub(q).max(2);
                let p_hi = hi - q;
                if p_lo > p_hi {
                    continue;
                }
                for p in sieve_primes(p_lo, p_hi).expect("inner sieve within budget") {
                    let off = (p + q - lo) as usize;
                    bits[off / 64] |= 1u64 << (off % 64);
                }
            }
            bits.iter().map(|w| w.count_ones() as u64).sum::<u64>()
        })
        .sum();

    let pi_x = count_primes(x)?;
    let d = r.degree() as f64;
    let lnx = (x as f64).ln();
    let normalized = if x > 1 {
        count as f64 * lnx.powf(1.0 - 1.0 / d) / x as f64
    } else {
        0.0
    };
    Ok(RepSieveResult {
        x,
        count,
        density: count as f64 / x as f64,
        normalized,
        pi_x,
        n_a: seq.index_count,
        upper_skeleton: pi_x * seq.index_count,
    })
}

/// The two independent evaluations of the congruent-power count
/// #{n : a^R(k) < a^R(n) <= x and a^R(n) = a^R(k) (mod p)}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CongruentPowerCount {
    /// Modular exponentiation route (exponents reduced by the order).
    pub direct: u64,
    /// Congruence on R itself: R(n) = R(k) (mod ord_p(a)) over the same
    /// admissible range.
    pub structural: u64,
}

/// Count later powers congruent to the k-th one modulo p, both ways.
///
/// For p dividing a every admissible power is 0 mod p, so the congruence
/// always holds and both routes count the whole admissible range. If
/// a^R(k) >= x the range is empty and the count is 0 by convention.
pub fn congruent_power_count(
    a: u64,
    r: &IntPolynomial,
    x: u64,
    k: u64,
    p: u64,
    table: &OrderTable,
) -> Result<CongruentPowerCount> {
    let indices = admissible_indices(a, r, x)?;
    let pivot = r
        .eval(k)
        .to_u64()
        .and_then(|e| checked_power_capped(a, e, x))
        .filter(|&q| q < x);
    let Some(pivot) = pivot else {
        return Ok(CongruentPowerCount {
            direct: 0,
            structural: 0,
        });
    };

    if a % p == 0 {
        let n = indices.iter().filter(|&&(_, q)| q > pivot).count() as u64;
        return Ok(CongruentPowerCount {
            direct: n,
            structural: n,
        });
    }

    let h = table
        .order_of(p)
        .ok_or_else(|| Error::precondition(format!("order of {a} mod {p} not in the table")))?;
    let coeffs_h = r.coeffs_mod(h);
    let pivot_exp_red = horner_mod(&coeffs_h, k, h);
    let pivot_residue = mod_pow(a % p, pivot_exp_red, p);

    let mut direct = 0u64;
    let mut structural = 0u64;
    for &(j, _q) in indices.iter().filter(|&&(_, q)| q > pivot) {
        let e_red = horner_mod(&coeffs_h, j, h);
        if mod_pow(a % p, e_red, p) == pivot_residue {
            direct += 1;
        }
        if e_red == pivot_exp_red {
            structural += 1;
        }
    }
    Ok(CongruentPowerCount { direct, structural })
}

/// Empirical check of the lower-bound machinery's hypotheses on the power
/// sequence: positivity of the counting function, its halving ratio, and the
/// congruent-pair double sum against the square of the counting function,
/// split into the p | a and coprime parts.
#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisReport {
    pub x: u64,
    pub alpha: f64,
    /// (ln x)^alpha, the prime cutoff.
    pub prime_cut: f64,
    pub n_a: u64,
    pub n_a_half: u64,
    /// N_A(x/2) / N_A(x).
    pub halving_ratio: f64,
    /// Part of the double sum over primes dividing a.
    pub sum_dividing: f64,
    /// Part over primes coprime to a.
    pub sum_coprime: f64,
    /// (sum_dividing + sum_coprime) / N_A(x)^2.
    pub gamma2: f64,
}

pub fn hypothesis_report(
    a: u64,
    r: &IntPolynomial,
    x: u64,
    alpha: Option<f64>,
    table: &OrderTable,
) -> Result<HypothesisReport> {
    if x < 10 {
        return Err(Error::precondition("x must be at least 10"));
    }
    let d = r.degree();
    let alpha = alpha.unwrap_or(1.0 / (2.0 * d as f64));
    let seq = enumerate_powers(a, r, x)?;
    let half = enumerate_powers(a, r, x / 2)?;
    let n_a = seq.index_count;
    if n_a == 0 {
        return Err(Error::domain(format!("no power of {a} below {x}; raise x")));
    }

    let cut = (x as f64).ln().powf(alpha);
    let mut sum_dividing = CompensatedSum::new();
    let mut sum_coprime = CompensatedSum::new();
    if cut >= 2.0 {
        let primes = simple_sieve(cut.floor() as u64);
        let pivots: Vec<u64> = admissible_indices(a, r, x)?
            .into_iter()
            .filter(|&(_, q)| q < x)
            .map(|(k, _)| k)
            .collect();
        for &p in &primes {
            let weight = (p as f64).ln() / p as f64;
            for &k in &pivots {
                let c = congruent_power_count(a, r, x, k, p, table)?;
                debug_assert_eq!(c.direct, c.structural);
                let term = c.direct as f64 * weight;
                if a % p == 0 {
                    sum_dividing.add(term);
                } else {
                    sum_coprime.add(term);
                }
            }
        }
    }
    let s1 = sum_dividing.value();
    let s2 = sum_coprime.value();
    Ok(HypothesisReport {
        x,
        alpha,
        prime_cut: cut,
        n_a,
        n_a_half: half.index_count,
        halving_ratio: half.index_count as f64 / n_a as f64,
        sum_dividing: s1,
        sum_coprime: s2,
        gamma2: (s1 + s2) / (n_a as f64 * n_a as f64),
    })
}

/// One row per grid point of the empirical density band.
#[derive(Debug, Clone, PartialEq)]
pub struct BandRow {
    pub result: RepSieveResult,
    /// normalized value divided by the previous grid point's, when any.
    pub normalized_ratio: Option<f64>,
}

/// Run the representation sieve over an ascending grid of x values.
pub fn density_band(
    a: u64,
    r: &IntPolynomial,
    grid: &[u64],
    segment_size: usize,
) -> Result<Vec<BandRow>> {
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::precondition("grid must be strictly ascending"));
    }
    let mut rows: Vec<BandRow> = Vec::with_capacity(grid.len());
    for &x in grid {
        let result = rep_sieve(a, r, x, segment_size)?;
        let normalized_ratio = rows
            .last()
            .map(|prev: &BandRow| result.normalized / prev.result.normalized);
        rows.push(BandRow {
            result,
            normalized_ratio,
        });
    }
    Ok(rows)
}
