//! Integer polynomials R(n) = b_d n^d + ... + b_0 with b_d > 0, together with
//! the constructive growth constants c1 n^d <= R(n) <= c2 n^d.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Polynomial with integer coefficients, positive leading coefficient and
/// degree at least 1. Coefficients are stored ascending (b_0 first).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    /// Build from ascending coefficients (b_0, ..., b_d).
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::domain("degree must be at least 1"));
        }
        let lead = coeffs.last().unwrap();
        if !lead.is_positive() {
            return Err(Error::domain("leading coefficient must be positive"));
        }
        Ok(Self { coeffs })
    }

    /// Convenience constructor from i64 coefficients, ascending.
    pub fn from_coeffs(coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Parse the text format used by the CLI and by files: comma-separated
    /// coefficients, highest degree first. "1,3,0" is n^2 + 3n.
    pub fn parse(text: &str) -> Result<Self> {
        let mut coeffs: Vec<BigInt> = Vec::new();
        for part in text.split(',') {
            let part = part.trim();
            let c: BigInt = part
                .parse()
                .map_err(|_| Error::domain(format!("bad coefficient {part:?}")))?;
            coeffs.push(c);
        }
        coeffs.reverse();
        Self::new(coeffs)
    }

    /// Render in the CLI text format (highest degree first).
    pub fn to_text(&self) -> String {
        let parts: Vec<String> = self.coeffs.iter().rev().map(|c| c.to_string()).collect();
        parts.join(",")
    }

    pub fn degree(&self) -> u32 {
        (self.coeffs.len() - 1) as u32
    }

    pub fn leading(&self) -> &BigInt {
        self.coeffs.last().unwrap()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Exact evaluation at a positive integer by Horner's rule.
    pub fn eval(&self, n: u64) -> BigInt {
        let x = BigInt::from(n);
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * &x + c;
        }
        acc
    }

    /// Coefficients reduced into [0, m), ascending. Horner scans over many
    /// arguments reduce once and reuse.
    pub fn coeffs_mod(&self, m: u64) -> Vec<u64> {
        assert!(m >= 1);
        let mm = BigInt::from(m);
        self.coeffs
            .iter()
            .map(|c| {
                let r = c.mod_floor(&mm);
                r.to_u64().expect("reduced residue fits u64")
            })
            .collect()
    }

    /// R(x) mod m for a single argument.
    pub fn eval_mod(&self, x: u64, m: u64) -> u64 {
        horner_mod(&self.coeffs_mod(m), x, m)
    }

    /// True iff R(n) >= 1 for every n >= 1.
    ///
    /// Checks n up to the tail threshold exhaustively; past it the lower
    /// sandwich bound R(n) >= b_d n^d / 2 >= 1/2 applies, and an integer
    /// valued polynomial above 1/2 is at least 1.
    pub fn certify_nat_to_nat(&self) -> bool {
        let tail = match self.tail_threshold() {
            Ok(t) => t,
            Err(_) => return false,
        };
        let one = BigInt::one();
        (1..=tail).all(|n| self.eval(n) >= one)
    }

    /// First n from which the sandwich b_d n^d / 2 <= R(n) <= 2 b_d n^d is
    /// guaranteed by the tail bound n >= 2 d max|b_i| / b_d.
    fn tail_threshold(&self) -> Result<u64> {
        let d = self.degree() as u64;
        let lead = self.leading();
        let max_low: BigInt = self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap();
        if max_low.is_zero() {
            return Ok(1);
        }
        let bound = (BigInt::from(2 * d) * max_low).div_ceil(lead);
        let bound = bound.max(BigInt::one());
        bound
            .to_u64()
            .filter(|&b| b <= 10_000_000)
            .ok_or_else(|| Error::resource("growth scan bound", "coefficients too large"))
    }

    /// Does b_d n^d / 2 <= R(n) <= 2 b_d n^d hold at this n? Exact integer
    /// arithmetic.
    fn sandwich_holds(&self, n: u64) -> bool {
        let d = self.degree();
        let value = self.eval(n);
        let lead_term = self.leading() * BigInt::from(n).pow(d);
        &lead_term <= &(BigInt::from(2) * &value) && value <= BigInt::from(2) * lead_term
    }
}

/// Constants of the two-sided growth bound c1 n^d <= R(n) <= c2 n^d, valid
/// for every positive integer n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthConstants {
    /// Minimal threshold from which the sandwich with factors 1/2 and 2
    /// around the leading term holds.
    pub n0: u64,
    pub c1: BigRational,
    pub c2: BigRational,
}

/// Compute (n0, c1, c2) constructively.
///
/// n0 is the minimal integer such that b_d n^d / 2 <= R(n) <= 2 b_d n^d for
/// all n >= n0, found by a downward-verified scan from the certified tail
/// threshold. Then with M = max and m = min of R over [1, n0]:
/// c2 = max(M, 2 b_d) and c1 = min(m / n0^d, b_d / 2).
pub fn growth_constants(poly: &IntPolynomial) -> Result<GrowthConstants> {
    let tail = poly.tail_threshold()?;
    let mut n0 = tail;
    while n0 > 1 && poly.sandwich_holds(n0 - 1) {
        n0 -= 1;
    }

    let mut max = poly.eval(1);
    let mut min = max.clone();
    for n in 1..=n0 {
        let v = if n == 1 { max.clone() } else { poly.eval(n) };
        if !v.is_positive() {
            return Err(Error::domain(format!(
                "R({n}) = {v} is not a positive integer"
            )));
        }
        if v > max {
            max = v.clone();
        }
        if v < min {
            min = v;
        }
    }

    let d = poly.degree();
    let lead = poly.leading().clone();
    let two_lead = BigRational::from_integer(&lead * 2);
    let half_lead = BigRational::new(lead, BigInt::from(2));

    let c2 = BigRational::from_integer(max).max(two_lead);
    let c1 = BigRational::new(min, BigInt::from(n0).pow(d)).min(half_lead);
    Ok(GrowthConstants { n0, c1, c2 })
}

/// Horner evaluation of reduced coefficients (ascending) mod m.
pub fn horner_mod(coeffs: &[u64], x: u64, m: u64) -> u64 {
    debug_assert!(m >= 1);
    let x = x % m;
    let mut acc: u64 = 0;
    for &c in coeffs.iter().rev() {
        acc = ((acc as u128 * x as u128 + c as u128) % m as u128) as u64;
    }
    acc
}
