//! Segmented sieve of Eratosthenes. Peak memory is one segment plus the base
//! primes up to sqrt(hi), independent of hi itself.

use crate::error::{Error, Result};

/// Memory budget for segmented runs.
#[derive(Debug, Clone)]
pub struct SieveConfig {
    /// Numbers per segment.
    pub segment_size: usize,
    /// Hard cap on the number of segments a single call may walk.
    pub max_segments: u64,
}

impl Default for SieveConfig {
    fn default() -> Self {
        Self {
            segment_size: 1 << 20,
            max_segments: 16 * 1024,
        }
    }
}

/// Plain sieve up to `limit` inclusive; used for base primes and small scans.
pub fn simple_sieve(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for i in 2..=limit {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

fn walk_segments(lo: u64, hi: u64, cfg: &SieveConfig, mut emit: impl FnMut(u64)) -> Result<()> {
    if lo < 2 || lo > hi {
        return Err(Error::precondition(format!(
            "sieve range [{lo}, {hi}] requires 2 <= lo <= hi"
        )));
    }
    let span = hi - lo + 1;
    let seg = cfg.segment_size as u64;
    let segments = span.div_ceil(seg);
    if segments > cfg.max_segments {
        return Err(Error::resource(
            format!("sieving [{lo}, {hi}] needs {segments} segments"),
            format!(
                "raise max_segments above {} or use a larger segment_size",
                cfg.max_segments
            ),
        ));
    }

    let sqrt_hi = hi.isqrt();
    let base = simple_sieve(sqrt_hi);
    let mut mark = vec![false; cfg.segment_size];

    let mut seg_lo = lo;
    while seg_lo <= hi {
        let seg_hi = (seg_lo + seg - 1).min(hi);
        let len = (seg_hi - seg_lo + 1) as usize;
        mark[..len].fill(false);
        for &p in &base {
            if p * p > seg_hi {
                break;
            }
            let mut first = seg_lo.div_ceil(p) * p;
            if first < p * p {
                first = p * p;
            }
            let mut j = first;
            while j <= seg_hi {
                mark[(j - seg_lo) as usize] = true;
                j += p;
            }
        }
        for (off, &is_comp) in mark[..len].iter().enumerate() {
            if !is_comp {
                let n = seg_lo + off as u64;
                if n >= 2 {
                    emit(n);
                }
            }
        }
        if seg_hi == hi {
            break;
        }
        seg_lo = seg_hi + 1;
    }
    Ok(())
}

/// Primes in [lo, hi], ascending, under the default budget.
pub fn sieve_primes(lo: u64, hi: u64) -> Result<Vec<u64>> {
    sieve_primes_with(lo, hi, &SieveConfig::default())
}

/// Primes in [lo, hi], ascending, under an explicit budget.
pub fn sieve_primes_with(lo: u64, hi: u64, cfg: &SieveConfig) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    walk_segments(lo, hi, cfg, |p| out.push(p))?;
    Ok(out)
}

/// pi(hi): number of primes up to hi.
pub fn count_primes(hi: u64) -> Result<u64> {
    if hi < 2 {
        return Ok(0);
    }
    let mut count = 0;
    walk_segments(2, hi, &SieveConfig::default(), |_| count += 1)?;
    Ok(count)
}
