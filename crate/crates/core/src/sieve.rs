//! Segmented smallest-prime-factor sieve and bulk factorization.
//!
//! A [`SmallPrimes`] table up to `√N_max` is built once and shared read-only.
//! Each segment `[base, base + len)` is then factored independently, so segments
//! can be handed to separate workers and merged back in base order.

use crate::error::{Error, Result};

/// Default number of values per sieve segment.
pub const DEFAULT_SEGMENT_LEN: usize = 1 << 20;

/// Factorization `n = p₁^e₁ · … · p_k^e_k` with strictly increasing primes.
/// The empty list is the factorization of 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PrimeFactorization {
    factors: Vec<(u64, u32)>,
}

impl PrimeFactorization {
    /// Builds a factorization from `(prime, exponent)` pairs, checking ordering
    /// and exponents. Primality of the bases is the caller's responsibility.
    pub fn from_factors(factors: Vec<(u64, u32)>) -> Result<Self> {
        for pair in factors.windows(2) {
            if pair[0].0 >= pair[1].0 {
                return Err(Error::domain("primes must be strictly increasing"));
            }
        }
        if factors.iter().any(|&(p, e)| p < 2 || e == 0) {
            return Err(Error::domain("prime < 2 or zero exponent"));
        }
        Ok(PrimeFactorization { factors })
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    /// True when every exponent is 1 (the empty product counts as square-free).
    pub fn is_square_free(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    /// Recomposes the integer, or `None` on `u64` overflow.
    pub fn value(&self) -> Option<u64> {
        self.factors.iter().try_fold(1u64, |acc, &(p, e)| {
            p.checked_pow(e).and_then(|pe| acc.checked_mul(pe))
        })
    }
}

/// All primes up to `limit`, shared by every segment.
#[derive(Debug, Clone)]
pub struct SmallPrimes {
    limit: u64,
    primes: Vec<u32>,
}

impl SmallPrimes {
    /// Primes `≤ limit` by a plain sieve of Eratosthenes.
    pub fn up_to(limit: u64) -> Self {
        assert!(limit <= u32::MAX as u64, "small-prime limit must fit in 32 bits");
        let size = limit as usize + 1;
        let mut composite = vec![false; size.max(2)];
        let mut primes = Vec::new();
        for i in 2..size {
            if composite[i] {
                continue;
            }
            primes.push(i as u32);
            let mut j = i * i;
            while j < size {
                composite[j] = true;
                j += i;
            }
        }
        SmallPrimes { limit, primes }
    }

    /// Enough primes to factor every value `≤ max_value`.
    pub fn for_max(max_value: u64) -> Self {
        Self::up_to(max_value.isqrt().max(2))
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    /// Whether trial division by this table fully factors `n`.
    pub fn covers(&self, n: u64) -> bool {
        n.isqrt() <= self.limit
    }

    /// Trial division by the table. Fails if `n` is not covered.
    pub fn factorize(&self, n: u64) -> Result<PrimeFactorization> {
        if n == 0 {
            return Err(Error::domain("0 has no prime factorization"));
        }
        if !self.covers(n) {
            return Err(Error::range(format!(
                "{n} exceeds the square of the small-prime limit {}",
                self.limit
            )));
        }
        Ok(trial_division(n, self.primes.iter().map(|&p| p as u64)))
    }
}

fn trial_division(mut n: u64, candidates: impl Iterator<Item = u64>) -> PrimeFactorization {
    let mut factors = Vec::new();
    for p in candidates {
        if p.saturating_mul(p) > n {
            break;
        }
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            factors.push((p, e));
        }
    }
    if n > 1 {
        factors.push((n, 1));
    }
    PrimeFactorization { factors }
}

/// Factorizes a single integer by trial division over 2 and the odd numbers.
///
/// This is the fallback for one-off queries outside any sieved range; it is
/// exact for all of `u64` but slow when `n` has two prime factors near 2³².
pub fn factorize(n: u64) -> Result<PrimeFactorization> {
    if n == 0 {
        return Err(Error::domain("0 has no prime factorization"));
    }
    let candidates = std::iter::once(2u64).chain((3..=u32::MAX as u64).step_by(2));
    Ok(trial_division(n, candidates))
}

/// Smallest-prime-factor table for the values `[base, base + len)`.
#[derive(Debug, Clone)]
pub struct SieveSegment {
    base: u64,
    // 0 marks a value with no small-prime divisor, i.e. a prime.
    spf: Vec<u32>,
}

fn check_span(base: u64, len: usize, primes: &SmallPrimes) -> Result<u64> {
    if len == 0 {
        return Err(Error::domain("segment length must be positive"));
    }
    let last = base
        .checked_add(len as u64 - 1)
        .filter(|&l| l < u64::MAX)
        .ok_or_else(|| Error::range(format!("segment {base}+{len} overflows u64")))?;
    if !primes.covers(last) {
        return Err(Error::range(format!(
            "small primes up to {} do not cover {last}",
            primes.limit()
        )));
    }
    Ok(last)
}

/// Sieves the smallest prime factor of every value in `[base, base + len)`.
pub fn build_segment(base: u64, len: usize, primes: &SmallPrimes) -> Result<SieveSegment> {
    if base < 2 {
        return Err(Error::domain("segment base must be at least 2"));
    }
    let last = check_span(base, len, primes)?;
    let mut spf = vec![0u32; len];
    for &p in primes.primes() {
        let p64 = p as u64;
        if p64 * p64 > last {
            break;
        }
        // The prime itself stays marked 0.
        let first = (base.div_ceil(p64) * p64).max(p64 * p64);
        let mut v = first;
        while v <= last {
            let slot = &mut spf[(v - base) as usize];
            if *slot == 0 {
                *slot = p;
            }
            v += p64;
        }
    }
    Ok(SieveSegment { base, spf })
}

impl SieveSegment {
    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn len(&self) -> usize {
        self.spf.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spf.is_empty()
    }

    pub fn contains(&self, n: u64) -> bool {
        n >= self.base && n - self.base < self.spf.len() as u64
    }

    /// Smallest prime factor of `n`, or `None` if `n` lies outside the segment.
    pub fn spf(&self, n: u64) -> Option<u64> {
        if !self.contains(n) {
            return None;
        }
        match self.spf[(n - self.base) as usize] {
            0 => Some(n),
            p => Some(p as u64),
        }
    }

    /// Factorizes `n` starting from its sieved smallest prime factor; the
    /// cofactor is finished by trial division over the larger small primes.
    pub fn factorize(&self, n: u64, primes: &SmallPrimes) -> Result<PrimeFactorization> {
        let p = self.spf(n).ok_or_else(|| {
            Error::range(format!(
                "{n} outside segment [{}, {})",
                self.base,
                self.base + self.spf.len() as u64
            ))
        })?;
        let mut m = n;
        let mut e = 0;
        while m.is_multiple_of(p) {
            m /= p;
            e += 1;
        }
        let start = primes.primes().partition_point(|&q| (q as u64) <= p);
        let rest = trial_division(m, primes.primes()[start..].iter().map(|&q| q as u64));
        let mut factors = Vec::with_capacity(rest.factors.len() + 1);
        factors.push((p, e));
        factors.extend(rest.factors);
        Ok(PrimeFactorization { factors })
    }
}

/// Fully factors every value in `[base, base + len)` in one sieve pass.
///
/// `visit(offset, prime, exponent)` is called so that, for each offset, the
/// primes arrive in strictly increasing order. Offsets whose value is 1 are
/// never visited. `base` may be 1.
pub fn factor_segment<F>(base: u64, len: usize, primes: &SmallPrimes, mut visit: F) -> Result<()>
where
    F: FnMut(usize, u64, u32),
{
    if base == 0 {
        return Err(Error::domain("0 has no prime factorization"));
    }
    let last = check_span(base, len, primes)?;
    let mut rem: Vec<u64> = (base..=last).collect();
    for &p in primes.primes() {
        let p64 = p as u64;
        if p64 * p64 > last {
            // Larger primes divide a value only as its single largest factor,
            // which the cofactor pass below picks up.
            break;
        }
        let mut v = base.div_ceil(p64) * p64;
        while v <= last {
            let idx = (v - base) as usize;
            let r = &mut rem[idx];
            *r /= p64;
            let mut e = 1;
            while (*r).is_multiple_of(p64) {
                *r /= p64;
                e += 1;
            }
            visit(idx, p64, e);
            v += p64;
        }
    }
    for (idx, &r) in rem.iter().enumerate() {
        if r > 1 {
            visit(idx, r, 1);
        }
    }
    Ok(())
}

/// Convenience wrapper over [`factor_segment`] collecting every factorization.
pub fn factor_range(base: u64, len: usize, primes: &SmallPrimes) -> Result<Vec<PrimeFactorization>> {
    let mut out = vec![PrimeFactorization::default(); len];
    factor_segment(base, len, primes, |i, p, e| out[i].factors.push((p, e)))?;
    Ok(out)
}
